#include <iostream>

#include "karc/cli.hpp"

int main(int argc, char** argv) { return karc::run_cli(argc, argv, std::cout, std::cerr); }
