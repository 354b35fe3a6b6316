#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "karc/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "karc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = karc::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("karc_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> listing(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

void compare_with_golden(const std::string& n, const std::string& name) {
  const fs::path golden = fs::path(KARC_GOLDEN_DIR) / name;
  const fs::path dir = scratch(name);
  const auto r = run({"plot", n, "--dat", dir.string()});
  REQUIRE(r.code == 0);
  REQUIRE(listing(dir) == listing(golden));
  for (const auto& f : listing(golden)) CHECK_MESSAGE(slurp(dir / f) == slurp(golden / f), f);
  fs::remove_all(dir);
}

}  // namespace

TEST_CASE("farey subcommand") {
  const auto r = run({"farey", "4"});
  CHECK(r.code == 0);
  CHECK(r.out == "0/1\n1/4\n1/3\n1/2\n2/3\n3/4\n1/1\n");
  CHECK(run({"farey", "0"}).code == 2);
  CHECK(run({"farey"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("classify subcommand") {
  const auto r = run({"classify", "8"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  int count = 0;
  for (std::string line; std::getline(lines, line);) count += line.empty() ? 0 : 1;
  CHECK(count == 11);
  CHECK(r.out.find("TypeII") != std::string::npos);
}

TEST_CASE("arcs subcommand") {
  const auto dir = scratch("arcs");
  const auto r = run({"arcs", "8", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "arc_1-8_1-7.dat"));
  CHECK(fs::exists(dir / "arc_1-3_3-8.meta"));
  CHECK(slurp(dir / "arc_1-3_3-8.meta").find("heuristic: true") != std::string::npos);
  CHECK(slurp(dir / "arc_1-4_2-7.meta").find("provenance: Power") != std::string::npos);
  CHECK(listing(dir).size() == 22);

  const auto one = scratch("arcs_one");
  CHECK(run({"arcs", "8", "--pair", "1/3,3/8", "--out", one.string()}).code == 0);
  CHECK(fs::exists(one / "arc_1-3_3-8.dat"));
  CHECK(run({"arcs", "8", "--pair", "1/3,1/2", "--out", one.string()}).code == 2);
  CHECK(run({"arcs", "8", "--pair", "nonsense", "--out", one.string()}).code == 2);
  fs::remove_all(dir);
  fs::remove_all(one);
}

TEST_CASE("region subcommand") {
  const auto dir = scratch("region");
  const auto r = run({"region", "8", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "region.json"));
  CHECK(fs::exists(dir / "boundary.dat"));
  CHECK(slurp(dir / "region.json").find("\"n\": 8") != std::string::npos);
  CHECK(run({"region", "2", "--out", dir.string()}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("check subcommand") {
  CHECK(run({"check", "4", "1.1+0i"}).out.find("outside") != std::string::npos);
  CHECK(run({"check", "4", "0"}).out.find("inside") != std::string::npos);
  const auto top = run({"check", "4", "0+1i", "--gamma", "1.05"});
  CHECK(top.code == 0);
  CHECK(top.out.find("boundary") != std::string::npos);
  CHECK(top.out.find("probe: outside at gamma=1.05") != std::string::npos);
  CHECK(top.out.find("not a proof") != std::string::npos);
  const auto whisker = run({"check", "3", "-0.75", "--gamma", "1.01"});
  CHECK(whisker.out.find("probe: inside") != std::string::npos);
  CHECK(whisker.out.find("not extremal") != std::string::npos);
  CHECK(run({"check", "4", "abc"}).code == 2);
  CHECK(run({"check", "4", "0", "--gamma", "1.05"}).code == 2);
}

TEST_CASE("verify subcommand") {
  const auto dir = scratch("verify");
  const auto r = run({"verify", "5", "--trials", "200", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("spectrum subcommand") {
  const auto dir = scratch("spectrum");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "cyc.txt");
    f << "3\n0 1 0\n0 0 1\n1 0 0\n";
  }
  const auto r = run({"spectrum", (dir / "cyc.txt").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("period: 3") != std::string::npos);
  CHECK(r.out.find("irreducible: true") != std::string::npos);
  {
    std::ofstream f(dir / "bad.txt");
    f << "2\n0.7 0.7\n0.5 0.5\n";
  }
  CHECK(run({"spectrum", (dir / "bad.txt").string()}).code == 2);
  CHECK(run({"spectrum", (dir / "missing.txt").string()}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("plot subcommand") {
  const auto dir = scratch("plot");
  fs::create_directories(dir);
  const auto svg = dir / "p.svg";
  CHECK(run({"plot", "8", "--svg", svg.string(), "--upper"}).code == 0);
  const auto text = slurp(svg);
  CHECK(text.rfind("<svg", 0) == 0);
  CHECK(text.find("stroke-dasharray") != std::string::npos);
  CHECK(text.find(">3/8<") != std::string::npos);
  CHECK(run({"plot", "8"}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("output is deterministic") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  REQUIRE(run({"region", "7", "--out", a.string()}).code == 0);
  REQUIRE(run({"region", "7", "--out", b.string()}).code == 0);
  REQUIRE(listing(a) == listing(b));
  for (const auto& f : listing(a)) CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("plot bundles match the stored references") {
  compare_with_golden("8", "plot8");
  compare_with_golden("3", "plot3");
}
