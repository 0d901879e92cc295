#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "app/commands.hpp"
#include "app/config.hpp"

using namespace coulomb;
using namespace coulomb::app;

namespace {

namespace fs = std::filesystem;

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "coulomb_cli_test";
  fs::create_directories(d);
  return d;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "coulomb");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(int(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("fekete solve for two points") {
  const auto out = (scratch() / "two.json").string();
  REQUIRE(run({"fekete", "solve", "--potential", "ginibre", "--n", "2", "--seed", "1", "--out", out}) == 0);
  const Json j = Json::parse(slurp(out));
  const auto& p = j["result"]["points"];
  const double d = std::hypot(p[0][0].get<double>() - p[1][0].get<double>(), p[0][1].get<double>() - p[1][1].get<double>());
  CHECK(std::abs(d - 1.0) <= 1e-5);
  CHECK(j["seed"] == 1);
  CHECK(j["config_hash"] == config_hash(j["config"]));
  CHECK(j["conventions"].contains("laplacian"));
}

TEST_CASE("same config twice gives identical bytes") {
  const auto a = (scratch() / "a.json").string(), b = (scratch() / "b.json").string();
  REQUIRE(run({"fekete", "solve", "--n", "30", "--seed", "5", "--out", a}) == 0);
  const auto cfg = (scratch() / "cfg.json").string();
  std::ofstream(cfg) << R"({"n": 30, "seed": 5, "out": ")" << b << "\"}";
  REQUIRE(run({"fekete", "solve", "--config", cfg}) == 0);
  CHECK(slurp(a) == slurp(b));

  const auto t1 = (scratch() / "t1.json").string(), t2 = (scratch() / "t2.json").string();
  REQUIRE(run({"traces", "--n", "40", "--lambda", "3", "--out", t1}) == 0);
  REQUIRE(run({"traces", "--n", "40", "--lambda", "3", "--out", t2}) == 0);
  CHECK(slurp(t1) == slurp(t2));
}

TEST_CASE("invalid configs exit nonzero") {
  CHECK(run({"fekete", "solve", "--potential", "nope"}) == 1);
  CHECK(run({"fekete", "solve", "--n", "abc"}) == 1);
  CHECK(run({"fekete", "solve", "--n", "0"}) == 1);
  CHECK(run({"kernel", "profile", "--range", "3:1:0.1"}) == 1);
  CHECK(run({"density", "scan", "--plan", "sideways"}) == 1);
  CHECK(run({"ward", "check", "--spacing", "0"}) == 1);
  const auto bad = (scratch() / "bad.json").string();
  std::ofstream(bad) << R"({"n": "many"})";
  CHECK(run({"fekete", "solve", "--config", bad}) == 1);
  std::ofstream(bad) << R"({"unknown": 1})";
  CHECK(run({"fekete", "solve", "--config", bad}) == 1);
  CHECK(run({"no-such-command"}) != 0);
}

TEST_CASE("csv artifacts carry hash and seed") {
  const auto out = (scratch() / "profile.csv").string();
  REQUIRE(run({"kernel", "profile", "--n", "100", "--range", "-1:1:0.5", "--out", out}) == 0);
  const std::string s = slurp(out);
  CHECK(s.find("config_hash=") != std::string::npos);
  CHECK(s.find("seed=0") != std::string::npos);
  CHECK(s.find("x,R_n\n") != std::string::npos);
  std::istringstream is(s);
  std::string line;
  int rows = 0;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#' && line[0] != 'x') ++rows;
  CHECK(rows == 5);
}

TEST_CASE("config hashing and parsing") {
  Json cfg = {{"potential", "ginibre"}, {"n", 10}, {"seed", 3}, {"out", "x.json"}};
  Json moved = cfg;
  moved["out"] = "elsewhere.json";
  CHECK(config_hash(cfg) == config_hash(moved));
  moved["n"] = 11;
  CHECK(config_hash(cfg) != config_hash(moved));
  // serialization round trip
  CHECK(Json::parse(cfg.dump()) == cfg);
  CHECK(config_hash(Json::parse(cfg.dump())) == config_hash(cfg));

  CHECK(parse_range("-3:3:0.05").size() == 121);
  CHECK(parse_range("0:1:0.5") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(parse_complex("1,-2") == Complex(1, -2));
  CHECK(parse_real("inf") == kInf);
  CHECK(parse_potential("ellipse:0.5").kind() == PotentialKind::Ellipse);
  CHECK(parse_potential("ml:2").exponent() == 2.0);
  CHECK_THROWS_AS(parse_potential("ellipse"), ConfigurationError);
}
