#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "mikado/cli.hpp"
#include "mikado/config.hpp"

using namespace mikado;
namespace fs = std::filesystem;

namespace
{

int run(const std::vector<std::string> &args, std::string *out = nullptr, std::string *err = nullptr)
{
  std::ostringstream o, e;
  const int status = run_cli(args, o, e);
  if (out)
  {
    *out = o.str();
  }
  if (err)
  {
    *err = e.str();
  }
  return status;
}

std::string slurp(const fs::path &p)
{
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config text round trip is exact and the hash is stable")
{
  RunConfig c;
  c.params.alpha = 0.1 / 3.0;
  c.params.mollifier_fraction = 1.0 / 7.0;
  c.t_max = 0.7;
  c.parity = "2";
  c.seed = 12345;
  c.params.M = {1, 3, 9};
  const RunConfig r = parse_config(to_text(c));
  CHECK(r.params.alpha == c.params.alpha);
  CHECK(r.params.mollifier_fraction == c.params.mollifier_fraction);
  CHECK(r.params.M == c.params.M);
  CHECK(r.parity == "2");
  CHECK(r.seed == 12345);
  CHECK(to_text(r) == to_text(c));
  CHECK(config_hash(r) == config_hash(c));
  CHECK(config_hash(c).size() == 16);

  RunConfig moved = c;
  moved.out = "elsewhere";
  CHECK(config_hash(moved) == config_hash(c));
  moved.params.alpha = 0.02;
  CHECK(config_hash(moved) != config_hash(c));
}

TEST_CASE("config parser accepts comments and rejects malformed input")
{
  const RunConfig c = parse_config("# ladder\nM = [1, 2, 4]  # levels\nN = [3, 12, 48]\ngrid = 64\nout = \"x y\"\n");
  CHECK(c.grid == 64);
  CHECK(c.out == "x y");
  CHECK(c.params.N == std::vector<long>{3, 12, 48});
  CHECK_THROWS_AS(parse_config("no_such_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid = twelve\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("parity = \"3\"\n"), ConfigError);
}

TEST_CASE("unresolvable ladder exits with status 2 and names the violation")
{
  const fs::path dir = fs::temp_directory_path() / "mikado-cli-resolve";
  fs::create_directories(dir);
  const fs::path cfg = dir / "ladder.toml";
  std::ofstream(cfg) << "M = [2, 8, 32]\nN = [8, 64, 256]\n";
  std::string out, err;
  const int status = run({"--config", cfg.string(), "--out", dir.string(), "build-data"}, &out, &err);
  CHECK(status == 2);
  CHECK(out.find("resolvability") != std::string::npos);
  CHECK(err.find("resolvability") != std::string::npos);
  const std::string line = out.substr(out.find('{'));
  const auto j = nlohmann::json::parse(line);
  CHECK(j["status"] == 2);
}

TEST_CASE("bad arguments exit with status 2")
{
  CHECK(run({}) == 2);
  CHECK(run({"frobnicate"}) == 2);
  CHECK(run({"verify", "--suite", "everything"}) == 2);
  CHECK(run({"--parity", "3", "build-data"}) == 2);
}

TEST_CASE("inequalities suite writes artifacts and deterministic summaries")
{
  const fs::path dir = fs::temp_directory_path() / "mikado-cli-suite";
  fs::remove_all(dir);
  std::string out, err;
  const std::vector<std::string> args = {"--out", dir.string(), "--seed", "7", "verify", "--suite", "inequalities"};
  REQUIRE(run(args, &out, &err) == 0);
  CHECK(out.find("regime: desk-scale") != std::string::npos);
  CHECK(out.find("PASS [11]") != std::string::npos);
  std::vector<fs::path> csvs, jsons;
  for (const auto &e : fs::directory_iterator(dir))
  {
    (e.path().extension() == ".csv" ? csvs : jsons).push_back(e.path());
  }
  CHECK(csvs.size() == 4);
  REQUIRE(jsons.size() == 1);
  const std::string first = slurp(jsons[0]);
  const auto j = nlohmann::json::parse(first);
  CHECK(j["regime"] == "desk-scale");
  CHECK(j["checks"].size() == 1);
  CHECK(j["checks"][0]["passed"] == true);

  std::vector<std::string> csv_first;
  for (const auto &p : csvs)
  {
    csv_first.push_back(slurp(p));
  }
  REQUIRE(run(args, &out, &err) == 0);
  const std::regex stamp("\"timestamp\": *\"[^\"]*\"");
  CHECK(std::regex_replace(slurp(jsons[0]), stamp, "") == std::regex_replace(first, stamp, ""));
  for (std::size_t i = 0; i < csvs.size(); ++i)
  {
    CHECK(slurp(csvs[i]) == csv_first[i]);
  }
}
