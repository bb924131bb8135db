#include <cstring>
#include <iostream>

#include "mikado/checks.hpp"

using namespace mikado;

int main(int argc, char **argv)
{
  RunConfig config;
  config.out = "acceptance-output";
  for (int i = 1; i + 1 < argc; ++i)
  {
    if (std::strcmp(argv[i], "--out") == 0)
    {
      config.out = argv[i + 1];
    }
  }
  std::cout << "regime: desk-scale, reference ladder M = (1, 2, 4), N = (3, 12, 48), n = " << config.grid << "\n"
            << "config hash: " << config_hash(config) << "\n"
            << std::flush;
  CheckContext ctx(config);
  std::vector<CheckResult> results;
  int failed = 0;
  for (int id = 1; id <= 11; ++id)
  {
    results.push_back(run_check(id, ctx));
    std::cout << results.back().line() << "\n" << std::flush;
    failed += results.back().passed ? 0 : 1;
  }
  const std::string path = ctx.write("acceptance", "json", summary_json("acceptance", config, results, ctx.artifacts()));
  std::cout << "summary: " << path << "\n" << (11 - failed) << "/11 criteria pass\n";
  return failed ? 1 : 0;
}
