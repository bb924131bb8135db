#ifndef MIKADO_CONFIG_HPP
#define MIKADO_CONFIG_HPP

#include <string>

#include "mikado/params.hpp"

namespace mikado
{

// Resolved configuration of a pipeline run. Text form is TOML-style `key = value` lines.
struct RunConfig
{
  ParameterSet params;
  int grid = 128;
  double t_min_factor = 0.25;  // t-grid starts at t_min_factor * N_K^-2
  double t_max = 1.0;
  int per_decade = 16;
  std::string out = "out";
  unsigned long long seed = 1;
  std::string parity = "both";
  bool picard_crosscheck = true;
  bool all_terms = false;  // residual profile per term as well as the total
  double t_end = 1.0;
  double escape_ratio = 0.2;
  double cfl = 0.8;
  long max_steps = 200000;

  double t_min() const;
};

RunConfig parse_config(const std::string &text, RunConfig base = {});
RunConfig load_config(const std::string &path, RunConfig base = {});
// Canonical text; parse_config(to_text(c)) reproduces c exactly.
std::string to_text(const RunConfig &c);
// 16 hex digits of FNV-1a over the canonical text.
std::string config_hash(const RunConfig &c);

}  // namespace mikado

#endif  // MIKADO_CONFIG_HPP
