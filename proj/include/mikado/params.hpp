#ifndef MIKADO_PARAMS_HPP
#define MIKADO_PARAMS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mikado
{

class ConfigError : public std::runtime_error
{
public:
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

//
// Construction parameters. With strict_mode off the scale ladder is given by hand
// (M, N list levels 0..K followed by one extension level K+1 that only feeds the
// cascade coefficients of level K).
//
struct ParameterSet
{
  double A = 2.0;
  double b = 6.0;
  double gamma = 2.0;
  double alpha = 0.01;
  double kappa = 0.05;
  double delta = 1.0 / 20.0;
  double delta0 = 0.0;  // 0 selects the placement search result
  int K = 1;
  bool strict_mode = false;
  std::vector<long> M = {1, 2, 4};
  std::vector<long> N = {3, 12, 48};
  double mollifier_fraction = 1.0 / 3.0;  // Gaussian width / mollifier length scale

  // Scales for k = 0..K+1.
  std::vector<long> scales_M() const;
  std::vector<long> scales_N() const;

  double mollifier_scale(int k) const;
  double mollifier_sigma(int k) const { return mollifier_fraction * mollifier_scale(k); }

  // Violated constraints, empty when valid. max_eta is max_j |eta_j|.
  std::vector<std::string> violations(int grid_n, double dealias_fraction, double max_eta) const;
  void validate(int grid_n, double dealias_fraction, double max_eta) const;
};

}  // namespace mikado

#endif  // MIKADO_PARAMS_HPP
