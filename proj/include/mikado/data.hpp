#ifndef MIKADO_DATA_HPP
#define MIKADO_DATA_HPP

#include <array>
#include <string>
#include <vector>

#include "mikado/field.hpp"
#include "mikado/geometry.hpp"
#include "mikado/params.hpp"

namespace mikado
{

class DataError : public std::runtime_error
{
public:
  explicit DataError(const std::string &what) : std::runtime_error(what) {}
};

//
// One level of the recursion. For an extension level only the coefficients a_j and the
// normalizers are present.
//
struct DataLevel
{
  int k = 0;
  long M = 1;
  long N = 1;
  bool extension = false;
  double sigma = 0.0;  // Gaussian width of phi_k
  MikadoLevel pipes;
  std::array<RealField, 6> a;
  // s_j = phi_k * (a_j q_j) N^-2, so that phi_k * (a_j Psi0_j) = s_j theta_j.
  std::array<Field, 6> s;
  Field psi0;
  double d_psi0_prev_sup = 0.0;
  double d_psi0_sup = 0.0;
  double nash_radius = 0.0;  // max_x |c0 D psi0_{k-1} / sup|_F

  // phi_k * (a_j Psi0_j) as a vector field.
  Field potential(const NashFrame &frame, int j) const;
};

DataLevel build_base_level(const GridPtr &grid, const ParameterSet &params, const PipeFamily &family);
// Level k from level k-1; extension builds only a_j with continuum normalizers.
DataLevel build_level(const GridPtr &grid, const ParameterSet &params, const PipeFamily &family,
                      const DataLevel &prev, bool extension = false);

// U0 = sum_k curl curl psi0_k over the non-extension levels.
Field assemble_data(const std::vector<DataLevel> &levels);

struct DataSet
{
  ParameterSet params;
  PipeFamily family;
  std::vector<DataLevel> levels;  // 0..K, then the extension level K+1
  Field U0;

  int K() const { return params.K; }
};

DataSet build_data(const GridPtr &grid, const ParameterSet &params);

struct LevelDiagnostics
{
  int k = 0;
  double psi_sup = 0.0;
  double d_psi_sup = 0.0;
  double iterative_ratio = 0.0;  // |psi0_k| N_k / |D psi0_{k-1}|^{1/2}
  std::array<double, 3> derivative_ratio{};  // |grad^m psi0_k| / N_k^{m-1}
  double a_ratio = 0.0;  // max_j |a_j| / (N_k |D psi0_{k-1}|^{1/2})
  double a_over_N = 0.0;
  double nash_radius = 0.0;
  double curlcurl_l1 = 0.0;
  double support_leak = 0.0;  // max |a_j| outside Omega~_{k-1}
  std::array<double, 6> A{};
};

struct RecursionReport
{
  std::vector<LevelDiagnostics> levels;
  double C1 = 0.0;  // max iterative ratio
  double C2 = 0.0;  // smallest constant fitting the two-sided bound on |D psi0_k|
  double u0_div_rel = 0.0;
  double u0_mean = 0.0;
  double u0_route_rel = 0.0;  // U0 against sum_k div D psi0_k
  bool strict_mode = false;

  std::string to_json() const;
};

RecursionReport recursion_diagnostics(const DataSet &data);

// Smallest C >= 1 with C^-2 (C^2 S_0)^{2^-k} <= S_k <= C^2 (C^2 S_0)^{2^-k} for all k.
double fit_sandwich_constant(const std::vector<double> &S);

}  // namespace mikado

#endif  // MIKADO_DATA_HPP
