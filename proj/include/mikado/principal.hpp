#ifndef MIKADO_PRINCIPAL_HPP
#define MIKADO_PRINCIPAL_HPP

#include <string>
#include <vector>

#include "mikado/data.hpp"

namespace mikado
{

// Heat part of a level for the j with one value of |eta_j|^2: v_k(t) gains e^{-rate t} curl curl W.
struct HeatGroup
{
  int k = 0;
  int eta_sq = 0;
  double rate = 0.0;
  std::vector<int> members;
  Field W;  // sum_j phi_k * (a_j Psi0_j)
  Field V;  // curl curl W
};

// Cascade part: vbar_k(t) gains e^{-rate t} P div T, T = 1/2 N_{k+1}^-2 sum_j A_{j,k+1} |eta_j|^2 a_{j,k+1}^2 theta_j theta_j.
struct CascadeGroup
{
  int k = 0;
  int eta_sq = 0;
  double rate = 0.0;
  std::vector<int> members;
  Field T;
  Field V;  // P div T
};

//
// Both interleavings share the per-level fields; parity 1 takes the heat part on even k and
// the cascade part on odd k, parity 2 the reverse.
//
class BranchState
{
public:
  BranchState(const DataSet &data, int parity);

  int parity() const { return parity_; }
  int K() const { return data_->K(); }
  const DataSet &data() const { return *data_; }
  bool is_heat(int k) const { return (k % 2 == 0) == (parity_ == 1); }

  Field heat_level(int k, double t) const;     // v_k(t)
  Field cascade_level(int k, double t) const;  // vbar_k(t)
  Field evaluate(double t) const;              // v^(i)(t)
  Field time_derivative(double t) const;
  void evaluate(double t, Field &v, Field &dv) const;  // v and dt v together
  // v_k^p(t) = N_k^2 sum_j |eta_j|^2 a_j Psi_j(t), on samples
  RealField principal_part(int k, double t) const;

  const std::vector<HeatGroup> &heat() const { return heat_; }
  const std::vector<CascadeGroup> &cascade() const { return cascade_; }

private:
  const DataSet *data_;
  int parity_;
  std::vector<HeatGroup> heat_;
  std::vector<CascadeGroup> cascade_;
};

class BranchError : public std::invalid_argument
{
public:
  explicit BranchError(const std::string &what) : std::invalid_argument(what) {}
};

struct ResidualTerms
{
  double t = 0.0;
  int parity = 1;
  Field F1, F2, F3, F4, FT;
  double n3_sup = 0.0;       // max over heat levels of |N_{k,3}|_inf
  double vp_square_sup = 0.0;  // max over heat levels of |v_k^p (x) v_k^p|_inf
  double vv_sup = 0.0;       // |v (x) v|_inf

  Field total() const;
};

// N_{k,1}(t) on samples; level k may be the extension level.
RealField cascade_flux(const DataSet &data, int k, double t);

ResidualTerms residual_terms(const BranchState &b, double t);

struct IdentityCheck
{
  double t = 0.0;
  double defect = 0.0;     // |dt v - Lap v + P div(v (x) v) + P div F|_inf
  double reference = 0.0;  // |P div(v (x) v)|_inf
  double scale = 0.0;      // max(|P div(v (x) v)|, |dt v|, |Lap v|)_inf
  double relative = 0.0;   // defect / scale
  double f3_relative = 0.0;  // |F3|_inf / |v (x) v|_inf
  double n3_relative = 0.0;  // |N_3|_inf / |v^p (x) v^p|_inf
};

IdentityCheck residual_identity(const BranchState &b, double t);

struct EqualDataReport
{
  std::vector<double> heat_rel;     // |v_k(0) - curl curl psi0_k| / |curl curl psi0_k|
  std::vector<double> cascade_rel;  // |vbar_k(0) - curl curl psi0_k| / |curl curl psi0_k|
  double branch_rel = 0.0;          // |v1(0) - v2(0)| / |U0|
  double branch_to_data_rel = 0.0;  // max_i |v_i(0) - U0| / |U0|
};

EqualDataReport equal_data(const BranchState &b1, const BranchState &b2);

// Largest relative divergence of (q_j^2 - A_j) theta_j theta_j over heat levels.
double steady_euler_defect(const DataSet &data);

// Logarithmic t-grid with the given density per decade on [t0, t1].
std::vector<double> log_grid(double t0, double t1, int per_decade);

struct ProfileRow
{
  double t;
  std::string term;
  double linf, c1kappa, weighted;
};

// t^{1-alpha} |F|_inf + t^{3/2-alpha} |grad F|_{C^kappa} per term and total.
std::vector<ProfileRow> residual_smallness(const BranchState &b, const std::vector<double> &tgrid,
                                           bool all_terms = true);
std::string profile_csv(const std::vector<ProfileRow> &rows);

}  // namespace mikado

#endif  // MIKADO_PRINCIPAL_HPP
