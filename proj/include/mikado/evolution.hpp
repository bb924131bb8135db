#ifndef MIKADO_EVOLUTION_HPP
#define MIKADO_EVOLUTION_HPP

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mikado/principal.hpp"

namespace mikado
{

class BlowupError : public std::runtime_error
{
public:
  BlowupError(double t, double dt, long step);
  double t, dt;
  long step;
};

// N(t, u) in du/dt = Lap u + N(t, u).
using Nonlinearity = std::function<Field(double, const Field &)>;

// One integrating-factor RK4 step; the heat factor is exact per mode. If dissipation is given it
// receives the step increment of 2 int |grad u|^2 dt from the same stages.
Field if_rk4_step(const Field &u, double t, double dt, const Nonlinearity &N, double *dissipation = nullptr);

Field nse_nonlinearity(const Field &u);  // -P div(u (x) u)
Field nse_step(const Field &u, double dt, double *dissipation = nullptr);
// Convective step limit cfl * h / |u|_inf, h the grid spacing.
double cfl_dt(const RealField &u, double cfl);

struct EnergyRow
{
  double t, energy, dissipated;
};

// Stepping with fixed dt from 0 to t1 (last step shortened); energy = |u|_2^2.
Field nse_evolve(const Field &u0, double t1, double dt, std::vector<EnergyRow> *rows = nullptr);

// One step of dt w = Lap w - 2 P div(v (.) w) around the branch.
Field linearized_step(const Field &w, double t, double dt, const BranchState &branch);
// S(t1, t0) a by steps of at most dt_max.
Field linearized_flow(const Field &a, double t0, double t1, double dt_max, const BranchState &branch);

enum class SourceMode
{
  identity,  // P div F = -(dt v - Lap v + P div(v (x) v))
  residual,  // P div F from the assembled terms
  none,
};

struct PerturbationOptions
{
  SourceMode source = SourceMode::identity;
  double t_start = -1.0;  // < 0: N_K^-2 / 100
  double t_end = 1.0;
  double cfl = 0.8;
  double rate_fraction = 0.25;      // dt <= rate_fraction / fastest live rate
  double dt_max = 2e-2;
  long max_steps = 200000;
  double escape_ratio = 1.0;        // escape once X(w) > escape_ratio * max X(v)
  int record_per_decade = 8;
  std::vector<double> residual_times;  // NSE residual of v + w checked here
  std::vector<double> snapshot_times;  // w kept here
  bool verbose = false;
};

struct XRow
{
  double t;
  double w_inf, w_grad, w_x;  // |w|_inf, |grad w|_{C^kappa}, t^{1/2-a/2}|w| + t^{1-a/2}|grad w|
  double v_x;
  double w_cminus;            // |w|_{C^{-1+a/2}}
  double w_l2;
};

struct ResidualSample
{
  double t, defect, reference, relative, scale_relative;
};

struct PerturbationRun
{
  int parity = 1;
  std::string source;
  double t_start = 0.0, t_end = 0.0;
  long steps = 0;
  std::vector<XRow> rows;
  std::vector<ResidualSample> residuals;
  std::map<double, Field> snapshots;
  double x_w = 0.0, x_v = 0.0;  // sup over rows
  double ratio() const { return x_v > 0.0 ? x_w / x_v : 0.0; }
  std::string csv() const;
};

// Carries the run up to the escape.
class EscapeError : public std::runtime_error
{
public:
  EscapeError(double t, double x_norm, double radius, PerturbationRun partial);
  double t, x_norm, radius;
  std::shared_ptr<const PerturbationRun> partial;
};

double default_t_start(const DataSet &data);
PerturbationRun solve_perturbation(const BranchState &branch, const PerturbationOptions &opt = {});

struct PicardCheck
{
  int steps = 0;         // PDE steps in the window
  int iterations = 0;
  double dt = 0.0;
  double t_end = 0.0;
  double increment = 0.0;  // last Picard change, relative
  double relative = 0.0;   // |w_picard - w_pde| / |w_pde|
};

// Mild formulation iterated on a window of `steps` PDE steps after t_start.
PicardCheck picard_crosscheck(const BranchState &branch, const PerturbationOptions &opt, int steps = 3,
                              int max_iterations = 40);

struct DistinctnessRow
{
  double t, D, Dv;  // |u1 - u2|_inf, |v1 - v2|_inf
};

struct DistinctnessReport
{
  double t0 = 0.0, N0 = 0.0;
  std::vector<DistinctnessRow> rows;
  double D0 = 0.0;          // |v1(0) - v2(0)|_inf
  double U0_sup = 0.0;
  double D_t0 = 0.0;        // |v1(t0) - v2(t0)|_inf
  double Du_t0 = 0.0;       // |u1(t0) - u2(t0)|_inf, if t0 was kept
  double vp0_t0 = 0.0;      // |v_0^p(t0)|_inf
  double heat_tail = 0.0;   // sum_{k>=1} |v_k(t0)|_inf
  double cascade_sum = 0.0; // sum_k |vbar_k(t0)|_inf
  double w1_t0 = 0.0, w2_t0 = 0.0;
  double constant() const { return D_t0 / N0; }
  std::string csv() const;
  std::string to_json() const;
};

DistinctnessReport distinctness_report(const BranchState &b1, const BranchState &b2, const PerturbationRun *run1,
                                       const PerturbationRun *run2, const std::vector<double> &tgrid);

struct AttainmentRow
{
  double t, distance;  // |v(t) - U0|_{W^{-1,4}}
};

std::vector<AttainmentRow> data_attainment(const BranchState &b, const std::vector<double> &tgrid);

}  // namespace mikado

#endif  // MIKADO_EVOLUTION_HPP
