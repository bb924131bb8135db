#ifndef MIKADO_NORMS_HPP
#define MIKADO_NORMS_HPP

#include <functional>
#include <string>
#include <vector>

#include "mikado/field.hpp"

namespace mikado
{

struct NormReport
{
  std::string name;
  double value = 0.0;
  std::string method;

  std::string to_json() const;
};

// sup_N N^s |P_N f|_inf over the dyadic bands of the grid.
double holder_zygmund(const Field &f, double s);
// |grad f|_{C^kappa} through the same band characterization: sup_N N^kappa |P_N grad f|_inf.
double gradient_holder(const Field &f, double kappa);
// | |grad|^{-1} f |_{L^p}, normalized measure.
double sobolev_neg(const Field &f, double p);

//
// Carleson functional sup_R sup_x0 (R^-3 int_0^{R^2} int_{B(x0,R)} |u(t)|^2 dx dt)^{1/2} with R in
// {2pi 2^-m}, x0 on an R/4 lattice and 8 log-uniform nodes per factor-4 range of t. The ball
// carries a one-cell linear edge; images on the torus are summed.
//
struct CarlesonOptions
{
  int radii = 5;            // m = 0 .. radii-1
  int nodes_per_range = 8;
  double t_floor_cells = 0.25;  // t_min = (t_floor_cells h)^2
};

double carleson_sup(const GridPtr &grid, const std::function<RealField(double)> &u,
                    const CarlesonOptions &opt = {});
double bmo_minus_one(const Field &f, const CarlesonOptions &opt = {});

struct KTReport
{
  double sup_term = 0.0;       // sup_t t^{1/2} |u(t)|_inf
  double carleson_term = 0.0;
  double total() const { return sup_term + carleson_term; }
};
KTReport kt_path_norm(const GridPtr &grid, const std::function<Field(double)> &u, const std::vector<double> &tgrid,
                      const CarlesonOptions &opt = {});

struct HarnessRow
{
  double parameter = 0.0;
  double ratio = 0.0;
};

struct HarnessReport
{
  std::string name;
  std::string parameter_name;
  std::vector<HarnessRow> rows;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  bool bounded() const { return max_ratio <= 10.0 * median_ratio && median_ratio > 0.0; }
  std::string csv() const;
};

// name in {bernstein, heat-decay, stationary-phase, improved-holder}
HarnessReport inequality_harness(const std::string &name, int grid_n, unsigned long long seed);

}  // namespace mikado

#endif  // MIKADO_NORMS_HPP
