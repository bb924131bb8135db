#ifndef MIKADO_GEOMETRY_HPP
#define MIKADO_GEOMETRY_HPP

#include <array>
#include <string>
#include <vector>

#include "mikado/field.hpp"
#include "mikado/nash.hpp"

namespace mikado
{

//
// The closed curve x0 + theta R mod 2pi Z^3. Distances are exact: the point is projected
// onto the plane orthogonal to theta and matched against the reduced projected lattice.
//
class PipeLine
{
public:
  PipeLine(const IVec3 &theta, const Vec3 &offset);

  double distance(const Vec3 &y) const;
  double length() const { return length_; }
  const IVec3 &theta() const { return theta_; }
  const Vec3 &offset() const { return offset_; }

private:
  IVec3 theta_;
  Vec3 offset_;
  Vec3 e1_, e2_;
  std::array<double, 2> b1_, b2_;
  std::array<double, 4> inv_;
  double length_ = 0.0;
};

// Minimal distance between two non-parallel closed lines on the torus.
double line_distance(const PipeLine &a, const PipeLine &b);

// Smooth radial profile e^{1-1/(1-r^2)} on [0,1), zero beyond.
double pipe_profile(double r);

struct PipeFamily
{
  NashFrame frame;
  std::array<Vec3, 6> offsets;
  std::vector<PipeLine> lines;
  double delta = 0.05;
  double delta0 = 0.0;
  double min_axis_distance = 0.0;
  int halvings = 0;

  double support_separation() const { return min_axis_distance - 2.0 * delta0; }
  double total_length() const;
  // pi delta0^2 sum |l_j| divided by |T^3|
  double volume_fraction() const;
  // phi~_j(y)
  double profile(int j, const Vec3 &y) const;
  // min_j dist(y, l_j)
  double nearest_axis(const Vec3 &y) const;
  std::string to_json() const;
};

class PlacementError : public std::runtime_error
{
public:
  explicit PlacementError(const std::string &what) : std::runtime_error(what) {}
};

// Greedy deterministic sweep over the 2pi/64 sublattice, then dyadic shrinking of delta0.
// A positive delta0_override is checked instead of searched.
PipeFamily place_pipes(const NashFrame &frame, double delta, double delta0_override = 0.0);

//
// Level-k pipes. q_j = phi~_j(M x) sin(N (x - x_j).eta_j) is stored per j; the potential is
// Psi0_{j,k} = N^-2 q_j theta_j.
//
struct MikadoLevel
{
  int k = 0;
  long M = 1;
  long N = 1;
  std::array<RealField, 6> q;
  std::array<double, 6> A{};
  std::array<double, 6> A_grid{};

  bool has_oscillations() const { return !q[0].empty(); }
  RealField potential(const NashFrame &frame, int j) const;
};

// A_j as the exact tube cross-section integral |l_j| (2pi)^-3 int phi(|z|/delta0)^2 sin^2((N/M) z.eta_j + c_j) dz,
// c_j = N (1/M - 1) x_j.eta_j. Valid for tubes thinner than half the projected lattice spacing.
double continuum_normalizer(const PipeFamily &family, int j, long M, long N);

// A_j is the continuum cross-section value; A_grid_j is the grid mean of q_j^2, which
// collapses when a tube holds no off-axis sample. With oscillations=false no samples are stored.
MikadoLevel build_mikado_level(const GridPtr &grid, const PipeFamily &family, int k, long M, long N,
                               bool oscillations = true);

// Pointwise potential, for invariance checks away from the grid.
Vec3 potential_value(const PipeFamily &family, int j, long M, long N, const Vec3 &x);

// s_m(x) = eta(min_j dist(M_m x, l_j)/delta0 - 1): 1 on the delta0 neighbourhood of the
// level-m pipes, 0 off the 2 delta0 neighbourhood.
double level_cutoff(const PipeFamily &family, long M, const Vec3 &x);
// chi_k = prod_{m < k} s_m sampled on the grid.
RealField cutoff(const GridPtr &grid, const PipeFamily &family, const std::vector<long> &M, int k);

// x in the closed region Omega~_k (or Omega_k when inner is set).
bool in_support_region(const PipeFamily &family, const std::vector<long> &M, int k, const Vec3 &x,
                       bool inner = false);

struct VolumeEstimate
{
  int k = 0;
  double monte_carlo = 0.0;  // fraction of |T^3|
  double half_width = 0.0;   // 95% interval half-width, fraction of |T^3|
  double grid_count = 0.0;
  long samples = 0;
};

VolumeEstimate support_volume(const PipeFamily &family, const std::vector<long> &M, int k, int grid_n,
                              long samples, unsigned long long seed);

struct CubeCheck
{
  Vec3 corner;
  double side = 0.0;
  int k = 0;
  int kQ = 0;
  double fraction = 0.0;
  double bound = 0.0;
};

// |Q cap Omega~_k| / |Q| against 2^{-(k-k(Q))} on sampled cubes.
std::vector<CubeCheck> cube_volume_checks(const PipeFamily &family, const std::vector<long> &M, int K,
                                          int cubes, double C0, long samples_per_cube,
                                          unsigned long long seed);

}  // namespace mikado

#endif  // MIKADO_GEOMETRY_HPP
