#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mikado/geometry.hpp"
#include "mikado/multipliers.hpp"
#include "test_util.hpp"

using namespace mikado;
using namespace testutil;

namespace
{

const PipeFamily &family()
{
  static const PipeFamily fam = place_pipes(default_frame(), 0.05);
  return fam;
}

// Oracle: point-to-line distance in R^3 minimized over translates in a 7^3 block of cells.
double brute_distance(const IVec3 &t, const Vec3 &x0, const Vec3 &y)
{
  const double tn = t[0] * t[0] + t[1] * t[1] + t[2] * t[2];
  double best = 1e300;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -3; c <= 3; ++c)
      {
        const double p[3] = {y[0] - x0[0] + 2 * M_PI * a, y[1] - x0[1] + 2 * M_PI * b, y[2] - x0[2] + 2 * M_PI * c};
        const double s = (p[0] * t[0] + p[1] * t[1] + p[2] * t[2]) / tn;
        double d2 = 0;
        for (int i = 0; i < 3; ++i)
        {
          d2 += (p[i] - s * t[i]) * (p[i] - s * t[i]);
        }
        best = std::min(best, d2);
      }
  return std::sqrt(best);
}

}  // namespace

TEST_CASE("torus distance to a pipe line matches brute force")
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-7.0, 14.0);
  NashFrame f = default_frame();
  for (int j = 0; j < 6; ++j)
  {
    const Vec3 x0 = {0.3 * j, 1.1, 2.0 - 0.2 * j};
    PipeLine line(f.theta[j], x0);
    for (int s = 0; s < 300; ++s)
    {
      const Vec3 y = {u(rng), u(rng), u(rng)};
      REQUIRE(line.distance(y) == doctest::Approx(brute_distance(f.theta[j], x0, y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("line-line distance is bounded above by sampled point distances")
{
  NashFrame f = default_frame();
  PipeLine a(f.theta[1], {0.4, 0.1, 0.0}), b(f.theta[3], {1.0, 2.0, 0.5});
  const double exact = line_distance(a, b);
  double sampled = 1e300;
  for (int s = 0; s < 200000; ++s)
  {
    const double t = 2 * M_PI * s / 200000.0;
    const Vec3 y = {1.0 + t * f.theta[3][0], 2.0 + t * f.theta[3][1], 0.5 + t * f.theta[3][2]};
    sampled = std::min(sampled, a.distance(y));
  }
  CHECK(exact <= sampled + 1e-12);
  CHECK(sampled - exact <= 1e-3);
}

TEST_CASE("pipe placement")
{
  const PipeFamily &fam = family();
  CHECK(fam.delta == 0.05);
  CHECK(fam.support_separation() > 10 * fam.delta0);
  CHECK(fam.volume_fraction() <= fam.delta);
  for (int a = 0; a < 6; ++a)
  {
    for (int b = a + 1; b < 6; ++b)
    {
      CHECK(line_distance(fam.lines[a], fam.lines[b]) >= fam.min_axis_distance - 1e-12);
    }
  }
  PipeFamily again = place_pipes(default_frame(), 0.05);
  CHECK(again.offsets == fam.offsets);
  CHECK(again.delta0 == fam.delta0);
  CHECK_THROWS_AS(place_pipes(default_frame(), 0.05, 0.2), PlacementError);
}

TEST_CASE("Mikado potentials: steady Euler, disjoint supports, invariance")
{
  const PipeFamily &fam = family();
  // n = 128 is the coarsest grid on which every level-0 tube contains samples off its axis.
  auto g = make_grid(128);
  MikadoLevel lvl = build_mikado_level(g, fam, 0, 1, 3);
  double max_rel_div = 0.0, max_rel_div2 = 0.0;
  for (int j = 0; j < 6; ++j)
  {
    REQUIRE(lvl.A_grid[j] > 0.0);
    Field psi = lvl.potential(fam.frame, j).to_spectral();
    Field flux = outer_self(lvl.potential(fam.frame, j)).to_spectral();
    max_rel_div = std::max(max_rel_div, max_coefficient(divergence(psi)) / max_coefficient(psi));
    max_rel_div2 = std::max(max_rel_div2, max_coefficient(divergence(flux)) / max_coefficient(flux));
  }
  CHECK(max_rel_div <= 1e-10);
  CHECK(max_rel_div2 <= 1e-10);
  for (int a = 0; a < 6; ++a)
  {
    for (int b = a + 1; b < 6; ++b)
    {
      double worst = 0.0;
      for (std::size_t p = 0; p < g->real_size(); ++p)
      {
        worst = std::max(worst, std::abs(lvl.q[a].comp(0)[p] * lvl.q[b].comp(0)[p]));
      }
      CHECK(worst == 0.0);
    }
  }
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 2 * M_PI);
  for (int s = 0; s < 200; ++s)
  {
    const int j = s % 6;
    const Vec3 x = {u(rng), u(rng), u(rng)};
    const double shift = u(rng);
    const IVec3 &t = fam.frame.theta[j];
    const Vec3 a = potential_value(fam, j, 2, 8, x);
    const Vec3 b = potential_value(fam, j, 2, 8, {x[0] + shift * t[0], x[1] + shift * t[1], x[2] + shift * t[2]});
    for (int c = 0; c < 3; ++c)
    {
      REQUIRE(std::abs(a[c] - b[c]) <= 1e-12);
    }
  }
  // x = x_j / M lies on a level axis; there phi~ = 1 and the phase is N (1/M - 1) x_j.eta_j.
  for (int j = 0; j < 6; ++j)
  {
    const long M = 2, N = 8;
    const Vec3 &xj = fam.offsets[j];
    const Vec3 x = {xj[0] / M, xj[1] / M, xj[2] / M};
    const IVec3 &e = fam.frame.eta[j];
    const double phase = N * (1.0 / M - 1.0) * (xj[0] * e[0] + xj[1] * e[1] + xj[2] * e[2]);
    const Vec3 v = potential_value(fam, j, M, N, x);
    const double tn = std::sqrt(double(fam.frame.theta[j][0] * fam.frame.theta[j][0] +
                                       fam.frame.theta[j][1] * fam.frame.theta[j][1] +
                                       fam.frame.theta[j][2] * fam.frame.theta[j][2]));
    const double mag = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    CHECK(mag == doctest::Approx(tn * std::abs(std::sin(phase)) / double(N * N)).epsilon(1e-12));
  }
}

namespace
{

// Oracle: |l_j| / (2 pi)^3 times the cross-section integral of phi(|z|/delta0)^2 sin^2((N/M) z.eta + c)
// in polar coordinates (midpoint rule).
double normalizer_oracle(const PipeFamily &fam, int j, long M, long N, double delta0)
{
  const IVec3 &e = fam.frame.eta[j];
  const Vec3 &xj = fam.offsets[j];
  const double en = std::sqrt(double(fam.frame.eta_norm_sq(j)));
  const double c = N * (1.0 / M - 1.0) * (xj[0] * e[0] + xj[1] * e[1] + xj[2] * e[2]);
  const int nr = 2000, na = 720;
  double sum = 0.0;
  for (int i = 0; i < nr; ++i)
  {
    const double rho = (i + 0.5) / nr;
    const double w = pipe_profile(rho) * pipe_profile(rho) * rho;
    for (int a = 0; a < na; ++a)
    {
      const double ang = 2 * M_PI * (a + 0.5) / na;
      const double s = std::sin(double(N) / M * delta0 * en * rho * std::cos(ang) + c);
      sum += w * s * s;
    }
  }
  sum *= delta0 * delta0 * (2 * M_PI / na) / nr;
  return fam.lines[j].length() * sum / std::pow(2 * M_PI, 3);
}

}  // namespace

TEST_CASE("normalizers against the cross-section oracle")
{
  // Fat tubes that the grid resolves; overlap between tubes does not enter A.
  PipeFamily fat = family();
  fat.delta0 = 0.3;
  auto g = make_grid(128);
  for (auto [M, N] : {std::pair<long, long>{1, 12}, std::pair<long, long>{2, 12}})
  {
    MikadoLevel lvl = build_mikado_level(g, fat, 0, M, N);
    MikadoLevel cont = build_mikado_level(g, fat, 0, M, N, false);
    for (int j = 0; j < 6; ++j)
    {
      const double oracle = normalizer_oracle(fat, j, M, N, fat.delta0);
      CHECK(lvl.A_grid[j] == doctest::Approx(oracle).epsilon(2e-3));
      CHECK(cont.A[j] == doctest::Approx(oracle).epsilon(1e-5));
      CHECK(!cont.has_oscillations());
    }
  }
  // Desk-scale tubes: the trapezoid value is reported against the continuum value.
  const PipeFamily &fam = family();
  MikadoLevel thin = build_mikado_level(g, fam, 0, 1, 3);
  for (int j = 0; j < 6; ++j)
  {
    CHECK(thin.A_grid[j] > 0.0);
    MESSAGE("grid/continuum A j=" << j << ": " << thin.A_grid[j] / thin.A[j]);
  }
}

TEST_CASE("cutoff sandwich")
{
  const PipeFamily &fam = family();
  std::vector<long> M = {1, 2};
  // On a level-0 axis point: s_0 = 1.
  CHECK(level_cutoff(fam, 1, fam.offsets[2]) == 1.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 2 * M_PI);
  int far = 0;
  for (int s = 0; s < 20000; ++s)
  {
    const Vec3 x = {u(rng), u(rng), u(rng)};
    const double c = level_cutoff(fam, M[0], x);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
    if (!in_support_region(fam, M, 0, x))
    {
      REQUIRE(c == 0.0);
      ++far;
    }
    if (in_support_region(fam, M, 0, x, true))
    {
      REQUIRE(c == 1.0);
    }
  }
  CHECK(far > 0);
}

TEST_CASE("support volumes")
{
  const PipeFamily &fam = family();
  std::vector<long> M = {1, 2, 4};
  double prev = 1.0;
  for (int k = 0; k <= 2; ++k)
  {
    VolumeEstimate v = support_volume(fam, M, k, 48, 100000, 17 + k);
    CHECK(v.monte_carlo + v.half_width <= std::pow(2.0, -k));
    CHECK(v.half_width <= 0.02);
    CHECK(v.monte_carlo <= prev + v.half_width);
    prev = v.monte_carlo;
  }
  auto cubes = cube_volume_checks(fam, M, 2, 6, 1.0, 4000, 5);
  CHECK(!cubes.empty());
}
