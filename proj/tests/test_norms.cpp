#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mikado/multipliers.hpp"
#include "mikado/norms.hpp"
#include "test_util.hpp"

using namespace mikado;
using namespace testutil;

namespace
{

Field shear(const GridPtr &g, int N, double amp, int comp)
{
  return sample(g, Rank::vector, [&](const Vec3 &x, int c) { return c == comp ? amp * std::sin(N * x[0]) : 0.0; })
      .to_spectral();
}

}  // namespace

TEST_CASE("Holder-Zygmund estimator")
{
  auto g = make_grid(64);
  CHECK(holder_zygmund(Field(g, Rank::vector), 0.3) == 0.0);
  // A single mode is seen by at most the two bands whose window covers it.
  for (int N : {4, 8, 16})
  {
    const double s = 0.5;
    double oracle = 0.0;
    for (double M : dyadic_bands(*g))
    {
      oracle = std::max(oracle, std::pow(M, s) * lp_window(N / M));
    }
    const double v = holder_zygmund(shear(g, N, 1.0, 2), s);
    CHECK(v == doctest::Approx(oracle).epsilon(1e-12));
    MESSAGE("N=" << N << " value/N^s = " << v / std::pow(N, s));
  }
  // f(2x) on the 64 grid samples f on the 32 grid, with every band shifted by one.
  auto g32 = make_grid(32);
  Field f = random_field(g32, Rank::scalar, 5, 4, true);
  Field f2(g, Rank::scalar);
  for (std::size_t idx = 0; idx < g32->spec_size(); ++idx)
  {
    const IVec3 xi = g32->mode(idx);
    bool conj = false;
    const std::size_t dst = g->locate({2 * xi[0], 2 * xi[1], 2 * xi[2]}, conj);
    f2.comp(0)[dst] = conj ? std::conj(f.comp(0)[idx]) : f.comp(0)[idx];
  }
  for (double s : {-0.5, 0.25, 1.0})
  {
    CHECK(holder_zygmund(f2, s) == doctest::Approx(std::pow(2.0, s) * holder_zygmund(f, s)).epsilon(1e-10));
  }
}

TEST_CASE("gradient Holder norm of a single mode")
{
  auto g = make_grid(32);
  const int N = 4;
  const double kappa = 0.05;
  double oracle = 0.0;
  for (double M : dyadic_bands(*g))
  {
    oracle = std::max(oracle, std::pow(M, kappa) * lp_window(N / M) * N);
  }
  CHECK(gradient_holder(shear(g, N, 1.0, 1), kappa) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("negative Sobolev norm")
{
  auto g = make_grid(32);
  CHECK(sobolev_neg(shear(g, 1, 1.0, 2), 2.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(sobolev_neg(shear(g, 4, 1.0, 2), 2.0) == doctest::Approx(1.0 / (4 * std::sqrt(2.0))).epsilon(1e-13));
  CHECK(sobolev_neg(shear(g, 4, 1.0, 2), 4.0) == doctest::Approx(sobolev_neg(shear(g, 1, 1.0, 2), 4.0) / 4).epsilon(1e-12));
  CHECK_THROWS(sobolev_neg(shear(g, 1, 1.0, 2), 1.0));
}

TEST_CASE("Carleson estimator")
{
  auto g = make_grid(32);
  CHECK(bmo_minus_one(Field(g, Rank::vector)) == 0.0);
  // |u|^2 = 1 everywhere: R^-3 * R^2 * |B_R| is largest at R = 2 pi.
  RealField one = sample(g, Rank::vector, [](const Vec3 &, int c) { return c == 0 ? 1.0 : 0.0; });
  const double v = carleson_sup(g, [&](double) { return one; });
  CHECK(v == doctest::Approx(2 * M_PI * std::sqrt(4 * M_PI / 3)).epsilon(1e-2));
}

TEST_CASE("BMO^-1 of shear modes is scale invariant")
{
  auto g = make_grid(64);
  std::vector<double> vals;
  for (int N : {4, 8, 16})
  {
    vals.push_back(bmo_minus_one(shear(g, N, N, 1)));
    // Closed form on the full period: R^-3 |B| (1/2) int_0^{R^2} N^2 e^{-2N^2 t} dt with R = 2 pi.
    const double R = 2 * M_PI;
    const double oracle = std::sqrt(4 * M_PI / 3 * 0.5 * 0.5 * (1 - std::exp(-2.0 * N * N * R * R)));
    CHECK(vals.back() >= oracle * 0.98);
    MESSAGE("N=" << N << " bmo=" << vals.back() << " full-period oracle=" << oracle);
  }
  for (double v : vals)
  {
    CHECK(v == doctest::Approx(vals.front()).epsilon(0.1));
  }
}

TEST_CASE("Koch-Tataru path norm of a decaying mode")
{
  auto g = make_grid(32);
  const int N = 4;
  Field base = shear(g, N, N, 2);
  auto u = [&](double t) { return std::exp(-double(N * N) * t) * base; };
  std::vector<double> tgrid;
  for (int i = 0; i <= 400; ++i)
  {
    tgrid.push_back(std::pow(10.0, -4.0 + 4.0 * i / 400));
  }
  KTReport r = kt_path_norm(g, u, tgrid);
  CHECK(r.sup_term == doctest::Approx(1.0 / std::sqrt(2 * M_E)).epsilon(1e-2));
  CHECK(std::isfinite(r.carleson_term));
  KTReport z = kt_path_norm(g, [&](double) { return Field(g, Rank::vector); }, tgrid);
  CHECK(z.total() == 0.0);
}

TEST_CASE("inequality harnesses are uniformly bounded")
{
  for (const char *name : {"bernstein", "heat-decay", "improved-holder", "stationary-phase"})
  {
    HarnessReport r = inequality_harness(name, 64, 11);
    MESSAGE(std::string(name) << "\n" << r.csv());
    CHECK(r.rows.size() >= 3);
    CHECK(r.bounded());
  }
  CHECK_THROWS(inequality_harness("nope", 32, 1));
}
