#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <limits>

#include "mikado/evolution.hpp"
#include "mikado/multipliers.hpp"
#include "test_util.hpp"

using namespace mikado;
using namespace testutil;

namespace
{

Field random_solenoidal(const GridPtr &g, int band, unsigned seed, double amp)
{
  Field u = leray(random_field(g, Rank::vector, band, seed, true));
  u *= amp / sup_norm(u);
  return u;
}

// A small synthetic data set: smooth level fields, so that v is a few low modes, and pipes in disjoint slabs.
DataSet synthetic(const GridPtr &g, double amp, unsigned seed)
{
  DataSet d;
  d.params.K = 1;
  d.family.frame = default_frame();
  const long N[3] = {3, 12, 48};
  d.U0 = Field(g, Rank::vector);
  for (int k = 0; k < 3; ++k)
  {
    DataLevel l;
    l.k = k;
    l.N = N[k];
    l.extension = k == 2;
    for (int j = 0; j < 6; ++j)
    {
      l.pipes.A[j] = 0.5;
      l.pipes.q[j] = RealField(g, Rank::scalar);
      l.a[j] = RealField(g, Rank::scalar);
      for (std::size_t p = 0; p < g->real_size(); ++p)
      {
        const Vec3 x = g->point(p);
        l.a[j].comp(0)[p] = amp * (1.0 + 0.5 * std::cos(x[0] + j) * std::sin(x[1] - k));
        // disjoint slabs in x_1, so products of distinct pipes vanish
        const bool inside = std::floor(x[0] / (2 * M_PI) * 6.0) == j;
        l.pipes.q[j].comp(0)[p] = inside ? std::sin(x[2] + x[1] * (j % 2)) : 0.0;
      }
      l.s[j] = random_field(g, Rank::scalar, 2, seed + 10 * k + j, true);
      l.s[j] *= amp / double(N[k] * N[k]);
    }
    l.psi0 = Field(g, Rank::vector);
    for (int j = 0; j < 6; ++j)
    {
      l.psi0 += l.potential(d.family.frame, j);
    }
    d.levels.push_back(std::move(l));
  }
  return d;
}

double slope(const std::vector<double> &h, const std::vector<double> &e)
{
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(h.size());
  for (std::size_t i = 0; i < h.size(); ++i)
  {
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("exact shear decay")
{
  auto g = make_grid(32);
  Field u0 = sample(g, Rank::vector, [](const Vec3 &x, int c) { return c == 2 ? std::sin(x[0]) : 0.0; }).to_spectral();
  Field u = nse_evolve(u0, 1.0, 0.01);
  Field exact = u0;
  exact *= std::exp(-1.0);
  CHECK(sup_norm(u - exact) <= 1e-8 * sup_norm(exact));
}

TEST_CASE("fourth-order convergence on nonlinear data")
{
  auto g = make_grid(32);
  const Field u0 = random_solenoidal(g, 2, 3, 2.0);
  const double T = 0.4;
  const Field ref = nse_evolve(u0, T, T / 512);
  std::vector<double> hs, errs;
  for (int steps : {8, 16, 32, 64})
  {
    hs.push_back(T / steps);
    errs.push_back(sup_norm(nse_evolve(u0, T, T / steps) - ref));
  }
  const double p = slope(hs, errs);
  MESSAGE("order " << p);
  CHECK(p == doctest::Approx(4.0).epsilon(0.05));
  // Mean and divergence
  const Field u = nse_evolve(u0, T, T / 16);
  CHECK(sup_norm(divergence(u)) <= 1e-10 * sup_norm(u));
  CHECK(std::abs(u.comp(0)[0]) <= 1e-14);
}

TEST_CASE("energy balance")
{
  auto g = make_grid(32);
  const Field u0 = random_solenoidal(g, 3, 9, 3.0);
  std::vector<EnergyRow> rows;
  nse_evolve(u0, 0.2, 2e-3, &rows);
  double worst = 0.0;
  for (const auto &r : rows)
  {
    worst = std::max(worst, std::abs(r.energy + r.dissipated - rows.front().energy) / rows.front().energy);
  }
  MESSAGE("energy balance defect " << worst);
  CHECK(worst <= 1e-6);
  CHECK(rows.back().energy < rows.front().energy);
}

TEST_CASE("pressure elimination equals the Leray projection of u . grad u")
{
  auto g = make_grid(32);
  const Field u = random_solenoidal(g, 4, 21, 1.0);
  const RealField ur = u.to_real();
  // (u . grad) u_i from sampled derivatives
  RealField adv(g, Rank::vector);
  std::array<RealField, 3> du;
  for (int i = 0; i < 3; ++i)
  {
    Field ui(g, Rank::scalar);
    std::copy(u.comp(i), u.comp(i) + g->spec_size(), ui.comp(0));
    du[i] = gradient(ui).to_real();
  }
  for (std::size_t p = 0; p < g->real_size(); ++p)
  {
    for (int i = 0; i < 3; ++i)
    {
      double s = 0.0;
      for (int j = 0; j < 3; ++j)
      {
        s += ur.comp(j)[p] * du[i].comp(j)[p];
      }
      adv.comp(i)[p] = s;
    }
  }
  Field expect = leray(adv.to_spectral());
  expect *= -1.0;
  CHECK(sup_norm(nse_nonlinearity(u) - expect) <= 1e-12 * sup_norm(expect));
}

TEST_CASE("non-finite state raises blowup-detected")
{
  auto g = make_grid(16);
  Field u = random_solenoidal(g, 2, 1, 1.0);
  u.comp(1)[5] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_WITH_AS(nse_step(u, 1e-3), doctest::Contains("blowup-detected"), BlowupError);
}

TEST_CASE("linearized flow")
{
  auto g = make_grid(32);
  const DataSet zero = synthetic(g, 0.0, 1);
  const BranchState b0(zero, 1);
  Field mode = sample(g, Rank::vector, [](const Vec3 &x, int c) { return c == 0 ? std::cos(2 * x[1]) : 0.0; }).to_spectral();
  Field expect = mode;
  expect *= std::exp(-4.0 * 0.3);
  CHECK(sup_norm(linearized_flow(mode, 0.1, 0.4, 0.01, b0) - expect) <= 1e-13);

  const DataSet d = synthetic(g, 0.5, 2);
  const BranchState b(d, 2);
  const Field a = random_solenoidal(g, 3, 5, 1.0);
  const Field one = linearized_flow(a, 0.05, 0.25, 0.004, b);
  const Field two = linearized_flow(linearized_flow(a, 0.05, 0.12, 0.0035, b), 0.12, 0.25, 0.0026, b);
  const double rel = sup_norm(one - two) / sup_norm(one);
  MESSAGE("semigroup defect " << rel);
  CHECK(rel <= 1e-6);
}

TEST_CASE("perturbation solver")
{
  auto g = make_grid(32);
  const DataSet d = synthetic(g, 0.3, 4);
  const BranchState b(d, 1);
  PerturbationOptions opt;
  opt.t_end = 0.02;
  opt.source = SourceMode::none;
  opt.snapshot_times = {0.01};
  PerturbationRun zero = solve_perturbation(b, opt);
  CHECK(zero.x_w == 0.0);
  CHECK(sup_norm(zero.snapshots.at(0.01)) == 0.0);

  opt.source = SourceMode::identity;
  opt.residual_times = {1e-3, 1e-2};
  PerturbationRun run = solve_perturbation(b, opt);
  REQUIRE(run.residuals.size() == 2);
  for (const auto &r : run.residuals)
  {
    MESSAGE("t=" << r.t << " NSE residual " << r.relative);
    CHECK(r.relative <= 1e-6);
  }
  CHECK(run.x_w > 0.0);
  // Near the start time w shrinks with t - t_start.
  CHECK(run.rows[1].w_cminus < run.rows[3].w_cminus);
  CHECK(run.rows.front().w_cminus == 0.0);

  // Same trajectory through the assembled residual terms instead of the identity.
  opt.source = SourceMode::residual;
  PerturbationRun again = solve_perturbation(b, opt);
  CHECK(again.rows.back().w_inf == doctest::Approx(run.rows.back().w_inf).epsilon(1e-8));

  opt.source = SourceMode::identity;
  PicardCheck pc = picard_crosscheck(b, opt, 3);
  MESSAGE("Picard " << pc.relative << " after " << pc.iterations);
  CHECK(pc.relative <= 1e-4);

  opt.escape_ratio = 1e-9;
  CHECK_THROWS_AS(solve_perturbation(b, opt), EscapeError);
}

TEST_CASE("distinctness and attainment bookkeeping")
{
  auto g = make_grid(32);
  const DataSet d = synthetic(g, 0.3, 6);
  const BranchState b1(d, 1), b2(d, 2);
  DistinctnessReport r = distinctness_report(b1, b2, nullptr, nullptr, {0.0, 0.1, 1.0, 10.0});
  CHECK(r.t0 == doctest::Approx(1.0 / 9));
  CHECK(r.D_t0 > 0.0);
  CHECK(r.rows.back().Dv < 1e-10 * r.rows.front().Dv);
  CHECK(std::isnan(r.rows[1].D));
  CHECK_THROWS_AS(distinctness_report(b2, b1, nullptr, nullptr, {}), BranchError);
  auto att = data_attainment(b1, {0.0, 0.1, 1.0});
  CHECK(att.size() == 3);
}
