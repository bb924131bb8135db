#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>

#include "mikado/multipliers.hpp"
#include "mikado/snapshot.hpp"
#include "test_util.hpp"

using namespace mikado;
using namespace testutil;

TEST_CASE("round trip is lossless for band-limited fields")
{
  auto g = make_grid(32);
  Field f = random_field(g, Rank::vector, 10, 1);
  Field back = f.to_real().to_spectral();
  CHECK(max_coefficient(back - f) <= 1e-13 * max_coefficient(f));
  CHECK(conjugate_symmetry_defect(f) <= 1e-14);
}

TEST_CASE("heat multiplier")
{
  auto g = make_grid(32);
  const double t = 0.013;
  RealField s = sample(g, Rank::vector, [](const Vec3 &x, int c) { return c == 2 ? std::sin(5 * x[0]) : 0.0; });
  Field out = heat_evolve(s.to_spectral(), t);
  RealField expect = sample(g, Rank::vector, [t](const Vec3 &x, int c) {
    return c == 2 ? std::exp(-25 * t) * std::sin(5 * x[0]) : 0.0;
  });
  CHECK(max_abs(out.to_real() - expect) <= 1e-14);

  Field f = random_field(g, Rank::scalar, 8, 2);
  Field same = heat_evolve(f, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i)
  {
    REQUIRE(same.comp(0)[i] == f.comp(0)[i]);
  }
  CHECK_THROWS(heat_evolve(f, -1e-3));
}

TEST_CASE("Leray projection examples and projection law")
{
  auto g = make_grid(16);
  RealField grad_cos = sample(g, Rank::vector, [](const Vec3 &x, int c) { return c == 0 ? -std::sin(x[0]) : 0.0; });
  CHECK(max_abs(leray(grad_cos.to_spectral()).to_real()) <= 1e-15);
  RealField shear = sample(g, Rank::vector, [](const Vec3 &x, int c) { return c == 1 ? std::cos(x[0]) : 0.0; });
  CHECK(max_abs(leray(shear.to_spectral()).to_real() - shear) <= 1e-15);

  Field f = random_field(g, Rank::vector, g->kmax(), 3);
  Field p = leray(f);
  CHECK(max_abs_diff(leray(p), p) <= 1e-13);
  CHECK(max_abs(divergence(p).to_real()) <= 1e-12);
}

TEST_CASE("D operator single mode and identity with curl curl")
{
  auto g = make_grid(16);
  RealField f = sample(g, Rank::vector, [](const Vec3 &x, int c) { return c == 2 ? std::sin(x[0]) : 0.0; });
  RealField d = d_operator(f.to_spectral()).to_real();
  RealField expect = sample(g, Rank::tensor, [](const Vec3 &x, int c) { return c == sym_index(0, 2) ? -std::cos(x[0]) : 0.0; });
  CHECK(max_abs(d - expect) <= 1e-14);
  CHECK(max_abs(divergence(d.to_spectral()).to_real() - f) <= 1e-14);
  CHECK(max_abs(curl_curl(f.to_spectral()).to_real() - f) <= 1e-14);

  RealField c = sample(g, Rank::vector, [](const Vec3 &, int i) { return 1.0 + i; });
  CHECK(max_abs(d_operator(c.to_spectral()).to_real()) == 0.0);
  CHECK(max_abs(curl_curl(c.to_spectral()).to_real()) == 0.0);
}

TEST_CASE("anti-divergence single mode")
{
  auto g = make_grid(16);
  RealField v = sample(g, Rank::vector, [](const Vec3 &x, int c) { return c == 1 ? std::cos(x[0]) : 0.0; });
  RealField r = anti_divergence(v.to_spectral()).to_real();
  RealField expect = sample(g, Rank::tensor, [](const Vec3 &x, int c) { return c == sym_index(0, 1) ? std::sin(x[0]) : 0.0; });
  CHECK(max_abs(r - expect) <= 1e-14);
  CHECK(max_abs(divergence(r.to_spectral()).to_real() - v) <= 1e-14);

  RealField c = sample(g, Rank::vector, [](const Vec3 &, int i) { return 2.0 - i; });
  CHECK(max_abs(anti_divergence(c.to_spectral()).to_real()) == 0.0);
}

TEST_CASE("random identities: div R = Id - mean, div D = curl curl")
{
  auto g = make_grid(32);
  for (unsigned s = 0; s < 10; ++s)
  {
    Field v = random_field(g, Rank::vector, g->kmax(), 100 + s);
    Field lhs = divergence(anti_divergence(v));
    Field rhs = v;
    for (int c = 0; c < 3; ++c)
    {
      rhs.comp(c)[0] = 0.0;
    }
    const double scale = sup_norm(v);
    CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * scale);
    CHECK(max_abs_diff(divergence(d_operator(v)), curl_curl(v)) <= 1e-12 * scale);
  }
}

TEST_CASE("spectral gradient agrees with a direct trigonometric interpolation derivative")
{
  // Independent oracle: differentiate the 1-D trigonometric interpolant by a direct O(n) sum.
  const int n = 12;
  auto g = make_grid(n, 1.0);
  Field f = random_field(g, Rank::scalar, 4, 7);
  RealField s = f.to_real();
  RealField grad = gradient(f).to_real();
  double worst = 0.0;
  for (int iz = 0; iz < n; ++iz)
  {
    for (int iy = 0; iy < n; ++iy)
    {
      for (int ix = 0; ix < n; ++ix)
      {
        double d = 0.0;
        for (int m = 0; m < n; ++m)
        {
          // derivative of the periodic interpolant, modes |k| <= 4 only
          double w = 0.0;
          for (int k = 1; k <= 4; ++k)
          {
            w += -2.0 * k * std::sin(k * 2 * M_PI * (ix - m) / n) / n;
          }
          d += w * s.comp(0)[m + n * (iy + n * iz)];
        }
        worst = std::max(worst, std::abs(d - grad.comp(0)[ix + n * (iy + n * iz)]));
      }
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("smooth step and Littlewood-Paley partition")
{
  CHECK(smooth_step(0.3) == 1.0);
  CHECK(smooth_step(2.5) == 0.0);
  // Oracle: composite Simpson quadrature of the bump with 2e5 panels.
  auto simpson = [](double u) {
    const int m = 200000;
    auto b = [](double s) { return std::abs(s) < 1 ? std::exp(1 - 1 / (1 - s * s)) : 0.0; };
    auto integ = [&](double a, double c) {
      const double h = (c - a) / m;
      double acc = b(a) + b(c);
      for (int i = 1; i < m; ++i)
      {
        acc += (i % 2 ? 4.0 : 2.0) * b(a + i * h);
      }
      return acc * h / 3;
    };
    return 1.0 - integ(-1.0, u) / integ(-1.0, 1.0);
  };
  for (double r : {1.1, 1.37, 1.5, 1.81, 1.99})
  {
    CHECK(std::abs(smooth_step(r) - simpson(2 * r - 3)) <= 1e-12);
  }

  auto g = make_grid(64);
  Field f = random_field(g, Rank::vector, 32, 11);
  Field total = low_pass(f);
  for (double N : dyadic_bands(*g))
  {
    total += littlewood_paley(f, N);
  }
  CHECK(max_coefficient(total - f) <= 1e-12);

  RealField c = sample(g, Rank::scalar, [](const Vec3 &, int) { return 3.0; });
  CHECK(max_abs(littlewood_paley(c.to_spectral(), 1).to_real()) == 0.0);

  RealField s4 = sample(g, Rank::vector, [](const Vec3 &x, int k) { return k == 2 ? std::sin(4 * x[0]) : 0.0; });
  const double pi_e1 = smooth_step(1.0) - smooth_step(2.0);
  CHECK(pi_e1 == 1.0);
  CHECK(max_abs(littlewood_paley(s4.to_spectral(), 4).to_real() - s4) <= 1e-14);
}

TEST_CASE("mean mode must be declared")
{
  auto g = make_grid(8);
  RealField c = sample(g, Rank::scalar, [](const Vec3 &, int) { return 1.0; });
  MultiplierSymbol m{[](const IVec3 &) { return cplx(1.0); }, std::nullopt, false, std::nullopt, "undeclared"};
  CHECK_THROWS_WITH_AS(apply_multiplier(c.to_spectral(), m), "mean-mode-undefined", MultiplierError);
  RealField z = sample(g, Rank::scalar, [](const Vec3 &x, int) { return std::sin(x[1]); });
  CHECK_NOTHROW(apply_multiplier(z.to_spectral(), m));
}

TEST_CASE("multipliers commute")
{
  auto g = make_grid(32);
  Field f = random_field(g, Rank::vector, 12, 21);
  const double scale = sup_norm(f);
  std::vector<std::function<Field(const Field &)>> ops = {
      [](const Field &x) { return leray(x); },
      [](const Field &x) { return heat_evolve(x, 0.01); },
      [](const Field &x) { return littlewood_paley(x, 4); },
      [](const Field &x) { return curl_curl(x); },
      [](const Field &x) { return fractional(x, 0.5); },
  };
  for (std::size_t a = 0; a < ops.size(); ++a)
  {
    for (std::size_t b = a + 1; b < ops.size(); ++b)
    {
      CHECK(max_abs_diff(ops[a](ops[b](f)), ops[b](ops[a](f))) <= 1e-12 * scale * 300);
    }
  }
}

TEST_CASE("snapshot round trip")
{
  auto g = make_grid(8);
  RealField f = random_field(g, Rank::tensor, 3, 5).to_real();
  const std::string path = "test_snapshot.bin";
  write_snapshot(path, f);
  RealField back = read_snapshot(path);
  CHECK(back.rank() == Rank::tensor);
  CHECK(max_abs(back - f) == 0.0);
  std::remove(path.c_str());
}
