#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "json.hpp"
#include "mikado/nash.hpp"

using namespace mikado;

namespace
{

// Random symmetric M with ||M - Id||_F <= radius.
Sym3 random_in_ball(std::mt19937_64 &rng, double radius)
{
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  double e[3][3];
  double norm = 0.0;
  for (int i = 0; i < 3; ++i)
  {
    for (int j = i; j < 3; ++j)
    {
      e[i][j] = e[j][i] = gauss(rng);
    }
  }
  for (int i = 0; i < 3; ++i)
  {
    for (int j = 0; j < 3; ++j)
    {
      norm += e[i][j] * e[i][j];
    }
  }
  const double r = radius * std::pow(unif(rng), 1.0 / 6.0) / std::sqrt(norm);
  return {1 + r * e[0][0], 1 + r * e[1][1], 1 + r * e[2][2], r * e[0][1], r * e[0][2], r * e[1][2]};
}

}  // namespace

TEST_CASE("frame vectors")
{
  NashFrame f = default_frame();
  for (int j = 0; j < 6; ++j)
  {
    const IVec3 &t = f.theta[j], &e = f.eta[j];
    CHECK(t[0] * e[0] + t[1] * e[1] + t[2] * e[2] == 0);
  }
  CHECK(f.c0 == Rational(1, 1000));
  CHECK(f.theta[3] == IVec3{-1, 1, 1});
}

TEST_CASE("Gamma squared at the identity, exact")
{
  NashFrame f = default_frame();
  RationalSym3 zero{};
  const Rational expect[6] = {Rational(1, 3), Rational(1, 12), Rational(1, 6), Rational(1, 6), Rational(1, 12), Rational(1, 6)};
  std::array<Rational, 6> sum{};
  static constexpr int row[6] = {0, 1, 2, 0, 0, 1};
  static constexpr int col[6] = {0, 1, 2, 1, 2, 2};
  for (int j = 0; j < 6; ++j)
  {
    const Rational g = f.gamma_sq[j].exact(zero);
    CHECK(g == expect[j]);
    for (int c = 0; c < 6; ++c)
    {
      sum[c] = sum[c] + g * Rational(f.theta[j][row[c]] * f.theta[j][col[c]]);
    }
  }
  for (int c = 0; c < 6; ++c)
  {
    CHECK(sum[c] == Rational(c < 3 ? 1 : 0));
  }
  const auto g = gamma(f, Sym3{1, 1, 1, 0, 0, 0});
  CHECK(g[0] == doctest::Approx(std::sqrt(1.0 / 3)).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(std::sqrt(1.0 / 12)).epsilon(1e-15));
}

TEST_CASE("Gamma squared for a diagonal perturbation")
{
  NashFrame f = default_frame();
  const double c0 = 1e-3;
  const auto g = gamma_sq(f, Sym3{1 + c0, 1, 1, 0, 0, 0});
  CHECK(g[0] == doctest::Approx(1.0 / 3 - c0 / 4).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(1.0 / 12 + c0 / 8).epsilon(1e-15));
  CHECK(g[2] == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(g[3] == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(g[4] == doctest::Approx(1.0 / 12 + c0 / 8).epsilon(1e-15));
  CHECK(g[5] == doctest::Approx(1.0 / 6).epsilon(1e-15));
}

TEST_CASE("reconstruction and bounds on random in-ball matrices")
{
  NashFrame f = default_frame();
  std::mt19937_64 rng(42);
  double worst = 0.0, lo = 1.0, hi = 0.0;
  for (int s = 0; s < 5000; ++s)
  {
    const Sym3 m = random_in_ball(rng, 1e-3);
    const auto g = gamma(f, m);
    // Oracle: full 3x3 outer products summed directly.
    double full[3][3] = {};
    for (int j = 0; j < 6; ++j)
    {
      lo = std::min(lo, g[j]);
      hi = std::max(hi, g[j]);
      for (int a = 0; a < 3; ++a)
      {
        for (int b = 0; b < 3; ++b)
        {
          full[a][b] += g[j] * g[j] * f.theta[j][a] * f.theta[j][b];
        }
      }
    }
    const double target[3][3] = {{m[0], m[3], m[4]}, {m[3], m[1], m[5]}, {m[4], m[5], m[2]}};
    for (int a = 0; a < 3; ++a)
    {
      for (int b = 0; b < 3; ++b)
      {
        worst = std::max(worst, std::abs(full[a][b] - target[a][b]));
      }
    }
  }
  CHECK(worst <= 1e-12);
  CHECK(lo >= 0.01);
  CHECK(hi <= 1.0);
}

TEST_CASE("domain errors and JSON dump")
{
  NashFrame f = default_frame();
  CHECK_THROWS_WITH_AS(gamma(f, Sym3{1.01, 1, 1, 0, 0, 0}), "nash-domain", NashError);
  auto j = nlohmann::json::parse(f.to_json());
  CHECK(j["c0"] == "1/1000");
  CHECK(j["frame"][0]["gamma_sq"]["eps22"] == "-5/12");
  CHECK(j["frame"][5]["theta"][1] == "-2");
}
