#include "mikado/nash.hpp"

#include <cmath>
#include <numeric>

#include "json.hpp"

namespace mikado
{

Rational::Rational(std::int64_t n, std::int64_t d)
{
  if (d == 0)
  {
    throw std::invalid_argument("rational: zero denominator");
  }
  if (d < 0)
  {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : 0;
  den = g ? d / g : 1;
}

std::string Rational::str() const
{
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational &a, const Rational &b) { return Rational(a.num * b.den + b.num * a.den, a.den * b.den); }
Rational operator*(const Rational &a, const Rational &b) { return Rational(a.num * b.num, a.den * b.den); }

double AffineFunctional::operator()(const Sym3 &eps) const
{
  double s = constant.value();
  for (int c = 0; c < 6; ++c)
  {
    s += coeff[c].value() * eps[c];
  }
  return s;
}

Rational AffineFunctional::exact(const RationalSym3 &eps) const
{
  Rational s = constant;
  for (int c = 0; c < 6; ++c)
  {
    s = s + coeff[c] * eps[c];
  }
  return s;
}

int NashFrame::eta_norm_sq(int j) const
{
  const IVec3 &e = eta[j];
  return e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
}

std::string NashFrame::to_json() const
{
  static const char *names[6] = {"eps11", "eps22", "eps33", "eps12", "eps13", "eps23"};
  nlohmann::ordered_json out;
  out["c0"] = c0.str();
  for (int j = 0; j < 6; ++j)
  {
    nlohmann::ordered_json e;
    e["j"] = j + 1;
    e["theta"] = {std::to_string(theta[j][0]), std::to_string(theta[j][1]), std::to_string(theta[j][2])};
    e["eta"] = {std::to_string(eta[j][0]), std::to_string(eta[j][1]), std::to_string(eta[j][2])};
    e["gamma_sq"]["constant"] = gamma_sq[j].constant.str();
    for (int c = 0; c < 6; ++c)
    {
      e["gamma_sq"][names[c]] = gamma_sq[j].coeff[c].str();
    }
    out["frame"].push_back(e);
  }
  return out.dump(2);
}

NashFrame default_frame()
{
  NashFrame f;
  f.theta = {IVec3{0, 0, 1}, IVec3{2, 0, 1}, IVec3{1, 1, 1}, IVec3{-1, 1, 1}, IVec3{-2, 0, 1}, IVec3{0, -2, 1}};
  f.eta = {IVec3{1, 0, 0}, IVec3{0, 1, 0}, IVec3{1, -1, 0}, IVec3{1, 1, 0}, IVec3{0, 1, 0}, IVec3{1, 0, 0}};
  f.c0 = Rational(1, 1000);
  using R = Rational;
  //                       constant   eps11     eps22      eps33  eps12     eps13     eps23
  f.gamma_sq[0] = {R(1, 3), {R(-1, 4), R(-5, 12), R(1), R(0), R(0), R(-1, 3)}};
  f.gamma_sq[1] = {R(1, 12), {R(1, 8), R(-1, 24), R(0), R(-1, 4), R(1, 4), R(-1, 12)}};
  f.gamma_sq[2] = {R(1, 6), {R(0), R(1, 6), R(0), R(1, 2), R(0), R(1, 3)}};
  f.gamma_sq[3] = {R(1, 6), {R(0), R(1, 6), R(0), R(-1, 2), R(0), R(1, 3)}};
  f.gamma_sq[4] = {R(1, 12), {R(1, 8), R(-1, 24), R(0), R(1, 4), R(-1, 4), R(-1, 12)}};
  f.gamma_sq[5] = {R(1, 6), {R(0), R(1, 6), R(0), R(0), R(0), R(-1, 6)}};
  return f;
}

double frobenius_distance_to_identity(const Sym3 &m)
{
  double s = 0.0;
  for (int c = 0; c < 6; ++c)
  {
    const double e = m[c] - (c < 3 ? 1.0 : 0.0);
    s += (c < 3 ? 1.0 : 2.0) * e * e;
  }
  return std::sqrt(s);
}

std::array<double, 6> gamma_sq(const NashFrame &frame, const Sym3 &m)
{
  if (frobenius_distance_to_identity(m) > frame.c0.value())
  {
    throw NashError("nash-domain");
  }
  Sym3 eps = m;
  for (int c = 0; c < 3; ++c)
  {
    eps[c] -= 1.0;
  }
  std::array<double, 6> out;
  for (int j = 0; j < 6; ++j)
  {
    out[j] = frame.gamma_sq[j](eps);
    if (!(out[j] > 0.0))
    {
      throw NashError("nash-degenerate");
    }
  }
  return out;
}

std::array<double, 6> gamma(const NashFrame &frame, const Sym3 &m)
{
  std::array<double, 6> g = gamma_sq(frame, m);
  for (double &v : g)
  {
    v = std::sqrt(v);
  }
  return g;
}

Sym3 rank_one_sum(const NashFrame &frame, const std::array<double, 6> &w)
{
  Sym3 out{};
  static constexpr int row[6] = {0, 1, 2, 0, 0, 1};
  static constexpr int col[6] = {0, 1, 2, 1, 2, 2};
  for (int j = 0; j < 6; ++j)
  {
    for (int c = 0; c < 6; ++c)
    {
      out[c] += w[j] * frame.theta[j][row[c]] * frame.theta[j][col[c]];
    }
  }
  return out;
}

}  // namespace mikado
