#ifndef MIKADO_NASH_HPP
#define MIKADO_NASH_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "mikado/grid.hpp"

namespace mikado
{

struct Rational
{
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  friend Rational operator+(const Rational &a, const Rational &b);
  friend Rational operator*(const Rational &a, const Rational &b);
  friend bool operator==(const Rational &a, const Rational &b) { return a.num == b.num && a.den == b.den; }
};

// Symmetric matrices in the tensor component order (11,22,33,12,13,23).
using Sym3 = std::array<double, 6>;
using RationalSym3 = std::array<Rational, 6>;

// Gamma_j^2 = constant + sum_c coeff[c] * eps_c, eps = M - Id.
struct AffineFunctional
{
  Rational constant;
  std::array<Rational, 6> coeff;

  double operator()(const Sym3 &eps) const;
  Rational exact(const RationalSym3 &eps) const;
};

class NashError : public std::runtime_error
{
public:
  explicit NashError(const std::string &what) : std::runtime_error(what) {}
};

struct NashFrame
{
  std::array<IVec3, 6> theta;
  std::array<IVec3, 6> eta;
  Rational c0;
  std::array<AffineFunctional, 6> gamma_sq;

  int eta_norm_sq(int j) const;
  std::string to_json() const;
};

NashFrame default_frame();

double frobenius_distance_to_identity(const Sym3 &m);

// Gamma_j(M) for M in the closed Frobenius ball B(Id, c0).
std::array<double, 6> gamma(const NashFrame &frame, const Sym3 &m);
std::array<double, 6> gamma_sq(const NashFrame &frame, const Sym3 &m);
// sum_j w_j theta_j (x) theta_j
Sym3 rank_one_sum(const NashFrame &frame, const std::array<double, 6> &w);

}  // namespace mikado

#endif  // MIKADO_NASH_HPP
