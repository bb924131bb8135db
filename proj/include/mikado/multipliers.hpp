#ifndef MIKADO_MULTIPLIERS_HPP
#define MIKADO_MULTIPLIERS_HPP

#include <functional>
#include <optional>
#include <string>

#include "mikado/field.hpp"

namespace mikado
{

//
// A Fourier multiplier. Differential symbols are restricted to the dealiased box of the
// grid (|xi_i| <= kmax); the rest act on every stored mode. The xi = 0 value must be
// declared explicitly.
//
struct MultiplierSymbol
{
  std::function<cplx(const IVec3 &)> scalar;
  std::optional<cplx> at_zero;
  bool differential = false;
  std::optional<double> homogeneity;
  std::string name;
};

class MultiplierError : public std::runtime_error
{
public:
  explicit MultiplierError(const std::string &what) : std::runtime_error(what) {}
};

Field apply_multiplier(const Field &f, const MultiplierSymbol &m);

MultiplierSymbol heat_symbol(double t);
MultiplierSymbol laplacian_symbol();
MultiplierSymbol fractional_symbol(double s);  // |xi|^s, zero mode 0
MultiplierSymbol littlewood_paley_symbol(double N);
MultiplierSymbol low_pass_symbol();  // sigma
MultiplierSymbol gaussian_symbol(double sigma);
MultiplierSymbol dealias_symbol();

// Smooth step: 1 on [0,1], 0 on [2,inf), built by integrating the bump e^{1-1/(1-r^2)}.
double smooth_step(double r);
double bump(double r);
// pi(xi) = eta(|xi|) - eta(2|xi|) evaluated at a real frequency magnitude.
double lp_window(double r);

Field heat_evolve(const Field &f, double t);
Field littlewood_paley(const Field &f, double N);
Field low_pass(const Field &f);
Field mollify(const Field &f, double sigma);
Field dealias(const Field &f);

Field gradient(const Field &scalar);
Field divergence(const Field &f);  // vector -> scalar, tensor -> vector (contracts last index)
Field curl(const Field &f);
Field curl_curl(const Field &f);
Field d_operator(const Field &f);  // -grad f - grad f^T + 2 (div f) Id
Field anti_divergence(const Field &v);
Field leray(const Field &f);
Field leray_div(const Field &tensor);  // P div T
Field laplacian(const Field &f);
Field inverse_laplacian(const Field &f);
Field fractional(const Field &f, double s);

// max_x |grad^m f(x)| with the Euclidean norm over all ordered m-fold derivatives of all
// components, on the grid samples.
double derivative_sup(const Field &f, int m);

// Dyadic N = 1, 2, 4, ... whose band meets resolvable modes of the grid.
std::vector<double> dyadic_bands(const Grid &g);

}  // namespace mikado

#endif  // MIKADO_MULTIPLIERS_HPP
