#include "mikado/params.hpp"

#include <cmath>
#include <sstream>

namespace mikado
{

namespace
{

// ceil(A^{b^k}) as an integer; overflow is reported as -1.
long derived_M(double A, double b, int k)
{
  const double v = std::pow(A, std::pow(b, k));
  if (!std::isfinite(v) || v > 9.0e15)
  {
    return -1;
  }
  return static_cast<long>(std::ceil(v - 1e-9));
}

}  // namespace

std::vector<long> ParameterSet::scales_M() const
{
  if (!strict_mode)
  {
    return M;
  }
  std::vector<long> out;
  for (int k = 0; k <= K + 1; ++k)
  {
    out.push_back(derived_M(A, b, k));
  }
  return out;
}

std::vector<long> ParameterSet::scales_N() const
{
  if (!strict_mode)
  {
    return N;
  }
  std::vector<long> out;
  for (long m : scales_M())
  {
    if (m < 0)
    {
      out.push_back(-1);
      continue;
    }
    const double f = std::ceil(std::pow(static_cast<double>(m), gamma - 1.0) - 1e-9);
    const double v = static_cast<double>(m) * f;
    out.push_back(v > 9.0e15 ? -1 : static_cast<long>(v));
  }
  return out;
}

double ParameterSet::mollifier_scale(int k) const
{
  const auto n = scales_N();
  return std::pow(static_cast<double>(n.at(k + 1)), -1.0 / 3.0) * std::pow(static_cast<double>(n.at(k)), -2.0 / 3.0);
}

std::vector<std::string> ParameterSet::violations(int grid_n, double dealias_fraction, double max_eta) const
{
  std::vector<std::string> out;
  auto fail = [&out](const std::string &s) { out.push_back(s); };
  if (K < 0)
  {
    fail("K must be nonnegative");
    return out;
  }
  if (!(delta > 0.0 && delta <= 0.05))
  {
    fail("delta must lie in (0, 1/20]");
  }
  if (delta0 < 0.0)
  {
    fail("delta0 must be nonnegative");
  }
  if (!(mollifier_fraction > 0.0))
  {
    fail("mollifier_fraction must be positive");
  }
  const auto m = scales_M();
  const auto n = scales_N();
  if (static_cast<int>(m.size()) != K + 2 || static_cast<int>(n.size()) != K + 2)
  {
    fail("scale ladder must list K+2 entries (levels 0..K and one extension level)");
    return out;
  }
  for (int k = 0; k <= K + 1; ++k)
  {
    std::ostringstream lvl;
    lvl << " at k=" << k;
    if (m[k] <= 0 || n[k] <= 0)
    {
      fail("scale overflow or nonpositive scale" + lvl.str());
      continue;
    }
    if (n[k] % m[k] != 0)
    {
      fail("M_k must divide N_k" + lvl.str());
    }
    if (n[k] < 2 * m[k])
    {
      fail("N_k/M_k >= 2 violated" + lvl.str());
    }
    if (k >= 1 && n[k] < 4 * n[k - 1])
    {
      fail("N_{k+1} >= 4 N_k violated" + lvl.str());
    }
  }
  if (out.empty())
  {
    const double need = 2.0 * static_cast<double>(n[K]) * max_eta;
    const double have = dealias_fraction * grid_n / 2.0;
    if (have < need)
    {
      std::ostringstream s;
      s << "grid resolvability: dealias_fraction*n/2 = " << have << " < 2*N_K*max|eta| = " << need;
      fail(s.str());
    }
  }
  if (strict_mode)
  {
    if (!(alpha > 0.0 && alpha < 0.125))
    {
      fail("strict: alpha must lie in (0,1/8)");
    }
    if (!(b > std::max(5.0, 1.0 / (1.0 - 8.0 * alpha))))
    {
      fail("strict: b > max(5, 1/(1-8 alpha)) violated");
    }
    if (!(1.0 / (1.0 - 4.0 * alpha) < gamma && gamma < 1.0 / (4.0 * alpha + 1.0 / b)))
    {
      fail("strict: 1/(1-4 alpha) < gamma < 1/(4 alpha + 1/b) violated");
    }
    if (!(kappa > 0.0 && kappa < 0.5 - 1.0 / (2.0 * gamma) - 2.0 * alpha))
    {
      fail("strict: kappa in (0, 1/2 - 1/(2 gamma) - 2 alpha) violated");
    }
    if (!(4.0 * alpha < 1.0 - 1.0 / gamma && 1.0 - 1.0 / gamma < 1.0 - 1.0 / b))
    {
      fail("strict: 4 alpha < 1 - 1/gamma < 1 - 1/b violated");
    }
  }
  return out;
}

void ParameterSet::validate(int grid_n, double dealias_fraction, double max_eta) const
{
  const auto v = violations(grid_n, dealias_fraction, max_eta);
  if (!v.empty())
  {
    std::string msg;
    for (const auto &s : v)
    {
      msg += (msg.empty() ? "" : "; ") + s;
    }
    throw ConfigError(msg);
  }
}

}  // namespace mikado
