#ifndef MIKADO_TEST_UTIL_HPP
#define MIKADO_TEST_UTIL_HPP

#include <cmath>
#include <functional>
#include <random>

#include "mikado/field.hpp"

namespace testutil
{

using namespace mikado;

// Random real field with Fourier support in |xi_i| <= band.
inline Field random_field(const GridPtr &g, Rank r, int band, unsigned seed, bool zero_mean = false)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Field f(g, r);
  for (std::size_t idx = 0; idx < g->spec_size(); ++idx)
  {
    const IVec3 xi = g->mode(idx);
    if (std::abs(xi[0]) > band || std::abs(xi[1]) > band || std::abs(xi[2]) > band)
    {
      continue;
    }
    for (int c = 0; c < f.ncomp(); ++c)
    {
      f.comp(c)[idx] = cplx(gauss(rng), gauss(rng));
    }
  }
  if (zero_mean)
  {
    for (int c = 0; c < f.ncomp(); ++c)
    {
      f.comp(c)[0] = 0.0;
    }
  }
  // Projecting through real space restores conjugate symmetry on the self-conjugate planes.
  return f.to_real().to_spectral();
}

inline RealField sample(const GridPtr &g, Rank r, const std::function<double(const Vec3 &, int)> &fn)
{
  RealField f(g, r);
  for (std::size_t p = 0; p < g->real_size(); ++p)
  {
    const Vec3 x = g->point(p);
    for (int c = 0; c < f.ncomp(); ++c)
    {
      f.comp(c)[p] = fn(x, c);
    }
  }
  return f;
}

inline double max_abs(const RealField &f)
{
  double m = 0.0;
  for (int c = 0; c < f.ncomp(); ++c)
  {
    for (std::size_t p = 0; p < f.size(); ++p)
    {
      m = std::max(m, std::abs(f.comp(c)[p]));
    }
  }
  return m;
}

inline double max_abs_diff(const Field &a, const Field &b) { return max_abs((a - b).to_real()); }

}  // namespace testutil

#endif
