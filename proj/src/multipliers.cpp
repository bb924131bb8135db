#include "mikado/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mikado
{

namespace
{

const cplx I(0.0, 1.0);

template <typename Fn>
void for_each_mode(const Grid &g, Fn &&fn)
{
  const int n = g.n();
  const int nk = g.nkx();
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz)
  {
    const int kz = g.wavenumber(iz);
    for (int iy = 0; iy < n; ++iy)
    {
      const int ky = g.wavenumber(iy);
      for (int kx = 0; kx < nk; ++kx, ++idx)
      {
        fn(idx, IVec3{kx, ky, kz});
      }
    }
  }
}

double norm2(const IVec3 &xi)
{
  return static_cast<double>(xi[0]) * xi[0] + static_cast<double>(xi[1]) * xi[1] +
         static_cast<double>(xi[2]) * xi[2];
}

void require_rank(const Field &f, Rank r, const char *op)
{
  if (f.rank() != r)
  {
    throw std::invalid_argument(std::string(op) + ": rank mismatch");
  }
}

// Antiderivative of the bump on [-1,1], tabulated once and read back by cubic Hermite
// interpolation with the exact bump as slope.
class BumpIntegral
{
public:
  BumpIntegral()
  {
    static const double gx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                 -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                 0.7966664774136267,  0.9602898564975363};
    static const double gw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    h_ = 2.0 / cells_;
    table_.assign(cells_ + 1, 0.0);
    for (int c = 0; c < cells_; ++c)
    {
      const double a = -1.0 + c * h_;
      double s = 0.0;
      for (int q = 0; q < 8; ++q)
      {
        s += gw[q] * bump(a + 0.5 * h_ * (gx[q] + 1.0));
      }
      table_[c + 1] = table_[c] + 0.5 * h_ * s;
    }
    total_ = table_.back();
  }

  // Normalized cumulative integral of the bump from -1 to u.
  double operator()(double u) const
  {
    if (u <= -1.0)
    {
      return 0.0;
    }
    if (u >= 1.0)
    {
      return 1.0;
    }
    const double pos = (u + 1.0) / h_;
    int c = static_cast<int>(pos);
    if (c >= cells_)
    {
      c = cells_ - 1;
    }
    const double s = pos - c;
    const double a = -1.0 + c * h_;
    const double f0 = table_[c], f1 = table_[c + 1];
    const double d0 = bump(a) * h_, d1 = bump(a + h_) * h_;
    const double s2 = s * s, s3 = s2 * s;
    const double v = (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * d0 +
                     (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * d1;
    return v / total_;
  }

private:
  static constexpr int cells_ = 4096;
  double h_ = 0.0;
  double total_ = 0.0;
  std::vector<double> table_;
};

const BumpIntegral &bump_integral()
{
  static const BumpIntegral table;
  return table;
}

}  // namespace

double bump(double r)
{
  const double r2 = r * r;
  if (r2 >= 1.0)
  {
    return 0.0;
  }
  return std::exp(1.0 - 1.0 / (1.0 - r2));
}

double smooth_step(double r)
{
  if (r <= 1.0)
  {
    return 1.0;
  }
  if (r >= 2.0)
  {
    return 0.0;
  }
  return std::clamp(1.0 - bump_integral()(2.0 * r - 3.0), 0.0, 1.0);
}

double lp_window(double r) { return smooth_step(r) - smooth_step(2.0 * r); }

Field apply_multiplier(const Field &f, const MultiplierSymbol &m)
{
  const Grid &g = f.grid();
  if (!m.at_zero)
  {
    // Means at rounding level of the field count as zero.
    const double floor = 1e-13 * max_coefficient(f);
    for (int c = 0; c < f.ncomp(); ++c)
    {
      if (std::abs(f.mean(c)) > floor)
      {
        throw MultiplierError("mean-mode-undefined");
      }
    }
  }
  Field out(f.grid_ptr(), f.rank());
  for_each_mode(g, [&](std::size_t idx, const IVec3 &xi) {
    cplx v;
    if (xi[0] == 0 && xi[1] == 0 && xi[2] == 0)
    {
      v = m.at_zero.value_or(cplx{});
    }
    else if (m.differential && !g.in_box(xi))
    {
      v = 0.0;
    }
    else
    {
      v = m.scalar(xi);
    }
    for (int c = 0; c < f.ncomp(); ++c)
    {
      out.comp(c)[idx] = v * f.comp(c)[idx];
    }
  });
  return out;
}

MultiplierSymbol heat_symbol(double t)
{
  if (t < 0.0)
  {
    throw std::invalid_argument("heat: negative time");
  }
  return {[t](const IVec3 &xi) { return cplx(std::exp(-t * norm2(xi))); }, cplx(1.0), false,
          std::nullopt, "heat"};
}

MultiplierSymbol laplacian_symbol()
{
  return {[](const IVec3 &xi) { return cplx(-norm2(xi)); }, cplx(0.0), true, 2.0, "laplacian"};
}

MultiplierSymbol fractional_symbol(double s)
{
  return {[s](const IVec3 &xi) { return cplx(std::pow(norm2(xi), 0.5 * s)); }, cplx(0.0), true,
          s, "fractional"};
}

MultiplierSymbol littlewood_paley_symbol(double N)
{
  return {[N](const IVec3 &xi) { return cplx(lp_window(std::sqrt(norm2(xi)) / N)); },
          cplx(0.0), false, std::nullopt, "littlewood-paley"};
}

MultiplierSymbol low_pass_symbol()
{
  return {[](const IVec3 &xi) { return cplx(smooth_step(2.0 * std::sqrt(norm2(xi)))); },
          cplx(1.0), false, std::nullopt, "sigma"};
}

MultiplierSymbol gaussian_symbol(double sigma)
{
  return {[sigma](const IVec3 &xi) { return cplx(std::exp(-0.5 * sigma * sigma * norm2(xi))); },
          cplx(1.0), false, std::nullopt, "gaussian"};
}

MultiplierSymbol dealias_symbol()
{
  return {[](const IVec3 &) { return cplx(1.0); }, cplx(1.0), true, 0.0, "dealias"};
}

Field heat_evolve(const Field &f, double t)
{
  if (t < 0.0)
  {
    throw std::invalid_argument("heat_evolve: negative time");
  }
  if (t == 0.0)
  {
    return f;
  }
  return apply_multiplier(f, heat_symbol(t));
}

Field littlewood_paley(const Field &f, double N) { return apply_multiplier(f, littlewood_paley_symbol(N)); }
Field low_pass(const Field &f) { return apply_multiplier(f, low_pass_symbol()); }
Field mollify(const Field &f, double sigma) { return apply_multiplier(f, gaussian_symbol(sigma)); }
Field dealias(const Field &f) { return apply_multiplier(f, dealias_symbol()); }

Field gradient(const Field &s)
{
  require_rank(s, Rank::scalar, "gradient");
  const Grid &g = s.grid();
  Field out(s.grid_ptr(), Rank::vector);
  for_each_mode(g, [&](std::size_t idx, const IVec3 &xi) {
    if (!g.in_box(xi))
    {
      return;
    }
    const cplx v = s.comp(0)[idx];
    for (int i = 0; i < 3; ++i)
    {
      out.comp(i)[idx] = I * static_cast<double>(xi[i]) * v;
    }
  });
  return out;
}

Field divergence(const Field &f)
{
  const Grid &g = f.grid();
  if (f.rank() == Rank::vector)
  {
    Field out(f.grid_ptr(), Rank::scalar);
    for_each_mode(g, [&](std::size_t idx, const IVec3 &xi) {
      if (!g.in_box(xi))
      {
        return;
      }
      cplx s = 0.0;
      for (int i = 0; i < 3; ++i)
      {
        s += static_cast<double>(xi[i]) * f.comp(i)[idx];
      }
      out.comp(0)[idx] = I * s;
    });
    return out;
  }
  require_rank(f, Rank::tensor, "divergence");
  Field out(f.grid_ptr(), Rank::vector);
  for_each_mode(g, [&](std::size_t idx, const IVec3 &xi) {
    if (!g.in_box(xi))
    {
      return;
    }
    for (int i = 0; i < 3; ++i)
    {
      cplx s = 0.0;
      for (int j = 0; j < 3; ++j)
      {
        s += static_cast<double>(xi[j]) * f.comp(sym_index(i, j))[idx];
      }
      out.comp(i)[idx] = I * s;
    }
  });
  return out;
}

Field curl(const Field &f)
{
  require_rank(f, Rank::vector, "curl");
  const Grid &g = f.grid();
  Field out(f.grid_ptr(), Rank::vector);
  for_each_mode(g, [&](std::size_t idx, const IVec3 &xi) {
    if (!g.in_box(xi))
    {
      return;
    }
    const cplx a = f.comp(0)[idx], b = f.comp(1)[idx], c = f.comp(2)[idx];
    out.comp(0)[idx] = I * (static_cast<double>(xi[1]) * c - static_cast<double>(xi[2]) * b);
    out.comp(1)[idx] = I * (static_cast<double>(xi[2]) * a - static_cast<double>(xi[0]) * c);
    out.comp(2)[idx] = I * (static_cast<double>(xi[0]) * b - static_cast<double>(xi[1]) * a);
  });
  return out;
}

Field curl_curl(const Field &f)
{
  require_rank(f, Rank::vector, "curl_curl");
  const Grid &g = f.grid();
  Field out(f.grid_ptr(), Rank::vector);
  for_each_mode(g, [&](std::size_t idx, const IVec3 &xi) {
    if (!g.in_box(xi))
    {
      return;
    }
    const double k2 = norm2(xi);
    cplx dot = 0.0;
    for (int i = 0; i < 3; ++i)
    {
      dot += static_cast<double>(xi[i]) * f.comp(i)[idx];
    }
    for (int i = 0; i < 3; ++i)
    {
      out.comp(i)[idx] = k2 * f.comp(i)[idx] - static_cast<double>(xi[i]) * dot;
    }
  });
  return out;
}

Field d_operator(const Field &f)
{
  require_rank(f, Rank::vector, "d_operator");
  const Grid &g = f.grid();
  Field out(f.grid_ptr(), Rank::tensor);
  for_each_mode(g, [&](std::size_t idx, const IVec3 &xi) {
    if (!g.in_box(xi))
    {
      return;
    }
    cplx div = 0.0;
    for (int i = 0; i < 3; ++i)
    {
      div += static_cast<double>(xi[i]) * f.comp(i)[idx];
    }
    div *= I;
    for (int c = 0; c < 6; ++c)
    {
      const int i = sym_row[c], j = sym_col[c];
      cplx v = -I * (static_cast<double>(xi[i]) * f.comp(j)[idx] +
                     static_cast<double>(xi[j]) * f.comp(i)[idx]);
      if (i == j)
      {
        v += 2.0 * div;
      }
      out.comp(c)[idx] = v;
    }
  });
  return out;
}

Field anti_divergence(const Field &v)
{
  require_rank(v, Rank::vector, "anti_divergence");
  const Grid &g = v.grid();
  Field out(v.grid_ptr(), Rank::tensor);
  for_each_mode(g, [&](std::size_t idx, const IVec3 &xi) {
    if (!g.in_box(xi))
    {
      return;
    }
    const double k2 = norm2(xi);
    if (k2 == 0.0)
    {
      return;
    }
    cplx dot = 0.0;
    for (int i = 0; i < 3; ++i)
    {
      dot += static_cast<double>(xi[i]) * v.comp(i)[idx];
    }
    for (int c = 0; c < 6; ++c)
    {
      const int i = sym_row[c], j = sym_col[c];
      const double xi_i = xi[i], xi_j = xi[j];
      cplx r = 0.5 * xi_i * xi_j * dot / (k2 * k2) -
               (xi_i * v.comp(j)[idx] + xi_j * v.comp(i)[idx]) / k2;
      if (i == j)
      {
        r += 0.5 * dot / k2;
      }
      out.comp(c)[idx] = I * r;
    }
  });
  return out;
}

Field leray(const Field &f)
{
  require_rank(f, Rank::vector, "leray");
  const Grid &g = f.grid();
  Field out(f.grid_ptr(), Rank::vector);
  for_each_mode(g, [&](std::size_t idx, const IVec3 &xi) {
    if (!g.in_box(xi))
    {
      return;
    }
    const double k2 = norm2(xi);
    if (k2 == 0.0)
    {
      for (int i = 0; i < 3; ++i)
      {
        out.comp(i)[idx] = f.comp(i)[idx];
      }
      return;
    }
    cplx dot = 0.0;
    for (int i = 0; i < 3; ++i)
    {
      dot += static_cast<double>(xi[i]) * f.comp(i)[idx];
    }
    for (int i = 0; i < 3; ++i)
    {
      out.comp(i)[idx] = f.comp(i)[idx] - static_cast<double>(xi[i]) * dot / k2;
    }
  });
  return out;
}

Field leray_div(const Field &tensor) { return leray(divergence(tensor)); }

Field laplacian(const Field &f) { return apply_multiplier(f, laplacian_symbol()); }

Field inverse_laplacian(const Field &f)
{
  MultiplierSymbol m{[](const IVec3 &xi) { return cplx(-1.0 / norm2(xi)); }, cplx(0.0), true,
                     -2.0, "inverse-laplacian"};
  return apply_multiplier(f, m);
}

Field fractional(const Field &f, double s) { return apply_multiplier(f, fractional_symbol(s)); }

double derivative_sup(const Field &f, int m)
{
  if (m < 0)
  {
    throw std::invalid_argument("derivative_sup: m must be nonnegative");
  }
  const Grid &g = f.grid();
  RealBuffer acc(g.real_size(), 0.0);
  RealBuffer samples(g.real_size());
  Field work(f.grid_ptr(), Rank::scalar);
  int orders = 1;
  for (int i = 0; i < m; ++i)
  {
    orders *= 3;
  }
  for (int c = 0; c < f.ncomp(); ++c)
  {
    const double wt = (f.rank() == Rank::tensor && c >= 3) ? 2.0 : 1.0;
    for (int code = 0; code < orders; ++code)
    {
      for_each_mode(g, [&](std::size_t idx, const IVec3 &xi) {
        cplx v = f.comp(c)[idx];
        if (m > 0 && !g.in_box(xi))
        {
          v = 0.0;
        }
        int rest = code;
        for (int i = 0; i < m; ++i)
        {
          v *= I * static_cast<double>(xi[rest % 3]);
          rest /= 3;
        }
        work.comp(0)[idx] = v;
      });
      g.inverse(work.comp(0), samples.data());
      for (std::size_t p = 0; p < acc.size(); ++p)
      {
        acc[p] += wt * samples[p] * samples[p];
      }
    }
  }
  return std::sqrt(*std::max_element(acc.begin(), acc.end()));
}

std::vector<double> dyadic_bands(const Grid &g)
{
  const double kmax = std::sqrt(3.0) * (g.n() / 2);
  std::vector<double> out;
  for (double N = 1.0;; N *= 2.0)
  {
    out.push_back(N);
    if (N >= kmax)
    {
      break;
    }
  }
  return out;
}

}  // namespace mikado
