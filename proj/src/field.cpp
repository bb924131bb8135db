#include "mikado/field.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mikado
{

namespace
{

void require_same(const Grid &a, const Grid &b, Rank ra, Rank rb)
{
  if (&a != &b && a.n() != b.n())
  {
    throw std::invalid_argument("field: grid mismatch");
  }
  if (ra != rb)
  {
    throw std::invalid_argument("field: rank mismatch");
  }
}

// Weight of component c in squared pointwise magnitudes.
double magnitude_weight(Rank r, int c) { return (r == Rank::tensor && c >= 3) ? 2.0 : 1.0; }

GridPtr refined_grid(const Grid &g)
{
  static std::mutex m;
  static std::map<std::pair<int, double>, std::weak_ptr<const Grid>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto key = std::make_pair(2 * g.n(), g.dealias_fraction());
  if (auto p = cache[key].lock())
  {
    return p;
  }
  auto p = make_grid(2 * g.n(), g.dealias_fraction());
  cache[key] = p;
  return p;
}

}  // namespace

Field &Field::operator+=(const Field &o) { return axpy(1.0, o); }
Field &Field::operator-=(const Field &o) { return axpy(-1.0, o); }

Field &Field::operator*=(double s)
{
  for (auto &c : data_)
  {
    for (auto &v : c)
    {
      v *= s;
    }
  }
  return *this;
}

Field &Field::axpy(double a, const Field &o)
{
  require_same(grid(), o.grid(), rank_, o.rank_);
  for (int c = 0; c < ncomp(); ++c)
  {
    cplx *dst = data_[c].data();
    const cplx *src = o.comp(c);
    const std::size_t m = size();
    for (std::size_t i = 0; i < m; ++i)
    {
      dst[i] += a * src[i];
    }
  }
  return *this;
}

RealField Field::to_real() const
{
  RealField out(grid_, rank_);
  for (int c = 0; c < ncomp(); ++c)
  {
    grid_->inverse(comp(c), out.comp(c));
  }
  return out;
}

Field operator+(Field a, const Field &b) { return a += b; }
Field operator-(Field a, const Field &b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

RealField &RealField::operator+=(const RealField &o) { return axpy(1.0, o); }
RealField &RealField::operator-=(const RealField &o) { return axpy(-1.0, o); }

RealField &RealField::operator*=(double s)
{
  for (auto &c : data_)
  {
    for (auto &v : c)
    {
      v *= s;
    }
  }
  return *this;
}

RealField &RealField::axpy(double a, const RealField &o)
{
  require_same(grid(), o.grid(), rank_, o.rank_);
  for (int c = 0; c < ncomp(); ++c)
  {
    double *dst = data_[c].data();
    const double *src = o.comp(c);
    const std::size_t m = size();
    for (std::size_t i = 0; i < m; ++i)
    {
      dst[i] += a * src[i];
    }
  }
  return *this;
}

Field RealField::to_spectral() const
{
  Field out(grid_, rank_);
  for (int c = 0; c < ncomp(); ++c)
  {
    grid_->forward(comp(c), out.comp(c));
  }
  return out;
}

RealField operator+(RealField a, const RealField &b) { return a += b; }
RealField operator-(RealField a, const RealField &b) { return a -= b; }

RealField multiply(const RealField &scalar, const RealField &f)
{
  if (scalar.rank() != Rank::scalar)
  {
    throw std::invalid_argument("multiply: first factor must be scalar");
  }
  RealField out(f.grid_ptr(), f.rank());
  const std::size_t m = f.size();
  const double *s = scalar.comp(0);
  for (int c = 0; c < f.ncomp(); ++c)
  {
    const double *src = f.comp(c);
    double *dst = out.comp(c);
    for (std::size_t i = 0; i < m; ++i)
    {
      dst[i] = s[i] * src[i];
    }
  }
  return out;
}

RealField outer(const RealField &u, const RealField &v)
{
  if (u.rank() != Rank::vector || v.rank() != Rank::vector)
  {
    throw std::invalid_argument("outer: vector fields required");
  }
  RealField out(u.grid_ptr(), Rank::tensor);
  const std::size_t m = u.size();
  for (int c = 0; c < 6; ++c)
  {
    const double *ui = u.comp(sym_row[c]);
    const double *uj = u.comp(sym_col[c]);
    const double *vi = v.comp(sym_row[c]);
    const double *vj = v.comp(sym_col[c]);
    double *dst = out.comp(c);
    for (std::size_t i = 0; i < m; ++i)
    {
      dst[i] = 0.5 * (ui[i] * vj[i] + vi[i] * uj[i]);
    }
  }
  return out;
}

RealField outer_self(const RealField &u)
{
  if (u.rank() != Rank::vector)
  {
    throw std::invalid_argument("outer_self: vector field required");
  }
  RealField out(u.grid_ptr(), Rank::tensor);
  const std::size_t m = u.size();
  for (int c = 0; c < 6; ++c)
  {
    const double *ui = u.comp(sym_row[c]);
    const double *uj = u.comp(sym_col[c]);
    double *dst = out.comp(c);
    for (std::size_t i = 0; i < m; ++i)
    {
      dst[i] = ui[i] * uj[i];
    }
  }
  return out;
}

RealField contract(const RealField &tensor, const RealField &u)
{
  if (tensor.rank() != Rank::tensor || u.rank() != Rank::vector)
  {
    throw std::invalid_argument("contract: tensor and vector required");
  }
  RealField out(u.grid_ptr(), Rank::vector);
  const std::size_t m = u.size();
  for (int i = 0; i < 3; ++i)
  {
    double *dst = out.comp(i);
    for (int j = 0; j < 3; ++j)
    {
      const double *t = tensor.comp(sym_index(i, j));
      const double *s = u.comp(j);
      for (std::size_t p = 0; p < m; ++p)
      {
        dst[p] += t[p] * s[p];
      }
    }
  }
  return out;
}

double sup_norm(const RealField &f)
{
  const std::size_t m = f.size();
  double best = 0.0;
  for (std::size_t i = 0; i < m; ++i)
  {
    double s = 0.0;
    for (int c = 0; c < f.ncomp(); ++c)
    {
      const double v = f.comp(c)[i];
      s += magnitude_weight(f.rank(), c) * v * v;
    }
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

double sup_norm(const Field &f) { return sup_norm(f.to_real()); }

double sup_norm_refined(const Field &f)
{
  const Grid &g = f.grid();
  GridPtr fine = refined_grid(g);
  const int n = g.n();
  RealBuffer acc(fine->real_size(), 0.0);
  RealBuffer samples(fine->real_size());
  SpecBuffer padded(fine->spec_size());
  for (int c = 0; c < f.ncomp(); ++c)
  {
    std::fill(padded.begin(), padded.end(), cplx{});
    const cplx *src = f.comp(c);
    for (std::size_t idx = 0; idx < g.spec_size(); ++idx)
    {
      const IVec3 xi = g.mode(idx);
      // A Nyquist row of the coarse grid is split evenly between +n/2 and -n/2.
      const bool nyx = (n % 2 == 0 && xi[0] == n / 2);
      const bool nyy = (n % 2 == 0 && xi[1] == n / 2);
      const bool nyz = (n % 2 == 0 && xi[2] == n / 2);
      const double w = (nyx ? 0.5 : 1.0) * (nyy ? 0.5 : 1.0) * (nyz ? 0.5 : 1.0);
      for (int sy = 0; sy < (nyy ? 2 : 1); ++sy)
      {
        for (int sz = 0; sz < (nyz ? 2 : 1); ++sz)
        {
          const IVec3 k = {xi[0], sy ? -xi[1] : xi[1], sz ? -xi[2] : xi[2]};
          bool conj = false;
          const std::size_t fi = fine->locate(k, conj);
          padded[fi] += w * (conj ? std::conj(src[idx]) : src[idx]);
        }
      }
    }
    fine->inverse(padded.data(), samples.data());
    const double wt = magnitude_weight(f.rank(), c);
    for (std::size_t i = 0; i < acc.size(); ++i)
    {
      acc[i] += wt * samples[i] * samples[i];
    }
  }
  double best = 0.0;
  for (double v : acc)
  {
    best = std::max(best, v);
  }
  return std::sqrt(best);
}

double lp_norm(const RealField &f, double p)
{
  const std::size_t m = f.size();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i)
  {
    double s = 0.0;
    for (int c = 0; c < f.ncomp(); ++c)
    {
      const double v = f.comp(c)[i];
      s += magnitude_weight(f.rank(), c) * v * v;
    }
    total += std::pow(s, 0.5 * p);
  }
  return std::pow(total / static_cast<double>(m), 1.0 / p);
}

double l2_norm(const Field &f)
{
  const Grid &g = f.grid();
  const int n = g.n();
  double total = 0.0;
  for (int c = 0; c < f.ncomp(); ++c)
  {
    const cplx *src = f.comp(c);
    double part = 0.0;
    for (std::size_t idx = 0; idx < g.spec_size(); ++idx)
    {
      const int kx = static_cast<int>(idx % g.nkx());
      // Interior kx planes stand for themselves and their conjugate partners.
      const double mult = (kx == 0 || (n % 2 == 0 && kx == n / 2)) ? 1.0 : 2.0;
      part += mult * std::norm(src[idx]);
    }
    total += magnitude_weight(f.rank(), c) * part;
  }
  return std::sqrt(total);
}

double max_coefficient(const Field &f)
{
  double best = 0.0;
  for (int c = 0; c < f.ncomp(); ++c)
  {
    const cplx *src = f.comp(c);
    for (std::size_t i = 0; i < f.size(); ++i)
    {
      best = std::max(best, std::abs(src[i]));
    }
  }
  return best;
}

double conjugate_symmetry_defect(const Field &f)
{
  const Grid &g = f.grid();
  const int n = g.n();
  double worst = 0.0;
  for (int c = 0; c < f.ncomp(); ++c)
  {
    const cplx *src = f.comp(c);
    for (std::size_t idx = 0; idx < g.spec_size(); ++idx)
    {
      const IVec3 xi = g.mode(idx);
      if (xi[0] != 0 && !(n % 2 == 0 && xi[0] == n / 2))
      {
        continue;
      }
      const int ky = (n % 2 == 0 && xi[1] == n / 2) ? xi[1] : -xi[1];
      const int kz = (n % 2 == 0 && xi[2] == n / 2) ? xi[2] : -xi[2];
      bool conj = false;
      const std::size_t j = g.locate({xi[0], ky, kz}, conj);
      worst = std::max(worst, std::abs(src[j] - std::conj(src[idx])));
    }
  }
  return worst;
}

}  // namespace mikado
