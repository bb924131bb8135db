#ifndef MIKADO_FIELD_HPP
#define MIKADO_FIELD_HPP

#include <array>
#include <vector>

#include "mikado/grid.hpp"

namespace mikado
{

enum class Rank : int
{
  scalar = 1,
  vector = 3,
  tensor = 6
};

inline int components(Rank r) { return static_cast<int>(r); }

// Symmetric tensors keep (11,22,33,12,13,23).
constexpr int sym_index(int i, int j)
{
  constexpr int table[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
  return table[i][j];
}
constexpr std::array<int, 6> sym_row = {0, 1, 2, 0, 0, 1};
constexpr std::array<int, 6> sym_col = {0, 1, 2, 1, 2, 2};

template <typename Buffer>
class FieldBase
{
public:
  FieldBase() = default;
  FieldBase(GridPtr grid, Rank rank, std::size_t size) : grid_(std::move(grid)), rank_(rank)
  {
    data_.resize(components(rank));
    for (auto &c : data_)
    {
      c.assign(size, typename Buffer::value_type{});
    }
  }

  const Grid &grid() const { return *grid_; }
  const GridPtr &grid_ptr() const { return grid_; }
  Rank rank() const { return rank_; }
  int ncomp() const { return components(rank_); }
  std::size_t size() const { return data_.empty() ? 0 : data_[0].size(); }
  bool empty() const { return data_.empty(); }

  typename Buffer::value_type *comp(int c) { return data_[c].data(); }
  const typename Buffer::value_type *comp(int c) const { return data_[c].data(); }

protected:
  GridPtr grid_;
  Rank rank_ = Rank::scalar;
  std::vector<Buffer> data_;
};

class RealField;

//
// Fourier coefficients of a real field. Coefficients follow the normalized convention
// f(x) = sum_xi fhat(xi) e^{ix.xi}.
//
class Field : public FieldBase<SpecBuffer>
{
public:
  Field() = default;
  Field(GridPtr grid, Rank rank) : FieldBase(grid, rank, grid->spec_size()) {}

  Field &operator+=(const Field &o);
  Field &operator-=(const Field &o);
  Field &operator*=(double s);
  Field &axpy(double a, const Field &o);

  cplx mean(int c) const { return data_[c][0]; }
  RealField to_real() const;
};

Field operator+(Field a, const Field &b);
Field operator-(Field a, const Field &b);
Field operator*(double s, Field a);

// Grid samples of a real field, one x-fastest array per component.
class RealField : public FieldBase<RealBuffer>
{
public:
  RealField() = default;
  RealField(GridPtr grid, Rank rank) : FieldBase(grid, rank, grid->real_size()) {}

  RealField &operator+=(const RealField &o);
  RealField &operator-=(const RealField &o);
  RealField &operator*=(double s);
  RealField &axpy(double a, const RealField &o);

  Field to_spectral() const;
};

RealField operator+(RealField a, const RealField &b);
RealField operator-(RealField a, const RealField &b);

// Pointwise algebra on samples.
RealField multiply(const RealField &scalar, const RealField &f);
RealField outer(const RealField &u, const RealField &v);  // symmetrized u (.) v
RealField outer_self(const RealField &u);                 // u (x) u
RealField contract(const RealField &tensor, const RealField &u);  // T u

// Pointwise Euclidean (vector) or Frobenius (tensor) magnitude maximized over samples.
double sup_norm(const RealField &f);
double sup_norm(const Field &f);
// Same maximum on the factor-2 refined grid obtained by zero padding.
double sup_norm_refined(const Field &f);
double lp_norm(const RealField &f, double p);  // normalized measure
double l2_norm(const Field &f);                // Parseval, normalized measure
double max_coefficient(const Field &f);
// Largest violation of fhat(-xi) = conj fhat(xi) on the self-conjugate planes.
double conjugate_symmetry_defect(const Field &f);

}  // namespace mikado

#endif  // MIKADO_FIELD_HPP
