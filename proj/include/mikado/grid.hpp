#ifndef MIKADO_GRID_HPP
#define MIKADO_GRID_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include <fftw3.h>

namespace mikado
{

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using IVec3 = std::array<int, 3>;

template <typename T>
struct FftwAllocator
{
  using value_type = T;
  FftwAllocator() = default;
  template <typename U>
  FftwAllocator(const FftwAllocator<U> &)
  {
  }
  T *allocate(std::size_t count)
  {
    void *p = fftw_malloc(count * sizeof(T));
    if (!p)
    {
      throw std::bad_alloc();
    }
    return static_cast<T *>(p);
  }
  void deallocate(T *p, std::size_t) { fftw_free(p); }
  template <typename U>
  bool operator==(const FftwAllocator<U> &) const
  {
    return true;
  }
  template <typename U>
  bool operator!=(const FftwAllocator<U> &) const
  {
    return false;
  }
};

using RealBuffer = std::vector<double, FftwAllocator<double>>;
using SpecBuffer = std::vector<cplx, FftwAllocator<cplx>>;

//
// Uniform n^3 sampling of [0,2pi)^3 with real-to-complex FFT plans. Real arrays are
// x-fastest; spectral arrays keep kx in [0, n/2] and the full signed range in ky, kz.
//
class Grid
{
public:
  explicit Grid(int n, double dealias_fraction = 2.0 / 3.0);
  ~Grid();
  Grid(const Grid &) = delete;
  Grid &operator=(const Grid &) = delete;

  int n() const { return n_; }
  double dealias_fraction() const { return dealias_; }
  int nkx() const { return n_ / 2 + 1; }
  std::size_t real_size() const { return real_size_; }
  std::size_t spec_size() const { return spec_size_; }

  // Largest |xi_i| kept by differential operators: strictly below dealias_fraction*n/2.
  int kmax() const { return kmax_; }
  // Highest frequency the 2/3 box guarantees alias-free for quadratic products.
  double dealias_radius() const { return dealias_ * n_ / 2.0; }

  int wavenumber(int index) const { return index <= n_ / 2 ? index : index - n_; }
  IVec3 mode(std::size_t flat) const;
  bool in_box(const IVec3 &xi) const
  {
    return std::abs(xi[0]) <= kmax_ && std::abs(xi[1]) <= kmax_ && std::abs(xi[2]) <= kmax_;
  }
  // Signed mode xi is stored with kx >= 0; returns flat index and whether a conjugate is needed.
  std::size_t locate(const IVec3 &xi, bool &conjugate) const;

  Vec3 point(std::size_t flat) const;
  double spacing() const;

  // Forward transform normalized so that coefficients are means of f e^{-ix.xi}.
  void forward(const double *in, cplx *out) const;
  // Inverse transform; the input is left untouched.
  void inverse(const cplx *in, double *out) const;

private:
  int n_;
  double dealias_;
  int kmax_;
  std::size_t real_size_;
  std::size_t spec_size_;
  fftw_plan r2c_ = nullptr;
  fftw_plan c2r_ = nullptr;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int n, double dealias_fraction = 2.0 / 3.0);

}  // namespace mikado

#endif  // MIKADO_GRID_HPP
