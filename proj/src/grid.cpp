#include "mikado/grid.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace mikado
{

namespace
{

std::mutex &plan_mutex()
{
  static std::mutex m;
  return m;
}

}  // namespace

Grid::Grid(int n, double dealias_fraction) : n_(n), dealias_(dealias_fraction)
{
  if (n < 4)
  {
    throw std::invalid_argument("grid: n must be at least 4");
  }
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
  {
    throw std::invalid_argument("grid: dealias_fraction must lie in (0,1]");
  }
  kmax_ = static_cast<int>(std::ceil(dealias_ * n_ / 2.0)) - 1;
  if (kmax_ > n_ / 2 - (n_ % 2 == 0 ? 1 : 0))
  {
    kmax_ = n_ / 2 - (n_ % 2 == 0 ? 1 : 0);
  }
  real_size_ = static_cast<std::size_t>(n_) * n_ * n_;
  spec_size_ = static_cast<std::size_t>(n_) * n_ * nkx();

  RealBuffer rtmp(real_size_);
  SpecBuffer ctmp(spec_size_);
  std::lock_guard<std::mutex> lock(plan_mutex());
  r2c_ = fftw_plan_dft_r2c_3d(n_, n_, n_, rtmp.data(),
                              reinterpret_cast<fftw_complex *>(ctmp.data()), FFTW_ESTIMATE);
  c2r_ = fftw_plan_dft_c2r_3d(n_, n_, n_, reinterpret_cast<fftw_complex *>(ctmp.data()),
                              rtmp.data(), FFTW_ESTIMATE);
  if (!r2c_ || !c2r_)
  {
    throw std::runtime_error("grid: FFTW planning failed");
  }
}

Grid::~Grid()
{
  std::lock_guard<std::mutex> lock(plan_mutex());
  if (r2c_)
  {
    fftw_destroy_plan(r2c_);
  }
  if (c2r_)
  {
    fftw_destroy_plan(c2r_);
  }
}

IVec3 Grid::mode(std::size_t flat) const
{
  const int nk = nkx();
  const int ix = static_cast<int>(flat % nk);
  const std::size_t rest = flat / nk;
  const int iy = static_cast<int>(rest % n_);
  const int iz = static_cast<int>(rest / n_);
  return {ix, wavenumber(iy), wavenumber(iz)};
}

std::size_t Grid::locate(const IVec3 &xi, bool &conjugate) const
{
  IVec3 k = xi;
  conjugate = false;
  if (k[0] < 0)
  {
    k = {-k[0], -k[1], -k[2]};
    conjugate = true;
  }
  auto wrap = [this](int v) { return ((v % n_) + n_) % n_; };
  return static_cast<std::size_t>(k[0]) +
         static_cast<std::size_t>(nkx()) *
             (static_cast<std::size_t>(wrap(k[1])) +
              static_cast<std::size_t>(n_) * static_cast<std::size_t>(wrap(k[2])));
}

Vec3 Grid::point(std::size_t flat) const
{
  const double h = spacing();
  const std::size_t ix = flat % n_;
  const std::size_t rest = flat / n_;
  const std::size_t iy = rest % n_;
  const std::size_t iz = rest / n_;
  return {h * ix, h * iy, h * iz};
}

double Grid::spacing() const { return 2.0 * M_PI / n_; }

void Grid::forward(const double *in, cplx *out) const
{
  // FFTW r2c preserves its input; the const_cast only satisfies the C signature.
  fftw_execute_dft_r2c(r2c_, const_cast<double *>(in), reinterpret_cast<fftw_complex *>(out));
  const double scale = 1.0 / static_cast<double>(real_size_);
  for (std::size_t i = 0; i < spec_size_; ++i)
  {
    out[i] *= scale;
  }
}

void Grid::inverse(const cplx *in, double *out) const
{
  // c2r overwrites its input, so each thread keeps its own staging copy.
  thread_local SpecBuffer staging;
  if (staging.size() < spec_size_)
  {
    staging.resize(spec_size_);
  }
  std::copy(in, in + spec_size_, staging.begin());
  fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex *>(staging.data()), out);
}

GridPtr make_grid(int n, double dealias_fraction)
{
  return std::make_shared<const Grid>(n, dealias_fraction);
}

}  // namespace mikado
