#include "mikado/geometry.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "json.hpp"
#include "mikado/multipliers.hpp"
#include "mikado/params.hpp"

namespace mikado
{

namespace
{

constexpr double two_pi = 2.0 * M_PI;

double dot(const Vec3 &a, const Vec3 &b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3 &a, const Vec3 &b)
{
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 to_vec(const IVec3 &v) { return {double(v[0]), double(v[1]), double(v[2])}; }

Vec3 normalized(const Vec3 &v)
{
  const double n = std::sqrt(dot(v, v));
  return {v[0] / n, v[1] / n, v[2] / n};
}

long det3(const IVec3 &a, const IVec3 &b, const IVec3 &c)
{
  return static_cast<long>(a[0]) * (b[1] * c[2] - b[2] * c[1]) - static_cast<long>(a[1]) * (b[0] * c[2] - b[2] * c[0]) +
         static_cast<long>(a[2]) * (b[0] * c[1] - b[1] * c[0]);
}

// u, w with det(theta, u, w) = +-1.
std::pair<IVec3, IVec3> unimodular_completion(const IVec3 &theta)
{
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c)
        for (int d = -2; d <= 2; ++d)
          for (int e = -2; e <= 2; ++e)
            for (int f = -2; f <= 2; ++f)
            {
              const IVec3 u{a, b, c}, w{d, e, f};
              const long det = det3(theta, u, w);
              if (det == 1 || det == -1)
              {
                return {u, w};
              }
            }
  throw std::invalid_argument("pipe line: direction is not primitive");
}

}  // namespace

double pipe_profile(double r) { return bump(r); }

PipeLine::PipeLine(const IVec3 &theta, const Vec3 &offset) : theta_(theta), offset_(offset)
{
  const Vec3 t = normalized(to_vec(theta));
  const Vec3 helper = std::abs(t[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  e1_ = normalized(cross(t, helper));
  e2_ = cross(t, e1_);
  length_ = two_pi * std::sqrt(dot(to_vec(theta), to_vec(theta)));

  const auto [u, w] = unimodular_completion(theta);
  const Vec3 uu = to_vec(u), ww = to_vec(w);
  b1_ = {two_pi * dot(uu, e1_), two_pi * dot(uu, e2_)};
  b2_ = {two_pi * dot(ww, e1_), two_pi * dot(ww, e2_)};
  // Lagrange reduction of the projected lattice basis.
  auto n2 = [](const std::array<double, 2> &v) { return v[0] * v[0] + v[1] * v[1]; };
  for (int it = 0; it < 64; ++it)
  {
    if (n2(b1_) > n2(b2_))
    {
      std::swap(b1_, b2_);
    }
    const double mu = std::round((b1_[0] * b2_[0] + b1_[1] * b2_[1]) / n2(b1_));
    if (mu == 0.0)
    {
      break;
    }
    b2_ = {b2_[0] - mu * b1_[0], b2_[1] - mu * b1_[1]};
  }
  const double det = b1_[0] * b2_[1] - b1_[1] * b2_[0];
  inv_ = {b2_[1] / det, -b2_[0] / det, -b1_[1] / det, b1_[0] / det};
}

double PipeLine::distance(const Vec3 &y) const
{
  const Vec3 p = {y[0] - offset_[0], y[1] - offset_[1], y[2] - offset_[2]};
  const double a = dot(p, e1_), b = dot(p, e2_);
  const double c1 = std::round(inv_[0] * a + inv_[1] * b);
  const double c2 = std::round(inv_[2] * a + inv_[3] * b);
  double best = std::numeric_limits<double>::infinity();
  for (int i = -2; i <= 2; ++i)
  {
    for (int j = -2; j <= 2; ++j)
    {
      const double x = a - (c1 + i) * b1_[0] - (c2 + j) * b2_[0];
      const double z = b - (c1 + i) * b1_[1] - (c2 + j) * b2_[1];
      best = std::min(best, x * x + z * z);
    }
  }
  return std::sqrt(best);
}

namespace
{

double axis_gap(const IVec3 &ta, const Vec3 &xa, const IVec3 &tb, const Vec3 &xb)
{
  const IVec3 n = {ta[1] * tb[2] - ta[2] * tb[1], ta[2] * tb[0] - ta[0] * tb[2], ta[0] * tb[1] - ta[1] * tb[0]};
  const int g = std::gcd(std::gcd(std::abs(n[0]), std::abs(n[1])), std::abs(n[2]));
  if (g == 0)
  {
    throw std::invalid_argument("line_distance: parallel lines");
  }
  const Vec3 d = {xb[0] - xa[0], xb[1] - xa[1], xb[2] - xa[2]};
  const double period = two_pi * g;
  double s = std::fmod(dot(d, to_vec(n)), period);
  if (s < 0)
  {
    s += period;
  }
  return std::min(s, period - s) / std::sqrt(dot(to_vec(n), to_vec(n)));
}

}  // namespace

double line_distance(const PipeLine &a, const PipeLine &b)
{
  return axis_gap(a.theta(), a.offset(), b.theta(), b.offset());
}

double PipeFamily::total_length() const
{
  double s = 0.0;
  for (const auto &l : lines)
  {
    s += l.length();
  }
  return s;
}

double PipeFamily::volume_fraction() const { return M_PI * delta0 * delta0 * total_length() / std::pow(two_pi, 3); }

double PipeFamily::profile(int j, const Vec3 &y) const
{
  const double d = lines[j].distance(y);
  return d < delta0 ? pipe_profile(d / delta0) : 0.0;
}

double PipeFamily::nearest_axis(const Vec3 &y) const
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto &l : lines)
  {
    best = std::min(best, l.distance(y));
  }
  return best;
}

std::string PipeFamily::to_json() const
{
  nlohmann::ordered_json out;
  out["delta"] = delta;
  out["delta0"] = delta0;
  out["halvings"] = halvings;
  out["min_axis_distance"] = min_axis_distance;
  out["support_separation"] = support_separation();
  out["separation_over_delta0"] = support_separation() / delta0;
  out["volume_fraction"] = volume_fraction();
  for (int j = 0; j < 6; ++j)
  {
    out["offsets"].push_back({offsets[j][0], offsets[j][1], offsets[j][2]});
    out["lengths"].push_back(lines[j].length());
  }
  return out.dump(2);
}

PipeFamily place_pipes(const NashFrame &frame, double delta, double delta0_override)
{
  if (!(delta > 0.0 && delta <= 0.05))
  {
    throw std::invalid_argument("place_pipes: delta must lie in (0, 1/20]");
  }
  PipeFamily fam;
  fam.frame = frame;
  fam.delta = delta;
  const int steps = 64;
  const double h = two_pi / steps;
  fam.offsets[0] = {0.0, 0.0, 0.0};
  fam.lines.emplace_back(frame.theta[0], fam.offsets[0]);
  double overall = std::numeric_limits<double>::infinity();
  for (int j = 1; j < 6; ++j)
  {
    double best = -1.0;
    Vec3 best_x{};
    for (int iz = 0; iz < steps; ++iz)
    {
      for (int iy = 0; iy < steps; ++iy)
      {
        for (int ix = 0; ix < steps; ++ix)
        {
          const Vec3 x = {h * ix, h * iy, h * iz};
          double m = std::numeric_limits<double>::infinity();
          for (int i = 0; i < j && m > best; ++i)
          {
            m = std::min(m, axis_gap(frame.theta[i], fam.offsets[i], frame.theta[j], x));
          }
          if (m > best + 1e-12)
          {
            best = m;
            best_x = x;
          }
        }
      }
    }
    fam.offsets[j] = best_x;
    fam.lines.emplace_back(frame.theta[j], best_x);
    overall = std::min(overall, best);
  }
  fam.min_axis_distance = overall;

  if (delta0_override > 0.0)
  {
    fam.delta0 = delta0_override;
    if (fam.volume_fraction() > delta || !(fam.support_separation() > 10.0 * fam.delta0))
    {
      throw PlacementError("pipe-placement: delta0 override violates volume or separation (max axis separation " +
                           std::to_string(overall) + ")");
    }
    return fam;
  }
  // Largest radius with the volume bound, then halve until separated.
  fam.delta0 = std::sqrt(delta * std::pow(two_pi, 3) / (M_PI * fam.total_length()));
  while (!(fam.support_separation() > 10.0 * fam.delta0))
  {
    fam.delta0 *= 0.5;
    if (++fam.halvings > 60)
    {
      throw PlacementError("pipe-placement: achieved max separation " + std::to_string(overall));
    }
  }
  return fam;
}

RealField MikadoLevel::potential(const NashFrame &frame, int j) const
{
  RealField out(q[j].grid_ptr(), Rank::vector);
  const double s = 1.0 / (static_cast<double>(N) * static_cast<double>(N));
  for (int c = 0; c < 3; ++c)
  {
    const double w = s * frame.theta[j][c];
    const double *src = q[j].comp(0);
    double *dst = out.comp(c);
    for (std::size_t p = 0; p < out.size(); ++p)
    {
      dst[p] = w * src[p];
    }
  }
  return out;
}

double continuum_normalizer(const PipeFamily &family, int j, long M, long N)
{
  const IVec3 &e = family.frame.eta[j];
  const Vec3 &xj = family.offsets[j];
  const double en = std::sqrt(double(family.frame.eta_norm_sq(j)));
  const double c = N * (1.0 / M - 1.0) * (xj[0] * e[0] + xj[1] * e[1] + xj[2] * e[2]);
  const double w = double(N) / double(M) * family.delta0 * en;
  // Gauss-Legendre in the radius, trapezoid in the (periodic) angle.
  static const std::array<double, 8> gx = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                           -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                           0.7966664774136267,  0.9602898564975363};
  static const std::array<double, 8> gw = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};
  const int cells = 256, na = 512;
  double sum = 0.0;
  for (int i = 0; i < cells; ++i)
  {
    for (int g = 0; g < 8; ++g)
    {
      const double rho = (i + 0.5 + 0.5 * gx[g]) / cells;
      const double p = pipe_profile(rho);
      double ang_sum = 0.0;
      for (int a = 0; a < na; ++a)
      {
        const double s = std::sin(w * rho * std::cos(2 * M_PI * a / na) + c);
        ang_sum += s * s;
      }
      sum += 0.5 * gw[g] / cells * p * p * rho * ang_sum * (2 * M_PI / na);
    }
  }
  const double delta0 = family.delta0;
  return family.lines[j].length() * delta0 * delta0 * sum / std::pow(2 * M_PI, 3);
}

MikadoLevel build_mikado_level(const GridPtr &grid, const PipeFamily &family, int k, long M, long N,
                               bool oscillations)
{
  if (M <= 0 || N <= 0 || N % M != 0)
  {
    throw std::invalid_argument("mikado level: N_k must be a positive multiple of M_k");
  }
  double max_eta = 0.0;
  for (int j = 0; j < 6; ++j)
  {
    max_eta = std::max(max_eta, std::sqrt(double(family.frame.eta_norm_sq(j))));
  }
  if (oscillations && grid->dealias_radius() < 2.0 * N * max_eta)
  {
    throw ConfigError("grid resolvability: level " + std::to_string(k) + " needs dealias_fraction*n/2 >= " +
                      std::to_string(2.0 * N * max_eta));
  }
  MikadoLevel lvl;
  lvl.k = k;
  lvl.M = M;
  lvl.N = N;
  for (int j = 0; j < 6; ++j)
  {
    lvl.A[j] = continuum_normalizer(family, j, M, N);
  }
  if (!oscillations)
  {
    return lvl;
  }
  for (auto &f : lvl.q)
  {
    f = RealField(grid, Rank::scalar);
  }
  std::array<double, 6> acc{};
  const std::size_t m = grid->real_size();
  for (std::size_t p = 0; p < m; ++p)
  {
    const Vec3 x = grid->point(p);
    const Vec3 y = {M * x[0], M * x[1], M * x[2]};
    for (int j = 0; j < 6; ++j)
    {
      const double d = family.lines[j].distance(y);
      double val = 0.0;
      if (d < family.delta0)
      {
        const Vec3 &xj = family.offsets[j];
        const IVec3 &e = family.frame.eta[j];
        const double phase = N * ((x[0] - xj[0]) * e[0] + (x[1] - xj[1]) * e[1] + (x[2] - xj[2]) * e[2]);
        val = pipe_profile(d / family.delta0) * std::sin(phase);
      }
      acc[j] += val * val;
      lvl.q[j].comp(0)[p] = val;
    }
  }
  for (int j = 0; j < 6; ++j)
  {
    lvl.A_grid[j] = acc[j] / static_cast<double>(m);
  }
  return lvl;
}

Vec3 potential_value(const PipeFamily &family, int j, long M, long N, const Vec3 &x)
{
  const Vec3 y = {M * x[0], M * x[1], M * x[2]};
  const Vec3 &xj = family.offsets[j];
  const IVec3 &e = family.frame.eta[j];
  const double phase = N * ((x[0] - xj[0]) * e[0] + (x[1] - xj[1]) * e[1] + (x[2] - xj[2]) * e[2]);
  const double s = family.profile(j, y) * std::sin(phase) / (double(N) * double(N));
  const IVec3 &t = family.frame.theta[j];
  return {s * t[0], s * t[1], s * t[2]};
}

double level_cutoff(const PipeFamily &family, long M, const Vec3 &x)
{
  const double d = family.nearest_axis({M * x[0], M * x[1], M * x[2]});
  return smooth_step(d / family.delta0 - 1.0);
}

RealField cutoff(const GridPtr &grid, const PipeFamily &family, const std::vector<long> &M, int k)
{
  RealField chi(grid, Rank::scalar);
  double *dst = chi.comp(0);
  for (std::size_t p = 0; p < chi.size(); ++p)
  {
    const Vec3 x = grid->point(p);
    double v = 1.0;
    for (int m = 0; m < k && v > 0.0; ++m)
    {
      v *= level_cutoff(family, M.at(m), x);
    }
    dst[p] = v;
  }
  return chi;
}

bool in_support_region(const PipeFamily &family, const std::vector<long> &M, int k, const Vec3 &x, bool inner)
{
  const double r = (inner ? 2.0 : 3.0) * family.delta0;
  for (int m = 0; m <= k; ++m)
  {
    const long s = M.at(m);
    if (family.nearest_axis({s * x[0], s * x[1], s * x[2]}) > r)
    {
      return false;
    }
  }
  return true;
}

VolumeEstimate support_volume(const PipeFamily &family, const std::vector<long> &M, int k, int grid_n,
                              long samples, unsigned long long seed)
{
  VolumeEstimate est;
  est.k = k;
  est.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, two_pi);
  long hits = 0;
  for (long s = 0; s < samples; ++s)
  {
    const Vec3 x = {unif(rng), unif(rng), unif(rng)};
    hits += in_support_region(family, M, k, x) ? 1 : 0;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  est.monte_carlo = p;
  // Wilson-free normal interval; a floor of one hit keeps the width honest for rare sets.
  const double pp = std::max(p, 1.0 / static_cast<double>(samples));
  est.half_width = 1.96 * std::sqrt(pp * (1.0 - pp) / static_cast<double>(samples));

  const double h = two_pi / grid_n;
  long count = 0;
  for (int iz = 0; iz < grid_n; ++iz)
    for (int iy = 0; iy < grid_n; ++iy)
      for (int ix = 0; ix < grid_n; ++ix)
      {
        count += in_support_region(family, M, k, {h * ix, h * iy, h * iz}) ? 1 : 0;
      }
  est.grid_count = static_cast<double>(count) / std::pow(static_cast<double>(grid_n), 3);
  return est;
}

std::vector<CubeCheck> cube_volume_checks(const PipeFamily &family, const std::vector<long> &M, int K, int cubes,
                                          double C0, long samples_per_cube, unsigned long long seed)
{
  std::vector<CubeCheck> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double sides[3] = {two_pi, M_PI, 2.0};
  for (int c = 0; c < cubes; ++c)
  {
    const double side = sides[c % 3];
    int kQ = -1;
    for (int k = 0; k <= K; ++k)
    {
      if (M.at(k) >= C0 / side)
      {
        kQ = k;
        break;
      }
    }
    const Vec3 corner = {two_pi * unif(rng), two_pi * unif(rng), two_pi * unif(rng)};
    if (kQ < 0)
    {
      continue;
    }
    for (int k = kQ; k <= K; ++k)
    {
      long hits = 0;
      for (long s = 0; s < samples_per_cube; ++s)
      {
        const Vec3 x = {corner[0] + side * unif(rng), corner[1] + side * unif(rng), corner[2] + side * unif(rng)};
        hits += in_support_region(family, M, k, x) ? 1 : 0;
      }
      CubeCheck cc;
      cc.corner = corner;
      cc.side = side;
      cc.k = k;
      cc.kQ = kQ;
      cc.fraction = static_cast<double>(hits) / static_cast<double>(samples_per_cube);
      cc.bound = std::pow(2.0, -(k - kQ));
      out.push_back(cc);
    }
  }
  return out;
}

}  // namespace mikado
