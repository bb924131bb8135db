#include "mikado/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mikado/multipliers.hpp"

namespace mikado
{

namespace
{

constexpr cplx I(0.0, 1.0);

double norm2(const IVec3 &xi) { return double(xi[0]) * xi[0] + double(xi[1]) * xi[1] + double(xi[2]) * xi[2]; }

template <typename Fn>
void for_each_mode(const Grid &g, Fn &&fn)
{
  for (std::size_t idx = 0; idx < g.spec_size(); ++idx)
  {
    fn(idx, g.mode(idx));
  }
}

double median(std::vector<double> v)
{
  if (v.empty())
  {
    return 0.0;
  }
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Periodized ball indicator with a linear edge one cell wide, weighted by the cell volume.
RealField ball_kernel(const GridPtr &g, double R)
{
  const int n = g->n();
  const double h = g->spacing();
  const int L = static_cast<int>(std::ceil((R + h) / (2 * M_PI)));
  RealField k(g, Rank::scalar);
  double *out = k.comp(0);
  for (int iz = 0; iz < n; ++iz)
  {
    for (int iy = 0; iy < n; ++iy)
    {
      for (int ix = 0; ix < n; ++ix)
      {
        const double x = (ix <= n / 2 ? ix : ix - n) * h;
        const double y = (iy <= n / 2 ? iy : iy - n) * h;
        const double z = (iz <= n / 2 ? iz : iz - n) * h;
        double w = 0.0;
        for (int a = -L; a <= L; ++a)
        {
          for (int b = -L; b <= L; ++b)
          {
            for (int c = -L; c <= L; ++c)
            {
              const double dx = x + 2 * M_PI * a, dy = y + 2 * M_PI * b, dz = z + 2 * M_PI * c;
              const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
              w += std::clamp((R - r) / h + 0.5, 0.0, 1.0);
            }
          }
        }
        out[ix + n * (iy + n * iz)] = w * h * h * h;
      }
    }
  }
  return k;
}

// Grid convolution sum_y f(y) k(x - y); the normalized coefficients pick up a factor n^3.
RealField convolve(const RealField &density, const Field &kernel_hat)
{
  Field d = density.to_spectral();
  const double count = static_cast<double>(density.grid().real_size());
  for (std::size_t idx = 0; idx < d.size(); ++idx)
  {
    d.comp(0)[idx] *= kernel_hat.comp(0)[idx] * count;
  }
  return d.to_real();
}

RealField squared_magnitude(const RealField &u)
{
  RealField s(u.grid_ptr(), Rank::scalar);
  for (int c = 0; c < u.ncomp(); ++c)
  {
    const double w = (u.rank() == Rank::tensor && c >= 3) ? 2.0 : 1.0;
    for (std::size_t p = 0; p < u.size(); ++p)
    {
      s.comp(0)[p] += w * u.comp(c)[p] * u.comp(c)[p];
    }
  }
  return s;
}

Field point_bump(const GridPtr &g, double N, const Vec3 &x0)
{
  Field f(g, Rank::scalar);
  for_each_mode(*g, [&](std::size_t idx, const IVec3 &xi) {
    const double ph = -(xi[0] * x0[0] + xi[1] * x0[1] + xi[2] * x0[2]);
    f.comp(0)[idx] = lp_window(std::sqrt(norm2(xi)) / N) * std::exp(I * ph);
  });
  return f.to_real().to_spectral();
}

Field random_band(const GridPtr &g, int band, std::mt19937_64 &rng, Rank r = Rank::scalar)
{
  std::normal_distribution<double> gauss(0.0, 1.0);
  Field f(g, r);
  for_each_mode(*g, [&](std::size_t idx, const IVec3 &xi) {
    if (std::abs(xi[0]) > band || std::abs(xi[1]) > band || std::abs(xi[2]) > band || norm2(xi) == 0.0)
    {
      return;
    }
    for (int c = 0; c < f.ncomp(); ++c)
    {
      f.comp(c)[idx] = cplx(gauss(rng), gauss(rng));
    }
  });
  return f.to_real().to_spectral();
}

}  // namespace

std::string NormReport::to_json() const
{
  nlohmann::json j;
  j["name"] = name;
  j["value"] = value;
  j["method"] = method;
  return j.dump(2);
}

double holder_zygmund(const Field &f, double s)
{
  double best = 0.0;
  for (double N : dyadic_bands(f.grid()))
  {
    best = std::max(best, std::pow(N, s) * sup_norm(littlewood_paley(f, N)));
  }
  return best;
}

double gradient_holder(const Field &f, double kappa)
{
  const Grid &g = f.grid();
  RealBuffer acc(g.real_size());
  RealBuffer samples(g.real_size());
  Field work(f.grid_ptr(), Rank::scalar);
  double best = 0.0;
  for (double N : dyadic_bands(g))
  {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int c = 0; c < f.ncomp(); ++c)
    {
      const double wt = (f.rank() == Rank::tensor && c >= 3) ? 2.0 : 1.0;
      for (int i = 0; i < 3; ++i)
      {
        for_each_mode(g, [&](std::size_t idx, const IVec3 &xi) {
          work.comp(0)[idx] =
              g.in_box(xi) ? I * double(xi[i]) * lp_window(std::sqrt(norm2(xi)) / N) * f.comp(c)[idx] : cplx{};
        });
        g.inverse(work.comp(0), samples.data());
        for (std::size_t p = 0; p < acc.size(); ++p)
        {
          acc[p] += wt * samples[p] * samples[p];
        }
      }
    }
    best = std::max(best, std::pow(N, kappa) * std::sqrt(*std::max_element(acc.begin(), acc.end())));
  }
  return best;
}

double sobolev_neg(const Field &f, double p)
{
  if (!(p > 1.0) || !std::isfinite(p))
  {
    throw std::invalid_argument("sobolev_neg: p must lie in (1, inf)");
  }
  return lp_norm(fractional(f, -1.0).to_real(), p);
}

double carleson_sup(const GridPtr &grid, const std::function<RealField(double)> &u, const CarlesonOptions &opt)
{
  const double h = grid->spacing();
  const double T = std::pow(2 * M_PI, 2);
  const double t_min = std::pow(opt.t_floor_cells * h, 2);
  int ranges = 0;
  while (T * std::pow(4.0, -ranges) > t_min)
  {
    ++ranges;
  }
  // nodes in increasing t; range r covers [T 4^{-(r+1)}, T 4^{-r}]
  struct Node
  {
    double t, w;
    int range;
  };
  std::vector<Node> nodes;
  const double ds = std::log(4.0) / opt.nodes_per_range;
  for (int r = ranges - 1; r >= 0; --r)
  {
    const double lo = std::log(T) - (r + 1) * std::log(4.0);
    for (int q = 0; q < opt.nodes_per_range; ++q)
    {
      const double t = std::exp(lo + (q + 0.5) * ds);
      nodes.push_back({t, t * ds, r});
    }
  }
  const double t_bottom = T * std::pow(4.0, -ranges);

  std::vector<RealField> G(opt.radii);
  RealField acc(grid, Rank::scalar);
  std::size_t next = 0;
  // radius m uses the ranges r >= m
  for (int m = opt.radii - 1; m >= 0; --m)
  {
    while (next < nodes.size() && nodes[next].range >= m)
    {
      RealField g = squared_magnitude(u(nodes[next].t));
      if (next == 0)
      {
        acc.axpy(t_bottom, g);
      }
      acc.axpy(nodes[next].w, g);
      ++next;
    }
    G[m] = acc;
  }
  const int n = grid->n();
  double best = 0.0;
  for (int m = 0; m < opt.radii; ++m)
  {
    const double R = 2 * M_PI * std::pow(2.0, -m);
    Field kh = ball_kernel(grid, R).to_spectral();
    RealField conv = convolve(G[m], kh);
    const int stride = std::max(1, static_cast<int>(std::lround(n * 0.25 * R / (2 * M_PI))));
    const double *c = conv.comp(0);
    for (int iz = 0; iz < n; iz += stride)
    {
      for (int iy = 0; iy < n; iy += stride)
      {
        for (int ix = 0; ix < n; ix += stride)
        {
          best = std::max(best, c[ix + n * (iy + n * iz)] / (R * R * R));
        }
      }
    }
  }
  return std::sqrt(std::max(best, 0.0));
}

double bmo_minus_one(const Field &f, const CarlesonOptions &opt)
{
  return carleson_sup(f.grid_ptr(), [&](double t) { return heat_evolve(f, t).to_real(); }, opt);
}

KTReport kt_path_norm(const GridPtr &grid, const std::function<Field(double)> &u, const std::vector<double> &tgrid,
                      const CarlesonOptions &opt)
{
  KTReport r;
  for (double t : tgrid)
  {
    r.sup_term = std::max(r.sup_term, std::sqrt(t) * sup_norm(u(t)));
  }
  r.carleson_term = carleson_sup(grid, [&](double t) { return u(t).to_real(); }, opt);
  return r;
}

std::string HarnessReport::csv() const
{
  std::ostringstream os;
  os.precision(17);
  os << parameter_name << ",ratio\n";
  for (const auto &r : rows)
  {
    os << r.parameter << "," << r.ratio << "\n";
  }
  return os.str();
}

HarnessReport inequality_harness(const std::string &name, int grid_n, unsigned long long seed)
{
  auto g = make_grid(grid_n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2 * M_PI);
  HarnessReport rep;
  rep.name = name;
  const int kmax = g->kmax();
  const int random_inputs = 3;
  if (name == "bernstein")
  {
    // |P_N grad f|_inf / (N^{1+3/2} |f|_2), worst of point bumps and random band fields
    rep.parameter_name = "N";
    for (double N = 4; N <= kmax; N *= 2)
    {
      double worst = 0.0;
      std::vector<Field> inputs = {point_bump(g, N, {u(rng), u(rng), u(rng)})};
      for (int r = 0; r < random_inputs; ++r)
      {
        inputs.push_back(random_band(g, kmax, rng));
      }
      for (const Field &f : inputs)
      {
        const double lhs = sup_norm(gradient(littlewood_paley(f, N)));
        worst = std::max(worst, lhs / (std::pow(N, 2.5) * l2_norm(f)));
      }
      rep.rows.push_back({N, worst});
    }
  }
  else if (name == "heat-decay")
  {
    // t^{1/2} |grad e^{t Delta} f|_inf / |f|_inf
    rep.parameter_name = "t";
    for (double N = 2; 2 * N <= kmax; N *= 2)
    {
      const double t = 1.0 / (N * N);
      double worst = 0.0;
      std::vector<Field> inputs = {point_bump(g, N, {u(rng), u(rng), u(rng)})};
      for (int r = 0; r < random_inputs; ++r)
      {
        inputs.push_back(random_band(g, kmax, rng));
      }
      for (const Field &f : inputs)
      {
        worst = std::max(worst, std::sqrt(t) * sup_norm(gradient(heat_evolve(f, t))) / sup_norm(f));
      }
      rep.rows.push_back({t, worst});
    }
  }
  else if (name == "improved-holder")
  {
    // (|f g(lambda .)|_1 - |f|_1 |g|_1) lambda / (|f|_{C^1} |g|_1) with g = 1 + cos x_1
    rep.parameter_name = "lambda";
    for (int lambda = 1; 2 * lambda + 4 <= grid_n / 2; lambda *= 2)
    {
      double worst = 0.0;
      for (int r = 0; r <= random_inputs; ++r)
      {
        Field f;
        if (r == 0)
        {
          const double ph = u(rng);
          RealField s(g, Rank::scalar);
          for (std::size_t p = 0; p < g->real_size(); ++p)
          {
            s.comp(0)[p] = 2.0 + std::cos(lambda * g->point(p)[0] + ph);
          }
          f = s.to_spectral();
        }
        else
        {
          f = random_band(g, 2, rng);
        }
        const RealField fs = f.to_real();
        RealField prod(g, Rank::scalar), gl(g, Rank::scalar);
        for (std::size_t p = 0; p < g->real_size(); ++p)
        {
          const double gv = 1.0 + std::cos(lambda * g->point(p)[0]);
          gl.comp(0)[p] = gv;
          prod.comp(0)[p] = fs.comp(0)[p] * gv;
        }
        const double g1 = lp_norm(gl, 1.0);
        const double lhs = lp_norm(prod, 1.0) - lp_norm(fs, 1.0) * g1;
        const double c1 = sup_norm(f) + sup_norm(gradient(f));
        worst = std::max(worst, lhs * lambda / (c1 * g1));
      }
      rep.rows.push_back({double(lambda), worst});
    }
  }
  else if (name == "stationary-phase")
  {
    // |R(a cos(lambda k.x))|_{C^beta} lambda^{1-beta} / |a|_inf, beta = 1/2, a of band 1
    rep.parameter_name = "lambda";
    const double beta = 0.5;
    for (int lambda = 2; lambda + 1 <= kmax; lambda *= 2)
    {
      double worst = 0.0;
      for (int r = 0; r < random_inputs; ++r)
      {
        const Field a = random_band(g, 1, rng, Rank::vector);
        const RealField as = a.to_real();
        RealField v(g, Rank::vector);
        for (std::size_t p = 0; p < g->real_size(); ++p)
        {
          const Vec3 x = g->point(p);
          const double c = std::cos(lambda * (x[0] + x[1]));
          for (int i = 0; i < 3; ++i)
          {
            v.comp(i)[p] = as.comp(i)[p] * c;
          }
        }
        const Field Rv = anti_divergence(v.to_spectral());
        worst = std::max(worst, holder_zygmund(Rv, beta) * std::pow(lambda, 1.0 - beta) / sup_norm(as));
      }
      rep.rows.push_back({double(lambda), worst});
    }
  }
  else
  {
    throw std::invalid_argument("unknown inequality harness: " + name);
  }
  std::vector<double> ratios;
  for (const auto &r : rep.rows)
  {
    ratios.push_back(r.ratio);
    rep.max_ratio = std::max(rep.max_ratio, r.ratio);
  }
  rep.median_ratio = median(ratios);
  return rep;
}

}  // namespace mikado
