#include "mikado/data.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "mikado/multipliers.hpp"

namespace mikado
{

namespace
{

double max_eta(const NashFrame &frame)
{
  double m = 0.0;
  for (int j = 0; j < 6; ++j)
  {
    m = std::max(m, std::sqrt(double(frame.eta_norm_sq(j))));
  }
  return m;
}

Field vector_along(const Field &scalar, const IVec3 &t)
{
  Field out(scalar.grid_ptr(), Rank::vector);
  for (int i = 0; i < 3; ++i)
  {
    if (t[i] == 0)
    {
      continue;
    }
    const cplx *src = scalar.comp(0);
    cplx *dst = out.comp(i);
    for (std::size_t p = 0; p < scalar.size(); ++p)
    {
      dst[p] = static_cast<double>(t[i]) * src[p];
    }
  }
  return out;
}

// The mollified potentials of a level and the resulting psi0_k.
void finish_level(DataLevel &lvl, const NashFrame &frame)
{
  const GridPtr &grid = lvl.a[0].grid_ptr();
  lvl.psi0 = Field(grid, Rank::vector);
  const double inv_n2 = 1.0 / (double(lvl.N) * double(lvl.N));
  for (int j = 0; j < 6; ++j)
  {
    RealField aq = multiply(lvl.a[j], lvl.pipes.q[j]);
    aq *= inv_n2;
    lvl.s[j] = mollify(aq.to_spectral(), lvl.sigma);
    lvl.psi0 += vector_along(lvl.s[j], frame.theta[j]);
  }
  lvl.d_psi0_sup = sup_norm_refined(d_operator(lvl.psi0));
}

}  // namespace

Field DataLevel::potential(const NashFrame &frame, int j) const { return vector_along(s[j], frame.theta[j]); }

DataLevel build_base_level(const GridPtr &grid, const ParameterSet &params, const PipeFamily &family)
{
  const auto M = params.scales_M();
  const auto N = params.scales_N();
  DataLevel lvl;
  lvl.k = 0;
  lvl.M = M[0];
  lvl.N = N[0];
  lvl.sigma = params.mollifier_sigma(0);
  lvl.pipes = build_mikado_level(grid, family, 0, lvl.M, lvl.N);
  for (int j = 0; j < 6; ++j)
  {
    lvl.a[j] = RealField(grid, Rank::scalar);
  }
  std::fill(lvl.a[0].comp(0), lvl.a[0].comp(0) + grid->real_size(), static_cast<double>(lvl.N));
  finish_level(lvl, family.frame);
  return lvl;
}

DataLevel build_level(const GridPtr &grid, const ParameterSet &params, const PipeFamily &family,
                      const DataLevel &prev, bool extension)
{
  const auto M = params.scales_M();
  const auto N = params.scales_N();
  const int k = prev.k + 1;
  if (prev.d_psi0_sup <= 0.0 || !std::isfinite(prev.d_psi0_sup))
  {
    throw DataError("degenerate-previous-level");
  }
  DataLevel lvl;
  lvl.k = k;
  lvl.M = M.at(k);
  lvl.N = N.at(k);
  lvl.extension = extension;
  lvl.d_psi0_prev_sup = prev.d_psi0_sup;
  lvl.pipes = build_mikado_level(grid, family, k, lvl.M, lvl.N, !extension);

  const NashFrame &frame = family.frame;
  const double c0 = frame.c0.value();
  const double S = prev.d_psi0_sup;
  std::array<double, 6> amp{};
  for (int j = 0; j < 6; ++j)
  {
    if (!(lvl.pipes.A[j] > 0.0))
    {
      throw DataError("degenerate-normalizer: A_{" + std::to_string(j) + "," + std::to_string(k) + "} = 0");
    }
    amp[j] = lvl.N * std::sqrt(2.0 * S / (c0 * frame.eta_norm_sq(j) * lvl.pipes.A[j]));
    lvl.a[j] = RealField(grid, Rank::scalar);
  }

  const RealField D = d_operator(prev.psi0).to_real();
  const RealField chi = cutoff(grid, family, M, k);
  double radius = 0.0;
  for (std::size_t p = 0; p < grid->real_size(); ++p)
  {
    Sym3 m;
    for (int c = 0; c < 6; ++c)
    {
      m[c] = c0 * D.comp(c)[p] / S;
    }
    double r = frobenius_distance_to_identity({1.0 + m[0], 1.0 + m[1], 1.0 + m[2], m[3], m[4], m[5]});
    radius = std::max(radius, r);
    if (r > c0 * (1.0 + 1e-10))
    {
      throw std::logic_error("nash-domain violated by the normalized D psi0: radius " + std::to_string(r / c0) +
                             " c0");
    }
    const double x = chi.comp(0)[p];
    if (x == 0.0)
    {
      continue;
    }
    if (r > c0)
    {
      for (double &v : m)
      {
        v *= c0 / r;
      }
    }
    m[0] += 1.0;
    m[1] += 1.0;
    m[2] += 1.0;
    const auto G = gamma(frame, m);
    for (int j = 0; j < 6; ++j)
    {
      lvl.a[j].comp(0)[p] = amp[j] * x * G[j];
    }
  }
  lvl.nash_radius = radius;

  if (!extension)
  {
    lvl.sigma = params.mollifier_sigma(k);
    finish_level(lvl, frame);
  }
  return lvl;
}

Field assemble_data(const std::vector<DataLevel> &levels)
{
  if (levels.empty())
  {
    throw std::invalid_argument("assemble_data: no levels");
  }
  Field u(levels.front().psi0.grid_ptr(), Rank::vector);
  for (const auto &l : levels)
  {
    if (!l.extension)
    {
      u += curl_curl(l.psi0);
    }
  }
  return u;
}

DataSet build_data(const GridPtr &grid, const ParameterSet &params)
{
  DataSet out;
  out.params = params;
  const NashFrame frame = default_frame();
  params.validate(grid->n(), grid->dealias_fraction(), max_eta(frame));
  out.family = place_pipes(frame, params.delta, params.delta0);
  out.levels.push_back(build_base_level(grid, params, out.family));
  for (int k = 1; k <= params.K + 1; ++k)
  {
    out.levels.push_back(build_level(grid, params, out.family, out.levels.back(), k == params.K + 1));
  }
  out.U0 = assemble_data(out.levels);
  return out;
}

double fit_sandwich_constant(const std::vector<double> &S)
{
  if (S.empty() || !(S[0] > 0.0))
  {
    return 1.0;
  }
  double L = 0.0;
  const double l0 = std::log(S[0]);
  for (std::size_t k = 1; k < S.size(); ++k)
  {
    const double w = std::ldexp(1.0, -static_cast<int>(k));
    const double lk = std::log(S[k]);
    L = std::max(L, (w * l0 - lk) / (2.0 - 2.0 * w));
    L = std::max(L, (lk - w * l0) / (2.0 + 2.0 * w));
  }
  return std::exp(L);
}

RecursionReport recursion_diagnostics(const DataSet &data)
{
  RecursionReport rep;
  rep.strict_mode = data.params.strict_mode;
  const auto M = data.params.scales_M();
  std::vector<double> S;
  Field route;
  for (const auto &l : data.levels)
  {
    LevelDiagnostics d;
    d.k = l.k;
    d.A = l.pipes.A;
    d.nash_radius = l.nash_radius;
    double a_sup = 0.0;
    for (const auto &a : l.a)
    {
      a_sup = std::max(a_sup, sup_norm(a));
    }
    d.a_over_N = a_sup / l.N;
    if (l.k > 0)
    {
      d.a_ratio = a_sup / (l.N * std::sqrt(l.d_psi0_prev_sup));
      const GridPtr &g = l.a[0].grid_ptr();
      for (std::size_t p = 0; p < g->real_size(); ++p)
      {
        double v = 0.0;
        for (const auto &a : l.a)
        {
          v = std::max(v, std::abs(a.comp(0)[p]));
        }
        if (v > d.support_leak && !in_support_region(data.family, M, l.k - 1, g->point(p)))
        {
          d.support_leak = v;
        }
      }
    }
    if (!l.extension)
    {
      d.psi_sup = sup_norm_refined(l.psi0);
      d.d_psi_sup = l.d_psi0_sup;
      S.push_back(l.d_psi0_sup);
      for (int m = 0; m <= 2; ++m)
      {
        d.derivative_ratio[m] = derivative_sup(l.psi0, m) / std::pow(static_cast<double>(l.N), m - 1);
      }
      if (l.k > 0)
      {
        d.iterative_ratio = d.psi_sup * l.N / std::sqrt(l.d_psi0_prev_sup);
        rep.C1 = std::max(rep.C1, d.iterative_ratio);
      }
      d.curlcurl_l1 = lp_norm(curl_curl(l.psi0).to_real(), 1.0);
      Field dd = divergence(d_operator(l.psi0));
      if (route.empty())
      {
        route = dd;
      }
      else
      {
        route += dd;
      }
    }
    rep.levels.push_back(d);
  }
  rep.C2 = fit_sandwich_constant(S);
  const double scale = std::max(max_coefficient(data.U0), 1e-300);
  rep.u0_div_rel = max_coefficient(divergence(data.U0)) / scale;
  rep.u0_mean = std::max({std::abs(data.U0.mean(0)), std::abs(data.U0.mean(1)), std::abs(data.U0.mean(2))});
  rep.u0_route_rel = max_coefficient(route - data.U0) / scale;
  return rep;
}

std::string RecursionReport::to_json() const
{
  nlohmann::json j;
  j["strict_mode"] = strict_mode;
  j["C1"] = C1;
  j["C2"] = C2;
  j["U0_divergence_relative"] = u0_div_rel;
  j["U0_mean"] = u0_mean;
  j["U0_div_D_route_relative"] = u0_route_rel;
  for (const auto &d : levels)
  {
    nlohmann::json l;
    l["k"] = d.k;
    l["psi0_sup"] = d.psi_sup;
    l["D_psi0_sup"] = d.d_psi_sup;
    l["iterative_ratio"] = d.iterative_ratio;
    l["derivative_ratio"] = d.derivative_ratio;
    l["a_ratio"] = d.a_ratio;
    l["a_sup_over_N"] = d.a_over_N;
    l["nash_radius"] = d.nash_radius;
    l["curlcurl_psi0_L1"] = d.curlcurl_l1;
    l["support_leak"] = d.support_leak;
    l["A"] = d.A;
    j["levels"].push_back(l);
  }
  return j.dump(2);
}

}  // namespace mikado
