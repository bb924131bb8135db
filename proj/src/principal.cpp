#include "mikado/principal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mikado/multipliers.hpp"
#include "mikado/norms.hpp"

namespace mikado
{

namespace
{

double norm2(const IVec3 &xi) { return double(xi[0]) * xi[0] + double(xi[1]) * xi[1] + double(xi[2]) * xi[2]; }

double theta_theta(const IVec3 &t, int c) { return double(t[sym_row[c]]) * double(t[sym_col[c]]); }

// sum_j w_j(x) theta_j theta_j with per-j scalar sample weights produced by fn(j, p).
template <typename Fn>
RealField rank_one_field(const GridPtr &g, const NashFrame &frame, const std::vector<int> &members, Fn &&fn)
{
  RealField out(g, Rank::tensor);
  for (int j : members)
  {
    std::array<double, 6> tt;
    for (int c = 0; c < 6; ++c)
    {
      tt[c] = theta_theta(frame.theta[j], c);
    }
    for (std::size_t p = 0; p < g->real_size(); ++p)
    {
      const double w = fn(j, p);
      if (w == 0.0)
      {
        continue;
      }
      for (int c = 0; c < 6; ++c)
      {
        out.comp(c)[p] += w * tt[c];
      }
    }
  }
  return out;
}

const std::vector<int> all_pipes = {0, 1, 2, 3, 4, 5};

// N_{k,2}(t) = sum_j |eta|^4 e^{-2|eta|^2 N_k^2 t} a_j^2 (q_j^2 - A_j) theta_j theta_j
RealField oscillation_flux(const DataSet &data, int k, double t)
{
  const DataLevel &l = data.levels[k];
  const NashFrame &f = data.family.frame;
  const GridPtr &g = l.a[0].grid_ptr();
  return rank_one_field(g, f, all_pipes, [&](int j, std::size_t p) {
    const double e2 = f.eta_norm_sq(j);
    const double a = l.a[j].comp(0)[p];
    const double q = l.pipes.q[j].comp(0)[p];
    return e2 * e2 * std::exp(-2.0 * e2 * double(l.N) * double(l.N) * t) * a * a * (q * q - l.pipes.A[j]);
  });
}

Field zero_tensor(const GridPtr &g) { return Field(g, Rank::tensor); }

}  // namespace

BranchState::BranchState(const DataSet &data, int parity) : data_(&data), parity_(parity)
{
  if (parity != 1 && parity != 2)
  {
    throw BranchError("parity must be 1 or 2");
  }
  const NashFrame &f = data.family.frame;
  for (int k = 0; k <= data.K(); ++k)
  {
    const DataLevel &l = data.levels[k];
    for (int e2 : {1, 2})
    {
      std::vector<int> members;
      for (int j = 0; j < 6; ++j)
      {
        if (f.eta_norm_sq(j) == e2)
        {
          members.push_back(j);
        }
      }
      if (members.empty())
      {
        continue;
      }
      if (is_heat(k))
      {
        HeatGroup hg;
        hg.k = k;
        hg.eta_sq = e2;
        hg.rate = e2 * double(l.N) * double(l.N);
        hg.members = members;
        hg.W = Field(l.psi0.grid_ptr(), Rank::vector);
        for (int j : members)
        {
          hg.W += l.potential(f, j);
        }
        hg.V = curl_curl(hg.W);
        heat_.push_back(std::move(hg));
      }
      else
      {
        const DataLevel &next = data.levels.at(k + 1);
        const double Nn = double(next.N);
        CascadeGroup cg;
        cg.k = k;
        cg.eta_sq = e2;
        cg.rate = 2.0 * e2 * Nn * Nn;
        cg.members = members;
        RealField T = rank_one_field(next.a[0].grid_ptr(), f, members, [&](int j, std::size_t p) {
          const double a = next.a[j].comp(0)[p];
          return 0.5 / (Nn * Nn) * next.pipes.A[j] * e2 * a * a;
        });
        cg.T = T.to_spectral();
        cg.V = leray_div(cg.T);
        cascade_.push_back(std::move(cg));
      }
    }
  }
}

Field BranchState::heat_level(int k, double t) const
{
  if (t < 0.0)
  {
    throw BranchError("negative time");
  }
  Field out(data_->U0.grid_ptr(), Rank::vector);
  for (const auto &g : heat_)
  {
    if (g.k == k)
    {
      out.axpy(std::exp(-g.rate * t), g.V);
    }
  }
  return out;
}

Field BranchState::cascade_level(int k, double t) const
{
  if (t < 0.0)
  {
    throw BranchError("negative time");
  }
  Field out(data_->U0.grid_ptr(), Rank::vector);
  for (const auto &g : cascade_)
  {
    if (g.k == k)
    {
      out.axpy(std::exp(-g.rate * t), g.V);
    }
  }
  return out;
}

Field BranchState::evaluate(double t) const
{
  if (t < 0.0)
  {
    throw BranchError("negative time");
  }
  Field out(data_->U0.grid_ptr(), Rank::vector);
  for (const auto &g : heat_)
  {
    out.axpy(std::exp(-g.rate * t), g.V);
  }
  for (const auto &g : cascade_)
  {
    out.axpy(std::exp(-g.rate * t), g.V);
  }
  return out;
}

Field BranchState::time_derivative(double t) const
{
  Field out(data_->U0.grid_ptr(), Rank::vector);
  for (const auto &g : heat_)
  {
    out.axpy(-g.rate * std::exp(-g.rate * t), g.V);
  }
  for (const auto &g : cascade_)
  {
    out.axpy(-g.rate * std::exp(-g.rate * t), g.V);
  }
  return out;
}

void BranchState::evaluate(double t, Field &v, Field &dv) const
{
  if (t < 0.0)
  {
    throw BranchError("negative time");
  }
  v = Field(data_->U0.grid_ptr(), Rank::vector);
  dv = Field(data_->U0.grid_ptr(), Rank::vector);
  auto add = [&](double rate, const Field &V) {
    const double e = std::exp(-rate * t);
    v.axpy(e, V);
    dv.axpy(-rate * e, V);
  };
  for (const auto &g : heat_)
  {
    add(g.rate, g.V);
  }
  for (const auto &g : cascade_)
  {
    add(g.rate, g.V);
  }
}

RealField BranchState::principal_part(int k, double t) const
{
  const DataLevel &l = data_->levels[k];
  const NashFrame &f = data_->family.frame;
  const GridPtr &g = l.a[0].grid_ptr();
  RealField out(g, Rank::vector);
  for (int j = 0; j < 6; ++j)
  {
    const double e2 = f.eta_norm_sq(j);
    const double w = e2 * std::exp(-e2 * double(l.N) * double(l.N) * t);
    const double *a = l.a[j].comp(0);
    const double *q = l.pipes.q[j].comp(0);
    for (int i = 0; i < 3; ++i)
    {
      const double th = f.theta[j][i];
      if (th == 0.0)
      {
        continue;
      }
      double *dst = out.comp(i);
      for (std::size_t p = 0; p < g->real_size(); ++p)
      {
        dst[p] += w * th * a[p] * q[p];
      }
    }
  }
  return out;
}

RealField cascade_flux(const DataSet &data, int k, double t)
{
  const DataLevel &l = data.levels.at(k);
  const NashFrame &f = data.family.frame;
  return rank_one_field(l.a[0].grid_ptr(), f, all_pipes, [&](int j, std::size_t p) {
    const double e2 = f.eta_norm_sq(j);
    const double a = l.a[j].comp(0)[p];
    return l.pipes.A[j] * e2 * e2 * std::exp(-2.0 * e2 * double(l.N) * double(l.N) * t) * a * a;
  });
}

Field ResidualTerms::total() const
{
  Field s = F1;
  s += F2;
  s += F3;
  s += F4;
  s += FT;
  return s;
}

ResidualTerms residual_terms(const BranchState &b, double t)
{
  const DataSet &data = b.data();
  const GridPtr &g = data.U0.grid_ptr();
  const NashFrame &f = data.family.frame;
  ResidualTerms r;
  r.t = t;
  r.parity = b.parity();
  r.F1 = zero_tensor(g);
  r.F2 = zero_tensor(g);
  r.F3 = zero_tensor(g);
  r.FT = zero_tensor(g);

  // F1 = -(dt - Lap) R over heat levels: the factor (rate - |xi|^2) acts on D W.
  for (const auto &hg : b.heat())
  {
    const double rate = hg.rate;
    MultiplierSymbol m{[rate](const IVec3 &xi) { return cplx(rate - norm2(xi)); }, cplx(rate), true, std::nullopt,
                       "heat-defect"};
    r.F1.axpy(std::exp(-rate * t), apply_multiplier(d_operator(hg.W), m));
  }
  // F2 = Lap Rbar and the first half of F3 = -dt Rbar over cascade levels.
  for (const auto &cg : b.cascade())
  {
    const double e = std::exp(-cg.rate * t);
    r.F2.axpy(e, laplacian(cg.T));
    r.F3.axpy(cg.rate * e, cg.T);
  }
  for (int k = 0; k <= data.K(); ++k)
  {
    if (!b.is_heat(k))
    {
      r.F3 -= cascade_flux(data, k + 1, t).to_spectral();
    }
  }
  if (b.is_heat(0))
  {
    r.F3 -= anti_divergence(divergence(cascade_flux(data, 0, t).to_spectral()));
  }
  if (!b.is_heat(data.K()))
  {
    r.FT = cascade_flux(data, data.K() + 1, t).to_spectral();
  }

  // F4 = -v (x) v + sum over heat levels of (v^p (x) v^p - R div N_{k,2}).
  const RealField v = b.evaluate(t).to_real();
  const RealField vv = outer_self(v);
  r.vv_sup = sup_norm(vv);
  r.F4 = vv.to_spectral();
  r.F4 *= -1.0;
  for (int k = 0; k <= data.K(); ++k)
  {
    if (!b.is_heat(k))
    {
      continue;
    }
    const RealField vp = b.principal_part(k, t);
    const RealField vpvp = outer_self(vp);
    r.vp_square_sup = std::max(r.vp_square_sup, sup_norm(vpvp));
    r.F4 += vpvp.to_spectral();
    r.F4 -= anti_divergence(divergence(oscillation_flux(data, k, t).to_spectral()));

    // N_{k,3}: products of distinct pipes
    const DataLevel &l = data.levels[k];
    double n3 = 0.0;
    for (std::size_t p = 0; p < g->real_size(); ++p)
    {
      std::array<double, 6> w;
      for (int j = 0; j < 6; ++j)
      {
        const double e2 = f.eta_norm_sq(j);
        w[j] = e2 * std::exp(-e2 * double(l.N) * double(l.N) * t) * l.a[j].comp(0)[p] * l.pipes.q[j].comp(0)[p];
      }
      Sym3 m{};
      for (int a = 0; a < 6; ++a)
      {
        for (int c = a + 1; c < 6; ++c)
        {
          const double ww = w[a] * w[c];
          if (ww == 0.0)
          {
            continue;
          }
          for (int s = 0; s < 6; ++s)
          {
            const int i = sym_row[s], jj = sym_col[s];
            m[s] += ww * (f.theta[a][i] * f.theta[c][jj] + f.theta[c][i] * f.theta[a][jj]);
          }
        }
      }
      double s2 = 0.0;
      for (int s = 0; s < 6; ++s)
      {
        s2 += (s < 3 ? 1.0 : 2.0) * m[s] * m[s];
      }
      n3 = std::max(n3, std::sqrt(s2));
    }
    r.n3_sup = std::max(r.n3_sup, n3);
  }
  return r;
}

IdentityCheck residual_identity(const BranchState &b, double t)
{
  IdentityCheck c;
  c.t = t;
  ResidualTerms r = residual_terms(b, t);
  const Field v = b.evaluate(t);
  const Field pdiv_vv = leray_div(outer_self(v.to_real()).to_spectral());
  Field e = b.time_derivative(t);
  const Field lap = laplacian(v);
  c.scale = std::max({sup_norm(pdiv_vv), sup_norm(e), sup_norm(lap)});
  e -= lap;
  e += pdiv_vv;
  e += leray_div(r.total());
  c.defect = sup_norm(e);
  c.reference = sup_norm(pdiv_vv);
  c.relative = c.defect / std::max(c.scale, 1e-300);
  c.f3_relative = sup_norm(r.F3) / std::max(r.vv_sup, 1e-300);
  c.n3_relative = r.n3_sup / std::max(r.vp_square_sup, 1e-300);
  return c;
}

EqualDataReport equal_data(const BranchState &b1, const BranchState &b2)
{
  if (b1.parity() != 1 || b2.parity() != 2)
  {
    throw BranchError("equal_data expects parities 1 and 2");
  }
  const DataSet &data = b1.data();
  EqualDataReport rep;
  for (int k = 0; k <= data.K(); ++k)
  {
    const Field cc = curl_curl(data.levels[k].psi0);
    const double ref = std::max(sup_norm_refined(cc), 1e-300);
    const BranchState &h = b1.is_heat(k) ? b1 : b2;
    const BranchState &c = b1.is_heat(k) ? b2 : b1;
    rep.heat_rel.push_back(sup_norm_refined(h.heat_level(k, 0.0) - cc) / ref);
    rep.cascade_rel.push_back(sup_norm_refined(c.cascade_level(k, 0.0) - cc) / ref);
  }
  const Field v1 = b1.evaluate(0.0), v2 = b2.evaluate(0.0);
  const double u = std::max(sup_norm_refined(data.U0), 1e-300);
  rep.branch_rel = sup_norm_refined(v1 - v2) / u;
  rep.branch_to_data_rel = std::max(sup_norm_refined(v1 - data.U0), sup_norm_refined(v2 - data.U0)) / u;
  return rep;
}

double steady_euler_defect(const DataSet &data)
{
  const NashFrame &f = data.family.frame;
  double worst = 0.0;
  for (int k = 0; k <= data.K(); ++k)
  {
    const DataLevel &l = data.levels[k];
    for (int j = 0; j < 6; ++j)
    {
      RealField P = rank_one_field(l.a[0].grid_ptr(), f, {j}, [&](int, std::size_t p) {
        const double q = l.pipes.q[j].comp(0)[p];
        return q * q - l.pipes.A[j];
      });
      const Field Ph = P.to_spectral();
      worst = std::max(worst, max_coefficient(divergence(Ph)) / std::max(max_coefficient(Ph), 1e-300));
    }
  }
  return worst;
}

std::vector<double> log_grid(double t0, double t1, int per_decade)
{
  std::vector<double> out;
  const int steps = static_cast<int>(std::ceil(std::log10(t1 / t0) * per_decade - 1e-9));
  for (int i = 0; i <= steps; ++i)
  {
    out.push_back(std::min(t1, t0 * std::pow(10.0, double(i) / per_decade)));
  }
  return out;
}

std::vector<ProfileRow> residual_smallness(const BranchState &b, const std::vector<double> &tgrid, bool all_terms)
{
  const double alpha = b.data().params.alpha;
  const double kappa = b.data().params.kappa;
  std::vector<ProfileRow> rows;
  for (double t : tgrid)
  {
    ResidualTerms r = residual_terms(b, t);
    std::vector<std::pair<std::string, Field>> terms;
    if (all_terms)
    {
      terms = {{"F1", r.F1}, {"F2", r.F2}, {"F3", r.F3}, {"F4", r.F4}, {"FT", r.FT}};
    }
    terms.emplace_back("total", r.total());
    for (const auto &[name, F] : terms)
    {
      ProfileRow row{t, name, sup_norm(F), gradient_holder(F, kappa), 0.0};
      row.weighted = std::pow(t, 1.0 - alpha) * row.linf + std::pow(t, 1.5 - alpha) * row.c1kappa;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string profile_csv(const std::vector<ProfileRow> &rows)
{
  std::ostringstream os;
  os.precision(17);
  os << "t,term,Linf,C1kappa,weighted\n";
  for (const auto &r : rows)
  {
    os << r.t << "," << r.term << "," << r.linf << "," << r.c1kappa << "," << r.weighted << "\n";
  }
  return os.str();
}

}  // namespace mikado
