#include "mikado/evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "mikado/multipliers.hpp"
#include "mikado/norms.hpp"

namespace mikado
{

namespace
{

std::string fmt(double x)
{
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

bool finite(const Field &f)
{
  for (int c = 0; c < f.ncomp(); ++c)
  {
    const cplx *p = f.comp(c);
    for (std::size_t i = 0; i < f.size(); ++i)
    {
      if (!std::isfinite(p[i].real()) || !std::isfinite(p[i].imag()))
      {
        return false;
      }
    }
  }
  return true;
}

// |grad f|_2^2, normalized measure.
double gradient_energy(const Field &f)
{
  const Grid &g = f.grid();
  const int n = g.n();
  double total = 0.0;
  for (int c = 0; c < f.ncomp(); ++c)
  {
    const cplx *src = f.comp(c);
    for (std::size_t idx = 0; idx < g.spec_size(); ++idx)
    {
      const IVec3 xi = g.mode(idx);
      const int kx = static_cast<int>(idx % g.nkx());
      const double mult = (kx == 0 || (n % 2 == 0 && kx == n / 2)) ? 1.0 : 2.0;
      total += mult * (double(xi[0]) * xi[0] + double(xi[1]) * xi[1] + double(xi[2]) * xi[2]) * std::norm(src[idx]);
    }
  }
  return total;
}

Field pdiv_square(const RealField &u) { return leray_div(outer_self(u).to_spectral()); }

// Forcing of the perturbation at time t: N(t, w) = base(t) - P div((v + w) (x) (v + w)).
class PerturbationForcing
{
public:
  PerturbationForcing(const BranchState &b, SourceMode mode) : b_(b), mode_(mode) {}

  Field operator()(double t, const Field &w)
  {
    prepare(t);
    RealField u = w.to_real();
    u += vr_;
    last_u_sup_ = sup_norm(u);
    Field out = base_;
    out -= pdiv_square(u);
    return out;
  }

  void prepare(double t)
  {
    if (t == t_)
    {
      return;
    }
    t_ = t;
    b_.evaluate(t, v_, dv_);
    vr_ = v_.to_real();
    v_sup_ = sup_norm(vr_);
    switch (mode_)
    {
    case SourceMode::identity:
      base_ = laplacian(v_);
      base_ -= dv_;
      break;
    case SourceMode::residual:
      base_ = leray_div(residual_terms(b_, t).total());
      base_ += pdiv_square(vr_);
      break;
    case SourceMode::none:
      base_ = pdiv_square(vr_);
      break;
    }
  }

  const Field &v() const { return v_; }
  const Field &dv() const { return dv_; }
  double v_sup() const { return v_sup_; }
  double last_u_sup() const { return last_u_sup_; }

private:
  const BranchState &b_;
  SourceMode mode_;
  double t_ = std::numeric_limits<double>::quiet_NaN();
  Field v_, dv_, base_;
  RealField vr_;
  double v_sup_ = 0.0, last_u_sup_ = 0.0;
};

double fastest_live_rate(const BranchState &b, double t)
{
  double r = 0.0;
  for (const auto &g : b.heat())
  {
    if (g.rate * t < 40.0)
    {
      r = std::max(r, g.rate);
    }
  }
  for (const auto &g : b.cascade())
  {
    if (g.rate * t < 40.0)
    {
      r = std::max(r, g.rate);
    }
  }
  return r;
}

double allowed_dt(const BranchState &b, const PerturbationOptions &opt, double t, double u_sup, const Grid &g)
{
  double dt = opt.dt_max;
  if (u_sup > 0.0)
  {
    dt = std::min(dt, opt.cfl * g.spacing() / u_sup);
  }
  const double rate = fastest_live_rate(b, t);
  if (rate > 0.0)
  {
    dt = std::min(dt, opt.rate_fraction / rate);
  }
  return dt;
}

const char *source_name(SourceMode m)
{
  switch (m)
  {
  case SourceMode::identity:
    return "identity";
  case SourceMode::residual:
    return "residual";
  case SourceMode::none:
    return "none";
  }
  return "?";
}

// Exponentially weighted quadratic quadrature: int_0^L e^{-lam(L - r)} l_i(r) dr with l_i the
// Lagrange basis on the nodes 0, tau, 2 tau. Tabulated per integer lam = |xi|^2.
struct ExpWeights
{
  std::vector<std::array<double, 3>> w;
  ExpWeights(double tau, double L, int lam_max)
  {
    static const double x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
    static const double wt[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                 0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    w.resize(lam_max + 1);
    for (int lam = 0; lam <= lam_max; ++lam)
    {
      const int pieces = std::max(1, static_cast<int>(std::ceil(lam * L)));
      const double piece = L / pieces;
      std::array<double, 3> acc{0.0, 0.0, 0.0};
      for (int p = 0; p < pieces; ++p)
      {
        const double a = p * piece;
        for (int q = 0; q < 8; ++q)
        {
          const double r = a + 0.5 * piece * (x[q] + 1.0);
          const double e = 0.5 * piece * wt[q] * std::exp(-lam * (L - r));
          const double s = r / tau;
          acc[0] += e * 0.5 * (s - 1.0) * (s - 2.0);
          acc[1] += e * (-s * (s - 2.0));
          acc[2] += e * 0.5 * s * (s - 1.0);
        }
      }
      w[lam] = acc;
    }
  }
};

Field weighted_sum(const ExpWeights &W, const Field &g0, const Field &g1, const Field &g2)
{
  const Grid &g = g0.grid();
  Field out(g0.grid_ptr(), g0.rank());
  for (std::size_t idx = 0; idx < g.spec_size(); ++idx)
  {
    const IVec3 xi = g.mode(idx);
    const auto &w = W.w[xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]];
    for (int c = 0; c < out.ncomp(); ++c)
    {
      out.comp(c)[idx] = w[0] * g0.comp(c)[idx] + w[1] * g1.comp(c)[idx] + w[2] * g2.comp(c)[idx];
    }
  }
  return out;
}

}  // namespace

BlowupError::BlowupError(double t_, double dt_, long step_)
    : std::runtime_error("blowup-detected at t=" + fmt(t_) + " dt=" + fmt(dt_) + " step=" + std::to_string(step_)),
      t(t_), dt(dt_), step(step_)
{
}

EscapeError::EscapeError(double t_, double x_, double r_, PerturbationRun run)
    : std::runtime_error("perturbation-escape at t=" + fmt(t_) + ": X-norm " + fmt(x_) + " > radius " + fmt(r_)),
      t(t_), x_norm(x_), radius(r_), partial(std::make_shared<const PerturbationRun>(std::move(run)))
{
}

Field if_rk4_step(const Field &u, double t, double dt, const Nonlinearity &N, double *dissipation)
{
  const double h2 = 0.5 * dt;
  const Field k1 = N(t, u);
  Field tmp = u;
  tmp.axpy(h2, k1);
  const Field U2 = heat_evolve(tmp, h2);
  const Field k2 = N(t + h2, U2);
  const Field Eu = heat_evolve(u, h2);
  Field U3 = Eu;
  U3.axpy(h2, k2);
  const Field k3 = N(t + h2, U3);
  Field U4 = heat_evolve(Eu, h2);
  U4.axpy(dt, heat_evolve(k3, h2));
  const Field k4 = N(t + dt, U4);
  if (dissipation)
  {
    *dissipation = dt / 6.0 * 2.0 *
                   (gradient_energy(u) + 2.0 * gradient_energy(U2) + 2.0 * gradient_energy(U3) + gradient_energy(U4));
  }
  tmp = u;
  tmp.axpy(dt / 6.0, k1);
  Field out = heat_evolve(tmp, dt);
  Field mid = k2;
  mid += k3;
  out.axpy(dt / 3.0, heat_evolve(mid, h2));
  out.axpy(dt / 6.0, k4);
  return out;
}

Field nse_nonlinearity(const Field &u)
{
  Field out = pdiv_square(u.to_real());
  out *= -1.0;
  return out;
}

Field nse_step(const Field &u, double dt, double *dissipation)
{
  Field out = if_rk4_step(u, 0.0, dt, [](double, const Field &x) { return nse_nonlinearity(x); }, dissipation);
  if (!finite(out))
  {
    throw BlowupError(0.0, dt, 0);
  }
  return out;
}

double cfl_dt(const RealField &u, double cfl)
{
  const double s = sup_norm(u);
  return s > 0.0 ? cfl * u.grid().spacing() / s : std::numeric_limits<double>::infinity();
}

Field nse_evolve(const Field &u0, double t1, double dt, std::vector<EnergyRow> *rows)
{
  Field u = u0;
  double t = 0.0, dissipated = 0.0;
  long step = 0;
  if (rows)
  {
    rows->push_back({0.0, std::pow(l2_norm(u), 2), 0.0});
  }
  while (t < t1 * (1.0 - 1e-14))
  {
    const double h = std::min(dt, t1 - t);
    double d = 0.0;
    u = if_rk4_step(u, t, h, [](double, const Field &x) { return nse_nonlinearity(x); }, rows ? &d : nullptr);
    ++step;
    if (!finite(u))
    {
      throw BlowupError(t, h, step);
    }
    t += h;
    dissipated += d;
    if (rows)
    {
      rows->push_back({t, std::pow(l2_norm(u), 2), dissipated});
    }
  }
  return u;
}

Field linearized_step(const Field &w, double t, double dt, const BranchState &branch)
{
  double cached_t = std::numeric_limits<double>::quiet_NaN();
  RealField vr;
  auto N = [&](double s, const Field &x) {
    if (s != cached_t)
    {
      vr = branch.evaluate(s).to_real();
      cached_t = s;
    }
    RealField sym = outer(vr, x.to_real());
    Field out = leray_div(sym.to_spectral());
    out *= -2.0;
    return out;
  };
  Field out = if_rk4_step(w, t, dt, N);
  if (!finite(out))
  {
    throw BlowupError(t, dt, 0);
  }
  return out;
}

Field linearized_flow(const Field &a, double t0, double t1, double dt_max, const BranchState &branch)
{
  const long steps = std::max(1L, static_cast<long>(std::ceil((t1 - t0) / dt_max - 1e-12)));
  const double h = (t1 - t0) / steps;
  Field w = a;
  for (long s = 0; s < steps; ++s)
  {
    w = linearized_step(w, t0 + s * h, h, branch);
  }
  return w;
}

double default_t_start(const DataSet &data)
{
  const double NK = double(data.levels[data.K()].N);
  return 1.0 / (NK * NK) / 100.0;
}

std::string PerturbationRun::csv() const
{
  std::ostringstream os;
  os.precision(10);
  os << "t,w_inf,w_grad_ckappa,w_X,v_X,w_cminus,w_l2\n";
  for (const auto &r : rows)
  {
    os << r.t << "," << r.w_inf << "," << r.w_grad << "," << r.w_x << "," << r.v_x << "," << r.w_cminus << ","
       << r.w_l2 << "\n";
  }
  return os.str();
}

PerturbationRun solve_perturbation(const BranchState &branch, const PerturbationOptions &opt)
{
  const DataSet &data = branch.data();
  const GridPtr &gp = data.U0.grid_ptr();
  const Grid &g = *gp;
  const double alpha = data.params.alpha, kappa = data.params.kappa;
  PerturbationRun run;
  run.parity = branch.parity();
  run.source = source_name(opt.source);
  run.t_start = opt.t_start > 0.0 ? opt.t_start : default_t_start(data);
  run.t_end = opt.t_end;

  PerturbationForcing force(branch, opt.source);
  Nonlinearity N = [&](double s, const Field &x) { return force(s, x); };

  std::vector<double> records = log_grid(run.t_start, run.t_end, opt.record_per_decade);
  std::vector<double> snaps, resid;
  for (double s : opt.snapshot_times)
  {
    if (s >= run.t_start && s <= run.t_end)
    {
      snaps.push_back(s);
    }
  }
  for (double s : opt.residual_times)
  {
    if (s > run.t_start && s < run.t_end)
    {
      resid.push_back(s);
    }
  }
  std::sort(snaps.begin(), snaps.end());
  std::sort(resid.begin(), resid.end());

  Field w(gp, Rank::vector);
  double t = run.t_start;
  force.prepare(t);
  double u_sup = force.v_sup();
  double xv_max = 0.0;

  auto record = [&](double s) {
    force.prepare(s);
    XRow r{};
    r.t = s;
    r.w_inf = sup_norm(w);
    r.w_grad = gradient_holder(w, kappa);
    r.w_x = std::pow(s, 0.5 - alpha / 2) * r.w_inf + std::pow(s, 1.0 - alpha / 2) * r.w_grad;
    r.v_x = std::pow(s, 0.5 - alpha / 2) * force.v_sup() + std::pow(s, 1.0 - alpha / 2) * gradient_holder(force.v(), kappa);
    r.w_cminus = holder_zygmund(w, -1.0 + alpha / 2);
    r.w_l2 = l2_norm(w);
    run.rows.push_back(r);
    run.x_w = std::max(run.x_w, r.w_x);
    run.x_v = std::max(run.x_v, r.v_x);
    xv_max = std::max(xv_max, r.v_x);
    if (opt.verbose)
    {
      std::cerr << "  t=" << s << " steps=" << run.steps << " |w|=" << r.w_inf << " X(w)=" << r.w_x
                << " X(v)=" << r.v_x << "\n";
    }
    if (r.w_x > opt.escape_ratio * xv_max)
    {
      throw EscapeError(s, r.w_x, opt.escape_ratio * xv_max, run);
    }
  };
  auto snapshot = [&](double s) {
    for (double x : snaps)
    {
      if (std::abs(x - s) <= 1e-12 * x)
      {
        run.snapshots[x] = w;
      }
    }
  };
  auto advance = [&](double h) {
    w = if_rk4_step(w, t, h, N);
    ++run.steps;
    if (!finite(w))
    {
      throw BlowupError(t, h, run.steps);
    }
    if (run.steps > opt.max_steps)
    {
      throw std::runtime_error("step-budget-exhausted at t=" + fmt(t));
    }
    t += h;
    u_sup = force.last_u_sup();
  };

  std::size_t ri = 0;
  record(t);
  snapshot(t);
  ++ri;
  std::size_t si = 0, qi = 0;
  while (si < snaps.size() && snaps[si] <= t)
  {
    ++si;
  }
  while (t < run.t_end * (1.0 - 1e-13))
  {
    const double dt = allowed_dt(branch, opt, t, u_sup, g);
    // Residual samples take a 4th-order central stencil of 4 short steps around the sample.
    if (qi < resid.size())
    {
      const double hs = dt / 16.0;
      const double ts = resid[qi];
      if (t + dt >= ts - 2.0 * hs)
      {
        if (ts - 2.0 * hs > t)
        {
          advance(ts - 2.0 * hs - t);
        }
        const double h = (ts - t) / 2.0;
        std::array<Field, 5> W;
        W[0] = w;
        for (int i = 1; i < 5; ++i)
        {
          advance(h);
          W[i] = w;
        }
        Field dw = W[0];
        dw.axpy(-8.0, W[1]);
        dw.axpy(8.0, W[3]);
        dw -= W[4];
        dw *= 1.0 / (12.0 * h);
        force.prepare(ts);
        Field u = force.v();
        u += W[2];
        Field E = force.dv();
        E += dw;
        const Field lap = laplacian(u);
        const Field pq = pdiv_square(u.to_real());
        ResidualSample rs{};
        rs.t = ts;
        rs.reference = sup_norm(pq);
        const double scale = std::max({rs.reference, sup_norm(E), sup_norm(lap)});
        E -= lap;
        E += pq;
        rs.defect = sup_norm(E);
        rs.relative = rs.defect / std::max(rs.reference, 1e-300);
        rs.scale_relative = rs.defect / std::max(scale, 1e-300);
        run.residuals.push_back(rs);
        ++qi;
        continue;
      }
    }
    while (ri < records.size() && records[ri] <= t * (1.0 + 1e-13))
    {
      ++ri;
    }
    while (si < snaps.size() && snaps[si] <= t * (1.0 + 1e-13))
    {
      ++si;
    }
    double target = run.t_end;
    if (ri < records.size())
    {
      target = std::min(target, records[ri]);
    }
    if (si < snaps.size())
    {
      target = std::min(target, snaps[si]);
    }
    if (qi < resid.size())
    {
      target = std::min(target, resid[qi] - 2.0 * dt / 16.0);
    }
    const double h = std::min(dt, target - t);
    advance(h);
    if (ri < records.size() && std::abs(t - records[ri]) <= 1e-12 * t)
    {
      t = records[ri];
      record(t);
      ++ri;
    }
    if (si < snaps.size() && std::abs(t - snaps[si]) <= 1e-12 * t)
    {
      t = snaps[si];
      snapshot(t);
      ++si;
    }
  }
  return run;
}

PicardCheck picard_crosscheck(const BranchState &branch, const PerturbationOptions &opt, int steps, int max_iterations)
{
  const DataSet &data = branch.data();
  const GridPtr &gp = data.U0.grid_ptr();
  const Grid &g = *gp;
  PicardCheck c;
  c.steps = steps;
  const double t0 = opt.t_start > 0.0 ? opt.t_start : default_t_start(data);
  PerturbationForcing force(branch, opt.source);
  force.prepare(t0);
  c.dt = 0.25 * allowed_dt(branch, opt, t0, force.v_sup(), g);
  c.t_end = t0 + steps * c.dt;
  Nonlinearity N = [&](double s, const Field &x) { return force(s, x); };

  Field w_pde(gp, Rank::vector);
  for (int s = 0; s < steps; ++s)
  {
    w_pde = if_rk4_step(w_pde, t0 + s * c.dt, c.dt, N);
  }

  const double tau = 0.5 * c.dt;
  const int points = 2 * steps + 1;
  const int lam_max = 3 * (g.n() / 2) * (g.n() / 2);
  const ExpWeights odd(tau, tau, lam_max), even(tau, 2.0 * tau, lam_max);
  std::vector<Field> w(points, Field(gp, Rank::vector));
  std::vector<Field> G(points);
  for (int it = 0; it < max_iterations; ++it)
  {
    for (int i = 0; i < points; ++i)
    {
      G[i] = N(t0 + i * tau, w[i]);
    }
    std::vector<Field> next(points, Field(gp, Rank::vector));
    for (int s = 0; s < steps; ++s)
    {
      const int i = 2 * s;
      next[i + 1] = heat_evolve(next[i], tau);
      next[i + 1] += weighted_sum(odd, G[i], G[i + 1], G[i + 2]);
      next[i + 2] = heat_evolve(next[i], 2.0 * tau);
      next[i + 2] += weighted_sum(even, G[i], G[i + 1], G[i + 2]);
    }
    double inc = 0.0;
    for (int i = 0; i < points; ++i)
    {
      inc = std::max(inc, sup_norm(next[i] - w[i]));
    }
    w = std::move(next);
    c.iterations = it + 1;
    c.increment = inc / std::max(sup_norm(w.back()), 1e-300);
    if (c.increment < 1e-13)
    {
      break;
    }
  }
  c.relative = sup_norm(w.back() - w_pde) / std::max(sup_norm(w_pde), 1e-300);
  return c;
}

std::string DistinctnessReport::csv() const
{
  std::ostringstream os;
  os.precision(10);
  os << "t,D_u,D_v\n";
  for (const auto &r : rows)
  {
    os << r.t << "," << r.D << "," << r.Dv << "\n";
  }
  return os.str();
}

std::string DistinctnessReport::to_json() const
{
  std::ostringstream os;
  os.precision(10);
  os << "{\"t0\": " << t0 << ", \"N0\": " << N0 << ", \"D0\": " << D0 << ", \"U0_sup\": " << U0_sup
     << ", \"D_t0\": " << D_t0 << ", \"Du_t0\": " << Du_t0 << ", \"constant\": " << constant()
     << ", \"vp0_t0\": " << vp0_t0 << ", \"heat_tail\": " << heat_tail << ", \"cascade_sum\": " << cascade_sum
     << ", \"w1_t0\": " << w1_t0 << ", \"w2_t0\": " << w2_t0 << "}";
  return os.str();
}

DistinctnessReport distinctness_report(const BranchState &b1, const BranchState &b2, const PerturbationRun *run1,
                                       const PerturbationRun *run2, const std::vector<double> &tgrid)
{
  if (b1.parity() != 1 || b2.parity() != 2)
  {
    throw BranchError("distinctness_report expects parities 1 and 2");
  }
  const DataSet &data = b1.data();
  DistinctnessReport r;
  r.N0 = double(data.levels[0].N);
  r.t0 = 1.0 / (r.N0 * r.N0);
  r.U0_sup = sup_norm(data.U0);
  r.D0 = sup_norm(b1.evaluate(0.0) - b2.evaluate(0.0));
  auto w_at = [](const PerturbationRun *run, double t, bool &ok) -> const Field * {
    ok = false;
    if (!run)
    {
      return nullptr;
    }
    if (t <= run->t_start)
    {
      ok = true;
      return nullptr;
    }
    for (const auto &[s, f] : run->snapshots)
    {
      if (std::abs(s - t) <= 1e-12 * t)
      {
        ok = true;
        return &f;
      }
    }
    return nullptr;
  };
  auto row = [&](double t) {
    Field d = b1.evaluate(t) - b2.evaluate(t);
    DistinctnessRow x{t, std::numeric_limits<double>::quiet_NaN(), sup_norm(d)};
    bool ok1 = false, ok2 = false;
    const Field *w1 = w_at(run1, t, ok1);
    const Field *w2 = w_at(run2, t, ok2);
    if (ok1 && ok2)
    {
      if (w1)
      {
        d += *w1;
      }
      if (w2)
      {
        d -= *w2;
      }
      x.D = sup_norm(d);
    }
    return x;
  };
  for (double t : tgrid)
  {
    r.rows.push_back(row(t));
  }
  const DistinctnessRow at0 = row(r.t0);
  r.D_t0 = at0.Dv;
  r.Du_t0 = at0.D;
  r.vp0_t0 = sup_norm(b1.principal_part(0, r.t0));
  for (int k = 0; k <= data.K(); ++k)
  {
    const BranchState &h = b1.is_heat(k) ? b1 : b2;
    const BranchState &c = b1.is_heat(k) ? b2 : b1;
    if (k >= 1)
    {
      r.heat_tail += sup_norm(h.heat_level(k, r.t0));
    }
    r.cascade_sum += sup_norm(c.cascade_level(k, r.t0));
  }
  bool ok = false;
  if (const Field *w1 = w_at(run1, r.t0, ok))
  {
    r.w1_t0 = sup_norm(*w1);
  }
  if (const Field *w2 = w_at(run2, r.t0, ok))
  {
    r.w2_t0 = sup_norm(*w2);
  }
  return r;
}

std::vector<AttainmentRow> data_attainment(const BranchState &b, const std::vector<double> &tgrid)
{
  std::vector<AttainmentRow> out;
  for (double t : tgrid)
  {
    out.push_back({t, sobolev_neg(b.evaluate(t) - b.data().U0, 4.0)});
  }
  return out;
}

}  // namespace mikado
