#include "slowmo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "slowmo/error.hpp"

namespace slowmo {

std::string_view to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::explicit_euler: return "explicit";
    case Scheme::semi_implicit_lagged: return "semi-implicit-lagged";
    case Scheme::linearly_implicit: return "linearly-implicit";
  }
  return "unknown";
}

Scheme scheme_from_string(std::string_view s) {
  if (s == "explicit") return Scheme::explicit_euler;
  if (s == "semi-implicit-lagged") return Scheme::semi_implicit_lagged;
  if (s == "linearly-implicit") return Scheme::linearly_implicit;
  throw Error(Errc::invalid_argument, "unknown scheme '" + std::string(s) + "'");
}

void SolverConfig::validate() const {
  auto bad = [](const std::string& msg) { throw Error(Errc::invalid_argument, msg); };
  if (!(dt_min > 0.0)) bad("dt_min must be > 0");
  if (!(dt_min <= dt_init && dt_init <= dt_max)) bad("need dt_min <= dt_init <= dt_max");
  if (!std::isfinite(dt_max)) bad("dt_max must be finite");
  if (!(energy_tolerance >= 0.0)) bad("energy_tolerance must be >= 0");
  if (reg_delta && !(*reg_delta >= 0.0 && std::isfinite(*reg_delta))) bad("reg_delta must be >= 0");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) bad("cfl_safety must lie in (0, 1]");
  if (!(growth_factor >= 1.0)) bad("growth_factor must be >= 1");
  if (growth_after < 1) bad("growth_after must be >= 1");
}

double SolverConfig::delta_for(const PotentialParams& params) const noexcept {
  if (reg_delta) return *reg_delta;
  return params.p < 2.0 ? 1e-10 : 0.0;
}

double flux(double g, double p, double delta) noexcept {
  if (p == 2.0) return g;
  if (delta == 0.0) return g == 0.0 ? 0.0 : std::pow(std::abs(g), p - 2.0) * g;
  return std::pow(g * g + delta * delta, 0.5 * (p - 2.0)) * g;
}

double flux(double g, const PotentialParams& params, const SolverConfig& config) noexcept {
  return flux(g, params.p, config.delta_for(params));
}

double flux_derivative(double g, double p, double delta) noexcept {
  if (p == 2.0) return 1.0;
  const double s = g * g + delta * delta;
  if (s == 0.0) return p > 2.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::pow(s, 0.5 * (p - 4.0)) * ((p - 1.0) * g * g + delta * delta);
}

namespace {

// Diffusion coefficient eps^p, factored out of every flux difference.
double eps_p(const PotentialParams& prm) { return std::pow(prm.eps, prm.p); }

std::vector<double> gradients(const Field& u) {
  const double h = u.grid.h();
  std::vector<double> g(u.size() - 1);
  for (std::size_t i = 0; i + 1 < u.size(); ++i) g[i] = (u[i + 1] - u[i]) / h;
  return g;
}

double capped_d2F(const PotentialParams& prm, double u) {
  return std::min(eval_d2F(prm, u), 1e300);
}

// Curvature used only for step-size selection.  For n < 2, F'' is unbounded at the
// wells, so 1 - u^2 is floored there; the energy test guards the actual step.
double curvature_for_dt(const PotentialParams& prm, double u) {
  if (prm.n >= 2.0) return capped_d2F(prm, u);
  constexpr double kFloor = 1e-2;
  const double w = std::abs((1.0 - u) * (1.0 + u));
  if (w >= kFloor) return capped_d2F(prm, u);
  return eval_d2F(prm, std::sqrt(1.0 - kFloor));
}

// Thomas algorithm; sub[0] and sup[m-1] are ignored.  Returns false on a zero
// or non-finite pivot.
bool solve_tridiagonal(const std::vector<double>& sub, std::vector<double> diag,
                       const std::vector<double>& sup, std::vector<double>& rhs) {
  const std::size_t m = diag.size();
  for (std::size_t i = 1; i < m; ++i) {
    if (diag[i - 1] == 0.0 || !std::isfinite(diag[i - 1])) return false;
    const double f = sub[i] / diag[i - 1];
    diag[i] -= f * sup[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  if (diag[m - 1] == 0.0 || !std::isfinite(diag[m - 1])) return false;
  rhs[m - 1] /= diag[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
  return true;
}

Field advance(const Field& u, double dt, const PotentialParams& prm, const SolverConfig& cfg,
              bool& ok) {
  const std::size_t m = u.size();
  const double h = u.grid.h();
  const double ep = eps_p(prm);
  const double delta = cfg.delta_for(prm);
  ok = true;

  if (cfg.scheme == Scheme::explicit_euler) {
    Field du = rhs(u, prm, cfg);
    Field out = u;
    for (std::size_t i = 0; i < m; ++i) out[i] += dt * du[i];
    return out;
  }

  const auto g = gradients(u);
  std::vector<double> sub(m, 0.0), diag(m, 1.0), sup(m, 0.0), b(m);
  if (cfg.scheme == Scheme::semi_implicit_lagged) {
    // (u' - u)/dt = eps^p D(kappa(u)) u' / w - F'(u)
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double kappa = prm.p == 2.0 ? 1.0 : (delta == 0.0 && g[i] == 0.0
                                                     ? (prm.p > 2.0 ? 0.0 : 1e300)
                                                     : std::pow(g[i] * g[i] + delta * delta,
                                                                0.5 * (prm.p - 2.0)));
      const double c = ep * kappa / h;
      const double cl = dt * c / u.grid.weight(i);
      const double cr = dt * c / u.grid.weight(i + 1);
      diag[i] += cl;
      sup[i] -= cl;
      diag[i + 1] += cr;
      sub[i + 1] -= cr;
    }
    for (std::size_t i = 0; i < m; ++i) b[i] = u[i] - dt * eval_dF(prm, u[i]);
    ok = solve_tridiagonal(sub, diag, sup, b);
    return Field(u.grid, std::move(b));
  }

  // Linearly implicit: (I - dt J) du = dt f(u).
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double c = ep * std::min(flux_derivative(g[i], prm.p, delta), 1e300) / h;
    const double cl = dt * c / u.grid.weight(i);
    const double cr = dt * c / u.grid.weight(i + 1);
    diag[i] += cl;
    sup[i] -= cl;
    diag[i + 1] += cr;
    sub[i + 1] -= cr;
  }
  const Field f = rhs(u, prm, cfg);
  for (std::size_t i = 0; i < m; ++i) {
    diag[i] += dt * capped_d2F(prm, u[i]);
    b[i] = dt * f[i];
  }
  ok = solve_tridiagonal(sub, diag, sup, b);
  for (std::size_t i = 0; i < m; ++i) b[i] += u[i];
  return Field(u.grid, std::move(b));
}

}  // namespace

Field rhs(const Field& u, const PotentialParams& params, const SolverConfig& config) {
  const std::size_t m = u.size();
  const double ep = eps_p(params);
  const double delta = config.delta_for(params);
  const auto g = gradients(u);
  std::vector<double> out(m);
  double left = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double right = i + 1 < m ? flux(g[i], params.p, delta) : 0.0;
    out[i] = ep * (right - left) / u.grid.weight(i) - eval_dF(params, u[i]);
    left = right;
  }
  return Field(u.grid, std::move(out));
}

double discrete_energy(const Field& u, const PotentialParams& params, double delta) {
  const double h = u.grid.h();
  const double p = params.p;
  const double grad_scale = std::pow(params.eps, p - 1.0) / p;
  const double dp = std::pow(delta, p);
  double grad = 0.0, pot = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double g = (u[i + 1] - u[i]) / h;
    // (g^2 + delta^2)^{p/2} - delta^p without cancellation for |g| << delta.
    grad += delta == 0.0 ? std::pow(std::abs(g), p)
                         : dp * std::expm1(0.5 * p * std::log1p((g / delta) * (g / delta)));
  }
  for (std::size_t i = 0; i < u.size(); ++i) pot += u.grid.weight(i) * eval_F(params, u[i]);
  return h * grad_scale * grad + pot / params.eps;
}

double stable_dt(const Field& u, const PotentialParams& params, const SolverConfig& config) {
  if (config.scheme == Scheme::linearly_implicit) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  if (config.scheme == Scheme::semi_implicit_lagged) {
    for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, curvature_for_dt(params, u[i]));
  } else {
    const double h = u.grid.h();
    const double ep = eps_p(params);
    const double delta = config.delta_for(params);
    const auto g = gradients(u);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double dl = i > 0 ? flux_derivative(g[i - 1], params.p, delta) : 0.0;
      const double dr = i + 1 < u.size() ? flux_derivative(g[i], params.p, delta) : 0.0;
      const double diffusion = ep * (dl + dr) / (u.grid.weight(i) * h);
      worst = std::max(worst, diffusion + 0.5 * std::max(curvature_for_dt(params, u[i]), 0.0));
    }
  }
  return worst > 0.0 ? config.cfl_safety / worst : std::numeric_limits<double>::infinity();
}

std::pair<Field, StepResult> attempt_step(const Field& u, double dt, const PotentialParams& params,
                                          const SolverConfig& config,
                                          std::optional<double> energy_before) {
  if (!(dt > 0.0 && std::isfinite(dt))) throw Error(Errc::invalid_argument, "dt must be finite and > 0");
  const double delta = config.delta_for(params);
  StepResult res;
  res.dt_used = dt;
  res.energy_before = energy_before ? *energy_before : discrete_energy(u, params, delta);
  bool ok = true;
  Field next = advance(u, dt, params, config, ok);
  double norm = 0.0;
  for (std::size_t i = 0; ok && i < next.size(); ++i) {
    if (!std::isfinite(next[i])) ok = false;
    const double d = (next[i] - u[i]) / dt;
    norm += u.grid.weight(i) * d * d;
  }
  res.ut_norm_sq = norm;
  res.energy_after = ok ? discrete_energy(next, params, delta)
                        : std::numeric_limits<double>::infinity();
  res.accepted = ok && std::isfinite(res.energy_after) &&
                 res.energy_after <= res.energy_before + config.energy_tolerance;
  return {std::move(next), res};
}

std::pair<Field, StepResult> step(const Field& u, double dt, const PotentialParams& params,
                                  const SolverConfig& config, std::optional<double> energy_before) {
  if (!energy_before) energy_before = discrete_energy(u, params, config.delta_for(params));
  int rejections = 0;
  for (;;) {
    auto out = attempt_step(u, dt, params, config, energy_before);
    if (out.second.accepted) {
      out.second.rejections = rejections;
      return out;
    }
    ++rejections;
    dt *= 0.5;
    if (dt < config.dt_min)
      throw Error(Errc::dt_underflow, "dt fell below dt_min = " + std::to_string(config.dt_min) +
                                          " after " + std::to_string(rejections) + " rejections");
  }
}

std::vector<double> ObserverSchedule::times(double t_end) const {
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw Error(Errc::invalid_argument, "t_end must be finite and >= 0");
  if (!(t_first > 0.0) || per_decade < 1)
    throw Error(Errc::invalid_argument, "observer schedule needs t_first > 0, per_decade >= 1");
  std::vector<double> ts{0.0};
  if (t_end == 0.0) return ts;
  for (int k = 0;; ++k) {
    const double t = t_first * std::pow(10.0, static_cast<double>(k) / per_decade);
    if (t >= t_end * (1.0 - 1e-12)) break;
    ts.push_back(t);
  }
  ts.push_back(t_end);
  return ts;
}

RunRecord run(const Field& u0, double t_end, const PotentialParams& params,
              const SolverConfig& config, const RunOptions& options) {
  params.validate();
  config.validate();
  for (double v : u0.u)
    if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "initial field is not finite");
  if (options.band) options.band->validate();
  const auto times = options.schedule.times(t_end);
  const double delta = config.delta_for(params);

  RunRecord rec;
  rec.band = options.band;
  Field u = u0;
  double t = 0.0, energy = discrete_energy(u, params, delta), dissipation = 0.0;

  auto snapshot = [&](double dt_last, double ut) {
    Snapshot s{t, dt_last, energy, dissipation, ut, {}};
    if (options.band) s.interfaces = interfaces_of_field(u, *options.band).positions;
    rec.snapshots.push_back(s);
    if (options.keep_fields) rec.fields.push_back(u);
    return !options.observer || options.observer(rec.snapshots.back(), u);
  };

  if (!snapshot(0.0, 0.0)) {
    rec.stopped_early = true;
    rec.final_field = u;
    return rec;
  }

  double dt = config.dt_init;
  int streak = 0;
  for (std::size_t idx = 1; idx < times.size();) {
    const double target = times[idx];
    dt = std::min({dt, config.dt_max, stable_dt(u, params, config)});
    dt = std::max(dt, config.dt_min);
    double dt_try = dt;
    bool hits = false;
    if (t + dt_try >= target - 1e-12 * target) {
      dt_try = target - t;
      hits = true;
    }
    auto [next, res] = step(u, dt_try, params, config, energy);
    if (res.rejections > 0) {
      dt = res.dt_used;
      streak = 0;
      hits = false;
    } else if (++streak >= config.growth_after) {
      dt = std::min(dt * config.growth_factor, config.dt_max);
      streak = 0;
    }
    if (options.record_steps)
      rec.steps.push_back({t, res.dt_used, res.energy_before, res.energy_after, res.ut_norm_sq});
    t = hits ? target : t + res.dt_used;
    u = std::move(next);
    energy = res.energy_after;
    dissipation += res.ut_norm_sq * res.dt_used;
    ++rec.accepted;
    rec.rejected += static_cast<std::size_t>(res.rejections);
    if (hits || t >= target) {
      t = target;
      ++idx;
      if (!snapshot(res.dt_used, res.ut_norm_sq)) {
        rec.stopped_early = true;
        break;
      }
    }
  }
  rec.final_field = std::move(u);
  return rec;
}

}  // namespace slowmo
