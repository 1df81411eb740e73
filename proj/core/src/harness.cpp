#include "slowmo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "slowmo/error.hpp"

namespace slowmo {

using nlohmann::json;

Grid RunConfig::grid() const {
  return nodes ? Grid(a, b, *nodes) : Grid::resolving(a, b, params.eps, cells_per_eps);
}

StepFunction RunConfig::step_function() const {
  if (init != InitKind::stationary_periodic) return StepFunction(a, b, jumps, first_sign);
  std::vector<double> zeros;
  const double spacing = (b - a) / periodic_zeros;
  for (int i = 0; i < periodic_zeros; ++i) zeros.push_back(a + spacing * (i + 0.5));
  return StepFunction(a, b, std::move(zeros), first_sign);
}

void RunConfig::validate() const {
  std::vector<std::string> errs;
  auto fail = [&](const std::string& field, const std::string& why) {
    errs.push_back(field + ": " + why);
  };
  auto finite = [](double x) { return std::isfinite(x); };

  if (schema != kSchema) fail("schema", "expected " + std::to_string(kSchema));
  if (!(params.p > 1.0 && finite(params.p))) fail("p", "must be > 1");
  if (!(params.n > 1.0 && finite(params.n))) fail("n", "must be > 1");
  if (!(params.eps > 0.0 && finite(params.eps))) fail("eps", "must be > 0");
  const bool domain_ok = finite(a) && finite(b) && a < b;
  if (!domain_ok) fail("a,b", "need finite a < b");
  // At least 4 cells across an interface of width eps.
  if (nodes) {
    if (*nodes < 3) fail("nodes", "must be >= 3");
    else if (domain_ok && params.eps > 0.0 && (b - a) / (*nodes - 1) > params.eps / 4.0)
      fail("nodes", "mesh does not resolve eps (need h <= eps/4)");
  } else if (!(cells_per_eps >= 4.0 && finite(cells_per_eps))) {
    fail("cells_per_eps", "must be >= 4");
  }
  if (first_sign != 1 && first_sign != -1) fail("first_sign", "must be +1 or -1");

  bool layout_ok = domain_ok;
  if (init == InitKind::stationary_periodic) {
    if (periodic_zeros < 1) {
      fail("periodic_zeros", "must be >= 1");
      layout_ok = false;
    }
    if (params.n < params.p && params.regime() == Regime::subcritical)
      fail("init", "stationary-periodic needs n >= p");
  } else {
    for (std::size_t i = 0; i < jumps.size(); ++i) {
      if (!(jumps[i] > a && jumps[i] < b)) {
        fail("jumps", "jump " + std::to_string(jumps[i]) + " outside (a, b)");
        layout_ok = false;
      } else if (i > 0 && !(jumps[i - 1] < jumps[i])) {
        fail("jumps", "must be strictly increasing");
        layout_ok = false;
      }
    }
    if (init == InitKind::stationary_subcritical) {
      if (jumps.empty()) fail("jumps", "stationary-subcritical needs at least one jump");
      if (!(params.n < params.p) || params.regime() != Regime::subcritical)
        fail("init", "stationary-subcritical needs n < p");
    }
  }
  layout_ok = layout_ok && (first_sign == 1 || first_sign == -1);

  try {
    solver.validate();
  } catch (const Error& e) {
    fail("solver", e.what());
  }
  if (!(t_end >= 0.0 && finite(t_end))) fail("t_end", "must be finite and >= 0");
  if (!(schedule.t_first > 0.0)) fail("t_first", "must be > 0");
  if (schedule.per_decade < 1) fail("per_decade", "must be >= 1");
  if (!(band.lo <= band.hi)) fail("band", "need band_lo <= band_hi");
  else if (band.contains(1.0) || band.contains(-1.0)) fail("band", "must exclude +-1");

  std::optional<double> r;
  if (layout_ok) {
    const auto v = step_function();
    if (v.count() > 0) r = max_separation_radius(v);
    if (!r && stop == StopCondition::first_collapse)
      fail("stop", "first-collapse needs at least one layer");
  }
  if (A) {
    if (!r) fail("A", "needs a layer layout");
    else if (params.p > 1.0 && params.n > 1.0) {
      const double A_max = *r * std::sqrt(2.0) * constants(params).lambda_p;
      if (!(*A > 0.0 && *A < A_max)) fail("A", "must lie in (0, " + std::to_string(A_max) + ")");
    }
  }
  if (delta) {
    if (!r) fail("delta", "needs a layer layout");
    else if (!(*delta > 0.0 && *delta < *r))
      fail("delta", "must lie in (0, " + std::to_string(*r) + ")");
  }

  if (!errs.empty()) {
    std::string msg = "invalid run config";
    for (const auto& e : errs) msg += "; " + e;
    throw Error(Errc::validation_failure, msg);
  }
}

Field build_initial(const RunConfig& cfg) {
  const Grid grid = cfg.grid();
  switch (cfg.init) {
    case InitKind::layers:
      return build_layer_datum(cfg.step_function(), cfg.params, grid);
    case InitKind::stationary_subcritical:
      return build_stationary_subcritical(cfg.step_function(), cfg.params, grid);
    case InitKind::stationary_periodic:
      return build_stationary_periodic(cfg.periodic_zeros, cfg.params, grid, cfg.first_sign).field;
  }
  throw Error(Errc::invalid_argument, "unknown init kind");
}

namespace {

json report_json(const EnergyReport& r) { return json::parse(to_json(r)); }

json snapshot_json(const Snapshot& s) {
  return json{{"t", s.t},
              {"dt", s.dt},
              {"E", s.energy},
              {"ut_norm_sq", s.ut_norm_sq},
              {"dissipation", s.dissipation},
              {"interfaces", s.interfaces}};
}

}  // namespace

RunOutcome run_scenario(const RunConfig& cfg) {
  cfg.validate();
  RunOutcome out;
  out.config = cfg;
  out.initial = build_initial(cfg);
  const StepFunction v = cfg.step_function();
  const auto& prm = cfg.params;
  const bool layered = v.count() > 0;

  if (layered) {
    const double A = cfg.A.value_or(0.5 * max_separation_radius(v) * std::sqrt(2.0) *
                                    constants(prm).lambda_p);
    out.initial_report = lower_bound_check(out.initial, v, prm, A);
  } else {
    out.initial_report.E = energy(out.initial, prm);
    out.initial_report.gap = -out.initial_report.E;
  }

  std::ofstream snapshots, runlog;
  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    snapshots.open(cfg.output_dir / "snapshots.csv");
    runlog.open(cfg.output_dir / "run.jsonl");
    if (!snapshots || !runlog)
      throw Error(Errc::validation_failure, "output_dir: cannot write to " + cfg.output_dir.string());
    snapshots.precision(17);
    snapshots << "t,x,u\n";
    std::ofstream(cfg.output_dir / "config.txt") << dump_config(cfg);
  }

  const std::size_t n0 = interfaces_of_field(out.initial, cfg.band).size();
  RunOptions opts;
  opts.schedule = cfg.schedule;
  opts.band = cfg.band;
  opts.observer = [&](const Snapshot& s, const Field& u) {
    if (snapshots.is_open()) {
      for (std::size_t i = 0; i < u.size(); ++i)
        snapshots << s.t << ',' << u.grid.x(i) << ',' << u[i] << '\n';
      runlog << snapshot_json(s).dump() << '\n';
    }
    return cfg.stop != StopCondition::first_collapse || s.interfaces.size() >= n0;
  };
  out.record = run(out.initial, cfg.t_end, prm, cfg.solver, opts);

  if (layered) {
    out.events = detect_collapse(out.record, v, cfg.delta);
    if (const auto first = first_collapse(out.events)) out.first_collapse_time = first->t_collapse;
  }

  if (!cfg.output_dir.empty()) {
    const double E_final = out.record.snapshots.back().energy;
    const double budget = dissipation_budget(out.record);
    json rep{{"initial", report_json(out.initial_report)},
             {"E_final", E_final},
             {"dissipation_budget", budget},
             {"dissipation_identity_residual",
              (out.record.snapshots.front().energy - E_final) - budget / prm.eps},
             {"accepted_steps", out.record.accepted},
             {"rejected_steps", out.record.rejected},
             {"stopped_early", out.record.stopped_early}};
    std::ofstream(cfg.output_dir / "energy_report.json") << rep.dump(2) << '\n';
    std::ofstream(cfg.output_dir / "events.json") << to_json(out.events) << '\n';
  }
  return out;
}

std::string_view to_string(SweepAxis a) noexcept {
  switch (a) {
    case SweepAxis::eps: return "eps";
    case SweepAxis::p: return "p";
    case SweepAxis::n: return "n";
  }
  return "unknown";
}

void SweepConfig::validate() const {
  if (values.empty()) throw Error(Errc::validation_failure, "values: must be nonempty");
  if (!std::is_sorted(values.begin(), values.end()) &&
      !std::is_sorted(values.begin(), values.end(), std::greater<>()))
    throw Error(Errc::validation_failure, "values: must be sorted");
  RunConfig probe = base;
  probe.stop = stop;
  probe.validate();
}

bool SweepResult::all_succeeded() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error; });
}

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult result;
  result.rows.resize(cfg.values.size());

  auto work = [&](std::size_t i) {
    SweepRow& row = result.rows[i];
    row.value = cfg.values[i];
    RunConfig rc = cfg.base;
    rc.stop = cfg.stop;
    rc.output_dir.clear();
    switch (cfg.axis) {
      case SweepAxis::eps: rc.params.eps = row.value; break;
      case SweepAxis::p: rc.params.p = row.value; break;
      case SweepAxis::n: rc.params.n = row.value; break;
    }
    rc.name = cfg.base.name + "-" + std::string(to_string(cfg.axis)) + "-" + std::to_string(row.value);
    try {
      const auto out = run_scenario(rc);
      row.collapse_time = out.first_collapse_time;
      row.t_reached = out.record.snapshots.back().t;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(cfg.values.size()));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cfg.values.size();) work(i);
      });
  }

  if (cfg.axis == SweepAxis::eps) {
    std::vector<std::pair<double, double>> samples;
    for (const auto& row : result.rows)
      if (row.collapse_time) samples.emplace_back(row.value, *row.collapse_time);
    const Regime regime = cfg.base.params.regime();
    std::optional<double> reference;
    if (regime == Regime::supercritical) reference = constants(cfg.base.params).gamma_np;
    try {
      result.fit = scaling_fit(samples, regime, reference);
    } catch (const Error& e) {
      result.fit_error = e.what();
    }
  } else {
    result.fit_error = "scaling fits are defined for the eps axis only";
  }

  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream csv(cfg.output_dir / "sweep.csv");
    write_sweep_csv(csv, result);
    std::ofstream(cfg.output_dir / "sweep.json") << to_json(result) << '\n';
    if (result.fit) {
      std::ofstream fit_csv(cfg.output_dir / "fit.csv");
      write_fit_csv(fit_csv, *result.fit);
    }
  }
  return result;
}

std::string to_json(const SweepResult& result) {
  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"value", r.value},
                    {"collapse_time", r.collapse_time ? json(*r.collapse_time) : json(nullptr)},
                    {"t_reached", r.t_reached},
                    {"error", r.error ? json(*r.error) : json(nullptr)}});
  }
  json j{{"rows", rows}};
  j["fit"] = result.fit ? json::parse(to_json(*result.fit)) : json(nullptr);
  j["fit_error"] = result.fit_error ? json(*result.fit_error) : json(nullptr);
  j["failed"] = json::array();
  for (const auto& r : result.rows)
    if (r.error) j["failed"].push_back(r.value);
  return j.dump(2);
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "value,collapse_time,t_reached,error\n";
  os.precision(17);
  for (const auto& r : result.rows) {
    os << r.value << ',';
    if (r.collapse_time) os << *r.collapse_time;
    os << ',' << r.t_reached << ',';
    if (r.error) {
      std::string e = *r.error;
      std::replace(e.begin(), e.end(), '"', '\'');
      os << '"' << e << '"';
    }
    os << '\n';
  }
}

namespace {

RunConfig figure_layout(double p, double n, Scheme scheme, double dt_max, double t_end) {
  RunConfig c;
  c.params = {p, n, 0.1};
  c.a = -4.0;
  c.b = 4.0;
  c.cells_per_eps = 8.0;
  c.jumps = {-3.4, -2.0, -0.5, 0.8, 2.2, 3.2};
  c.first_sign = -1;
  c.solver.scheme = scheme;
  c.solver.dt_max = dt_max;
  c.t_end = t_end;
  c.stop = StopCondition::first_collapse;
  return c;
}

std::vector<Scenario> make_registry() {
  std::vector<Scenario> r;
  auto add = [&](std::string name, std::string desc, RunConfig cfg, std::optional<double> ref,
                 bool long_running) {
    cfg.name = name;
    r.push_back({std::move(name), std::move(desc), std::move(cfg), ref, long_running});
  };
  add("fig-critical", "p = n = 2, eps = 0.1, six layers on [-4, 4]",
      figure_layout(2, 2, Scheme::linearly_implicit, 10.0, 1e7), 3e4, true);
  add("fig-critical-p4", "p = n = 4, eps = 0.1, six layers on [-4, 4]",
      figure_layout(4, 4, Scheme::linearly_implicit, 1e6, 1e11), 7e8, true);
  add("fig-degenerate", "p = 2, n = 4, eps = 0.1, six layers on [-4, 4]",
      figure_layout(2, 4, Scheme::semi_implicit_lagged, 0.05, 1e5), 800.0, false);
  add("fig-degenerate-p3", "p = 3, n = 4, eps = 0.1, six layers on [-4, 4]; no time quoted",
      figure_layout(3, 4, Scheme::linearly_implicit, 10.0, 1e8), std::nullopt, false);
  add("fig-real-exponent-pi", "p = pi, n = 8, eps = 0.1, six layers on [-4, 4]",
      figure_layout(std::numbers::pi, 8, Scheme::linearly_implicit, 10.0, 1e8), 2e4, true);
  add("fig-real-exponent", "p = 5.5, n = 8, eps = 0.1, six layers on [-4, 4]",
      figure_layout(5.5, 8, Scheme::linearly_implicit, 1e6, 1e12), 5e9, true);
  return r;
}

}  // namespace

const std::vector<Scenario>& scenario_registry() {
  static const std::vector<Scenario> registry = make_registry();
  return registry;
}

const Scenario& find_scenario(std::string_view name) {
  for (const auto& s : scenario_registry())
    if (s.name == name) return s;
  throw Error(Errc::invalid_argument, "unknown scenario '" + std::string(name) + "'");
}

ReproduceResult reproduce(const Scenario& scenario, bool allow_long,
                          const std::filesystem::path& output_dir) {
  if (scenario.long_running && !allow_long)
    throw Error(Errc::validation_failure,
                "scenario '" + scenario.name + "' is long-running; pass --allow-long");
  RunConfig cfg = scenario.config;
  cfg.output_dir = output_dir;
  ReproduceResult res;
  res.outcome = run_scenario(cfg);
  res.collapse_time = res.outcome.first_collapse_time;
  res.reference_time = scenario.reference_time;
  if (res.collapse_time && res.reference_time) {
    res.ratio = *res.collapse_time / *res.reference_time;
    res.within_factor_10 = *res.ratio >= 0.1 && *res.ratio <= 10.0;
  }
  return res;
}

}  // namespace slowmo
