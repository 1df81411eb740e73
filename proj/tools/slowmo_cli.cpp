// slowmo: command line front end.
// Exit codes: 0 success, 2 validation failure, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "slowmo/diagnostics.hpp"
#include "slowmo/error.hpp"
#include "slowmo/harness.hpp"
#include "slowmo/layers.hpp"
#include "slowmo/profiles.hpp"
#include "slowmo/solver.hpp"

namespace {

using nlohmann::json;
using namespace slowmo;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

// Writes CSV to `path`, or stdout when it is empty.
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(Errc::validation_failure, "cannot write " + path);
  fn(out);
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& sets) {
  RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::validation_failure, "--set expects key=value, got '" + kv + "'");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

json outcome_summary(const RunOutcome& out) {
  const auto& rec = out.record;
  json events = json::parse(to_json(out.events));
  return json{{"name", out.config.name},
              {"t_reached", rec.snapshots.back().t},
              {"E_initial", rec.snapshots.front().energy},
              {"E_final", rec.snapshots.back().energy},
              {"dissipation_budget", dissipation_budget(rec)},
              {"accepted_steps", rec.accepted},
              {"rejected_steps", rec.rejected},
              {"stopped_early", rec.stopped_early},
              {"interfaces_final", rec.snapshots.back().interfaces},
              {"first_collapse", out.first_collapse_time ? json(*out.first_collapse_time) : json(nullptr)},
              {"events", events},
              {"energy_report", json::parse(to_json(out.initial_report))}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-Laplacian bistable reaction-diffusion metastability lab"};
  app.require_subcommand(1);

  PotentialParams prm{};
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--p", prm.p, "diffusion exponent p > 1")->capture_default_str();
    sub->add_option("--n", prm.n, "well exponent n > 1")->capture_default_str();
    sub->add_option("--eps", prm.eps, "interface width eps > 0")->capture_default_str();
  };

  // constants
  auto* c_constants = app.add_subcommand("constants", "print c_p, lambda_p, C_p, alpha, k_m, gamma");
  add_params(c_constants);
  int m_max = 8;
  c_constants->add_option("--m-max", m_max, "print k_1 .. k_m")->check(CLI::Range(1, 64));

  // profile
  auto* c_profile = app.add_subcommand("profile", "emit a standing wave or periodic profile as CSV");
  add_params(c_profile);
  std::string profile_kind = "standing";
  std::optional<double> sbar, spacing;
  double x0 = -1.0, x1 = 1.0;
  std::size_t count = 401;
  std::string profile_out;
  c_profile->add_option("--kind", profile_kind, "profile family")->check(CLI::IsMember({"standing", "periodic"}));
  c_profile->add_option("--sbar", sbar, "periodic amplitude in (0, 1)");
  c_profile->add_option("--spacing", spacing, "periodic zero spacing (solves for sbar)");
  c_profile->add_option("--x0", x0, "left end of the sample range");
  c_profile->add_option("--x1", x1, "right end of the sample range");
  c_profile->add_option("--count", count, "number of samples")->check(CLI::PositiveNumber);
  c_profile->add_option("--out", profile_out, "CSV path (stdout when omitted)");

  // stationary
  auto* c_stationary = app.add_subcommand("stationary", "build a steady state and check its residual");
  add_params(c_stationary);
  std::string st_kind = "subcritical";
  double st_a = -1.0, st_b = 1.0, st_cells = 8.0;
  std::vector<double> st_jumps;
  int st_zeros = 2, st_sign = -1;
  std::string st_out;
  c_stationary->add_option("--kind", st_kind, "steady-state family")->check(CLI::IsMember({"subcritical", "periodic"}));
  c_stationary->add_option("--a", st_a, "left end of the interval");
  c_stationary->add_option("--b", st_b, "right end of the interval");
  c_stationary->add_option("--cells-per-eps", st_cells, "mesh resolution, at least 4");
  c_stationary->add_option("--jumps", st_jumps, "layer positions (subcritical)")->delimiter(',');
  c_stationary->add_option("--zeros", st_zeros, "zero count (periodic)");
  c_stationary->add_option("--first-sign", st_sign, "sign at the left end")->check(CLI::IsMember({-1, 1}));
  c_stationary->add_option("--out", st_out, "field CSV path");

  // simulate
  auto* c_simulate = app.add_subcommand("simulate", "run one configuration");
  std::string config_path, sim_out;
  std::vector<std::string> sets;
  c_simulate->add_option("config", config_path, "key = value run config")->check(CLI::ExistingFile);
  c_simulate->add_option("--set", sets, "override key=value (repeatable)");
  c_simulate->add_option("--out", sim_out, "artifact directory");

  // sweep
  auto* c_sweep = app.add_subcommand("sweep", "independent runs along one parameter axis");
  std::string sweep_axis = "eps", sweep_stop = "first-collapse", sweep_out;
  std::vector<double> sweep_values;
  unsigned sweep_workers = 0;
  c_sweep->add_option("config", config_path, "base run config")->check(CLI::ExistingFile);
  c_sweep->add_option("--set", sets, "override key=value (repeatable)");
  c_sweep->add_option("--axis", sweep_axis, "parameter to vary")->check(CLI::IsMember({"eps", "p", "n"}));
  c_sweep->add_option("--values", sweep_values, "axis values, comma separated")->delimiter(',')->required();
  c_sweep->add_option("--stop", sweep_stop, "stop rule for every run")->check(CLI::IsMember({"first-collapse", "t_end"}));
  c_sweep->add_option("--workers", sweep_workers, "0 = hardware concurrency");
  c_sweep->add_option("--out", sweep_out, "artifact directory");

  // reproduce
  auto* c_repro = app.add_subcommand("reproduce", "run a built-in figure scenario");
  std::string scenario_name, repro_out;
  bool allow_long = false, list = false;
  c_repro->add_option("scenario", scenario_name, "scenario name (see --list)");
  c_repro->add_flag("--allow-long", allow_long, "permit long-running scenarios");
  c_repro->add_flag("--list", list, "list scenarios");
  c_repro->add_option("--out", repro_out, "artifact directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*c_constants) {
      prm.validate();
      const auto c = constants(prm);
      json ks = json::array();
      for (int m = 1; m <= m_max; ++m) ks.push_back(c.k(m));
      print({{"p", prm.p},
             {"n", prm.n},
             {"regime", std::string(to_string(prm.regime()))},
             {"c_p", c.c_p},
             {"lambda_p", c.lambda_p},
             {"C_p", c.C_p},
             {"alpha", c.alpha},
             {"k", ks},
             {"gamma", number_or_null(c.gamma_np)}});
    } else if (*c_profile) {
      if (profile_kind == "standing") {
        const auto wave = standing_wave(prm);
        with_output(profile_out, [&](std::ostream& os) { write_profile_csv(os, wave, x0, x1, count); });
      } else {
        if (sbar.has_value() == spacing.has_value())
          throw Error(Errc::validation_failure, "periodic profile needs exactly one of --sbar, --spacing");
        const double s = sbar ? *sbar : solve_amplitude_for_period(prm, *spacing);
        const auto prof = periodic_profile(prm, s);
        with_output(profile_out, [&](std::ostream& os) { write_profile_csv(os, prof, x0, x1, count); });
        std::cerr << "sbar = " << s << ", zero spacing = " << prof.zero_spacing() << '\n';
      }
    } else if (*c_stationary) {
      prm.validate();
      const Grid grid = Grid::resolving(st_a, st_b, prm.eps, st_cells);
      Field u;
      json info;
      if (st_kind == "subcritical") {
        const StepFunction v(st_a, st_b, st_jumps, st_sign);
        u = build_stationary_subcritical(v, prm, grid);
        info["support_radius"] = support_radius(prm);
      } else {
        auto ps = build_stationary_periodic(st_zeros, prm, grid, st_sign);
        u = ps.field;
        info["sbar"] = ps.sbar;
        info["zeros"] = ps.zeros;
      }
      SolverConfig cfg;
      const Field r = rhs(u, prm, cfg);
      double res = 0.0;
      for (double x : r.u) res = std::max(res, std::abs(x));
      info["nodes"] = grid.m;
      info["h"] = grid.h();
      info["residual_inf"] = res;
      info["energy"] = energy(u, prm);
      if (!st_out.empty()) {
        with_output(st_out, [&](std::ostream& os) {
          os.precision(17);
          os << "x,u\n";
          for (std::size_t i = 0; i < u.size(); ++i) os << grid.x(i) << ',' << u[i] << '\n';
        });
      }
      print(info);
    } else if (*c_simulate) {
      RunConfig cfg = load_run_config(config_path, sets);
      if (!sim_out.empty()) cfg.output_dir = sim_out;
      print(outcome_summary(run_scenario(cfg)));
    } else if (*c_sweep) {
      SweepConfig sc;
      sc.base = load_run_config(config_path, sets);
      sc.axis = sweep_axis == "eps" ? SweepAxis::eps : sweep_axis == "p" ? SweepAxis::p : SweepAxis::n;
      sc.values = sweep_values;
      sc.stop = sweep_stop == "t_end" ? StopCondition::t_end : StopCondition::first_collapse;
      sc.workers = sweep_workers;
      sc.output_dir = sweep_out;
      const auto result = run_sweep(sc);
      std::cout << to_json(result) << '\n';
      if (!result.all_succeeded()) return kExitNumerical;
    } else if (*c_repro) {
      if (list || scenario_name.empty()) {
        json arr = json::array();
        for (const auto& s : scenario_registry())
          arr.push_back({{"name", s.name},
                         {"description", s.description},
                         {"reference_time", s.reference_time ? json(*s.reference_time) : json(nullptr)},
                         {"long_running", s.long_running}});
        print(arr);
        return 0;
      }
      const auto res = reproduce(find_scenario(scenario_name), allow_long, repro_out);
      json j = outcome_summary(res.outcome);
      j["reference_time"] = res.reference_time ? json(*res.reference_time) : json(nullptr);
      j["ratio"] = res.ratio ? json(*res.ratio) : json(nullptr);
      j["within_factor_10"] = res.within_factor_10;
      print(j);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_validation(e.code()) ? kExitValidation : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
