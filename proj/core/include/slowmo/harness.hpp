#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slowmo/diagnostics.hpp"
#include "slowmo/layers.hpp"
#include "slowmo/potential.hpp"
#include "slowmo/solver.hpp"

namespace slowmo {

enum class InitKind { layers, stationary_subcritical, stationary_periodic };
enum class StopCondition { t_end, first_collapse };

std::string_view to_string(InitKind k) noexcept;
std::string_view to_string(StopCondition s) noexcept;

/// Everything needed to reproduce one run.  Plain value type.
struct RunConfig {
  static constexpr int kSchema = 1;

  int schema = kSchema;
  std::string name = "run";
  PotentialParams params{};
  double a = -1.0;
  double b = 1.0;
  /// Mesh from h <= eps / cells_per_eps unless `nodes` is set.
  double cells_per_eps = 8.0;
  std::optional<std::size_t> nodes;

  InitKind init = InitKind::layers;
  std::vector<double> jumps;
  int first_sign = -1;
  /// Zero count for stationary_periodic.
  int periodic_zeros = 1;

  SolverConfig solver{};
  double t_end = 1.0;
  ObserverSchedule schedule{};
  Band band{};
  StopCondition stop = StopCondition::t_end;
  /// Energy-report exponent; defaults to half the admissible maximum.
  std::optional<double> A;
  /// Collapse threshold; defaults to r/2.
  std::optional<double> delta;
  /// Where artifacts go; nothing is written when empty.
  std::filesystem::path output_dir;

  Grid grid() const;
  /// Jump set of the initial layout (the periodic zeros for stationary_periodic).
  StepFunction step_function() const;

  /// Errc::validation_failure listing every offending field as "field: reason".
  void validate() const;
};

/// Parses the key = value grammar (one pair per line, '#' starts a comment).
/// Lists are comma separated.  `schema` must equal RunConfig::kSchema.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);
/// Applies one key = value pair; used for files and command-line overrides.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);
/// Canonical key = value text that parse_config reads back to an equal config.
std::string dump_config(const RunConfig& cfg);

struct RunOutcome {
  RunConfig config;
  Field initial;
  RunRecord record;
  /// Report for the initial datum.
  EnergyReport initial_report;
  std::vector<CollapseEvent> events;
  std::optional<double> first_collapse_time;
};

/// Builds the initial datum for a validated config.
Field build_initial(const RunConfig& cfg);

/// construction -> simulation -> diagnostics; writes snapshots.csv (t,x,u),
/// run.jsonl, energy_report.json and events.json when output_dir is set.
RunOutcome run_scenario(const RunConfig& cfg);

enum class SweepAxis { eps, p, n };
std::string_view to_string(SweepAxis a) noexcept;

struct SweepConfig {
  RunConfig base;
  SweepAxis axis = SweepAxis::eps;
  std::vector<double> values;
  StopCondition stop = StopCondition::first_collapse;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
  std::filesystem::path output_dir;

  void validate() const;
};

struct SweepRow {
  double value = 0.0;
  std::optional<double> collapse_time;
  double t_reached = 0.0;
  std::optional<std::string> error;
};

struct SweepResult {
  /// Ordered as SweepConfig::values, whatever the execution order.
  std::vector<SweepRow> rows;
  std::optional<FitResult> fit;
  std::optional<std::string> fit_error;

  bool all_succeeded() const noexcept;
};

/// Independent runs on a worker pool.  Failed values are reported in their rows
/// without stopping the sweep.  The eps axis gets a scaling fit.
SweepResult run_sweep(const SweepConfig& cfg);
std::string to_json(const SweepResult& result);
/// Columns value,collapse_time,t_reached,error.
void write_sweep_csv(std::ostream& os, const SweepResult& result);

struct Scenario {
  std::string name;
  std::string description;
  RunConfig config;
  /// Collapse time quoted for the figure this reproduces, when one is quoted.
  std::optional<double> reference_time;
  /// Needs --allow-long.
  bool long_running = false;
};

const std::vector<Scenario>& scenario_registry();
/// Errc::invalid_argument for an unknown name.
const Scenario& find_scenario(std::string_view name);

struct ReproduceResult {
  RunOutcome outcome;
  std::optional<double> collapse_time;
  std::optional<double> reference_time;
  /// collapse_time / reference_time when both exist.
  std::optional<double> ratio;
  /// 0.1 <= ratio <= 10.
  bool within_factor_10 = false;
};

/// Errc::validation_failure for long scenarios unless allow_long.
ReproduceResult reproduce(const Scenario& scenario, bool allow_long,
                          const std::filesystem::path& output_dir = {});

}  // namespace slowmo
