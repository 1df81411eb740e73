#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slowmo/grid.hpp"
#include "slowmo/layers.hpp"
#include "slowmo/potential.hpp"
#include "slowmo/solver.hpp"

namespace slowmo {

/// Unregularized discrete energy; identical to discrete_energy(u, params, 0).
double energy(const Field& u, const PotentialParams& params);

struct EnergyReport {
  double E = 0.0;
  double N_cp = 0.0;
  /// N_cp - E, computed exactly as that difference.
  double gap = 0.0;
  /// exp(-A p / (2 eps)); the unknown prefactor is taken as 1.
  double bound_exp = 0.0;
  /// eps^{k_{m+1}}; the unknown prefactor is taken as 1.
  double bound_alg = 0.0;
  int N = 0;
  double A = 0.0;
  int m = 1;
  /// Always true: the envelopes are shapes for trend comparison, not certified bounds.
  bool envelopes_unit_constant = true;
};

/// Errc::inadmissible_a unless 0 < A < r sqrt(2) lambda_p, r = max_separation_radius(v).
/// `m` selects the algebraic exponent k_{m+1}.
EnergyReport lower_bound_check(const Field& u, const StepFunction& v, const PotentialParams& params,
                               double A, int m = 1);
/// Same report with E supplied by the caller (e.g. a continuum energy).
EnergyReport lower_bound_report(double E, const StepFunction& v, const PotentialParams& params,
                                double A, int m = 1);

/// int_0^T ||u_t||^2 over the whole record.
double dissipation_budget(const RunRecord& record);
/// The same integral between two snapshot times (each rounded down to a snapshot).
double dissipation_between(const RunRecord& record, double t0, double t1);

enum class CollapseKind {
  /// The interface count dropped between two observers.
  count_drop,
  /// The interface set first left the delta-neighbourhood of the jump set.
  departure,
};

struct CollapseEvent {
  CollapseKind kind = CollapseKind::count_drop;
  /// Geometric mean of the bracketing observer times.
  double t_collapse = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  int N_before = 0;
  int N_after = 0;
  std::vector<double> surviving_positions;
};

/// Count drops in chronological order, plus at most one departure event
/// (Hausdorff distance from the jump set of v above delta).
/// delta defaults to r/2; Errc::invalid_argument unless 0 < delta < r.
/// Errc::invalid_argument if the record carries no interface snapshots.
std::vector<CollapseEvent> detect_collapse(const RunRecord& record, const StepFunction& v,
                                           std::optional<double> delta = std::nullopt);

/// First count-drop event, if any.
std::optional<CollapseEvent> first_collapse(const std::vector<CollapseEvent>& events);

struct FitResult {
  Regime regime = Regime::critical;
  /// log t against 1/eps (critical) or log(1/eps) (supercritical).
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> eps;
  std::vector<double> t;
  std::vector<double> residuals;
  /// Theory reference shown next to the slope (gamma_{n,p} when supplied).
  std::optional<double> reference;
};

/// Least squares on (eps, t) samples.  Errc::insufficient_samples with fewer than 3
/// samples or repeated eps; Errc::wrong_regime for the subcritical regime.
FitResult scaling_fit(const std::vector<std::pair<double, double>>& samples, Regime regime,
                      std::optional<double> reference = std::nullopt);

std::string to_json(const EnergyReport& report);
std::string to_json(const CollapseEvent& event);
std::string to_json(const std::vector<CollapseEvent>& events);
std::string to_json(const FitResult& fit);
/// Columns eps,t,residual.
void write_fit_csv(std::ostream& os, const FitResult& fit);

}  // namespace slowmo
