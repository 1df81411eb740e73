#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "slowmo/grid.hpp"
#include "slowmo/layers.hpp"
#include "slowmo/potential.hpp"

namespace slowmo {

enum class Scheme {
  /// Forward Euler on the full right-hand side.
  explicit_euler,
  /// Diffusivity frozen at the current state, tridiagonal solve, explicit reaction.
  semi_implicit_lagged,
  /// One Newton step of backward Euler (Rosenbrock-Euler) with the exact tridiagonal Jacobian.
  linearly_implicit,
};

std::string_view to_string(Scheme s) noexcept;
/// Accepts "explicit", "semi-implicit-lagged", "linearly-implicit".
Scheme scheme_from_string(std::string_view s);

struct SolverConfig {
  Scheme scheme = Scheme::semi_implicit_lagged;
  double dt_init = 1e-3;
  double dt_min = 1e-12;
  double dt_max = 1e3;
  double energy_tolerance = 1e-12;
  /// Flux regularization; unset means 1e-10 for p < 2 and 0 otherwise.
  std::optional<double> reg_delta;
  /// Fraction of the stability estimate used by run().
  double cfl_safety = 0.9;
  double growth_factor = 1.5;
  int growth_after = 10;

  /// Errc::invalid_argument on inconsistent values.
  void validate() const;
  double delta_for(const PotentialParams& params) const noexcept;
};

struct StepResult {
  bool accepted = false;
  double dt_used = 0.0;
  int rejections = 0;
  double energy_before = 0.0;
  double energy_after = 0.0;
  /// sum_i w_i ((u_new - u_old)_i / dt)^2.
  double ut_norm_sq = 0.0;
};

/// (g^2 + delta^2)^{(p-2)/2} g.
double flux(double g, double p, double delta) noexcept;
double flux(double g, const PotentialParams& params, const SolverConfig& config) noexcept;
/// d flux / dg = (g^2 + delta^2)^{(p-4)/2} ((p-1) g^2 + delta^2).
double flux_derivative(double g, double p, double delta) noexcept;

/// du_i/dt = eps^p (Phi_{i+1/2} - Phi_{i-1/2}) / w_i - F'(u_i), zero boundary flux.
/// w_i are trapezoid weights, so the system is the exact weighted gradient flow of
/// discrete_energy().
Field rhs(const Field& u, const PotentialParams& params, const SolverConfig& config);

/// E_h = sum_cells h eps^{p-1} ((g^2+delta^2)^{p/2} - delta^p)/p + sum_i w_i F(u_i)/eps.
double discrete_energy(const Field& u, const PotentialParams& params, double delta = 0.0);

/// Largest dt the run loop allows at state u: the explicit stability estimate for
/// explicit_euler, the reaction monotonicity bound for semi_implicit_lagged,
/// unbounded for linearly_implicit.  Always scaled by cfl_safety.
double stable_dt(const Field& u, const PotentialParams& params, const SolverConfig& config);

/// A single attempt at dt with no retry.  The result is rejected when the energy
/// grows beyond energy_tolerance or the update is not finite.
std::pair<Field, StepResult> attempt_step(const Field& u, double dt, const PotentialParams& params,
                                          const SolverConfig& config,
                                          std::optional<double> energy_before = std::nullopt);

/// attempt_step, halving dt on rejection.  Errc::dt_underflow below dt_min.
std::pair<Field, StepResult> step(const Field& u, double dt, const PotentialParams& params,
                                  const SolverConfig& config,
                                  std::optional<double> energy_before = std::nullopt);

struct Snapshot {
  double t = 0.0;
  /// Step size that produced this state (0 for the initial one).
  double dt = 0.0;
  double energy = 0.0;
  /// int_0^t ||u_t||^2 accumulated over accepted steps.
  double dissipation = 0.0;
  double ut_norm_sq = 0.0;
  /// Interface positions; empty unless RunOptions::band is set.
  std::vector<double> interfaces;
};

struct StepLog {
  double t = 0.0;
  double dt = 0.0;
  double energy_before = 0.0;
  double energy_after = 0.0;
  double ut_norm_sq = 0.0;
};

/// Log-spaced observer times: 0, then t_first * 10^{k/per_decade} below t_end, then t_end.
struct ObserverSchedule {
  double t_first = 1e-2;
  int per_decade = 64;

  std::vector<double> times(double t_end) const;
};

struct RunOptions {
  ObserverSchedule schedule;
  std::optional<Band> band;
  bool keep_fields = false;
  bool record_steps = false;
  /// Called after each snapshot; returning false stops the run.
  std::function<bool(const Snapshot&, const Field&)> observer;
};

struct RunRecord {
  std::vector<Snapshot> snapshots;
  /// Parallel to snapshots when keep_fields is set.
  std::vector<Field> fields;
  std::vector<StepLog> steps;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  bool stopped_early = false;
  std::optional<Band> band;
  Field final_field;
};

/// Adaptive integration to t_end.  dt grows by growth_factor after growth_after
/// consecutive clean acceptances, is capped by dt_max and stable_dt, and is clipped
/// so that every observer time is hit exactly.
RunRecord run(const Field& u0, double t_end, const PotentialParams& params,
              const SolverConfig& config, const RunOptions& options = {});

}  // namespace slowmo
