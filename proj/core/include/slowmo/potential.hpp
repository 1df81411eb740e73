#pragma once

#include <limits>
#include <string_view>

namespace slowmo {

/// Relation between the well exponent n and the diffusion exponent p.
enum class Regime { subcritical, critical, supercritical };

std::string_view to_string(Regime r) noexcept;

/// Parameters of  u_t = eps^p (|u_x|^{p-2} u_x)_x - F'(u),  F(u) = |1-u^2|^n / (2n).
struct PotentialParams {
  double p = 2.0;
  double n = 2.0;
  double eps = 0.1;

  /// Throws Error(invalid_argument) unless p > 1, n > 1, eps > 0.
  void validate() const;

  /// n == p is decided with a relative tolerance of 1e-12.
  Regime regime() const noexcept;
};

double eval_F(const PotentialParams& params, double u) noexcept;
/// F'(u) = -u (1-u^2) |1-u^2|^{n-2}.
double eval_dF(const PotentialParams& params, double u) noexcept;
/// F''(u); +infinity at u = +-1 when n < 2.
double eval_d2F(const PotentialParams& params, double u) noexcept;

struct QuadratureOptions {
  double abs_tolerance = 1e-10;
};

/// Minimal energy of a single -1 -> +1 transition:
///   c_p = (p/(p-1))^{(p-1)/p} * int_{-1}^{1} F(s)^{(p-1)/p} ds.
double transition_energy(const PotentialParams& params, const QuadratureOptions& opts = {});

/// Truncated transition integral  (p/(p-1))^{(p-1)/p} int_{lo}^{hi} F(s)^{(p-1)/p} ds
/// for -1 <= lo <= hi <= 1.  Used for exact energies of glued profiles.
double transition_energy_between(const PotentialParams& params, double lo, double hi);

/// Same integral over [1 - y, 1]; accurate when y is tiny.
double transition_energy_tail(const PotentialParams& params, double y);

constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct CriticalConstants {
  double c_p = 0.0;
  double lambda_p = 0.0;
  double C_p = 0.0;
  double alpha = 0.0;
  /// np/(n-p) - 1 for n > p, otherwise kUnbounded.
  double gamma_np = kUnbounded;

  static constexpr int kMaxSequenceIndex = 64;

  /// k_1 = 0, k_2 = alpha, k_{m+1} = alpha (k_m + 1);  1 <= m <= 64.
  double k(int m) const;
};

CriticalConstants constants(const PotentialParams& params);

}  // namespace slowmo
