#include "slowmo/potential.hpp"

#include <cmath>
#include <string>

#include "quadrature.hpp"
#include "slowmo/error.hpp"

namespace slowmo {

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::subcritical: return "subcritical";
    case Regime::critical: return "critical";
    case Regime::supercritical: return "supercritical";
  }
  return "unknown";
}

void PotentialParams::validate() const {
  if (!(p > 1.0) || !std::isfinite(p))
    throw Error(Errc::invalid_argument, "p must be > 1 (got " + std::to_string(p) + ")");
  if (!(n > 1.0) || !std::isfinite(n))
    throw Error(Errc::invalid_argument, "n must be > 1 (got " + std::to_string(n) + ")");
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw Error(Errc::invalid_argument, "eps must be > 0 (got " + std::to_string(eps) + ")");
}

Regime PotentialParams::regime() const noexcept {
  if (std::abs(n - p) <= 1e-12 * std::max(n, p)) return Regime::critical;
  return n < p ? Regime::subcritical : Regime::supercritical;
}

namespace {

// 1 - u^2 without cancellation near the wells.
inline double one_minus_sq(double u) noexcept { return (1.0 - u) * (1.0 + u); }

// (p/(p-1) F(s))^{(p-1)/p} written in terms of w = |1 - s^2|.
inline double young_density(const PotentialParams& prm, double w) noexcept {
  const double q = (prm.p - 1.0) / prm.p;
  const double f = std::pow(w, prm.n) / (2.0 * prm.n);
  return std::pow(f / q, q);
}

}  // namespace

double eval_F(const PotentialParams& params, double u) noexcept {
  return std::pow(std::abs(one_minus_sq(u)), params.n) / (2.0 * params.n);
}

double eval_dF(const PotentialParams& params, double u) noexcept {
  const double w = one_minus_sq(u);
  if (w == 0.0) return 0.0;
  return -u * w * std::pow(std::abs(w), params.n - 2.0);
}

double eval_d2F(const PotentialParams& params, double u) noexcept {
  const double w = one_minus_sq(u);
  const double bracket = w - 2.0 * (params.n - 1.0) * u * u;
  if (w == 0.0) {
    if (params.n > 2.0) return 0.0;
    if (params.n == 2.0) return -bracket;
    return std::numeric_limits<double>::infinity();
  }
  return -std::pow(std::abs(w), params.n - 2.0) * bracket;
}

double transition_energy(const PotentialParams& params, const QuadratureOptions& opts) {
  params.validate();
  // Symmetric in s, so integrate one half in sigma = 1 - s.  The density behaves like
  // sigma^{n(p-1)/p} at the well, which the double-exponential rule handles.
  auto density = [&](double sigma) { return young_density(params, sigma * (2.0 - sigma)); };
  auto r = detail::tanh_sinh(density, 0.0, 1.0);
  r.value *= 2.0;
  r.error *= 2.0;
  if (!std::isfinite(r.value) || r.error > opts.abs_tolerance)
    throw Error(Errc::quadrature_nonconvergence,
                "c_p error estimate " + std::to_string(r.error) + " above tolerance");
  return r.value;
}

double transition_energy_between(const PotentialParams& params, double lo, double hi) {
  if (!(lo >= -1.0 && hi <= 1.0 && lo <= hi))
    throw Error(Errc::invalid_argument, "transition_energy_between needs -1 <= lo <= hi <= 1");
  if (lo == hi) return 0.0;
  auto density = [&](double s) { return young_density(params, std::abs(one_minus_sq(s))); };
  const auto r = detail::tanh_sinh(density, lo, hi);
  if (!std::isfinite(r.value))
    throw Error(Errc::quadrature_nonconvergence, "truncated transition integral");
  return r.value;
}

double transition_energy_tail(const PotentialParams& params, double y) {
  if (!(y >= 0.0 && y <= 2.0))
    throw Error(Errc::invalid_argument, "transition_energy_tail needs 0 <= y <= 2");
  if (y == 0.0) return 0.0;
  auto density = [&](double sigma) { return young_density(params, sigma * (2.0 - sigma)); };
  const auto r = detail::tanh_sinh(density, 0.0, y);
  if (!std::isfinite(r.value))
    throw Error(Errc::quadrature_nonconvergence, "transition tail integral");
  return r.value;
}

double CriticalConstants::k(int m) const {
  if (m < 1 || m > kMaxSequenceIndex)
    throw Error(Errc::invalid_argument,
                "sequence index must lie in [1, 64] (got " + std::to_string(m) + ")");
  double km = 0.0;
  for (int i = 1; i < m; ++i) km = alpha * (km + 1.0);
  return km;
}

CriticalConstants constants(const PotentialParams& params) {
  params.validate();
  const double p = params.p;
  const double n = params.n;
  CriticalConstants c;
  c.c_p = transition_energy(params);
  c.lambda_p = std::pow(2.0, 1.0 - 1.0 / p) * std::pow(p - 1.0, -1.0 / p);
  c.C_p = std::pow(1.0 / (2.0 * (p - 1.0)), 1.0 / p);
  c.alpha = (p - 1.0) / p + 1.0 / n;
  c.gamma_np = params.regime() == Regime::supercritical ? n * p / (n - p) - 1.0 : kUnbounded;
  return c;
}

}  // namespace slowmo
