#include "slowmo/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "quadrature.hpp"
#include "slowmo/error.hpp"

namespace slowmo {

namespace detail {

/// Inverse of x(t) = int_0^t g, tabulated on a uniform t grid.
struct InverseTable {
  std::function<double(double)> g;
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> slope;

  InverseTable(std::function<double(double)> rate, double t_max, std::size_t nodes)
      : g(std::move(rate)), t(nodes), x(nodes), slope(nodes) {
    const double dt = t_max / static_cast<double>(nodes - 1);
    for (std::size_t k = 0; k < nodes; ++k) {
      t[k] = dt * static_cast<double>(k);
      slope[k] = g(t[k]);
    }
    x[0] = 0.0;
    for (std::size_t k = 0; k + 1 < nodes; ++k) x[k + 1] = x[k] + gauss_legendre(g, t[k], t[k + 1]);
  }

  double x_end() const noexcept { return x.back(); }

  /// t with x(t) = xq, for 0 <= xq < x_end().
  double invert(double xq) const {
    const auto it = std::upper_bound(x.begin(), x.end(), xq);
    std::size_t k = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
    k = std::min(k, x.size() - 2);
    const double x0 = x[k], x1 = x[k + 1];
    const double t0 = t[k], t1 = t[k + 1];
    const double hx = x1 - x0;
    if (hx <= 0.0) return t0;

    // Cubic Hermite guess for t(x) with exact slopes dt/dx = 1/g.
    const double s = (xq - x0) / hx;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    double guess = h00 * t0 + h10 * hx / slope[k] + h01 * t1 + h11 * hx / slope[k + 1];
    if (!std::isfinite(guess) || guess <= t0 || guess >= t1) guess = t0 + s * (t1 - t0);

    // Safeguarded Newton on r(t) = x0 + int_{t0}^{t} g - xq.
    double lo = t0, hi = t1, tc = guess;
    for (int iter = 0; iter < 60; ++iter) {
      const double r = x0 + gauss_legendre(g, t0, tc) - xq;
      if (r == 0.0) return tc;
      if (r < 0.0) lo = tc; else hi = tc;
      const double gt = g(tc);
      double next = tc - r / gt;
      if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
      const double step = std::abs(next - tc);
      tc = next;
      if (step <= 4e-16 * std::max(1.0, tc) || hi - lo <= 4e-16 * std::max(1.0, hi)) return tc;
    }
    throw Error(Errc::inversion_tolerance, "profile inversion did not converge");
  }
};

}  // namespace detail

namespace {

constexpr std::size_t kTableNodes = 4096;
// exp(-40) ~ 4e-18: beyond this the profile equals its limit in double precision.
constexpr double kTableDepth = 40.0;

double prefactor_K(const PotentialParams& prm) {
  return std::pow(2.0 * prm.n * (prm.p - 1.0) / prm.p, 1.0 / prm.p);
}

double A_p(const PotentialParams& prm) { return std::pow(prm.p / (prm.p - 1.0), 1.0 / prm.p); }

// int_0^1 (y (2 - y))^{-a} dy for a < 1; the singularity sits at y = 0.
double singular_well_integral(double a) {
  const auto r = detail::tanh_sinh([a](double y) { return std::pow(y * (2.0 - y), -a); }, 0.0, 1.0);
  if (!std::isfinite(r.value) || r.error > 1e-10 * std::abs(r.value))
    throw Error(Errc::quadrature_nonconvergence, "well integral did not converge");
  return r.value;
}

// (F(sbar (1 - z)) - F(sbar))^{-1/p}.  The gap is sbar^2 z (2 - z) G with G bounded
// away from zero; the factored form avoids cancellation and keeps tiny z or tiny sbar
// from underflowing to a zero gap.
double inverse_gap_root(const PotentialParams& prm, double sbar, double z) {
  const double inv_p = 1.0 / prm.p;
  const double A = (1.0 - sbar) * (1.0 + sbar);
  const double zz = z * (2.0 - z);
  const double x = sbar * sbar * zz / A;
  const double phi = x > 0.0 ? std::expm1(prm.n * std::log1p(x)) / x : prm.n;
  const double G = std::pow(A, prm.n - 1.0) * phi / (2.0 * prm.n);
  return std::pow(sbar, -2.0 * inv_p) * std::pow(zz, -inv_p) * std::pow(G, -inv_p);
}

void check_sbar(double sbar) {
  if (!(sbar > 0.0 && sbar < 1.0))
    throw Error(Errc::invalid_argument, "sbar must lie in (0, 1) (got " + std::to_string(sbar) + ")");
}

}  // namespace

StandingWaveProfile standing_wave(const PotentialParams& params, std::optional<ProfileKind> kind) {
  params.validate();
  StandingWaveProfile prof;
  prof.params_ = params;
  const Regime regime = params.regime();
  prof.kind_ = kind.value_or(regime == Regime::critical ? ProfileKind::explicit_tanh
                                                        : ProfileKind::inverted_integral);
  if (prof.kind_ == ProfileKind::explicit_tanh) {
    if (regime != Regime::critical)
      throw Error(Errc::wrong_regime, "the tanh profile exists only for n = p");
    prof.tanh_rate_ = constants(params).C_p / params.eps;
    return prof;
  }
  if (regime == Regime::subcritical) prof.support_ = support_radius(params);

  const double a = params.n / params.p;
  const double scale = params.eps * prefactor_K(params);
  // dx/dt with u = 1 - exp(-t):  scale * y^{1-a} (2-y)^{-a}.
  auto rate = [a, scale](double t) {
    const double y = std::exp(-t);
    return scale * std::exp((a - 1.0) * t) * std::pow(2.0 - y, -a);
  };
  prof.table_ = std::make_shared<const detail::InverseTable>(rate, kTableDepth, kTableNodes);
  return prof;
}

double StandingWaveProfile::complement(double x) const {
  const double ax = std::abs(x);
  if (kind_ == ProfileKind::explicit_tanh) return 2.0 / (std::exp(2.0 * tanh_rate_ * ax) + 1.0);
  if (support_ && ax >= *support_) return 0.0;
  if (ax >= table_->x_end()) return 0.0;
  return std::exp(-table_->invert(ax));
}

double StandingWaveProfile::operator()(double x) const {
  if (kind_ == ProfileKind::explicit_tanh) return std::tanh(tanh_rate_ * x);
  const double ax = std::abs(x);
  double v;
  if ((support_ && ax >= *support_) || ax >= table_->x_end())
    v = 1.0;
  else
    v = -std::expm1(-table_->invert(ax));
  return x < 0.0 ? -v : v;
}

double StandingWaveProfile::derivative(double x) const {
  const double y = complement(x);
  const double f = std::pow(y * (2.0 - y), params_.n) / (2.0 * params_.n);
  return std::pow(params_.p / (params_.p - 1.0) * f, 1.0 / params_.p) / params_.eps;
}

double support_radius(const PotentialParams& params) {
  params.validate();
  if (params.regime() != Regime::subcritical)
    throw Error(Errc::wrong_regime, "support radius is finite only for n < p; the well integral diverges");
  return params.eps * prefactor_K(params) * singular_well_integral(params.n / params.p);
}

double period(const PotentialParams& params, double sbar) {
  params.validate();
  check_sbar(sbar);
  auto integrand = [&](double z) { return sbar * inverse_gap_root(params, sbar, z); };
  const auto r = detail::tanh_sinh(integrand, 0.0, 1.0);
  if (!std::isfinite(r.value) || r.error > 1e-10 * std::abs(r.value))
    throw Error(Errc::quadrature_nonconvergence,
                "period integral did not converge at sbar = " + std::to_string(sbar));
  return 2.0 * params.eps / A_p(params) * r.value;
}

double period_supremum(const PotentialParams& params) {
  params.validate();
  if (params.regime() != Regime::subcritical) return kUnbounded;
  const double a = params.n / params.p;
  return 2.0 * params.eps / A_p(params) * std::pow(2.0 * params.n, 1.0 / params.p) *
         singular_well_integral(a);
}

double solve_amplitude_for_period(const PotentialParams& params, double target) {
  params.validate();
  if (!(target > 0.0) || !std::isfinite(target))
    throw Error(Errc::invalid_argument, "target period must be positive");
  double lo = 1e-8, hi = 1.0 - 1e-8;
  if (params.p >= 2.0) {
    const double sup = period_supremum(params);
    if (target >= sup)
      throw Error(Errc::target_out_of_range, "target " + std::to_string(target) +
                                                 " is not below the period supremum " +
                                                 std::to_string(sup));
  } else {
    // For p < 2 the spacing blows up as sbar -> 0 as well, so it is not monotone.
    // Restrict to the branch right of the minimizer (golden section).
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double l = lo, r = hi;
    double x1 = r - g * (r - l), x2 = l + g * (r - l);
    double f1 = period(params, x1), f2 = period(params, x2);
    for (int iter = 0; iter < 100 && r - l > 1e-12; ++iter) {
      if (f1 < f2) {
        r = x2;
        x2 = x1;
        f2 = f1;
        x1 = r - g * (r - l);
        f1 = period(params, x1);
      } else {
        l = x1;
        x1 = x2;
        f1 = f2;
        x2 = l + g * (r - l);
        f2 = period(params, x2);
      }
    }
    lo = 0.5 * (l + r);
  }
  const double t_lo = period(params, lo);
  const double t_hi = period(params, hi);
  // Orientation of the monotone branch [lo, hi].
  const bool increasing = t_hi >= t_lo;
  if (target < std::min(t_lo, t_hi) || target > std::max(t_lo, t_hi))
    throw Error(Errc::target_out_of_range, "target " + std::to_string(target) +
                                               " outside attainable range [" +
                                               std::to_string(std::min(t_lo, t_hi)) + ", " +
                                               std::to_string(std::max(t_lo, t_hi)) + "]");
  double mid = 0.5 * (lo + hi);
  double t_mid = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    t_mid = period(params, mid);
    if (std::abs(t_mid - target) <= 1e-13 * target || hi - lo <= 1e-15) break;
    if ((t_mid < target) == increasing) lo = mid; else hi = mid;
  }
  if (std::abs(t_mid - target) > 1e-8 * target)
    throw Error(Errc::bisection_stall, "bisection stalled at sbar = " + std::to_string(mid));
  return mid;
}

PeriodicProfile periodic_profile(const PotentialParams& params, double sbar) {
  params.validate();
  check_sbar(sbar);
  PeriodicProfile prof;
  prof.params_ = params;
  prof.sbar_ = sbar;
  prof.spacing_ = period(params, sbar);
  const double scale = params.eps / A_p(params) * sbar;
  // u = sbar (1 - z), z = exp(-t):  dx/dt = scale * z * gap(z)^{-1/p}.
  auto rate = [params, sbar, scale](double t) {
    const double z = std::exp(-t);
    return scale * z * inverse_gap_root(params, sbar, z);
  };
  prof.table_ = std::make_shared<const detail::InverseTable>(rate, kTableDepth, kTableNodes);
  return prof;
}

double PeriodicProfile::quarter(double xi) const {
  if (xi <= 0.0) return 0.0;
  if (xi >= table_->x_end()) return sbar_;
  return -sbar_ * std::expm1(-table_->invert(xi));
}

double PeriodicProfile::operator()(double x) const {
  const double full = fundamental_period();
  const double q = 0.5 * spacing_;
  double xi = std::fmod(x, full);
  if (xi < 0.0) xi += full;
  if (xi <= q) return quarter(xi);
  if (xi <= 2.0 * q) return quarter(2.0 * q - xi);
  if (xi <= 3.0 * q) return -quarter(xi - 2.0 * q);
  return -quarter(full - xi);
}

}  // namespace slowmo
