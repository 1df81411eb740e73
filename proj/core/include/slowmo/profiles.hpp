#pragma once

#include <iosfwd>
#include <memory>
#include <optional>

#include "slowmo/potential.hpp"

namespace slowmo {

namespace detail {
struct InverseTable;
}

enum class ProfileKind { explicit_tanh, inverted_integral };

/// Monotone heteroclinic  eps Phi' = (p/(p-1) F(Phi))^{1/p},  Phi(0) = 0.
///
/// For n = p the closed form tanh(C_p x / eps) is available; every other
/// case (and n = p on request) inverts
///   x(u) = eps (2n(p-1)/p)^{1/p} int_0^u (1 - s^2)^{-n/p} ds
/// from a table in t = -log(1 - u), polished by Newton steps on the integral.
/// Immutable once built; copies share the table.
class StandingWaveProfile {
 public:
  const PotentialParams& params() const noexcept { return params_; }
  ProfileKind kind() const noexcept { return kind_; }
  /// x-bar = eps * y-bar; present only for n < p.
  std::optional<double> support_radius() const noexcept { return support_; }

  double operator()(double x) const;
  /// 1 - Phi(|x|), accurate when tiny.
  double complement(double x) const;
  /// Phi'(x) from the first integral.
  double derivative(double x) const;

 private:
  friend StandingWaveProfile standing_wave(const PotentialParams&, std::optional<ProfileKind>);
  PotentialParams params_;
  ProfileKind kind_ = ProfileKind::explicit_tanh;
  std::optional<double> support_;
  double tanh_rate_ = 0.0;
  std::shared_ptr<const detail::InverseTable> table_;
};

/// Builds Phi_eps.  Without a kind, n = p uses the closed form.
StandingWaveProfile standing_wave(const PotentialParams& params,
                                  std::optional<ProfileKind> kind = std::nullopt);

/// eps * (2n(p-1)/p)^{1/p} int_0^1 (1-s^2)^{-n/p} ds.  Errc::wrong_regime for n >= p.
double support_radius(const PotentialParams& params);

/// Periodic solution oscillating in [-sbar, sbar] with zeros spaced by `zero_spacing`.
///
/// u(0) = 0, u'(0) > 0, u(zero_spacing / 2) = sbar, u(x + zero_spacing) = -u(x);
/// the fundamental period is 2 * zero_spacing.
class PeriodicProfile {
 public:
  const PotentialParams& params() const noexcept { return params_; }
  double sbar() const noexcept { return sbar_; }
  /// T_eps(sbar): distance between consecutive zeros.
  double zero_spacing() const noexcept { return spacing_; }
  double fundamental_period() const noexcept { return 2.0 * spacing_; }

  double operator()(double x) const;

 private:
  friend PeriodicProfile periodic_profile(const PotentialParams&, double);
  double quarter(double xi) const;

  PotentialParams params_;
  double sbar_ = 0.0;
  double spacing_ = 0.0;
  std::shared_ptr<const detail::InverseTable> table_;
};

/// T_eps(sbar) = 2 eps ((p-1)/p)^{1/p} int_0^sbar (F(s) - F(sbar))^{-1/p} ds,  0 < sbar < 1.
double period(const PotentialParams& params, double sbar);

/// lim_{sbar -> 1-} T_eps(sbar): finite for n < p, kUnbounded otherwise.
double period_supremum(const PotentialParams& params);

/// Bisection for sbar with T_eps(sbar) = target on [1e-8, 1 - 1e-8].  For p < 2 the
/// spacing is not monotone; the branch to the right of its minimizer is used.
double solve_amplitude_for_period(const PotentialParams& params, double target);

PeriodicProfile periodic_profile(const PotentialParams& params, double sbar);

/// Writes "x,u" rows at `count` equispaced points of [x0, x1].
template <class Profile>
void write_profile_csv(std::ostream& os, const Profile& profile, double x0, double x1,
                       std::size_t count);

}  // namespace slowmo

#include <ostream>

template <class Profile>
void slowmo::write_profile_csv(std::ostream& os, const Profile& profile, double x0, double x1,
                               std::size_t count) {
  os << "x,u\n";
  os.precision(17);
  for (std::size_t i = 0; i < count; ++i) {
    const double x =
        count == 1 ? x0 : x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(count - 1);
    os << x << ',' << profile(x) << '\n';
  }
}
