#pragma once

#include <vector>

#include "slowmo/grid.hpp"
#include "slowmo/potential.hpp"
#include "slowmo/profiles.hpp"

namespace slowmo {

/// Piecewise constant v : [a, b] -> {-1, +1} with jumps at h_1 < ... < h_N.
class StepFunction {
 public:
  /// Throws Error(invalid_argument) unless a < h_1 < ... < h_N < b and first_sign = +-1.
  StepFunction(double a, double b, std::vector<double> jumps, int first_sign = -1);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  const std::vector<double>& jumps() const noexcept { return jumps_; }
  std::size_t count() const noexcept { return jumps_.size(); }
  int first_sign() const noexcept { return first_sign_; }

  /// Value on the open cell containing x; 0 exactly at a jump.
  double operator()(double x) const;
  /// Sign of v just to the right of jump j (0-based).
  int sign_after(std::size_t j) const noexcept;

 private:
  double a_;
  double b_;
  std::vector<double> jumps_;
  int first_sign_;
};

/// Closed band K with -1, +1 outside it.
struct Band {
  double lo = -0.5;
  double hi = 0.5;

  void validate() const;
  bool contains(double u) const noexcept { return lo <= u && u <= hi; }
  friend bool operator==(const Band&, const Band&) = default;
};

/// Sorted representative positions of interface components.
struct InterfaceSet {
  std::vector<double> positions;

  bool empty() const noexcept { return positions.empty(); }
  std::size_t size() const noexcept { return positions.size(); }
};

/// min( min_i (h_{i+1}-h_i)/2, h_1 - a, b - h_N ); b - a when there are no jumps.
double max_separation_radius(const StepFunction& v);

/// Layer datum: on [m_j, m_{j+1}] the field is +-Phi(x - h_j), signs following v,
/// with m_1 = a, m_j the midpoints of consecutive jumps and m_{N+1} = b.
Field build_layer_datum(const StepFunction& v, const StandingWaveProfile& wave, const Grid& grid);
Field build_layer_datum(const StepFunction& v, const PotentialParams& params, const Grid& grid);

/// Continuum energy E_eps of the layer datum, computed from the first integral by
/// quadrature in u (independent of any grid).  Equals N c_p minus the profile tails
/// cut at the midpoints.
double layer_datum_energy(const StepFunction& v, const StandingWaveProfile& wave);

/// Glued compacton steady state for n < p.  Errc::epsilon_too_large unless
/// x-bar < max_separation_radius(v); Errc::wrong_regime for n >= p.
Field build_stationary_subcritical(const StepFunction& v, const PotentialParams& params,
                                   const Grid& grid);

struct PeriodicStationary {
  Field field;
  double sbar = 0.0;
  /// h_1 = a + (b-a)/(2N), h_{i+1} = h_i + (b-a)/N.
  std::vector<double> zeros;
};

/// N-zero periodic steady state on [grid.a, grid.b] with u'(a) = u'(b) = 0, n >= p.
/// `first_sign` is the sign of u(a).
PeriodicStationary build_stationary_periodic(int N, const PotentialParams& params,
                                             const Grid& grid, int first_sign = -1);

/// Components of the preimage of `band` under the piecewise linear interpolant of u.
/// Each component contributes its zero crossings when 0 is in the band, else
/// (or when it has none) its midpoint.
InterfaceSet interfaces_of_field(const Field& u, const Band& band = {});

/// Interfaces of a step function: its jump set.
InterfaceSet interfaces_of(const StepFunction& v);

/// Hausdorff distance; Errc::empty_set if either set is empty.
double hausdorff_distance(const InterfaceSet& A, const InterfaceSet& B);

/// Trapezoidal approximation of int_a^b |u - v|.
double l1_distance(const Field& u, const StepFunction& v);

/// Number of strict sign changes, skipping exact zeros.
std::size_t count_sign_changes(const Field& u);

}  // namespace slowmo
