#include "slowmo/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "slowmo/error.hpp"

namespace slowmo {

StepFunction::StepFunction(double a, double b, std::vector<double> jumps, int first_sign)
    : a_(a), b_(b), jumps_(std::move(jumps)), first_sign_(first_sign) {
  if (!(a_ < b_)) throw Error(Errc::invalid_argument, "step function needs a < b");
  if (first_sign_ != 1 && first_sign_ != -1)
    throw Error(Errc::invalid_argument, "first_sign must be +1 or -1");
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    const double h = jumps_[i];
    if (!(h > a_ && h < b_))
      throw Error(Errc::invalid_argument, "jump " + std::to_string(h) + " outside (a, b)");
    if (i > 0 && !(jumps_[i - 1] < h))
      throw Error(Errc::invalid_argument, "jumps must be strictly increasing");
  }
}

double StepFunction::operator()(double x) const {
  const auto it = std::lower_bound(jumps_.begin(), jumps_.end(), x);
  if (it != jumps_.end() && *it == x) return 0.0;
  const auto k = it - jumps_.begin();
  return (k % 2 == 0) ? first_sign_ : -first_sign_;
}

int StepFunction::sign_after(std::size_t j) const noexcept {
  return (j % 2 == 0) ? -first_sign_ : first_sign_;
}

void Band::validate() const {
  if (!(lo <= hi)) throw Error(Errc::invalid_argument, "band needs lo <= hi");
  if (contains(1.0) || contains(-1.0))
    throw Error(Errc::invalid_argument, "band must exclude the wells +-1");
}

double max_separation_radius(const StepFunction& v) {
  const auto& h = v.jumps();
  if (h.empty()) return v.b() - v.a();
  double r = std::min(h.front() - v.a(), v.b() - h.back());
  for (std::size_t i = 0; i + 1 < h.size(); ++i) r = std::min(r, 0.5 * (h[i + 1] - h[i]));
  return r;
}

namespace {

// Segment boundaries m_1 = a, m_j = (h_{j-1} + h_j)/2, m_{N+1} = b.
std::vector<double> segment_bounds(const StepFunction& v) {
  const auto& h = v.jumps();
  std::vector<double> m;
  m.reserve(h.size() + 1);
  m.push_back(v.a());
  for (std::size_t j = 1; j < h.size(); ++j) m.push_back(0.5 * (h[j - 1] + h[j]));
  m.push_back(v.b());
  return m;
}

void check_grid_covers(const StepFunction& v, const Grid& grid) {
  if (grid.a != v.a() || grid.b != v.b())
    throw Error(Errc::invalid_argument, "grid and step function must share the domain");
}

}  // namespace

Field build_layer_datum(const StepFunction& v, const StandingWaveProfile& wave, const Grid& grid) {
  check_grid_covers(v, grid);
  const auto& h = v.jumps();
  if (h.empty()) return Field(grid, static_cast<double>(v.first_sign()));
  const auto m = segment_bounds(v);
  std::vector<double> u(grid.m);
  std::size_t j = 0;
  for (std::size_t i = 0; i < grid.m; ++i) {
    const double x = grid.x(i);
    while (j + 1 < h.size() && x >= m[j + 1]) ++j;
    u[i] = v.sign_after(j) * wave(x - h[j]);
  }
  return Field(grid, std::move(u));
}

Field build_layer_datum(const StepFunction& v, const PotentialParams& params, const Grid& grid) {
  return build_layer_datum(v, standing_wave(params), grid);
}

double layer_datum_energy(const StepFunction& v, const StandingWaveProfile& wave) {
  const auto& h = v.jumps();
  if (h.empty()) return 0.0;
  const auto& prm = wave.params();
  const double c_p = transition_energy(prm);
  const auto m = segment_bounds(v);
  double energy = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    const double left = transition_energy_tail(prm, wave.complement(h[j] - m[j]));
    const double right = transition_energy_tail(prm, wave.complement(m[j + 1] - h[j]));
    energy += c_p - left - right;
  }
  return energy;
}

Field build_stationary_subcritical(const StepFunction& v, const PotentialParams& params,
                                   const Grid& grid) {
  params.validate();
  if (params.regime() != Regime::subcritical)
    throw Error(Errc::wrong_regime, "compacton steady states need n < p");
  const auto wave = standing_wave(params);
  const double xbar = *wave.support_radius();
  const double r = max_separation_radius(v);
  if (!(xbar < r))
    throw Error(Errc::epsilon_too_large, "support radius " + std::to_string(xbar) +
                                             " does not fit the separation radius " +
                                             std::to_string(r));
  return build_layer_datum(v, wave, grid);
}

PeriodicStationary build_stationary_periodic(int N, const PotentialParams& params,
                                             const Grid& grid, int first_sign) {
  params.validate();
  if (params.regime() == Regime::subcritical)
    throw Error(Errc::wrong_regime, "periodic steady states with equidistant zeros need n >= p");
  if (N < 1) throw Error(Errc::invalid_argument, "N must be >= 1");
  if (first_sign != 1 && first_sign != -1)
    throw Error(Errc::invalid_argument, "first_sign must be +1 or -1");
  const double len = grid.b - grid.a;
  const double spacing = len / N;
  PeriodicStationary out;
  out.sbar = solve_amplitude_for_period(params, spacing);
  const auto prof = periodic_profile(params, out.sbar);
  const double h1 = grid.a + 0.5 * spacing;
  for (int i = 0; i < N; ++i) out.zeros.push_back(h1 + spacing * i);
  // prof(-spacing/2) = -sbar, so the sign flips to put first_sign at x = a.
  const double sign = -first_sign;
  std::vector<double> u(grid.m);
  for (std::size_t i = 0; i < grid.m; ++i) u[i] = sign * prof(grid.x(i) - h1);
  out.field = Field(grid, std::move(u));
  return out;
}

namespace {

// Zero crossings of the piecewise linear interpolant; runs of exact zeros
// between opposite signs report their midpoint.
std::vector<double> zero_crossings(const Field& f) {
  std::vector<double> out;
  const auto& u = f.u;
  const Grid& g = f.grid;
  std::size_t last = std::numeric_limits<std::size_t>::max();
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] == 0.0) continue;
    if (last != std::numeric_limits<std::size_t>::max() && (u[last] > 0.0) != (u[j] > 0.0)) {
      if (j == last + 1) {
        const double theta = u[last] / (u[last] - u[j]);
        out.push_back(g.x(last) + theta * (g.x(j) - g.x(last)));
      } else {
        out.push_back(0.5 * (g.x(last + 1) + g.x(j - 1)));
      }
    }
    last = j;
  }
  return out;
}

}  // namespace

std::size_t count_sign_changes(const Field& u) { return zero_crossings(u).size(); }

InterfaceSet interfaces_of_field(const Field& field, const Band& band) {
  band.validate();
  const auto& u = field.u;
  const Grid& g = field.grid;
  struct Component {
    double start, end;
  };
  std::vector<Component> comps;
  bool open = false;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double u0 = u[i], u1 = u[i + 1];
    const double x0 = g.x(i), x1 = g.x(i + 1);
    double ts, te;
    if (u0 == u1) {
      if (!band.contains(u0)) {
        open = false;
        continue;
      }
      ts = 0.0;
      te = 1.0;
    } else {
      const double ta = (band.lo - u0) / (u1 - u0);
      const double tb = (band.hi - u0) / (u1 - u0);
      ts = std::max(0.0, std::min(ta, tb));
      te = std::min(1.0, std::max(ta, tb));
      if (ts > te) {
        open = false;
        continue;
      }
    }
    const double xs = x0 + ts * (x1 - x0);
    const double xe = x0 + te * (x1 - x0);
    if (open && ts == 0.0)
      comps.back().end = xe;
    else
      comps.push_back({xs, xe});
    open = te == 1.0;
  }

  InterfaceSet out;
  const auto crossings = band.contains(0.0) ? zero_crossings(field) : std::vector<double>{};
  std::size_t c = 0;
  for (const auto& comp : comps) {
    bool any = false;
    while (c < crossings.size() && crossings[c] <= comp.end) {
      if (crossings[c] >= comp.start) {
        out.positions.push_back(crossings[c]);
        any = true;
      }
      ++c;
    }
    if (!any) out.positions.push_back(0.5 * (comp.start + comp.end));
  }
  std::sort(out.positions.begin(), out.positions.end());
  return out;
}

InterfaceSet interfaces_of(const StepFunction& v) { return InterfaceSet{v.jumps()}; }

double hausdorff_distance(const InterfaceSet& A, const InterfaceSet& B) {
  if (A.empty() || B.empty())
    throw Error(Errc::empty_set, "Hausdorff distance of an empty interface set");
  auto directed = [](const InterfaceSet& from, const InterfaceSet& to) {
    double worst = 0.0;
    for (double x : from.positions) {
      double best = std::numeric_limits<double>::infinity();
      for (double y : to.positions) best = std::min(best, std::abs(x - y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(A, B), directed(B, A));
}

double l1_distance(const Field& u, const StepFunction& v) {
  check_grid_covers(v, u.grid);
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    sum += u.grid.weight(i) * std::abs(u[i] - v(u.grid.x(i)));
  return sum;
}

}  // namespace slowmo
