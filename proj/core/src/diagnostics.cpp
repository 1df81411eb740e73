#include "slowmo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "slowmo/error.hpp"

namespace slowmo {

using nlohmann::json;

double energy(const Field& u, const PotentialParams& params) {
  return discrete_energy(u, params, 0.0);
}

EnergyReport lower_bound_report(double E, const StepFunction& v, const PotentialParams& params,
                                double A, int m) {
  params.validate();
  const auto c = constants(params);
  const double r = max_separation_radius(v);
  const double A_max = r * std::sqrt(2.0) * c.lambda_p;
  if (!(A > 0.0 && A < A_max))
    throw Error(Errc::inadmissible_a, "A = " + std::to_string(A) + " must lie in (0, " +
                                          std::to_string(A_max) + ")");
  EnergyReport rep;
  rep.E = E;
  rep.N = static_cast<int>(v.count());
  rep.N_cp = rep.N * c.c_p;
  rep.gap = rep.N_cp - rep.E;
  rep.A = A;
  rep.m = m;
  rep.bound_exp = std::exp(-A * params.p / (2.0 * params.eps));
  rep.bound_alg = std::pow(params.eps, c.k(m + 1));
  return rep;
}

EnergyReport lower_bound_check(const Field& u, const StepFunction& v, const PotentialParams& params,
                               double A, int m) {
  return lower_bound_report(energy(u, params), v, params, A, m);
}

double dissipation_budget(const RunRecord& record) {
  return record.snapshots.empty() ? 0.0 : record.snapshots.back().dissipation;
}

double dissipation_between(const RunRecord& record, double t0, double t1) {
  if (record.snapshots.empty()) return 0.0;
  auto at = [&](double t) {
    double d = record.snapshots.front().dissipation;
    for (const auto& s : record.snapshots) {
      if (s.t > t) break;
      d = s.dissipation;
    }
    return d;
  };
  return at(t1) - at(t0);
}

namespace {

double bracket_mean(double lo, double hi) { return lo > 0.0 ? std::sqrt(lo * hi) : hi; }

}  // namespace

std::vector<CollapseEvent> detect_collapse(const RunRecord& record, const StepFunction& v,
                                           std::optional<double> delta) {
  if (!record.band) throw Error(Errc::invalid_argument, "record has no interface snapshots");
  const double r = max_separation_radius(v);
  const double d = delta.value_or(0.5 * r);
  if (!(d > 0.0 && d < r))
    throw Error(Errc::invalid_argument, "delta must lie in (0, " + std::to_string(r) + ")");

  std::vector<CollapseEvent> events;
  const InterfaceSet jumps = interfaces_of(v);
  bool departed = false;
  for (std::size_t k = 1; k < record.snapshots.size(); ++k) {
    const auto& prev = record.snapshots[k - 1];
    const auto& cur = record.snapshots[k];
    const int n0 = static_cast<int>(prev.interfaces.size());
    const int n1 = static_cast<int>(cur.interfaces.size());
    if (n1 < n0) {
      events.push_back({CollapseKind::count_drop, bracket_mean(prev.t, cur.t), prev.t, cur.t, n0,
                        n1, cur.interfaces});
    }
    if (!departed && !jumps.empty()) {
      const InterfaceSet now{cur.interfaces};
      const double dist = now.empty() ? std::numeric_limits<double>::infinity()
                                      : hausdorff_distance(now, jumps);
      if (dist > d) {
        departed = true;
        events.push_back({CollapseKind::departure, bracket_mean(prev.t, cur.t), prev.t, cur.t, n0,
                          n1, cur.interfaces});
      }
    }
  }
  return events;
}

std::optional<CollapseEvent> first_collapse(const std::vector<CollapseEvent>& events) {
  for (const auto& e : events)
    if (e.kind == CollapseKind::count_drop) return e;
  return std::nullopt;
}

FitResult scaling_fit(const std::vector<std::pair<double, double>>& samples, Regime regime,
                      std::optional<double> reference) {
  if (regime == Regime::subcritical)
    throw Error(Errc::wrong_regime, "no slow-motion scaling law for n < p");
  if (samples.size() < 3)
    throw Error(Errc::insufficient_samples,
                "need at least 3 samples (got " + std::to_string(samples.size()) + ")");
  auto sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!(sorted[i].first > 0.0) || !(sorted[i].second > 0.0))
      throw Error(Errc::invalid_argument, "samples need eps > 0 and t > 0");
    if (i > 0 && sorted[i].first == sorted[i - 1].first)
      throw Error(Errc::insufficient_samples, "eps values must be distinct");
  }

  FitResult fit;
  fit.regime = regime;
  fit.reference = reference;
  const std::size_t k = samples.size();
  std::vector<double> xs(k), ys(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto [e, t] = samples[i];
    fit.eps.push_back(e);
    fit.t.push_back(t);
    xs[i] = regime == Regime::critical ? 1.0 / e : std::log(1.0 / e);
    ys[i] = std::log(t);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double res = ys[i] - (fit.intercept + fit.slope * xs[i]);
    fit.residuals.push_back(res);
    ss_res += res * res;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

namespace {

json event_json(const CollapseEvent& e) {
  return json{{"kind", e.kind == CollapseKind::count_drop ? "count-drop" : "departure"},
              {"t_collapse", e.t_collapse},
              {"t_lo", e.t_lo},
              {"t_hi", e.t_hi},
              {"N_before", e.N_before},
              {"N_after", e.N_after},
              {"surviving_positions", e.surviving_positions}};
}

}  // namespace

std::string to_json(const EnergyReport& r) {
  return json{{"E", r.E},
              {"N", r.N},
              {"N_cp", r.N_cp},
              {"gap", r.gap},
              {"A", r.A},
              {"m", r.m},
              {"bound_exp", r.bound_exp},
              {"bound_alg", r.bound_alg},
              {"envelopes_unit_constant", r.envelopes_unit_constant}}
      .dump(2);
}

std::string to_json(const CollapseEvent& event) { return event_json(event).dump(2); }

std::string to_json(const std::vector<CollapseEvent>& events) {
  json arr = json::array();
  for (const auto& e : events) arr.push_back(event_json(e));
  return arr.dump(2);
}

std::string to_json(const FitResult& fit) {
  json j{{"regime", std::string(to_string(fit.regime))},
         {"abscissa", fit.regime == Regime::critical ? "1/eps" : "log(1/eps)"},
         {"slope", fit.slope},
         {"intercept", fit.intercept},
         {"r_squared", fit.r_squared},
         {"eps", fit.eps},
         {"t", fit.t},
         {"residuals", fit.residuals}};
  j["reference"] = fit.reference ? json(*fit.reference) : json(nullptr);
  return j.dump(2);
}

void write_fit_csv(std::ostream& os, const FitResult& fit) {
  os << "eps,t,residual\n";
  os.precision(17);
  for (std::size_t i = 0; i < fit.eps.size(); ++i)
    os << fit.eps[i] << ',' << fit.t[i] << ',' << fit.residuals[i] << '\n';
}

}  // namespace slowmo
