#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "slowmo/error.hpp"
#include "slowmo/layers.hpp"
#include "slowmo/profiles.hpp"
#include "slowmo/solver.hpp"

using namespace slowmo;

namespace {

double sup_norm(const Field& f) {
  double m = 0;
  for (double x : f.u) m = std::max(m, std::abs(x));
  return m;
}

Field two_layers(const PotentialParams& prm, double cells_per_eps = 8) {
  const StepFunction v(-1, 1, {-0.4, 0.4});
  return build_layer_datum(v, prm, Grid::resolving(-1, 1, prm.eps, cells_per_eps));
}

}  // namespace

TEST(Flux, Examples) {
  EXPECT_EQ(flux(0.37, 2.0, 0.0), 0.37);
  EXPECT_EQ(flux(-1.5, 2.0, 0.3), -1.5);
  EXPECT_DOUBLE_EQ(flux(2.0, 4.0, 0.0), 8.0);
  EXPECT_DOUBLE_EQ(flux(-2.0, 4.0, 0.0), -8.0);
  EXPECT_DOUBLE_EQ(flux(3.0, 2.5, 0.0), std::pow(3.0, 1.5));
}

TEST(Flux, RegularizedSingularCase) {
  const double delta = 1e-10, p = 1.5;
  EXPECT_EQ(flux(0.0, p, delta), 0.0);
  const double h = 1e-14;
  const double slope = (flux(h, p, delta) - flux(-h, p, delta)) / (2 * h);
  EXPECT_TRUE(std::isfinite(slope));
  EXPECT_NEAR(slope / std::pow(delta, p - 2), 1.0, 1e-6);
  EXPECT_NEAR(flux_derivative(0.0, p, delta) / std::pow(delta, p - 2), 1.0, 1e-12);
}

TEST(Flux, DerivativeMatchesFiniteDifferences) {
  for (double p : {1.5, 2.0, 3.0, 5.5})
    for (double delta : {0.0, 0.1})
      for (double g : {-2.0, -0.3, 0.4, 1.7}) {
        const double h = 1e-6;
        const double fd = (flux(g + h, p, delta) - flux(g - h, p, delta)) / (2 * h);
        EXPECT_NEAR(flux_derivative(g, p, delta), fd, 1e-6 * (1 + std::abs(fd))) << p << ' ' << g;
      }
}

TEST(SolverConfig, DefaultsAndValidation) {
  SolverConfig cfg;
  EXPECT_EQ(cfg.scheme, Scheme::semi_implicit_lagged);
  EXPECT_EQ(cfg.delta_for({1.5, 2, 0.1}), 1e-10);
  EXPECT_EQ(cfg.delta_for({2.0, 2, 0.1}), 0.0);
  cfg.dt_init = 1e-14;
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_EQ(scheme_from_string("explicit"), Scheme::explicit_euler);
  EXPECT_EQ(scheme_from_string(to_string(Scheme::linearly_implicit)), Scheme::linearly_implicit);
  EXPECT_THROW(scheme_from_string("rk4"), Error);
}

TEST(Rhs, EquilibriaHaveZeroRhs) {
  const Grid g(-1, 1, 51);
  for (double p : {1.5, 2.0, 4.0})
    for (double c : {1.0, -1.0, 0.0}) {
      const PotentialParams prm{p, 2, 0.1};
      EXPECT_EQ(sup_norm(rhs(Field(g, c), prm, SolverConfig{})), 0.0) << p << ' ' << c;
    }
}

TEST(Rhs, IsWeightedGradientOfDiscreteEnergy) {
  // du_i/dt = -(eps / w_i) dE_h/du_i, checked by central differences of E_h.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  for (double p : {1.5, 2.0, 3.0}) {
    const PotentialParams prm{p, 3, 0.2};
    SolverConfig cfg;
    cfg.reg_delta = 0.05;
    const Grid g(0, 1, 21);
    std::vector<double> u(21);
    for (auto& x : u) x = U(rng);
    const Field f(g, u);
    const Field r = rhs(f, prm, cfg);
    for (std::size_t i = 0; i < 21; ++i) {
      Field up = f, dn = f;
      const double h = 1e-6;
      up[i] += h;
      dn[i] -= h;
      const double dE = (discrete_energy(up, prm, 0.05) - discrete_energy(dn, prm, 0.05)) / (2 * h);
      EXPECT_NEAR(r[i], -prm.eps / g.weight(i) * dE, 1e-5 * (1 + std::abs(r[i]))) << p << ' ' << i;
    }
  }
}

TEST(Rhs, StandingWaveResidualIsSecondOrder) {
  const PotentialParams prm{2, 2, 0.1};
  const auto wave = standing_wave(prm, ProfileKind::inverted_integral);
  double prev = 0;
  for (std::size_t cells : {100, 200, 400, 800}) {
    const Grid g(-1, 1, cells + 1);
    std::vector<double> u(g.m);
    for (std::size_t i = 0; i < g.m; ++i) u[i] = wave(g.x(i));
    // Skip the boundary nodes where the whole-line profile is not Neumann.
    const Field r = rhs(Field(g, u), prm, SolverConfig{});
    double res = 0;
    for (std::size_t i = 1; i + 1 < g.m; ++i) res = std::max(res, std::abs(r[i]));
    if (prev > 0) EXPECT_NEAR(prev / res, 4.0, 0.1) << cells;
    prev = res;
  }
}

TEST(DiscreteEnergy, ZeroAtWellsPositiveOtherwise) {
  const Grid g(0, 1, 11);
  const PotentialParams prm{3, 2, 0.1};
  EXPECT_EQ(discrete_energy(Field(g, 1.0), prm), 0.0);
  EXPECT_EQ(discrete_energy(Field(g, -1.0), prm), 0.0);
  EXPECT_GT(discrete_energy(Field(g, 0.999), prm), 0.0);
  // Regularization subtracts delta^p so constants still have zero gradient energy.
  EXPECT_EQ(discrete_energy(Field(g, 1.0), prm, 0.3), 0.0);
}

TEST(Step, FixedPointUnchanged) {
  const Grid g(0, 1, 21);
  for (Scheme s : {Scheme::explicit_euler, Scheme::semi_implicit_lagged, Scheme::linearly_implicit}) {
    SolverConfig cfg;
    cfg.scheme = s;
    const auto [u, res] = step(Field(g, 1.0), 0.5, {2, 2, 0.1}, cfg);
    EXPECT_TRUE(res.accepted);
    EXPECT_EQ(res.rejections, 0);
    EXPECT_LT(res.energy_after, 1e-28);
    EXPECT_LT(sup_distance(u, Field(g, 1.0)), 1e-15);
  }
}

TEST(Step, EnergyDecreasesOnLayerDatum) {
  for (Scheme s : {Scheme::explicit_euler, Scheme::semi_implicit_lagged, Scheme::linearly_implicit}) {
    const PotentialParams prm{2, 4, 0.1};
    Field u = two_layers(prm);
    SolverConfig cfg;
    cfg.scheme = s;
    const double dt = 0.5 * stable_dt(u, prm, cfg);
    const auto [next, res] = step(u, std::min(dt, 0.1), prm, cfg);
    EXPECT_LE(res.energy_after, res.energy_before);
    EXPECT_EQ(res.rejections, 0);
  }
}

TEST(Step, ExplicitRejectsHugeStepAndHalves) {
  const PotentialParams prm{2, 2, 0.1};
  const Field u = two_layers(prm);
  SolverConfig cfg;
  cfg.scheme = Scheme::explicit_euler;
  const double bound = stable_dt(u, prm, cfg);
  const auto single = attempt_step(u, 100 * bound, prm, cfg);
  EXPECT_FALSE(single.second.accepted);
  const auto [next, res] = step(u, 100 * bound, prm, cfg);
  EXPECT_TRUE(res.accepted);
  EXPECT_GT(res.rejections, 0);
  EXPECT_DOUBLE_EQ(res.dt_used, 100 * bound / std::pow(2.0, res.rejections));
  EXPECT_LE(res.energy_after, res.energy_before + cfg.energy_tolerance);
}

TEST(Step, UnderflowWhenDtMinTooLarge) {
  const PotentialParams prm{2, 2, 0.1};
  const Field u = two_layers(prm);
  SolverConfig cfg;
  cfg.scheme = Scheme::explicit_euler;
  cfg.dt_min = 1.0;
  try {
    step(u, 1.5, prm, cfg);
    FAIL() << "expected dt-underflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::dt_underflow);
  }
}

TEST(Step, DissipationIdentityPerStep) {
  // (E_before - E_after)/dt ~ eps^{-1} ||du/dt||^2 for small dt.
  const PotentialParams prm{3, 4, 0.1};
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> noise(-0.2, 0.2);
  Field u = two_layers(prm);
  for (auto& x : u.u) x = std::clamp(x + noise(rng), -1.0, 1.0);
  SolverConfig cfg;
  const auto [next, res] = step(u, 1e-5, prm, cfg);
  const double lhs = (res.energy_before - res.energy_after) / res.dt_used;
  const double rhs_val = res.ut_norm_sq / prm.eps;
  EXPECT_NEAR(lhs / rhs_val, 1.0, 0.1);
}

TEST(Run, ZeroHorizonKeepsOnlyInitialSnapshot) {
  const PotentialParams prm{2, 2, 0.1};
  const auto rec = run(two_layers(prm), 0.0, prm, SolverConfig{});
  ASSERT_EQ(rec.snapshots.size(), 1u);
  EXPECT_EQ(rec.snapshots[0].t, 0.0);
  EXPECT_EQ(rec.accepted, 0u);
}

TEST(Run, ObserverScheduleIsLogSpaced) {
  const ObserverSchedule s{1e-2, 4};
  const auto ts = s.times(1.0);
  ASSERT_EQ(ts.size(), 10u);  // 0, 8 log points in [1e-2, 1), t_end
  EXPECT_EQ(ts.front(), 0.0);
  EXPECT_EQ(ts.back(), 1.0);
  EXPECT_NEAR(ts[2] / ts[1], std::pow(10.0, 0.25), 1e-12);
}

TEST(Run, HitsObserverTimesExactly) {
  const PotentialParams prm{2, 2, 0.1};
  RunOptions opt;
  opt.schedule = {0.1, 8};
  const auto rec = run(two_layers(prm), 3.0, prm, SolverConfig{}, opt);
  const auto ts = opt.schedule.times(3.0);
  ASSERT_EQ(rec.snapshots.size(), ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_EQ(rec.snapshots[i].t, ts[i]);
}

TEST(Run, ObserverCanStopEarly) {
  const PotentialParams prm{2, 2, 0.1};
  RunOptions opt;
  int calls = 0;
  opt.observer = [&](const Snapshot&, const Field&) { return ++calls < 3; };
  const auto rec = run(two_layers(prm), 100.0, prm, SolverConfig{}, opt);
  EXPECT_TRUE(rec.stopped_early);
  EXPECT_EQ(rec.snapshots.size(), 3u);
}

TEST(Run, EnergyNeverIncreasesAndStaysInBounds) {
  for (Scheme s : {Scheme::explicit_euler, Scheme::semi_implicit_lagged}) {
    for (auto [p, n] : {std::pair{2.0, 2.0}, {3.0, 4.0}, {1.5, 2.0}}) {
      const PotentialParams prm{p, n, 0.1};
      std::mt19937 rng(11);
      std::uniform_real_distribution<double> U(-1, 1);
      Field u = two_layers(prm);
      for (auto& x : u.u) x = std::clamp(x + 0.3 * U(rng), -1.0, 1.0);
      SolverConfig cfg;
      cfg.scheme = s;
      RunOptions opt;
      opt.record_steps = true;
      opt.keep_fields = true;
      const auto rec = run(u, 5.0, prm, cfg, opt);
      for (const auto& st : rec.steps) EXPECT_LE(st.energy_after, st.energy_before + 1e-12);
      for (const auto& f : rec.fields)
        for (double x : f.u) {
          EXPECT_GE(x, -1 - 1e-8);
          EXPECT_LE(x, 1 + 1e-8);
        }
    }
  }
}

TEST(Run, ExplicitAndSemiImplicitAgree) {
  const PotentialParams prm{2, 2, 0.1};
  const Field u0 = two_layers(prm);
  SolverConfig ex, si;
  ex.scheme = Scheme::explicit_euler;
  ex.dt_max = si.dt_max = 1e-3;
  const auto a = run(u0, 10.0, prm, ex);
  const auto b = run(u0, 10.0, prm, si);
  EXPECT_LT(sup_distance(a.final_field, b.final_field), 1e-4);
}

TEST(Run, LinearlyImplicitAgreesWithSemiImplicit) {
  const PotentialParams prm{3, 4, 0.1};
  const Field u0 = two_layers(prm);
  SolverConfig li, si;
  li.scheme = Scheme::linearly_implicit;
  li.dt_max = si.dt_max = 1e-3;
  const auto a = run(u0, 10.0, prm, li);
  const auto b = run(u0, 10.0, prm, si);
  EXPECT_LT(sup_distance(a.final_field, b.final_field), 1e-4);
}

TEST(Run, StationaryPeriodicStaysPut) {
  const PotentialParams prm{2, 2, 0.1};
  const Grid g(0, 2, 801);
  const auto ps = build_stationary_periodic(4, prm, g);
  SolverConfig cfg;
  cfg.scheme = Scheme::linearly_implicit;
  cfg.dt_max = 0.1;
  const auto rec = run(ps.field, 10.0, prm, cfg);
  EXPECT_LT(sup_distance(rec.final_field, ps.field), 1e-4);
}

TEST(Run, RejectsNonFiniteInitialData) {
  Field u(Grid(0, 1, 5), 0.0);
  u[2] = NAN;
  EXPECT_THROW(run(u, 1.0, {2, 2, 0.1}, SolverConfig{}), Error);
}

TEST(Step, RejectsNonFiniteStep) {
  const PotentialParams prm{2, 2, 0.1};
  const Field u = two_layers(prm);
  SolverConfig cfg;
  cfg.scheme = Scheme::linearly_implicit;
  EXPECT_TRUE(std::isinf(stable_dt(u, prm, cfg)));
  EXPECT_THROW(step(u, stable_dt(u, prm, cfg), prm, cfg), Error);
  EXPECT_THROW(attempt_step(u, -1.0, prm, cfg), Error);
}
