#pragma once

// Thin wrappers over Boost.Math quadrature. Private to the core library.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>


namespace slowmo::detail {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Double-exponential rule on [a, b]; tolerates integrable endpoint singularities.
template <class F>
QuadResult tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-13) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  QuadResult r;
  double l1 = 0.0;
  auto g = [&f](double x) { return f(x); };
  r.value = integrator.integrate(g, a, b, rel_tol, &r.error, &l1);
  return r;
}

/// Fixed 10-point Gauss-Legendre rule; for short smooth panels.
template <class F>
double gauss_legendre(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

}  // namespace slowmo::detail
