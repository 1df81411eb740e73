#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace slowmo {

/// Uniform node-centred mesh on [a, b] with m >= 3 nodes.
struct Grid {
  double a = -1.0;
  double b = 1.0;
  std::size_t m = 3;

  Grid() = default;
  Grid(double a_, double b_, std::size_t m_);

  /// Smallest mesh with spacing h <= eps / cells_per_eps.
  static Grid resolving(double a, double b, double eps, double cells_per_eps = 8.0);

  double h() const noexcept { return (b - a) / static_cast<double>(m - 1); }
  double x(std::size_t i) const noexcept {
    // Pin the last node to b exactly.
    return i + 1 == m ? b : a + static_cast<double>(i) * h();
  }
  /// Trapezoidal quadrature weight of node i.
  double weight(std::size_t i) const noexcept {
    return (i == 0 || i + 1 == m) ? 0.5 * h() : h();
  }
  std::vector<double> nodes() const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Nodal values of u on a grid.
struct Field {
  Grid grid;
  std::vector<double> u;

  Field() = default;
  Field(Grid g, std::vector<double> values);
  Field(Grid g, double constant);

  std::size_t size() const noexcept { return u.size(); }
  std::span<const double> values() const noexcept { return u; }
  double operator[](std::size_t i) const noexcept { return u[i]; }
  double& operator[](std::size_t i) noexcept { return u[i]; }
};

/// max_i |a_i - b_i|; the fields must share a grid.
double sup_distance(const Field& a, const Field& b);

}  // namespace slowmo
