#include "slowmo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slowmo/error.hpp"

namespace slowmo {

Grid::Grid(double a_, double b_, std::size_t m_) : a(a_), b(b_), m(m_) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b))
    throw Error(Errc::invalid_argument, "grid needs finite a < b");
  if (m < 3) throw Error(Errc::invalid_argument, "grid needs at least 3 nodes");
}

Grid Grid::resolving(double a, double b, double eps, double cells_per_eps) {
  if (!(eps > 0.0) || !(cells_per_eps > 0.0))
    throw Error(Errc::invalid_argument, "resolving grid needs eps > 0 and cells_per_eps > 0");
  const double cells = std::ceil((b - a) * cells_per_eps / eps - 1e-9);
  return Grid(a, b, static_cast<std::size_t>(std::max(cells, 2.0)) + 1);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> xs(m);
  for (std::size_t i = 0; i < m; ++i) xs[i] = x(i);
  return xs;
}

Field::Field(Grid g, std::vector<double> values) : grid(g), u(std::move(values)) {
  if (u.size() != grid.m)
    throw Error(Errc::invalid_argument, "field has " + std::to_string(u.size()) +
                                            " values for " + std::to_string(grid.m) + " nodes");
}

Field::Field(Grid g, double constant) : grid(g), u(g.m, constant) {}

double sup_distance(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) throw Error(Errc::invalid_argument, "fields live on different grids");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace slowmo
