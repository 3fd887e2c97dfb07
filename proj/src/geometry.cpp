#include "sinrcast/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sinrcast/errors.hpp"

namespace sinrcast {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

namespace {

std::int64_t axis_index(double v, double side) {
  auto i = static_cast<std::int64_t>(std::floor(v / side));
  // The quotient can round across an integer; settle on the index for which
  // i*side <= v < (i+1)*side holds in the same arithmetic the caller uses.
  while (static_cast<double>(i) * side > v) --i;
  while (static_cast<double>(i + 1) * side <= v) ++i;
  return i;
}

void require_same_grid(const BoxCoord& a, const BoxCoord& b) {
  if (a.side != b.side) {
    std::ostringstream os;
    os << "boxes belong to different grids (side " << a.side << " vs " << b.side << ")";
    throw InvalidArgument(os.str());
  }
}

// Per-axis max-distance between [lo1, lo1+1) and [lo2, lo2+1) in box units.
double axis_max_distance(std::int64_t lo1, std::int64_t lo2) {
  if (lo1 == lo2) return 0.0;
  const std::int64_t hi1 = lo1 + 1;
  const std::int64_t hi2 = lo2 + 1;
  const auto a = static_cast<double>(lo1 > hi2 ? lo1 - hi2 : hi2 - lo1);
  const auto b = static_cast<double>(lo2 > hi1 ? lo2 - hi1 : hi1 - lo2);
  return std::min(a, b);
}

}  // namespace

BoxCoord box_of(Point p, double side) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidArgument("box_of: non-finite point");
  if (!(side > 0.0) || !std::isfinite(side)) throw InvalidArgument("box_of: box side must be positive");
  return {axis_index(p.x, side), axis_index(p.y, side), side};
}

bool adjacent(const BoxCoord& a, const BoxCoord& b) {
  require_same_grid(a, b);
  return std::llabs(a.i - b.i) <= 1 && std::llabs(a.j - b.j) <= 1;
}

double dist_m(const BoxCoord& a, const BoxCoord& b) {
  require_same_grid(a, b);
  return std::max(axis_max_distance(a.i, b.i), axis_max_distance(a.j, b.j));
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t m) { return (a - floor_mod(a, m)) / m; }

std::pair<std::int64_t, std::int64_t> dilution_class(const BoxCoord& b, std::int64_t d) {
  if (d < 1) throw InvalidArgument("dilution_class: d must be >= 1");
  return {floor_mod(b.i, d), floor_mod(b.j, d)};
}

double granularity(std::span<const Point> points) {
  if (points.size() < 2) return 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      const double d = distance(points[a], points[b]);
      if (d == 0.0) {
        std::ostringstream os;
        os << "coincident stations at (" << points[a].x << ", " << points[a].y << ")";
        throw InvalidNetwork(os.str());
      }
      best = std::min(best, d);
    }
  }
  return 1.0 / best;
}

}  // namespace sinrcast
