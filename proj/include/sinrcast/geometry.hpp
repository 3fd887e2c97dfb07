#pragma once

// Planar grid machinery shared by every protocol: the partition G_c into
// half-open c x c boxes anchored at the origin, box adjacency, max-distance
// between boxes and dilution classes. All distances are in units of the
// transmission range (r = 1).

#include <cstdint>
#include <functional>
#include <span>
#include <utility>

namespace sinrcast {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

// Box (i, j) of G_side covers [i*side, (i+1)*side) x [j*side, (j+1)*side).
// The side travels with the coordinates so that mixing grids is caught.
struct BoxCoord {
  std::int64_t i = 0;
  std::int64_t j = 0;
  double side = 1.0;

  friend bool operator==(const BoxCoord&, const BoxCoord&) = default;
};

// Grid-independent key for hashing boxes of one known grid.
struct BoxKey {
  std::int64_t i = 0;
  std::int64_t j = 0;

  friend bool operator==(const BoxKey&, const BoxKey&) = default;
  friend auto operator<=>(const BoxKey&, const BoxKey&) = default;
};

struct BoxKeyHash {
  std::size_t operator()(const BoxKey& k) const noexcept {
    const auto a = static_cast<std::uint64_t>(k.i);
    const auto b = static_cast<std::uint64_t>(k.j);
    return std::hash<std::uint64_t>{}(a * 0x9E3779B97F4A7C15ULL ^ (b + 0x7F4A7C159E3779B9ULL + (a << 6) + (a >> 2)));
  }
};

inline BoxKey key(const BoxCoord& b) { return {b.i, b.j}; }

// Throws InvalidArgument for non-finite points or side <= 0.
BoxCoord box_of(Point p, double side);

// Chebyshev neighbourhood including the box itself. Mismatched sides throw.
bool adjacent(const BoxCoord& a, const BoxCoord& b);

// Max-distance between two boxes in units of the box side: per axis zero
// when the half-open projections intersect, otherwise min(|i1 - j2|, |i2 - j1|)
// over the segment endpoints; the result is the larger of the two axes.
double dist_m(const BoxCoord& a, const BoxCoord& b);

// Nonnegative (i mod d, j mod d). Boxes sharing a class form a d-diluted set.
std::pair<std::int64_t, std::int64_t> dilution_class(const BoxCoord& b, std::int64_t d);

// Mathematical modulus and floor division for possibly negative indices.
std::int64_t floor_mod(std::int64_t a, std::int64_t m);
std::int64_t floor_div(std::int64_t a, std::int64_t m);

// r / (minimum pairwise distance) with r = 1. A single point has granularity
// 1 by convention; coincident points throw InvalidNetwork.
double granularity(std::span<const Point> points);

}  // namespace sinrcast
