#pragma once

// Instance builders and oracles shared by the unit tests and the acceptance run.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sinrcast/programs.hpp"

namespace sinrcast::testing_support {

// At most one station per G_x box over a side x side block of boxes; each box
// is occupied with probability fill. IDs are drawn from [1, n^3].
inline Network one_per_box(std::uint64_t seed, double x, long boxes, double fill, SinrParams params) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Point> pts;
  for (long i = 0; i < boxes; ++i)
    for (long j = 0; j < boxes; ++j)
      if (U(rng) < fill) pts.push_back({(static_cast<double>(i) + U(rng)) * x, (static_cast<double>(j) + U(rng)) * x});
  if (pts.empty()) pts.push_back({0.5 * x, 0.5 * x});
  const std::size_t n = pts.size();
  const StationId I = static_cast<StationId>(n) * n * n + 1;
  std::set<StationId> used;
  std::vector<Station> st;
  for (const auto& p : pts) {
    StationId id;
    do id = rng() % I + 1;
    while (!used.insert(id).second);
    st.push_back({id, p});
  }
  return Network(std::move(st), I, params);
}

// n stations uniform in a side x side square (dense enough to crowd G_z boxes).
inline Network crowded_square(std::uint64_t seed, std::size_t n, double side, SinrParams params = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, side);
  const StationId I = static_cast<StationId>(n) * n * n;
  std::set<StationId> used;
  std::vector<Station> st;
  for (std::size_t i = 0; i < n; ++i) {
    StationId id;
    do id = rng() % I + 1;
    while (!used.insert(id).second);
    st.push_back({id, {U(rng), U(rng)}});
  }
  return Network(std::move(st), I, params);
}

// Receivers within reach of some sender that did not record that sender.
inline std::vector<std::string> missed_within(const Network& net, const std::vector<Reception>& rx, double reach) {
  std::set<std::pair<StationIndex, StationIndex>> got;
  for (const auto& r : rx) got.insert({r.receiver, r.sender});
  std::vector<std::string> out;
  for (StationIndex v = 0; v < net.size(); ++v)
    for (StationIndex u = 0; u < net.size(); ++u) {
      if (u == v || distance(net.position(u), net.position(v)) > reach) continue;
      if (!got.count({u, v}))
        out.push_back("station " + std::to_string(net.id(u)) + " missed " + std::to_string(net.id(v)));
    }
  return out;
}

}  // namespace sinrcast::testing_support
