#include "sinrcast/generate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_set>

#include "sinrcast/errors.hpp"

namespace sinrcast {

namespace {

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : rng_(seed) {}
  double u01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do v = rng_(); while (v >= limit);
    return v % bound;
  }

 private:
  std::mt19937_64 rng_;
};

std::vector<StationId> draw_ids(Stream& rng, std::size_t n, StationId I) {
  std::vector<StationId> ids;
  ids.reserve(n);
  if (I <= 4 * static_cast<StationId>(n)) {
    std::vector<StationId> all(static_cast<std::size_t>(I));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i + 1;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(all.size() - i));
      std::swap(all[i], all[j]);
      ids.push_back(all[i]);
    }
    return ids;
  }
  std::unordered_set<StationId> used;
  while (ids.size() < n) {
    const StationId id = rng.below(I) + 1;
    if (used.insert(id).second) ids.push_back(id);
  }
  return ids;
}

// Largest spacing <= s at which every listed consecutive pair is within reach.
double settle_spacing(double s, double reach, const std::vector<std::pair<Point, Point>>& unit_pairs) {
  while (true) {
    bool ok = true;
    for (const auto& [a, b] : unit_pairs) {
      if (distance({a.x * s, a.y * s}, {b.x * s, b.y * s}) > reach) {
        ok = false;
        break;
      }
    }
    if (ok) return s;
    s = std::nextafter(s, 0.0);
  }
}

bool connected_positions(const std::vector<Point>& pts, const SinrParams& params) {
  std::vector<Station> st;
  st.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) st.push_back({i + 1, pts[i]});
  try {
    Network tmp(std::move(st), std::max<StationId>(pts.size(), 1), params);
    return comm_graph(tmp).connected();
  } catch (const InvalidNetwork&) {
    return false;
  }
}

std::size_t nearest_to(const std::vector<Point>& pts, Point c) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (distance(pts[i], c) < distance(pts[best], c)) best = i;
  return best;
}

}  // namespace

Generator parse_generator(std::string_view name) {
  if (name == "line") return Generator::Line;
  if (name == "grid") return Generator::Grid;
  if (name == "uniform-disc") return Generator::UniformDisc;
  if (name == "cluster") return Generator::Cluster;
  throw InvalidArgument("unknown generator '" + std::string(name) + "'");
}

std::string_view to_string(Generator g) {
  switch (g) {
    case Generator::Line: return "line";
    case Generator::Grid: return "grid";
    case Generator::UniformDisc: return "uniform-disc";
    case Generator::Cluster: return "cluster";
  }
  return "?";
}

StationId default_id_domain(std::size_t n) {
  const auto v = static_cast<StationId>(std::max<std::size_t>(n, 1));
  const StationId cap = StationId{1} << 62;
  if (v > cap / v || v * v > cap / v) return cap;
  return v * v * v;
}

Generated generate(const GenSpec& spec) {
  spec.params.validate();
  if (spec.n < 1) throw InvalidArgument("generate: n must be >= 1");
  const double reach = 1.0 - spec.params.eps;
  const StationId I = spec.id_domain.value_or(default_id_domain(spec.n));
  if (I < spec.n) throw InvalidArgument("generate: ID domain smaller than n");
  Stream rng(spec.seed);

  std::vector<Point> pts;
  std::size_t source = 0;
  std::size_t rejections = 0;

  switch (spec.generator) {
    case Generator::Line: {
      const double s0 = spec.scale.value_or(reach);
      if (!(s0 > 0.0 && s0 <= reach)) throw InvalidArgument("line spacing must lie in (0, 1 - eps]");
      std::vector<std::pair<Point, Point>> pairs;
      for (std::size_t i = 0; i + 1 < spec.n; ++i)
        pairs.push_back({{static_cast<double>(i), 0.0}, {static_cast<double>(i + 1), 0.0}});
      const double s = settle_spacing(s0, reach, pairs);
      for (std::size_t i = 0; i < spec.n; ++i) pts.push_back({static_cast<double>(i) * s, 0.0});
      break;
    }
    case Generator::Grid: {
      const double s0 = spec.scale.value_or(reach);
      if (!(s0 > 0.0 && s0 <= reach)) throw InvalidArgument("grid spacing must lie in (0, 1 - eps]");
      const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(spec.n))));
      std::vector<Point> unit;
      for (std::size_t i = 0; i < spec.n; ++i)
        unit.push_back({static_cast<double>(i % cols), static_cast<double>(i / cols)});
      std::vector<std::pair<Point, Point>> pairs;
      for (std::size_t i = 0; i < spec.n; ++i) {
        if (i + 1 < spec.n && (i + 1) % cols != 0) pairs.push_back({unit[i], unit[i + 1]});
        if (i + cols < spec.n) pairs.push_back({unit[i], unit[i + cols]});
      }
      const double s = settle_spacing(s0, reach, pairs);
      for (const auto& u : unit) pts.push_back({u.x * s, u.y * s});
      break;
    }
    case Generator::UniformDisc: {
      const double R = spec.scale.value_or(0.275 * reach * std::sqrt(static_cast<double>(spec.n)));
      if (!(R > 0.0)) throw InvalidArgument("disc radius must be positive");
      for (std::size_t attempt = 0;; ++attempt) {
        if (attempt >= spec.max_retries) {
          std::ostringstream os;
          os << "no connected uniform-disc network with n=" << spec.n << ", radius " << R << " after "
             << spec.max_retries << " draws";
          throw GenerationFailure(os.str());
        }
        pts.clear();
        for (std::size_t i = 0; i < spec.n; ++i) {
          const double r = R * std::sqrt(rng.u01());
          const double t = 2.0 * M_PI * rng.u01();
          pts.push_back({r * std::cos(t), r * std::sin(t)});
        }
        if (connected_positions(pts, spec.params)) break;
        ++rejections;
      }
      source = nearest_to(pts, {0.0, 0.0});
      break;
    }
    case Generator::Cluster: {
      const double s = spec.scale.value_or(0.4 * reach);
      const double rho = 0.2 * reach;
      if (!(s > 0.0) || s + 2.0 * rho > reach) throw InvalidArgument("cluster spacing too large to chain clusters");
      if (!(spec.g_target > 0.0) || 1.0 / spec.g_target > rho)
        throw InvalidArgument("cluster: 1/g_target must not exceed the cluster radius");
      if (spec.cluster_size < 2) throw InvalidArgument("cluster size must be >= 2");
      const double gap = 1.0 / spec.g_target;
      const double min_other = gap * (1.0 + 1e-9);
      pts.push_back({0.0, 0.0});
      if (spec.n > 1) pts.push_back({gap, 0.0});
      // A cluster that cannot take another point at the minimum spacing is
      // closed early and the chain moves on.
      std::size_t c = 0, in_cluster = pts.size();
      while (pts.size() < spec.n) {
        if (in_cluster >= spec.cluster_size) {
          ++c;
          in_cluster = 0;
        }
        const Point centre{static_cast<double>(c) * s, 0.0};
        bool placed = false;
        for (std::size_t tries = 0; tries < 2000 && !placed; ++tries) {
          const double r = rho * std::sqrt(rng.u01());
          const double t = 2.0 * M_PI * rng.u01();
          const Point p{centre.x + r * std::cos(t), centre.y + r * std::sin(t)};
          placed = std::none_of(pts.begin(), pts.end(), [&](const Point& q) { return distance(p, q) < min_other; });
          if (placed) pts.push_back(p);
          else ++rejections;
        }
        if (placed) {
          ++in_cluster;
        } else if (in_cluster == 0) {
          throw GenerationFailure("cluster: cannot place a station at the requested spacing");
        } else {
          in_cluster = spec.cluster_size;
        }
      }
      if (!connected_positions(pts, spec.params)) throw GenerationFailure("cluster chain is disconnected");
      break;
    }
  }

  const auto ids = draw_ids(rng, spec.n, I);
  std::vector<Station> stations;
  for (std::size_t i = 0; i < spec.n; ++i) stations.push_back({ids[i], pts[i]});
  Generated g{Network(std::move(stations), I, spec.params), ids[source], rejections};
  return g;
}

}  // namespace sinrcast
