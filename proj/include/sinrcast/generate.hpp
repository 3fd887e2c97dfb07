#pragma once

// Seeded network generators. All randomness comes from one mt19937_64 stream
// converted with explicit bit arithmetic, so output bytes do not depend on the
// standard library's distribution implementations.

#include <cstdint>
#include <optional>
#include <string_view>

#include "sinrcast/sinr.hpp"

namespace sinrcast {

enum class Generator { Line, Grid, UniformDisc, Cluster };

Generator parse_generator(std::string_view name);
std::string_view to_string(Generator g);

struct GenSpec {
  Generator generator = Generator::Line;
  std::size_t n = 10;
  // Line and grid: spacing (default 1 - eps). Uniform disc: radius (default
  // 0.275 (1 - eps) sqrt n). Cluster: distance between cluster centres
  // (default 0.4 (1 - eps)).
  std::optional<double> scale;
  SinrParams params;
  std::uint64_t seed = 1;
  std::optional<StationId> id_domain;  // default n^3
  double g_target = 10.0;              // cluster: closest pair at distance 1/g_target
  std::size_t cluster_size = 8;        // upper bound; a full cluster closes early
  std::size_t max_retries = 1000;
};

struct Generated {
  Network net;
  StationId source = 0;
  std::size_t rejections = 0;
};

// Throws GenerationFailure when no admissible network turns up within
// max_retries draws, InvalidArgument for inconsistent specs.
Generated generate(const GenSpec& spec);

// n^3 (at least n, at least 1), saturating.
StationId default_id_domain(std::size_t n);

}  // namespace sinrcast
