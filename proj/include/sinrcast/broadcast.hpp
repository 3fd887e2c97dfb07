#pragma once

// Stage-based deterministic broadcast on top of the leader elections.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sinrcast/election.hpp"

namespace sinrcast {

enum class Variant { Gen, Gran };

Variant parse_variant(std::string_view name);
std::string_view to_string(Variant v);

struct StageParams {
  double eps_prime = 0.0;  // eps / 2
  double z = 0.0;          // eps' / sqrt 2, leader box side
  double lambda = 0.0;     // 1 - sqrt(2) z
  double box_side = 0.0;   // (1 - eps') / (2 sqrt 2), transmission grid
  long l = 0;              // ceil((1 - eps') / eps'), leader groups per axis
  long d = 0;              // dilution of each group's transmission

  static StageParams make(const ProtocolContext& ctx);
};

struct StageReport {
  std::size_t active = 0;
  std::size_t leaders = 0;
  std::size_t newly_active = 0;
  std::vector<std::string> problems;  // filled when auditing
};

struct BroadcastOptions {
  // Check election post-conditions, halving and neighbour coverage after
  // every stage (costs a comm-graph pass per stage).
  bool audit = false;
};

StageReport stage_of_broadcast(Runtime& rt, const ProtocolContext& ctx, Variant variant,
                               const BroadcastOptions& options = {});

// Logical rounds one stage takes (the schedule is independent of the input).
std::uint64_t stage_rounds(const ProtocolContext& ctx, Variant variant);

struct BroadcastResult {
  std::size_t stages = 0;
  std::uint64_t rounds = 0;          // physical rounds
  std::uint64_t logical_rounds = 0;  // phases when wrapped
  bool all_informed = false;
  std::size_t informed = 0;
  std::vector<std::string> problems;
};

// Throws InadmissibleNetwork when the communication graph is disconnected and
// InvalidArgument for an unknown source.
BroadcastResult det_broadcast(Runtime& rt, const ProtocolContext& ctx, Variant variant, StationId source,
                              const BroadcastOptions& options = {});

}  // namespace sinrcast
