#pragma once

// Grid-based transmission schedules and the two leader elections.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sinrcast/dilution.hpp"
#include "sinrcast/geometry.hpp"
#include "sinrcast/runtime.hpp"
#include "sinrcast/selectors.hpp"

namespace sinrcast {

enum class PairingRule {
  // Survive iff v is the smaller end of a mutual-minimum pair: u = min X_v and
  // v = min(X_u + u). Survivors inject into eliminated box-mates.
  Matching,
  // Survive iff X_v is nonempty and v <= min(X_u + u) for u = min X_v.
  Literal,
};

PairingRule parse_pairing(std::string_view name);
std::string_view to_string(PairingRule r);

// Selector size parameter used when no override is given.
inline constexpr std::size_t kDefaultSelectorK = 9;

struct ProtocolConfig {
  DilutionPolicy dilution = DilutionPolicy::Sufficient;
  // SINR safety factor used for dilution; 0 picks 1 (classical) or
  // 1/(1 - eta) (disturbance).
  double margin = 0.0;
  std::optional<std::size_t> selector_k;
  PairingRule pairing = PairingRule::Matching;
  // Granularity bound known to the stations (gran variant); defaults to the
  // network's own granularity.
  std::optional<double> granularity;
};

// Everything a protocol run derives from (network, model, config) once.
class ProtocolContext {
 public:
  ProtocolContext(const Network& net, const ReceptionModel& model, ProtocolConfig config = {});

  const Network& network() const { return net_; }
  const ProtocolConfig& config() const { return config_; }
  const DilutionRule& dilution() const { return rule_; }
  // (I, k) selector over the network's ID domain, built on first use.
  const Ssf& selector() const;
  std::size_t selector_k() const;
  double granularity_bound() const;
  std::size_t n() const { return net_.n_bound(); }
  // ceil(log2 n) for the known bound n.
  std::uint32_t log_n() const;

 private:
  const Network& net_;
  ProtocolConfig config_;
  DilutionRule rule_;
  mutable std::optional<Ssf> ssf_;
};

// One round per dilution class (a, b) in [0, d-1]^2, class of G_x boxes mod d;
// exactly d^2 logical rounds. Returns every reception in schedule order.
std::vector<Reception> diluted_transmit(Runtime& rt, std::span<const StationIndex> senders, double x, long d,
                                        std::string_view tag);

// Sub-box label of a G_x box inside its G_2x parent: bottom-left 1,
// bottom-right 2, top-left 3, top-right 4.
int sub_box_label(const BoxCoord& b);

struct LeadIncreaseResult {
  std::vector<StationIndex> leaders;  // leaders of G_2x boxes, ascending
};

// leaders: at most one per G_x box (ProtocolViolation otherwise). Every
// listener records the smallest-label sender heard from its G_2x box as its
// leader (NodeState::known_leader); leaders that heard a smaller label step down.
LeadIncreaseResult lead_increase(Runtime& rt, const ProtocolContext& ctx, std::span<const StationIndex> leaders,
                                 std::span<const StationIndex> listeners, double x, std::string_view tag);

// Largest z / 2^i with z / 2^i <= 1 / (sqrt(2) g).
double initial_box_side(double z, double g);

struct LeaderMap {
  double side = 0.0;
  std::map<BoxKey, StationId> leader;
};

// Leaders of G_z boxes among V. Requires g >= the granularity of V; throws
// InvalidInput naming two stations sharing an initial box otherwise.
LeaderMap gran_leader_election(Runtime& rt, const ProtocolContext& ctx, std::span<const StationIndex> V, double g,
                               double z, std::string_view tag = "gran");

// Rounds gran_leader_election consumes (independent of V).
std::uint64_t gran_election_rounds(const ProtocolContext& ctx, double g, double z);

struct GenElectionReport {
  std::uint32_t levels = 0;  // L + 1 elimination levels, L = ceil(log2 n)
  // counts[l][box] = candidates of the box at the start of level l+1; the last
  // entry holds the count after the final level.
  std::vector<std::map<BoxKey, std::size_t>> counts;
  struct Pair {
    std::uint32_t level = 0;
    StationId survivor = 0;
    StationId partner = 0;
  };
  std::vector<Pair> pairs;
  std::size_t leftover = 0;  // candidates never eliminated (Literal rule only)
};

LeaderMap gen_leader_election(Runtime& rt, const ProtocolContext& ctx, std::span<const StationIndex> V, double z,
                              GenElectionReport* report = nullptr, std::string_view tag = "gen");

std::uint64_t gen_election_rounds(const ProtocolContext& ctx, double z);

// Problems with a finished election: a nonempty G_z box without exactly one
// leader, or a member whose recorded leader differs. Empty when sound.
std::vector<std::string> check_leader_map(const Network& net, const std::vector<NodeState>& nodes,
                                          std::span<const StationIndex> V, const LeaderMap& map);
std::vector<std::string> check_leader_map(const Runtime& rt, std::span<const StationIndex> V, const LeaderMap& map);

// Halving check: count at level l+1 at most half of the count at level l in
// every box, and no station in two pairs of the same level.
std::vector<std::string> check_halving(const GenElectionReport& report);

// Omniscient leader map from node states (is_leader among V, keyed by G_side box).
LeaderMap collect_leaders(const Runtime& rt, std::span<const StationIndex> V, double side);

}  // namespace sinrcast
