#pragma once

// Synchronous round engine. Protocol code drives it one logical round at a
// time; a logical round is a phase of tau physical rounds (tau = 1 unless a
// program is phase-wrapped). The engine enforces the wake-up rule, keeps the
// global round counter and feeds every round to the trace sink.

#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sinrcast/sinr.hpp"
#include "sinrcast/trace.hpp"

namespace sinrcast {

enum class BcastState { Asleep, Active, Passive };
enum class SelState { Active, Leader, Passive };

std::string_view to_string(BcastState s);

struct NodeState {
  StationId id = 0;
  Point pos;

  BcastState bcast = BcastState::Asleep;
  bool informed = false;
  std::optional<std::uint64_t> informed_round;  // physical round of first reception, 0 for the source

  // Leader election scratch.
  bool cand = false;
  std::uint32_t ph = 0;
  std::vector<StationId> heard_box;  // X_v
  SelState sel = SelState::Active;
  bool is_leader = false;
  std::optional<StationId> known_leader;

  void reset_election() {
    cand = false;
    ph = 0;
    heard_box.clear();
    sel = SelState::Active;
    is_leader = false;
    known_leader.reset();
  }
};

// Raised when the physical round budget runs out; run_protocol turns it into
// a timeout result.
class BudgetExhausted : public std::exception {
 public:
  const char* what() const noexcept override { return "round budget exhausted"; }
};

struct RuntimeOptions {
  std::uint64_t round_budget = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t tau = 1;
};

class Runtime {
 public:
  Runtime(const Network& net, ReceptionModel model, TraceSink* sink = nullptr, RuntimeOptions options = {});
  Runtime(const Runtime&) = delete;
  Runtime& operator=(const Runtime&) = delete;

  const Network& network() const { return net_; }
  const ReceptionModel& model() const { return model_; }
  std::vector<NodeState>& nodes() { return nodes_; }
  const std::vector<NodeState>& nodes() const { return nodes_; }
  NodeState& node(StationIndex i) { return nodes_.at(i); }

  std::uint64_t round() const { return round_; }  // physical rounds elapsed
  std::uint64_t logical_rounds() const { return logical_; }
  std::uint64_t budget() const { return options_.round_budget; }
  std::uint64_t tau() const { return options_.tau; }
  void set_tau(std::uint64_t tau);

  // Marks a station informed before round 1 (the source).
  void inform_initially(StationIndex i);
  // Makes every station awake and informed (leader election run standalone).
  void wake_all();

  // One logical round with the given transmitters (ascending, unique). Returns
  // the receptions unioned over the phase, sorted by (receiver, sender).
  // Throws ProtocolViolation naming an asleep or uninformed transmitter.
  const std::vector<Reception>& exchange(std::span<const StationIndex> transmitters, std::string_view tag);

  // Logical rounds in which nobody transmits.
  void idle(std::uint64_t count, std::string_view tag);

  // Emits any pending silent span to the sink.
  void flush();

 private:
  void check_budget(std::uint64_t physical);

  const Network& net_;
  ReceptionModel model_;
  NullSink null_;
  TraceSink* sink_;
  RuntimeOptions options_;
  std::vector<NodeState> nodes_;
  std::uint64_t round_ = 0;
  std::uint64_t logical_ = 0;
  std::vector<Reception> phase_rx_;
  std::vector<StationIndex> tx_;

  std::string pending_tag_;
  std::uint64_t pending_first_ = 0;
  std::uint64_t pending_count_ = 0;
};

// ceil(3 ln(max(n, 2)) / ln(1/zeta)); 1 when zeta is 0.
std::uint64_t default_tau(std::size_t n, double zeta);

}  // namespace sinrcast
