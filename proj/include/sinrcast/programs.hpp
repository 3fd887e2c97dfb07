#pragma once

// Node programs as runnable units: run_protocol owns the runtime, applies the
// round budget and returns the final states; phase_wrap stretches every
// logical round of a program into tau physical rounds.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sinrcast/broadcast.hpp"

namespace sinrcast {

class Program {
 public:
  virtual ~Program() = default;
  virtual std::string name() const = 0;
  // Prepares node states before the first round.
  virtual void initialize(Runtime& rt) = 0;
  // Runs until every station has finished.
  virtual void execute(Runtime& rt) = 0;
};

struct RunResult {
  std::string program;
  bool timed_out = false;
  std::uint64_t rounds = 0;
  std::uint64_t logical_rounds = 0;
  std::vector<NodeState> final_states;
};

// Throws InvalidArgument for round_budget == 0.
RunResult run_protocol(Program& program, const Network& net, const ReceptionModel& model, std::uint64_t round_budget,
                       TraceSink* sink = nullptr);

// tau == 0 throws InvalidArgument.
std::unique_ptr<Program> phase_wrap(std::unique_ptr<Program> inner, std::uint64_t tau);

// Never transmits; runs until the budget is spent.
class SilentProgram final : public Program {
 public:
  std::string name() const override { return "silent"; }
  void initialize(Runtime&) override {}
  void execute(Runtime& rt) override;
};

// Every station transmits once in a d-diluted schedule over G_x; d defaults to
// the configured rule.
class DilutedTransmitProgram final : public Program {
 public:
  DilutedTransmitProgram(double x, std::optional<long> d = std::nullopt, ProtocolConfig config = {})
      : x_(x), d_(d), config_(config) {}
  std::string name() const override { return "diluted-transmit"; }
  void initialize(Runtime& rt) override { rt.wake_all(); }
  void execute(Runtime& rt) override;
  const std::vector<Reception>& receptions() const { return rx_; }

 private:
  double x_;
  std::optional<long> d_;
  ProtocolConfig config_;
  std::vector<Reception> rx_;
};

// One LeadIncrease step from G_x to G_2x; the smallest ID of each G_x box is
// its starting leader and every station listens.
class LeadIncreaseProgram final : public Program {
 public:
  LeadIncreaseProgram(double x, ProtocolConfig config = {}) : x_(x), config_(config) {}
  std::string name() const override { return "lead-increase"; }
  void initialize(Runtime& rt) override;
  void execute(Runtime& rt) override;

 private:
  double x_;
  ProtocolConfig config_;
  std::vector<StationIndex> leaders_;
};

class ElectionProgram final : public Program {
 public:
  // z defaults to the stage box side eps / (2 sqrt 2).
  ElectionProgram(Variant variant, std::optional<double> z = std::nullopt, ProtocolConfig config = {})
      : variant_(variant), z_(z), config_(config) {}
  std::string name() const override { return variant_ == Variant::Gen ? "gen-election" : "gran-election"; }
  void initialize(Runtime& rt) override { rt.wake_all(); }
  void execute(Runtime& rt) override;
  const LeaderMap& leaders() const { return map_; }
  const GenElectionReport& report() const { return report_; }
  // Leader-map and halving problems, checked against final node states.
  std::vector<std::string> problems(const Network& net, const std::vector<NodeState>& nodes) const;

 private:
  Variant variant_;
  std::optional<double> z_;
  ProtocolConfig config_;
  LeaderMap map_;
  GenElectionReport report_;
};

class BroadcastProgram final : public Program {
 public:
  BroadcastProgram(Variant variant, StationId source, ProtocolConfig config = {}, BroadcastOptions options = {})
      : variant_(variant), source_(source), config_(config), options_(options) {}
  std::string name() const override { return variant_ == Variant::Gen ? "det-gen-broadcast" : "det-gran-broadcast"; }
  void initialize(Runtime&) override {}
  void execute(Runtime& rt) override;
  const BroadcastResult& result() const { return result_; }

 private:
  Variant variant_;
  StationId source_;
  ProtocolConfig config_;
  BroadcastOptions options_;
  BroadcastResult result_;
};

}  // namespace sinrcast
