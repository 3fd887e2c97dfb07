#include "sinrcast/programs.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "sinrcast/errors.hpp"

namespace sinrcast {

namespace {

class PhaseWrapped final : public Program {
 public:
  PhaseWrapped(std::unique_ptr<Program> inner, std::uint64_t tau) : inner_(std::move(inner)), tau_(tau) {}
  std::string name() const override { return inner_->name() + "/tau=" + std::to_string(tau_); }
  void initialize(Runtime& rt) override {
    rt.set_tau(tau_);
    inner_->initialize(rt);
  }
  void execute(Runtime& rt) override { inner_->execute(rt); }

 private:
  std::unique_ptr<Program> inner_;
  std::uint64_t tau_;
};

std::vector<StationIndex> all_stations(const Runtime& rt) {
  std::vector<StationIndex> v(rt.network().size());
  for (StationIndex i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

}  // namespace

RunResult run_protocol(Program& program, const Network& net, const ReceptionModel& model, std::uint64_t round_budget,
                       TraceSink* sink) {
  if (round_budget == 0) throw InvalidArgument("round budget must be positive");
  Runtime rt(net, model, sink, RuntimeOptions{round_budget, 1});
  RunResult result;
  result.program = program.name();
  program.initialize(rt);
  try {
    program.execute(rt);
  } catch (const BudgetExhausted&) {
    result.timed_out = true;
  }
  rt.flush();
  result.rounds = rt.round();
  result.logical_rounds = rt.logical_rounds();
  result.final_states = rt.nodes();
  return result;
}

std::unique_ptr<Program> phase_wrap(std::unique_ptr<Program> inner, std::uint64_t tau) {
  if (tau == 0) throw InvalidArgument("phase length tau must be >= 1");
  if (!inner) throw InvalidArgument("phase_wrap: no program");
  return std::make_unique<PhaseWrapped>(std::move(inner), tau);
}

void SilentProgram::execute(Runtime& rt) {
  const std::uint64_t left = (rt.budget() - rt.round()) / rt.tau();
  rt.idle(left, "silent");
  // Whatever remains is shorter than one phase.
  rt.idle(1, "silent");
}

void DilutedTransmitProgram::execute(Runtime& rt) {
  const ProtocolContext ctx(rt.network(), rt.model(), config_);
  const long d = d_.value_or(ctx.dilution().diluted_transmit(x_));
  rx_ = diluted_transmit(rt, all_stations(rt), x_, d, "diluted");
}

void LeadIncreaseProgram::initialize(Runtime& rt) {
  rt.wake_all();
  std::unordered_map<BoxKey, StationIndex, BoxKeyHash> first;
  for (StationIndex i = 0; i < rt.network().size(); ++i) first.emplace(key(box_of(rt.network().position(i), x_)), i);
  leaders_.clear();
  for (const auto& [b, v] : first) leaders_.push_back(v);
  std::sort(leaders_.begin(), leaders_.end());
  for (auto& node : rt.nodes()) node.reset_election();
  for (StationIndex v : leaders_) {
    rt.node(v).is_leader = true;
    rt.node(v).known_leader = rt.node(v).id;
  }
}

void LeadIncreaseProgram::execute(Runtime& rt) {
  const ProtocolContext ctx(rt.network(), rt.model(), config_);
  lead_increase(rt, ctx, leaders_, all_stations(rt), x_, "lead-increase");
}

void ElectionProgram::execute(Runtime& rt) {
  const ProtocolContext ctx(rt.network(), rt.model(), config_);
  const double z = z_.value_or(StageParams::make(ctx).z);
  const auto V = all_stations(rt);
  if (variant_ == Variant::Gen) {
    map_ = gen_leader_election(rt, ctx, V, z, &report_);
  } else {
    map_ = gran_leader_election(rt, ctx, V, ctx.granularity_bound(), z);
  }
}

std::vector<std::string> ElectionProgram::problems(const Network& net, const std::vector<NodeState>& nodes) const {
  std::vector<StationIndex> V(net.size());
  for (StationIndex i = 0; i < V.size(); ++i) V[i] = i;
  auto out = check_leader_map(net, nodes, V, map_);
  if (variant_ == Variant::Gen)
    for (auto& p : check_halving(report_)) out.push_back(p);
  return out;
}

void BroadcastProgram::execute(Runtime& rt) {
  const ProtocolContext ctx(rt.network(), rt.model(), config_);
  result_ = BroadcastResult{};
  result_ = det_broadcast(rt, ctx, variant_, source_, options_);
}

}  // namespace sinrcast
