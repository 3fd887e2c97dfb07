#include "sinrcast/broadcast.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "sinrcast/errors.hpp"

namespace sinrcast {

Variant parse_variant(std::string_view name) {
  if (name == "gen") return Variant::Gen;
  if (name == "gran") return Variant::Gran;
  throw InvalidArgument("unknown variant '" + std::string(name) + "'");
}

std::string_view to_string(Variant v) { return v == Variant::Gen ? "gen" : "gran"; }

StageParams StageParams::make(const ProtocolContext& ctx) {
  const double eps = ctx.network().params().eps;
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidArgument("stage: eps must lie in (0, 1/2)");
  StageParams s;
  s.eps_prime = eps / 2.0;
  s.z = s.eps_prime / std::sqrt(2.0);
  s.lambda = 1.0 - std::sqrt(2.0) * s.z;
  s.box_side = stage_box_side(s.eps_prime);
  // Groups use gamma' = 1 - eps' so that same-group leaders sit at least
  // 1 - eps' apart on each axis.
  s.l = static_cast<long>(std::ceil((1.0 - s.eps_prime) / s.eps_prime * (1.0 - 1e-12)));
  s.d = ctx.dilution().stage(s.eps_prime);
  return s;
}

std::uint64_t stage_rounds(const ProtocolContext& ctx, Variant variant) {
  const StageParams s = StageParams::make(ctx);
  const std::uint64_t election =
      variant == Variant::Gen ? gen_election_rounds(ctx, s.z) : gran_election_rounds(ctx, ctx.granularity_bound(), s.z);
  const auto l = static_cast<std::uint64_t>(s.l);
  const auto d = static_cast<std::uint64_t>(s.d);
  return election + l * l * d * d;
}

StageReport stage_of_broadcast(Runtime& rt, const ProtocolContext& ctx, Variant variant,
                               const BroadcastOptions& options) {
  const Network& net = rt.network();
  const StageParams s = StageParams::make(ctx);
  StageReport report;

  std::vector<StationIndex> V;
  for (StationIndex i = 0; i < net.size(); ++i)
    if (rt.node(i).bcast == BcastState::Active) V.push_back(i);
  report.active = V.size();

  GenElectionReport gen_report;
  LeaderMap map = variant == Variant::Gen
                      ? gen_leader_election(rt, ctx, V, s.z, options.audit ? &gen_report : nullptr, "stage-gen")
                      : gran_leader_election(rt, ctx, V, ctx.granularity_bound(), s.z, "stage-gran");
  if (options.audit) {
    for (auto& p : check_leader_map(rt, V, map)) report.problems.push_back("election: " + p);
    if (variant == Variant::Gen)
      for (auto& p : check_halving(gen_report)) report.problems.push_back("halving: " + p);
  }

  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<StationIndex>> groups;
  for (StationIndex v : V) {
    if (!rt.node(v).is_leader) continue;
    ++report.leaders;
    groups[dilution_class(box_of(net.position(v), s.z), s.l)].push_back(v);
  }
  for (long a = 0; a < s.l; ++a) {
    for (long b = 0; b < s.l; ++b) {
      auto it = groups.find({a, b});
      static const std::vector<StationIndex> none;
      diluted_transmit(rt, it == groups.end() ? none : it->second, s.box_side, s.d, "stage-tx");
    }
  }

  if (options.audit) {
    const CommGraph g = comm_graph(net);
    for (StationIndex v : V) {
      for (StationIndex w : g.neighbours(v)) {
        if (!rt.node(w).informed) {
          std::ostringstream os;
          os << "stage: neighbour " << net.id(w) << " of active " << net.id(v) << " not informed";
          report.problems.push_back(os.str());
        }
      }
    }
  }

  for (auto& node : rt.nodes()) {
    if (node.bcast == BcastState::Active) {
      node.bcast = BcastState::Passive;
    } else if (node.bcast == BcastState::Asleep && node.informed) {
      node.bcast = BcastState::Active;
      ++report.newly_active;
    }
  }
  return report;
}

BroadcastResult det_broadcast(Runtime& rt, const ProtocolContext& ctx, Variant variant, StationId source,
                              const BroadcastOptions& options) {
  const Network& net = rt.network();
  const StationIndex s = net.require_index(source);
  if (!comm_graph(net).connected()) {
    std::ostringstream os;
    os << "communication graph at radius " << 1.0 - net.params().eps << " is disconnected";
    throw InadmissibleNetwork(os.str());
  }
  for (auto& node : rt.nodes()) {
    node.bcast = BcastState::Asleep;
    node.informed = false;
    node.informed_round.reset();
    node.reset_election();
  }
  rt.inform_initially(s);

  BroadcastResult result;
  const StationIndex src[] = {s};
  for (const auto& r : rt.exchange(src, "source")) rt.node(r.receiver).bcast = BcastState::Active;
  rt.node(s).bcast = BcastState::Passive;

  auto any_active = [&] {
    for (const auto& node : rt.nodes())
      if (node.bcast == BcastState::Active) return true;
    return false;
  };
  while (any_active()) {
    auto report = stage_of_broadcast(rt, ctx, variant, options);
    ++result.stages;
    for (auto& p : report.problems) {
      std::ostringstream os;
      os << "stage " << result.stages << ": " << p;
      result.problems.push_back(os.str());
    }
  }
  rt.flush();
  result.rounds = rt.round();
  result.logical_rounds = rt.logical_rounds();
  for (const auto& node : rt.nodes()) result.informed += node.informed ? 1 : 0;
  result.all_informed = result.informed == net.size();
  return result;
}

}  // namespace sinrcast
