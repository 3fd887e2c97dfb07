#include "sinrcast/election.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "sinrcast/errors.hpp"

namespace sinrcast {

namespace {

const double kSqrt2 = std::sqrt(2.0);

BoxKey box_key(const Runtime& rt, StationIndex v, double side) { return key(box_of(rt.network().position(v), side)); }

// Stations sorted ascending; throws on out-of-range indices.
std::vector<StationIndex> sorted_set(const Runtime& rt, std::span<const StationIndex> v) {
  std::vector<StationIndex> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (!out.empty() && out.back() >= rt.network().size()) throw InvalidArgument("station index out of range");
  return out;
}

}  // namespace

PairingRule parse_pairing(std::string_view name) {
  if (name == "matching") return PairingRule::Matching;
  if (name == "literal") return PairingRule::Literal;
  throw InvalidArgument("unknown pairing rule '" + std::string(name) + "'");
}

std::string_view to_string(PairingRule r) { return r == PairingRule::Literal ? "literal" : "matching"; }

ProtocolContext::ProtocolContext(const Network& net, const ReceptionModel& model, ProtocolConfig config)
    : net_(net), config_(config),
      rule_(net.params(), net.n_bound(), config.dilution,
            config.margin > 0.0 ? config.margin
                                : (model.kind == ModelKind::Disturbance ? 1.0 / (1.0 - net.params().eta) : 1.0)) {
  if (config_.selector_k && *config_.selector_k == 0) throw InvalidArgument("selector k must be positive");
  if (config_.granularity && !(*config_.granularity > 0.0)) throw InvalidArgument("granularity bound must be positive");
}

std::size_t ProtocolContext::selector_k() const {
  const std::size_t k = config_.selector_k.value_or(kDefaultSelectorK);
  return std::min<std::size_t>(k, static_cast<std::size_t>(net_.id_domain()));
}

const Ssf& ProtocolContext::selector() const {
  if (!ssf_) ssf_ = build_ssf(net_.id_domain(), selector_k());
  return *ssf_;
}

double ProtocolContext::granularity_bound() const { return config_.granularity.value_or(granularity(net_)); }

std::uint32_t ProtocolContext::log_n() const {
  std::uint32_t bits = 0;
  while ((std::uint64_t{1} << bits) < n()) ++bits;
  return bits;
}

std::vector<Reception> diluted_transmit(Runtime& rt, std::span<const StationIndex> senders, double x, long d,
                                        std::string_view tag) {
  if (d < 1) throw InvalidArgument("diluted_transmit: d must be >= 1");
  if (!(x > 0.0)) throw InvalidArgument("diluted_transmit: box side must be positive");
  const auto classes = static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d);
  std::vector<Reception> out;
  if (senders.empty()) {
    rt.idle(classes, tag);
    return out;
  }
  std::map<std::uint64_t, std::vector<StationIndex>> groups;
  for (StationIndex v : senders) {
    const auto [a, b] = dilution_class(box_of(rt.network().position(v), x), d);
    groups[static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(b)].push_back(v);
  }
  std::uint64_t cursor = 0;
  for (auto& [cls, group] : groups) {
    rt.idle(cls - cursor, tag);
    std::sort(group.begin(), group.end());
    const auto& rx = rt.exchange(group, tag);
    out.insert(out.end(), rx.begin(), rx.end());
    cursor = cls + 1;
  }
  rt.idle(classes - cursor, tag);
  return out;
}

int sub_box_label(const BoxCoord& b) {
  return 1 + static_cast<int>(floor_mod(b.i, 2)) + 2 * static_cast<int>(floor_mod(b.j, 2));
}

LeadIncreaseResult lead_increase(Runtime& rt, const ProtocolContext& ctx, std::span<const StationIndex> leaders,
                                 std::span<const StationIndex> listeners, double x, std::string_view tag) {
  const Network& net = rt.network();
  const auto A = sorted_set(rt, leaders);
  const auto V = sorted_set(rt, listeners);

  std::unordered_map<BoxKey, StationIndex, BoxKeyHash> owner;
  std::vector<std::vector<StationIndex>> by_label(5);
  std::vector<int> label(net.size(), 0);
  for (StationIndex a : A) {
    const BoxCoord b = box_of(net.position(a), x);
    auto [it, fresh] = owner.emplace(key(b), a);
    if (!fresh) {
      std::ostringstream os;
      os << "stations " << net.id(it->second) << " and " << net.id(a) << " both lead box (" << b.i << ", " << b.j
         << ") of side " << x;
      throw ProtocolViolation(os.str());
    }
    label[a] = sub_box_label(b);
    by_label[static_cast<std::size_t>(label[a])].push_back(a);
  }

  std::vector<char> listening(net.size(), 0);
  for (StationIndex v : V) listening[v] = 1;
  // best[v] = (label, sender) of the smallest-label leader heard in v's G_2x box.
  std::vector<std::pair<int, StationIndex>> best(net.size(), {5, 0});
  for (StationIndex a : A) best[a] = {label[a], a};

  const double lambda = 1.0 - 2.0 * kSqrt2 * x;
  const long d = ctx.dilution().lead_increase(x, lambda);
  for (int l = 1; l <= 4; ++l) {
    const auto rx = diluted_transmit(rt, by_label[static_cast<std::size_t>(l)], x, d, tag);
    for (const auto& r : rx) {
      if (!listening[r.receiver]) continue;
      if (box_key(rt, r.receiver, 2 * x) != box_key(rt, r.sender, 2 * x)) continue;
      if (label[r.sender] < best[r.receiver].first) best[r.receiver] = {label[r.sender], r.sender};
    }
  }

  LeadIncreaseResult result;
  for (StationIndex v : V) {
    auto& node = rt.node(v);
    if (best[v].first <= 4) {
      node.known_leader = net.id(best[v].second);
    } else {
      node.known_leader.reset();
    }
  }
  for (StationIndex a : A) {
    auto& node = rt.node(a);
    node.is_leader = best[a].second == a;
    if (node.is_leader) result.leaders.push_back(a);
  }
  return result;
}

double initial_box_side(double z, double g) {
  if (!(g > 0.0) || !std::isfinite(g)) throw InvalidArgument("granularity bound must be positive and finite");
  if (!(z > 0.0)) throw InvalidArgument("box side z must be positive");
  const double bound = 1.0 / (kSqrt2 * g);
  double x = z;
  while (x > bound) x /= 2.0;
  return x;
}

LeaderMap gran_leader_election(Runtime& rt, const ProtocolContext& ctx, std::span<const StationIndex> V, double g,
                               double z, std::string_view tag) {
  if (!(z < 1.0 / kSqrt2)) throw InvalidArgument("gran_leader_election: z must be below 1/sqrt(2)");
  const Network& net = rt.network();
  const auto members = sorted_set(rt, V);
  double x = initial_box_side(z, g);

  std::unordered_map<BoxKey, StationIndex, BoxKeyHash> first;
  for (StationIndex v : members) {
    const BoxCoord b = box_of(net.position(v), x);
    auto [it, fresh] = first.emplace(key(b), v);
    if (!fresh) {
      std::ostringstream os;
      os << "stations " << net.id(it->second) << " and " << net.id(v) << " share a box of side " << x
         << "; granularity exceeds the bound " << g;
      throw InvalidInput(os.str());
    }
  }
  for (StationIndex v : members) {
    auto& node = rt.node(v);
    node.is_leader = true;
    node.known_leader = node.id;
  }

  std::vector<StationIndex> leaders = members;
  while (2.0 * x <= z) {
    leaders = lead_increase(rt, ctx, leaders, members, x, tag).leaders;
    x *= 2.0;
  }
  return collect_leaders(rt, members, z);
}

std::uint64_t gran_election_rounds(const ProtocolContext& ctx, double g, double z) {
  double x = initial_box_side(z, g);
  std::uint64_t rounds = 0;
  while (2.0 * x <= z) {
    const auto d = static_cast<std::uint64_t>(ctx.dilution().lead_increase(x, 1.0 - 2.0 * kSqrt2 * x));
    rounds += 4 * d * d;
    x *= 2.0;
  }
  return rounds;
}

namespace {

// One execution of the selector by the stations of W. on_rx sees every
// reception of the execution.
template <typename F>
void run_selector(Runtime& rt, const Ssf& ssf, const std::vector<StationIndex>& W,
                  const std::vector<std::vector<std::size_t>>& schedule, std::string_view tag, F&& on_rx) {
  std::vector<std::pair<std::size_t, StationIndex>> events;
  for (StationIndex w : W)
    for (std::size_t r : schedule[w]) events.emplace_back(r, w);
  std::sort(events.begin(), events.end());
  std::uint64_t cursor = 0;
  std::vector<StationIndex> group;
  for (std::size_t e = 0; e < events.size();) {
    const std::size_t r = events[e].first;
    group.clear();
    while (e < events.size() && events[e].first == r) group.push_back(events[e++].second);
    rt.idle(r - cursor, tag);
    for (const auto& rec : rt.exchange(group, tag)) on_rx(rec);
    cursor = r + 1;
  }
  rt.idle(ssf.size() - cursor, tag);
}

}  // namespace

LeaderMap gen_leader_election(Runtime& rt, const ProtocolContext& ctx, std::span<const StationIndex> V, double z,
                              GenElectionReport* report, std::string_view tag) {
  const Network& net = rt.network();
  const double lambda = 1.0 - kSqrt2 * z;
  if (!(lambda > 0.0)) throw InvalidArgument("gen_leader_election: z must be below 1/sqrt(2)");
  const auto members = sorted_set(rt, V);
  const std::uint32_t L = ctx.log_n();
  const Ssf& ssf = ctx.selector();

  GenElectionReport local;
  GenElectionReport& rep = report ? *report : local;
  rep = GenElectionReport{};
  rep.levels = L + 1;

  std::vector<BoxKey> box(net.size());
  std::vector<std::vector<std::size_t>> schedule(net.size());
  for (StationIndex v : members) {
    rt.node(v).reset_election();
    rt.node(v).cand = true;
    box[v] = box_key(rt, v, z);
    schedule[v] = ssf.rounds_of(net.id(v));
  }

  auto count_candidates = [&] {
    std::map<BoxKey, std::size_t> counts;
    for (StationIndex v : members)
      if (rt.node(v).cand) ++counts[box[v]];
    return counts;
  };

  std::vector<char> in_w(net.size(), 0);
  // X_u as learned by a listener during the second execution.
  std::vector<std::unordered_map<StationId, std::vector<StationId>>> learned(net.size());
  for (std::uint32_t level = 1; level <= L + 1; ++level) {
    rep.counts.push_back(count_candidates());
    for (std::int64_t j = 0; j < 2; ++j) {
      for (std::int64_t k = 0; k < 2; ++k) {
        std::vector<StationIndex> W;
        for (StationIndex v : members) {
          if (rt.node(v).cand && floor_mod(box[v].i, 2) == j && floor_mod(box[v].j, 2) == k) W.push_back(v);
        }
        for (StationIndex w : W) {
          in_w[w] = 1;
          rt.node(w).heard_box.clear();
          learned[w].clear();
        }
        run_selector(rt, ssf, W, schedule, tag, [&](const Reception& r) {
          if (in_w[r.receiver] && box[r.receiver] == box[r.sender])
            rt.node(r.receiver).heard_box.push_back(net.id(r.sender));
        });
        for (StationIndex w : W) {
          auto& X = rt.node(w).heard_box;
          std::sort(X.begin(), X.end());
          X.erase(std::unique(X.begin(), X.end()), X.end());
          if (X.size() > ctx.n()) throw ProtocolViolation("message payload exceeds n station IDs");
        }
        run_selector(rt, ssf, W, schedule, tag, [&](const Reception& r) {
          if (in_w[r.receiver] && box[r.receiver] == box[r.sender])
            learned[r.receiver][net.id(r.sender)] = rt.node(r.sender).heard_box;
        });

        std::vector<StationIndex> eliminated;
        for (StationIndex v : W) {
          const auto& X = rt.node(v).heard_box;
          bool survive = false;
          StationId partner = 0;
          if (!X.empty()) {
            partner = X.front();
            auto it = learned[v].find(partner);
            if (it != learned[v].end()) {
              StationId m = partner;
              if (!it->second.empty()) m = std::min(m, it->second.front());
              const StationId me = net.id(v);
              survive = ctx.config().pairing == PairingRule::Matching ? me == m : me <= m;
            }
          }
          if (survive) {
            rep.pairs.push_back({level, net.id(v), partner});
          } else {
            eliminated.push_back(v);
          }
        }
        for (StationIndex v : eliminated) {
          rt.node(v).cand = false;
          rt.node(v).ph = level;
        }
        for (StationIndex w : W) in_w[w] = 0;
      }
    }
  }
  rep.counts.push_back(count_candidates());
  for (StationIndex v : members) {
    if (rt.node(v).cand) {
      ++rep.leftover;
      rt.node(v).cand = false;
      rt.node(v).ph = L + 1;
    }
  }

  // Selection: highest elimination level first.
  std::vector<char> member(net.size(), 0);
  for (StationIndex v : members) member[v] = 1;
  const double g = static_cast<double>(ctx.n()) / z;
  const long d_sel = ctx.dilution().selection(z, lambda);
  for (std::uint32_t level = L + 1; level >= 1; --level) {
    std::vector<StationIndex> A;
    for (StationIndex v : members)
      if (rt.node(v).ph == level && rt.node(v).sel == SelState::Active) A.push_back(v);
    gran_leader_election(rt, ctx, A, g, z, tag);
    std::vector<StationIndex> fresh;
    for (StationIndex v : A) {
      if (rt.node(v).is_leader) {
        rt.node(v).sel = SelState::Leader;
        rt.node(v).known_leader = net.id(v);
        fresh.push_back(v);
      }
    }
    for (const auto& r : diluted_transmit(rt, fresh, z, d_sel, tag)) {
      auto& node = rt.node(r.receiver);
      if (!member[r.receiver] || node.sel != SelState::Active || box[r.receiver] != box[r.sender]) continue;
      node.sel = SelState::Passive;
      node.known_leader = net.id(r.sender);
    }
  }
  for (StationIndex v : members) rt.node(v).is_leader = rt.node(v).sel == SelState::Leader;
  return collect_leaders(rt, members, z);
}

std::uint64_t gen_election_rounds(const ProtocolContext& ctx, double z) {
  const std::uint64_t levels = ctx.log_n() + 1;
  const auto d_sel = static_cast<std::uint64_t>(ctx.dilution().selection(z, 1.0 - kSqrt2 * z));
  const double g = static_cast<double>(ctx.n()) / z;
  return levels * 8 * ctx.selector().size() + levels * (gran_election_rounds(ctx, g, z) + d_sel * d_sel);
}

LeaderMap collect_leaders(const Runtime& rt, std::span<const StationIndex> V, double side) {
  LeaderMap map;
  map.side = side;
  for (StationIndex v : V) {
    if (!rt.nodes()[v].is_leader) continue;
    const BoxKey b = box_key(rt, v, side);
    auto [it, fresh] = map.leader.emplace(b, rt.nodes()[v].id);
    if (!fresh) it->second = std::min(it->second, rt.nodes()[v].id);
  }
  return map;
}

std::vector<std::string> check_leader_map(const Network& net, const std::vector<NodeState>& nodes,
                                          std::span<const StationIndex> V, const LeaderMap& map) {
  std::vector<std::string> problems;
  std::map<BoxKey, std::vector<StationIndex>> boxes;
  for (StationIndex v : V) boxes[key(box_of(net.position(v), map.side))].push_back(v);
  for (const auto& [b, group] : boxes) {
    std::vector<StationId> leaders;
    for (StationIndex v : group)
      if (nodes[v].is_leader) leaders.push_back(nodes[v].id);
    std::ostringstream where;
    where << "box (" << b.i << ", " << b.j << ")";
    if (leaders.size() != 1) {
      std::ostringstream os;
      os << where.str() << " has " << leaders.size() << " leaders";
      problems.push_back(os.str());
      continue;
    }
    auto it = map.leader.find(b);
    if (it == map.leader.end() || it->second != leaders.front()) {
      problems.push_back(where.str() + ": leader map disagrees with node states");
    }
    for (StationIndex v : group) {
      const auto& known = nodes[v].known_leader;
      if (!known || *known != leaders.front()) {
        std::ostringstream os;
        os << where.str() << ": station " << nodes[v].id << " believes leader is "
           << (known ? std::to_string(*known) : std::string("unknown")) << ", actual " << leaders.front();
        problems.push_back(os.str());
      }
    }
  }
  return problems;
}

std::vector<std::string> check_leader_map(const Runtime& rt, std::span<const StationIndex> V, const LeaderMap& map) {
  return check_leader_map(rt.network(), rt.nodes(), V, map);
}

std::vector<std::string> check_halving(const GenElectionReport& report) {
  std::vector<std::string> problems;
  for (std::size_t l = 0; l + 1 < report.counts.size(); ++l) {
    for (const auto& [b, before] : report.counts[l]) {
      auto it = report.counts[l + 1].find(b);
      const std::size_t after = it == report.counts[l + 1].end() ? 0 : it->second;
      if (2 * after > before) {
        std::ostringstream os;
        os << "box (" << b.i << ", " << b.j << ") level " << l << ": " << before << " -> " << after;
        problems.push_back(os.str());
      }
    }
  }
  std::map<std::pair<std::uint32_t, StationId>, int> seen;
  for (const auto& p : report.pairs) {
    if (++seen[{p.level, p.survivor}] > 1 || ++seen[{p.level, p.partner}] > 1) {
      std::ostringstream os;
      os << "level " << p.level << " pair (" << p.survivor << ", " << p.partner << ") reuses a station";
      problems.push_back(os.str());
    }
  }
  return problems;
}

}  // namespace sinrcast
