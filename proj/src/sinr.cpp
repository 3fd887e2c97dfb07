#include "sinrcast/sinr.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "sinrcast/errors.hpp"

namespace sinrcast {

SinrParams SinrParams::make(double alpha, double beta, double noise, double eps, double eta, double zeta) {
  SinrParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.noise = noise;
  p.power = beta * noise;
  p.eps = eps;
  p.eta = eta;
  p.zeta = zeta;
  return p;
}

void SinrParams::validate() const {
  if (!(alpha > 2.0) || !std::isfinite(alpha)) throw UnsupportedParameters("path loss alpha must exceed 2");
  if (!(beta >= 1.0) || !std::isfinite(beta)) throw InvalidArgument("threshold beta must be >= 1");
  if (!(noise >= 1.0) || !std::isfinite(noise)) throw InvalidArgument("ambient noise must be >= 1");
  if (std::abs(power - beta * noise) > 1e-12 * beta * noise)
    throw InvalidArgument("power must equal beta * noise (range normalised to 1)");
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidArgument("eps must lie in (0, 1/2)");
  if (!(eta >= 0.0 && eta < 1.0)) throw InvalidArgument("eta must lie in [0, 1)");
  if (!(zeta >= 0.0 && zeta < 1.0)) throw InvalidArgument("zeta must lie in [0, 1)");
}

Network::Network(std::vector<Station> stations, StationId id_domain, SinrParams params,
                 std::optional<std::size_t> n_bound)
    : stations_(std::move(stations)), id_domain_(id_domain), params_(params),
      n_bound_(n_bound.value_or(stations_.size())) {
  params_.validate();
  if (id_domain_ == 0) throw InvalidNetwork("ID domain must be positive");
  if (stations_.size() > n_bound_) throw InvalidNetwork("more stations than the declared bound n");
  std::sort(stations_.begin(), stations_.end(), [](const Station& a, const Station& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < stations_.size(); ++i) {
    const auto& s = stations_[i];
    if (s.id < 1 || s.id > id_domain_) {
      std::ostringstream os;
      os << "station ID " << s.id << " outside [1, " << id_domain_ << "]";
      throw InvalidNetwork(os.str());
    }
    if (i > 0 && stations_[i - 1].id == s.id) {
      std::ostringstream os;
      os << "duplicate station ID " << s.id;
      throw InvalidNetwork(os.str());
    }
    if (!std::isfinite(s.pos.x) || !std::isfinite(s.pos.y)) throw InvalidNetwork("non-finite station position");
  }
  struct PointHash {
    std::size_t operator()(const Point& p) const noexcept {
      return std::hash<double>{}(p.x) * 31 + std::hash<double>{}(p.y);
    }
  };
  std::unordered_set<Point, PointHash> seen;
  for (const auto& s : stations_) {
    if (!seen.insert(s.pos).second) {
      std::ostringstream os;
      os << "station " << s.id << " shares its position with another station";
      throw InvalidNetwork(os.str());
    }
  }
}

std::optional<StationIndex> Network::index_of(StationId id) const {
  auto it = std::lower_bound(stations_.begin(), stations_.end(), id,
                             [](const Station& s, StationId v) { return s.id < v; });
  if (it == stations_.end() || it->id != id) return std::nullopt;
  return static_cast<StationIndex>(it - stations_.begin());
}

StationIndex Network::require_index(StationId id) const {
  auto idx = index_of(id);
  if (!idx) {
    std::ostringstream os;
    os << "unknown station ID " << id;
    throw InvalidArgument(os.str());
  }
  return *idx;
}

std::vector<Point> Network::positions() const {
  std::vector<Point> out;
  out.reserve(stations_.size());
  for (const auto& s : stations_) out.push_back(s.pos);
  return out;
}

double granularity(const Network& net) {
  const auto pts = net.positions();
  return granularity(std::span<const Point>(pts));
}

namespace {

inline double received_power(const SinrParams& p, Point from, Point to) {
  return p.power * std::pow(distance(from, to), -p.alpha);
}

double sinr_impl(StationIndex v, Point u, std::span<const StationIndex> transmitters, const Network& net) {
  const auto& p = net.params();
  double interference = 0.0;
  for (StationIndex w : transmitters) {
    if (w == v) continue;
    interference += received_power(p, net.position(w), u);
  }
  return received_power(p, net.position(v), u) / (p.noise + interference);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

double sinr(StationIndex v, StationIndex u, std::span<const StationIndex> transmitters, const Network& net) {
  if (v >= net.size() || u >= net.size()) throw InvalidArgument("sinr: station index out of range");
  if (u == v) throw InvalidArgument("sinr: sender and receiver coincide");
  if (std::find(transmitters.begin(), transmitters.end(), v) == transmitters.end())
    throw InvalidArgument("sinr: sender is not transmitting");
  if (std::find(transmitters.begin(), transmitters.end(), u) != transmitters.end()) {
    std::ostringstream os;
    os << "sinr: receiver " << net.id(u) << " is transmitting in the same round";
    throw UndefinedReceiver(os.str());
  }
  return sinr_impl(v, net.position(u), transmitters, net);
}

double sinr_at(StationIndex v, Point u, std::span<const StationIndex> transmitters, const Network& net) {
  if (std::find(transmitters.begin(), transmitters.end(), v) == transmitters.end())
    throw InvalidArgument("sinr_at: sender is not transmitting");
  return sinr_impl(v, u, transmitters, net);
}

AdversarialTailDisturbance::AdversarialTailDisturbance(double eta, double zeta) : eta_(eta), zeta_(zeta) {
  if (!(eta >= 0.0 && eta < 1.0) || !(zeta >= 0.0 && zeta < 1.0))
    throw InvalidArgument("disturbance parameters must lie in [0, 1)");
}

double AdversarialTailDisturbance::factor(double u01) const {
  if (u01 < zeta_) return (1.0 - eta_) * (1.0 - u01 / zeta_);
  const double v = (u01 - zeta_) / (1.0 - zeta_);
  return 1.0 - eta_ + 2.0 * eta_ * v;
}

ModelKind parse_model(std::string_view name) {
  if (name == "classical") return ModelKind::Classical;
  if (name == "opportunistic") return ModelKind::Opportunistic;
  if (name == "disturbance") return ModelKind::Disturbance;
  throw InvalidArgument("unknown reception model '" + std::string(name) + "'");
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Classical: return "classical";
    case ModelKind::Opportunistic: return "opportunistic";
    case ModelKind::Disturbance: return "disturbance";
  }
  return "?";
}

ReceptionModel ReceptionModel::classical() { return {}; }

ReceptionModel ReceptionModel::opportunistic() {
  ReceptionModel m;
  m.kind = ModelKind::Opportunistic;
  return m;
}

ReceptionModel ReceptionModel::disturbance_model(const SinrParams& params, std::uint64_t seed) {
  ReceptionModel m;
  m.kind = ModelKind::Disturbance;
  m.seed = seed;
  m.accept_radius = disturbance_radius(params);
  m.disturbance = std::make_shared<AdversarialTailDisturbance>(params.eta, params.zeta);
  return m;
}

double disturbance_radius(const SinrParams& params) { return std::pow(1.0 - params.eta, 1.0 / params.alpha); }

double disturbance_draw(std::uint64_t seed, std::uint64_t round, StationId sender, StationId receiver) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ round);
  h = splitmix64(h ^ sender);
  h = splitmix64(h ^ (receiver * 0xD6E8FEB86659FD93ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<Reception> resolve_round(std::span<const StationIndex> transmitters, const Network& net,
                                     const ReceptionModel& model, std::uint64_t round_index) {
  std::vector<Reception> out;
  if (transmitters.empty()) return out;
  const auto& p = net.params();
  const std::size_t n = net.size();

  std::vector<char> transmitting(n, 0);
  for (std::size_t k = 0; k < transmitters.size(); ++k) {
    const StationIndex t = transmitters[k];
    if (t >= n) throw InvalidArgument("resolve_round: transmitter index out of range");
    if (k > 0 && transmitters[k - 1] >= t) throw InvalidArgument("resolve_round: transmitters must be sorted and unique");
    transmitting[t] = 1;
  }

  const bool disturbed = model.kind == ModelKind::Disturbance;
  if (disturbed && !model.disturbance) throw InvalidArgument("disturbance model without a distribution");
  const double max_factor = disturbed ? model.disturbance->max_factor() : 1.0;
  // Beyond this radius even a lone (best-case disturbed) transmission fails.
  const double reach = std::pow(max_factor, 1.0 / p.alpha);
  const double reach_sq = reach * reach * (1.0 + 1e-9);
  const double accept = model.accept_radius.value_or(std::numeric_limits<double>::infinity());

  std::vector<double> terms(transmitters.size());
  for (StationIndex u = 0; u < n; ++u) {
    if (transmitting[u]) continue;
    const Point pu = net.position(u);
    bool in_reach = false;
    for (StationIndex t : transmitters) {
      const Point pt = net.position(t);
      const double dx = pt.x - pu.x, dy = pt.y - pu.y;
      if (dx * dx + dy * dy <= reach_sq) {
        in_reach = true;
        break;
      }
    }
    if (!in_reach) continue;

    std::size_t best = 0;
    double total = 0.0;
    for (std::size_t k = 0; k < transmitters.size(); ++k) {
      terms[k] = received_power(p, net.position(transmitters[k]), pu);
      total += terms[k];
      if (terms[k] > terms[best]) best = k;
    }

    if (!disturbed) {
      const double s = sinr_impl(transmitters[best], pu, transmitters, net);
      if (s < p.beta) continue;
      // With beta >= 1 a second sender meeting the threshold is impossible.
      if (transmitters.size() > 1) {
        std::size_t second = best == 0 ? 1 : 0;
        for (std::size_t k = 0; k < transmitters.size(); ++k)
          if (k != best && terms[k] > terms[second]) second = k;
        if (sinr_impl(transmitters[second], pu, transmitters, net) >= p.beta)
          throw std::logic_error("two senders exceed the SINR threshold at one receiver");
      }
      if (distance(net.position(transmitters[best]), pu) > accept) continue;
      out.push_back({u, transmitters[best]});
      continue;
    }

    // Disturbed: every sender whose scaled SINR can reach beta is a candidate;
    // the receiver decodes the strongest disturbed signal among those passing.
    double best_value = 0.0;
    std::optional<StationIndex> chosen;
    for (std::size_t k = 0; k < transmitters.size(); ++k) {
      const double rough = terms[k] / (p.noise + std::max(0.0, total - terms[k]));
      if (rough * max_factor * (1.0 + 1e-9) < p.beta) continue;
      const StationIndex v = transmitters[k];
      const double exact = sinr_impl(v, pu, transmitters, net);
      const double f = model.disturbance->factor(disturbance_draw(model.seed, round_index, net.id(v), net.id(u)));
      const double value = exact * f;
      if (value < p.beta) continue;
      if (distance(net.position(v), pu) > accept) continue;
      if (!chosen || value > best_value) {
        chosen = v;
        best_value = value;
      }
    }
    if (chosen) out.push_back({u, *chosen});
  }
  return out;
}

CommGraph::CommGraph(const Network& net, double radius) : radius_(radius), adjacency_(net.size()) {
  for (StationIndex a = 0; a < net.size(); ++a) {
    for (StationIndex b = a + 1; b < net.size(); ++b) {
      if (distance(net.position(a), net.position(b)) <= radius) {
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
      }
    }
  }
}

bool CommGraph::has_edge(StationIndex a, StationIndex b) const {
  const auto& adj = adjacency_.at(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::size_t CommGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& adj : adjacency_) total += adj.size();
  return total / 2;
}

std::vector<std::optional<std::size_t>> CommGraph::bfs_layers(StationIndex source) const {
  std::vector<std::optional<std::size_t>> layer(adjacency_.size());
  if (source >= adjacency_.size()) throw InvalidArgument("bfs: source out of range");
  std::deque<StationIndex> queue{source};
  layer[source] = 0;
  while (!queue.empty()) {
    const StationIndex v = queue.front();
    queue.pop_front();
    for (StationIndex w : adjacency_[v]) {
      if (layer[w]) continue;
      layer[w] = *layer[v] + 1;
      queue.push_back(w);
    }
  }
  return layer;
}

bool CommGraph::connected() const {
  if (adjacency_.empty()) return true;
  const auto layers = bfs_layers(0);
  return std::all_of(layers.begin(), layers.end(), [](const auto& l) { return l.has_value(); });
}

CommGraph comm_graph(const Network& net, std::optional<double> eps_override) {
  return CommGraph(net, 1.0 - eps_override.value_or(net.params().eps));
}

std::optional<std::size_t> eccentricity(const CommGraph& g, const Network& net, StationId source) {
  const StationIndex s = net.require_index(source);
  std::size_t ecc = 0;
  for (const auto& l : g.bfs_layers(s)) {
    if (!l) return std::nullopt;
    ecc = std::max(ecc, *l);
  }
  return ecc;
}

}  // namespace sinrcast
