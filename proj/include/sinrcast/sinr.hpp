#pragma once

// Physical layer: uniform-power SINR reception, the communication graph and
// eccentricity. Stations are stored in ascending ID order; a StationIndex is a
// position in that order, which is also the order interference is summed in.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sinrcast/geometry.hpp"

namespace sinrcast {

using StationId = std::uint64_t;
using StationIndex = std::size_t;

struct SinrParams {
  double alpha = 3.0;  // path loss, > 2
  double beta = 1.0;   // threshold, >= 1
  double noise = 1.0;  // ambient noise N, >= 1
  double power = 1.0;  // beta * noise so that the range r is 1
  double eps = 0.2;    // communication graph radius is 1 - eps
  double eta = 0.2;    // disturbance deviation
  double zeta = 0.1;   // disturbance tail probability

  // Builds a parameter set with power = beta * noise.
  static SinrParams make(double alpha, double beta, double noise, double eps, double eta = 0.2,
                         double zeta = 0.1);

  // Throws UnsupportedParameters / InvalidArgument when out of the model's range.
  void validate() const;
};

struct Station {
  StationId id = 0;
  Point pos;
};

class Network {
 public:
  // Sorts stations by ID. Throws InvalidNetwork on duplicate IDs or positions,
  // IDs outside [1, id_domain], or more stations than the declared bound n.
  Network(std::vector<Station> stations, StationId id_domain, SinrParams params,
          std::optional<std::size_t> n_bound = std::nullopt);

  std::size_t size() const { return stations_.size(); }
  const std::vector<Station>& stations() const { return stations_; }
  const Station& station(StationIndex i) const { return stations_[i]; }
  Point position(StationIndex i) const { return stations_[i].pos; }
  StationId id(StationIndex i) const { return stations_[i].id; }
  std::optional<StationIndex> index_of(StationId id) const;
  StationIndex require_index(StationId id) const;

  const SinrParams& params() const { return params_; }
  StationId id_domain() const { return id_domain_; }
  // Upper bound on the number of stations known to every station.
  std::size_t n_bound() const { return n_bound_; }

  std::vector<Point> positions() const;

 private:
  std::vector<Station> stations_;
  StationId id_domain_;
  SinrParams params_;
  std::size_t n_bound_;
};

double granularity(const Network& net);

// P d(v,u)^-a / (N + sum_{w in T \ {v}} P d(w,u)^-a), the sum taken
// in ascending ID order. transmitters must be sorted ascending.
double sinr(StationIndex v, StationIndex u, std::span<const StationIndex> transmitters, const Network& net);

// SINR at an arbitrary point (no station required there).
double sinr_at(StationIndex v, Point u, std::span<const StationIndex> transmitters, const Network& net);

// Pluggable multiplicative disturbance: maps a uniform draw in [0,1) to a
// factor. Implementations must only use the draw so results stay a pure
// function of (seed, round, sender, receiver).
class DisturbanceDistribution {
 public:
  virtual ~DisturbanceDistribution() = default;
  virtual double factor(double u01) const = 0;
  // Largest factor the distribution can return.
  virtual double max_factor() const = 0;
};

// With probability 1 - zeta uniform on (1 - eta, 1 + eta), otherwise uniform
// on (0, 1 - eta].
class AdversarialTailDisturbance final : public DisturbanceDistribution {
 public:
  AdversarialTailDisturbance(double eta, double zeta);
  double factor(double u01) const override;
  double max_factor() const override { return 1.0 + eta_; }

 private:
  double eta_;
  double zeta_;
};

enum class ModelKind { Classical, Opportunistic, Disturbance };

ModelKind parse_model(std::string_view name);
std::string_view to_string(ModelKind kind);

struct ReceptionModel {
  ModelKind kind = ModelKind::Classical;
  // Receivers drop messages from senders farther than this (the faraway
  // filter of the disturbance transform). Disturbance models set it by default.
  std::optional<double> accept_radius;
  std::uint64_t seed = 0;
  std::shared_ptr<const DisturbanceDistribution> disturbance;

  static ReceptionModel classical();
  static ReceptionModel opportunistic();
  // Filter radius defaults to disturbance_radius(params).
  static ReceptionModel disturbance_model(const SinrParams& params, std::uint64_t seed);
};

// 1 - eps for the smallest eps at which a lone transmitter's (1 - eta)-scaled
// SINR still meets beta: (1 - eta)^(1/alpha).
double disturbance_radius(const SinrParams& params);

struct Reception {
  StationIndex receiver = 0;
  StationIndex sender = 0;

  friend bool operator==(const Reception&, const Reception&) = default;
};

// Receptions of one round, sorted by receiver. transmitters must be sorted
// ascending and unique. round_index feeds the disturbance draws only.
std::vector<Reception> resolve_round(std::span<const StationIndex> transmitters, const Network& net,
                                     const ReceptionModel& model, std::uint64_t round_index);

// Per (seed, round, sender, receiver) uniform draw in [0, 1).
double disturbance_draw(std::uint64_t seed, std::uint64_t round, StationId sender, StationId receiver);

class CommGraph {
 public:
  CommGraph(const Network& net, double radius);

  std::size_t size() const { return adjacency_.size(); }
  double radius() const { return radius_; }
  const std::vector<StationIndex>& neighbours(StationIndex i) const { return adjacency_[i]; }
  bool has_edge(StationIndex a, StationIndex b) const;
  std::size_t edge_count() const;

  // Hop distance from source to every station; nullopt where unreachable.
  std::vector<std::optional<std::size_t>> bfs_layers(StationIndex source) const;
  bool connected() const;

 private:
  double radius_;
  std::vector<std::vector<StationIndex>> adjacency_;
};

// Edges between stations at distance <= (1 - eps); eps defaults to params.eps.
CommGraph comm_graph(const Network& net, std::optional<double> eps_override = std::nullopt);

// Max hop distance from source, nullopt if some station is unreachable.
// Throws InvalidArgument for an unknown ID.
std::optional<std::size_t> eccentricity(const CommGraph& g, const Network& net, StationId source);

}  // namespace sinrcast
