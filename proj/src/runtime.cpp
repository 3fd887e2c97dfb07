#include "sinrcast/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sinrcast/errors.hpp"

namespace sinrcast {

std::string_view to_string(BcastState s) {
  switch (s) {
    case BcastState::Asleep: return "asleep";
    case BcastState::Active: return "active";
    case BcastState::Passive: return "passive";
  }
  return "?";
}

Runtime::Runtime(const Network& net, ReceptionModel model, TraceSink* sink, RuntimeOptions options)
    : net_(net), model_(std::move(model)), sink_(sink ? sink : &null_), options_(options) {
  if (options_.round_budget == 0) throw InvalidArgument("round budget must be positive");
  set_tau(options_.tau);
  nodes_.resize(net.size());
  for (StationIndex i = 0; i < net.size(); ++i) {
    nodes_[i].id = net.id(i);
    nodes_[i].pos = net.position(i);
  }
  sink_->begin(net_);
}

void Runtime::set_tau(std::uint64_t tau) {
  if (tau == 0) throw InvalidArgument("phase length tau must be >= 1");
  options_.tau = tau;
}

void Runtime::inform_initially(StationIndex i) {
  auto& v = nodes_.at(i);
  v.informed = true;
  v.informed_round = 0;
  v.bcast = BcastState::Active;
}

void Runtime::wake_all() {
  for (StationIndex i = 0; i < nodes_.size(); ++i) {
    auto& v = nodes_[i];
    if (!v.informed) {
      v.informed = true;
      v.informed_round = round_;
    }
    v.bcast = BcastState::Active;
  }
}

void Runtime::check_budget(std::uint64_t physical) {
  if (round_ + physical > options_.round_budget) {
    const std::uint64_t left = options_.round_budget - round_;
    if (left > 0) {
      if (pending_count_ > 0 && pending_tag_ != "budget") flush();
      if (pending_count_ == 0) {
        pending_tag_ = "budget";
        pending_first_ = round_ + 1;
      }
      pending_count_ += left;
      round_ += left;
    }
    flush();
    throw BudgetExhausted();
  }
}

void Runtime::flush() {
  if (pending_count_ == 0) return;
  sink_->on_idle(pending_first_, pending_count_, pending_tag_);
  pending_count_ = 0;
}

void Runtime::idle(std::uint64_t count, std::string_view tag) {
  if (count == 0) return;
  const std::uint64_t physical = count * options_.tau;
  check_budget(physical);
  if (pending_count_ > 0 && pending_tag_ != tag) flush();
  if (pending_count_ == 0) {
    pending_tag_ = std::string(tag);
    pending_first_ = round_ + 1;
  }
  pending_count_ += physical;
  round_ += physical;
  logical_ += count;
}

const std::vector<Reception>& Runtime::exchange(std::span<const StationIndex> transmitters, std::string_view tag) {
  phase_rx_.clear();
  if (transmitters.empty()) {
    idle(1, tag);
    return phase_rx_;
  }
  tx_.assign(transmitters.begin(), transmitters.end());
  std::sort(tx_.begin(), tx_.end());
  if (std::adjacent_find(tx_.begin(), tx_.end()) != tx_.end())
    throw InvalidArgument("exchange: duplicate transmitter");
  for (StationIndex t : tx_) {
    if (t >= nodes_.size()) throw InvalidArgument("exchange: transmitter index out of range");
    const auto& v = nodes_[t];
    if (v.bcast == BcastState::Asleep || !v.informed || *v.informed_round > round_) {
      std::ostringstream os;
      os << "station " << v.id << " (" << to_string(v.bcast) << (v.informed ? ", informed" : ", uninformed")
         << ") transmitted in round " << round_ + 1;
      throw ProtocolViolation(os.str());
    }
  }
  check_budget(options_.tau);
  flush();
  for (std::uint64_t p = 0; p < options_.tau; ++p) {
    ++round_;
    const auto rx = resolve_round(tx_, net_, model_, round_);
    sink_->on_round(RoundView{round_, tag, tx_, rx});
    for (const auto& r : rx) {
      auto& v = nodes_[r.receiver];
      if (!v.informed) {
        v.informed = true;
        v.informed_round = round_;
      }
      phase_rx_.push_back(r);
    }
  }
  ++logical_;
  if (options_.tau > 1) {
    std::sort(phase_rx_.begin(), phase_rx_.end(), [](const Reception& a, const Reception& b) {
      return a.receiver != b.receiver ? a.receiver < b.receiver : a.sender < b.sender;
    });
    phase_rx_.erase(std::unique(phase_rx_.begin(), phase_rx_.end()), phase_rx_.end());
  }
  return phase_rx_;
}

std::uint64_t default_tau(std::size_t n, double zeta) {
  if (zeta <= 0.0) return 1;
  const double nn = static_cast<double>(std::max<std::size_t>(n, 2));
  // The slack keeps exact integers (n = 100, zeta = 0.1 gives 6) from rounding up.
  return static_cast<std::uint64_t>(std::ceil(3.0 * std::log(nn) / std::log(1.0 / zeta) - 1e-9));
}

}  // namespace sinrcast
