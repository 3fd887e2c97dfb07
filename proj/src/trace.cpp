#include "sinrcast/trace.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace sinrcast {

namespace {

RoundTrace to_record(const RoundView& r, const Network& net) {
  RoundTrace t;
  t.round = r.round;
  t.tag = std::string(r.tag);
  t.transmitters.reserve(r.transmitters.size());
  for (StationIndex i : r.transmitters) t.transmitters.push_back(net.id(i));
  t.receptions.reserve(r.receptions.size());
  for (const auto& rec : r.receptions) t.receptions.emplace_back(net.id(rec.receiver), net.id(rec.sender));
  return t;
}

RoundTrace idle_record(std::uint64_t first, std::uint64_t count, std::string_view tag) {
  RoundTrace t;
  t.round = first;
  t.count = count;
  t.tag = std::string(tag);
  return t;
}

}  // namespace

std::string format_record(const RoundTrace& r) {
  std::string out = std::to_string(r.round);
  if (r.count > 1) out += "-" + std::to_string(r.round + r.count - 1);
  out += '\t';
  out += r.tag;
  out += '\t';
  if (r.transmitters.empty()) out += '-';
  for (std::size_t i = 0; i < r.transmitters.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(r.transmitters[i]);
  }
  out += '\t';
  if (r.receptions.empty()) out += '-';
  for (std::size_t i = 0; i < r.receptions.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(r.receptions[i].first);
    out += ':';
    out += std::to_string(r.receptions[i].second);
  }
  out += '\n';
  return out;
}

void MemorySink::on_round(const RoundView& r) { records_.push_back(to_record(r, *net_)); }

void MemorySink::on_idle(std::uint64_t first, std::uint64_t count, std::string_view tag) {
  if (count == 0) return;
  records_.push_back(idle_record(first, count, tag));
}

void StreamSink::on_round(const RoundView& r) { out_ << format_record(to_record(r, *net_)); }

void StreamSink::on_idle(std::uint64_t first, std::uint64_t count, std::string_view tag) {
  if (count == 0) return;
  out_ << format_record(idle_record(first, count, tag));
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void HashSink::feed(std::string_view bytes) { hash_ = fnv1a(bytes, hash_); }

void HashSink::on_round(const RoundView& r) { feed(format_record(to_record(r, *net_))); }

void HashSink::on_idle(std::uint64_t first, std::uint64_t count, std::string_view tag) {
  if (count == 0) return;
  feed(format_record(idle_record(first, count, tag)));
}

std::string HashSink::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
  return buf;
}

void AuditSink::on_round(const RoundView& r) {
  const auto sending = [&](StationIndex v) {
    return std::binary_search(r.transmitters.begin(), r.transmitters.end(), v);
  };
  for (const auto& rec : r.receptions) {
    ++audited_;
    std::ostringstream os;
    os << "round " << r.round << ": ";
    if (sending(rec.receiver)) {
      os << "station " << net_->id(rec.receiver) << " received while transmitting";
      violations_.push_back(os.str());
      continue;
    }
    if (!sending(rec.sender)) {
      os << "station " << net_->id(rec.receiver) << " received from silent station " << net_->id(rec.sender);
      violations_.push_back(os.str());
      continue;
    }
    if (!check_sinr_) continue;
    const double s = sinr(rec.sender, rec.receiver, r.transmitters, *net_);
    if (s < net_->params().beta) {
      os << "reception " << net_->id(rec.receiver) << " <- " << net_->id(rec.sender) << " has SINR " << s
         << " below beta";
      violations_.push_back(os.str());
    }
  }
}

void TeeSink::begin(const Network& net) {
  for (auto* s : sinks_) s->begin(net);
}

void TeeSink::on_round(const RoundView& r) {
  for (auto* s : sinks_) s->on_round(r);
}

void TeeSink::on_idle(std::uint64_t first, std::uint64_t count, std::string_view tag) {
  for (auto* s : sinks_) s->on_idle(first, count, tag);
}

}  // namespace sinrcast
