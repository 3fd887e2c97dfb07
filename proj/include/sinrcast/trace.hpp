#pragma once

// Round records and the sinks that consume them. Silent stretches are
// reported as one span so that long idle schedules stay cheap.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sinrcast/sinr.hpp"

namespace sinrcast {

struct RoundView {
  std::uint64_t round = 0;  // 1-based physical round
  std::string_view tag;
  std::span<const StationIndex> transmitters;  // ascending
  std::span<const Reception> receptions;       // ascending by receiver
};

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void begin(const Network&) {}
  virtual void on_round(const RoundView& r) = 0;
  // Rounds first .. first + count - 1 had no transmitter.
  virtual void on_idle(std::uint64_t first, std::uint64_t count, std::string_view tag) = 0;
};

// One stored record; count > 1 only for silent spans.
struct RoundTrace {
  std::uint64_t round = 0;
  std::uint64_t count = 1;
  std::string tag;
  std::vector<StationId> transmitters;
  std::vector<std::pair<StationId, StationId>> receptions;  // (receiver, sender)

  friend bool operator==(const RoundTrace&, const RoundTrace&) = default;
};

// Line format: "round<TAB>tag<TAB>tx<TAB>rx" with tx a comma list of IDs and
// rx a comma list of receiver:sender, "-" when empty. Silent spans print the
// round field as "first-last".
std::string format_record(const RoundTrace& r);

class NullSink final : public TraceSink {
 public:
  void on_round(const RoundView&) override {}
  void on_idle(std::uint64_t, std::uint64_t, std::string_view) override {}
};

class MemorySink final : public TraceSink {
 public:
  void begin(const Network& net) override { net_ = &net; }
  void on_round(const RoundView& r) override;
  void on_idle(std::uint64_t first, std::uint64_t count, std::string_view tag) override;
  const std::vector<RoundTrace>& records() const { return records_; }
  void clear() { records_.clear(); }

 private:
  const Network* net_ = nullptr;
  std::vector<RoundTrace> records_;
};

class StreamSink final : public TraceSink {
 public:
  explicit StreamSink(std::ostream& out) : out_(out) {}
  void begin(const Network& net) override { net_ = &net; }
  void on_round(const RoundView& r) override;
  void on_idle(std::uint64_t first, std::uint64_t count, std::string_view tag) override;

 private:
  std::ostream& out_;
  const Network* net_ = nullptr;
};

// FNV-1a 64 over exactly the bytes StreamSink would write.
class HashSink final : public TraceSink {
 public:
  void begin(const Network& net) override { net_ = &net; }
  void on_round(const RoundView& r) override;
  void on_idle(std::uint64_t first, std::uint64_t count, std::string_view tag) override;
  std::uint64_t digest() const { return hash_; }
  std::string hex() const;

 private:
  void feed(std::string_view bytes);
  const Network* net_ = nullptr;
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

// Re-derives every reception from the transmitter set: receivers must be
// silent and, when check_sinr is set (classical rules), SINR >= beta.
// Violations are collected rather than thrown.
class AuditSink final : public TraceSink {
 public:
  explicit AuditSink(bool check_sinr = true) : check_sinr_(check_sinr) {}
  void begin(const Network& net) override { net_ = &net; }
  void on_round(const RoundView& r) override;
  void on_idle(std::uint64_t, std::uint64_t, std::string_view) override {}
  const std::vector<std::string>& violations() const { return violations_; }
  std::uint64_t audited_receptions() const { return audited_; }

 private:
  const Network* net_ = nullptr;
  bool check_sinr_;
  std::vector<std::string> violations_;
  std::uint64_t audited_ = 0;
};

// Forwards to several sinks in order.
class TeeSink final : public TraceSink {
 public:
  explicit TeeSink(std::vector<TraceSink*> sinks) : sinks_(std::move(sinks)) {}
  void begin(const Network& net) override;
  void on_round(const RoundView& r) override;
  void on_idle(std::uint64_t first, std::uint64_t count, std::string_view tag) override;

 private:
  std::vector<TraceSink*> sinks_;
};

}  // namespace sinrcast
