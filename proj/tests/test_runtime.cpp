#include <gtest/gtest.h>

#include <sstream>

#include "sinrcast/errors.hpp"
#include "sinrcast/programs.hpp"
#include "sinrcast/runtime.hpp"
#include "sinrcast/trace.hpp"

using namespace sinrcast;

namespace {

Network small_net() {
  return Network({{3, {0, 0}}, {8, {0.5, 0}}, {1, {0, 0.9}}, {20, {3, 3}}}, 64, SinrParams{});
}

std::string dump(const std::vector<RoundTrace>& recs) {
  std::string out;
  for (const auto& r : recs) out += format_record(r);
  return out;
}

}  // namespace

TEST(Runtime, SilentRoundAdvancesCounters) {
  auto net = small_net();
  MemorySink sink;
  Runtime rt(net, ReceptionModel::classical(), &sink);
  EXPECT_TRUE(rt.exchange({}, "t").empty());
  EXPECT_EQ(rt.round(), 1u);
  EXPECT_EQ(rt.logical_rounds(), 1u);
  rt.idle(4, "t");
  rt.flush();
  ASSERT_EQ(sink.records().size(), 1u);
  EXPECT_EQ(sink.records()[0].round, 1u);
  EXPECT_EQ(sink.records()[0].count, 5u);
  EXPECT_EQ(format_record(sink.records()[0]), "1-5\tt\t-\t-\n");
}

TEST(Runtime, SourceRoundInformsRange) {
  auto net = small_net();
  MemorySink sink;
  Runtime rt(net, ReceptionModel::classical(), &sink);
  const StationIndex src = net.require_index(3);
  rt.inform_initially(src);
  const StationIndex T[] = {src};
  const auto& rx = rt.exchange(T, "src");
  EXPECT_EQ(rx.size(), 2u);
  for (StationId id : {1, 8}) {
    const auto& v = rt.nodes()[net.require_index(id)];
    EXPECT_TRUE(v.informed);
    EXPECT_EQ(v.informed_round, 1u);
  }
  EXPECT_FALSE(rt.nodes()[net.require_index(20)].informed);
  ASSERT_EQ(sink.records().size(), 1u);
  EXPECT_EQ(format_record(sink.records()[0]), "1\tsrc\t3\t1:3,8:3\n");
}

TEST(Runtime, WakeUpRuleEnforced) {
  auto net = small_net();
  Runtime rt(net, ReceptionModel::classical());
  const StationIndex T[] = {net.require_index(8)};
  try {
    rt.exchange(T, "bad");
    FAIL() << "asleep transmitter accepted";
  } catch (const ProtocolViolation& e) {
    EXPECT_NE(std::string(e.what()).find("station 8"), std::string::npos);
  }
  EXPECT_THROW(Runtime(net, ReceptionModel::classical(), nullptr, RuntimeOptions{0, 1}), InvalidArgument);
  EXPECT_THROW(rt.set_tau(0), InvalidArgument);
}

TEST(Runtime, BudgetExhaustion) {
  auto net = small_net();
  MemorySink sink;
  Runtime rt(net, ReceptionModel::classical(), &sink, RuntimeOptions{10, 1});
  rt.idle(7, "a");
  EXPECT_THROW(rt.idle(5, "a"), BudgetExhausted);
  EXPECT_EQ(rt.round(), 10u);
  rt.flush();
  std::uint64_t covered = 0;
  for (const auto& r : sink.records()) covered += r.count;
  EXPECT_EQ(covered, 10u);
}

TEST(Runtime, PhaseUnionsReceptions) {
  auto net = small_net();
  MemorySink sink;
  Runtime rt(net, ReceptionModel::classical(), &sink, RuntimeOptions{100, 3});
  rt.wake_all();
  const StationIndex T[] = {net.require_index(3)};
  const auto rx = rt.exchange(T, "p");
  EXPECT_EQ(rx.size(), 2u);  // deduplicated over the phase
  EXPECT_EQ(rt.round(), 3u);
  EXPECT_EQ(rt.logical_rounds(), 1u);
  EXPECT_EQ(sink.records().size(), 3u);
}

TEST(DefaultTau, Formula) {
  EXPECT_EQ(default_tau(100, 0.1), 6u);
  EXPECT_EQ(default_tau(100, 0.3), 12u);
  EXPECT_EQ(default_tau(1, 0.1), 1u);
  EXPECT_EQ(default_tau(1000, 0.0), 1u);
}

TEST(Trace, SinksAgree) {
  auto net = Network({{1, {0, 0}}, {2, {0.6, 0}}, {3, {1.2, 0}}, {4, {1.8, 0}}}, 64, SinrParams{});
  MemorySink mem;
  std::ostringstream os;
  StreamSink stream(os);
  HashSink hash;
  TeeSink tee({&mem, &stream, &hash});
  BroadcastProgram prog(Variant::Gran, 1);
  run_protocol(prog, net, ReceptionModel::classical(), 1'000'000, &tee);
  EXPECT_EQ(dump(mem.records()), os.str());
  EXPECT_EQ(hash.digest(), fnv1a(os.str()));
  EXPECT_EQ(hash.hex().size(), 16u);
  EXPECT_FALSE(mem.records().empty());
}

TEST(Trace, AuditFlagsForgedReception) {
  auto net = small_net();
  AuditSink audit;
  audit.begin(net);
  const StationIndex T[] = {0, 1};
  const Reception fake[] = {{3, 0}};
  audit.on_round(RoundView{1, "x", T, fake});
  EXPECT_EQ(audit.violations().size(), 1u);
  const Reception self[] = {{1, 0}};
  audit.on_round(RoundView{2, "x", T, self});
  EXPECT_EQ(audit.violations().size(), 2u);
}

TEST(RunProtocol, SilentProgramHitsBudget) {
  auto net = small_net();
  SilentProgram silent;
  MemorySink sink;
  const auto r = run_protocol(silent, net, ReceptionModel::classical(), 1234, &sink);
  EXPECT_TRUE(r.timed_out);
  EXPECT_EQ(r.rounds, 1234u);
  for (const auto& rec : sink.records()) EXPECT_TRUE(rec.receptions.empty());
  EXPECT_THROW(run_protocol(silent, net, ReceptionModel::classical(), 0), InvalidArgument);
}

TEST(RunProtocol, TwoNodeGranBroadcast) {
  auto net = Network({{1, {0, 0}}, {2, {0.5, 0}}}, 8, SinrParams{});
  BroadcastProgram prog(Variant::Gran, 1);
  const auto r = run_protocol(prog, net, ReceptionModel::classical(), 1'000'000);
  EXPECT_FALSE(r.timed_out);
  EXPECT_LT(r.rounds, 1'000'000u);
  for (const auto& s : r.final_states) EXPECT_TRUE(s.informed);
  EXPECT_EQ(r.final_states[1].informed_round, 1u);
}

TEST(RunProtocol, RerunsIdentical) {
  auto net = Network({{5, {0, 0}}, {9, {0.7, 0.1}}, {2, {1.3, -0.2}}, {7, {0.5, 0.6}}}, 64, SinrParams{});
  std::string first;
  for (int rep = 0; rep < 2; ++rep) {
    std::ostringstream os;
    StreamSink sink(os);
    BroadcastProgram prog(Variant::Gen, 5);
    run_protocol(prog, net, ReceptionModel::classical(), 100'000'000, &sink);
    if (rep == 0) first = os.str();
    else EXPECT_EQ(os.str(), first);
  }
}

TEST(PhaseWrap, TauOneIsIdentity) {
  auto net = Network({{5, {0, 0}}, {9, {0.7, 0.1}}, {2, {1.3, -0.2}}, {7, {0.5, 0.6}}}, 64, SinrParams{});
  std::ostringstream plain, wrapped;
  StreamSink a(plain), b(wrapped);
  BroadcastProgram p1(Variant::Gran, 5);
  run_protocol(p1, net, ReceptionModel::classical(), 100'000'000, &a);
  auto p2 = phase_wrap(std::make_unique<BroadcastProgram>(Variant::Gran, 5), 1);
  run_protocol(*p2, net, ReceptionModel::classical(), 100'000'000, &b);
  EXPECT_EQ(plain.str(), wrapped.str());
  EXPECT_THROW(phase_wrap(std::make_unique<SilentProgram>(), 0), InvalidArgument);
}

TEST(PhaseWrap, TauThreeRepeatsTransmitters) {
  auto net = Network({{5, {0, 0}}, {9, {0.7, 0.1}}, {2, {1.3, -0.2}}, {7, {0.5, 0.6}}}, 64, SinrParams{});
  MemorySink plain, wrapped;
  BroadcastProgram p1(Variant::Gran, 5);
  const auto r1 = run_protocol(p1, net, ReceptionModel::classical(), 100'000'000, &plain);
  auto p2 = phase_wrap(std::make_unique<BroadcastProgram>(Variant::Gran, 5), 3);
  const auto r3 = run_protocol(*p2, net, ReceptionModel::classical(), 100'000'000, &wrapped);
  EXPECT_EQ(r3.rounds, 3 * r1.rounds);
  EXPECT_EQ(r3.logical_rounds, r1.logical_rounds);

  std::vector<const RoundTrace*> active1, active3;
  for (const auto& r : plain.records())
    if (!r.transmitters.empty()) active1.push_back(&r);
  for (const auto& r : wrapped.records())
    if (!r.transmitters.empty()) active3.push_back(&r);
  ASSERT_EQ(active3.size(), 3 * active1.size());
  for (std::size_t i = 0; i < active1.size(); ++i) {
    for (std::size_t p = 0; p < 3; ++p) {
      const auto& w = *active3[3 * i + p];
      EXPECT_EQ(w.transmitters, active1[i]->transmitters);
      EXPECT_EQ(w.round, 3 * (active1[i]->round - 1) + p + 1);
    }
  }
}
