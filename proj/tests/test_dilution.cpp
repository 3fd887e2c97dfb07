#include <gtest/gtest.h>

#include <cmath>

#include "sinrcast/dilution.hpp"
#include "sinrcast/errors.hpp"
#include "sinrcast/programs.hpp"
#include "support.hpp"

using namespace sinrcast;
using namespace sinrcast::testing_support;

TEST(FlatDAlpha, SingleTerm) {
  for (double alpha : {2.5, 3.0, 4.0}) {
    for (double beta : {1.0, 3.0}) {
      const auto p = SinrParams::make(alpha, beta, 1.0, 0.2);
      EXPECT_NEAR(flat_d_alpha(1, p), 2 * std::sqrt(2.0) * std::pow(8 * beta, 1 / alpha), 1e-12);
    }
  }
}

TEST(FlatDAlpha, ConvergesAndIsMonotone) {
  const auto p = SinrParams::make(4.0, 2.0, 1.0, 0.2);
  EXPECT_NEAR(flat_d_alpha(1'000'000, p), flat_d_alpha(10'000, p), 1e-6);
  double prev = 0.0;
  for (std::size_t n = 1; n <= 300; ++n) {
    const double v = flat_d_alpha(n, p);
    EXPECT_GE(v, prev);
    prev = v;
  }
  EXPECT_THROW(flat_d_alpha(10, SinrParams::make(2.0, 1, 1, 0.2)), UnsupportedParameters);
}

TEST(SufficientDilution, ExceedsReachInBoxes) {
  const SinrParams p;
  for (double x : {0.05, 0.1, 0.2}) {
    const double reach = 2 * std::sqrt(2.0) * x;
    const long d = sufficient_dilution(p, 1000, x, reach);
    EXPECT_GE(d, static_cast<long>(std::ceil(reach / x)) + 2);
    // the bound holds at d and fails at d - 1 unless d is the floor
    const long o = static_cast<long>(std::ceil(reach / x - 1e-12));
    if (d > o + 2) {
      double sum = 0.0;
      for (int m = 1; m <= 1000; ++m) sum += 8.0 * m * std::pow(((m * (d - 1.0)) - o - 1) * x, -p.alpha);
      EXPECT_GT(p.beta * sum, std::pow(reach, -p.alpha) - 1.0);
    }
  }
  EXPECT_THROW(sufficient_dilution(p, 10, 0.1, 1.0), UnsupportedParameters);
  EXPECT_THROW(sufficient_dilution(p, 10, 0.0, 0.5), InvalidArgument);
  EXPECT_GE(sufficient_dilution(p, 10, 0.1, 0.5, 1.25), sufficient_dilution(p, 10, 0.1, 0.5, 1.0));
}

TEST(DilutionRuleTest, PolicyNames) {
  EXPECT_EQ(parse_dilution("sufficient"), DilutionPolicy::Sufficient);
  EXPECT_EQ(parse_dilution("literal"), DilutionPolicy::Literal);
  EXPECT_THROW(parse_dilution("loose"), InvalidArgument);
  const DilutionRule literal(SinrParams{}, 100, DilutionPolicy::Literal);
  EXPECT_EQ(literal.diluted_transmit(0.1), static_cast<long>(std::ceil(std::sqrt(flat_d_alpha(100, SinrParams{})))));
  EXPECT_THROW(DilutionRule(SinrParams{}, 10, DilutionPolicy::Sufficient, 0.5), InvalidArgument);
}

TEST(DilutedTransmit, LoneStationOneRound) {
  Network net({{1, {0.05, 0.05}}, {2, {0.9, 0}}, {3, {0, -0.7}}}, 27, SinrParams{});
  Runtime rt(net, ReceptionModel::classical());
  rt.wake_all();
  const StationIndex V[] = {0};
  const auto rx = diluted_transmit(rt, V, 0.1, 1, "t");
  EXPECT_EQ(rt.logical_rounds(), 1u);
  EXPECT_EQ(rx.size(), 2u);
}

TEST(DilutedTransmit, EmptySetIsSilentSchedule) {
  Network net({{1, {0, 0}}}, 1, SinrParams{});
  MemorySink sink;
  Runtime rt(net, ReceptionModel::classical(), &sink);
  EXPECT_TRUE(diluted_transmit(rt, {}, 0.1, 7, "t").empty());
  rt.flush();
  EXPECT_EQ(rt.round(), 49u);
  ASSERT_EQ(sink.records().size(), 1u);
  EXPECT_EQ(sink.records()[0].count, 49u);
}

TEST(DilutedTransmit, SufficientPolicyReachesEveryNeighbour) {
  int configs = 0;
  for (double alpha : {2.5, 3.0, 4.0}) {
    for (double x : {0.05, 0.1, 0.2}) {
      const auto p = SinrParams::make(alpha, 1.0, 1.0, 0.2);
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto net = one_per_box(seed * 31 + static_cast<std::uint64_t>(alpha * 10), x, 12, 0.9, p);
        DilutedTransmitProgram prog(x);
        AuditSink audit;
        run_protocol(prog, net, ReceptionModel::classical(), 1ull << 40, &audit);
        EXPECT_TRUE(audit.violations().empty());
        const auto missed = missed_within(net, prog.receptions(), 2 * std::sqrt(2.0) * x);
        EXPECT_TRUE(missed.empty()) << "alpha " << alpha << " x " << x << ": " << missed.size() << " misses, e.g. "
                                    << missed.front();
        ++configs;
      }
    }
  }
  EXPECT_EQ(configs, 27);
}

// The literal dilution factor is too small for a densely packed field. This
// documents why the sufficient policy is the default.
TEST(DilutedTransmit, LiteralPolicyMissesInDenseField) {
  const SinrParams p;
  const double x = 0.1;
  const auto net = one_per_box(5, x, 14, 1.0, p);
  ProtocolConfig cfg;
  cfg.dilution = DilutionPolicy::Literal;
  DilutedTransmitProgram prog(x, std::nullopt, cfg);
  run_protocol(prog, net, ReceptionModel::classical(), 1ull << 40);
  EXPECT_FALSE(missed_within(net, prog.receptions(), 2 * std::sqrt(2.0) * x).empty());
}
