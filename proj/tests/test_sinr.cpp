#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "sinrcast/errors.hpp"
#include "sinrcast/sinr.hpp"

using namespace sinrcast;

namespace {

Network net_of(std::vector<Point> pts, SinrParams p = {}) {
  std::vector<Station> st;
  for (std::size_t i = 0; i < pts.size(); ++i) st.push_back({i + 1, pts[i]});
  const StationId I = std::max<StationId>(pts.size() * pts.size() * pts.size(), 1);
  return Network(std::move(st), I, p);
}

Network random_net(std::size_t n, double side, std::uint64_t seed, SinrParams p = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, side);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({U(rng), U(rng)});
  return net_of(pts, p);
}

}  // namespace

TEST(Params, Validation) {
  EXPECT_NO_THROW(SinrParams{}.validate());
  EXPECT_THROW(SinrParams::make(2.0, 1, 1, 0.2).validate(), UnsupportedParameters);
  EXPECT_THROW(SinrParams::make(3.0, 0.5, 1, 0.2).validate(), InvalidArgument);
  EXPECT_THROW(SinrParams::make(3.0, 1, 0.5, 0.2).validate(), InvalidArgument);
  EXPECT_THROW(SinrParams::make(3.0, 1, 1, 0.5).validate(), InvalidArgument);
  const auto p = SinrParams::make(3.0, 2.0, 3.0, 0.1);
  EXPECT_DOUBLE_EQ(p.power, 6.0);
}

TEST(NetworkTest, SortsAndValidates) {
  SinrParams p;
  Network net({{5, {1, 0}}, {2, {0, 0}}}, 10, p);
  EXPECT_EQ(net.id(0), 2u);
  EXPECT_EQ(net.id(1), 5u);
  EXPECT_EQ(net.index_of(5), 1u);
  EXPECT_FALSE(net.index_of(3));
  EXPECT_THROW(net.require_index(3), InvalidArgument);
  EXPECT_THROW(Network({{1, {0, 0}}, {1, {1, 0}}}, 10, p), InvalidNetwork);
  EXPECT_THROW(Network({{1, {0, 0}}, {2, {0, 0}}}, 10, p), InvalidNetwork);
  EXPECT_THROW(Network({{11, {0, 0}}}, 10, p), InvalidNetwork);
  EXPECT_THROW(Network({{0, {0, 0}}}, 10, p), InvalidNetwork);
  EXPECT_THROW(Network({{1, {0, 0}}, {2, {1, 0}}}, 10, p, 1), InvalidNetwork);
}

TEST(Sinr, LoneTransmitterAtRangeIsExactlyBeta) {
  for (double alpha : {2.5, 3.0, 4.0}) {
    for (double beta : {1.0, 2.0}) {
      const auto p = SinrParams::make(alpha, beta, 1.0, 0.2);
      auto net = net_of({{0, 0}, {1, 0}}, p);
      const StationIndex T[] = {0};
      EXPECT_DOUBLE_EQ(sinr(0, 1, T, net), beta);
    }
  }
}

TEST(Sinr, HandEvaluatedInterference) {
  const auto p = SinrParams::make(3.0, 2.0, 1.0, 0.2);
  ASSERT_DOUBLE_EQ(p.power, 2.0);
  // u at origin, v at 0.5, w at 2
  auto net = net_of({{0, 0}, {0.5, 0}, {-2, 0}}, p);
  const StationIndex T[] = {1, 2};
  EXPECT_NEAR(sinr(1, 0, T, net), 12.8, 1e-12);
}

TEST(Sinr, BeyondRangeFails) {
  const auto p = SinrParams::make(4.0, 1.0, 1.0, 0.2);
  auto net = net_of({{0, 0}, {2, 0}}, p);
  const StationIndex T[] = {0};
  EXPECT_DOUBLE_EQ(sinr(0, 1, T, net), p.beta / 16);
}

TEST(Sinr, ErrorCases) {
  auto net = net_of({{0, 0}, {0.5, 0}, {1, 0}});
  const StationIndex T[] = {0, 1};
  EXPECT_THROW(sinr(0, 1, T, net), UndefinedReceiver);
  EXPECT_THROW(sinr(2, 1, std::span<const StationIndex>(T, 1), net), InvalidArgument);
}

TEST(Sinr, MonotoneInterference) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 50; ++rep) {
    auto net = random_net(12, 2.0, rep);
    std::vector<StationIndex> T{0};
    double prev = sinr(0, 11, T, net);
    for (StationIndex w = 1; w < 11; ++w) {
      T.push_back(w);
      const double now = sinr(0, 11, T, net);
      ASSERT_LE(now, prev);
      prev = now;
    }
  }
}

TEST(Resolve, LoneTransmitterReachesAllInRange) {
  auto net = net_of({{0, 0}, {0.3, 0.3}, {-0.9, 0}, {0, 1.0}, {0.7, -0.7}});
  const StationIndex T[] = {0};
  const auto rx = resolve_round(T, net, ReceptionModel::classical(), 1);
  ASSERT_EQ(rx.size(), 4u);
  for (const auto& r : rx) EXPECT_EQ(r.sender, 0u);
}

TEST(Resolve, CloseTransmittersJamMidpoint) {
  const auto p = SinrParams::make(3.0, 2.0, 1.0, 0.2);
  auto net = net_of({{0, 0}, {0.1, 0}, {0.05, 0}}, p);
  const StationIndex T[] = {0, 1};
  EXPECT_LT(sinr(0, 2, T, net), p.beta);
  EXPECT_LT(sinr(1, 2, T, net), p.beta);
  EXPECT_TRUE(resolve_round(T, net, ReceptionModel::classical(), 1).empty());
}

TEST(Resolve, ClassicalMatchesBruteForce) {
  for (int rep = 0; rep < 20; ++rep) {
    auto net = random_net(40, 3.0, 100 + rep);
    std::mt19937_64 rng(rep);
    std::vector<StationIndex> T;
    for (StationIndex i = 0; i < net.size(); ++i)
      if (rng() % 4 == 0) T.push_back(i);
    const auto rx = resolve_round(T, net, ReceptionModel::classical(), 1);
    std::vector<Reception> expect;
    for (StationIndex u = 0; u < net.size(); ++u) {
      if (std::find(T.begin(), T.end(), u) != T.end()) continue;
      int hits = 0;
      for (StationIndex v : T) {
        if (sinr(v, u, T, net) >= net.params().beta) {
          expect.push_back({u, v});
          ++hits;
        }
      }
      ASSERT_LE(hits, 1);
    }
    EXPECT_EQ(rx, expect);
    EXPECT_EQ(resolve_round(T, net, ReceptionModel::opportunistic(), 1), expect);
  }
}

TEST(Resolve, DegenerateDisturbanceIsFilteredClassical) {
  auto p = SinrParams::make(3.0, 1.0, 1.0, 0.2, 1e-12, 0.0);
  for (int rep = 0; rep < 10; ++rep) {
    auto net = random_net(30, 2.5, 200 + rep, p);
    std::vector<StationIndex> T;
    for (StationIndex i = 0; i < net.size(); i += 5) T.push_back(i);
    for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
      auto model = ReceptionModel::disturbance_model(p, seed);
      model.accept_radius = 1 - p.eps;
      auto classical = ReceptionModel::classical();
      classical.accept_radius = 1 - p.eps;
      EXPECT_EQ(resolve_round(T, net, model, 5), resolve_round(T, net, classical, 5));
    }
  }
}

TEST(Resolve, DisturbanceIsPureFunctionOfSeedAndRound) {
  const SinrParams p;
  auto net = random_net(40, 2.0, 77, p);
  std::vector<StationIndex> T{0, 7, 13, 21, 30};
  auto m1 = ReceptionModel::disturbance_model(p, 5);
  auto m2 = ReceptionModel::disturbance_model(p, 5);
  for (std::uint64_t r = 1; r < 20; ++r) EXPECT_EQ(resolve_round(T, net, m1, r), resolve_round(T, net, m2, r));
  EXPECT_EQ(disturbance_draw(1, 2, 3, 4), disturbance_draw(1, 2, 3, 4));
  EXPECT_NE(disturbance_draw(1, 2, 3, 4), disturbance_draw(1, 2, 4, 3));
  EXPECT_NE(disturbance_draw(1, 2, 3, 4), disturbance_draw(1, 3, 3, 4));
}

TEST(Disturbance, FactorDistribution) {
  AdversarialTailDisturbance d(0.2, 0.1);
  std::size_t inside = 0;
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) {
    const double f = d.factor(disturbance_draw(3, t, 1, 2));
    ASSERT_GT(f, 0.0);
    ASSERT_LT(f, 1.2);
    if (f > 0.8) ++inside;
  }
  EXPECT_NEAR(static_cast<double>(inside) / trials, 0.9, 0.005);
  EXPECT_DOUBLE_EQ(disturbance_radius(SinrParams::make(3.0, 1, 1, 0.2, 0.2, 0.1)), std::cbrt(0.8));
}

TEST(Model, ParseNames) {
  EXPECT_EQ(parse_model("classical"), ModelKind::Classical);
  EXPECT_EQ(parse_model("disturbance"), ModelKind::Disturbance);
  EXPECT_EQ(parse_model("opportunistic"), ModelKind::Opportunistic);
  EXPECT_THROW(parse_model("rayleigh"), InvalidArgument);
}

TEST(CommGraphTest, BoundaryInclusive) {
  const SinrParams p;
  auto at = net_of({{0, 0}, {1 - p.eps, 0}}, p);
  EXPECT_TRUE(comm_graph(at).has_edge(0, 1));
  auto past = net_of({{0, 0}, {1 - p.eps + 1e-9, 0}}, p);
  EXPECT_FALSE(comm_graph(past).has_edge(0, 1));
  EXPECT_TRUE(comm_graph(past, 0.1).has_edge(0, 1));
}

TEST(CommGraphTest, MatchesBruteForce) {
  auto net = random_net(50, 3.0, 123);
  const auto g = comm_graph(net);
  std::size_t edges = 0;
  for (StationIndex a = 0; a < net.size(); ++a)
    for (StationIndex b = 0; b < net.size(); ++b) {
      if (a == b) continue;
      const bool e = distance(net.position(a), net.position(b)) <= 1 - net.params().eps;
      ASSERT_EQ(g.has_edge(a, b), e);
      edges += e;
    }
  EXPECT_EQ(g.edge_count() * 2, edges);
}

TEST(Eccentricity, Examples) {
  const SinrParams p;
  std::vector<Point> path;
  for (int i = 0; i < 5; ++i) path.push_back({i * 0.75, 0});
  auto pn = net_of(path, p);
  EXPECT_EQ(eccentricity(comm_graph(pn), pn, 1), 4u);
  EXPECT_EQ(eccentricity(comm_graph(pn), pn, 3), 2u);

  auto split = net_of({{0, 0}, {5, 0}}, p);
  EXPECT_FALSE(eccentricity(comm_graph(split), split, 1));

  auto clique = net_of({{0, 0}, {0.3, 0}, {0, 0.3}, {0.2, 0.2}}, p);
  EXPECT_EQ(eccentricity(comm_graph(clique), clique, 2), 1u);
  EXPECT_THROW(eccentricity(comm_graph(clique), clique, 99), InvalidArgument);
}
