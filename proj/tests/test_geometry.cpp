#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "sinrcast/errors.hpp"
#include "sinrcast/geometry.hpp"

using namespace sinrcast;

namespace {

BoxCoord B(std::int64_t i, std::int64_t j, double side = 1.0) { return {i, j, side}; }

using P = std::pair<std::int64_t, std::int64_t>;

}  // namespace

TEST(BoxOf, HalfOpenCells) {
  EXPECT_EQ(box_of({0.0, 0.0}, 1.0), B(0, 0));
  EXPECT_EQ(box_of({-0.5, 2.0}, 1.0), B(-1, 2));
  EXPECT_EQ(box_of({0.75, 0.25}, 0.5), B(1, 0, 0.5));
  // top and right edges belong to the next box
  EXPECT_EQ(box_of({1.0, 0.999}, 1.0), B(1, 0));
  EXPECT_EQ(box_of({-1.0, -1e-300}, 1.0), B(-1, -1));
}

TEST(BoxOf, RejectsBadInput) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(box_of({inf, 0.0}, 1.0), InvalidArgument);
  EXPECT_THROW(box_of({0.0, std::nan("")}, 1.0), InvalidArgument);
  EXPECT_THROW(box_of({0.0, 0.0}, 0.0), InvalidArgument);
  EXPECT_THROW(box_of({0.0, 0.0}, -1.0), InvalidArgument);
}

TEST(BoxOf, PointsOfOneBoxWithinDiagonal) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  for (double c : {0.05, 0.3, 1.0}) {
    for (int t = 0; t < 2000; ++t) {
      const Point p{U(rng), U(rng)};
      const auto b = box_of(p, c);
      ASSERT_LE(b.i * c, p.x);
      ASSERT_LT(p.x, (b.i + 1) * c);
      ASSERT_LE(b.j * c, p.y);
      ASSERT_LT(p.y, (b.j + 1) * c);
      const Point q{b.i * c + std::fmod(std::abs(U(rng)), c), b.j * c + std::fmod(std::abs(U(rng)), c)};
      if (box_of(q, c) == b) ASSERT_LE(distance(p, q), c * std::sqrt(2.0) + 1e-12);
    }
  }
}

TEST(BoxOf, SameBoxInCommRadius) {
  const double eps = 0.2;
  const double z = (1 - eps) / std::sqrt(2.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  int same = 0;
  for (int t = 0; t < 20000; ++t) {
    const Point p{U(rng), U(rng)}, q{U(rng), U(rng)};
    if (box_of(p, z) != box_of(q, z)) continue;
    ++same;
    ASSERT_LE(distance(p, q), 1 - eps);
  }
  EXPECT_GT(same, 100);
}

TEST(Adjacent, ChebyshevNeighbourhood) {
  EXPECT_TRUE(adjacent(B(0, 0), B(1, 1)));
  EXPECT_TRUE(adjacent(B(0, 0), B(0, 0)));
  EXPECT_FALSE(adjacent(B(0, 0), B(2, 0)));
  EXPECT_TRUE(adjacent(B(-1, 3), B(0, 2)));
  EXPECT_THROW(adjacent(B(0, 0, 1.0), B(0, 0, 0.5)), InvalidArgument);
}

TEST(DistM, Examples) {
  EXPECT_EQ(dist_m(B(0, 0), B(1, 0)), 0);
  EXPECT_EQ(dist_m(B(0, 0), B(3, 4)), 3);
  EXPECT_EQ(dist_m(B(5, 5), B(5, 5)), 0);
  EXPECT_EQ(dist_m(B(0, 0), B(-3, 0)), 2);
  EXPECT_THROW(dist_m(B(0, 0, 1.0), B(1, 0, 2.0)), InvalidArgument);
}

TEST(DistM, Symmetric) {
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b) EXPECT_EQ(dist_m(B(0, 0), B(a, b)), dist_m(B(a, b), B(0, 0)));
}

TEST(DistM, TriangleStyleBound) {
  // dist_m(C,C') < 3 implies dist_m(C',C'') >= dist_m(C,C'') - 3
  const int R = 10;
  for (int ci = -R; ci < R; ++ci)
    for (int cj = -R; cj < R; ++cj) {
      const BoxCoord c2 = B(ci, cj);
      for (int di = -4; di <= 4; ++di)
        for (int dj = -4; dj <= 4; ++dj) {
          const BoxCoord c1 = B(ci + di, cj + dj);
          if (dist_m(c1, c2) >= 3) continue;
          for (int ei = -R; ei < R; ei += 3)
            for (int ej = -R; ej < R; ej += 3) {
              const BoxCoord c3 = B(ei, ej);
              ASSERT_GE(dist_m(c2, c3), dist_m(c1, c3) - 3);
            }
        }
    }
}

TEST(DistM, EuclideanLowerBound) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-4.0, 4.0);
  const double c = 0.37;
  for (int t = 0; t < 20000; ++t) {
    const Point p{U(rng), U(rng)}, q{U(rng), U(rng)};
    const double j = dist_m(box_of(p, c), box_of(q, c));
    ASSERT_GE(distance(p, q) + 1e-12, j * c);
  }
}

TEST(DilutionClass, NonnegativeModulus) {
  EXPECT_EQ(dilution_class(B(7, 3), 4), P(3, 3));
  EXPECT_EQ(dilution_class(B(-1, 0), 3), P(2, 0));
  EXPECT_EQ(dilution_class(B(-17, 123), 1), P(0, 0));
  EXPECT_THROW(dilution_class(B(0, 0), 0), InvalidArgument);
  EXPECT_EQ(floor_div(-7, 3), -3);
  EXPECT_EQ(floor_mod(-7, 3), 2);
}

TEST(Granularity, Examples) {
  std::vector<Point> two{{0, 0}, {0.25, 0}};
  EXPECT_DOUBLE_EQ(granularity(two), 4.0);
  std::vector<Point> line{{0, 0}, {1, 0}, {2, 0}};
  EXPECT_DOUBLE_EQ(granularity(line), 1.0);
  std::vector<Point> one{{3, 3}};
  EXPECT_DOUBLE_EQ(granularity(one), 1.0);
  std::vector<Point> dup{{1, 1}, {2, 2}, {1, 1}};
  EXPECT_THROW(granularity(dup), InvalidNetwork);
}

TEST(Granularity, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 3.0);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<Point> pts;
    for (int i = 0; i < 100; ++i) pts.push_back({U(rng), U(rng)});
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b) best = std::min(best, distance(pts[a], pts[b]));
    EXPECT_DOUBLE_EQ(granularity(pts), 1.0 / best);
  }
}
