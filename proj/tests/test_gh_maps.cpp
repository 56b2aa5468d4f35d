#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ghhj/gh_maps.hpp"
#include "oracles.hpp"

namespace {

using namespace ghhj;
constexpr double kPi = std::numbers::pi;

SpacePtr two_point(double d) {
  return make_space(FiniteMetricSpace(2, {0, d, d, 0}));
}

MetricMap c8_into_c32() {
  auto c8 = make_space(make_circle(8));
  auto c32 = make_space(make_circle(32));
  std::vector<Index> assign(8);
  for (Index i = 0; i < 8; ++i) assign[i] = 4 * i;
  return MetricMap(c8, c32, assign);
}

// Pair and covering sweeps written out independently of the library.
double sweep_distortion(const MetricMap& f) {
  double worst = 0.0;
  for (Index i = 0; i < f.source()->size(); ++i) {
    for (Index j = 0; j < f.source()->size(); ++j) {
      worst = std::max(worst, std::abs((*f.target())(f(i), f(j)) -
                                       (*f.source())(i, j)));
    }
  }
  return worst;
}

double sweep_codensity(const MetricMap& f) {
  double worst = 0.0;
  for (Index y = 0; y < f.target()->size(); ++y) {
    double best = 1e300;
    for (Index i = 0; i < f.source()->size(); ++i) {
      best = std::min(best, (*f.target())(y, f(i)));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

TEST(MetricMap, RejectsOutOfRangeAssignments) {
  auto a = two_point(1.0);
  EXPECT_THROW(MetricMap(a, a, {0, 2}), InputError);
  EXPECT_THROW(MetricMap(a, a, {0}), InputError);
}

TEST(Distortion, IdentityIsZero) {
  for (const auto& s : {make_space(make_circle(12)),
                        make_space(make_sierpinski(2))}) {
    EXPECT_EQ(certify(identity_map(s)).epsilon, 0.0);
  }
}

TEST(Distortion, ConstantMapFromTwoPoints) {
  auto a = two_point(1.0);
  auto b = make_space(make_interval(3, 2.0));
  EXPECT_EQ(distortion(MetricMap(a, b, {1, 1})), 1.0);
}

TEST(Distortion, CircleInclusionPreservesArcs) {
  const auto f = c8_into_c32();
  EXPECT_NEAR(distortion(f), 0.0, 1e-15);
  EXPECT_EQ(distortion(f), sweep_distortion(f));
}

TEST(Codensity, SurjectiveMapIsZero) {
  auto a = two_point(1.0);
  EXPECT_EQ(codensity(MetricMap(a, a, {1, 0})), 0.0);
}

TEST(Codensity, CircleInclusion) {
  const auto f = c8_into_c32();
  EXPECT_NEAR(codensity(f), kPi / 8, 1e-15);
  EXPECT_EQ(codensity(f), sweep_codensity(f));
}

TEST(Codensity, ConstantMapIntoInterval) {
  auto a = two_point(1.0);
  auto b = make_space(make_interval(3, 2.0));
  EXPECT_EQ(codensity(MetricMap(a, b, {0, 0})), 2.0);
}

TEST(Certify, EpsilonIsMaxWithWitnesses) {
  const auto f = c8_into_c32();
  const auto c = certify(f);
  EXPECT_EQ(c.epsilon, std::max(c.distortion, c.codensity));
  const auto& t = *f.target();
  double nearest = 1e300;
  for (Index i = 0; i < 8; ++i) nearest = std::min(nearest, t(c.worst_point, f(i)));
  EXPECT_EQ(nearest, c.codensity);

  auto a = two_point(1.0);
  auto b = make_space(make_interval(3, 2.0));
  const auto k = certify(MetricMap(a, b, {0, 0}));
  EXPECT_EQ(k.distortion, 1.0);
  EXPECT_EQ(k.codensity, 2.0);
  EXPECT_EQ(k.epsilon, 2.0);
  EXPECT_EQ(k.worst_point, 2u);
  EXPECT_EQ(k.worst_pair, (std::pair<Index, Index>{0, 1}));
}

TEST(Certify, BitReproducible) {
  std::mt19937_64 rng(5);
  auto x = oracle::random_space(rng, 15);
  auto y = oracle::random_space(rng, 12);
  std::vector<Index> assign(15);
  for (auto& a : assign) a = rng() % 12;
  const MetricMap f(x, y, assign);
  const auto a = certify(f), b = certify(f);
  EXPECT_EQ(a.distortion, b.distortion);
  EXPECT_EQ(a.codensity, b.codensity);
  EXPECT_EQ(a.worst_pair, b.worst_pair);
  EXPECT_EQ(a.worst_point, b.worst_point);
  EXPECT_EQ(a.distortion, sweep_distortion(f));
  EXPECT_EQ(a.codensity, sweep_codensity(f));
}

TEST(EpsilonInverse, IdentityInvertsToIdentity) {
  auto s = make_space(make_circle(10));
  const auto f = identity_map(s);
  const auto g = epsilon_inverse(f);
  EXPECT_EQ(g.assign(), f.assign());
  EXPECT_TRUE(measure_inverse_bounds(f, g).hold(0.0));
}

TEST(EpsilonInverse, CircleInclusionNearestVertex) {
  const auto f = c8_into_c32();
  const auto g = epsilon_inverse(f);
  const auto& c32 = *f.target();
  for (Index y = 0; y < 32; ++y) {
    // nearest C8 vertex, ties to the lower index
    Index want = 0;
    double best = 1e300;
    for (Index i = 0; i < 8; ++i) {
      if (c32(4 * i, y) < best) {
        best = c32(4 * i, y);
        want = i;
      }
    }
    EXPECT_EQ(g(y), want) << y;
    EXPECT_LE(c32(f(g(y)), y), kPi / 8 + 1e-15);
  }
}

TEST(EpsilonInverse, TieBreaksToLowestSourceIndex) {
  auto a = two_point(1.0);
  auto line = make_space(make_interval(3, 1.0));
  const MetricMap f(a, line, {0, 2});
  EXPECT_EQ(epsilon_inverse(f)(1), 0u);
}

TEST(EpsilonInverse, BoundsHoldOnRandomMaps) {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 40; ++k) {
    const Index nx = 2 + rng() % 12, ny = 2 + rng() % 12;
    auto x = oracle::random_space(rng, nx);
    auto y = oracle::random_space(rng, ny);
    std::vector<Index> assign(nx);
    for (auto& a : assign) a = rng() % ny;
    const MetricMap f(x, y, assign);
    const auto b = measure_inverse_bounds(f, epsilon_inverse(f));
    EXPECT_LE(b.inverse_epsilon, 4 * b.epsilon + 1e-12);
    EXPECT_LE(b.source_round_trip, 3 * b.epsilon + 1e-12);
    EXPECT_LE(b.target_round_trip, b.epsilon + 1e-12);
  }
}

TEST(ApproximatePoint, ImagePointReturnsPreimage) {
  const auto f = c8_into_c32();
  EXPECT_EQ(approximate_point(f, 12), 3u);
}

TEST(ApproximatePoint, EquidistantTieGoesLow) {
  const auto f = c8_into_c32();
  EXPECT_EQ(approximate_point(f, 2), 0u);
  EXPECT_NEAR((*f.target())(f(0), 2), 2 * 2 * kPi / 32, 1e-15);
  EXPECT_NEAR((*f.target())(f(1), 2), 2 * 2 * kPi / 32, 1e-15);
}

TEST(ApproximatePoint, SinglePointSource) {
  auto one = make_space(FiniteMetricSpace(1, {0.0}));
  auto c = make_space(make_circle(9));
  const MetricMap f(one, c, {4});
  for (Index y = 0; y < 9; ++y) {
    EXPECT_EQ(approximate_point(f, y), 0u);
    EXPECT_LE((*c)(f(0), y), codensity(f));
  }
}

TEST(BruteForce, TwoPointIsometry) {
  auto a = two_point(1.0);
  EXPECT_EQ(brute_force_best_map(a, a).second.epsilon, 0.0);
}

TEST(BruteForce, ForcedDistortion) {
  EXPECT_NEAR(brute_force_best_map(two_point(1.0), two_point(1.3)).second.epsilon,
              0.3, 1e-15);
}

TEST(BruteForce, PathIntoEquilateralTriangle) {
  auto path = make_space(make_interval(3, 2.0));
  auto tri = make_space(FiniteMetricSpace(3, {0, 1, 1, 1, 0, 1, 1, 1, 0}));
  // The pair at distance 2 lands at distance <= 1, so epsilon >= 1, and any
  // bijection attains 1.
  double best = 1e300;
  for (Index a = 0; a < 3; ++a) {
    for (Index b = 0; b < 3; ++b) {
      for (Index c = 0; c < 3; ++c) {
        const MetricMap f(path, tri, {a, b, c});
        best = std::min(best, std::max(sweep_distortion(f), sweep_codensity(f)));
      }
    }
  }
  EXPECT_EQ(best, 1.0);
  EXPECT_EQ(brute_force_best_map(path, tri).second.epsilon, best);
}

TEST(BruteForce, BudgetIsEnforced) {
  auto big = make_space(make_circle(12));
  EXPECT_THROW(brute_force_best_map(big, big), InputError);
}

}  // namespace
