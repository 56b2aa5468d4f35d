#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ghhj/metric_space.hpp"
#include "oracles.hpp"

namespace {

using namespace ghhj;
constexpr double kPi = std::numbers::pi;

TEST(ValidateMetric, SmallestValidMetricPasses) {
  const auto r = validate_metric(std::vector<double>{0, 1, 1, 0}, 2);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.violations.empty());
}

TEST(ValidateMetric, AsymmetryIsReportedWithMagnitude) {
  const auto r = validate_metric(std::vector<double>{0, 1, 2, 0}, 2);
  ASSERT_FALSE(r.passed);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].axiom, Axiom::kSymmetry);
  EXPECT_EQ(r.violations[0].i, 0u);
  EXPECT_EQ(r.violations[0].j, 1u);
  EXPECT_DOUBLE_EQ(r.violations[0].magnitude, 1.0);
}

TEST(ValidateMetric, TriangleDefectNamesWorstTriple) {
  // d(0,2) = 5 > d(0,1) + d(1,2) = 2
  const std::vector<double> d{0, 1, 5,  //
                              1, 0, 1,  //
                              5, 1, 0};
  const auto r = validate_metric(d, 3);
  ASSERT_FALSE(r.passed);
  ASSERT_EQ(r.violations.size(), 1u);
  const auto& v = r.violations[0];
  EXPECT_EQ(v.axiom, Axiom::kTriangle);
  EXPECT_EQ(v.i, 0u);
  EXPECT_EQ(v.j, 2u);
  EXPECT_EQ(v.k, 1u);
  EXPECT_DOUBLE_EQ(v.magnitude, 3.0);
  EXPECT_NE(r.summary().find("triangle"), std::string::npos);
}

TEST(ValidateMetric, ZeroDiagonalAndPositivity) {
  auto r = validate_metric(std::vector<double>{0.5, 1, 1, 0}, 2);
  ASSERT_FALSE(r.passed);
  EXPECT_EQ(r.violations[0].axiom, Axiom::kZeroDiagonal);

  r = validate_metric(std::vector<double>{0, 0, 0, 0}, 2);
  ASSERT_FALSE(r.passed);
  EXPECT_EQ(r.violations[0].axiom, Axiom::kPositivity);
}

TEST(ValidateMetric, ToleranceAbsorbsSmallTriangleDefects) {
  const std::vector<double> d{0, 1, 2 + 1e-10,  //
                              1, 0, 1,          //
                              2 + 1e-10, 1, 0};
  EXPECT_TRUE(validate_metric(d, 3, 1e-9).passed);
  EXPECT_FALSE(validate_metric(d, 3, 0.0).passed);
}

TEST(ValidateMetric, MalformedInputIsAnInputError) {
  EXPECT_THROW(validate_metric(std::vector<double>{0, 1, 1}, 2), InputError);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(validate_metric(std::vector<double>{0, nan, nan, 0}, 2),
               InputError);
  EXPECT_THROW(validate_metric(std::vector<std::vector<double>>{{0, 1}, {1}}),
               InputError);
}

TEST(FiniteMetricSpace, RejectsInvalidMatrices) {
  EXPECT_THROW(FiniteMetricSpace(2, {0, 1, 2, 0}), InputError);
  EXPECT_THROW(FiniteMetricSpace(0, {}), InputError);
  EXPECT_NO_THROW(FiniteMetricSpace(1, {0.0}));
}

TEST(Apsp, PathGraph) {
  const auto s = apsp_from_graph({3, {{0, 1, 1.0}, {1, 2, 1.0}}});
  EXPECT_EQ(s(0, 2), 2.0);
  EXPECT_EQ(s(2, 0), 2.0);
}

TEST(Apsp, FourCycle) {
  const auto s =
      apsp_from_graph({4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}}});
  EXPECT_EQ(s(0, 2), 2.0);
  EXPECT_EQ(s(1, 3), 2.0);
}

TEST(Apsp, SierpinskiLevelThreeMatchesBfs) {
  const auto graph = sierpinski_graph(3, 1.0);
  const auto s = apsp_from_graph(graph);
  const std::vector<std::pair<Index, Index>> pairs{
      {0, 14}, {3, 9}, {1, 41}, {7, 22}, {12, 40}};
  for (const auto& [a, b] : pairs) {
    ASSERT_LT(b, s.size());
    const auto hops = oracle::bfs_hops(graph.n_vertices, graph.edges, a);
    EXPECT_EQ(s(a, b), static_cast<double>(hops[b])) << a << "," << b;
  }
}

TEST(Apsp, AgreesWithFloydWarshallOnRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const auto g = oracle::random_graph(rng, 2 + k);
    const auto s = apsp_from_graph(g);
    const auto fw = oracle::floyd_warshall(g);
    for (Index i = 0; i < g.n_vertices; ++i) {
      for (Index j = 0; j < g.n_vertices; ++j) {
        EXPECT_NEAR(s(i, j), fw[i * g.n_vertices + j], 1e-12);
      }
    }
  }
}

TEST(Apsp, OutputSatisfiesAxiomsWithinAccumulationBound) {
  std::mt19937_64 rng(12);
  const auto g = oracle::random_graph(rng, 40, 0.3);
  const auto s = apsp_from_graph(g);
  const double bound = 40 * 2.0 * std::numeric_limits<double>::epsilon();
  EXPECT_TRUE(validate_metric(s.matrix(), s.size(), bound).passed);
}

TEST(Apsp, IdempotentOnCompleteGraphOfItsOutput) {
  std::mt19937_64 rng(13);
  const auto s = apsp_from_graph(oracle::random_graph(rng, 25));
  GraphSpec complete{s.size(), {}};
  for (Index i = 0; i < s.size(); ++i) {
    for (Index j = i + 1; j < s.size(); ++j) complete.edges.push_back({i, j, s(i, j)});
  }
  const auto again = apsp_from_graph(complete);
  for (Index i = 0; i < s.size(); ++i) {
    // A two-hop sum may round one ulp below the direct entry.
    for (Index j = 0; j < s.size(); ++j) EXPECT_DOUBLE_EQ(again(i, j), s(i, j));
  }
}

TEST(Apsp, DisconnectedGraphNamesUnreachablePair) {
  try {
    apsp_from_graph({3, {{0, 1, 1.0}}});
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("vertex 2 is unreachable from vertex 0"),
              std::string::npos);
  }
}

TEST(Apsp, RejectsBadEdges) {
  EXPECT_THROW(apsp_from_graph({2, {{0, 0, 1.0}}}), InputError);
  EXPECT_THROW(apsp_from_graph({2, {{0, 1, 0.0}}}), InputError);
  EXPECT_THROW(apsp_from_graph({2, {{0, 1, -1.0}}}), InputError);
  EXPECT_THROW(apsp_from_graph({2, {{0, 5, 1.0}}}), InputError);
}

double brute_defect(const FiniteMetricSpace& m) {
  double worst = 0.0;
  for (Index x = 0; x < m.size(); ++x) {
    for (Index y = 0; y < m.size(); ++y) {
      const double half = m(x, y) / 2;
      double best = std::numeric_limits<double>::infinity();
      for (Index z = 0; z < m.size(); ++z) {
        best = std::min(best, std::max(std::abs(m(x, z) - half),
                                       std::abs(m(z, y) - half)));
      }
      worst = std::max(worst, best);
    }
  }
  return worst;
}

TEST(GeodesicityDefect, FourCycle) {
  // Opposite corners have exact midpoints; adjacent ones have none.
  const auto s =
      apsp_from_graph({4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}}});
  EXPECT_EQ(geodesicity_defect(s), 0.5);
  EXPECT_EQ(brute_defect(s), 0.5);
}

TEST(GeodesicityDefect, TwoPointSpace) {
  EXPECT_EQ(geodesicity_defect(FiniteMetricSpace(2, {0, 1, 1, 0})), 0.5);
}

TEST(GeodesicityDefect, CirclesWithinHalfEdge) {
  for (Index n : {8, 16, 32}) {
    const auto c = make_circle(n);
    const double d = geodesicity_defect(c);
    EXPECT_DOUBLE_EQ(d, brute_defect(c));
    EXPECT_LE(d, kPi / static_cast<double>(n) + 1e-12);
  }
}

TEST(GeodesicityDefect, CircleBoundAcrossSizes) {
  for (Index n = 8; n <= 1024; n *= 2) {
    EXPECT_LE(geodesicity_defect(make_circle(n)),
              2 * kPi / (2 * static_cast<double>(n)) + 1e-12);
  }
}

TEST(Generators, CircleHalfCircumference) {
  const auto c = make_circle(4);
  EXPECT_DOUBLE_EQ(c(0, 2), kPi);
  EXPECT_DOUBLE_EQ(c(0, 1), kPi / 2);
  EXPECT_DOUBLE_EQ(c.diameter(), kPi);
}

TEST(Generators, CircleMatchesCycleGraph) {
  const Index n = 37;
  GraphSpec cycle{n, {}};
  for (Index i = 0; i < n; ++i) cycle.edges.push_back({i, (i + 1) % n, 2 * kPi / n});
  const auto fw = oracle::floyd_warshall(cycle);
  const auto c = make_circle(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) EXPECT_NEAR(c(i, j), fw[i * n + j], 1e-12);
  }
}

TEST(Generators, IntervalSpacing) {
  const auto s = make_interval(3, 2.0);
  EXPECT_EQ(s(0, 2), 2.0);
  EXPECT_EQ(s(0, 1), 1.0);
  ASSERT_EQ(s.coords().size(), 3u);
  EXPECT_EQ(s.coords()[2][0], 2.0);
}

TEST(Generators, SierpinskiLevelOne) {
  const auto s = make_sierpinski(1);
  EXPECT_EQ(s.size(), 6u);
  EXPECT_DOUBLE_EQ(s.diameter(), 1.0);
}

TEST(Generators, SierpinskiSizesAndDiameter) {
  for (int level = 0; level <= 4; ++level) {
    const auto s = make_sierpinski(level);
    const double p = std::pow(3.0, level);
    EXPECT_EQ(s.size(), static_cast<Index>(3 * (p + 1) / 2)) << level;
    EXPECT_DOUBLE_EQ(s.diameter(), 1.0) << level;
    EXPECT_DOUBLE_EQ(s.min_separation(), std::ldexp(1.0, -level)) << level;
  }
}

TEST(Generators, OutputsPassFullValidation) {
  for (const auto& s : {make_circle(3), make_circle(64), make_interval(2, 1.0),
                        make_interval(100, 3.0), make_sierpinski(0),
                        make_sierpinski(3)}) {
    EXPECT_TRUE(validate_metric(s.matrix(), s.size(), 1e-9).passed);
  }
}

TEST(Generators, RejectOutOfRangeParameters) {
  EXPECT_THROW(make_circle(2), InputError);
  EXPECT_THROW(make_interval(1, 1.0), InputError);
  EXPECT_THROW(make_interval(5, 0.0), InputError);
  EXPECT_THROW(make_sierpinski(-1), InputError);
  EXPECT_THROW(make_sierpinski(kMaxSierpinskiLevel + 1), InputError);
}

}  // namespace
