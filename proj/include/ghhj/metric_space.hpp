#ifndef GHHJ_METRIC_SPACE_HPP_
#define GHHJ_METRIC_SPACE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ghhj/core.hpp"

namespace ghhj {

inline constexpr double kDefaultMetricTol = 1e-9;

enum class Axiom { kZeroDiagonal, kSymmetry, kPositivity, kTriangle };

inline const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::kZeroDiagonal: return "zero-diagonal";
    case Axiom::kSymmetry: return "symmetry";
    case Axiom::kPositivity: return "positivity";
    case Axiom::kTriangle: return "triangle";
  }
  return "unknown";
}

// Worst offender for one axiom. For the triangle axiom the defect is
// d(i,j) - d(i,k) - d(k,j); for two-index axioms k is unused.
struct Violation {
  Axiom axiom;
  Index i = 0;
  Index j = 0;
  Index k = 0;
  double magnitude = 0.0;
};

struct ValidationReport {
  bool passed = true;
  std::vector<Violation> violations;

  std::string summary() const {
    if (passed) return "metric ok";
    std::ostringstream out;
    out.precision(17);
    for (const auto& v : violations) {
      out << axiom_name(v.axiom) << " violated at (" << v.i << "," << v.j;
      if (v.axiom == Axiom::kTriangle) out << "," << v.k;
      out << "), magnitude " << v.magnitude << "\n";
    }
    return out.str();
  }
};

// Checks the metric axioms on a row-major n x n matrix. The triangle sweep is
// O(n^3).
inline ValidationReport validate_metric(std::span<const double> dist, Index n,
                                        double tol_metric = kDefaultMetricTol,
                                        bool check_triangle = true) {
  detail::require(dist.size() == n * n,
                  "malformed metric: matrix is not square (" +
                      std::to_string(dist.size()) + " entries for n=" +
                      std::to_string(n) + ")");
  for (Index e = 0; e < dist.size(); ++e) {
    detail::require(std::isfinite(dist[e]),
                    "malformed metric: non-finite entry at (" +
                        std::to_string(e / n) + "," + std::to_string(e % n) +
                        ")");
  }
  auto at = [&](Index i, Index j) { return dist[i * n + j]; };
  ValidationReport report;

  Violation diag{Axiom::kZeroDiagonal};
  Violation sym{Axiom::kSymmetry};
  Violation pos{Axiom::kPositivity};
  bool bad_diag = false, bad_sym = false, bad_pos = false;
  for (Index i = 0; i < n; ++i) {
    if (at(i, i) != 0.0 && std::abs(at(i, i)) > diag.magnitude) {
      diag = {Axiom::kZeroDiagonal, i, i, 0, std::abs(at(i, i))};
      bad_diag = true;
    }
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double asym = std::abs(at(i, j) - at(j, i));
      if (i < j && asym > 0.0 && asym > sym.magnitude) {
        sym = {Axiom::kSymmetry, i, j, 0, asym};
        bad_sym = true;
      }
      if (at(i, j) <= 0.0 && (!bad_pos || -at(i, j) > pos.magnitude)) {
        pos = {Axiom::kPositivity, i, j, 0, -at(i, j)};
        bad_pos = true;
      }
    }
  }
  if (bad_diag) report.violations.push_back(diag);
  if (bad_sym) report.violations.push_back(sym);
  if (bad_pos) report.violations.push_back(pos);

  if (check_triangle) {
    Violation tri{Axiom::kTriangle};
    bool bad_tri = false;
    for (Index i = 0; i < n; ++i) {
      const double* row_i = dist.data() + i * n;
      for (Index k = 0; k < n; ++k) {
        const double dik = row_i[k];
        const double* row_k = dist.data() + k * n;
        double worst = -std::numeric_limits<double>::infinity();
        for (Index j = 0; j < n; ++j) {
          const double defect = row_i[j] - dik - row_k[j];
          worst = defect > worst ? defect : worst;
        }
        if (worst > tol_metric && (!bad_tri || worst > tri.magnitude)) {
          for (Index j = 0; j < n; ++j) {
            if (row_i[j] - dik - row_k[j] == worst) {
              tri = {Axiom::kTriangle, i, j, k, worst};
              bad_tri = true;
              break;
            }
          }
        }
      }
    }
    if (bad_tri) report.violations.push_back(tri);
  }
  report.passed = report.violations.empty();
  return report;
}

inline ValidationReport validate_metric(
    const std::vector<std::vector<double>>& rows,
    double tol_metric = kDefaultMetricTol) {
  const Index n = rows.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (Index i = 0; i < n; ++i) {
    detail::require(rows[i].size() == n,
                    "malformed metric: row " + std::to_string(i) + " has " +
                        std::to_string(rows[i].size()) + " entries, expected " +
                        std::to_string(n));
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return validate_metric(flat, n, tol_metric);
}

// kStructural skips the O(n^3) triangle sweep. Generators and shortest-path
// constructions use it: their output is a path metric by construction.
enum class Validation { kFull, kStructural };

// N points with a dense symmetric distance matrix. Immutable after
// construction.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(Index n, std::vector<double> dist,
                    double tol_metric = kDefaultMetricTol,
                    Validation mode = Validation::kFull,
                    std::vector<std::string> labels = {},
                    std::vector<std::vector<double>> coords = {})
      : n_(n),
        dist_(std::move(dist)),
        labels_(std::move(labels)),
        coords_(std::move(coords)) {
    detail::require(n_ > 0, "metric space needs at least one point");
    const auto report =
        validate_metric(dist_, n_, tol_metric, mode == Validation::kFull);
    detail::require(report.passed, "invalid metric: " + report.summary());
    detail::require(labels_.empty() || labels_.size() == n_,
                    "label count does not match point count");
    detail::require(coords_.empty() || coords_.size() == n_,
                    "coordinate count does not match point count");
    for (double d : dist_) diameter_ = std::max(diameter_, d);
  }

  Index size() const noexcept { return n_; }
  double operator()(Index i, Index j) const noexcept {
    return dist_[i * n_ + j];
  }
  std::span<const double> row(Index i) const noexcept {
    return {dist_.data() + i * n_, n_};
  }
  std::span<const double> matrix() const noexcept { return dist_; }
  double diameter() const noexcept { return diameter_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::vector<double>>& coords() const noexcept {
    return coords_;
  }

  // Distance from each point to its nearest other point (0 for a singleton).
  std::vector<double> nearest_neighbor_distances() const {
    std::vector<double> nn(n_, 0.0);
    if (n_ < 2) return nn;
    for (Index i = 0; i < n_; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < n_; ++j) {
        if (j != i) best = std::min(best, (*this)(i, j));
      }
      nn[i] = best;
    }
    return nn;
  }

  double min_separation() const {
    const auto nn = nearest_neighbor_distances();
    return n_ < 2 ? 0.0 : *std::min_element(nn.begin(), nn.end());
  }

 private:
  Index n_;
  std::vector<double> dist_;
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> coords_;
  double diameter_ = 0.0;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

template <typename... Args>
SpacePtr make_space(Args&&... args) {
  return std::make_shared<const FiniteMetricSpace>(
      std::forward<Args>(args)...);
}

struct Edge {
  Index i;
  Index j;
  double weight;
};

struct GraphSpec {
  Index n_vertices = 0;
  std::vector<Edge> edges;
};

// All-pairs shortest paths by Dijkstra from every vertex. Entries are
// symmetrized by taking the smaller of the two directed sums; the triangle
// inequality then holds up to accumulated rounding of order
// n_vertices * max_weight * machine epsilon.
inline FiniteMetricSpace apsp_from_graph(
    const GraphSpec& g, std::vector<std::string> labels = {},
    std::vector<std::vector<double>> coords = {}) {
  const Index n = g.n_vertices;
  detail::require(n > 0, "graph needs at least one vertex");
  std::vector<std::vector<std::pair<Index, double>>> adj(n);
  for (const auto& e : g.edges) {
    detail::require(e.i < n && e.j < n, "edge endpoint out of range");
    detail::require(e.i != e.j,
                    "self-loop at vertex " + std::to_string(e.i));
    detail::require(std::isfinite(e.weight) && e.weight > 0.0,
                    "edge weights must be finite and strictly positive");
    adj[e.i].emplace_back(e.j, e.weight);
    adj[e.j].emplace_back(e.i, e.weight);
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n * n, kInf);
  parallel_for(n, [&](Index s) {
    double* out = dist.data() + s * n;
    out[s] = 0.0;
    using Item = std::pair<double, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > out[u]) continue;
      for (const auto& [v, w] : adj[u]) {
        if (d + w < out[v]) {
          out[v] = d + w;
          heap.emplace(out[v], v);
        }
      }
    }
  });
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      detail::require(std::isfinite(dist[i * n + j]),
                      "graph is disconnected: vertex " + std::to_string(j) +
                          " is unreachable from vertex " + std::to_string(i));
      const double d = std::min(dist[i * n + j], dist[j * n + i]);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }
  return FiniteMetricSpace(n, std::move(dist), kDefaultMetricTol,
                           Validation::kStructural, std::move(labels),
                           std::move(coords));
}

// Worst approximate-midpoint error:
//   max_{x,y} min_z max(|d(x,z) - d(x,y)/2|, |d(z,y) - d(x,y)/2|).
// Zero iff every pair has an exact midpoint.
inline double geodesicity_defect(const FiniteMetricSpace& m) {
  const Index n = m.size();
  std::vector<double> per_row(n, 0.0);
  parallel_for(n, [&](Index x) {
    const auto row_x = m.row(x);
    double worst = 0.0;
    for (Index y = x + 1; y < n; ++y) {
      const double half = 0.5 * row_x[y];
      const auto row_y = m.row(y);
      double best = std::numeric_limits<double>::infinity();
      for (Index z = 0; z < n; ++z) {
        const double err =
            std::max(std::abs(row_x[z] - half), std::abs(row_y[z] - half));
        best = err < best ? err : best;
      }
      worst = std::max(worst, best);
    }
    per_row[x] = worst;
  });
  double worst = 0.0;
  for (double w : per_row) worst = std::max(worst, w);
  return worst;
}

// Cycle graph C_n with edge weight 2*pi/n: total circumference 2*pi.
inline FiniteMetricSpace make_circle(Index n) {
  detail::require(n >= 3, "make_circle needs n >= 3");
  const double edge = 2.0 * std::numbers::pi / static_cast<double>(n);
  std::vector<double> dist(n * n);
  std::vector<std::vector<double>> coords(n);
  for (Index i = 0; i < n; ++i) {
    const double angle = static_cast<double>(i) * edge;
    coords[i] = {std::cos(angle), std::sin(angle)};
    for (Index j = 0; j < n; ++j) {
      const Index k = i > j ? i - j : j - i;
      dist[i * n + j] = static_cast<double>(std::min(k, n - k)) * edge;
    }
  }
  return FiniteMetricSpace(n, std::move(dist), kDefaultMetricTol,
                           Validation::kStructural, {}, std::move(coords));
}

// Path graph with n points spaced uniformly over [0, length]. The single
// coordinate of point i is i * length / (n - 1).
inline FiniteMetricSpace make_interval(Index n, double length) {
  detail::require(n >= 2, "make_interval needs n >= 2");
  detail::require(std::isfinite(length) && length > 0.0,
                  "make_interval needs a positive length");
  const double mesh = length / static_cast<double>(n - 1);
  std::vector<double> dist(n * n);
  std::vector<std::vector<double>> coords(n);
  for (Index i = 0; i < n; ++i) {
    coords[i] = {static_cast<double>(i) * mesh};
    for (Index j = 0; j < n; ++j) {
      const Index k = i > j ? i - j : j - i;
      dist[i * n + j] = static_cast<double>(k) * mesh;
    }
  }
  return FiniteMetricSpace(n, std::move(dist), kDefaultMetricTol,
                           Validation::kStructural, {}, std::move(coords));
}

inline constexpr int kMaxSierpinskiLevel = 7;

// Vertices of the level-L gasket graph in integer triangular-lattice
// coordinates (a, b), side 2^L, sorted by (b, a). Point (a, b) sits at
// (a + b/2, b*sqrt(3)/2) before scaling.
struct SierpinskiLattice {
  int level = 0;
  std::vector<std::pair<long, long>> points;
  std::map<std::pair<long, long>, Index> index;
  std::vector<std::pair<Index, Index>> edges;
};

inline SierpinskiLattice sierpinski_lattice(int level) {
  detail::require(level >= 0 && level <= kMaxSierpinskiLevel,
                  "make_sierpinski level must be in [0, " +
                      std::to_string(kMaxSierpinskiLevel) + "]");
  std::vector<std::array<std::pair<long, long>, 3>> cells;
  std::function<void(long, long, long)> subdivide = [&](long a, long b,
                                                        long side) {
    if (side == 1) {
      cells.push_back({{{a, b}, {a + 1, b}, {a, b + 1}}});
      return;
    }
    const long half = side / 2;
    subdivide(a, b, half);
    subdivide(a + half, b, half);
    subdivide(a, b + half, half);
  };
  subdivide(0, 0, 1L << level);

  SierpinskiLattice lat;
  lat.level = level;
  for (const auto& cell : cells) {
    for (const auto& p : cell) lat.index.emplace(p, 0);
  }
  std::vector<std::pair<long, long>> sorted;
  for (const auto& [p, unused] : lat.index) sorted.push_back(p);
  std::sort(sorted.begin(), sorted.end(), [](const auto& l, const auto& r) {
    return std::pair(l.second, l.first) < std::pair(r.second, r.first);
  });
  for (Index i = 0; i < sorted.size(); ++i) lat.index[sorted[i]] = i;
  lat.points = std::move(sorted);
  for (const auto& cell : cells) {
    for (int e = 0; e < 3; ++e) {
      Index u = lat.index.at(cell[e]);
      Index v = lat.index.at(cell[(e + 1) % 3]);
      lat.edges.emplace_back(std::min(u, v), std::max(u, v));
    }
  }
  return lat;
}

inline GraphSpec sierpinski_graph(int level, double edge_weight) {
  const auto lat = sierpinski_lattice(level);
  GraphSpec g{lat.points.size(), {}};
  for (const auto& [u, v] : lat.edges) g.edges.push_back({u, v, edge_weight});
  return g;
}

// Gasket graph at the given level with edge weight 2^-level, so the outer
// triangle has side 1 and the diameter is 1 at every level.
inline FiniteMetricSpace make_sierpinski(int level) {
  const auto lat = sierpinski_lattice(level);
  const double edge = std::ldexp(1.0, -level);
  std::vector<std::vector<double>> coords;
  coords.reserve(lat.points.size());
  for (const auto& [a, b] : lat.points) {
    coords.push_back({edge * (static_cast<double>(a) + 0.5 * b),
                      edge * (std::sqrt(3.0) / 2.0) * static_cast<double>(b)});
  }
  return apsp_from_graph(sierpinski_graph(level, edge), {}, std::move(coords));
}

}  // namespace ghhj

#endif  // GHHJ_METRIC_SPACE_HPP_
