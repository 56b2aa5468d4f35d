#ifndef GHHJ_TRANSPORT_SIMPLEX_HPP_
#define GHHJ_TRANSPORT_SIMPLEX_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "ghhj/core.hpp"

namespace ghhj {

// Transportation simplex (the bipartite special case of network simplex) for
//
//   min sum_ij c_ij x_ij   s.t.  sum_j x_ij = a_i,  sum_i x_ij = b_j,  x >= 0.
//
// The basis is a spanning tree on the m + n row/column nodes with exactly
// m + n - 1 cells (degenerate cells carry zero flow). Row and column
// potentials satisfy u_i + v_j = c_ij on the tree; optimality is
// u_i + v_j <= c_ij everywhere, which makes (u, v) an optimal solution of the
// dual  max sum a_i u_i + sum b_j v_j  s.t.  u_i + v_j <= c_ij.

struct BasicCell {
  Index row = 0;
  Index col = 0;
  double flow = 0.0;
};

struct TransportSolution {
  std::vector<BasicCell> basis;
  std::vector<double> row_potential;
  std::vector<double> col_potential;
  double primal_cost = 0.0;
  double dual_objective = 0.0;
  // max over all cells of (u_i + v_j - c_ij), clamped at 0.
  double max_dual_infeasibility = 0.0;
  std::size_t pivots = 0;
};

struct TransportOptions {
  // Reduced costs above -tolerance * max(1, max|c|) count as nonnegative.
  double tolerance = 1e-13;
  // 0 selects 50 * m * n + 1000.
  std::size_t max_pivots = 0;
};

namespace detail {

class TransportTableau {
 public:
  TransportTableau(std::span<const double> supply,
                   std::span<const double> demand, std::span<const double> cost)
      : m_(supply.size()),
        n_(demand.size()),
        cost_(cost),
        adjacency_(m_ + n_),
        u_(m_),
        v_(n_) {
    northwest_corner(supply, demand);
  }

  TransportSolution solve(const TransportOptions& options) {
    double scale = 1.0;
    for (double c : cost_) scale = std::max(scale, std::abs(c));
    const double tol = options.tolerance * scale;
    const std::size_t max_pivots =
        options.max_pivots ? options.max_pivots : 50 * m_ * n_ + 1000;

    std::size_t pivots = 0;
    std::size_t degenerate_streak = 0;
    bool bland = false;
    while (true) {
      compute_potentials();
      Index enter_row = 0, enter_col = 0;
      if (!select_entering(tol, bland, enter_row, enter_col)) break;
      if (pivots == max_pivots) {
        throw SolverError("iteration-limit",
                          "transport simplex did not converge after " +
                              std::to_string(pivots) + " pivots");
      }
      const double theta = pivot(enter_row, enter_col, bland);
      ++pivots;
      degenerate_streak = theta > 0.0 ? 0 : degenerate_streak + 1;
      // Bland's smallest-index rule from here on rules out cycling.
      if (degenerate_streak > m_ + n_) bland = true;
    }
    return finish(pivots);
  }

 private:
  double c(Index i, Index j) const { return cost_[i * n_ + j]; }

  void add_cell(Index i, Index j, double flow) {
    const Index id = cells_.size();
    cells_.push_back({i, j, flow});
    alive_.push_back(true);
    adjacency_[i].push_back(id);
    adjacency_[m_ + j].push_back(id);
  }

  void remove_cell(Index id) {
    alive_[id] = false;
    for (Index node : {cells_[id].row, m_ + cells_[id].col}) {
      auto& adj = adjacency_[node];
      adj.erase(std::find(adj.begin(), adj.end(), id));
    }
  }

  // Staircase start: every step advances exactly one of (i, j), giving
  // m + n - 1 cells that form a spanning tree.
  void northwest_corner(std::span<const double> supply,
                        std::span<const double> demand) {
    std::vector<double> a(supply.begin(), supply.end());
    std::vector<double> b(demand.begin(), demand.end());
    Index i = 0, j = 0;
    while (true) {
      const double x = std::max(0.0, std::min(a[i], b[j]));
      add_cell(i, j, x);
      a[i] -= x;
      b[j] -= x;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (j == n_ - 1 || (i < m_ - 1 && a[i] <= b[j])) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void compute_potentials() {
    std::vector<bool> seen(m_ + n_, false);
    std::vector<Index> stack{0};
    seen[0] = true;
    u_[0] = 0.0;
    while (!stack.empty()) {
      const Index node = stack.back();
      stack.pop_back();
      for (Index id : adjacency_[node]) {
        const auto& cell = cells_[id];
        const Index other = node < m_ ? m_ + cell.col : cell.row;
        if (seen[other]) continue;
        seen[other] = true;
        if (node < m_) {
          v_[cell.col] = c(cell.row, cell.col) - u_[cell.row];
        } else {
          u_[cell.row] = c(cell.row, cell.col) - v_[cell.col];
        }
        stack.push_back(other);
      }
    }
  }

  bool select_entering(double tol, bool bland, Index& row, Index& col) const {
    double best = -tol;
    bool found = false;
    for (Index i = 0; i < m_; ++i) {
      for (Index j = 0; j < n_; ++j) {
        const double reduced = c(i, j) - u_[i] - v_[j];
        if (reduced < best) {
          best = reduced;
          row = i;
          col = j;
          found = true;
          if (bland) return true;
        }
      }
    }
    return found;
  }

  // Pushes theta around the cycle closed by the entering cell and drops the
  // blocking cell. Returns theta.
  double pivot(Index row, Index col, bool bland) {
    // Tree path from the entering column node back to the entering row node.
    const Index root = m_ + col;
    std::vector<Index> parent_cell(m_ + n_, kNone);
    std::vector<Index> parent_node(m_ + n_, kNone);
    std::vector<bool> seen(m_ + n_, false);
    std::queue<Index> frontier;
    frontier.push(root);
    seen[root] = true;
    while (!frontier.empty() && !seen[row]) {
      const Index node = frontier.front();
      frontier.pop();
      for (Index id : adjacency_[node]) {
        const auto& cell = cells_[id];
        const Index other = node < m_ ? m_ + cell.col : cell.row;
        if (seen[other]) continue;
        seen[other] = true;
        parent_cell[other] = id;
        parent_node[other] = node;
        frontier.push(other);
      }
    }
    std::vector<Index> cycle;  // alternating -, +, -, ... starting at row
    for (Index node = row; node != root; node = parent_node[node]) {
      cycle.push_back(parent_cell[node]);
    }
    Index leaving = kNone;
    double theta = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < cycle.size(); k += 2) {
      const auto& cell = cells_[cycle[k]];
      const bool better =
          cell.flow < theta ||
          (bland && cell.flow == theta &&
           cell.row * n_ + cell.col <
               cells_[leaving].row * n_ + cells_[leaving].col);
      if (better) {
        theta = cell.flow;
        leaving = cycle[k];
      }
    }
    theta = std::max(0.0, theta);
    for (Index k = 0; k < cycle.size(); ++k) {
      auto& cell = cells_[cycle[k]];
      cell.flow = k % 2 == 0 ? std::max(0.0, cell.flow - theta)
                             : cell.flow + theta;
    }
    remove_cell(leaving);
    add_cell(row, col, theta);
    return theta;
  }

  TransportSolution finish(std::size_t pivots) const {
    TransportSolution s;
    s.pivots = pivots;
    s.row_potential = u_;
    s.col_potential = v_;
    std::vector<double> terms;
    for (Index id = 0; id < cells_.size(); ++id) {
      if (!alive_[id]) continue;
      s.basis.push_back(cells_[id]);
      terms.push_back(c(cells_[id].row, cells_[id].col) * cells_[id].flow);
    }
    std::sort(s.basis.begin(), s.basis.end(), [](const auto& l, const auto& r) {
      return l.row != r.row ? l.row < r.row : l.col < r.col;
    });
    s.primal_cost = compensated_sum(terms);
    for (Index i = 0; i < m_; ++i) {
      for (Index j = 0; j < n_; ++j) {
        s.max_dual_infeasibility =
            std::max(s.max_dual_infeasibility, u_[i] + v_[j] - c(i, j));
      }
    }
    return s;
  }

  static constexpr Index kNone = std::numeric_limits<Index>::max();

  Index m_;
  Index n_;
  std::span<const double> cost_;
  std::vector<BasicCell> cells_;
  std::vector<bool> alive_;
  std::vector<std::vector<Index>> adjacency_;
  std::vector<double> u_;
  std::vector<double> v_;
};

}  // namespace detail

// Solves the balanced transportation problem exactly (up to floating point).
// cost is row-major m x n. Supplies and demands must be nonnegative with
// equal totals.
inline TransportSolution solve_transport(std::span<const double> supply,
                                         std::span<const double> demand,
                                         std::span<const double> cost,
                                         const TransportOptions& options = {}) {
  detail::require(!supply.empty() && !demand.empty(),
                  "transport problem needs at least one source and one sink");
  detail::require(cost.size() == supply.size() * demand.size(),
                  "cost matrix shape does not match the marginals");
  for (double w : supply) {
    detail::require(std::isfinite(w) && w >= 0.0, "supplies must be >= 0");
  }
  for (double w : demand) {
    detail::require(std::isfinite(w) && w >= 0.0, "demands must be >= 0");
  }
  for (double c : cost) {
    detail::require(std::isfinite(c), "costs must be finite");
  }
  const double total_supply = compensated_sum(supply);
  const double total_demand = compensated_sum(demand);
  if (std::abs(total_supply - total_demand) >
      1e-9 * std::max(1.0, total_supply)) {
    throw SolverError("infeasible",
                      "unbalanced transport problem: supply " +
                          std::to_string(total_supply) + " vs demand " +
                          std::to_string(total_demand));
  }
  detail::TransportTableau tableau(supply, demand, cost);
  auto solution = tableau.solve(options);
  solution.dual_objective =
      compensated_dot(supply, solution.row_potential) +
      compensated_dot(demand, solution.col_potential);
  return solution;
}

}  // namespace ghhj

#endif  // GHHJ_TRANSPORT_SIMPLEX_HPP_
