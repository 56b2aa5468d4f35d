#ifndef GHHJ_KANTOROVICH_HPP_
#define GHHJ_KANTOROVICH_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ghhj/core.hpp"
#include "ghhj/gh_maps.hpp"
#include "ghhj/hopf_lax.hpp"
#include "ghhj/metric_space.hpp"
#include "ghhj/transport_simplex.hpp"

namespace ghhj {

inline constexpr double kMeasureTol = 1e-12;

// Probability weights on the points of a space. Zero-weight points stay in
// the space.
class Measure {
 public:
  Measure(SpacePtr space, std::vector<double> weights)
      : space_(std::move(space)), weights_(std::move(weights)) {
    detail::require(space_ != nullptr, "measure needs a space");
    detail::require(weights_.size() == space_->size(),
                    "measure has " + std::to_string(weights_.size()) +
                        " weights, space has " +
                        std::to_string(space_->size()) + " points");
    for (double w : weights_) {
      detail::require(std::isfinite(w) && w >= 0.0,
                      "measure weights must be finite and >= 0");
    }
    const double total = compensated_sum(weights_);
    detail::require(std::abs(total - 1.0) <= kMeasureTol,
                    "measure weights sum to " + std::to_string(total) +
                        ", expected 1");
  }

  static Measure uniform(const SpacePtr& space) {
    const Index n = space->size();
    return Measure(space, std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  static Measure delta(const SpacePtr& space, Index point) {
    detail::require(point < space->size(), "delta point out of range");
    std::vector<double> w(space->size(), 0.0);
    w[point] = 1.0;
    return Measure(space, std::move(w));
  }

  const SpacePtr& space() const noexcept { return space_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double operator[](Index i) const noexcept { return weights_[i]; }
  Index size() const noexcept { return weights_.size(); }

  std::vector<Index> support() const {
    std::vector<Index> s;
    for (Index i = 0; i < weights_.size(); ++i) {
      if (weights_[i] > 0.0) s.push_back(i);
    }
    return s;
  }

 private:
  SpacePtr space_;
  std::vector<double> weights_;
};

// Dense coupling of two measures on one space, row-major N x N.
struct TransportPlan {
  Measure source;
  Measure target;
  std::vector<double> coupling;

  double at(Index i, Index j) const { return coupling[i * source.size() + j]; }

  // Largest deviation of a row or column sum from its marginal.
  double max_marginal_error() const {
    const Index n = source.size();
    double worst = 0.0;
    for (Index i = 0; i < n; ++i) {
      worst = std::max(
          worst,
          std::abs(compensated_sum(std::span(coupling).subspan(i * n, n)) -
                   source[i]));
    }
    for (Index j = 0; j < n; ++j) {
      std::vector<double> column(n);
      for (Index i = 0; i < n; ++i) column[i] = coupling[i * n + j];
      worst = std::max(worst, std::abs(compensated_sum(column) - target[j]));
    }
    return worst;
  }

  bool nonnegative() const {
    return std::all_of(coupling.begin(), coupling.end(),
                       [](double x) { return x >= 0.0; });
  }
};

struct W2Result {
  double w2 = 0.0;
  double cost = 0.0;  // W2^2 = sum pi_xy d(x,y)^2
  TransportPlan plan;
  // LP restricted to the supports; potentials are for the cost d^2.
  std::vector<Index> source_support;
  std::vector<Index> target_support;
  TransportSolution lp;
};

namespace detail {

inline void require_same_space(const SpacePtr& a, const SpacePtr& b,
                               const char* what) {
  require(a == b, std::string(what) + ": measures live on different spaces");
}

}  // namespace detail

// Exact W2 by the transportation simplex on the supports, with cost d^2.
inline W2Result w2_exact(const Measure& mu, const Measure& nu,
                         const TransportOptions& options = {}) {
  detail::require_same_space(mu.space(), nu.space(), "w2_exact");
  const auto& space = *mu.space();
  W2Result r{0.0, 0.0, TransportPlan{mu, nu, {}}, mu.support(), nu.support(),
             {}};
  const auto& rows = r.source_support;
  const auto& cols = r.target_support;
  std::vector<double> supply, demand, cost;
  for (Index i : rows) supply.push_back(mu[i]);
  for (Index j : cols) demand.push_back(nu[j]);
  cost.reserve(rows.size() * cols.size());
  for (Index i : rows) {
    for (Index j : cols) cost.push_back(space(i, j) * space(i, j));
  }
  r.lp = solve_transport(supply, demand, cost, options);
  const Index n = space.size();
  r.plan.coupling.assign(n * n, 0.0);
  for (const auto& cell : r.lp.basis) {
    r.plan.coupling[rows[cell.row] * n + cols[cell.col]] += cell.flow;
  }
  r.cost = std::max(0.0, r.lp.primal_cost);
  r.w2 = std::sqrt(r.cost);
  return r;
}

// int Q_1 phi d nu - int phi d mu
inline double dual_value(const Potential& phi, const Measure& mu,
                         const Measure& nu) {
  detail::require_same_space(mu.space(), nu.space(), "dual_value");
  detail::require(phi.space() == mu.space(),
                  "dual_value: potential and measures live on different "
                  "spaces");
  const auto q1 = c_transform(phi);
  return compensated_dot(q1.values(), nu.weights()) -
         compensated_dot(phi.values(), mu.weights());
}

struct DualSolution {
  Potential phi;    // d^2/2-convex maximizer on the mu side
  Potential phi_c;  // c_transform(phi)
  double dual_value = 0.0;
  double half_w2_squared = 0.0;
  double duality_gap = 0.0;  // half_w2_squared - dual_value
  int transform_passes = 0;
  W2Result primal;
};

inline constexpr double kDualityTol = 1e-9;

// Maximizer of the dual Kantorovich problem. The LP potentials (u, v) for
// cost d^2 give psi = v/2 on supp(nu) with psi(y) - (-u(x)/2) <= d(x,y)^2/2.
// The mu-side potential is extended to every point by
//   phi(x) = max_{y in supp nu} psi(y) - d(x,y)^2/2,
// which is d^2/2-convex, lies below -u/2 on supp(mu) and has phi^c >= psi
// on supp(nu), so it is optimal. It is then clipped from below at its minimum
// over supp(mu): the max of two d^2/2-convex functions is d^2/2-convex, the
// values on supp(mu) do not move, and phi^c can only grow, so the clipped
// function is still a maximizer, with smaller oscillation away from the
// supports. One double_transform then makes the convexity exact in floating
// point; a second is allowed if the gap is still above tolerance.
inline DualSolution solve_dual(const Measure& mu, const Measure& nu,
                               const TransportOptions& options = {}) {
  auto primal = w2_exact(mu, nu, options);
  const auto& space = *mu.space();
  const Index n = space.size();
  const double half_w2_sq = 0.5 * primal.cost;
  const double tol = kDualityTol * std::max(1.0, primal.cost);

  std::vector<double> extended(n);
  for (Index x = 0; x < n; ++x) {
    double best = -std::numeric_limits<double>::infinity();
    for (Index c = 0; c < primal.target_support.size(); ++c) {
      const Index y = primal.target_support[c];
      const double psi = 0.5 * primal.lp.col_potential[c];
      best = std::max(best, psi - 0.5 * space(x, y) * space(x, y));
    }
    extended[x] = best;
  }
  double floor = std::numeric_limits<double>::infinity();
  for (Index x : primal.source_support) floor = std::min(floor, extended[x]);
  for (double& v : extended) v = std::max(v, floor);
  Potential phi(mu.space(), std::move(extended));
  for (int pass = 1; pass <= 2; ++pass) {
    phi = double_transform(phi);
    const double value = dual_value(phi, mu, nu);
    const double gap = half_w2_sq - value;
    if (gap <= tol && gap >= -tol) {
      auto phi_c = c_transform(phi);
      return DualSolution{std::move(phi), std::move(phi_c), value, half_w2_sq,
                          gap,           pass,            std::move(primal)};
    }
  }
  throw SolverError("duality-gap",
                    "dual potentials from the transport LP leave a duality "
                    "gap above tolerance after two c-convexification passes");
}

// Shift so that phi vanishes at f'(z); returns (phi - c, c) with
// c = phi(f'(z)). f_prime maps the reference space into phi's space.
inline std::pair<Potential, double> normalize_maximizer(const Potential& phi,
                                                        const MetricMap& f_prime,
                                                        Index z) {
  detail::require(f_prime.target() == phi.space(),
                  "normalize_maximizer: f' must map into the potential's "
                  "space");
  detail::require(z < f_prime.source()->size(),
                  "normalize_maximizer: z out of range");
  const double c = phi[f_prime(z)];
  std::vector<double> shifted = phi.values();
  for (double& v : shifted) v -= c;
  return {Potential(phi.space(), std::move(shifted)), c};
}

// max_{x != y} |phi(x) - phi(y)| / (d(x,y)^2 / 2)
inline double lipschitz_wrt_half_dsq(const Potential& phi) {
  const auto& space = *phi.space();
  double worst = 0.0;
  for (Index x = 0; x < space.size(); ++x) {
    for (Index y = x + 1; y < space.size(); ++y) {
      const double d = space(x, y);
      worst = std::max(worst, std::abs(phi[x] - phi[y]) / (0.5 * d * d));
    }
  }
  return worst;
}

// max_{x != y} |phi(x) - phi(y)| / d(x,y)
inline double metric_lipschitz(const Potential& phi) {
  const auto& space = *phi.space();
  double worst = 0.0;
  for (Index x = 0; x < space.size(); ++x) {
    for (Index y = x + 1; y < space.size(); ++y) {
      worst = std::max(worst, std::abs(phi[x] - phi[y]) / space(x, y));
    }
  }
  return worst;
}

struct LipschitzReport {
  double half_dsq = 0.0;  // lipschitz_wrt_half_dsq
  double metric = 0.0;    // metric_lipschitz
  double diameter = 0.0;

  bool within_half_dsq_bound(double tol = 1e-9) const {
    return half_dsq <= 1.0 + tol;
  }
  bool within_half_diameter_bound(double tol = 1e-9) const {
    return metric <= 0.5 * diameter + tol;
  }
  // What d^2/2-convexity guarantees in general: |phi(x) - phi(y)| <=
  // diam * d(x,y).
  bool within_diameter_bound(double tol = 1e-9) const {
    return metric <= diameter + tol;
  }
};

inline LipschitzReport lipschitz_report(const Potential& phi) {
  return {lipschitz_wrt_half_dsq(phi), metric_lipschitz(phi),
          phi.space()->diameter()};
}

// (f)_# mu: target weight j = sum of mu over f^{-1}(j), summed in source
// order with compensation.
inline Measure pushforward(const MetricMap& f, const Measure& mu) {
  detail::require(mu.space() == f.source(),
                  "pushforward: measure is not on the map's source");
  std::vector<std::vector<double>> bins(f.target()->size());
  for (Index i = 0; i < mu.size(); ++i) bins[f(i)].push_back(mu[i]);
  std::vector<double> weights(bins.size());
  for (Index j = 0; j < bins.size(); ++j) weights[j] = compensated_sum(bins[j]);
  return Measure(f.target(), std::move(weights));
}

inline constexpr double kUniquenessTol = 1e-6;

// Heuristic certificate that the normalized maximizer is unique up to
// additive constants: re-solve with the marginals (the dual objective)
// perturbed in two directions and require the normalized potentials to agree
// within kUniquenessTol. A dual optimal face larger than a point lets a
// perturbed objective select a different vertex.
inline bool certify_unique_maximizer(const Measure& mu, const Measure& nu,
                                     Index z) {
  const auto& space = mu.space();
  detail::require(z < space->size(), "certify_unique_maximizer: z out of range");
  const auto shift_at_z = [z](const Potential& phi) {
    std::vector<double> v = phi.values();
    const double c = v[z];
    for (double& x : v) x -= c;
    return Potential(phi.space(), std::move(v));
  };
  const auto base = shift_at_z(solve_dual(mu, nu).phi);
  const auto perturb = [&](const Measure& m, int salt) {
    constexpr double kDelta = 1e-7;
    const Index n = m.size();
    std::vector<double> dir(n);
    for (Index i = 0; i < n; ++i) {
      dir[i] = 1.0 + static_cast<double>((i * (2 * salt + 1) + salt) % 5);
    }
    const double total = compensated_sum(dir);
    std::vector<double> w(n);
    for (Index i = 0; i < n; ++i) {
      w[i] = (1.0 - kDelta) * m[i] + kDelta * dir[i] / total;
    }
    const double sum = compensated_sum(w);
    for (double& x : w) x /= sum;
    return Measure(space, std::move(w));
  };
  for (int salt = 1; salt <= 2; ++salt) {
    const auto other =
        shift_at_z(solve_dual(perturb(mu, salt), perturb(nu, salt + 2)).phi);
    if (sup_distance(base, other) > kUniquenessTol) return false;
  }
  return true;
}

}  // namespace ghhj

#endif  // GHHJ_KANTOROVICH_HPP_
