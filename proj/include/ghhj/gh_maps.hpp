#ifndef GHHJ_GH_MAPS_HPP_
#define GHHJ_GH_MAPS_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ghhj/core.hpp"
#include "ghhj/metric_space.hpp"

namespace ghhj {

// A point assignment f: source -> target. assign[i] is the target index of
// f(i).
class MetricMap {
 public:
  MetricMap(SpacePtr source, SpacePtr target, std::vector<Index> assign)
      : source_(std::move(source)),
        target_(std::move(target)),
        assign_(std::move(assign)) {
    detail::require(source_ && target_, "metric map needs both spaces");
    detail::require(assign_.size() == source_->size(),
                    "metric map has " + std::to_string(assign_.size()) +
                        " entries, source has " +
                        std::to_string(source_->size()) + " points");
    for (Index i = 0; i < assign_.size(); ++i) {
      detail::require(assign_[i] < target_->size(),
                      "metric map entry " + std::to_string(i) +
                          " points outside the target");
    }
  }

  const SpacePtr& source() const noexcept { return source_; }
  const SpacePtr& target() const noexcept { return target_; }
  const std::vector<Index>& assign() const noexcept { return assign_; }
  Index operator()(Index i) const noexcept { return assign_[i]; }

 private:
  SpacePtr source_;
  SpacePtr target_;
  std::vector<Index> assign_;
};

inline MetricMap identity_map(const SpacePtr& space) {
  std::vector<Index> assign(space->size());
  for (Index i = 0; i < assign.size(); ++i) assign[i] = i;
  return MetricMap(space, space, std::move(assign));
}

// epsilon = max(distortion, codensity). worst_pair attains the distortion,
// worst_point (a target index) attains the codensity.
struct IsometryCertificate {
  double distortion = 0.0;
  double codensity = 0.0;
  double epsilon = 0.0;
  std::pair<Index, Index> worst_pair{0, 0};
  Index worst_point = 0;
};

namespace detail {

inline std::pair<double, std::pair<Index, Index>> distortion_sweep(
    const MetricMap& f) {
  const auto& src = *f.source();
  const auto& tgt = *f.target();
  const Index n = src.size();
  std::vector<double> row_worst(n, 0.0);
  std::vector<Index> row_arg(n, 0);
  parallel_for(n, [&](Index i) {
    const auto row = src.row(i);
    const auto image_row = tgt.row(f(i));
    double worst = 0.0;
    Index arg = i;
    for (Index j = i + 1; j < n; ++j) {
      const double gap = std::abs(image_row[f(j)] - row[j]);
      if (gap > worst) {
        worst = gap;
        arg = j;
      }
    }
    row_worst[i] = worst;
    row_arg[i] = arg;
  });
  double worst = 0.0;
  std::pair<Index, Index> pair{0, 0};
  for (Index i = 0; i < n; ++i) {
    if (row_worst[i] > worst) {
      worst = row_worst[i];
      pair = {i, row_arg[i]};
    }
  }
  return {worst, pair};
}

inline std::vector<Index> image_points(const MetricMap& f) {
  std::vector<Index> image = f.assign();
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  return image;
}

inline std::pair<double, Index> codensity_sweep(const MetricMap& f) {
  const auto& tgt = *f.target();
  const auto image = image_points(f);
  double worst = 0.0;
  Index arg = 0;
  for (Index y = 0; y < tgt.size(); ++y) {
    const auto row = tgt.row(y);
    double nearest = std::numeric_limits<double>::infinity();
    for (Index p : image) nearest = std::min(nearest, row[p]);
    if (nearest > worst) {
      worst = nearest;
      arg = y;
    }
  }
  return {worst, arg};
}

}  // namespace detail

// max_{i,j} |d_target(f(i), f(j)) - d_source(i, j)|
inline double distortion(const MetricMap& f) {
  return detail::distortion_sweep(f).first;
}

// max_y min_i d_target(y, f(i)): the Hausdorff distance between f(X) and Y,
// since f(X) is a subset of Y.
inline double codensity(const MetricMap& f) {
  return detail::codensity_sweep(f).first;
}

inline IsometryCertificate certify(const MetricMap& f) {
  const auto [dist, pair] = detail::distortion_sweep(f);
  const auto [codense, point] = detail::codensity_sweep(f);
  return {dist, codense, std::max(dist, codense), pair, point};
}

// Nearest image point to y: argmin_i d_target(f(i), y), lowest index on
// ties. The distance to the returned preimage never exceeds codensity(f).
inline Index approximate_point(const MetricMap& f, Index y) {
  detail::require(y < f.target()->size(), "target index out of range");
  const auto row = f.target()->row(y);
  Index best = 0;
  for (Index i = 1; i < f.source()->size(); ++i) {
    if (row[f(i)] < row[f(best)]) best = i;
  }
  return best;
}

// Measured counterparts of the three approximate-inverse bounds.
struct InverseBounds {
  double epsilon = 0.0;            // certificate of f
  double inverse_epsilon = 0.0;    // certificate of f', must be <= 4 eps
  double source_round_trip = 0.0;  // max_x d(f'(f(x)), x), must be <= 3 eps
  double target_round_trip = 0.0;  // max_y d(f(f'(y)), y), must be <= eps

  bool hold(double slack = 1e-12) const {
    return inverse_epsilon <= 4.0 * epsilon + slack &&
           source_round_trip <= 3.0 * epsilon + slack &&
           target_round_trip <= epsilon + slack;
  }
};

inline InverseBounds measure_inverse_bounds(const MetricMap& f,
                                            const MetricMap& f_prime) {
  detail::require(f_prime.source() == f.target() &&
                      f_prime.target() == f.source(),
                  "f' must map f's target back to f's source");
  InverseBounds b;
  b.epsilon = certify(f).epsilon;
  b.inverse_epsilon = certify(f_prime).epsilon;
  for (Index x = 0; x < f.source()->size(); ++x) {
    b.source_round_trip =
        std::max(b.source_round_trip, (*f.source())(f_prime(f(x)), x));
  }
  for (Index y = 0; y < f.target()->size(); ++y) {
    b.target_round_trip =
        std::max(b.target_round_trip, (*f.target())(f(f_prime(y)), y));
  }
  return b;
}

// Approximate inverse f'(y) = nearest preimage of y (lowest index on ties).
// Throws InvariantViolation if the 4eps / 3eps / eps bounds fail, which can
// only happen through an implementation error.
inline MetricMap epsilon_inverse(const MetricMap& f) {
  detail::require(f.source()->size() > 0, "epsilon_inverse: empty source");
  std::vector<Index> assign(f.target()->size());
  for (Index y = 0; y < assign.size(); ++y) assign[y] = approximate_point(f, y);
  MetricMap f_prime(f.target(), f.source(), std::move(assign));
  const auto bounds = measure_inverse_bounds(f, f_prime);
  detail::ensure(bounds.hold(),
                 "epsilon_inverse bounds violated: eps=" +
                     std::to_string(bounds.epsilon) +
                     " inverse_eps=" + std::to_string(bounds.inverse_epsilon) +
                     " source_round_trip=" +
                     std::to_string(bounds.source_round_trip) +
                     " target_round_trip=" +
                     std::to_string(bounds.target_round_trip));
  return f_prime;
}

inline constexpr double kBruteForceBudget = 1e7;

// Exhaustive minimization of certify(f).epsilon over all N_y^N_x maps. Test
// oracle only; the first map attaining the minimum in lexicographic order of
// assign wins.
inline std::pair<MetricMap, IsometryCertificate> brute_force_best_map(
    const SpacePtr& x, const SpacePtr& y) {
  const double count =
      std::pow(static_cast<double>(y->size()), static_cast<double>(x->size()));
  detail::require(count <= kBruteForceBudget,
                  "brute_force_best_map: " + std::to_string(count) +
                      " candidate maps exceed the budget of 1e7; shrink the "
                      "spaces");
  std::vector<Index> assign(x->size(), 0);
  std::vector<Index> best_assign;
  IsometryCertificate best;
  best.epsilon = std::numeric_limits<double>::infinity();
  while (true) {
    MetricMap candidate(x, y, assign);
    const auto cert = certify(candidate);
    if (cert.epsilon < best.epsilon) {
      best = cert;
      best_assign = assign;
    }
    Index pos = 0;
    while (pos < assign.size() && ++assign[pos] == y->size()) {
      assign[pos++] = 0;
    }
    if (pos == assign.size()) break;
  }
  return {MetricMap(x, y, std::move(best_assign)), best};
}

}  // namespace ghhj

#endif  // GHHJ_GH_MAPS_HPP_
