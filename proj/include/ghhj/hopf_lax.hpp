#ifndef GHHJ_HOPF_LAX_HPP_
#define GHHJ_HOPF_LAX_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ghhj/core.hpp"
#include "ghhj/metric_space.hpp"

namespace ghhj {

// A real-valued function on the points of a space.
class Potential {
 public:
  Potential(SpacePtr space, std::vector<double> values)
      : space_(std::move(space)), values_(std::move(values)) {
    detail::require(space_ != nullptr, "potential needs a space");
    detail::require(values_.size() == space_->size(),
                    "potential has " + std::to_string(values_.size()) +
                        " values, space has " +
                        std::to_string(space_->size()) + " points");
    for (Index i = 0; i < values_.size(); ++i) {
      detail::require(std::isfinite(values_[i]),
                      "potential value " + std::to_string(i) +
                          " is not finite");
    }
  }

  static Potential constant(SpacePtr space, double c) {
    const Index n = space->size();
    return Potential(std::move(space), std::vector<double>(n, c));
  }

  const SpacePtr& space() const noexcept { return space_; }
  const std::vector<double>& values() const noexcept { return values_; }
  Index size() const noexcept { return values_.size(); }
  double operator[](Index i) const noexcept { return values_[i]; }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

inline double sup_distance(const Potential& a, const Potential& b) {
  detail::require(a.size() == b.size(), "potentials differ in size");
  double m = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

namespace detail {

// out(x) = min_y values(y) + d(x,y)^2 / (2t), exhaustive over all y.
inline std::vector<double> inf_convolution(const FiniteMetricSpace& space,
                                           const std::vector<double>& values,
                                           double t) {
  const Index n = space.size();
  const double two_t = 2.0 * t;
  std::vector<double> out(n);
  parallel_for(n, [&](Index x) {
    const auto row = space.row(x);
    double best = std::numeric_limits<double>::infinity();
    for (Index y = 0; y < n; ++y) {
      const double candidate = values[y] + row[y] * row[y] / two_t;
      best = candidate < best ? candidate : best;
    }
    out[x] = best;
  });
  return out;
}

// out(x) = max_y values(y) - d(x,y)^2 / (2t).
inline std::vector<double> sup_convolution(const FiniteMetricSpace& space,
                                           const std::vector<double>& values,
                                           double t) {
  const Index n = space.size();
  const double two_t = 2.0 * t;
  std::vector<double> out(n);
  parallel_for(n, [&](Index x) {
    const auto row = space.row(x);
    double best = -std::numeric_limits<double>::infinity();
    for (Index y = 0; y < n; ++y) {
      const double candidate = values[y] - row[y] * row[y] / two_t;
      best = candidate > best ? candidate : best;
    }
    out[x] = best;
  });
  return out;
}

}  // namespace detail

// Q_t g(x) = min_y g(y) + d(x,y)^2/(2t). Q_0 g = g.
inline Potential hopf_lax(const Potential& g, double t) {
  detail::require(std::isfinite(t) && t >= 0.0,
                  "hopf_lax needs a finite time t >= 0");
  if (t == 0.0) return g;
  return Potential(g.space(),
                   detail::inf_convolution(*g.space(), g.values(), t));
}

// phi^c(x) = min_y phi(y) + d(x,y)^2/2, i.e. Q_1 phi.
inline Potential c_transform(const Potential& phi) { return hopf_lax(phi, 1.0); }

// psi(x) = max_y phi^c(y) - d(x,y)^2/2: the d^2/2-convex envelope of phi.
// psi <= phi, psi^c = phi^c, and psi is a fixed point of this map.
inline Potential double_transform(const Potential& phi) {
  const auto phi_c = c_transform(phi);
  return Potential(phi.space(),
                   detail::sup_convolution(*phi.space(), phi_c.values(), 1.0));
}

enum class SlopeVariant { kTwoSided, kUpper, kLower };

// Discrete local slope over the closed ball of the given radius. Points with
// no neighbour in the ball get slope 0 and are flagged in `isolated`.
struct SlopeField {
  SpacePtr space;
  std::vector<double> slope;
  std::vector<bool> isolated;
  SlopeVariant variant = SlopeVariant::kTwoSided;
  double radius = 0.0;

  bool any_isolated() const {
    return std::find(isolated.begin(), isolated.end(), true) != isolated.end();
  }
};

inline SlopeField local_slope(const Potential& u, double radius,
                              SlopeVariant variant) {
  detail::require(std::isfinite(radius) && radius > 0.0,
                  "local_slope needs radius > 0");
  const auto& space = *u.space();
  const Index n = space.size();
  SlopeField field{u.space(), std::vector<double>(n, 0.0),
                   std::vector<bool>(n, true), variant, radius};
  std::vector<char> isolated(n, 1);
  parallel_for(n, [&](Index i) {
    const auto row = space.row(i);
    double best = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (j == i || row[j] > radius) continue;
      isolated[i] = 0;
      double rise = 0.0;
      switch (variant) {
        case SlopeVariant::kTwoSided: rise = std::abs(u[j] - u[i]); break;
        case SlopeVariant::kUpper: rise = std::max(0.0, u[j] - u[i]); break;
        case SlopeVariant::kLower: rise = std::max(0.0, u[i] - u[j]); break;
      }
      best = std::max(best, rise / row[j]);
    }
    field.slope[i] = best;
  });
  for (Index i = 0; i < n; ++i) field.isolated[i] = isolated[i] != 0;
  return field;
}

// 3 x the median nearest-neighbour distance (lower median for even counts).
inline double default_slope_radius(const FiniteMetricSpace& space) {
  auto nn = space.nearest_neighbor_distances();
  detail::require(space.size() >= 2,
                  "slope radius is undefined on a one-point space");
  const auto mid = nn.begin() + static_cast<std::ptrdiff_t>((nn.size() - 1) / 2);
  std::nth_element(nn.begin(), mid, nn.end());
  return 3.0 * *mid;
}

inline constexpr double kDefaultResidualDt = 1e-3;

// Pointwise residual of d_t u + |grad u|^2 / 2 at u = Q_t g: central
// difference in time, two-sided discrete slope in space.
inline Potential hj_residual(const Potential& g, double t, double dt,
                             double radius) {
  detail::require(std::isfinite(t) && std::isfinite(dt) && dt > 0.0 && t > dt,
                  "hj_residual needs t > dt > 0");
  detail::require(std::isfinite(radius) && radius > 0.0,
                  "hj_residual needs radius > 0");
  const auto later = hopf_lax(g, t + dt);
  const auto earlier = hopf_lax(g, t - dt);
  const auto slope =
      local_slope(hopf_lax(g, t), radius, SlopeVariant::kTwoSided);
  std::vector<double> residual(g.size());
  for (Index x = 0; x < g.size(); ++x) {
    residual[x] = (later[x] - earlier[x]) / (2.0 * dt) +
                  0.5 * slope.slope[x] * slope.slope[x];
  }
  return Potential(g.space(), std::move(residual));
}

// sup_x |Q_{s+t} g(x) - Q_t(Q_s g)(x)|. Zero on geodesic spaces; on finite
// spaces the composed flow can only be larger, since the midpoint is
// restricted to grid points.
inline double semigroup_defect(const Potential& g, double s, double t) {
  detail::require(std::isfinite(s) && std::isfinite(t) && s > 0.0 && t > 0.0,
                  "semigroup_defect needs s, t > 0");
  return sup_distance(hopf_lax(g, s + t), hopf_lax(hopf_lax(g, s), t));
}

}  // namespace ghhj

#endif  // GHHJ_HOPF_LAX_HPP_
