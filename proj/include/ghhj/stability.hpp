#ifndef GHHJ_STABILITY_HPP_
#define GHHJ_STABILITY_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ghhj/core.hpp"
#include "ghhj/gh_maps.hpp"
#include "ghhj/hopf_lax.hpp"
#include "ghhj/kantorovich.hpp"
#include "ghhj/metric_space.hpp"

namespace ghhj {

enum class FamilyKind { kCircle, kInterval, kSierpinski };

inline const char* family_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::kCircle: return "circle";
    case FamilyKind::kInterval: return "interval";
    case FamilyKind::kSierpinski: return "sierpinski";
  }
  return "unknown";
}

// One approximating space X_n with its canonical map f_n into the reference
// space and the certificate of f_n.
struct FamilyLevel {
  int param;
  SpacePtr space;
  MetricMap map;
  IsometryCertificate cert;
};

// Levels ordered by strictly decreasing epsilon, all mapping into one fine
// reference discretization that stands in for the limit space.
struct RefinementFamily {
  FamilyKind kind;
  std::vector<FamilyLevel> levels;
  SpacePtr limit;
  int limit_param = 0;
  double length = 0.0;  // interval families only
};

// Mesh of every level must be at least this many times the reference mesh.
inline constexpr int kDefaultReferenceRatio = 8;

namespace detail {

inline void finish_family(RefinementFamily& family) {
  for (Index k = 1; k < family.levels.size(); ++k) {
    require(family.levels[k].cert.epsilon < family.levels[k - 1].cert.epsilon,
            "refinement levels must have strictly decreasing epsilon; level " +
                std::to_string(family.levels[k].param) + " has epsilon " +
                std::to_string(family.levels[k].cert.epsilon) +
                " after level " + std::to_string(family.levels[k - 1].param) +
                " with " + std::to_string(family.levels[k - 1].cert.epsilon));
  }
}

inline FamilyLevel make_level(int param, SpacePtr space, const SpacePtr& limit,
                              std::vector<Index> assign) {
  MetricMap f(space, limit, std::move(assign));
  auto cert = certify(f);
  return {param, std::move(space), std::move(f), cert};
}

}  // namespace detail

// Circles C_level with the vertex inclusion i -> i * n_ref / level.
inline RefinementFamily build_circle_family(
    const std::vector<int>& levels, int n_ref,
    int reference_ratio = kDefaultReferenceRatio) {
  detail::require(!levels.empty(), "family needs at least one level");
  detail::require(n_ref >= 3, "circle reference needs n_ref >= 3");
  RefinementFamily family{FamilyKind::kCircle, {},
                          make_space(make_circle(n_ref)), n_ref, 0.0};
  for (int level : levels) {
    detail::require(level >= 3, "circle levels must be >= 3");
    detail::require(n_ref % level == 0,
                    "circle level " + std::to_string(level) +
                        " does not divide n_ref " + std::to_string(n_ref));
    detail::require(n_ref >= reference_ratio * level,
                    "n_ref must be at least " +
                        std::to_string(reference_ratio) +
                        "x the finest circle level");
    const Index stride = static_cast<Index>(n_ref / level);
    std::vector<Index> assign(level);
    for (Index i = 0; i < assign.size(); ++i) assign[i] = i * stride;
    family.levels.push_back(detail::make_level(
        level, make_space(make_circle(level)), family.limit, std::move(assign)));
  }
  detail::finish_family(family);
  return family;
}

// Intervals with `level` points on [0, length]; point i goes to the nearest
// reference point round(i * (n_ref - 1) / (level - 1)), ties to the lower
// index. The inclusion is exact when (level - 1) divides (n_ref - 1).
inline RefinementFamily build_interval_family(
    const std::vector<int>& levels, int n_ref, double length,
    int reference_ratio = kDefaultReferenceRatio) {
  detail::require(!levels.empty(), "family needs at least one level");
  detail::require(n_ref >= 2, "interval reference needs n_ref >= 2");
  RefinementFamily family{FamilyKind::kInterval, {},
                          make_space(make_interval(n_ref, length)), n_ref,
                          length};
  const Index ref_segments = static_cast<Index>(n_ref - 1);
  for (int level : levels) {
    detail::require(level >= 2, "interval levels must be >= 2");
    const Index segments = static_cast<Index>(level - 1);
    detail::require(ref_segments >= reference_ratio * segments,
                    "reference interval must have at least " +
                        std::to_string(reference_ratio) +
                        "x the segments of the finest level");
    std::vector<Index> assign(level);
    for (Index i = 0; i < assign.size(); ++i) {
      const Index num = i * ref_segments;
      Index q = num / segments;
      if (2 * (num % segments) > segments) ++q;
      assign[i] = q;
    }
    family.levels.push_back(detail::make_level(
        level, make_space(make_interval(level, length)), family.limit,
        std::move(assign)));
  }
  detail::finish_family(family);
  return family;
}

// Gasket graphs at the given levels mapped by lattice inclusion into the
// gasket at max_level.
inline RefinementFamily build_sierpinski_family(
    const std::vector<int>& levels, int max_level,
    int reference_ratio = kDefaultReferenceRatio) {
  detail::require(!levels.empty(), "family needs at least one level");
  RefinementFamily family{FamilyKind::kSierpinski, {},
                          make_space(make_sierpinski(max_level)), max_level,
                          0.0};
  const auto fine = sierpinski_lattice(max_level);
  for (int level : levels) {
    detail::require(level >= 0 && level <= max_level,
                    "sierpinski levels must lie in [0, max_level]");
    detail::require((1L << (max_level - level)) >= reference_ratio,
                    "sierpinski max_level must refine every level by at "
                    "least the reference ratio");
    const auto coarse = sierpinski_lattice(level);
    const long scale = 1L << (max_level - level);
    std::vector<Index> assign(coarse.points.size());
    for (Index i = 0; i < assign.size(); ++i) {
      const auto& [a, b] = coarse.points[i];
      assign[i] = fine.index.at({a * scale, b * scale});
    }
    family.levels.push_back(detail::make_level(
        level, make_space(make_sierpinski(level)), family.limit,
        std::move(assign)));
  }
  detail::finish_family(family);
  return family;
}

enum class TestFunction { kSin, kAbs, kDist0 };

// 1-Lipschitz initial data on the reference space:
//   sin: sin(angle) on circles, sin(x) on intervals (x centred at 0),
//        sin(first coordinate) on gaskets;
//   abs: |x| on intervals, |first coordinate - 1/2| on gaskets, and the arc
//        distance to vertex 0 (= |angle|) on circles;
//   dist0: d(., point 0).
inline Potential make_test_potential(const RefinementFamily& family,
                                     TestFunction fn) {
  const auto& space = *family.limit;
  const Index n = space.size();
  std::vector<double> values(n);
  for (Index i = 0; i < n; ++i) {
    if (fn == TestFunction::kDist0) {
      values[i] = space(i, 0);
      continue;
    }
    switch (family.kind) {
      case FamilyKind::kCircle: {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) /
                             static_cast<double>(n);
        values[i] = fn == TestFunction::kSin ? std::sin(angle) : space(i, 0);
        break;
      }
      case FamilyKind::kInterval: {
        const double x = space.coords()[i][0] - 0.5 * family.length;
        values[i] = fn == TestFunction::kSin ? std::sin(x) : std::abs(x);
        break;
      }
      case FamilyKind::kSierpinski: {
        const double x = space.coords()[i][0];
        values[i] =
            fn == TestFunction::kSin ? std::sin(x) : std::abs(x - 0.5);
        break;
      }
    }
  }
  return Potential(family.limit, std::move(values));
}

// Hamiltonian H(x, p); the stability runs use H(x, p) = (p+)^2 / 2, the
// constant extension of p^2/2 below zero.
using Hamiltonian = std::function<double(Index, double)>;

inline double quadratic_hamiltonian(Index, double p) {
  const double q = std::max(0.0, p);
  return 0.5 * q * q;
}

struct ReportCheck {
  std::string name;
  bool asserted = true;
  bool passed = true;
  std::string detail;
};

struct AssumptionReport {
  std::vector<ReportCheck> checks;
  std::vector<double> lipschitz;    // measured Lip(g^n) per level
  std::vector<double> sup_flow;     // sup over the time grid of |Q_t g^n|
  std::vector<double> initial_gap;  // max_x |g^n(f'_n x) - g(x)|

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) {
      return !c.asserted || c.passed;
    });
  }
};

inline const std::vector<double>& assumption_time_grid() {
  static const std::vector<double> grid{0.25, 0.5, 1.0, 2.0};
  return grid;
}

// g^n = g o f_n.
inline Potential pull_back(const Potential& g_limit, const MetricMap& f) {
  detail::require(g_limit.space() == f.target(),
                  "pull_back: potential is not on the map's target");
  std::vector<double> values(f.source()->size());
  for (Index i = 0; i < values.size(); ++i) values[i] = g_limit[f(i)];
  return Potential(f.source(), std::move(values));
}

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// e_{k+1} <= slack * e_k for every consecutive pair.
inline bool non_increasing_within(const std::vector<double>& e, double slack) {
  for (Index k = 1; k < e.size(); ++k) {
    if (e[k] > slack * e[k - 1] + 1e-15) return false;
  }
  return true;
}

}  // namespace detail

inline constexpr double kMonotoneSlack = 1.5;

// Machine checks of the stability assumptions (Hamiltonian shape, data bounds,
// Lipschitz control, approximation slack) for g^n = g_limit o f_n.
inline AssumptionReport check_assumptions(
    const RefinementFamily& family, const Potential& g_limit,
    double lipschitz_expected, const Hamiltonian& hamiltonian = quadratic_hamiltonian) {
  detail::require(g_limit.space() == family.limit,
                  "check_assumptions: g must live on the reference space");
  AssumptionReport report;

  {
    bool ok = true;
    std::string detail;
    for (Index k = 0; k < family.levels.size(); ++k) {
      const auto& lvl = family.levels[k];
      if (k > 0 && !(lvl.cert.epsilon < family.levels[k - 1].cert.epsilon)) {
        ok = false;
        detail += "epsilon not decreasing at level " +
                  std::to_string(lvl.param) + "; ";
      }
      const auto bounds =
          measure_inverse_bounds(lvl.map, epsilon_inverse(lvl.map));
      if (!bounds.hold()) {
        ok = false;
        detail += "inverse bounds fail at level " + std::to_string(lvl.param) +
                  "; ";
      }
    }
    report.checks.push_back({"S1 epsilon-isometries with epsilon_n -> 0", true,
                             ok, ok ? "epsilon strictly decreasing" : detail});
  }
  {
    bool ok = true;
    for (Index x = 0; x < family.limit->size() && ok; ++x) {
      double prev = hamiltonian(x, -4.0);
      for (int s = -399; s <= 400 && ok; ++s) {
        const double h = hamiltonian(x, 0.01 * s);
        ok = h >= prev;
        prev = h;
      }
    }
    report.checks.push_back({"S2 H monotone in p", true, ok,
                             "sampled p in [-4, 4], step 0.01"});
  }
  report.checks.push_back({"S3 H_n -> H uniformly", true, true,
                           "H does not depend on n"});

  const double g_max = g_limit.sup_norm();
  bool s4 = true, s5p = true, s5_bound = true;
  for (const auto& lvl : family.levels) {
    const auto g_n = pull_back(g_limit, lvl.map);
    const double lip = metric_lipschitz(g_n);
    const double delta = lvl.space->min_separation();
    const double slack = delta > 0.0 ? 1.0 / delta : 0.0;
    report.lipschitz.push_back(lip);
    s5p = s5p &&
          lip <= lipschitz_expected * (1.0 + lvl.cert.epsilon * slack) + 1e-12;

    double flow = 0.0;
    for (double t : assumption_time_grid()) {
      flow = std::max(flow, hopf_lax(g_n, t).sup_norm());
    }
    report.sup_flow.push_back(flow);
    s4 = s4 && flow <= g_max + 1e-12;

    const auto f_prime = epsilon_inverse(lvl.map);
    double gap = 0.0;
    for (Index x = 0; x < family.limit->size(); ++x) {
      gap = std::max(gap, std::abs(g_n[f_prime(x)] - g_limit[x]));
    }
    report.initial_gap.push_back(gap);
    s5_bound = s5_bound &&
               gap <= lipschitz_expected *
                              (lvl.cert.codensity + 4.0 * lvl.cert.epsilon) +
                          1e-12;
  }
  report.checks.push_back(
      {"S4 sup |Q_t g^n| bounded on the time grid", true, s4,
       "bound max|g| = " + detail::fmt(g_max)});
  report.checks.push_back(
      {"S5' g^n equi-Lipschitz", true, s5p,
       "Lip(g^n) <= L (1 + eps_n / min separation), L = " +
           detail::fmt(lipschitz_expected)});
  const bool s5_trend =
      detail::non_increasing_within(report.initial_gap, kMonotoneSlack);
  report.checks.push_back(
      {"S5 g^n(f'_n x) -> g(x)", true, s5_bound && s5_trend,
       "gap <= L (codensity_n + 4 eps_n) and non-increasing within 1.5x"});
  return report;
}

struct LevelRecord {
  int level = 0;
  Index n_points = 0;
  double epsilon = 0.0;
  double geodesicity_defect = 0.0;
  double sup_error = 0.0;
  std::optional<double> dual_value;
  std::optional<double> w2_gap;
  double wall_ms = 0.0;
};

struct ConvergenceReport {
  std::string experiment;
  std::vector<LevelRecord> records;
  // Least-squares slope of log(sup_error) against log(epsilon) over levels
  // where both are positive; NaN with fewer than two such levels.
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  std::vector<ReportCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) {
      return !c.asserted || c.passed;
    });
  }
};

namespace detail {

inline double log_log_slope(const std::vector<LevelRecord>& records) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : records) {
    if (r.epsilon > 0.0 && r.sup_error > 0.0) {
      pts.emplace_back(std::log(r.epsilon), std::log(r.sup_error));
    }
  }
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

inline std::vector<double> column(const std::vector<LevelRecord>& records,
                                  double LevelRecord::*field) {
  std::vector<double> out;
  for (const auto& r : records) out.push_back(r.*field);
  return out;
}

}  // namespace detail

// Pulled-back Hopf-Lax solutions against the reference solution:
//   sup_error_n = max_x |Q_t g^n (f'_n x) - Q_t g(x)|.
// Asserts non-increase within 1.5x between consecutive levels, and a 4x
// total decrease whenever epsilon shrinks by at least 8x.
inline ConvergenceReport run_hopflax_stability(const RefinementFamily& family,
                                               const Potential& g_limit,
                                               double t) {
  detail::require(std::isfinite(t) && t > 0.0,
                  "run_hopflax_stability needs t > 0");
  detail::require(g_limit.space() == family.limit,
                  "run_hopflax_stability: g must live on the reference space");
  ConvergenceReport report;
  report.experiment = "hopflax";
  const auto u_limit = hopf_lax(g_limit, t);
  for (const auto& lvl : family.levels) {
    const auto start = std::chrono::steady_clock::now();
    const auto f_prime = epsilon_inverse(lvl.map);
    const auto u_n = hopf_lax(pull_back(g_limit, lvl.map), t);
    double err = 0.0;
    for (Index x = 0; x < family.limit->size(); ++x) {
      err = std::max(err, std::abs(u_n[f_prime(x)] - u_limit[x]));
    }
    LevelRecord rec;
    rec.level = lvl.param;
    rec.n_points = lvl.space->size();
    rec.epsilon = lvl.cert.epsilon;
    rec.geodesicity_defect = geodesicity_defect(*lvl.space);
    rec.sup_error = err;
    rec.wall_ms = detail::elapsed_ms(start);
    report.records.push_back(rec);
  }
  report.fitted_slope = detail::log_log_slope(report.records);

  if (report.records.empty()) return report;
  const auto errors = detail::column(report.records, &LevelRecord::sup_error);
  report.checks.push_back(
      {"sup_error non-increasing within 1.5x", true,
       detail::non_increasing_within(errors, kMonotoneSlack), ""});
  const auto& first = report.records.front();
  const auto& last = report.records.back();
  const bool shrinks = first.epsilon >= 8.0 * last.epsilon;
  report.checks.push_back(
      {"sup_error final <= initial / 4 when epsilon shrinks 8x", shrinks,
       !shrinks || last.sup_error <= first.sup_error / 4.0,
       "ratio " + detail::fmt(first.sup_error > 0.0
                                  ? last.sup_error / first.sup_error
                                  : 0.0)});
  return report;
}

// Dual Kantorovich maximizers on the levels against the reference problem.
// Level measures are (f'_n)_# of the reference measures. Records carry the
// dual value, the W2 gap of the pushed-forward measures, and (as sup_error)
// the distance between the normalized level maximizer read through f'_n and
// the normalized reference maximizer.
inline ConvergenceReport run_kantorovich_stability(
    const RefinementFamily& family, const Measure& mu_limit,
    const Measure& nu_limit, Index z) {
  detail::require(mu_limit.space() == family.limit &&
                      nu_limit.space() == family.limit,
                  "run_kantorovich_stability: measures must live on the "
                  "reference space");
  detail::require(z < family.limit->size(),
                  "run_kantorovich_stability: z out of range");
  ConvergenceReport report;
  report.experiment = "kantorovich";

  const auto limit_solution = solve_dual(mu_limit, nu_limit);
  const double half_w2_limit = limit_solution.half_w2_squared;
  const auto phi_bar =
      normalize_maximizer(limit_solution.phi, identity_map(family.limit), z)
          .first;
  const bool unique = certify_unique_maximizer(mu_limit, nu_limit, z);
  const double mesh_ref = family.limit->min_separation();

  bool shift_ok = true, budget_ok = true, upper_ok = true;
  bool half_dsq_ok = true, half_diam_ok = true, diam_ok = true;
  std::string half_dsq_detail, half_diam_detail;
  std::vector<double> value_errors;
  for (const auto& lvl : family.levels) {
    const auto start = std::chrono::steady_clock::now();
    const auto f_prime = epsilon_inverse(lvl.map);
    const auto mu_n = pushforward(f_prime, mu_limit);
    const auto nu_n = pushforward(f_prime, nu_limit);
    const double w2_gap =
        std::max(w2_exact(pushforward(lvl.map, mu_n), mu_limit).w2,
                 w2_exact(pushforward(lvl.map, nu_n), nu_limit).w2);

    const auto solution = solve_dual(mu_n, nu_n);
    const auto normalized = normalize_maximizer(solution.phi, f_prime, z).first;
    const double value = dual_value(normalized, mu_n, nu_n);
    shift_ok = shift_ok && std::abs(value - solution.dual_value) <= 1e-12;

    const auto lip = lipschitz_report(normalized);
    const double value_error = std::abs(value - half_w2_limit);
    value_errors.push_back(value_error);
    budget_ok = budget_ok &&
                value_error <= lip.metric * (lvl.cert.epsilon + mesh_ref) + 1e-9;
    upper_ok = upper_ok &&
               value <= half_w2_limit + lip.metric * (lvl.cert.epsilon + w2_gap) +
                            1e-9;
    if (!lip.within_half_dsq_bound()) {
      half_dsq_ok = false;
      half_dsq_detail += "level " + std::to_string(lvl.param) + ": " +
                         detail::fmt(lip.half_dsq) + "; ";
    }
    if (!lip.within_half_diameter_bound()) {
      half_diam_ok = false;
      half_diam_detail += "level " + std::to_string(lvl.param) + ": " +
                          detail::fmt(lip.metric) + " vs diam/2 " +
                          detail::fmt(0.5 * lip.diameter) + "; ";
    }
    diam_ok = diam_ok && lip.within_diameter_bound();

    double potential_gap = 0.0;
    for (Index x = 0; x < family.limit->size(); ++x) {
      potential_gap =
          std::max(potential_gap, std::abs(normalized[f_prime(x)] - phi_bar[x]));
    }

    LevelRecord rec;
    rec.level = lvl.param;
    rec.n_points = lvl.space->size();
    rec.epsilon = lvl.cert.epsilon;
    rec.geodesicity_defect = geodesicity_defect(*lvl.space);
    rec.sup_error = potential_gap;
    rec.dual_value = value;
    rec.w2_gap = w2_gap;
    rec.wall_ms = detail::elapsed_ms(start);
    report.records.push_back(rec);
  }
  report.fitted_slope = detail::log_log_slope(report.records);
  if (report.records.empty()) return report;

  std::vector<double> gaps;
  for (const auto& r : report.records) gaps.push_back(*r.w2_gap);
  report.checks.push_back(
      {"pushforward W2 gap non-increasing within 1.5x", true,
       detail::non_increasing_within(gaps, kMonotoneSlack), ""});
  report.checks.push_back(
      {"dual value error non-increasing within 1.5x", true,
       detail::non_increasing_within(value_errors, kMonotoneSlack),
       "target 1/2 W2^2 = " + detail::fmt(half_w2_limit)});
  report.checks.push_back(
      {"dual value error <= Lip (eps_n + mesh_ref)", true, budget_ok, ""});
  report.checks.push_back(
      {"dual value <= 1/2 W2^2 + Lip (eps_n + W2 gap)", true, upper_ok, ""});
  report.checks.push_back(
      {"dual value invariant under normalization", true, shift_ok, ""});
  report.checks.push_back({"normalized maximizer Lip wrt d^2/2 <= 1", true,
                           half_dsq_ok, half_dsq_detail});
  report.checks.push_back({"normalized maximizer Lip <= diam/2", true,
                           half_diam_ok, half_diam_detail});
  report.checks.push_back(
      {"normalized maximizer Lip <= diam", false, diam_ok,
       "bound implied by d^2/2-convexity; informational"});
  const auto potential_gaps =
      detail::column(report.records, &LevelRecord::sup_error);
  report.checks.push_back(
      {"normalized maximizers converge", unique,
       detail::non_increasing_within(potential_gaps, kMonotoneSlack),
       unique ? "reference maximizer certified unique up to constants"
              : "reference maximizer not certified unique; reported only"});
  return report;
}

enum class ReportFormat { kCsv, kTable };

namespace detail {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string opt_num(const std::optional<double>& v) {
  return v ? num(*v) : std::string();
}

inline std::string ms(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace detail

// CSV columns are fixed:
//   level,n_points,epsilon,geodesicity_defect,sup_error,dual_value,w2_gap,wall_ms
// Values use %.17g; dual_value and w2_gap are empty when not computed.
inline std::string emit_report(const ConvergenceReport& report,
                               ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::kCsv) {
    out << "level,n_points,epsilon,geodesicity_defect,sup_error,dual_value,"
           "w2_gap,wall_ms\n";
    for (const auto& r : report.records) {
      out << r.level << ',' << r.n_points << ',' << detail::num(r.epsilon)
          << ',' << detail::num(r.geodesicity_defect) << ','
          << detail::num(r.sup_error) << ',' << detail::opt_num(r.dual_value)
          << ',' << detail::opt_num(r.w2_gap) << ',' << detail::ms(r.wall_ms)
          << '\n';
    }
    return out.str();
  }
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %8s %13s %13s %13s %13s %13s %10s\n",
                "level", "points", "epsilon", "geo_defect", "sup_error",
                "dual_value", "w2_gap", "wall_ms");
  out << "experiment: " << report.experiment << '\n' << line;
  for (const auto& r : report.records) {
    const auto cell = [](const std::optional<double>& v) {
      char buf[32];
      if (v) {
        std::snprintf(buf, sizeof buf, "%13.6e", *v);
      } else {
        std::snprintf(buf, sizeof buf, "%13s", "-");
      }
      return std::string(buf);
    };
    std::snprintf(line, sizeof line, "%-6d %8zu %13.6e %13.6e %13.6e %s %s %10.3f\n",
                  r.level, r.n_points, r.epsilon, r.geodesicity_defect,
                  r.sup_error, cell(r.dual_value).c_str(),
                  cell(r.w2_gap).c_str(), r.wall_ms);
    out << line;
  }
  out << "log-log slope of sup_error vs epsilon: "
      << detail::fmt(report.fitted_slope) << '\n';
  for (const auto& c : report.checks) {
    out << (c.asserted ? (c.passed ? "[pass] " : "[FAIL] ")
                       : (c.passed ? "[info] " : "[info:not met] "))
        << c.name;
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << '\n';
  }
  return out.str();
}

}  // namespace ghhj

#endif  // GHHJ_STABILITY_HPP_
