// Command-line front end: space generation and validation, map certificates,
// Hopf-Lax evaluation, exact transport, and the convergence experiments.
//
// Exit codes: 0 success, 1 a checked invariant failed, 2 bad input or usage.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ghhj/ghhj.hpp"

namespace {

using namespace ghhj;

constexpr int kOk = 0;
constexpr int kAssertionFailed = 1;
constexpr int kUsageError = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> levels;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    detail::require(used == item.size() && !item.empty(),
                    "malformed --levels entry '" + item + "'");
    levels.push_back(v);
  }
  detail::require(!levels.empty(), "--levels is empty");
  return levels;
}

void require_output_path(const std::string& path) {
  if (path.empty()) return;
  const auto parent = std::filesystem::path(path).parent_path();
  detail::require(parent.empty() || std::filesystem::is_directory(parent),
                  "output directory does not exist: " + parent.string());
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    io::detail::write_file(path, content);
  }
}

Measure parse_measure_spec(const std::string& spec, const SpacePtr& space) {
  if (spec == "uniform") return Measure::uniform(space);
  if (spec.rfind("delta:", 0) == 0) {
    const std::string idx = spec.substr(6);
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(idx, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    detail::require(used == idx.size() && !idx.empty(),
                    "malformed measure spec '" + spec + "'");
    return Measure::delta(space, v);
  }
  if (spec.rfind("file:", 0) == 0) return io::read_measure(spec.substr(5), space);
  throw InputError("unknown measure spec '" + spec +
                   "' (expected uniform, delta:<index> or file:<path>)");
}

struct FamilyArgs {
  std::string family = "circle";
  std::string levels;
  int ref = 0;
  double length = 2.0;
};

RefinementFamily build_family(const FamilyArgs& a) {
  const auto levels = parse_levels(a.levels);
  if (a.family == "circle") return build_circle_family(levels, a.ref);
  if (a.family == "interval") {
    return build_interval_family(levels, a.ref, a.length);
  }
  return build_sierpinski_family(levels, a.ref);
}

void add_family_options(CLI::App* cmd, FamilyArgs& a) {
  cmd->add_option("--family", a.family, "circle | interval | sierpinski")
      ->check(CLI::IsMember({"circle", "interval", "sierpinski"}))
      ->required();
  cmd->add_option("--levels", a.levels,
                  "comma-separated level parameters: points per circle or "
                  "interval, refinement level for gaskets")
      ->required();
  cmd->add_option("--ref", a.ref,
                  "reference discretization: points (circle, interval) or "
                  "gasket level (sierpinski)")
      ->required();
  cmd->add_option("--length", a.length,
                  "interval length in distance units (default 2.0; point "
                  "coordinates are centred at 0 for test data)");
}

int finish_report(const ConvergenceReport& report, const std::string& out,
                  const std::string& format) {
  emit(out, emit_report(report, format == "table" ? ReportFormat::kTable
                                                  : ReportFormat::kCsv));
  for (const auto& c : report.checks) {
    if (c.asserted && !c.passed) {
      std::cerr << "check failed: " << c.name;
      if (!c.detail.empty()) std::cerr << " (" << c.detail << ")";
      std::cerr << "\n";
    }
  }
  return report.passed() ? kOk : kAssertionFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ghhj: Hopf-Lax and Kantorovich stability under Gromov-Hausdorff "
      "refinement of finite metric spaces.\nDistances are in abstract length "
      "units. GHHJB_THREADS caps worker threads (0 = auto)."};
  app.require_subcommand(1);

  // gen-space
  std::string family, out;
  int param = 0;
  double length = 2.0;
  auto* gen = app.add_subcommand("gen-space", "write a generated metric space");
  gen->add_option("--family", family, "circle | interval | sierpinski")
      ->check(CLI::IsMember({"circle", "interval", "sierpinski"}))
      ->required();
  gen->add_option("--param", param,
                  "points (circle >= 3, interval >= 2) or gasket level "
                  "(0..7)")
      ->required();
  gen->add_option("--length", length, "interval length (default 2.0)");
  gen->add_option("--out", out, "output space file")->required();

  // validate
  std::string space_path;
  double tol = kDefaultMetricTol;
  auto* validate = app.add_subcommand(
      "validate", "check the metric axioms; exit 1 names the violated axiom");
  validate->add_option("file", space_path, "metric-space file")
      ->check(CLI::ExistingFile)
      ->required();
  validate->add_option("--tol", tol,
                       "triangle-inequality tolerance (default 1e-9)");

  // certify-map
  std::string source_path, target_path, map_path;
  auto* cert = app.add_subcommand(
      "certify-map", "print distortion, codensity and epsilon of a map");
  cert->add_option("--source", source_path)->check(CLI::ExistingFile)->required();
  cert->add_option("--target", target_path)->check(CLI::ExistingFile)->required();
  cert->add_option("--map", map_path)->check(CLI::ExistingFile)->required();
  cert->add_option("--tol", tol, "metric tolerance for both spaces (default 1e-9)");

  // hopflax
  std::string potential_path;
  double t = 1.0;
  auto* hl = app.add_subcommand(
      "hopflax", "Q_t g(x) = min_y g(y) + d(x,y)^2/(2t) on a space");
  hl->add_option("--space", space_path)->check(CLI::ExistingFile)->required();
  hl->add_option("--potential", potential_path)
      ->check(CLI::ExistingFile)
      ->required();
  hl->add_option("--t", t, "time t >= 0")->required();
  hl->add_option("--out", out, "output potential file (default stdout)");

  // residual
  double dt = kDefaultResidualDt;
  double radius = 0.0;
  auto* res = app.add_subcommand(
      "residual",
      "pointwise residual of u_t + |grad u|^2/2 at u = Q_t g; writes a "
      "potential file, max |residual| goes to stderr");
  res->add_option("--space", space_path)->check(CLI::ExistingFile)->required();
  res->add_option("--potential", potential_path)
      ->check(CLI::ExistingFile)
      ->required();
  res->add_option("--t", t, "time, t > dt")->required();
  res->add_option("--dt", dt, "central-difference step (default 1e-3)");
  res->add_option("--radius", radius,
                  "slope radius (default 3x median nearest-neighbour "
                  "distance)");
  res->add_option("--out", out, "output potential file (default stdout)");

  // transport
  std::string mu_path, nu_path, plan_out, dual_out;
  auto* tr = app.add_subcommand(
      "transport", "exact W2 and dual Kantorovich maximizer");
  tr->add_option("--space", space_path)->check(CLI::ExistingFile)->required();
  tr->add_option("--mu", mu_path)->check(CLI::ExistingFile)->required();
  tr->add_option("--nu", nu_path)->check(CLI::ExistingFile)->required();
  tr->add_option("--plan-out", plan_out, "write the optimal coupling");
  tr->add_option("--dual-out", dual_out, "write the maximizer phi");

  // converge-hopflax
  FamilyArgs fam;
  std::string g_name = "sin", format = "csv";
  auto* ch = app.add_subcommand("converge-hopflax",
                                "Hopf-Lax stability across a refinement "
                                "family; CSV report");
  add_family_options(ch, fam);
  ch->add_option("--g", g_name, "initial data: sin | abs | dist0")
      ->check(CLI::IsMember({"sin", "abs", "dist0"}));
  ch->add_option("--t", t, "time t > 0 (default 1.0)");
  ch->add_option("--out", out, "report file (default stdout)");
  ch->add_option("--format", format, "csv | table (default csv)")
      ->check(CLI::IsMember({"csv", "table"}));

  // converge-kantorovich
  std::string mu_spec = "uniform", nu_spec = "uniform";
  std::size_t z = 0;
  auto* ck = app.add_subcommand("converge-kantorovich",
                                "dual Kantorovich stability across a "
                                "refinement family; CSV report");
  add_family_options(ck, fam);
  ck->add_option("--mu", mu_spec, "uniform | delta:<index> | file:<path>")
      ->required();
  ck->add_option("--nu", nu_spec, "uniform | delta:<index> | file:<path>")
      ->required();
  ck->add_option("--z", z, "normalization point (reference index)")
      ->required();
  ck->add_option("--out", out, "report file (default stdout)");
  ck->add_option("--format", format, "csv | table (default csv)")
      ->check(CLI::IsMember({"csv", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    require_output_path(out);
    require_output_path(plan_out);
    require_output_path(dual_out);

    if (*gen) {
      FiniteMetricSpace space =
          family == "circle"     ? make_circle(static_cast<Index>(std::max(param, 0)))
          : family == "interval" ? make_interval(static_cast<Index>(std::max(param, 0)), length)
                                 : make_sierpinski(param);
      io::write_space(out, space);
      return kOk;
    }

    if (*validate) {
      const auto raw = io::read_matrix(space_path);
      const auto report = validate_metric(raw.dist, raw.n, tol);
      if (!report.passed) {
        std::cerr << report.summary();
        return kAssertionFailed;
      }
      std::cerr << "metric ok (" << raw.n << " points)\n";
      return kOk;
    }

    if (*cert) {
      auto source = make_space(io::read_space(source_path, tol));
      auto target = make_space(io::read_space(target_path, tol));
      const auto f = io::read_map(map_path, source, target);
      const auto c = certify(f);
      std::cout << "distortion " << fmt(c.distortion) << "\n"
                << "codensity " << fmt(c.codensity) << "\n"
                << "epsilon " << fmt(c.epsilon) << "\n"
                << "worst_pair " << c.worst_pair.first << " "
                << c.worst_pair.second << "\n"
                << "worst_point " << c.worst_point << "\n";
      return kOk;
    }

    if (*hl) {
      auto space = make_space(io::read_space(space_path));
      const auto g = io::read_potential(potential_path, space);
      const auto q = hopf_lax(g, t);
      std::string body = "potential v1 " + std::to_string(q.size()) + "\n";
      for (double v : q.values()) body += fmt(v) + "\n";
      emit(out, body);
      return kOk;
    }

    if (*res) {
      auto space = make_space(io::read_space(space_path));
      const auto g = io::read_potential(potential_path, space);
      const double r = radius > 0.0 ? radius : default_slope_radius(*space);
      const auto residual = hj_residual(g, t, dt, r);
      std::string body =
          "potential v1 " + std::to_string(residual.size()) + "\n";
      for (double v : residual.values()) body += fmt(v) + "\n";
      emit(out, body);
      std::cerr << "max |residual| " << fmt(residual.sup_norm())
                << " (radius " << fmt(r) << ", dt " << fmt(dt) << ")\n";
      return kOk;
    }

    if (*tr) {
      auto space = make_space(io::read_space(space_path));
      const auto mu = io::read_measure(mu_path, space);
      const auto nu = io::read_measure(nu_path, space);
      const auto sol = solve_dual(mu, nu);
      std::cout << "W2 " << fmt(sol.primal.w2) << "\n"
                << "half_W2_squared " << fmt(sol.half_w2_squared) << "\n"
                << "dual_value " << fmt(sol.dual_value) << "\n"
                << "duality_gap " << fmt(sol.duality_gap) << "\n";
      if (!plan_out.empty()) io::write_plan(plan_out, sol.primal.plan);
      if (!dual_out.empty()) io::write_potential(dual_out, sol.phi);
      return kOk;
    }

    if (*ch) {
      const auto family_obj = build_family(fam);
      const auto fn = g_name == "sin"   ? TestFunction::kSin
                      : g_name == "abs" ? TestFunction::kAbs
                                        : TestFunction::kDist0;
      const auto g = make_test_potential(family_obj, fn);
      return finish_report(run_hopflax_stability(family_obj, g, t), out,
                           format);
    }

    if (*ck) {
      const auto family_obj = build_family(fam);
      const auto mu = parse_measure_spec(mu_spec, family_obj.limit);
      const auto nu = parse_measure_spec(nu_spec, family_obj.limit);
      return finish_report(run_kantorovich_stability(family_obj, mu, nu, z),
                           out, format);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return kAssertionFailed;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kAssertionFailed;
  }
  return kUsageError;
}
