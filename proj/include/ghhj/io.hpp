#ifndef GHHJ_IO_HPP_
#define GHHJ_IO_HPP_

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ghhj/core.hpp"
#include "ghhj/gh_maps.hpp"
#include "ghhj/hopf_lax.hpp"
#include "ghhj/kantorovich.hpp"
#include "ghhj/metric_space.hpp"

// Line-oriented text formats. Every file starts with a header line
// `<kind> v1 <counts...>`; numbers are written with %.17g so that reading a
// written file reproduces the doubles exactly.
//
//   metric-space v1 N    then N rows of N distances, then optional
//                        `# label i <string>` lines
//   graph v1 N E         then E lines `i j w`
//   metric-map v1 N      then N target indices
//   potential v1 N       then N values
//   measure v1 N         then N weights
//   transport-plan v1 N  then N rows of N couplings
namespace ghhj::io {

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Reader {
 public:
  explicit Reader(const std::string& path) : path_(path), in_(path) {
    ghhj::detail::require(in_.good(), "cannot open " + path);
  }

  // Reads the header and returns its integer fields.
  std::vector<long long> header(const std::string& kind, Index fields) {
    std::string line;
    ghhj::detail::require(static_cast<bool>(std::getline(in_, line)),
                          path_ + ": empty file");
    std::istringstream ss(line);
    std::string got_kind, version;
    ss >> got_kind >> version;
    ghhj::detail::require(got_kind == kind && version == "v1",
                          path_ + ": expected header '" + kind +
                              " v1', found '" + line + "'");
    std::vector<long long> values(fields);
    for (auto& v : values) {
      ghhj::detail::require(static_cast<bool>(ss >> v) && v >= 0,
                            path_ + ": malformed header '" + line + "'");
    }
    return values;
  }

  double number() {
    std::string token;
    ghhj::detail::require(static_cast<bool>(in_ >> token),
                          path_ + ": unexpected end of file");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    ghhj::detail::require(used == token.size(),
                          path_ + ": malformed number '" + token + "'");
    return v;
  }

  Index index() {
    const double v = number();
    ghhj::detail::require(v >= 0.0 && v == static_cast<double>(
                                                static_cast<Index>(v)),
                          path_ + ": expected a non-negative integer index");
    return static_cast<Index>(v);
  }

  std::istream& stream() { return in_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  ghhj::detail::require(out.good(), "cannot write " + path);
  out << content;
}

inline std::string values_body(const std::vector<double>& values) {
  std::string s;
  for (double v : values) s += format_double(v) + "\n";
  return s;
}

}  // namespace detail

struct RawMatrix {
  Index n = 0;
  std::vector<double> dist;
  std::vector<std::string> labels;
};

// Reads a metric-space file without validating the metric axioms.
inline RawMatrix read_matrix(const std::string& path) {
  detail::Reader r(path);
  const Index n = static_cast<Index>(r.header("metric-space", 1)[0]);
  ghhj::detail::require(n > 0, path + ": metric space needs N >= 1");
  RawMatrix raw{n, std::vector<double>(n * n), {}};
  for (auto& d : raw.dist) d = r.number();
  std::string line;
  std::vector<std::string> labels(n);
  bool any_label = false;
  while (std::getline(r.stream(), line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    std::string hash, word;
    Index i = 0;
    ss >> hash >> word >> i;
    ghhj::detail::require(hash == "#" && word == "label" && i < n,
                          path + ": unexpected trailing line '" + line + "'");
    std::string label;
    std::getline(ss >> std::ws, label);
    labels[i] = label;
    any_label = true;
  }
  if (any_label) raw.labels = std::move(labels);
  return raw;
}

inline FiniteMetricSpace read_space(const std::string& path,
                                    double tol_metric = kDefaultMetricTol) {
  auto raw = read_matrix(path);
  return FiniteMetricSpace(raw.n, std::move(raw.dist), tol_metric,
                           Validation::kFull, std::move(raw.labels));
}

inline std::string format_space(const FiniteMetricSpace& space) {
  std::string s = "metric-space v1 " + std::to_string(space.size()) + "\n";
  for (Index i = 0; i < space.size(); ++i) {
    for (Index j = 0; j < space.size(); ++j) {
      if (j) s += ' ';
      s += detail::format_double(space(i, j));
    }
    s += '\n';
  }
  for (Index i = 0; i < space.labels().size(); ++i) {
    s += "# label " + std::to_string(i) + " " + space.labels()[i] + "\n";
  }
  return s;
}

inline void write_space(const std::string& path,
                        const FiniteMetricSpace& space) {
  detail::write_file(path, format_space(space));
}

inline GraphSpec read_graph(const std::string& path) {
  detail::Reader r(path);
  const auto h = r.header("graph", 2);
  GraphSpec g{static_cast<Index>(h[0]), {}};
  for (long long e = 0; e < h[1]; ++e) {
    const Index i = r.index();
    const Index j = r.index();
    const double w = r.number();
    g.edges.push_back({i, j, w});
  }
  return g;
}

inline void write_graph(const std::string& path, const GraphSpec& g) {
  std::string s = "graph v1 " + std::to_string(g.n_vertices) + " " +
                  std::to_string(g.edges.size()) + "\n";
  for (const auto& e : g.edges) {
    s += std::to_string(e.i) + " " + std::to_string(e.j) + " " +
         detail::format_double(e.weight) + "\n";
  }
  detail::write_file(path, s);
}

inline MetricMap read_map(const std::string& path, SpacePtr source,
                          SpacePtr target) {
  detail::Reader r(path);
  const Index n = static_cast<Index>(r.header("metric-map", 1)[0]);
  std::vector<Index> assign(n);
  for (auto& a : assign) a = r.index();
  return MetricMap(std::move(source), std::move(target), std::move(assign));
}

inline void write_map(const std::string& path, const MetricMap& f) {
  std::string s = "metric-map v1 " + std::to_string(f.assign().size()) + "\n";
  for (Index a : f.assign()) s += std::to_string(a) + "\n";
  detail::write_file(path, s);
}

inline std::vector<double> read_values(const std::string& path,
                                       const std::string& kind) {
  detail::Reader r(path);
  const Index n = static_cast<Index>(r.header(kind, 1)[0]);
  std::vector<double> values(n);
  for (auto& v : values) v = r.number();
  return values;
}

inline Potential read_potential(const std::string& path, SpacePtr space) {
  return Potential(std::move(space), read_values(path, "potential"));
}

inline void write_potential(const std::string& path, const Potential& p) {
  detail::write_file(path, "potential v1 " + std::to_string(p.size()) + "\n" +
                               detail::values_body(p.values()));
}

inline Measure read_measure(const std::string& path, SpacePtr space) {
  return Measure(std::move(space), read_values(path, "measure"));
}

inline void write_measure(const std::string& path, const Measure& m) {
  detail::write_file(path, "measure v1 " + std::to_string(m.size()) + "\n" +
                               detail::values_body(m.weights()));
}

inline void write_plan(const std::string& path, const TransportPlan& plan) {
  const Index n = plan.source.size();
  std::string s = "transport-plan v1 " + std::to_string(n) + "\n";
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (j) s += ' ';
      s += detail::format_double(plan.at(i, j));
    }
    s += '\n';
  }
  detail::write_file(path, s);
}

}  // namespace ghhj::io

#endif  // GHHJ_IO_HPP_
