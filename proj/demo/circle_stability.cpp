// Hopf-Lax and Kantorovich stability on a refining circle, printed as tables.

#include <cstdio>
#include <iostream>

#include "ghhj/ghhj.hpp"

int main() {
  using namespace ghhj;

  const auto family = build_circle_family({8, 16, 32, 64}, 512);
  const auto g = make_test_potential(family, TestFunction::kSin);
  std::cout << emit_report(run_hopflax_stability(family, g, 1.0),
                           ReportFormat::kTable)
            << "\n";

  // Uniform mass against the same mass rotated by half a turn.
  const Index n = family.limit->size();
  std::vector<double> w(n, 0.0);
  for (Index i = 0; i < n; i += 64) w[i] = 1.0;
  std::vector<double> rotated(n, 0.0);
  for (Index i = 0; i < n; ++i) rotated[(i + n / 2) % n] = w[i];
  for (auto* v : {&w, &rotated}) {
    for (auto& x : *v) x /= 8.0;
  }
  const Measure mu(family.limit, w);
  const Measure nu(family.limit, rotated);
  std::cout << emit_report(run_kantorovich_stability(family, mu, nu, 0),
                           ReportFormat::kTable);
  return 0;
}
