#ifndef GHHJ_CORE_HPP_
#define GHHJ_CORE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ghhj {

using Index = std::size_t;

// Bad user input: malformed files, out-of-range parameters, invalid metrics.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A quantity that must hold by a theorem did not hold numerically.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The transport LP did not terminate in an optimal state.
class SolverError : public std::runtime_error {
 public:
  SolverError(std::string status, const std::string& what)
      : std::runtime_error(what + " [status: " + status + "]"),
        status_(std::move(status)) {}
  const std::string& status() const noexcept { return status_; }

 private:
  std::string status_;
};

namespace detail {

inline void require(bool ok, const std::string& message) {
  if (!ok) throw InputError(message);
}

inline void ensure(bool ok, const std::string& message) {
  if (!ok) throw InvariantViolation(message);
}

}  // namespace detail

// Neumaier-compensated sum. Order of accumulation is the index order, so the
// result is reproducible bit-for-bit.
inline double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

inline double compensated_dot(std::span<const double> a,
                              std::span<const double> b) {
  std::vector<double> products(a.size());
  for (Index i = 0; i < a.size(); ++i) products[i] = a[i] * b[i];
  return compensated_sum(products);
}

// Number of worker threads: GHHJB_THREADS caps parallelism, 0 or unset = auto.
inline unsigned thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GHHJB_THREADS")) {
    char* end = nullptr;
    const long requested = std::strtol(env, &end, 10);
    if (end != env && requested > 0) {
      return std::min<unsigned>(hw, static_cast<unsigned>(requested));
    }
  }
  return hw;
}

// Runs body(i) for i in [0, n). Each index is handled by exactly one thread
// and writes only its own output slot, so results do not depend on the
// schedule.
template <typename Body>
void parallel_for(Index n, Body&& body, Index serial_below = 128) {
  const unsigned threads = thread_count();
  if (threads <= 1 || n < serial_below) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  const Index workers = std::min<Index>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (Index w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (Index i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ghhj

#endif  // GHHJ_CORE_HPP_
