#pragma once

// Data-parallel building blocks. Every kernel has a serial and an OpenMP
// path; both visit terms in index order when reducing, so the two paths
// return bit-identical results and the thread count never changes output.

#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <vector>

namespace tmlab::kernels {

enum class Exec { serial, parallel };

/// Below this many terms the parallel path falls back to the serial loop.
inline constexpr std::size_t kParallelThreshold = 256;

/// Neumaier compensated summation; infinite terms propagate without NaN.
class Accumulator {
 public:
  void add(double x) noexcept {
    if (!std::isfinite(x) || !std::isfinite(sum_)) {
      sum_ += x;
      comp_ = 0.0;
      return;
    }
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {

// Keeps the exception thrown at the lowest index so that a failing parallel
// loop reports the same error as the serial one.
class FirstError {
 public:
  void record(std::size_t index, std::exception_ptr e) {
#pragma omp critical(tmlab_first_error)
    {
      if (!error_ || index < index_) {
        error_ = e;
        index_ = index;
      }
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
  std::size_t index_ = std::numeric_limits<std::size_t>::max();
};

}  // namespace detail

/// Runs body(i) for i in [0, n). Iterations must write disjoint state.
template <class Body>
void parallel_for(std::size_t n, Body&& body, Exec exec = Exec::parallel) {
  if (exec == Exec::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  detail::FirstError first;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      first.record(static_cast<std::size_t>(i), std::current_exception());
    }
  }
  first.rethrow();
}

/// Sum of term(i) over i in [0, n), reduced in index order.
template <class Term>
double ordered_sum(std::size_t n, Term&& term, Exec exec = Exec::parallel) {
  if (exec == Exec::serial || n < kParallelThreshold) {
    Accumulator acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(term(i));
    return acc.value();
  }
  std::vector<double> buffer(n);
  detail::FirstError first;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      buffer[static_cast<std::size_t>(i)] = term(static_cast<std::size_t>(i));
    } catch (...) {
      first.record(static_cast<std::size_t>(i), std::current_exception());
    }
  }
  first.rethrow();
  Accumulator acc;
  for (double v : buffer) acc.add(v);
  return acc.value();
}

/// Fills out[i] = term(i); out is resized to n.
template <class Term>
void ordered_map(std::size_t n, std::vector<double>& out, Term&& term, Exec exec = Exec::parallel) {
  out.assign(n, 0.0);
  parallel_for(
      n, [&](std::size_t i) { out[i] = term(i); },
      exec == Exec::parallel && n >= kParallelThreshold ? Exec::parallel : Exec::serial);
}

}  // namespace tmlab::kernels
