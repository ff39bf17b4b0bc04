#pragma once

// Data-parallel inner loops of the solver. Every kernel exists twice: a
// serial reference (kept for testing and as the default inside a single
// integration) and an OpenMP variant with the same summation order per output
// entry, so the two agree bit-for-bit except where a reduction is involved.

#include <cstddef>
#include <span>

namespace sgwave::kernels {

/// Row-major view of the basis matrix: entry (i, k) = e_k(node_i).
struct BasisView {
  std::span<const double> matrix;
  std::size_t rows = 0;  // grid points
  std::size_t cols = 0;  // modes
};

enum class Execution { Serial, Parallel };

namespace serial {

/// samples_i = sum_k coeffs_k e_k(node_i)
void synthesize(const BasisView& basis, std::span<const double> coeffs, std::span<double> samples);

/// coeffs_k = sum_i w_i samples_i e_k(node_i)
void analyze(const BasisView& basis, std::span<const double> weights,
             std::span<const double> samples, std::span<double> coeffs);

/// sum_i w_i |samples_i|^p
double weighted_abs_power_sum(std::span<const double> weights, std::span<const double> samples,
                              double p);

template <class Fn>
void for_each_index(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace serial

namespace parallel {

void synthesize(const BasisView& basis, std::span<const double> coeffs, std::span<double> samples);

void analyze(const BasisView& basis, std::span<const double> weights,
             std::span<const double> samples, std::span<double> coeffs);

/// Reduction order differs from the serial kernel; agreement is to round-off.
double weighted_abs_power_sum(std::span<const double> weights, std::span<const double> samples,
                              double p);

/// Independent tasks indexed 0..n-1. fn must not touch shared mutable state.
template <class Fn>
void for_each_index(std::size_t n, Fn&& fn) {
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

}  // namespace parallel

template <class Fn>
void for_each_index(Execution exec, std::size_t n, Fn&& fn) {
  if (exec == Execution::Parallel)
    parallel::for_each_index(n, fn);
  else
    serial::for_each_index(n, fn);
}

}  // namespace sgwave::kernels
