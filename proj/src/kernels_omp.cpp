#include "sgwave/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace sgwave::kernels::parallel {

void synthesize(const BasisView& basis, std::span<const double> coeffs, std::span<double> samples) {
  if (coeffs.size() != basis.cols || samples.size() != basis.rows)
    throw std::invalid_argument("synthesize: size mismatch");
  const auto rows = static_cast<long long>(basis.rows);
  const std::size_t cols = basis.cols;
  const double* m = basis.matrix.data();
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < rows; ++i) {
    const double* row = m + static_cast<std::size_t>(i) * cols;
    double acc = 0.0;
    for (std::size_t k = 0; k < cols; ++k) acc += row[k] * coeffs[k];
    samples[static_cast<std::size_t>(i)] = acc;
  }
}

void analyze(const BasisView& basis, std::span<const double> weights,
             std::span<const double> samples, std::span<double> coeffs) {
  if (coeffs.size() != basis.cols || samples.size() != basis.rows || weights.size() != basis.rows)
    throw std::invalid_argument("analyze: size mismatch");
  const auto cols = static_cast<long long>(basis.cols);
  const std::size_t rows = basis.rows;
  const double* m = basis.matrix.data();
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < cols; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
      acc += weights[i] * samples[i] * m[i * basis.cols + static_cast<std::size_t>(k)];
    coeffs[static_cast<std::size_t>(k)] = acc;
  }
}

double weighted_abs_power_sum(std::span<const double> weights, std::span<const double> samples,
                              double p) {
  if (weights.size() != samples.size())
    throw std::invalid_argument("weighted_abs_power_sum: size mismatch");
  const auto n = static_cast<long long>(samples.size());
  double acc = 0.0;
#pragma omp parallel for reduction(+ : acc) schedule(static)
  for (long long i = 0; i < n; ++i)
    acc += weights[static_cast<std::size_t>(i)] *
           std::pow(std::abs(samples[static_cast<std::size_t>(i)]), p);
  return acc;
}

}  // namespace sgwave::kernels::parallel
