#include "sgwave/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace sgwave::kernels::serial {

void synthesize(const BasisView& basis, std::span<const double> coeffs, std::span<double> samples) {
  if (coeffs.size() != basis.cols || samples.size() != basis.rows)
    throw std::invalid_argument("synthesize: size mismatch");
  for (std::size_t i = 0; i < basis.rows; ++i) {
    const double* row = basis.matrix.data() + i * basis.cols;
    double acc = 0.0;
    for (std::size_t k = 0; k < basis.cols; ++k) acc += row[k] * coeffs[k];
    samples[i] = acc;
  }
}

void analyze(const BasisView& basis, std::span<const double> weights,
             std::span<const double> samples, std::span<double> coeffs) {
  if (coeffs.size() != basis.cols || samples.size() != basis.rows || weights.size() != basis.rows)
    throw std::invalid_argument("analyze: size mismatch");
  for (std::size_t k = 0; k < basis.cols; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < basis.rows; ++i)
      acc += weights[i] * samples[i] * basis.matrix[i * basis.cols + k];
    coeffs[k] = acc;
  }
}

double weighted_abs_power_sum(std::span<const double> weights, std::span<const double> samples,
                              double p) {
  if (weights.size() != samples.size())
    throw std::invalid_argument("weighted_abs_power_sum: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    acc += weights[i] * std::pow(std::abs(samples[i]), p);
  return acc;
}

}  // namespace sgwave::kernels::serial
