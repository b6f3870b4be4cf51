#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace kmslab {

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

struct ComplexEstimate {
  std::complex<double> value{0.0, 0.0};
  double stderr_re = 0.0;
  double stderr_im = 0.0;
};

// Fixed-shape pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> x);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> x);

// (sum w)^2 / sum w^2
double effective_sample_size(std::span<const double> weights);

// Self-normalized mean sum w f / sum w with delta-method standard error.
// Without weights: plain mean and sample standard error.
Estimate weighted_mean(std::span<const double> values, std::span<const double> weights = {});

// Self-normalized mean of complex per-sample contributions; the standard error
// comes from `batches` contiguous batch means (linearized ratio for weights).
ComplexEstimate batch_mean(std::span<const std::complex<double>> values, std::span<const double> weights = {},
                           int batches = 100);

// Same estimator from precomputed per-batch sums S_j = sum w f and W_j = sum w,
// for streaming use when per-sample values are too many to store.
ComplexEstimate batch_mean_from_sums(std::span<const std::complex<double>> sums, std::span<const double> batch_weights);

}  // namespace kmslab
