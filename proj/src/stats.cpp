#include "kmslab/stats.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kmslab/parallel.hpp"

namespace kmslab {

int worker_count() { return omp_get_max_threads(); }

void set_worker_count(int workers) {
  if (workers < 1) throw std::invalid_argument("worker count must be positive");
  omp_set_num_threads(workers);
}

namespace {
template <class T>
T pairwise(const T* x, std::size_t n) {
  if (n <= 16) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise(x, h) + pairwise(x + h, n - h);
}

void check_weights(std::span<const double> w, std::size_t n) {
  if (w.empty()) return;
  if (w.size() != n) throw std::invalid_argument("weight count does not match sample count");
}
}  // namespace

double pairwise_sum(std::span<const double> x) { return pairwise(x.data(), x.size()); }

std::complex<double> pairwise_sum(std::span<const std::complex<double>> x) { return pairwise(x.data(), x.size()); }

double effective_sample_size(std::span<const double> weights) {
  std::vector<double> sq(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) sq[i] = weights[i] * weights[i];
  const double s = pairwise_sum(weights);
  const double s2 = pairwise_sum(sq);
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

Estimate weighted_mean(std::span<const double> values, std::span<const double> weights) {
  const std::size_t n = values.size();
  if (n == 0) throw std::invalid_argument("weighted_mean of empty sample");
  for (double v : values)
    if (!std::isfinite(v)) throw std::domain_error("non-finite observable value");
  check_weights(weights, n);
  std::vector<double> tmp(n);
  if (weights.empty()) {
    const double mean = pairwise_sum(values) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = (values[i] - mean) * (values[i] - mean);
    const double var = n > 1 ? pairwise_sum(tmp) / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n))};
  }
  for (std::size_t i = 0; i < n; ++i) tmp[i] = weights[i] * values[i];
  const double sw = pairwise_sum(weights);
  if (!(sw > 0.0)) throw std::invalid_argument("weights sum to zero");
  const double mean = pairwise_sum(tmp) / sw;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = weights[i] * (values[i] - mean);
    tmp[i] = d * d;
  }
  return {mean, std::sqrt(pairwise_sum(tmp)) / sw};
}

ComplexEstimate batch_mean(std::span<const std::complex<double>> values, std::span<const double> weights,
                           int batches) {
  using C = std::complex<double>;
  const std::size_t n = values.size();
  if (n == 0) throw std::invalid_argument("batch_mean of empty sample");
  for (const C& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::domain_error("non-finite residual value");
  check_weights(weights, n);
  const bool weighted = !weights.empty();

  std::vector<C> wv(n);
  for (std::size_t i = 0; i < n; ++i) wv[i] = weighted ? weights[i] * values[i] : values[i];
  const double sw = weighted ? pairwise_sum(weights) : static_cast<double>(n);
  if (!(sw > 0.0)) throw std::invalid_argument("weights sum to zero");
  const C mean = pairwise_sum(std::span<const C>(wv)) / sw;

  const std::size_t b = std::min<std::size_t>(std::max(batches, 2), n);
  ComplexEstimate out;
  out.value = mean;
  if (b < 2) return out;
  // Batch j covers [j*n/b, (j+1)*n/b). z_j linearizes the ratio estimator.
  const double wbar = sw / static_cast<double>(b);
  std::vector<double> zr(b), zi(b);
  for (std::size_t j = 0; j < b; ++j) {
    const std::size_t lo = j * n / b, hi = (j + 1) * n / b;
    const C s = pairwise_sum(std::span<const C>(wv.data() + lo, hi - lo));
    const double w = weighted ? pairwise_sum(weights.subspan(lo, hi - lo)) : static_cast<double>(hi - lo);
    const C z = (s - mean * w) / wbar;
    zr[j] = z.real() * z.real();
    zi[j] = z.imag() * z.imag();
  }
  const double denom = static_cast<double>(b) * static_cast<double>(b - 1);
  out.stderr_re = std::sqrt(pairwise_sum(zr) / denom);
  out.stderr_im = std::sqrt(pairwise_sum(zi) / denom);
  return out;
}

ComplexEstimate batch_mean_from_sums(std::span<const std::complex<double>> sums, std::span<const double> batch_weights) {
  using C = std::complex<double>;
  const std::size_t b = sums.size();
  if (b < 2 || batch_weights.size() != b) throw std::invalid_argument("need matching sums for at least two batches");
  const double sw = pairwise_sum(batch_weights);
  if (!(sw > 0.0)) throw std::invalid_argument("weights sum to zero");
  ComplexEstimate out;
  out.value = pairwise_sum(sums) / sw;
  const double wbar = sw / static_cast<double>(b);
  std::vector<double> zr(b), zi(b);
  for (std::size_t j = 0; j < b; ++j) {
    const C z = (sums[j] - out.value * batch_weights[j]) / wbar;
    zr[j] = z.real() * z.real();
    zi[j] = z.imag() * z.imag();
  }
  const double denom = static_cast<double>(b) * static_cast<double>(b - 1);
  out.stderr_re = std::sqrt(pairwise_sum(zr) / denom);
  out.stderr_im = std::sqrt(pairwise_sum(zi) / denom);
  return out;
}

}  // namespace kmslab
