#include "kmslab/wick.hpp"

#include <cmath>
#include <stdexcept>

namespace kmslab {

WickConstant wick_sigma(int dimension, int cutoff, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const auto lattice = build_lattice(dimension, cutoff);
  double s = 0.0;
  for (std::size_t i = 0; i < lattice->size(); ++i) s += 1.0 / (beta * lattice->eigenvalue(i));
  return {s, dimension, cutoff, beta};
}

double complex_wick_variance(int dimension, int cutoff, double beta) {
  return 2.0 * wick_sigma(dimension, cutoff, beta).sigma;
}

double laguerre(int r, double alpha, double t) {
  if (r < 0) throw std::invalid_argument("negative Laguerre degree");
  double prev = 1.0;
  if (r == 0) return prev;
  double cur = 1.0 + alpha - t;
  for (int k = 1; k < r; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - t) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_he(int m, double x) {
  if (m < 0) throw std::invalid_argument("negative Hermite degree");
  double prev = 1.0;
  if (m == 0) return prev;
  double cur = x;
  for (int k = 1; k < m; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {
double factorial(int r) {
  double f = 1.0;
  for (int i = 2; i <= r; ++i) f *= i;
  return f;
}
void check_sigma(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("Wick variance must be positive");
}
}  // namespace

double wick_complex_power(double x, double sigma, int r) {
  check_sigma(sigma);
  if (r < 1) throw std::invalid_argument("Wick power r must be >= 1");
  const double sign = (r % 2 == 0) ? 1.0 : -1.0;
  return sign * factorial(r) * std::pow(sigma, r) * laguerre(r, 0.0, x / sigma);
}

double wick_complex_power_derivative(double x, double sigma, int r) {
  check_sigma(sigma);
  if (r < 1) throw std::invalid_argument("Wick power r must be >= 1");
  // L_r' = -L_{r-1}^{(1)}
  const double sign = (r % 2 == 0) ? -1.0 : 1.0;
  return sign * factorial(r) * std::pow(sigma, r - 1) * laguerre(r - 1, 1.0, x / sigma);
}

double wick_real_power(double u, double sigma, int m) {
  check_sigma(sigma);
  if (m < 1) throw std::invalid_argument("Wick power m must be >= 1");
  const double s = std::sqrt(sigma);
  return std::pow(s, m) * hermite_he(m, u / s);
}

std::vector<double> wick_complex_power(std::span<const double> abs2, double sigma, int r) {
  std::vector<double> out(abs2.size());
  for (std::size_t i = 0; i < abs2.size(); ++i) out[i] = wick_complex_power(abs2[i], sigma, r);
  return out;
}

std::vector<double> wick_real_power(std::span<const cplx> values, double sigma, int m) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i].imag()) > 1e-10) throw std::domain_error("wick_real_power needs real point values");
    out[i] = wick_real_power(values[i].real(), sigma, m);
  }
  return out;
}

}  // namespace kmslab
