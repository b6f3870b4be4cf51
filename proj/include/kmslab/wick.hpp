#pragma once

#include <span>
#include <vector>

#include "kmslab/field.hpp"

namespace kmslab {

// sigma_{n,beta} = sum_{|k|<=n} 1/(beta lambda_k): pointwise variance of the
// real free field. The complex free field has E|u_n(x)|^2 = 2 sigma.
struct WickConstant {
  double sigma = 0.0;
  int dimension = 1;
  int cutoff = 0;
  double beta = 1.0;
};

WickConstant wick_sigma(int dimension, int cutoff, double beta);
// Variance used to Wick-order |u_n|^{2r} for the complex field.
double complex_wick_variance(int dimension, int cutoff, double beta);

// L_r^{(alpha)}(t) by the three-term recurrence.
double laguerre(int r, double alpha, double t);
// Probabilists' Hermite He_m(x).
double hermite_he(int m, double x);

// :|u|^{2r}: = (-1)^r r! sigma^r L_r(|u|^2/sigma), given x = |u|^2.
double wick_complex_power(double x, double sigma, int r);
// d/dx of the above.
double wick_complex_power_derivative(double x, double sigma, int r);
// :u^m: = sigma^{m/2} He_m(u/sqrt(sigma)).
double wick_real_power(double u, double sigma, int m);

std::vector<double> wick_complex_power(std::span<const double> abs2, double sigma, int r);
// Rejects values whose imaginary part exceeds 1e-10.
std::vector<double> wick_real_power(std::span<const cplx> values, double sigma, int m);

}  // namespace kmslab
