#pragma once

#include <functional>
#include <span>
#include <vector>

namespace kmslab {

// Smooth function on R^{2n} = C^n with coordinates (x_1..x_n, y_1..y_n),
// u_j = x_j + i y_j. The gradient is written as (d/dx_1..d/dx_n, d/dy_1..d/dy_n).
struct PhaseFunction {
  int modes = 1;  // n
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
};

// Canonical bracket {F,G} = sum_j dF/dx_j dG/dy_j - dG/dx_j dF/dy_j.
double poisson_bracket(const PhaseFunction& F, const PhaseFunction& G, std::span<const double> z);

PhaseFunction coordinate_function(int modes, int index);  // z_index
// |u|^2/2 + quartic * |u|^4/4 with |u|^2 = sum x_j^2 + y_j^2.
PhaseFunction harmonic_quartic(int modes, double quartic);
// sin(<a,z> + phase) exp(-|z|^2 / (2 width^2))
PhaseFunction windowed_trig(std::vector<double> a, double phase, double width);

struct QuadratureOptions {
  double box = 0.0;          // half-width L; 0 selects L from the density tail
  double tail = 1e-14;       // density tail target for the automatic box
  int initial_points = 16;   // intervals per axis before refinement
  int max_points = 0;        // 0 picks a dimension-dependent cap
  double tolerance = 1e-10;  // successive refinements must agree to this
};

struct QuadratureResult {
  double lhs = 0.0;  // int {F,G} dmu
  double rhs = 0.0;  // beta int {F,h} G dmu
  double gap = 0.0;
  double box = 0.0;
  int points = 0;
  double refinement_change = 0.0;
};

// Both sides of the finite-dimensional KMS identity against the normalized
// Gibbs density exp(-beta h) (or `density`, unnormalized, when given), by
// nested trapezoid tensor grids on [-L, L]^{2n}. Throws ConvergenceError when
// refinement does not settle.
QuadratureResult finite_dim_quadrature_check(const PhaseFunction& h, double beta, const PhaseFunction& F,
                                             const PhaseFunction& G,
                                             const std::function<double(std::span<const double>)>& density = {},
                                             QuadratureOptions options = {});

}  // namespace kmslab
