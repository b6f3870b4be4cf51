#include "kmslab/finite_dim.hpp"

#include <cmath>
#include <stdexcept>

#include "kmslab/errors.hpp"

namespace kmslab {

double poisson_bracket(const PhaseFunction& F, const PhaseFunction& G, std::span<const double> z) {
  const int n = F.modes;
  std::vector<double> gf(2 * n), gg(2 * n);
  F.gradient(z, gf);
  G.gradient(z, gg);
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += gf[j] * gg[n + j] - gg[j] * gf[n + j];
  return s;
}

PhaseFunction coordinate_function(int modes, int index) {
  if (index < 0 || index >= 2 * modes) throw std::out_of_range("coordinate index");
  return PhaseFunction{modes, [index](std::span<const double> z) { return z[index]; },
                       [index](std::span<const double>, std::span<double> g) {
                         std::fill(g.begin(), g.end(), 0.0);
                         g[index] = 1.0;
                       }};
}

PhaseFunction harmonic_quartic(int modes, double quartic) {
  auto r2 = [](std::span<const double> z) {
    double s = 0.0;
    for (double x : z) s += x * x;
    return s;
  };
  return PhaseFunction{modes,
                       [=](std::span<const double> z) {
                         const double t = r2(z);
                         return 0.5 * t + 0.25 * quartic * t * t;
                       },
                       [=](std::span<const double> z, std::span<double> g) {
                         const double f = 1.0 + quartic * r2(z);
                         for (std::size_t i = 0; i < z.size(); ++i) g[i] = f * z[i];
                       }};
}

PhaseFunction windowed_trig(std::vector<double> a, double phase, double width) {
  if (a.empty() || a.size() % 2 != 0) throw std::invalid_argument("windowed_trig needs 2n coefficients");
  const int modes = static_cast<int>(a.size() / 2);
  const double w2 = width * width;
  auto parts = [a, phase, w2](std::span<const double> z, double& arg, double& window) {
    arg = phase;
    double r2 = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      arg += a[i] * z[i];
      r2 += z[i] * z[i];
    }
    window = std::exp(-0.5 * r2 / w2);
  };
  return PhaseFunction{modes,
                       [parts](std::span<const double> z) {
                         double arg, window;
                         parts(z, arg, window);
                         return std::sin(arg) * window;
                       },
                       [parts, a, w2](std::span<const double> z, std::span<double> g) {
                         double arg, window;
                         parts(z, arg, window);
                         const double s = std::sin(arg), c = std::cos(arg);
                         for (std::size_t i = 0; i < z.size(); ++i) g[i] = window * (c * a[i] - s * z[i] / w2);
                       }};
}

namespace {

struct Sums {
  long double z = 0, lhs = 0, rhs = 0;
};

Sums integrate(int dims, double L, int intervals, const std::function<double(std::span<const double>)>& rho,
               const std::function<double(std::span<const double>)>& kms_lhs,
               const std::function<double(std::span<const double>)>& kms_rhs) {
  const int m = intervals + 1;
  const double h = 2.0 * L / intervals;
  std::size_t total = 1;
  for (int i = 0; i < dims; ++i) total *= static_cast<std::size_t>(m);
  std::vector<double> z(dims);
  Sums s;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = idx;
    double w = 1.0;
    for (int d = 0; d < dims; ++d) {
      const int j = static_cast<int>(r % m);
      r /= m;
      z[d] = -L + j * h;
      if (j == 0 || j == intervals) w *= 0.5;
    }
    const double p = rho(z);
    if (p == 0.0) continue;
    s.z += w * p;
    s.lhs += w * p * kms_lhs(z);
    s.rhs += w * p * kms_rhs(z);
  }
  return s;
}

double choose_box(int dims, const std::function<double(std::span<const double>)>& rho, double tail) {
  // Peak over a coarse grid, then grow L until the density on the box faces is
  // below tail * peak (faces sampled on a coarse lattice).
  auto face_max = [&](double L, int k) {
    double mx = 0.0;
    const int m = 2 * k + 1;
    std::size_t total = 1;
    for (int i = 0; i < dims; ++i) total *= m;
    std::vector<double> z(dims);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t r = idx;
      bool on_face = false;
      for (int d = 0; d < dims; ++d) {
        const int j = static_cast<int>(r % m);
        r /= m;
        z[d] = L * (j - k) / static_cast<double>(k);
        on_face = on_face || j == 0 || j == m - 1;
      }
      if (on_face) mx = std::max(mx, rho(z));
    }
    return mx;
  };
  double peak = 0.0;
  for (double L : {0.25, 0.5, 1.0, 2.0}) {
    const int k = 6;
    const int m = 2 * k + 1;
    std::size_t total = 1;
    for (int i = 0; i < dims; ++i) total *= m;
    std::vector<double> z(dims);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t r = idx;
      for (int d = 0; d < dims; ++d) {
        z[d] = L * (static_cast<int>(r % m) - k) / static_cast<double>(k);
        r /= m;
      }
      peak = std::max(peak, rho(z));
    }
  }
  if (!(peak > 0.0)) throw std::invalid_argument("density vanishes near the origin");
  for (double L = 1.0; L <= 64.0; L += 0.5) {
    if (face_max(L, 8) < tail * peak) return L;
  }
  throw ConvergenceError("density is not integrable on boxes up to L = 64");
}

}  // namespace

QuadratureResult finite_dim_quadrature_check(const PhaseFunction& h, double beta, const PhaseFunction& F,
                                             const PhaseFunction& G,
                                             const std::function<double(std::span<const double>)>& density,
                                             QuadratureOptions options) {
  const int n = h.modes;
  if (n < 1 || n > 2) throw std::invalid_argument("finite-dimensional check supports n <= 2 complex modes");
  if (F.modes != n || G.modes != n) throw std::invalid_argument("F, G and h must share the phase space");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const int dims = 2 * n;

  std::function<double(std::span<const double>)> rho = density;
  if (!rho) rho = [&](std::span<const double> z) { return std::exp(-beta * h.value(z)); };
  auto lhs = [&](std::span<const double> z) { return poisson_bracket(F, G, z); };
  auto rhs = [&](std::span<const double> z) { return beta * poisson_bracket(F, h, z) * G.value(z); };

  QuadratureResult out;
  out.box = options.box > 0.0 ? options.box : choose_box(dims, rho, options.tail);
  const int cap = options.max_points > 0 ? options.max_points : (dims == 2 ? 2048 : 128);

  double prev_lhs = NAN, prev_rhs = NAN, prev_gap = NAN;
  for (int m = options.initial_points; m <= cap; m *= 2) {
    const Sums s = integrate(dims, out.box, m, rho, lhs, rhs);
    if (!(s.z > 0)) throw ConvergenceError("density integrates to zero on the quadrature box");
    const double l = static_cast<double>(s.lhs / s.z), r = static_cast<double>(s.rhs / s.z);
    const double gap = std::abs(l - r);
    if (std::isfinite(prev_gap)) {
      const double change =
          std::max({std::abs(gap - prev_gap), std::abs(l - prev_lhs), std::abs(r - prev_rhs)});
      if (change < options.tolerance) {
        out.lhs = l;
        out.rhs = r;
        out.gap = gap;
        out.points = m;
        out.refinement_change = change;
        return out;
      }
    }
    prev_lhs = l;
    prev_rhs = r;
    prev_gap = gap;
  }
  throw ConvergenceError("quadrature did not converge under grid refinement");
}

}  // namespace kmslab
