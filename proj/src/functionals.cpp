#include "kmslab/functionals.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "kmslab/errors.hpp"
#include "kmslab/wick.hpp"

namespace kmslab {

namespace {
double grid_mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

int points_for(const InteractionSpec& spec) {
  spec.validate();
  return alias_free_points(spec.cutoff, spec.degree());
}
}  // namespace

InteractionEvaluator::InteractionEvaluator(InteractionSpec spec)
    : spec_(std::move(spec)), grid_(spec_.dimension, points_for(spec_)) {
  switch (spec_.variant) {
    case Variant::WickHartree:
    case Variant::WickNLS2D: sigma_ = complex_wick_variance(spec_.dimension, spec_.cutoff, spec_.beta); break;
    case Variant::WickWave: sigma_ = wick_sigma(spec_.dimension, spec_.cutoff, spec_.beta).sigma; break;
    default: sigma_ = 0.0;
  }
  if (spec_.is_hartree()) {
    vhat_.resize(grid_.total());
    for (std::size_t s = 0; s < grid_.total(); ++s) vhat_[s] = spec_.potential(grid_.frequency(s));
  }
}

void InteractionEvaluator::check(const SpectralField& u) const {
  if (u.lattice().dimension() != spec_.dimension || u.lattice().cutoff() != spec_.cutoff) {
    throw LatticeMismatch("field lattice (d=" + std::to_string(u.lattice().dimension()) +
                          ", n=" + std::to_string(u.lattice().cutoff()) + ") does not match interaction spec");
  }
}

// rho = |u|^2 (Hartree1D) or :|u|^2: = |u|^2 - sigma (WickHartree).
std::vector<double> InteractionEvaluator::density(std::span<const cplx> values) const {
  std::vector<double> rho(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) rho[i] = std::norm(values[i]) - sigma_;
  return rho;
}

std::vector<double> InteractionEvaluator::multiplier(std::span<const cplx> values) const {
  std::vector<double> g(values.size());
  switch (spec_.variant) {
    case Variant::Hartree1D:
    case Variant::WickHartree: {
      auto rho = density(values);
      std::vector<cplx> rc(rho.begin(), rho.end());
      auto hat = grid_.forward(rc);
      for (std::size_t s = 0; s < hat.size(); ++s) hat[s] *= vhat_[s];
      auto conv = grid_.backward(hat);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = conv[i].real();
      break;
    }
    case Variant::NLS1D: {
      const double sign = spec_.focusing ? -1.0 : 1.0;
      const int half = spec_.power / 2 - 1;
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = sign * std::pow(std::norm(values[i]), half);
      break;
    }
    case Variant::WickNLS2D: {
      const int r = spec_.power;
      for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = wick_complex_power_derivative(std::norm(values[i]), sigma_, r) / r;
      break;
    }
    case Variant::WickWave: throw std::logic_error("wave interaction has no complex multiplier");
  }
  return g;
}

double InteractionEvaluator::energy(const SpectralField& u) const {
  check(u);
  auto values = grid_.eval(u);
  switch (spec_.variant) {
    case Variant::Hartree1D:
    case Variant::WickHartree: {
      auto rho = density(values);
      std::vector<cplx> rc(rho.begin(), rho.end());
      auto hat = grid_.forward(rc);
      double e = 0.0;
      for (std::size_t s = 0; s < hat.size(); ++s) e += vhat_[s] * std::norm(hat[s]);
      return 0.25 * e;
    }
    case Variant::NLS1D: {
      const double sign = spec_.focusing ? -1.0 : 1.0;
      const int q = spec_.power;
      std::vector<double> d(values.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::pow(std::norm(values[i]), q / 2);
      return sign * grid_mean(d) / q;
    }
    case Variant::WickNLS2D: {
      const int r = spec_.power;
      std::vector<double> d(values.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = wick_complex_power(std::norm(values[i]), sigma_, r);
      return grid_mean(d) / (2.0 * r);
    }
    case Variant::WickWave: {
      auto d = wick_real_power(values, sigma_, spec_.power);
      return grid_mean(d) / spec_.power;
    }
  }
  return 0.0;
}

SpectralField InteractionEvaluator::gradient(const SpectralField& u) const {
  check(u);
  auto values = grid_.eval(u);
  if (spec_.variant == Variant::WickWave) {
    auto d = wick_real_power(values, sigma_, spec_.power - 1);
    std::vector<cplx> dc(d.begin(), d.end());
    return grid_.synth(dc, u.lattice_ptr());
  }
  auto g = multiplier(values);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] *= g[i];
  return grid_.synth(values, u.lattice_ptr());
}

ComplexModel ComplexModel::linear(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  return ComplexModel(beta, nullptr);
}

ComplexModel::ComplexModel(InteractionSpec spec)
    : beta_(spec.beta), eval_(std::make_shared<const InteractionEvaluator>(std::move(spec))) {
  if (eval_->spec().is_wave()) throw std::invalid_argument("wave interaction needs a WaveModel");
}

double ComplexModel::interaction_energy(const SpectralField& u) const { return eval_ ? eval_->energy(u) : 0.0; }

SpectralField ComplexModel::interaction_gradient(const SpectralField& u) const {
  return eval_ ? eval_->gradient(u) : SpectralField(u.lattice_ptr());
}

SpectralField ComplexModel::vector_field(const SpectralField& u) const {
  SpectralField x = apply_A(u);
  if (eval_) x += eval_->gradient(u);
  return apply_J(x);
}

double ComplexModel::hamiltonian(const SpectralField& u) const {
  return 0.5 * pair_real(u, apply_A(u)) + interaction_energy(u);
}

std::string ComplexModel::hash() const {
  if (eval_) return eval_->spec().hash();
  char buf[64];
  std::snprintf(buf, sizeof buf, "linear|%.17g", beta_);
  return buf;
}

WaveModel WaveModel::linear(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  return WaveModel(beta, nullptr);
}

WaveModel::WaveModel(InteractionSpec spec)
    : beta_(spec.beta), eval_(std::make_shared<const InteractionEvaluator>(std::move(spec))) {
  if (!eval_->spec().is_wave()) throw std::invalid_argument("WaveModel needs the WickWave variant");
}

double WaveModel::interaction_energy(const FieldPair& p) const { return eval_ ? eval_->energy(p.u) : 0.0; }

FieldPair WaveModel::interaction_gradient(const FieldPair& p) const {
  return FieldPair{eval_ ? eval_->gradient(p.u) : SpectralField(p.u.lattice_ptr()), SpectralField(p.v.lattice_ptr())};
}

SpectralField WaveModel::force(const SpectralField& u) const {
  SpectralField f = apply_A(u);
  if (eval_) f += eval_->gradient(u);
  return -f;
}

FieldPair WaveModel::vector_field(const FieldPair& p) const {
  require_same_lattice(p.u, p.v);
  return FieldPair{p.v, force(p.u)};
}

double WaveModel::hamiltonian(const FieldPair& p) const {
  return 0.5 * pair_real(p, apply_A(p)) + interaction_energy(p);
}

std::string WaveModel::hash() const {
  if (eval_) return eval_->spec().hash();
  char buf[64];
  std::snprintf(buf, sizeof buf, "wave-linear|%.17g", beta_);
  return buf;
}

double energy(const InteractionSpec& spec, const SpectralField& u) {
  if (spec.is_wave()) throw std::invalid_argument("wave interaction takes a field pair");
  return InteractionEvaluator(spec).energy(u);
}

double energy(const InteractionSpec& spec, const FieldPair& p) { return WaveModel(spec).interaction_energy(p); }

SpectralField gradient(const InteractionSpec& spec, const SpectralField& u) {
  if (spec.is_wave()) throw std::invalid_argument("wave interaction takes a field pair");
  return InteractionEvaluator(spec).gradient(u);
}

FieldPair gradient(const InteractionSpec& spec, const FieldPair& p) { return WaveModel(spec).interaction_gradient(p); }

SpectralField vector_field(const InteractionSpec& spec, const SpectralField& u) {
  return ComplexModel(spec).vector_field(u);
}

FieldPair vector_field(const InteractionSpec& spec, const FieldPair& p) { return WaveModel(spec).vector_field(p); }

SpectralField linear_vector_field(const SpectralField& u) { return apply_J(apply_A(u)); }

FieldPair linear_vector_field(const FieldPair& p) { return FieldPair{p.v, -apply_A(p.u)}; }

double directional_fd(const InteractionSpec& spec, const SpectralField& u, const SpectralField& direction, double step) {
  InteractionEvaluator ev(spec);
  return directional_fd<SpectralField>([&](const SpectralField& x) { return ev.energy(x); }, u, direction, step);
}

double directional_fd(const InteractionSpec& spec, const FieldPair& u, const FieldPair& direction, double step) {
  WaveModel m(spec);
  return directional_fd<FieldPair>([&](const FieldPair& x) { return m.interaction_energy(x); }, u, direction, step);
}

}  // namespace kmslab
