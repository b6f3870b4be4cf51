#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kmslab/field.hpp"
#include "kmslab/grid.hpp"
#include "kmslab/interaction.hpp"

namespace kmslab {

// Evaluates h^I, its gradient (the Malliavin derivative, projected onto the
// lattice) and the pointwise multiplier g with grad h^I = P_n[g u] on an
// alias-free grid. Immutable and thread-safe.
class InteractionEvaluator {
 public:
  explicit InteractionEvaluator(InteractionSpec spec);

  const InteractionSpec& spec() const { return spec_; }
  // Variance used for Wick ordering (0 for the raw variants).
  double wick_variance() const { return sigma_; }
  int grid_points() const { return grid_.points(); }

  double energy(const SpectralField& u) const;
  SpectralField gradient(const SpectralField& u) const;
  // Real multiplier on the grid for the complex variants.
  std::vector<double> multiplier(std::span<const cplx> values) const;
  std::vector<cplx> grid_values(const SpectralField& u) const { return grid_.eval(u); }
  SpectralField project(std::span<const cplx> values, const LatticePtr& lattice) const {
    return grid_.synth(values, lattice);
  }

 private:
  void check(const SpectralField& u) const;
  std::vector<double> density(std::span<const cplx> values) const;

  InteractionSpec spec_;
  double sigma_ = 0.0;
  GridTransform grid_;
  std::vector<double> vhat_;  // per grid slot, Hartree only
};

// Complex-structure model: X(u) = -i(Au + grad h^I(u)).
class ComplexModel {
 public:
  static ComplexModel linear(double beta);
  explicit ComplexModel(InteractionSpec spec);

  double beta() const { return beta_; }
  bool is_linear() const { return !eval_; }
  const InteractionEvaluator* evaluator() const { return eval_.get(); }
  const InteractionSpec* spec() const { return eval_ ? &eval_->spec() : nullptr; }

  double interaction_energy(const SpectralField& u) const;
  SpectralField interaction_gradient(const SpectralField& u) const;
  SpectralField vector_field(const SpectralField& u) const;
  // h0 + h^I with h0 = <u, Au>/2.
  double hamiltonian(const SpectralField& u) const;
  std::string hash() const;

 private:
  ComplexModel(double beta, std::shared_ptr<const InteractionEvaluator> eval) : beta_(beta), eval_(std::move(eval)) {}
  double beta_;
  std::shared_ptr<const InteractionEvaluator> eval_;
};

// Wave model on (u, v): X = J(A(u,v) + (grad h^I(u), 0)) = (v, -(A1 u + grad h^I(u))).
class WaveModel {
 public:
  static WaveModel linear(double beta);
  explicit WaveModel(InteractionSpec spec);

  double beta() const { return beta_; }
  bool is_linear() const { return !eval_; }
  const InteractionSpec* spec() const { return eval_ ? &eval_->spec() : nullptr; }

  double interaction_energy(const FieldPair& p) const;
  FieldPair interaction_gradient(const FieldPair& p) const;
  SpectralField force(const SpectralField& u) const;  // -(A1 u + grad h^I(u))
  FieldPair vector_field(const FieldPair& p) const;
  double hamiltonian(const FieldPair& p) const;
  std::string hash() const;

 private:
  WaveModel(double beta, std::shared_ptr<const InteractionEvaluator> eval) : beta_(beta), eval_(std::move(eval)) {}
  double beta_;
  std::shared_ptr<const InteractionEvaluator> eval_;
};

template <class State>
struct ModelFor;
template <>
struct ModelFor<SpectralField> {
  using type = ComplexModel;
};
template <>
struct ModelFor<FieldPair> {
  using type = WaveModel;
};

// One-shot conveniences; each builds an evaluator.
double energy(const InteractionSpec& spec, const SpectralField& u);
double energy(const InteractionSpec& spec, const FieldPair& p);
SpectralField gradient(const InteractionSpec& spec, const SpectralField& u);
FieldPair gradient(const InteractionSpec& spec, const FieldPair& p);
SpectralField vector_field(const InteractionSpec& spec, const SpectralField& u);
FieldPair vector_field(const InteractionSpec& spec, const FieldPair& p);
SpectralField linear_vector_field(const SpectralField& u);
FieldPair linear_vector_field(const FieldPair& p);

// Central difference (E(u + h d) - E(u - h d)) / (2h).
template <class State>
double directional_fd(const std::function<double(const State&)>& energy_fn, const State& u, const State& direction,
                      double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  State up = u, down = u;
  up.axpy(step, direction);
  down.axpy(-step, direction);
  return (energy_fn(up) - energy_fn(down)) / (2.0 * step);
}

double directional_fd(const InteractionSpec& spec, const SpectralField& u, const SpectralField& direction, double step);
double directional_fd(const InteractionSpec& spec, const FieldPair& u, const FieldPair& direction, double step);

}  // namespace kmslab
