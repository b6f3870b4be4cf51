#pragma once

#include <functional>
#include <vector>

#include "kmslab/functionals.hpp"
#include "kmslab/report.hpp"
#include "kmslab/sampler.hpp"

namespace kmslab {

struct FlowConfig {
  double dt = 1e-3;
  double horizon = 1.0;

  void validate() const;
  long long steps() const;
};

// Strang splitting for du/dt = -i(Au + grad h^I(u)): exact linear half steps
// around a nonlinear step. The nonlinear step is the implicit midpoint rule
// for du/dt = -i grad h^I(u) (solved by fixed-point iteration), which keeps
// |u|^2 exactly invariant on the truncated lattice and is time-symmetric.
class StrangIntegrator {
 public:
  explicit StrangIntegrator(ComplexModel model);

  const ComplexModel& model() const { return model_; }
  // dt may be negative (backward flow).
  SpectralField step(const SpectralField& u, double dt) const;
  SpectralField advance(SpectralField u, double dt, long long steps) const;

 private:
  SpectralField linear(const SpectralField& u, double tau) const;
  SpectralField nonlinear(const SpectralField& u, double tau) const;

  ComplexModel model_;
};

// Stormer-Verlet for (u, v)' = (v, -(A1 u + grad h^I(u))).
class VerletIntegrator {
 public:
  explicit VerletIntegrator(WaveModel model) : model_(std::move(model)) {}

  const WaveModel& model() const { return model_; }
  FieldPair step(const FieldPair& p, double dt) const;
  FieldPair advance(FieldPair p, double dt, long long steps) const;

 private:
  WaveModel model_;
};

// States at t = 0, dt, 2dt, ..., T.
std::vector<SpectralField> evolve(const SpectralField& u0, const ComplexModel& model, const FlowConfig& config);
std::vector<FieldPair> evolve(const FieldPair& p0, const WaveModel& model, const FlowConfig& config);

// Paired drift E_w[F(u_t)] - E_w[F(u_0)] for each requested time (each a
// multiple of dt), with batch-means stderr.
template <class State>
std::vector<ResidualReport> liouville_drift(const Ensemble<State>& ensemble,
                                            const typename ModelFor<State>::type& model,
                                            const std::function<double(const State&)>& observable,
                                            const std::vector<double>& times, double dt,
                                            const TolerancePolicy& policy = {}, Exec exec = Exec::Parallel);

}  // namespace kmslab
