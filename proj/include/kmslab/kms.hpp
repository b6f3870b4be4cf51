#pragma once

#include <functional>
#include <span>
#include <vector>

#include "kmslab/functionals.hpp"
#include "kmslab/report.hpp"
#include "kmslab/sampler.hpp"
#include "kmslab/test_functional.hpp"

namespace kmslab {

// Monte Carlo residuals of the equilibrium identities over a (possibly
// weighted) ensemble. The vector field X(u_i) is evaluated once per sample
// at construction. Every residual is a self-normalized mean of per-sample
// contributions with batch-means standard errors.
template <class State>
class KmsEstimator {
 public:
  using Model = typename ModelFor<State>::type;

  KmsEstimator(const Ensemble<State>& ensemble, Model model, TolerancePolicy policy = {}, Exec exec = Exec::Parallel);

  const Model& model() const { return model_; }
  const std::vector<State>& vector_fields() const { return x_; }

  // <phi1, J phi2> E[e^{i<u,phi2>}] + i beta E[<phi1, X(u)> e^{i<u,phi2>}]
  ResidualReport exponential(const State& phi1, const State& phi2) const;
  // E[{F,G}] - beta E[<grad F, X> G]
  ResidualReport bracket(const TestFunctional<State>& F, const TestFunctional<State>& G) const;
  // E[<phi, X> e^{i<u,phi>}] and the first moment E[<phi, X>].
  std::vector<ResidualReport> stationarity(const State& phi) const;
  // E[<grad F, X> F]
  ResidualReport passivity(const TestFunctional<State>& F) const;
  // (beta/(p+1)) E[<phi2,u>^{p+1} <u,phi2>^p <X,phi1>] - 2i <phi2,phi1> E[|<phi2,u>|^{2p}]
  // Complex-structure models only.
  ResidualReport hierarchy(const State& phi1, const State& phi2, int p) const;

 private:
  ResidualReport finish(std::string identity, const std::vector<cplx>& contributions) const;
  void check_probe(const State& phi) const;

  const Ensemble<State>& ensemble_;
  Model model_;
  TolerancePolicy policy_;
  Exec exec_;
  std::vector<State> x_;
};

template <class State>
ResidualReport kms_residual_exponential(const Ensemble<State>& ensemble, const typename ModelFor<State>::type& model,
                                        const State& phi1, const State& phi2, const TolerancePolicy& policy = {}) {
  return KmsEstimator<State>(ensemble, model, policy).exponential(phi1, phi2);
}

template <class State>
ResidualReport kms_residual_bracket(const Ensemble<State>& ensemble, const typename ModelFor<State>::type& model,
                                    const TestFunctional<State>& F, const TestFunctional<State>& G,
                                    const TolerancePolicy& policy = {}) {
  return KmsEstimator<State>(ensemble, model, policy).bracket(F, G);
}

template <class State>
std::vector<ResidualReport> stationarity_residual(const Ensemble<State>& ensemble,
                                                  const typename ModelFor<State>::type& model, const State& phi,
                                                  const TolerancePolicy& policy = {}) {
  return KmsEstimator<State>(ensemble, model, policy).stationarity(phi);
}

inline ResidualReport hierarchy_residual(const FieldEnsemble& ensemble, const ComplexModel& model,
                                         const SpectralField& phi1, const SpectralField& phi2, int p,
                                         const TolerancePolicy& policy = {}) {
  return KmsEstimator<SpectralField>(ensemble, model, policy).hierarchy(phi1, phi2, p);
}

// E[G <grad F, phi>] - E[F (-<grad G, phi> + beta G <u, A phi>)] on an
// unweighted free ensemble.
template <class State>
ResidualReport ibp_residual(const Ensemble<State>& ensemble, double beta, const TestFunctional<State>& F,
                            const TestFunctional<State>& G, const State& phi, const TolerancePolicy& policy = {},
                            Exec exec = Exec::Parallel);

// log rho and its gradient; the default is the Gibbs density -beta h^I.
struct LogDensity {
  std::function<double(const SpectralField&)> value;
  std::function<SpectralField(const SpectralField&)> gradient;
};

LogDensity gibbs_log_density(const InteractionSpec& spec);

// max_i |grad rho + beta rho grad h^I|_{H^{-s}} / (1 + |grad h^I|_{H^{-s}}) with
// grad rho = rho * grad log rho. Gate: <= threshold.
ResidualReport density_ode_residual(const InteractionSpec& spec, std::span<const SpectralField> samples, double s,
                                    const LogDensity* density = nullptr, double threshold = 1e-8);

// Default Sobolev exponent for H^{-s} norms: s > d/2 - 1.
double default_sobolev_exponent(int dimension);

}  // namespace kmslab
