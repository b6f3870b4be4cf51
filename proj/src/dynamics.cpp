#include "kmslab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kmslab/errors.hpp"

namespace kmslab {

void FlowConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (dt > horizon) throw std::invalid_argument("time step exceeds horizon");
}

long long FlowConfig::steps() const {
  const double r = horizon / dt;
  const long long n = std::llround(r);
  if (std::abs(r - static_cast<double>(n)) > 1e-8 * std::max(1.0, r)) {
    throw std::invalid_argument("horizon must be a multiple of the time step");
  }
  return n;
}

namespace {
void reject_focusing(const InteractionSpec* spec) {
  if (spec && spec->focusing) throw std::invalid_argument("focusing dynamics are not supported");
}

long long steps_to(double t, double dt) {
  const double r = t / dt;
  const long long n = std::llround(r);
  if (t < 0.0 || std::abs(r - static_cast<double>(n)) > 1e-8 * std::max(1.0, r)) {
    throw std::invalid_argument("requested time is not a nonnegative multiple of dt");
  }
  return n;
}
}  // namespace

StrangIntegrator::StrangIntegrator(ComplexModel model) : model_(std::move(model)) { reject_focusing(model_.spec()); }

SpectralField StrangIntegrator::linear(const SpectralField& u, double tau) const {
  SpectralField out = u;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double phase = -u.lattice().eigenvalue(i) * tau;
    out[i] *= cplx(std::cos(phase), std::sin(phase));
  }
  return out;
}

SpectralField StrangIntegrator::nonlinear(const SpectralField& u, double tau) const {
  const InteractionEvaluator* ev = model_.evaluator();
  if (!ev) return u;
  // Predictor: pointwise phase rotation by the frozen multiplier.
  auto values = ev->grid_values(u);
  const auto g = ev->multiplier(values);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] *= std::polar(1.0, -g[i] * tau);
  SpectralField w = ev->project(values, u.lattice_ptr());

  const double tol = 1e-14 * (1.0 + max_abs(u));
  for (int it = 0; it < 200; ++it) {
    SpectralField mid = u;
    mid += w;
    mid *= 0.5;
    SpectralField next = u;
    next.axpy(cplx(0.0, -tau), ev->gradient(mid));
    SpectralField diff = next;
    diff -= w;
    w = std::move(next);
    if (max_abs(diff) <= tol) return w;
  }
  throw ConvergenceError("implicit midpoint iteration did not converge; reduce the time step");
}

SpectralField StrangIntegrator::step(const SpectralField& u, double dt) const {
  return linear(nonlinear(linear(u, 0.5 * dt), dt), 0.5 * dt);
}

SpectralField StrangIntegrator::advance(SpectralField u, double dt, long long steps) const {
  for (long long s = 0; s < steps; ++s) u = step(u, dt);
  return u;
}

FieldPair VerletIntegrator::step(const FieldPair& p, double dt) const {
  FieldPair out = p;
  out.v.axpy(0.5 * dt, model_.force(out.u));
  out.u.axpy(dt, out.v);
  out.v.axpy(0.5 * dt, model_.force(out.u));
  return out;
}

FieldPair VerletIntegrator::advance(FieldPair p, double dt, long long steps) const {
  for (long long s = 0; s < steps; ++s) p = step(p, dt);
  return p;
}

std::vector<SpectralField> evolve(const SpectralField& u0, const ComplexModel& model, const FlowConfig& config) {
  config.validate();
  StrangIntegrator integ(model);
  const long long n = config.steps();
  std::vector<SpectralField> traj;
  traj.reserve(n + 1);
  traj.push_back(u0);
  for (long long s = 0; s < n; ++s) traj.push_back(integ.step(traj.back(), config.dt));
  return traj;
}

std::vector<FieldPair> evolve(const FieldPair& p0, const WaveModel& model, const FlowConfig& config) {
  config.validate();
  VerletIntegrator integ(model);
  const long long n = config.steps();
  std::vector<FieldPair> traj;
  traj.reserve(n + 1);
  traj.push_back(p0);
  for (long long s = 0; s < n; ++s) traj.push_back(integ.step(traj.back(), config.dt));
  return traj;
}

namespace {
StrangIntegrator integrator_for(const ComplexModel& m) { return StrangIntegrator(m); }
VerletIntegrator integrator_for(const WaveModel& m) { return VerletIntegrator(m); }
}  // namespace

template <class State>
std::vector<ResidualReport> liouville_drift(const Ensemble<State>& ensemble,
                                            const typename ModelFor<State>::type& model,
                                            const std::function<double(const State&)>& observable,
                                            const std::vector<double>& times, double dt,
                                            const TolerancePolicy& policy, Exec exec) {
  ensemble.validate();
  if (times.empty()) throw std::invalid_argument("liouville_drift needs at least one time");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  std::vector<long long> targets;
  for (double t : times) targets.push_back(steps_to(t, dt));
  std::vector<std::size_t> order(times.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return targets[a] < targets[b]; });

  const auto integ = integrator_for(model);
  const std::size_t n = ensemble.size();
  std::vector<std::vector<cplx>> drift(times.size(), std::vector<cplx>(n));
  for_each_index(n, exec, [&](std::size_t i) {
    State u = ensemble.samples[i];
    const double f0 = observable(u);
    long long at = 0;
    for (std::size_t k : order) {
      u = integ.advance(std::move(u), dt, targets[k] - at);
      at = targets[k];
      drift[k][i] = observable(u) - f0;
    }
  });

  std::vector<ResidualReport> out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    auto est = batch_mean(drift[k], ensemble.weight_span(), policy.batches);
    auto r = make_stderr_report("liouville-drift", est, n, policy);
    r.spec_hash = model.hash();
    r.seed = ensemble.provenance.seed;
    r.details["time"] = times[k];
    r.details["dt"] = dt;
    out.push_back(std::move(r));
  }
  return out;
}

template std::vector<ResidualReport> liouville_drift(const Ensemble<SpectralField>&, const ComplexModel&,
                                                     const std::function<double(const SpectralField&)>&,
                                                     const std::vector<double>&, double, const TolerancePolicy&, Exec);
template std::vector<ResidualReport> liouville_drift(const Ensemble<FieldPair>&, const WaveModel&,
                                                     const std::function<double(const FieldPair&)>&,
                                                     const std::vector<double>&, double, const TolerancePolicy&, Exec);

}  // namespace kmslab
