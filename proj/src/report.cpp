#include "kmslab/report.hpp"

#include <cmath>
#include <limits>

namespace kmslab {

std::string to_string(Gate g) {
  switch (g) {
    case Gate::Stderr: return "stderr";
    case Gate::Absolute: return "absolute";
    case Gate::Exceeds: return "exceeds";
    case Gate::Above: return "above";
  }
  return "unknown";
}

double ResidualReport::sigma_excess() const {
  auto ratio = [](double x, double se) {
    if (se > 0.0) return std::abs(x) / se;
    return x == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  };
  return std::max(ratio(estimate.real(), stderr_re), ratio(estimate.imag(), stderr_im));
}

void decide(ResidualReport& r) {
  const bool finite = std::isfinite(r.estimate.real()) && std::isfinite(r.estimate.imag());
  switch (r.gate) {
    case Gate::Stderr:
      r.pass = finite && std::abs(r.estimate.real()) <= r.multiplier * r.stderr_re &&
               std::abs(r.estimate.imag()) <= r.multiplier * r.stderr_im;
      break;
    case Gate::Absolute: r.pass = finite && std::abs(r.estimate) <= r.threshold; break;
    case Gate::Exceeds: r.pass = finite && r.sigma_excess() > r.multiplier; break;
    case Gate::Above: r.pass = finite && std::abs(r.estimate) > r.threshold; break;
  }
}

ResidualReport make_stderr_report(std::string identity, const ComplexEstimate& e, std::size_t samples,
                                  const TolerancePolicy& policy) {
  ResidualReport r;
  r.identity = std::move(identity);
  r.estimate = e.value;
  r.stderr_re = e.stderr_re;
  r.stderr_im = e.stderr_im;
  r.samples = samples;
  r.gate = Gate::Stderr;
  r.multiplier = policy.multiplier;
  decide(r);
  return r;
}

ResidualReport make_absolute_report(std::string identity, std::complex<double> value, double threshold,
                                    std::size_t samples) {
  ResidualReport r;
  r.identity = std::move(identity);
  r.estimate = value;
  r.samples = samples;
  r.gate = Gate::Absolute;
  r.threshold = threshold;
  decide(r);
  return r;
}

namespace {
nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}
}  // namespace

nlohmann::json to_json(const ResidualReport& r) {
  nlohmann::json j;
  j["type"] = "residual";
  j["identity"] = r.identity;
  j["estimate"] = {number(r.estimate.real()), number(r.estimate.imag())};
  j["stderr"] = {number(r.stderr_re), number(r.stderr_im)};
  j["samples"] = r.samples;
  j["gate"] = to_string(r.gate);
  j["multiplier"] = r.multiplier;
  j["threshold"] = r.threshold;
  j["verdict"] = r.pass ? "pass" : "fail";
  j["spec_hash"] = r.spec_hash;
  j["seed"] = r.seed;
  nlohmann::json d = nlohmann::json::object();
  for (const auto& [k, v] : r.details) d[k] = number(v);
  j["details"] = d;
  return j;
}

nlohmann::json to_json(const BoundCheck& b) {
  nlohmann::json j;
  j["type"] = "bound";
  j["lemma"] = b.lemma;
  nlohmann::json p = nlohmann::json::object();
  for (const auto& [k, v] : b.parameters) p[k] = number(v);
  j["parameters"] = p;
  j["probe_range"] = b.probe_range;
  j["worst_ratio"] = number(b.worst_ratio);
  j["verdict"] = b.bounded ? "bounded" : "violated";
  j["note"] = b.note;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : b.rows) {
    nlohmann::json row = {{"n", number(r.n)}, {"value", number(r.value)}, {"ratio", number(r.ratio)},
                          {"stderr", number(r.stderr_)}};
    if (!b.aux_label.empty()) {
      row[b.aux_label] = number(r.aux);
      row[b.aux_label + "_stderr"] = number(r.aux_stderr);
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

}  // namespace kmslab
