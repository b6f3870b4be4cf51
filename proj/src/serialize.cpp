#include "kmslab/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kmslab {

nlohmann::json to_json(const SpectralField& u) {
  nlohmann::json c = nlohmann::json::array();
  for (const cplx& z : u.coeffs()) c.push_back({z.real(), z.imag()});
  return {{"d", u.lattice().dimension()}, {"n", u.lattice().cutoff()}, {"coeffs", c}};
}

nlohmann::json to_json(const FieldPair& p) { return {{"u", to_json(p.u)}, {"v", to_json(p.v)}}; }

SpectralField field_from_json(const nlohmann::json& j) {
  auto lattice = build_lattice(j.at("d").get<int>(), j.at("n").get<int>());
  const auto& c = j.at("coeffs");
  if (c.size() != lattice->size()) throw std::invalid_argument("coefficient count does not match lattice");
  SpectralField u(lattice);
  for (std::size_t i = 0; i < c.size(); ++i) u[i] = cplx(c[i].at(0).get<double>(), c[i].at(1).get<double>());
  return u;
}

FieldPair pair_from_json(const nlohmann::json& j) {
  return make_pair(field_from_json(j.at("u")), field_from_json(j.at("v")));
}

namespace {
nlohmann::json state_json(const SpectralField& u) { return to_json(u); }
nlohmann::json state_json(const FieldPair& p) { return to_json(p); }
template <class State>
State state_from(const nlohmann::json& j);
template <>
SpectralField state_from<SpectralField>(const nlohmann::json& j) {
  return field_from_json(j);
}
template <>
FieldPair state_from<FieldPair>(const nlohmann::json& j) {
  return pair_from_json(j);
}
}  // namespace

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

template <class State>
void write_ensemble(const std::string& path, const Ensemble<State>& e) {
  e.validate();
  std::ostringstream out;
  const auto& p = e.provenance;
  nlohmann::json header = {{"type", "header"},  {"seed", p.seed},           {"stream", p.stream},
                           {"count", p.count},  {"beta", p.beta},           {"d", p.dimension},
                           {"n", p.cutoff},     {"kind", p.kind},           {"weighted", e.weighted()}};
  out << header.dump() << "\n";
  for (std::size_t i = 0; i < e.size(); ++i) {
    nlohmann::json line = {{"sample", state_json(e.samples[i])}};
    if (e.weighted()) line["w"] = (*e.weights)[i];
    out << line.dump() << "\n";
  }
  write_atomic(path, out.str());
}

template <class State>
Ensemble<State> read_ensemble(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty ensemble file " + path);
  const auto header = nlohmann::json::parse(line);
  if (header.value("type", "") != "header") throw std::runtime_error("missing ensemble header in " + path);
  Ensemble<State> e;
  e.provenance = Provenance{header.at("seed").get<std::uint64_t>(), header.at("stream").get<std::uint64_t>(),
                            header.at("count").get<std::size_t>(),  header.at("beta").get<double>(),
                            header.at("d").get<int>(),              header.at("n").get<int>(),
                            header.at("kind").get<std::string>()};
  const bool weighted = header.at("weighted").get<bool>();
  std::vector<double> w;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    e.samples.push_back(state_from<State>(j.at("sample")));
    if (weighted) w.push_back(j.at("w").get<double>());
  }
  if (weighted) e.weights = std::move(w);
  e.validate();
  return e;
}

template void write_ensemble(const std::string&, const FieldEnsemble&);
template void write_ensemble(const std::string&, const PairEnsemble&);
template FieldEnsemble read_ensemble<SpectralField>(const std::string&);
template PairEnsemble read_ensemble<FieldPair>(const std::string&);

}  // namespace kmslab
