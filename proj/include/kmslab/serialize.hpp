#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "kmslab/sampler.hpp"

namespace kmslab {

// {"d": .., "n": .., "coeffs": [[re, im], ...]} in lattice order.
nlohmann::json to_json(const SpectralField& u);
nlohmann::json to_json(const FieldPair& p);  // {"u": .., "v": ..}
SpectralField field_from_json(const nlohmann::json& j);
FieldPair pair_from_json(const nlohmann::json& j);

// JSON-lines: a header with provenance, then one sample per line (with its
// weight when the ensemble is weighted). Round trips are bit-exact.
template <class State>
void write_ensemble(const std::string& path, const Ensemble<State>& ensemble);
template <class State>
Ensemble<State> read_ensemble(const std::string& path);

// Writes `content` to path via a temporary file and rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace kmslab
