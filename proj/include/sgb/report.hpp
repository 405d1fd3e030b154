#pragma once

#include "sgb/field.hpp"
#include "sgb/lattice.hpp"
#include "sgb/params.hpp"
#include "sgb/spectral.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>

namespace sgb {

using json = nlohmann::ordered_json;

json to_json(const LatticeSpec& l);
json to_json(const ModelParams& p);
json to_json(const AssumptionConstants& c);
/// Sparse list of non-zero coefficients: [{"k": [..], "c": comp, "re": .., "im": ..}].
json field_to_json(const Lattice& lattice, const SpectralField& u);

/// FNV-1a over the compact dump; stable across runs and platforms.
std::string params_hash(const json& params);

}  // namespace sgb
