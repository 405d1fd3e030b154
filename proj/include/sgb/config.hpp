#pragma once

#include "sgb/functional.hpp"
#include "sgb/integrator.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sgb {

/// Flat key -> value map; the section a key came from is not significant.
using KeyValues = std::map<std::string, std::string>;

/// Every recognised key, in documentation order.
const std::vector<std::string>& config_keys();
/// Keys a config file must provide (the rest fall back to the desk defaults).
const std::vector<std::string>& required_keys();
/// Desk-scale defaults used when no config file is given.
KeyValues default_values();

/// Reads an INI file ([section] key = value). Throws ConfigError on syntax
/// errors, unknown keys and keys repeated across sections.
KeyValues read_config_file(const std::string& path);

struct RunConfig {
  LatticeSpec lattice;
  ModelParams params;
  IntegratorConfig integrator;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string functional;
  std::string x0;
  std::string h;
  double alpha = 2.0;
  double epsilon_fd = 1e-3;
  double epsilon_girsanov = 0.05;
  double delta_entropy = 0.0;  // 0: use the local threshold delta_0
  std::string output_dir;

  KeyValues values;  // the resolved key set
};

/// Layers overrides over the file values (or over the defaults when there is
/// no file) and converts. With a file, every required key must come from the
/// file or an override: ConfigError "missing parameter: <key>" otherwise.
RunConfig resolve_config(const std::optional<KeyValues>& file, const KeyValues& overrides);

/// Mode list "k:re:im; k:re:im", k = "2" in d = 1 or "1,-1" in d = 2. The
/// complex amplitude multiplies the polarization of the mode; a negative
/// representative stores the conjugate.
SpectralField parse_modes(const Lattice& lattice, const std::string& text);

/// "name key=value ...": bounded_tanh gain= mode=, gaussian_bump,
/// linear mode=, constant c=, tanh_squared gain= floor= mode=.
TestFunctional parse_functional(const Lattice& lattice, const std::string& text);

}  // namespace sgb
