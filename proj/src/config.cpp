#include "sgb/config.hpp"

#include "sgb/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <sstream>

namespace sgb {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError("parameter " + key + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError("parameter " + key + ": expected a nonnegative integer, got '" + text + "'");
  }
  return v;
}

bool to_switch(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "on" || t == "true" || t == "1") return true;
  if (t == "off" || t == "false" || t == "0") return false;
  throw ConfigError("parameter " + key + ": expected on/off, got '" + text + "'");
}

Mode parse_mode(const Lattice& lattice, const std::string& text) {
  const auto parts = split(text, ',');
  if (static_cast<int>(parts.size()) != lattice.dimension()) {
    throw ConfigError("mode '" + text + "' needs " + std::to_string(lattice.dimension()) + " coordinate(s)");
  }
  Mode k{0, 0};
  for (std::size_t c = 0; c < parts.size(); ++c) {
    const double v = to_double("mode", parts[c]);
    if (v != static_cast<int>(v)) throw ConfigError("mode '" + text + "' must have integer coordinates");
    k[c] = static_cast<int>(v);
  }
  return k;
}

SpectralField unit_mode(const Lattice& lattice, const std::string& text) {
  return parse_modes(lattice, text + ":1:0");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "dimension", "cutoff", "lambda0",    "delta",      "sigma",           "theta",         "t_final",
      "steps",     "samples", "seed",      "scheme",     "nonlinearity",    "functional",    "x0",
      "h",         "alpha",   "epsilon_fd", "epsilon_girsanov", "delta_entropy", "output_dir"};
  return keys;
}

const std::vector<std::string>& required_keys() {
  static const std::vector<std::string> keys = {"dimension", "cutoff", "lambda0", "delta",   "sigma",
                                                "theta",     "t_final", "steps",  "samples", "seed"};
  return keys;
}

KeyValues default_values() {
  return {{"dimension", "1"},
          {"cutoff", "4"},
          {"lambda0", "1"},
          {"delta", "1"},
          {"sigma", "0.375"},
          {"theta", "1"},
          {"t_final", "0.5"},
          {"steps", "200"},
          {"samples", "10000"},
          {"seed", "1"},
          {"scheme", "exponential_euler"},
          {"nonlinearity", "on"},
          {"functional", "bounded_tanh gain=2 mode=1"},
          {"x0", "1:0.5:0; 2:0:0.25"},
          {"h", "1:1:0"},
          {"alpha", "2"},
          {"epsilon_fd", "0.001"},
          {"epsilon_girsanov", "0.05"},
          {"delta_entropy", "0"},
          {"output_dir", "results"}};
}

KeyValues read_config_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("cannot read config " + path + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  KeyValues out;
  const auto& known = config_keys();
  auto add = [&](const std::string& key, const std::string& value) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown parameter '" + key + "' in " + path);
    }
    if (!out.emplace(key, trim(value)).second) throw ConfigError("parameter " + key + " given twice in " + path);
  };
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      add(name, node.data());
    } else {
      for (const auto& [key, leaf] : node) add(key, leaf.data());
    }
  }
  return out;
}

RunConfig resolve_config(const std::optional<KeyValues>& file, const KeyValues& overrides) {
  const auto& known = config_keys();
  for (const auto& [key, value] : overrides) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown parameter '" + key + "'");
  }
  KeyValues v = file ? *file : default_values();
  for (const auto& [key, value] : overrides) v[key] = value;
  if (file) {
    for (const auto& key : required_keys()) {
      if (!v.count(key)) throw ConfigError("missing parameter: " + key);
    }
    for (const auto& [key, value] : default_values()) v.emplace(key, value);
  }

  RunConfig c;
  c.lattice.dimension = static_cast<int>(to_uint("dimension", v.at("dimension")));
  c.lattice.cutoff = static_cast<int>(to_uint("cutoff", v.at("cutoff")));
  c.params.lambda0 = to_double("lambda0", v.at("lambda0"));
  c.params.delta = to_double("delta", v.at("delta"));
  c.params.sigma = to_double("sigma", v.at("sigma"));
  c.params.theta = to_double("theta", v.at("theta"));
  c.integrator.t_final = to_double("t_final", v.at("t_final"));
  c.integrator.steps = to_uint("steps", v.at("steps"));
  try {
    c.integrator.scheme = parse_scheme(trim(v.at("scheme")));
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("parameter scheme: ") + e.what());
  }
  c.integrator.nonlinearity = to_switch("nonlinearity", v.at("nonlinearity"));
  c.samples = to_uint("samples", v.at("samples"));
  c.seed = to_uint("seed", v.at("seed"));
  c.functional = v.at("functional");
  c.x0 = v.at("x0");
  c.h = v.at("h");
  c.alpha = to_double("alpha", v.at("alpha"));
  c.epsilon_fd = to_double("epsilon_fd", v.at("epsilon_fd"));
  c.epsilon_girsanov = to_double("epsilon_girsanov", v.at("epsilon_girsanov"));
  c.delta_entropy = to_double("delta_entropy", v.at("delta_entropy"));
  c.output_dir = trim(v.at("output_dir"));
  if (c.samples < 2) throw ConfigError("parameter samples: need at least 2");
  c.values = std::move(v);
  return c;
}

SpectralField parse_modes(const Lattice& lattice, const std::string& text) {
  SpectralField u(lattice);
  for (const auto& entry : split(text, ';')) {
    if (entry.empty()) continue;
    const auto parts = split(entry, ':');
    if (parts.size() != 3) throw ConfigError("mode entry '" + entry + "' must read k:re:im");
    const Mode k = parse_mode(lattice, parts[0]);
    const auto slot = lattice.locate(k);
    if (!slot) throw ConfigError("mode '" + parts[0] + "' is zero or outside the cutoff");
    cplx amp(to_double("mode amplitude", parts[1]), to_double("mode amplitude", parts[2]));
    if (slot->conjugate) amp = std::conj(amp);
    const auto pol = polarization(lattice, slot->half_index);
    for (int c = 0; c < lattice.dimension(); ++c) u.at(slot->half_index, c) += amp * pol[c];
  }
  return u;
}

TestFunctional parse_functional(const Lattice& lattice, const std::string& text) {
  std::istringstream in(text);
  std::string name;
  in >> name;
  std::map<std::string, std::string> args;
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ConfigError("functional argument '" + token + "' must read key=value");
    args[token.substr(0, eq)] = token.substr(eq + 1);
  }
  auto get = [&](const std::string& key, const std::string& fallback) {
    const auto it = args.find(key);
    return it == args.end() ? fallback : it->second;
  };
  const std::string first_mode = lattice.dimension() == 1 ? "1" : "1,0";
  if (name == "bounded_tanh") {
    return TestFunctional::bounded_tanh(unit_mode(lattice, get("mode", first_mode)),
                                        to_double("gain", get("gain", "1")));
  }
  if (name == "gaussian_bump") return TestFunctional::gaussian_bump();
  if (name == "linear") return TestFunctional::linear(unit_mode(lattice, get("mode", first_mode)));
  if (name == "constant") return TestFunctional::constant(to_double("c", get("c", "1")));
  if (name == "tanh_squared") {
    return TestFunctional::tanh_squared(unit_mode(lattice, get("mode", first_mode)),
                                        to_double("gain", get("gain", "1")), to_double("floor", get("floor", "0.1")));
  }
  throw ConfigError("unknown functional '" + name + "'");
}

}  // namespace sgb
