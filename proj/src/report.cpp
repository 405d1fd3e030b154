#include "sgb/report.hpp"

#include <cstdio>

namespace sgb {

json to_json(const LatticeSpec& l) { return json{{"dimension", l.dimension}, {"cutoff", l.cutoff}}; }

json to_json(const ModelParams& p) {
  return json{{"lambda0", p.lambda0}, {"delta", p.delta}, {"sigma", p.sigma}, {"theta", p.theta}};
}

namespace {

json to_json(const LatticeSum& s) {
  return json{{"partial", s.partial}, {"tail_bound", s.tail_bound}, {"radius", s.radius}};
}

}  // namespace

json to_json(const AssumptionConstants& c) {
  return json{{"K1", c.k1},
              {"K2", c.k2},
              {"K2_proof", c.k2_proof},
              {"C_A2", c.c_a2},
              {"q_op_norm", c.q_op_norm},
              {"q_hs_sq", c.q_hs_sq},
              {"q_hs_sq_infinite", c.q_hs_sq_infinite},
              {"k2_sum", to_json(c.k2_sum)},
              {"c_a2_sum", to_json(c.c_a2_sum)},
              {"hs_sum", to_json(c.hs_sum)}};
}

json field_to_json(const Lattice& lattice, const SpectralField& u) {
  json out = json::array();
  for (std::size_t m = 0; m < lattice.half_size(); ++m) {
    for (int c = 0; c < lattice.dimension(); ++c) {
      const cplx v = u.at(m, c);
      if (v == cplx{}) continue;
      json k = json::array();
      for (int i = 0; i < lattice.dimension(); ++i) k.push_back(lattice.mode(m)[i]);
      out.push_back(json{{"k", k}, {"c", c}, {"re", v.real()}, {"im", v.imag()}});
    }
  }
  return out;
}

std::string params_hash(const json& params) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : params.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sgb
