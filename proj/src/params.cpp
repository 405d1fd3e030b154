#include "sgb/params.hpp"

#include "sgb/error.hpp"

#include <cmath>
#include <sstream>

namespace sgb {

namespace {

[[noreturn]] void reject(const std::string& constraint, const ModelParams& p, int d) {
  std::ostringstream os;
  os << constraint << " (d=" << d << ", lambda0=" << p.lambda0 << ", delta=" << p.delta
     << ", sigma=" << p.sigma << ", theta=" << p.theta << ")";
  throw ParameterError(os.str());
}

}  // namespace

ModelParams validate_params(const ModelParams& p, const LatticeSpec& lattice) {
  const int d = lattice.dimension;
  if (d < 1 || d > kMaxDimension) reject("dimension must be 1 or 2", p, d);
  if (lattice.cutoff < 1) reject("cutoff must be at least 1", p, d);
  for (double v : {p.lambda0, p.delta, p.sigma, p.theta}) {
    if (!std::isfinite(v)) reject("parameters must be finite", p, d);
  }
  if (!(p.lambda0 > 0.0)) reject("lambda0 must be positive", p, d);
  if (!(p.delta > 0.5 * d)) reject("delta must exceed d/2", p, d);
  if (!(p.sigma > 0.25 * d)) reject("sigma must exceed d/4", p, d);
  if (!(p.sigma <= 0.5 * p.delta)) reject("sigma must not exceed delta/2", p, d);
  if (!(p.theta <= 1.0)) reject("theta must not exceed 1", p, d);
  if (!(p.theta >= (2.0 * p.sigma + 1.0) / (p.delta + 1.0))) {
    reject("theta must be at least (2 sigma + 1)/(delta + 1)", p, d);
  }
  return p;
}

}  // namespace sgb
