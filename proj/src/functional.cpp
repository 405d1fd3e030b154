#include "sgb/functional.hpp"

#include "sgb/error.hpp"

#include <cmath>
#include <limits>

namespace sgb {

TestFunctional TestFunctional::bounded_tanh(SpectralField direction, double gain) {
  TestFunctional f;
  f.kind_ = Kind::bounded_tanh;
  f.direction_ = std::move(direction);
  f.gain_ = gain;
  return f;
}

TestFunctional TestFunctional::gaussian_bump() {
  TestFunctional f;
  f.kind_ = Kind::gaussian_bump;
  return f;
}

TestFunctional TestFunctional::linear(SpectralField direction) {
  TestFunctional f;
  f.kind_ = Kind::linear;
  f.direction_ = std::move(direction);
  return f;
}

TestFunctional TestFunctional::constant(double c) {
  TestFunctional f;
  f.kind_ = Kind::constant;
  f.level_ = c;
  return f;
}

TestFunctional TestFunctional::tanh_squared(SpectralField direction, double gain, double floor) {
  if (!(floor > 0.0)) throw ParameterError("tanh_squared floor must be positive");
  TestFunctional f;
  f.kind_ = Kind::tanh_squared;
  f.direction_ = std::move(direction);
  f.gain_ = gain;
  f.level_ = floor;
  return f;
}

std::string TestFunctional::name() const {
  switch (kind_) {
    case Kind::bounded_tanh: return "bounded_tanh";
    case Kind::gaussian_bump: return "gaussian_bump";
    case Kind::linear: return "linear";
    case Kind::constant: return "constant";
    case Kind::tanh_squared: return "tanh_squared";
  }
  return "unknown";
}

double TestFunctional::infimum() const {
  switch (kind_) {
    case Kind::bounded_tanh: return -1.0;
    case Kind::gaussian_bump: return 0.0;
    case Kind::linear: return -std::numeric_limits<double>::infinity();
    case Kind::constant: return level_;
    case Kind::tanh_squared: return level_;
  }
  return 0.0;
}

double TestFunctional::operator()(const Spectral& s, const SpectralField& u) const {
  switch (kind_) {
    case Kind::bounded_tanh: return std::tanh(gain_ * inner(s, u, direction_));
    case Kind::gaussian_bump: return std::exp(-norm_sq(s, u, Space::H()));
    case Kind::linear: return inner(s, u, direction_);
    case Kind::constant: return level_;
    case Kind::tanh_squared: {
      const double th = std::tanh(gain_ * inner(s, u, direction_));
      return level_ + th * th;
    }
  }
  return 0.0;
}

}  // namespace sgb
