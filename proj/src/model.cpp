#include "sgb/model.hpp"

namespace sgb {

ConvolutionPlan::ConvolutionPlan(const Lattice& lattice) {
  const int d = lattice.dimension();
  const std::size_t fe = lattice.full_extent();
  full_source_.assign(fe, -1);
  full_conj_.assign(fe, 0);
  for (std::size_t f = 0; f < fe; ++f) {
    if (const auto slot = lattice.locate_full(f)) {
      full_source_[f] = static_cast<std::int32_t>(slot->half_index);
      full_conj_[f] = slot->conjugate ? 1 : 0;
    }
  }

  std::vector<Mode> ms;
  offsets_.push_back(0);
  for (std::size_t l = 0; l < lattice.half_size(); ++l) {
    const Mode& lk = lattice.mode(l);
    for (std::size_t f = 0; f < fe; ++f) {
      if (f == lattice.center()) continue;
      const Mode m = lattice.mode_of_full(f);
      Mode a{};
      bool zero = true;
      for (int c = 0; c < d; ++c) {
        a[c] = lk[c] - m[c];
        zero = zero && a[c] == 0;
      }
      if (zero || !lattice.contains(a)) continue;
      a_index_.push_back(static_cast<std::int32_t>(lattice.full_index(a)));
      b_index_.push_back(static_cast<std::int32_t>(f));
      ms.push_back(m);
    }
    offsets_.push_back(static_cast<std::uint32_t>(a_index_.size()));
  }
  const std::size_t pairs = a_index_.size();
  m_coord_.assign(pairs * d, 0.0);
  for (int c = 0; c < d; ++c) {
    for (std::size_t p = 0; p < pairs; ++p) m_coord_[c * pairs + p] = ms[p][c];
  }
}

Model::Model(const LatticeSpec& lattice, const ModelParams& params)
    : Spectral(lattice, params), constants_(compute_constants(this->params(), lattice)), plan_(this->lattice()) {}

}  // namespace sgb
