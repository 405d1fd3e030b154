#pragma once

#include "sgb/spectral.hpp"

#include <cstdint>
#include <vector>

namespace sgb {

/// Index tables for the Galerkin convolution on one lattice.
class ConvolutionPlan {
 public:
  explicit ConvolutionPlan(const Lattice& lattice);

  std::size_t pair_count() const { return a_index_.size(); }
  /// Full index -> stored coefficient (-1 for k = 0) and conjugation flag.
  std::span<const std::int32_t> full_source() const { return full_source_; }
  std::span<const std::uint8_t> full_conjugate() const { return full_conj_; }

  const std::vector<std::uint32_t>& offsets() const { return offsets_; }
  const std::vector<std::int32_t>& a_index() const { return a_index_; }
  const std::vector<std::int32_t>& b_index() const { return b_index_; }
  const std::vector<double>& m_coord() const { return m_coord_; }

 private:
  std::vector<std::int32_t> full_source_;
  std::vector<std::uint8_t> full_conj_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::int32_t> a_index_;
  std::vector<std::int32_t> b_index_;
  std::vector<double> m_coord_;
};

/// A validated model: lattice, operators, constants and convolution tables.
/// Immutable; safe to share between threads.
class Model : public Spectral {
 public:
  Model(const LatticeSpec& lattice, const ModelParams& params);

  const AssumptionConstants& constants() const { return constants_; }
  const ConvolutionPlan& plan() const { return plan_; }

 private:
  AssumptionConstants constants_;
  ConvolutionPlan plan_;
};

}  // namespace sgb
