#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ia/relation.hpp"

namespace ia {

// Split-table partition: bits 0..6 (b..s) and bits 7..12 (si..eq).
inline constexpr int kLowBits = 7;
inline constexpr int kHighBits = kRelCount - kLowBits;
inline constexpr std::uint16_t kLowMask = (1u << kLowBits) - 1;

constexpr std::uint16_t low_part(Label x) { return x.bits() & kLowMask; }
constexpr std::uint16_t high_part(Label x) {
  return static_cast<std::uint16_t>(x.bits() >> kLowBits);
}

/// Composition of basic relations plus the four split tables used for
/// composing whole labels with four lookups.
class CompositionTables {
 public:
  using Pairwise = std::array<std::array<Label, kRelCount>, kRelCount>;

  /// Derives the basic-relation table from endpoint orderings and the split
  /// tables from it.
  static CompositionTables build();

  const Pairwise& pairwise() const { return pairwise_; }
  Label basic(Rel r1, Rel r2) const { return pairwise_[index(r1)][index(r2)]; }

  Label split_ll(std::uint16_t x, std::uint16_t y) const {
    return Label(ll_[(x << kLowBits) | y]);
  }
  Label split_lh(std::uint16_t x, std::uint16_t y) const {
    return Label(lh_[(x << kHighBits) | y]);
  }
  Label split_hl(std::uint16_t x, std::uint16_t y) const {
    return Label(hl_[(x << kLowBits) | y]);
  }
  Label split_hh(std::uint16_t x, std::uint16_t y) const {
    return Label(hh_[(x << kHighBits) | y]);
  }

 private:
  Pairwise pairwise_{};
  std::vector<std::uint16_t> ll_;  // 2^7 x 2^7
  std::vector<std::uint16_t> lh_;  // 2^7 x 2^6
  std::vector<std::uint16_t> hl_;  // 2^6 x 2^7
  std::vector<std::uint16_t> hh_;  // 2^6 x 2^6
};

/// Process-wide tables, built on first use.
const CompositionTables& tables();

/// Union of pairwise compositions over the members of x and y.
Label compose_pairwise(Label x, Label y, const CompositionTables& t = tables());
/// Same result through four split-table lookups.
Label compose_split(Label x, Label y, const CompositionTables& t = tables());

inline Label compose(Label x, Label y) { return compose_split(x, y); }

/// Per-relation weights of the weight ordering heuristic.
inline constexpr std::array<int, kRelCount> kRelationWeights = {
    3, 3, 2, 2, 4, 4, 2, 2, 4, 3, 2, 2, 1};

int weight(Label x);

}  // namespace ia
