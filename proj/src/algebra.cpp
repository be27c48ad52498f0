#include "ia/algebra.hpp"

namespace ia {
namespace {

// Six endpoints take at most six distinct values, so ranks 0..5 cover every
// weak ordering of A-, A+, B-, B+, C-, C+.
constexpr int kRanks = 6;

Label union_of_basic(const CompositionTables::Pairwise& p, std::uint16_t x,
                     std::uint16_t y) {
  Label out;
  for (Rel r1 : Label(x))
    for (Rel r2 : Label(y)) out |= p[index(r1)][index(r2)];
  return out;
}

}  // namespace

CompositionTables CompositionTables::build() {
  CompositionTables t;
  for (int a0 = 0; a0 < kRanks; ++a0)
    for (int a1 = a0 + 1; a1 < kRanks; ++a1)
      for (int b0 = 0; b0 < kRanks; ++b0)
        for (int b1 = b0 + 1; b1 < kRanks; ++b1) {
          const Rel ab = relation_between(a0, a1, b0, b1);
          for (int c0 = 0; c0 < kRanks; ++c0)
            for (int c1 = c0 + 1; c1 < kRanks; ++c1) {
              const Rel bc = relation_between(b0, b1, c0, c1);
              const Rel ac = relation_between(a0, a1, c0, c1);
              t.pairwise_[index(ab)][index(bc)] |= Label::of(ac);
            }
        }

  constexpr std::size_t lo = 1u << kLowBits;
  constexpr std::size_t hi = 1u << kHighBits;
  t.ll_.resize(lo * lo);
  t.lh_.resize(lo * hi);
  t.hl_.resize(hi * lo);
  t.hh_.resize(hi * hi);
  for (std::uint16_t x = 0; x < lo; ++x)
    for (std::uint16_t y = 0; y < lo; ++y)
      t.ll_[(x << kLowBits) | y] = union_of_basic(t.pairwise_, x, y).bits();
  for (std::uint16_t x = 0; x < lo; ++x)
    for (std::uint16_t y = 0; y < hi; ++y)
      t.lh_[(x << kHighBits) | y] =
          union_of_basic(t.pairwise_, x, static_cast<std::uint16_t>(y << kLowBits)).bits();
  for (std::uint16_t x = 0; x < hi; ++x)
    for (std::uint16_t y = 0; y < lo; ++y)
      t.hl_[(x << kLowBits) | y] =
          union_of_basic(t.pairwise_, static_cast<std::uint16_t>(x << kLowBits), y).bits();
  for (std::uint16_t x = 0; x < hi; ++x)
    for (std::uint16_t y = 0; y < hi; ++y)
      t.hh_[(x << kHighBits) | y] =
          union_of_basic(t.pairwise_, static_cast<std::uint16_t>(x << kLowBits),
                         static_cast<std::uint16_t>(y << kLowBits))
              .bits();
  return t;
}

const CompositionTables& tables() {
  static const CompositionTables instance = CompositionTables::build();
  return instance;
}

Label compose_pairwise(Label x, Label y, const CompositionTables& t) {
  Label out;
  for (Rel r1 : x)
    for (Rel r2 : y) out |= t.basic(r1, r2);
  return out;
}

Label compose_split(Label x, Label y, const CompositionTables& t) {
  const std::uint16_t xl = low_part(x), xh = high_part(x);
  const std::uint16_t yl = low_part(y), yh = high_part(y);
  return t.split_ll(xl, yl) | t.split_lh(xl, yh) | t.split_hl(xh, yl) |
         t.split_hh(xh, yh);
}

int weight(Label x) {
  int w = 0;
  for (Rel r : x) w += kRelationWeights[index(r)];
  return w;
}

}  // namespace ia
