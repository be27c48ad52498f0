#pragma once

// Data-parallel kernels over rows of the label matrix. Every kernel has a
// scalar reference implementation; vector variants must produce bit-identical
// outputs and counters.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "ia/relation.hpp"

namespace ia::simd {

enum class Isa { scalar, avx2 };

std::string_view name(Isa isa);
/// Widest instruction set compiled in and supported by this CPU.
Isa best_supported();
/// Instruction set used by default. The IA_SIMD environment variable
/// (scalar|avx2|auto) overrides detection; unsupported requests fall back to
/// scalar.
Isa active();
bool supported(Isa isa);

/// Composition of a fixed left operand x with many right operands, in
/// expanded form: image[r] = x . {r}. Composing with a label y is the union of
/// image[r] over r in y.
struct RowOperator {
  std::array<std::uint16_t, kRelCount> image{};
  // Right operands intersecting this mask make x . y = I (skip rule b).
  std::uint16_t full_result_mask = 0;
};

struct RelaxOptions {
  bool skip_full_result = false;  // skip rule b
  bool skip_covered = false;      // skip rule c
};

struct RelaxCounts {
  std::uint64_t composed = 0;
  std::uint64_t skipped_full = 0;
  std::uint64_t skipped_covered = 0;

  RelaxCounts& operator+=(const RelaxCounts& o) {
    composed += o.composed;
    skipped_full += o.skipped_full;
    skipped_covered += o.skipped_covered;
    return *this;
  }
  bool operator==(const RelaxCounts&) const = default;
};

/// For each lane k: targets[k] &= op . operands[k]. changed[k] is set to
/// 0xFFFF when the lane was tightened and 0 otherwise. A lane is skipped
/// (left untouched) when rule b applies, or when rule c finds the partial
/// union already covers the target while operand bits remain. Returns the
/// number of changed lanes.
std::size_t relax_row(Isa isa, const RowOperator& op,
                      std::span<const std::uint16_t> operands,
                      std::span<std::uint16_t> targets,
                      std::span<std::uint16_t> changed, RelaxOptions opts,
                      RelaxCounts& counts);

/// Sum over lanes of the per-relation weights of each lane's members.
std::uint64_t weighted_bit_sum(Isa isa, std::span<const std::uint16_t> labels,
                               const std::array<std::uint16_t, kRelCount>& weights);

namespace detail {
std::size_t relax_row_scalar(const RowOperator&, std::span<const std::uint16_t>,
                             std::span<std::uint16_t>, std::span<std::uint16_t>,
                             RelaxOptions, RelaxCounts&);
std::uint64_t weighted_bit_sum_scalar(std::span<const std::uint16_t>,
                                      const std::array<std::uint16_t, kRelCount>&);
#if defined(IA_HAVE_AVX2)
std::size_t relax_row_avx2(const RowOperator&, std::span<const std::uint16_t>,
                           std::span<std::uint16_t>, std::span<std::uint16_t>,
                           RelaxOptions, RelaxCounts&);
std::uint64_t weighted_bit_sum_avx2(std::span<const std::uint16_t>,
                                    const std::array<std::uint16_t, kRelCount>&);
#endif
}  // namespace detail

}  // namespace ia::simd
