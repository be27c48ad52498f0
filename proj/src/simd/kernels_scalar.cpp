#include <bit>

#include "ia/simd.hpp"

namespace ia::simd::detail {

std::size_t relax_row_scalar(const RowOperator& op,
                             std::span<const std::uint16_t> operands,
                             std::span<std::uint16_t> targets,
                             std::span<std::uint16_t> changed, RelaxOptions opts,
                             RelaxCounts& counts) {
  std::size_t n_changed = 0;
  for (std::size_t k = 0; k < operands.size(); ++k) {
    changed[k] = 0;
    const std::uint16_t y = operands[k];
    const std::uint16_t target = targets[k];
    if (opts.skip_full_result && (y & op.full_result_mask) != 0) {
      ++counts.skipped_full;
      continue;
    }
    std::uint16_t acc = 0;
    std::uint16_t rest = y;
    bool covered_early = false;
    while (rest != 0) {
      acc |= op.image[std::countr_zero(rest)];
      rest &= static_cast<std::uint16_t>(rest - 1);
      if (opts.skip_covered && rest != 0 && (target & ~acc) == 0) {
        covered_early = true;
        break;
      }
    }
    if (covered_early) {
      ++counts.skipped_covered;
      continue;
    }
    ++counts.composed;
    const auto t = static_cast<std::uint16_t>(target & acc);
    if (t != target) {
      targets[k] = t;
      changed[k] = 0xFFFF;
      ++n_changed;
    }
  }
  return n_changed;
}

std::uint64_t weighted_bit_sum_scalar(std::span<const std::uint16_t> labels,
                                      const std::array<std::uint16_t, kRelCount>& w) {
  std::uint64_t sum = 0;
  for (std::uint16_t x : labels)
    for (std::uint16_t rest = x; rest != 0; rest &= static_cast<std::uint16_t>(rest - 1))
      sum += w[std::countr_zero(rest)];
  return sum;
}

}  // namespace ia::simd::detail
