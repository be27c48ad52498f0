#include <cstdlib>
#include <numeric>
#include <string>

#include "ia/simd.hpp"

namespace ia::simd {

std::string_view name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(IA_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa best_supported() { return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active() {
  static const Isa chosen = [] {
    const char* env = std::getenv("IA_SIMD");
    const std::string req = env ? env : "auto";
    if (req == "scalar") return Isa::scalar;
    if (req == "avx2") return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
    return best_supported();
  }();
  return chosen;
}

std::size_t relax_row(Isa isa, const RowOperator& op,
                      std::span<const std::uint16_t> operands,
                      std::span<std::uint16_t> targets,
                      std::span<std::uint16_t> changed, RelaxOptions opts,
                      RelaxCounts& counts) {
#if defined(IA_HAVE_AVX2)
  if (isa == Isa::avx2 && supported(Isa::avx2))
    return detail::relax_row_avx2(op, operands, targets, changed, opts, counts);
#endif
  (void)isa;
  return detail::relax_row_scalar(op, operands, targets, changed, opts, counts);
}

std::uint64_t weighted_bit_sum(Isa isa, std::span<const std::uint16_t> labels,
                               const std::array<std::uint16_t, kRelCount>& weights) {
#if defined(IA_HAVE_AVX2)
  // 16-bit lane accumulators are summed pairwise as signed values.
  const unsigned lane_max = std::accumulate(weights.begin(), weights.end(), 0u);
  if (isa == Isa::avx2 && lane_max <= 0x3FFF && supported(Isa::avx2))
    return detail::weighted_bit_sum_avx2(labels, weights);
#endif
  (void)isa;
  return detail::weighted_bit_sum_scalar(labels, weights);
}

}  // namespace ia::simd
