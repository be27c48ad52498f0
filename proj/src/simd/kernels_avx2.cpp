// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <bit>

#include "ia/simd.hpp"

namespace ia::simd::detail {
namespace {

constexpr std::size_t kLanes = 16;

inline unsigned lane_count(__m256i mask) {
  return static_cast<unsigned>(
             std::popcount(static_cast<unsigned>(_mm256_movemask_epi8(mask)))) /
         2;
}

}  // namespace

std::size_t relax_row_avx2(const RowOperator& op,
                           std::span<const std::uint16_t> operands,
                           std::span<std::uint16_t> targets,
                           std::span<std::uint16_t> changed, RelaxOptions opts,
                           RelaxCounts& counts) {
  const std::size_t n = operands.size();
  const __m256i zero = _mm256_setzero_si256();
  const __m256i ones = _mm256_cmpeq_epi16(zero, zero);
  const __m256i full_mask = _mm256_set1_epi16(static_cast<short>(op.full_result_mask));

  std::array<__m256i, kRelCount> image;
  std::array<__m256i, kRelCount> bit;
  std::array<__m256i, kRelCount> above;
  for (int r = 0; r < kRelCount; ++r) {
    image[r] = _mm256_set1_epi16(static_cast<short>(op.image[r]));
    bit[r] = _mm256_set1_epi16(static_cast<short>(1u << r));
    above[r] = _mm256_set1_epi16(static_cast<short>(kAllBits & ~((2u << r) - 1)));
  }

  std::size_t n_changed = 0;
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&operands[k]));
    const __m256i tgt = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&targets[k]));

    __m256i done = zero;
    if (opts.skip_full_result) {
      const __m256i clear = _mm256_cmpeq_epi16(_mm256_and_si256(y, full_mask), zero);
      done = _mm256_xor_si256(clear, ones);
      counts.skipped_full += lane_count(done);
    }

    __m256i acc = zero;
    for (int r = 0; r < kRelCount; ++r) {
      const __m256i has = _mm256_cmpeq_epi16(_mm256_and_si256(y, bit[r]), bit[r]);
      acc = _mm256_or_si256(acc, _mm256_and_si256(has, image[r]));
      if (opts.skip_covered) {
        const __m256i no_rest = _mm256_cmpeq_epi16(_mm256_and_si256(y, above[r]), zero);
        const __m256i covered = _mm256_cmpeq_epi16(_mm256_andnot_si256(acc, tgt), zero);
        const __m256i newly = _mm256_and_si256(
            has, _mm256_andnot_si256(_mm256_or_si256(done, no_rest), covered));
        counts.skipped_covered += lane_count(newly);
        done = _mm256_or_si256(done, newly);
        if (_mm256_movemask_epi8(done) == -1) break;
      }
    }

    const __m256i active = _mm256_xor_si256(done, ones);
    counts.composed += lane_count(active);
    const __m256i t = _mm256_and_si256(tgt, acc);
    const __m256i diff = _mm256_xor_si256(_mm256_cmpeq_epi16(t, tgt), ones);
    const __m256i ch = _mm256_and_si256(diff, active);
    const __m256i out = _mm256_blendv_epi8(tgt, t, ch);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(&targets[k]), out);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(&changed[k]), ch);
    n_changed += lane_count(ch);
  }
  if (k < n)
    n_changed += relax_row_scalar(op, operands.subspan(k), targets.subspan(k),
                                  changed.subspan(k), opts, counts);
  return n_changed;
}

std::uint64_t weighted_bit_sum_avx2(std::span<const std::uint16_t> labels,
                                    const std::array<std::uint16_t, kRelCount>& w) {
  const std::size_t n = labels.size();
  const __m256i one16 = _mm256_set1_epi16(1);
  __m256i total = _mm256_setzero_si256();  // 8 x u32
  std::array<__m256i, kRelCount> bit;
  std::array<__m256i, kRelCount> weight;
  for (int r = 0; r < kRelCount; ++r) {
    bit[r] = _mm256_set1_epi16(static_cast<short>(1u << r));
    weight[r] = _mm256_set1_epi16(static_cast<short>(w[r]));
  }
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&labels[k]));
    __m256i acc = _mm256_setzero_si256();
    for (int r = 0; r < kRelCount; ++r) {
      const __m256i has = _mm256_cmpeq_epi16(_mm256_and_si256(y, bit[r]), bit[r]);
      acc = _mm256_add_epi16(acc, _mm256_and_si256(has, weight[r]));
    }
    total = _mm256_add_epi32(total, _mm256_madd_epi16(acc, one16));
  }
  alignas(32) std::array<std::uint32_t, 8> parts;
  _mm256_store_si256(reinterpret_cast<__m256i*>(parts.data()), total);
  std::uint64_t sum = 0;
  for (std::uint32_t p : parts) sum += p;
  return sum + weighted_bit_sum_scalar(labels.subspan(k), w);
}

}  // namespace ia::simd::detail
