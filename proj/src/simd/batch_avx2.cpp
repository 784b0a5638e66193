// AVX2 + FMA kernels. Four lanes of the same operation sequence as the scalar
// reference, with the conversions AVX2 lacks (u64/i64 <-> f64) built from
// exact magic-constant tricks so that every lane rounds exactly once where the
// scalar code does.

#include "kernels.hpp"

#if defined(FPDIV_HAVE_AVX2_TU) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace fpdiv::simd {

namespace {

constexpr long long kTwo52Bits = 0x4330000000000000LL;  // bits of 2^52
constexpr long long kTwo84Bits = 0x4530000000000000LL;  // bits of 2^84

inline __m256d u32_to_pd(__m128i x) {
  // Bias into signed range, convert, unbias. All steps exact.
  const __m128i biased = _mm_xor_si128(x, _mm_set1_epi32(static_cast<int>(0x80000000u)));
  return _mm256_add_pd(_mm256_cvtepi32_pd(biased), _mm256_set1_pd(0x1p31));
}

// Nearest-even u64 -> f64: hi*2^32 and lo are formed exactly, their sum is the
// only rounding.
inline __m256d u64_to_pd(__m256i x) {
  const __m256i lo = _mm256_blend_epi32(x, _mm256_set1_epi64x(kTwo52Bits), 0b10101010);
  const __m256i hi = _mm256_or_si256(_mm256_srli_epi64(x, 32), _mm256_set1_epi64x(kTwo84Bits));
  const __m256d hi_d = _mm256_sub_pd(_mm256_castsi256_pd(hi), _mm256_set1_pd(0x1p84 + 0x1p52));
  return _mm256_add_pd(hi_d, _mm256_castsi256_pd(lo));
}

// Nearest-even i64 -> f64. The high word is biased by 2^31 so it can be loaded
// as an unsigned field, and the bias folded into the subtracted constant.
inline __m256d i64_to_pd(__m256i x) {
  const __m256i lo = _mm256_blend_epi32(x, _mm256_set1_epi64x(kTwo52Bits), 0b10101010);
  const __m256i hi_biased = _mm256_xor_si256(_mm256_srli_epi64(x, 32), _mm256_set1_epi64x(0x80000000LL));
  const __m256i hi = _mm256_or_si256(hi_biased, _mm256_set1_epi64x(kTwo84Bits));
  const __m256d hi_d = _mm256_sub_pd(_mm256_castsi256_pd(hi), _mm256_set1_pd(0x1p84 + 0x1p63 + 0x1p52));
  return _mm256_add_pd(hi_d, _mm256_castsi256_pd(lo));
}

// Integral, non-negative r < 2^64 -> u64. Below 2^52 the 2^52 shift exposes the
// integer in the mantissa; above it the mantissa is shifted left by the
// exponent excess (0..11).
inline __m256i integral_pd_to_u64(__m256d r) {
  const __m256d two52 = _mm256_set1_pd(0x1p52);
  const __m256i small = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(r, two52)), _mm256_set1_epi64x(kTwo52Bits));

  const __m256i bits = _mm256_castpd_si256(r);
  const __m256i mant = _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffLL)),
                                       _mm256_set1_epi64x(0x0010000000000000LL));
  const __m256i shift = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1075));
  const __m256i large = _mm256_sllv_epi64(mant, shift);

  const __m256i is_small = _mm256_castpd_si256(_mm256_cmp_pd(r, two52, _CMP_LT_OQ));
  return _mm256_blendv_epi8(large, small, is_small);
}

// Matches u64_of_f64_rn: nearest-even, NaN and negatives to 0, >= 2^64 to max.
inline __m256i pd_to_u64_rn(__m256d v) {
  const __m256d r = _mm256_round_pd(v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d in_range = _mm256_and_pd(_mm256_cmp_pd(r, _mm256_setzero_pd(), _CMP_GE_OQ),
                                         _mm256_cmp_pd(r, _mm256_set1_pd(0x1p64), _CMP_LT_OQ));
  const __m256i too_big = _mm256_castpd_si256(_mm256_cmp_pd(r, _mm256_set1_pd(0x1p64), _CMP_GE_OQ));
  const __m256i value = _mm256_and_si256(integral_pd_to_u64(r), _mm256_castpd_si256(in_range));
  return _mm256_or_si256(value, too_big);
}

// Matches i64_of_f64_rn: nearest-even, saturating, NaN to 0.
inline __m256i pd_to_i64_rn(__m256d v) {
  const __m256d r = _mm256_round_pd(v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d abs_r = _mm256_andnot_pd(_mm256_set1_pd(-0.0), r);
  const __m256i neg = _mm256_castpd_si256(_mm256_cmp_pd(r, _mm256_setzero_pd(), _CMP_LT_OQ));
  const __m256i mag = integral_pd_to_u64(abs_r);
  const __m256i value = _mm256_sub_epi64(_mm256_xor_si256(mag, neg), neg);

  const __m256i too_big = _mm256_castpd_si256(_mm256_cmp_pd(r, _mm256_set1_pd(0x1p63), _CMP_GE_OQ));
  const __m256i too_small = _mm256_castpd_si256(_mm256_cmp_pd(r, _mm256_set1_pd(-0x1p63), _CMP_LT_OQ));
  const __m256i nan = _mm256_castpd_si256(_mm256_cmp_pd(r, r, _CMP_UNORD_Q));

  __m256i out = _mm256_blendv_epi8(value, _mm256_set1_epi64x(0x7fffffffffffffffLL), too_big);
  out = _mm256_blendv_epi8(out, _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL)), too_small);
  return _mm256_andnot_si256(nan, out);
}

// Low 64 bits of a 64x64 product.
inline __m256i mullo_epi64(__m256i a, __m256i b) {
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i cross =
      _mm256_add_epi64(_mm256_mul_epu32(_mm256_srli_epi64(a, 32), b), _mm256_mul_epu32(a, _mm256_srli_epi64(b, 32)));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i cmpge_epu64(__m256i a, __m256i b) {
  const __m256i flip = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
  const __m256i b_gt_a = _mm256_cmpgt_epi64(_mm256_xor_si256(b, flip), _mm256_xor_si256(a, flip));
  return _mm256_xor_si256(b_gt_a, _mm256_set1_epi64x(-1));
}

struct Refined {
  __m256d invb0;
  __m256d invb;
};

inline Refined refine(__m256d bd) {
  const __m128 rs = _mm_div_ps(_mm_set1_ps(1.0f), _mm256_cvtpd_ps(bd));
  const __m256d invb0 = _mm256_cvtps_pd(rs);
  const __m256d alpha = _mm256_fnmadd_pd(bd, invb0, _mm256_set1_pd(1.0));
  return {invb0, _mm256_fmadd_pd(alpha, invb0, invb0)};
}

// Four 32-bit divisions. False if any divisor is zero.
inline bool div32x4(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* q, std::uint32_t* r) {
  const __m128i a32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a));
  const __m128i b32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b));
  if (_mm_movemask_epi8(_mm_cmpeq_epi32(b32, _mm_setzero_si128())) != 0) return false;

  const Refined rc = refine(u32_to_pd(b32));
  const __m256d qd = _mm256_mul_pd(u32_to_pd(a32), rc.invb);
  // 0 <= qd < 2^52: adding 2^52 rounds to the nearest integer, ties to even.
  const __m256i q0 = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(qd, _mm256_set1_pd(0x1p52))),
                                      _mm256_set1_epi64x(kTwo52Bits));

  const __m256i a64 = _mm256_cvtepu32_epi64(a32);
  const __m256i b64 = _mm256_cvtepu32_epi64(b32);
  // q0 < 2^32 in every lane, so the 32x32 multiply is the full product.
  const __m256i r0 = _mm256_sub_epi64(a64, _mm256_mul_epu32(b64, q0));
  const __m256i over = _mm256_cmpgt_epi64(_mm256_setzero_si256(), r0);
  const __m256i quot = _mm256_add_epi64(q0, over);
  const __m256i rem = _mm256_add_epi64(r0, _mm256_and_si256(over, b64));

  const __m256i pick_low = _mm256_setr_epi32(0, 2, 4, 6, 0, 2, 4, 6);
  _mm_storeu_si128(reinterpret_cast<__m128i*>(q),
                   _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(quot, pick_low)));
  _mm_storeu_si128(reinterpret_cast<__m128i*>(r), _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(rem, pick_low)));
  return true;
}

inline bool div64x4(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* q, std::uint64_t* r) {
  const __m256i av = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a));
  const __m256i bv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b));
  const __m256i zero = _mm256_setzero_si256();
  if (_mm256_movemask_epi8(_mm256_cmpeq_epi64(bv, zero)) != 0) return false;

  const Refined rc = refine(u64_to_pd(bv));

  const __m256i q1 = pd_to_u64_rn(_mm256_mul_pd(u64_to_pd(av), rc.invb0));
  const __m256i r1 = _mm256_sub_epi64(av, mullo_epi64(bv, q1));
  const __m256i q2 = pd_to_i64_rn(_mm256_mul_pd(i64_to_pd(r1), rc.invb));
  const __m256i r2 = _mm256_sub_epi64(r1, mullo_epi64(bv, q2));
  const __m256i q0 = _mm256_add_epi64(q1, q2);

  const __m256i over = _mm256_cmpgt_epi64(zero, r2);
  const __m256i main_q = _mm256_add_epi64(q0, over);
  const __m256i main_r = _mm256_add_epi64(r2, _mm256_and_si256(over, bv));

  // b >= 2^63: quotient is (a >= b).
  const __m256i top_bit = _mm256_cmpgt_epi64(zero, bv);
  const __m256i a_ge_b = cmpge_epu64(av, bv);
  const __m256i top_q = _mm256_srli_epi64(a_ge_b, 63);
  const __m256i top_r = _mm256_sub_epi64(av, _mm256_and_si256(a_ge_b, bv));

  const __m256i is_one = _mm256_cmpeq_epi64(bv, _mm256_set1_epi64x(1));

  __m256i quot = _mm256_blendv_epi8(main_q, top_q, top_bit);
  __m256i rem = _mm256_blendv_epi8(main_r, top_r, top_bit);
  quot = _mm256_blendv_epi8(quot, av, is_one);
  rem = _mm256_andnot_si256(is_one, rem);

  _mm256_storeu_si256(reinterpret_cast<__m256i*>(q), quot);
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(r), rem);
  return true;
}

// Runs the 4-lane body over full blocks, then pads the tail with b = 1.
template <class U, class Body>
bool run_blocks(const U* a, const U* b, U* q, U* r, std::size_t n, Body body) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    if (!body(a + i, b + i, q + i, r + i)) return false;
  }
  if (i == n) return true;
  U ta[4] = {0, 0, 0, 0};
  U tb[4] = {1, 1, 1, 1};
  U tq[4];
  U tr[4];
  const std::size_t tail = n - i;
  for (std::size_t k = 0; k < tail; ++k) {
    ta[k] = a[i + k];
    tb[k] = b[i + k];
  }
  if (!body(ta, tb, tq, tr)) return false;
  for (std::size_t k = 0; k < tail; ++k) {
    q[i + k] = tq[k];
    r[i + k] = tr[k];
  }
  return true;
}

}  // namespace

bool udivmod32_avx2(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* q, std::uint32_t* r,
                    std::size_t n) {
  return run_blocks(a, b, q, r, n, div32x4);
}

bool udivmod64_avx2(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* q, std::uint64_t* r,
                    std::size_t n) {
  return run_blocks(a, b, q, r, n, div64x4);
}

}  // namespace fpdiv::simd

#endif
