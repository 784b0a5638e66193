#pragma once

// IEEE-754 primitives used by the division algorithms.
//
// Every operation is a pure function over bit patterns: the exact real result
// rounded to nearest, ties to even. There is no other rounding mode and no
// floating-point environment state (flags, dynamic modes) anywhere in the
// library. The implementation relies on the native SSE2/NEON arithmetic
// running in its default round-to-nearest-even mode; the rational-oracle tests
// are what establish conformance.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace fpdiv {

enum class FpClass : std::uint8_t { zero, subnormal, normal, infinite, nan };

enum class RoundingMode : std::uint8_t { nearest_even };

/// The only rounding rule in the artifact.
inline constexpr RoundingMode kRounding = RoundingMode::nearest_even;

struct Binary32 {
  std::uint32_t bits = 0;

  static constexpr Binary32 from(float v) noexcept { return {std::bit_cast<std::uint32_t>(v)}; }
  constexpr float value() const noexcept { return std::bit_cast<float>(bits); }

  constexpr FpClass classify() const noexcept {
    const std::uint32_t exp = (bits >> 23) & 0xffu;
    const std::uint32_t frac = bits & 0x7fffffu;
    if (exp == 0xffu) return frac == 0 ? FpClass::infinite : FpClass::nan;
    if (exp == 0) return frac == 0 ? FpClass::zero : FpClass::subnormal;
    return FpClass::normal;
  }
  constexpr bool is_finite() const noexcept { return ((bits >> 23) & 0xffu) != 0xffu; }
  constexpr bool is_nan() const noexcept { return classify() == FpClass::nan; }

  friend constexpr bool operator==(Binary32, Binary32) = default;
};

struct Binary64 {
  std::uint64_t bits = 0;

  static constexpr Binary64 from(double v) noexcept { return {std::bit_cast<std::uint64_t>(v)}; }
  constexpr double value() const noexcept { return std::bit_cast<double>(bits); }

  constexpr FpClass classify() const noexcept {
    const std::uint64_t exp = (bits >> 52) & 0x7ffu;
    const std::uint64_t frac = bits & ((std::uint64_t{1} << 52) - 1);
    if (exp == 0x7ffu) return frac == 0 ? FpClass::infinite : FpClass::nan;
    if (exp == 0) return frac == 0 ? FpClass::zero : FpClass::subnormal;
    return FpClass::normal;
  }
  constexpr bool is_finite() const noexcept { return ((bits >> 52) & 0x7ffu) != 0x7ffu; }
  constexpr bool is_nan() const noexcept { return classify() == FpClass::nan; }

  /// Sign-bit flip; exact for every input including NaN.
  constexpr Binary64 negated() const noexcept { return {bits ^ (std::uint64_t{1} << 63)}; }

  friend constexpr bool operator==(Binary64, Binary64) = default;
};

namespace detail {

// Nearest integer, ties to even, without a libm call. Adding 2^52 to a
// magnitude below 2^52 leaves no fraction bits, so the addition itself does
// the rounding. NaN and infinities pass through.
inline double round_half_even(double v) noexcept {
  const double mag = std::fabs(v);
  const double rounded = mag < 0x1p52 ? (mag + 0x1p52) - 0x1p52 : mag;
  return std::copysign(rounded, v);
}

}  // namespace detail

// Integer <-> binary64 conversions.
inline Binary64 f64_of_u64(std::uint64_t x) noexcept { return Binary64::from(static_cast<double>(x)); }
inline Binary64 f64_of_i64(std::int64_t x) noexcept { return Binary64::from(static_cast<double>(x)); }

// Round-to-nearest-even float -> integer conversions. Total: out-of-range
// values saturate to the nearest endpoint and NaN maps to 0, so these never
// trap.
inline std::uint64_t u64_of_f64_rn(Binary64 x) noexcept {
  const double r = detail::round_half_even(x.value());
  // fmax maps NaN to the other operand, so NaN and negatives clamp to 0.
  const double clamped = std::fmin(std::fmax(r, 0.0), 0x1.fffffffffffffp63);
  const auto u = static_cast<std::uint64_t>(clamped);
  return r >= 0x1p64 ? std::numeric_limits<std::uint64_t>::max() : u;
}

inline std::int64_t i64_of_f64_rn(Binary64 x) noexcept {
  const double v = x.value();
  const double r = detail::round_half_even(v);
  const double clamped = std::fmin(std::fmax(r, -0x1p63), 0x1.fffffffffffffp62);
  const auto i = static_cast<std::int64_t>(clamped);
  const std::int64_t saturated = r >= 0x1p63 ? std::numeric_limits<std::int64_t>::max() : i;
  return v != v ? 0 : saturated;
}

// Precision conversions. Narrowing rounds; widening is exact.
inline Binary32 f32_of_f64(Binary64 x) noexcept { return Binary32::from(static_cast<float>(x.value())); }
inline Binary64 f64_of_f32(Binary32 x) noexcept { return Binary64::from(static_cast<double>(x.value())); }

/// Correctly rounded single-precision reciprocal, realized as 1.0f / x.
inline Binary32 recip32(Binary32 x) noexcept { return Binary32::from(1.0f / x.value()); }

/// x*y + z with a single rounding.
inline Binary64 fma64(Binary64 x, Binary64 y, Binary64 z) noexcept {
  return Binary64::from(std::fma(x.value(), y.value(), z.value()));
}

inline Binary64 mul64(Binary64 x, Binary64 y) noexcept { return Binary64::from(x.value() * y.value()); }

}  // namespace fpdiv
