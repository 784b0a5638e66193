#pragma once

// Integer division computed with binary64/binary32 floating-point arithmetic.
//
// None of the algorithm paths uses an integer divide or modulo operator.
// udivmod32 and udivmod64 are straight-line: special cases are computed in
// parallel with the main path and picked by mask selects. udivmod64_branching
// is the one variant allowed to branch, so that its float->int conversions only
// ever see in-range inputs.

#include <cstdint>

#include "fpdiv/errors.hpp"
#include "fpdiv/fp_kernel.hpp"
#include "fpdiv/recip_refine.hpp"

namespace fpdiv {

template <class T>
struct DivOutcome {
  T quotient{};
  T remainder{};

  friend constexpr bool operator==(const DivOutcome&, const DivOutcome&) = default;
};

using UDivOutcome32 = DivOutcome<std::uint32_t>;
using UDivOutcome64 = DivOutcome<std::uint64_t>;
using SDivOutcome32 = DivOutcome<std::int32_t>;
using SDivOutcome64 = DivOutcome<std::int64_t>;

/// Intermediates of the 32-bit algorithm.
struct Div32Trace {
  Binary64 qd;             // a * invb, rounded
  std::uint64_t q0 = 0;    // nearest integer to qd; q or q+1
  std::int64_t r0 = 0;     // a - b*q0, exact
  UDivOutcome32 final;
};

enum class SpecialCase : std::uint8_t { none, b_is_one, b_top_bit };

const char* to_string(SpecialCase c) noexcept;

/// Intermediates of the 64-bit algorithm. For the special cases the main-path
/// fields still hold whatever the (unselected) main path computed.
struct Div64Trace {
  std::uint64_t q1 = 0;  // nearest integer to a * invb0
  std::int64_t r1 = 0;   // a - b*q1, two's-complement wrap
  Binary64 q3d;          // r1 * invb, rounded
  std::int64_t q2 = 0;   // nearest integer to q3d
  std::int64_t r2 = 0;   // r1 - b*q2, before adjustment
  std::uint64_t q0 = 0;  // q1 + q2
  SpecialCase special_case = SpecialCase::none;
  UDivOutcome64 final;
};

/// A 32-bit divisor with its reciprocal precomputed. Reusing one across many
/// dividends is the hoisted form of the algorithm.
class Divisor32 {
 public:
  /// Throws DivisionByZero for b == 0.
  explicit Divisor32(std::uint32_t b);

  /// Pairs b with an arbitrary reciprocal. Used to inject faults into the
  /// verification harness; production callers use the constructor.
  static Divisor32 with_reciprocal(std::uint32_t b, const ReciprocalApprox& recip);

  std::uint32_t value() const noexcept { return b_; }
  const ReciprocalApprox& reciprocal() const noexcept { return recip_; }

 private:
  Divisor32(std::uint32_t b, const ReciprocalApprox& recip) noexcept : b_(b), recip_(recip) {}

  std::uint32_t b_;
  ReciprocalApprox recip_;
};

class Divisor64 {
 public:
  explicit Divisor64(std::uint64_t b);
  static Divisor64 with_reciprocal(std::uint64_t b, const ReciprocalApprox& recip);

  std::uint64_t value() const noexcept { return b_; }
  const ReciprocalApprox& reciprocal() const noexcept { return recip_; }

 private:
  Divisor64(std::uint64_t b, const ReciprocalApprox& recip) noexcept : b_(b), recip_(recip) {}

  std::uint64_t b_;
  ReciprocalApprox recip_;
};

// Unsigned 32-bit.
UDivOutcome32 udivmod32(std::uint32_t a, std::uint32_t b);
UDivOutcome32 udivmod32(std::uint32_t a, const Divisor32& b) noexcept;
Div32Trace udivmod32_trace(std::uint32_t a, std::uint32_t b);
Div32Trace udivmod32_trace(std::uint32_t a, const Divisor32& b) noexcept;

// Unsigned 64-bit, conditional-move form.
UDivOutcome64 udivmod64(std::uint64_t a, std::uint64_t b);
UDivOutcome64 udivmod64(std::uint64_t a, const Divisor64& b) noexcept;
Div64Trace udivmod64_trace(std::uint64_t a, std::uint64_t b);
Div64Trace udivmod64_trace(std::uint64_t a, const Divisor64& b) noexcept;

// Unsigned 64-bit, branching form.
UDivOutcome64 udivmod64_branching(std::uint64_t a, std::uint64_t b);
UDivOutcome64 udivmod64_branching(std::uint64_t a, const Divisor64& b) noexcept;

// Signed, C semantics (truncation toward zero, remainder takes the dividend's
// sign). MIN / -1 wraps: quotient MIN, remainder 0.
SDivOutcome32 sdivmod32(std::int32_t a, std::int32_t b);
SDivOutcome64 sdivmod64(std::int64_t a, std::int64_t b);

inline std::uint32_t udiv32(std::uint32_t a, std::uint32_t b) { return udivmod32(a, b).quotient; }
inline std::uint32_t urem32(std::uint32_t a, std::uint32_t b) { return udivmod32(a, b).remainder; }
inline std::uint64_t udiv64(std::uint64_t a, std::uint64_t b) { return udivmod64(a, b).quotient; }
inline std::uint64_t urem64(std::uint64_t a, std::uint64_t b) { return udivmod64(a, b).remainder; }
inline std::int32_t sdiv32(std::int32_t a, std::int32_t b) { return sdivmod32(a, b).quotient; }
inline std::int32_t srem32(std::int32_t a, std::int32_t b) { return sdivmod32(a, b).remainder; }
inline std::int64_t sdiv64(std::int64_t a, std::int64_t b) { return sdivmod64(a, b).quotient; }
inline std::int64_t srem64(std::int64_t a, std::int64_t b) { return sdivmod64(a, b).remainder; }

}  // namespace fpdiv
