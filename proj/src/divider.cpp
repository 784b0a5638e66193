#include "fpdiv/divider.hpp"

#include <type_traits>

namespace fpdiv {

namespace {

// Mask select. Keeps the cmov-form algorithms free of data-dependent branches
// regardless of what the optimizer decides to do with a ternary.
template <class T>
constexpr T select(bool cond, T if_true, T if_false) noexcept {
  using U = std::make_unsigned_t<T>;
  const U mask = U{0} - static_cast<U>(cond);
  return static_cast<T>((static_cast<U>(if_true) & mask) | (static_cast<U>(if_false) & ~mask));
}

Div32Trace run32(std::uint32_t a, std::uint32_t b, const ReciprocalApprox& recip) noexcept {
  Div32Trace t;
  t.qd = mul64(f64_of_u64(a), recip.invb);
  t.q0 = u64_of_f64_rn(t.qd);
  // q0 <= q+1 keeps b*q0 <= a+b < 2^33, so the 64-bit products are exact.
  t.r0 = static_cast<std::int64_t>(std::uint64_t{a} - std::uint64_t{b} * t.q0);
  const bool over = t.r0 < 0;
  t.final.quotient = static_cast<std::uint32_t>(t.q0 - static_cast<std::uint64_t>(over));
  t.final.remainder = static_cast<std::uint32_t>(t.r0) + select<std::uint32_t>(over, b, 0);
  return t;
}

// Main path for 2 <= b < 2^63, with the q2/r2 correction step.
void run64_main(std::uint64_t a, std::uint64_t b, const ReciprocalApprox& recip, Div64Trace& t) noexcept {
  t.q1 = u64_of_f64_rn(mul64(f64_of_u64(a), recip.invb0));
  t.r1 = static_cast<std::int64_t>(a - b * t.q1);
  t.q3d = mul64(f64_of_i64(t.r1), recip.invb);
  t.q2 = i64_of_f64_rn(t.q3d);
  t.r2 = static_cast<std::int64_t>(static_cast<std::uint64_t>(t.r1) - b * static_cast<std::uint64_t>(t.q2));
  t.q0 = t.q1 + static_cast<std::uint64_t>(t.q2);
}

Div64Trace run64_cmov(std::uint64_t a, std::uint64_t b, const ReciprocalApprox& recip) noexcept {
  Div64Trace t;
  run64_main(a, b, recip, t);
  const std::uint64_t main_q = t.q0 - static_cast<std::uint64_t>(t.r2 < 0);

  const bool is_one = b == 1;
  const bool top_bit = static_cast<std::int64_t>(b) < 0;
  const auto top_q = static_cast<std::uint64_t>(a >= b);

  const std::uint64_t q = select(is_one, a, select(top_bit, top_q, main_q));
  const auto tag = [](SpecialCase c) { return static_cast<std::uint8_t>(c); };
  t.special_case = static_cast<SpecialCase>(
      select(is_one, tag(SpecialCase::b_is_one), select(top_bit, tag(SpecialCase::b_top_bit), tag(SpecialCase::none))));
  t.final = {q, a - b * q};
  return t;
}

template <class S, class U>
DivOutcome<S> signed_fixup(S a, S b, DivOutcome<U> mag) noexcept {
  constexpr int kShift = sizeof(S) * 8 - 1;
  const auto sign_a = static_cast<U>(a >> kShift);
  const auto sign_q = static_cast<U>((a ^ b) >> kShift);
  return {static_cast<S>((mag.quotient ^ sign_q) - sign_q), static_cast<S>((mag.remainder ^ sign_a) - sign_a)};
}

template <class U, class S>
U magnitude(S x) noexcept {
  constexpr int kShift = sizeof(S) * 8 - 1;
  const auto sign = static_cast<U>(x >> kShift);
  return (static_cast<U>(x) ^ sign) - sign;
}

}  // namespace

const char* to_string(SpecialCase c) noexcept {
  switch (c) {
    case SpecialCase::none: return "none";
    case SpecialCase::b_is_one: return "b_is_one";
    case SpecialCase::b_top_bit: return "b_top_bit";
  }
  return "?";
}

Divisor32::Divisor32(std::uint32_t b) : b_(b), recip_(approx_inv(b)) {}

Divisor32 Divisor32::with_reciprocal(std::uint32_t b, const ReciprocalApprox& recip) {
  if (b == 0) throw DivisionByZero();
  return Divisor32(b, recip);
}

Divisor64::Divisor64(std::uint64_t b) : b_(b), recip_(approx_inv(b)) {}

Divisor64 Divisor64::with_reciprocal(std::uint64_t b, const ReciprocalApprox& recip) {
  if (b == 0) throw DivisionByZero();
  return Divisor64(b, recip);
}

UDivOutcome32 udivmod32(std::uint32_t a, std::uint32_t b) {
  if (b == 0) throw DivisionByZero();
  return run32(a, b, detail::approx_inv_unchecked(b)).final;
}

UDivOutcome32 udivmod32(std::uint32_t a, const Divisor32& b) noexcept {
  return run32(a, b.value(), b.reciprocal()).final;
}

Div32Trace udivmod32_trace(std::uint32_t a, std::uint32_t b) {
  if (b == 0) throw DivisionByZero();
  return run32(a, b, detail::approx_inv_unchecked(b));
}

Div32Trace udivmod32_trace(std::uint32_t a, const Divisor32& b) noexcept { return run32(a, b.value(), b.reciprocal()); }

UDivOutcome64 udivmod64(std::uint64_t a, std::uint64_t b) {
  if (b == 0) throw DivisionByZero();
  return run64_cmov(a, b, detail::approx_inv_unchecked(b)).final;
}

UDivOutcome64 udivmod64(std::uint64_t a, const Divisor64& b) noexcept {
  return run64_cmov(a, b.value(), b.reciprocal()).final;
}

Div64Trace udivmod64_trace(std::uint64_t a, std::uint64_t b) {
  if (b == 0) throw DivisionByZero();
  return run64_cmov(a, b, detail::approx_inv_unchecked(b));
}

Div64Trace udivmod64_trace(std::uint64_t a, const Divisor64& b) noexcept {
  return run64_cmov(a, b.value(), b.reciprocal());
}

UDivOutcome64 udivmod64_branching(std::uint64_t a, std::uint64_t b) { return udivmod64_branching(a, Divisor64(b)); }

UDivOutcome64 udivmod64_branching(std::uint64_t a, const Divisor64& d) noexcept {
  const std::uint64_t b = d.value();
  if (b == 1) return {a, 0};
  if (b >> 63) {
    if (a >= b) return {1, a - b};
    return {0, a};
  }
  Div64Trace t;
  run64_main(a, b, d.reciprocal(), t);
  if (t.r2 < 0) return {t.q0 - 1, static_cast<std::uint64_t>(t.r2) + b};
  return {t.q0, static_cast<std::uint64_t>(t.r2)};
}

SDivOutcome32 sdivmod32(std::int32_t a, std::int32_t b) {
  if (b == 0) throw DivisionByZero();
  const auto ub = magnitude<std::uint32_t>(b);
  const auto mag = run32(magnitude<std::uint32_t>(a), ub, detail::approx_inv_unchecked(ub)).final;
  return signed_fixup(a, b, mag);
}

SDivOutcome64 sdivmod64(std::int64_t a, std::int64_t b) {
  if (b == 0) throw DivisionByZero();
  const auto ub = magnitude<std::uint64_t>(b);
  const auto mag = run64_cmov(magnitude<std::uint64_t>(a), ub, detail::approx_inv_unchecked(ub)).final;
  return signed_fixup(a, b, mag);
}

}  // namespace fpdiv
