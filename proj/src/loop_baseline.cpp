#include "fpdiv/loop_baseline.hpp"

namespace fpdiv {

namespace {

template <class U>
DivOutcome<U> restoring(U a, U b, unsigned& iterations) noexcept {
  constexpr unsigned kBits = sizeof(U) * 8;
  U q = 0;
  U r = 0;
  unsigned steps = 0;
  for (unsigned i = kBits; i-- > 0;) {
    // The shifted-out top bit of r stands for 2^kBits, which always exceeds b.
    const U carry = r >> (kBits - 1);
    r = static_cast<U>((r << 1) | ((a >> i) & 1u));
    const U take = carry | static_cast<U>(r >= b);
    r = static_cast<U>(r - (b & (U{0} - take)));
    q = static_cast<U>((q << 1) | take);
    ++steps;
  }
  iterations = steps;
  return {q, r};
}

}  // namespace

UDivOutcome32 loop_udivmod32(std::uint32_t a, std::uint32_t b, unsigned& iterations) {
  if (b == 0) throw DivisionByZero();
  return restoring(a, b, iterations);
}

UDivOutcome64 loop_udivmod64(std::uint64_t a, std::uint64_t b, unsigned& iterations) {
  if (b == 0) throw DivisionByZero();
  return restoring(a, b, iterations);
}

UDivOutcome32 loop_udivmod32(std::uint32_t a, std::uint32_t b) {
  unsigned ignored = 0;
  return loop_udivmod32(a, b, ignored);
}

UDivOutcome64 loop_udivmod64(std::uint64_t a, std::uint64_t b) {
  unsigned ignored = 0;
  return loop_udivmod64(a, b, ignored);
}

}  // namespace fpdiv
