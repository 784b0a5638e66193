#pragma once

// Bit-serial restoring division: one quotient bit per iteration, with a trip
// count fixed by the operand width. This is the baseline the floating-point
// algorithms are benchmarked against.

#include <cstdint>

#include "fpdiv/divider.hpp"

namespace fpdiv {

UDivOutcome32 loop_udivmod32(std::uint32_t a, std::uint32_t b);
UDivOutcome64 loop_udivmod64(std::uint64_t a, std::uint64_t b);

// Same, reporting how many shift-subtract steps ran.
UDivOutcome32 loop_udivmod32(std::uint32_t a, std::uint32_t b, unsigned& iterations);
UDivOutcome64 loop_udivmod64(std::uint64_t a, std::uint64_t b, unsigned& iterations);

}  // namespace fpdiv
