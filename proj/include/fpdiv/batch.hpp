#pragma once

// Element-wise division over arrays. The scalar kernel loops over the
// reference algorithms in divider.hpp; the AVX2 kernel runs the same operation
// sequence four lanes at a time and must agree with it bit-for-bit. The best
// kernel the CPU supports is chosen at runtime.

#include <cstdint>
#include <span>

namespace fpdiv {

enum class Isa : std::uint8_t { scalar, avx2 };

const char* to_string(Isa isa) noexcept;

/// True when the kernel was compiled in and the running CPU can execute it.
bool isa_supported(Isa isa) noexcept;

/// Widest supported kernel.
Isa best_isa() noexcept;

// All four spans must have the same length, otherwise std::invalid_argument.
// A zero divisor anywhere throws DivisionByZero; the outputs are then
// unspecified. Requesting an unsupported Isa throws std::invalid_argument.
void udivmod32_batch(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                     std::span<std::uint32_t> quotient, std::span<std::uint32_t> remainder);
void udivmod32_batch(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                     std::span<std::uint32_t> quotient, std::span<std::uint32_t> remainder, Isa isa);

void udivmod64_batch(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                     std::span<std::uint64_t> quotient, std::span<std::uint64_t> remainder);
void udivmod64_batch(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                     std::span<std::uint64_t> quotient, std::span<std::uint64_t> remainder, Isa isa);

}  // namespace fpdiv
