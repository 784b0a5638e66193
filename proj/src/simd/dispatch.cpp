#include <stdexcept>
#include <string>

#include "fpdiv/batch.hpp"
#include "fpdiv/errors.hpp"
#include "kernels.hpp"

namespace fpdiv {

namespace {

struct KernelTable {
  simd::Div32Kernel div32;
  simd::Div64Kernel div64;
};

bool cpu_has_avx2_fma() noexcept {
#if defined(FPDIV_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

KernelTable kernels_for(Isa isa) {
  if (!isa_supported(isa)) throw std::invalid_argument(std::string("fpdiv: kernel not supported here: ") + to_string(isa));
  switch (isa) {
    case Isa::scalar: return {&simd::udivmod32_scalar, &simd::udivmod64_scalar};
    case Isa::avx2:
#if defined(FPDIV_HAVE_AVX2_TU)
      return {&simd::udivmod32_avx2, &simd::udivmod64_avx2};
#else
      break;
#endif
  }
  throw std::invalid_argument("fpdiv: unknown kernel");
}

template <class T>
void check_sizes(std::span<const T> a, std::span<const T> b, std::span<T> q, std::span<T> r) {
  if (a.size() != b.size() || a.size() != q.size() || a.size() != r.size()) {
    throw std::invalid_argument("fpdiv: batch spans differ in length");
  }
}

}  // namespace

const char* to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "?";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2_fma();
  }
  return false;
}

Isa best_isa() noexcept {
  static const Isa best = isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  return best;
}

void udivmod32_batch(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                     std::span<std::uint32_t> quotient, std::span<std::uint32_t> remainder, Isa isa) {
  check_sizes(a, b, quotient, remainder);
  if (!kernels_for(isa).div32(a.data(), b.data(), quotient.data(), remainder.data(), a.size())) {
    throw DivisionByZero();
  }
}

void udivmod32_batch(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                     std::span<std::uint32_t> quotient, std::span<std::uint32_t> remainder) {
  udivmod32_batch(a, b, quotient, remainder, best_isa());
}

void udivmod64_batch(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                     std::span<std::uint64_t> quotient, std::span<std::uint64_t> remainder, Isa isa) {
  check_sizes(a, b, quotient, remainder);
  if (!kernels_for(isa).div64(a.data(), b.data(), quotient.data(), remainder.data(), a.size())) {
    throw DivisionByZero();
  }
}

void udivmod64_batch(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                     std::span<std::uint64_t> quotient, std::span<std::uint64_t> remainder) {
  udivmod64_batch(a, b, quotient, remainder, best_isa());
}

}  // namespace fpdiv
