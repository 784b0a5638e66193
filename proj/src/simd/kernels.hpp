#pragma once

// Raw kernel entry points. Each returns false if it met a zero divisor.
// Nothing here may pull in inline code shared with other translation units:
// the AVX2 kernels are compiled with -mavx2 -mfma.

#include <cstddef>
#include <cstdint>

namespace fpdiv::simd {

using Div32Kernel = bool (*)(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* q, std::uint32_t* r,
                             std::size_t n);
using Div64Kernel = bool (*)(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* q, std::uint64_t* r,
                             std::size_t n);

bool udivmod32_scalar(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* q, std::uint32_t* r,
                      std::size_t n);
bool udivmod64_scalar(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* q, std::uint64_t* r,
                      std::size_t n);

#if defined(FPDIV_HAVE_AVX2_TU)
bool udivmod32_avx2(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* q, std::uint32_t* r,
                    std::size_t n);
bool udivmod64_avx2(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* q, std::uint64_t* r,
                    std::size_t n);
#endif

}  // namespace fpdiv::simd
