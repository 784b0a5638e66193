#include "fpdiv/divider.hpp"
#include "kernels.hpp"

namespace fpdiv::simd {

bool udivmod32_scalar(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* q, std::uint32_t* r,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (b[i] == 0) return false;
    const auto out = udivmod32(a[i], b[i]);
    q[i] = out.quotient;
    r[i] = out.remainder;
  }
  return true;
}

bool udivmod64_scalar(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* q, std::uint64_t* r,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (b[i] == 0) return false;
    const auto out = udivmod64(a[i], b[i]);
    q[i] = out.quotient;
    r[i] = out.remainder;
  }
  return true;
}

}  // namespace fpdiv::simd
