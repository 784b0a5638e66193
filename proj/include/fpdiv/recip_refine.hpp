#pragma once

#include <cstdint>

#include "fpdiv/errors.hpp"
#include "fpdiv/fp_kernel.hpp"

namespace fpdiv {

/// Reciprocal of an integer divisor, refined from a single-precision seed.
///
/// The seed invb0 is the correctly rounded binary32 reciprocal of the divisor
/// (narrowed through binary64), good to about 23 bits. One contraction step
/// x -> alpha*x + invb0 with alpha = 1 - b*invb0 brings it to about 46 bits:
///
///   bd    = double(b)
///   invb0 = double(recip32(float(bd)))
///   alpha = fma(-bd, invb0, 1)
///   invb  = fma(alpha, invb0, invb0)
///
/// All intermediates are kept so they can be audited individually.
struct ReciprocalApprox {
  std::uint64_t b = 0;
  Binary64 bd;
  Binary64 invb0;
  Binary64 alpha;
  Binary64 invb;
};

/// Throws DivisionByZero for b == 0.
ReciprocalApprox approx_inv(std::uint64_t b);

/// The widened single-precision seed alone. Throws DivisionByZero for b == 0.
Binary64 approx_inv_coarse(std::uint64_t b);

namespace detail {

// Unchecked forms used on the hot paths once b != 0 is established.
inline Binary64 coarse_from_bd(Binary64 bd) noexcept { return f64_of_f32(recip32(f32_of_f64(bd))); }
ReciprocalApprox approx_inv_unchecked(std::uint64_t b) noexcept;

}  // namespace detail

}  // namespace fpdiv
