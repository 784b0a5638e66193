#include "fpdiv/recip_refine.hpp"

#include "fpdiv/errors.hpp"

namespace fpdiv {

namespace detail {

ReciprocalApprox approx_inv_unchecked(std::uint64_t b) noexcept {
  ReciprocalApprox r;
  r.b = b;
  r.bd = f64_of_u64(b);
  r.invb0 = coarse_from_bd(r.bd);
  r.alpha = fma64(r.bd.negated(), r.invb0, Binary64::from(1.0));
  r.invb = fma64(r.alpha, r.invb0, r.invb0);
  return r;
}

}  // namespace detail

ReciprocalApprox approx_inv(std::uint64_t b) {
  if (b == 0) throw DivisionByZero();
  return detail::approx_inv_unchecked(b);
}

Binary64 approx_inv_coarse(std::uint64_t b) {
  if (b == 0) throw DivisionByZero();
  return detail::coarse_from_bd(f64_of_u64(b));
}

}  // namespace fpdiv
