#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "fpdiv/recip_refine.hpp"
#include "support/rational_oracle.hpp"

namespace {

using namespace fpdiv;
using fpdiv::testing::exact_value;
using fpdiv::testing::from_u64;
using fpdiv::testing::scale2;

// |x - 1/b| * b = |x*b - 1|, exactly.
mpq_class relative_error(double x, std::uint64_t b) { return abs(*exact_value(x) * from_u64(b) - 1); }

TEST(ApproxInv, One) {
  const auto r = approx_inv(1);
  EXPECT_EQ(r.invb.value(), 1.0);
  EXPECT_EQ(r.invb0.value(), 1.0);
  EXPECT_EQ(r.alpha.value(), 0.0);
  EXPECT_EQ(r.bd.value(), 1.0);
}

TEST(ApproxInv, PowersOfTwoAreExact) {
  for (int k = 0; k <= 63; ++k) {
    const auto r = approx_inv(std::uint64_t{1} << k);
    EXPECT_EQ(r.invb.value(), std::ldexp(1.0, -k)) << k;
    EXPECT_EQ(r.alpha.value(), 0.0) << k;
  }
  EXPECT_EQ(approx_inv(std::uint64_t{1} << 42).invb.value(), 0x1p-42);
}

TEST(ApproxInv, ThreeIsWithinBound) {
  const mpq_class bound = scale2(mpq_class(1049), -56);
  EXPECT_LT(relative_error(approx_inv(3).invb.value(), 3), bound);
}

TEST(ApproxInv, StepsFollowTheConstruction) {
  for (std::uint64_t b : {3ull, 10ull, 74567ull, 0xffffffffffffffffull, 0x8000000000000001ull}) {
    const auto r = approx_inv(b);
    const double bd = static_cast<double>(b);
    const double invb0 = static_cast<double>(1.0f / static_cast<float>(bd));
    EXPECT_EQ(r.b, b);
    EXPECT_EQ(r.bd.value(), bd);
    EXPECT_EQ(r.invb0.value(), invb0);
    EXPECT_EQ(r.alpha.value(), std::fma(-bd, invb0, 1.0));
    EXPECT_EQ(r.invb.value(), std::fma(r.alpha.value(), invb0, invb0));
    EXPECT_EQ(approx_inv_coarse(b).bits, r.invb0.bits);
  }
}

TEST(ApproxInv, RejectsZero) {
  EXPECT_THROW(approx_inv(0), DivisionByZero);
  EXPECT_THROW(approx_inv_coarse(0), DivisionByZero);
}

TEST(ApproxInvCoarse, Examples) {
  EXPECT_EQ(approx_inv_coarse(2).value(), 0.5);
  EXPECT_EQ(approx_inv_coarse(1).value(), 1.0);
  const double c = approx_inv_coarse(10).value();
  EXPECT_EQ(c, static_cast<double>(0.1f));
  EXPECT_LT(relative_error(c, 10), scale2(mpq_class(1), -23));
}

// Contraction and alpha smallness over a spread of divisors, measured exactly.
TEST(ApproxInv, RefinementContractsAndAlphaIsSmall) {
  const mpq_class bound = scale2(mpq_class(1049), -56);
  const mpq_class alpha_bound = scale2(mpq_class(1), -22) + scale2(mpq_class(1), -40);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20000; ++i) {
    const std::uint64_t b = std::max<std::uint64_t>(2, rng() >> (rng() % 63));
    const auto r = approx_inv(b);
    const mpq_class e = relative_error(r.invb.value(), b);
    const mpq_class e0 = relative_error(r.invb0.value(), b);
    ASSERT_LT(e, bound) << b;
    if (e0 == 0) {
      ASSERT_EQ(e, 0) << b;
    } else {
      ASSERT_LT(e, e0) << b;
    }
    ASSERT_LE(abs(*exact_value(r.alpha.value())), alpha_bound) << b;
  }
}

}  // namespace
