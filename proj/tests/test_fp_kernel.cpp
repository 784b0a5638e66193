#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "fpdiv/fp_kernel.hpp"
#include "support/fp_conformance.hpp"
#include "support/rational_oracle.hpp"

namespace {

using namespace fpdiv;
using fpdiv::testing::kBinary32;
using fpdiv::testing::kBinary64;
using fpdiv::testing::round_to_format;

constexpr std::uint64_t kMax64 = std::numeric_limits<std::uint64_t>::max();

double oracle_double(const mpq_class& x) { return std::bit_cast<double>(round_to_format(x, kBinary64)); }
float oracle_float(const mpq_class& x) {
  return std::bit_cast<float>(static_cast<std::uint32_t>(round_to_format(x, kBinary32)));
}

mpq_class pow2q(long k) { return fpdiv::testing::scale2(mpq_class(1), k); }

TEST(FpKernel, UnsignedToDouble) {
  EXPECT_EQ(f64_of_u64(1).value(), 1.0);
  const std::uint64_t tie = (std::uint64_t{1} << 53) + 1;
  EXPECT_EQ(f64_of_u64(tie).value(), oracle_double(fpdiv::testing::from_u64(tie)));
  EXPECT_EQ(f64_of_u64(tie).value(), 0x1p53);
  EXPECT_EQ(f64_of_u64(kMax64).value(), oracle_double(fpdiv::testing::from_u64(kMax64)));
  EXPECT_EQ(f64_of_u64(kMax64).value(), 0x1p64);
}

TEST(FpKernel, SignedToDouble) {
  EXPECT_EQ(f64_of_i64(-1).value(), -1.0);
  EXPECT_EQ(f64_of_i64(0).bits, 0u);  // +0.0
  const std::int64_t x = -((std::int64_t{1} << 53) + 1);
  EXPECT_EQ(f64_of_i64(x).value(), oracle_double(fpdiv::testing::from_i64(x)));
  EXPECT_EQ(f64_of_i64(x).value(), -0x1p53);
}

TEST(FpKernel, DoubleToUnsignedRoundsAndSaturates) {
  EXPECT_EQ(u64_of_f64_rn(Binary64::from(2.5)), 2u);
  EXPECT_EQ(u64_of_f64_rn(Binary64::from(3.5)), 4u);
  EXPECT_EQ(u64_of_f64_rn(Binary64::from(-7.0)), 0u);
  EXPECT_EQ(u64_of_f64_rn(Binary64::from(0x1p64)), kMax64);
  EXPECT_EQ(u64_of_f64_rn(Binary64::from(0x1.fffffffffffffp63)), 0xfffffffffffff800u);
  EXPECT_EQ(u64_of_f64_rn(Binary64::from(std::numeric_limits<double>::infinity())), kMax64);
  EXPECT_EQ(u64_of_f64_rn(Binary64::from(-std::numeric_limits<double>::infinity())), 0u);
  EXPECT_EQ(u64_of_f64_rn(Binary64::from(std::numeric_limits<double>::quiet_NaN())), 0u);
  EXPECT_EQ(u64_of_f64_rn(Binary64::from(-0.5)), 0u);
}

TEST(FpKernel, DoubleToSignedRoundsAndSaturates) {
  EXPECT_EQ(i64_of_f64_rn(Binary64::from(-2.5)), -2);
  EXPECT_EQ(i64_of_f64_rn(Binary64::from(0.49)), 0);
  EXPECT_EQ(i64_of_f64_rn(Binary64::from(0x1p64)), std::numeric_limits<std::int64_t>::max());
  EXPECT_EQ(i64_of_f64_rn(Binary64::from(0x1p63)), std::numeric_limits<std::int64_t>::max());
  EXPECT_EQ(i64_of_f64_rn(Binary64::from(-0x1p63)), std::numeric_limits<std::int64_t>::min());
  EXPECT_EQ(i64_of_f64_rn(Binary64::from(-0x1p70)), std::numeric_limits<std::int64_t>::min());
  EXPECT_EQ(i64_of_f64_rn(Binary64::from(std::numeric_limits<double>::quiet_NaN())), 0);
}

TEST(FpKernel, NarrowAndWiden) {
  EXPECT_EQ(f32_of_f64(Binary64::from(1.0)).value(), 1.0f);
  const double big = 0x1p64 - 0x1p40;
  EXPECT_EQ(f32_of_f64(Binary64::from(big)).value(), oracle_float(*fpdiv::testing::exact_value(big)));
  EXPECT_EQ(static_cast<double>(f32_of_f64(Binary64::from(big)).value()), big);
  const double near_one = 1.0 + 0x1p-30;
  EXPECT_EQ(f32_of_f64(Binary64::from(near_one)).value(), oracle_float(*fpdiv::testing::exact_value(near_one)));
  EXPECT_EQ(f32_of_f64(Binary64::from(near_one)).value(), 1.0f);

  EXPECT_EQ(f64_of_f32(Binary32::from(0.5f)).value(), 0.5);
  EXPECT_TRUE(f64_of_f32(Binary32::from(std::numeric_limits<float>::quiet_NaN())).is_nan());
}

TEST(FpKernel, Reciprocal) {
  EXPECT_EQ(recip32(Binary32::from(2.0f)).value(), 0.5f);
  EXPECT_EQ(recip32(Binary32::from(3.0f)).value(), oracle_float(mpq_class(1, 3)));
  EXPECT_EQ(recip32(Binary32::from(0x1p64f)).value(), 0x1p-64f);
}

TEST(FpKernel, FusedMultiplyAddRoundsOnce) {
  EXPECT_EQ(fma64(Binary64::from(0.0), Binary64::from(1.0), Binary64::from(7.0)).value(), 7.0);
  const double x = 1.0 + 0x1p-30;
  const double y = 1.0 - 0x1p-30;
  const mpq_class exact = *fpdiv::testing::exact_value(x) * *fpdiv::testing::exact_value(y) - 1;
  const Binary64 got = fma64(Binary64::from(x), Binary64::from(y), Binary64::from(-1.0));
  EXPECT_EQ(got.value(), oracle_double(exact));
  EXPECT_EQ(got.value(), -0x1p-60);
  // Separate multiply then add loses the low product bits entirely.
  EXPECT_EQ(mul64(Binary64::from(x), Binary64::from(y)).value() - 1.0, 0.0);
  EXPECT_EQ(fma64(Binary64::from(-0x1p12), Binary64::from(0x1p-12), Binary64::from(1.0)).value(), 0.0);
}

TEST(FpKernel, Multiply) {
  EXPECT_EQ(mul64(Binary64::from(2.0), Binary64::from(0.5)).value(), 1.0);
  EXPECT_EQ(mul64(Binary64::from(0x1p53 - 1), Binary64::from(1.0)).value(), 0x1p53 - 1);
  // (1 + 2^-26)^2 = 1 + 2^-25 + 2^-52 fits in 53 bits, so the product is exact.
  const double x = 1.0 + 0x1p-26;
  const mpq_class exact = 1 + pow2q(-25) + pow2q(-52);
  EXPECT_EQ(mul64(Binary64::from(x), Binary64::from(x)).value(), oracle_double(exact));
  EXPECT_EQ(mul64(Binary64::from(x), Binary64::from(x)).value(), 1.0 + 0x1p-25 + 0x1p-52);
}

TEST(FpKernel, NarrowOfWidenedIsIdentity) {
  fpdiv::testing::Sampler s(11);
  for (int i = 0; i < 100000; ++i) {
    const auto pattern = static_cast<std::uint32_t>(s.bits());
    const Binary32 x{pattern};
    if (x.is_nan()) continue;
    EXPECT_EQ(f32_of_f64(f64_of_f32(x)).bits, pattern);
  }
}

TEST(FpKernel, ConversionsAreTotal) {
  fpdiv::testing::Sampler s(12);
  for (int i = 0; i < 100000; ++i) {
    const Binary64 x{s.bits()};
    (void)u64_of_f64_rn(x);
    (void)i64_of_f64_rn(x);
  }
  SUCCEED();
}

TEST(FpKernel, Classification) {
  EXPECT_EQ(Binary64::from(0.0).classify(), FpClass::zero);
  EXPECT_EQ(Binary64::from(0x1p-1074).classify(), FpClass::subnormal);
  EXPECT_EQ(Binary64::from(1.0).classify(), FpClass::normal);
  EXPECT_EQ(Binary64::from(std::numeric_limits<double>::infinity()).classify(), FpClass::infinite);
  EXPECT_EQ(Binary64::from(std::numeric_limits<double>::quiet_NaN()).classify(), FpClass::nan);
  EXPECT_EQ(Binary32::from(0x1p-149f).classify(), FpClass::subnormal);
  EXPECT_EQ(Binary64::from(2.0).negated().value(), -2.0);
}

class Conformance : public ::testing::TestWithParam<fpdiv::testing::KernelOp> {};

TEST_P(Conformance, MatchesRationalOracle) {
  const auto result = fpdiv::testing::check_conformance(GetParam(), 20000, 3);
  EXPECT_EQ(result.checked, 20000u);
  EXPECT_EQ(result.mismatches, 0u) << result.first_mismatch;
}

INSTANTIATE_TEST_SUITE_P(AllOps, Conformance, ::testing::ValuesIn(fpdiv::testing::kAllKernelOps),
                         [](const auto& info) { return std::string(fpdiv::testing::name(info.param)); });

}  // namespace
