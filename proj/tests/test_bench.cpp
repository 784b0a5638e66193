#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "fpdiv/bench.hpp"
#include "fpdiv/verify.hpp"

namespace {

using namespace fpdiv::bench;

TEST(Catalog, FourWorkloadsTwoUnrolls) {
  const auto cat = workload_catalog();
  ASSERT_EQ(cat.size(), 8u);
  for (const auto& w : cat) {
    EXPECT_EQ(w.count, kDefaultCount);
    EXPECT_TRUE(w.unroll == 1 || w.unroll == 2);
  }
  EXPECT_EQ(cat[0].id, "div64_varying");
  EXPECT_EQ(cat[0].width, 64u);
  EXPECT_EQ(cat[0].a_at(0), std::uint64_t{1} << 40);
  EXPECT_EQ(cat[0].b_at(0), 4096u);
  EXPECT_EQ(cat[0].a_at(7), (std::uint64_t{1} << 40) + 222823 * 7);
  EXPECT_EQ(cat[0].b_at(7), 4096u + 19 * 7);
  EXPECT_EQ(cat[2].id, "div32_varying");
  EXPECT_EQ(cat[2].width, 32u);
  EXPECT_EQ(cat[2].a_at(0), std::uint64_t{1} << 24);
  EXPECT_EQ(cat[2].b_at(0), 4096u);
  for (std::size_t i : {4u, 5u, 6u, 7u}) {
    ASSERT_TRUE(cat[i].fixed_divisor.has_value());
    for (std::uint64_t k : {0u, 1u, 9999u}) EXPECT_EQ(cat[i].b_at(k), 74567u);
  }
  // Operands stay inside the workload width over the whole sweep.
  EXPECT_LE(cat[2].a_at(kDefaultCount - 1), 0xffffffffu);
}

TEST(Catalog, FixedDivisorAuditPasses) { EXPECT_TRUE(fpdiv::verify::audit_recip_error(kFixedDivisor).pass); }

TEST(RunBench, ChecksumsAgreeAcrossMethods) {
  for (const auto& w : workload_catalog(500)) {
    const auto fp = run_bench(w, Method::fp, 3);
    const auto loop = run_bench(w, Method::loop, 3);
    const auto native = run_bench(w, Method::native, 3);
    EXPECT_EQ(fp.checksum, loop.checksum) << w.id;
    EXPECT_EQ(fp.checksum, native.checksum) << w.id;
    EXPECT_EQ(run_batch(w, 3).checksum, native.checksum) << w.id;
    if (w.fixed_divisor) {
      EXPECT_EQ(hoist_divisor_variant(w, 3).checksum, native.checksum) << w.id;
    }
  }
}

TEST(RunBench, ChecksumMatchesIndependentSum) {
  const auto w = workload_catalog(1000)[0];
  std::uint64_t sum = 0;
  for (std::uint64_t k = 0; k < w.count; ++k) sum += w.a_at(k) / w.b_at(k);
  EXPECT_EQ(run_bench(w, Method::fp, 1).checksum, sum);
}

TEST(RunBench, BestIsMinimumOfSamples) {
  const auto rec = run_bench(workload_catalog(1000)[1], Method::fp, 7);
  ASSERT_EQ(rec.samples_ns.size(), 7u);
  EXPECT_EQ(rec.best_ns, *std::min_element(rec.samples_ns.begin(), rec.samples_ns.end()));
  EXPECT_EQ(rec.reps, 7u);
  EXPECT_EQ(rec.count, 1000u);
  EXPECT_EQ(rec.unroll, 2u);
  // Best of a prefix is never better than best of the whole run.
  for (std::size_t n = 1; n <= rec.samples_ns.size(); ++n) {
    EXPECT_GE(*std::min_element(rec.samples_ns.begin(), rec.samples_ns.begin() + static_cast<long>(n)), rec.best_ns);
  }
}

TEST(Hoist, RequiresFixedDivisor) {
  const auto cat = workload_catalog(100);
  EXPECT_THROW(hoist_divisor_variant(cat[0], 1), std::invalid_argument);
  const auto rec = hoist_divisor_variant(cat[4], 1);
  EXPECT_EQ(rec.workload, "div64_fixed/hoisted");
  EXPECT_EQ(rec.method, Method::fp);
}

TEST(Report, CsvAndText) {
  const auto cat = workload_catalog(200);
  std::vector<BenchRecord> records;
  for (std::size_t i : {0u, 1u}) {
    for (Method m : {Method::loop, Method::fp, Method::native}) records.push_back(run_bench(cat[i], m, 1));
  }
  const std::string csv = report_csv(records);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);

  const std::string text = report_text(records);
  EXPECT_NE(text.find("Loop"), std::string::npos);
  EXPECT_NE(text.find("Floating-point"), std::string::npos);
  EXPECT_NE(text.find("Native"), std::string::npos);
  EXPECT_NE(text.find("One quotient per iteration"), std::string::npos);
  EXPECT_NE(text.find("Two quotients per iteration"), std::string::npos);
  EXPECT_TRUE(fp_speedup(records, "div64_varying", 1).has_value());
  EXPECT_FALSE(fp_speedup(records, "missing", 1).has_value());
  EXPECT_STREQ(to_string(Method::native), "native");
}

}  // namespace
