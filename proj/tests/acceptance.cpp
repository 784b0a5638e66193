// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes. Sample sizes and thresholds are fixed below.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fpdiv/bench.hpp"
#include "fpdiv/divider.hpp"
#include "fpdiv/verify.hpp"
#include "support/fp_conformance.hpp"

namespace {

using namespace fpdiv;
using namespace fpdiv::verify;

constexpr std::uint32_t kSmallLimit = 1u << 12;
constexpr std::uint64_t kSweepDivisors[] = {1, 3, 7, (1u << 16) - 1, 0xffffffffu};
constexpr std::uint64_t kFuzzPairs = 10'000'000;
constexpr std::uint64_t kMinCornerPairs64 = 10'000;
constexpr std::uint64_t kRecipAuditCount = 1'000'000;
constexpr std::uint64_t kR1Pairs = 1'000'000;
constexpr std::uint64_t kTracePairs = 1'000'000;
constexpr std::uint64_t kSignedPairs = 1'000'000;
constexpr std::uint64_t kConformanceTuples = 1'000'000;
constexpr double kMinSpeedup64 = 1.0;
constexpr double kMaxMinutes32 = 10.0;

constexpr std::uint64_t kSeed = 20240601;
constexpr std::uint64_t kMax64 = std::numeric_limits<std::uint64_t>::max();
constexpr std::uint64_t kTop = std::uint64_t{1} << 63;

struct Verdict {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note << " [failed: " << what << "]";
    }
  }
};

int g_failed = 0;

void criterion(const char* id, const char* title, const std::function<void(Verdict&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  body(v);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s %s %s:%s (%.1fs)\n", v.pass ? "PASS" : "FAIL", id, title, v.note.str().c_str(), secs);
  std::fflush(stdout);
  if (!v.pass) ++g_failed;
}

void add(Verdict& v, const SuiteSummary& s) {
  v.note << ' ' << s.name << '=' << s.passed << '/' << s.checked;
  v.require(s.ok(), s.name + (s.failures.empty() ? "" : ": " + s.failures.front().detail));
}

void add(Verdict& v, const FuzzSummary& f, const char* label) {
  v.note << ' ' << label << '=' << f.passed << '/' << f.checked;
  v.require(f.checked == f.count && f.ok(), std::string(label) + (f.first_failure ? ": " + f.first_failure->detail : ""));
}

void ac1(Verdict& v) {
  const auto start = std::chrono::steady_clock::now();
  add(v, run_small_exhaustive(Width::w32, Signedness::unsigned_int, Variant::cmov, kSmallLimit));
  for (std::uint64_t b : kSweepDivisors) {
    const auto s = sweep_dividends32(static_cast<std::uint32_t>(b), 0, std::uint64_t{1} << 32);
    v.require(s.checked == (std::uint64_t{1} << 32), "full sweep for b=" + std::to_string(b));
    add(v, s);
  }
  add(v, run_corner_suite(Width::w32, Signedness::unsigned_int, Variant::cmov));
  add(v, fuzz(kFuzzPairs, kSeed, Width::w32, Signedness::unsigned_int), "fuzz");
  const double minutes = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 60;
  v.require(minutes <= kMaxMinutes32, "runtime over 10 minutes");
}

void ac2(Verdict& v) {
  const auto corners = corner_suite(Width::w64);
  v.note << " corner_pairs=" << corners.pairs.size();
  v.require(corners.pairs.size() >= kMinCornerPairs64, "corner suite smaller than 10^4");
  for (Variant var : {Variant::cmov, Variant::branching}) add(v, run_corner_suite(Width::w64, Signedness::unsigned_int, var));
  // The branching check also compares against the cmov result on every pair.
  add(v, fuzz(kFuzzPairs, kSeed, Width::w64, Signedness::unsigned_int, Variant::branching), "fuzz");

  const UDivOutcome64 want{0, kTop};
  v.require(udivmod64(kTop, kMax64) == want && udivmod64_branching(kTop, kMax64) == want, "a=2^63, b=2^64-1");

  std::mt19937_64 rng(kSeed);
  std::uint64_t special = 0;
  for (int i = 0; i < 1'000'000; ++i) {
    const std::uint64_t a = rng() >> (rng() % 64);
    const std::uint64_t b = i % 2 == 0 ? 1 : kTop | rng();
    const UDivOutcome64 expected{a / b, a % b};
    if (udivmod64(a, b) != expected || udivmod64_branching(a, b) != expected) {
      v.require(false, "special case a=" + std::to_string(a) + " b=" + std::to_string(b));
      break;
    }
    ++special;
  }
  v.note << " special_cases=" << special;
}

void ac3(Verdict& v) {
  const auto a = run_audits(kRecipAuditCount, kSeed);
  v.note << " divisors=" << a.recip_checked << " max=" << a.max_recip_error.to_string() << " (b=" << a.max_recip_error_b
         << ") bound=" << kRecipErrorBound.to_string();
  v.require(a.recip_checked >= 2 * kRecipAuditCount, "fewer divisors than required");
  v.require(a.recip_violations == 0, std::to_string(a.recip_violations) + " violations");
}

void ac4(Verdict& v) {
  std::uint64_t checked = 0, violations = 0, max_r1 = 0;
  for (const auto& p : r1_audit_pairs(kR1Pairs, kSeed)) {
    const auto rec = audit_r1_bound(p.a, p.b);
    ++checked;
    if (!rec.pass) ++violations;
    max_r1 = std::max<std::uint64_t>(max_r1, static_cast<std::uint64_t>(rec.measured.mantissa));
  }
  v.note << " pairs=" << checked << " max|r1|=" << max_r1 << " bound=" << kR1Bound;
  v.require(checked >= kR1Pairs, "too few pairs");
  v.require(violations == 0, std::to_string(violations) + " violations");
}

// Checked directly on the traces, with its own oracle and bounds.
void ac5(Verdict& v) {
  std::uint64_t runs32 = 0, runs64 = 0, bad = 0;
  PairGenerator g32(kSeed, Width::w32, Signedness::unsigned_int);
  PairGenerator g64(kSeed, Width::w64, Signedness::unsigned_int);
  for (std::uint64_t i = 0; i < kTracePairs; ++i) {
    const auto c32 = g32.next();
    if (c32.b != 0) {
      const auto t = udivmod32_trace(static_cast<std::uint32_t>(c32.a), static_cast<std::uint32_t>(c32.b));
      const std::uint64_t q = c32.a / c32.b;
      if (t.q0 != q && t.q0 != q + 1) ++bad;
      ++runs32;
    }
    const auto c64 = g64.next();
    if (c64.b >= 2 && c64.b < kTop) {
      const auto t = udivmod64_trace(c64.a, c64.b);
      const std::uint64_t q = c64.a / c64.b;
      const auto b = static_cast<std::int64_t>(c64.b);
      if (t.q0 != q && t.q0 != q + 1) ++bad;
      if (t.r2 < -b || t.r2 >= b) ++bad;
      ++runs64;
    }
  }
  // The exhaustive 32-bit sweeps check q0 on every dividend as well.
  for (std::uint64_t b : {3ull, 0xffffffffull}) add(v, sweep_dividends32(static_cast<std::uint32_t>(b), 0, std::uint64_t{1} << 28));
  v.note << " traced32=" << runs32 << " traced64=" << runs64;
  v.require(bad == 0, std::to_string(bad) + " violations");
}

void ac6(Verdict& v) {
  add(v, fuzz(kSignedPairs, kSeed, Width::w32, Signedness::signed_int), "fuzz32");
  add(v, fuzz(kSignedPairs, kSeed, Width::w64, Signedness::signed_int), "fuzz64");
  constexpr auto min32 = std::numeric_limits<std::int32_t>::min();
  constexpr auto min64 = std::numeric_limits<std::int64_t>::min();
  v.require(sdivmod32(min32, -1) == SDivOutcome32{min32, 0}, "INT32_MIN / -1");
  v.require(sdivmod64(min64, -1) == SDivOutcome64{min64, 0}, "INT64_MIN / -1");
  for (std::int64_t a : {7, -7}) {
    for (std::int64_t b : {2, -2}) {
      v.require(sdivmod64(a, b) == SDivOutcome64{a / b, a % b}, "sign combination");
      v.require(sdivmod32(static_cast<std::int32_t>(a), static_cast<std::int32_t>(b)) ==
                    SDivOutcome32{static_cast<std::int32_t>(a / b), static_cast<std::int32_t>(a % b)},
                "sign combination");
    }
  }
}

void ac7(Verdict& v) {
  for (auto op : fpdiv::testing::kAllKernelOps) {
    const auto r = fpdiv::testing::check_conformance(op, kConformanceTuples, kSeed);
    v.note << ' ' << fpdiv::testing::name(op) << '=' << (r.checked - r.mismatches) << '/' << r.checked;
    v.require(r.checked == kConformanceTuples && r.mismatches == 0,
              std::string(fpdiv::testing::name(op)) + " " + r.first_mismatch);
  }
}

void ac8(Verdict& v) {
  bench::pin_to_one_cpu();
  std::vector<bench::BenchRecord> records;
  for (const auto& w : bench::workload_catalog()) {
    std::uint64_t reference = 0;
    bool first = true;
    for (auto m : {bench::Method::loop, bench::Method::fp, bench::Method::native}) {
      records.push_back(bench::run_bench(w, m));
      if (first) reference = records.back().checksum;
      first = false;
      v.require(records.back().checksum == reference, "checksum differs on " + w.id);
    }
  }
  for (const char* id : {"div64_varying", "div32_varying", "div64_fixed", "div32_fixed"}) {
    for (unsigned unroll : {1u, 2u}) {
      const auto s = bench::fp_speedup(records, id, unroll);
      char buf[64];
      std::snprintf(buf, sizeof buf, " %s/u%u=%.2fx", id, unroll, s.value_or(0.0));
      v.note << buf;
    }
  }
  const auto gate = bench::fp_speedup(records, "div64_varying", 1);
  v.require(gate && *gate > kMinSpeedup64, "fp not faster than loop on div64_varying");
}

void ac9(Verdict& v) {
  const std::vector<std::vector<std::string>> commands = {
      {"fpdiv", "verify", "--width", "64"},
      {"fpdiv", "verify", "--width", "32", "--signed", "--format", "json"},
      {"fpdiv", "fuzz", "--count", "200000", "--seed", "11"},
      {"fpdiv", "fuzz", "--count", "200000", "--seed", "11", "--width", "32", "--signed", "--format", "csv"},
      {"fpdiv", "audit", "--count", "1000", "--seed", "7"},
      {"fpdiv", "audit", "--count", "20000", "--seed", "7", "--format", "json"},
  };
  for (const auto& args : commands) {
    std::ostringstream out1, out2, err;
    const int c1 = cli::run(args, out1, err);
    const int c2 = cli::run(args, out2, err);
    v.require(c1 == 0 && c2 == 0, args[1] + " exit status");
    v.require(out1.str() == out2.str() && !out1.str().empty(), args[1] + " output differs");
  }
  v.note << " commands=" << commands.size();
}

}  // namespace

int main() {
  criterion("AC1", "32-bit oracle equivalence", ac1);
  criterion("AC2", "64-bit oracle equivalence, both variants", ac2);
  criterion("AC3", "reciprocal relative error below 1049*2^-56", ac3);
  criterion("AC4", "|r1| <= 44e11 for 2 <= b <= 2^42", ac4);
  criterion("AC5", "adjustment-set properties", ac5);
  criterion("AC6", "signed C semantics", ac6);
  criterion("AC7", "fp_kernel rational-oracle conformance", ac7);
  criterion("AC8", "bench checksums and fp-vs-loop speedup", ac8);
  criterion("AC9", "deterministic verify/fuzz/audit output", ac9);
  std::printf("%d criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
