#pragma once

// Timing harness for the k-parameterized division workloads: quotients of
// a(k) / b(k) for 0 <= k < count, computed one or two per loop iteration, by
// the floating-point algorithm, the bit-serial loop, or the host divider.
// Every run folds its quotients into a wrapping-sum checksum, which must be
// the same for all methods on a given workload.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fpdiv::bench {

enum class Method : std::uint8_t { fp, loop, native };

const char* to_string(Method m) noexcept;

struct Workload {
  std::string id;
  std::string description;
  unsigned width = 64;
  std::uint64_t count = 10000;
  unsigned unroll = 1;
  std::uint64_t a_base = 0;
  std::uint64_t a_step = 0;
  std::uint64_t b_base = 0;
  std::uint64_t b_step = 0;
  std::optional<std::uint64_t> fixed_divisor;

  std::uint64_t a_at(std::uint64_t k) const noexcept { return a_base + a_step * k; }
  std::uint64_t b_at(std::uint64_t k) const noexcept { return fixed_divisor ? *fixed_divisor : b_base + b_step * k; }
};

struct BenchRecord {
  std::string workload;
  unsigned width = 64;
  Method method = Method::fp;
  unsigned unroll = 1;
  std::uint64_t count = 0;
  unsigned reps = 0;
  std::uint64_t best_ns = 0;
  std::optional<std::uint64_t> best_ticks;  // time-stamp counter, where the host has one
  std::uint64_t checksum = 0;
  std::vector<std::uint64_t> samples_ns;    // one per timed repetition, in order
};

inline constexpr unsigned kWarmupRuns = 3;
inline constexpr unsigned kDefaultReps = 31;
inline constexpr std::uint64_t kDefaultCount = 10000;
inline constexpr std::uint64_t kFixedDivisor = 74567;

/// 64-bit varying b, 32-bit varying b, 64-bit fixed b, 32-bit fixed b, each in
/// unroll-1 and unroll-2 form (eight entries).
std::vector<Workload> workload_catalog(std::uint64_t count = kDefaultCount);

/// Best-of-`reps` time after kWarmupRuns untimed runs. Operand generation and
/// checksum reporting sit outside the timed region.
BenchRecord run_bench(const Workload& w, Method m, unsigned reps = kDefaultReps);

/// Floating-point method with the divisor-only work (the reciprocal) computed
/// once before the loop. Throws std::invalid_argument unless the workload has
/// a fixed divisor. The record's workload id gets a "/hoisted" suffix.
BenchRecord hoist_divisor_variant(const Workload& w, unsigned reps = kDefaultReps);

/// Floating-point method through the batch API on the best available SIMD
/// kernel. Workload id gets a "/batch-<isa>" suffix.
BenchRecord run_batch(const Workload& w, unsigned reps = kDefaultReps);

/// All methods on every catalog workload, plus the hoisted and batch variants.
std::vector<BenchRecord> run_catalog(std::uint64_t count = kDefaultCount, unsigned reps = kDefaultReps);

/// CSV header and rows.
inline constexpr const char* kCsvHeader = "workload,width,method,unroll,count,reps,best_ns,checksum";
std::string report_csv(const std::vector<BenchRecord>& records);

/// One table per workload: rows are one and two quotients per iteration,
/// columns Loop / Floating-point / Native, with the loop-over-fp speedup.
std::string report_text(const std::vector<BenchRecord>& records);

/// Loop time over fp time for a workload at the given unroll, if both exist.
std::optional<double> fp_speedup(const std::vector<BenchRecord>& records, const std::string& workload, unsigned unroll);

/// Restricts the calling thread to one logical CPU where the platform allows.
bool pin_to_one_cpu() noexcept;

}  // namespace fpdiv::bench
