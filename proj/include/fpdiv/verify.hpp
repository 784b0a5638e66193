#pragma once

// Differential verification of the floating-point dividers.
//
// Everything here compares the algorithms against host integer division (the
// only place in the library where `/` and `%` on integers appear), checks the
// intermediate values of each traced run, and audits the reciprocal error and
// r1 magnitude bounds with exact dyadic arithmetic.

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fpdiv/divider.hpp"
#include "fpdiv/recip_refine.hpp"

namespace fpdiv::verify {

enum class Width : std::uint8_t { w32 = 32, w64 = 64 };
enum class Signedness : std::uint8_t { unsigned_int, signed_int };
enum class Variant : std::uint8_t { cmov, branching };

const char* to_string(Width w) noexcept;
const char* to_string(Signedness s) noexcept;
const char* to_string(Variant v) noexcept;

/// Operands as bit patterns of the selected width (upper bits zero for 32-bit).
struct DivCase {
  std::uint64_t a = 0;
  std::uint64_t b = 0;

  friend constexpr bool operator==(const DivCase&, const DivCase&) = default;
};

/// Quotient and remainder as width-truncated bit patterns.
struct Outcome {
  std::uint64_t quotient = 0;
  std::uint64_t remainder = 0;

  friend constexpr bool operator==(const Outcome&, const Outcome&) = default;
};

std::uint64_t width_mask(Width w) noexcept;

/// Reference division via the host integer divider. Signed semantics follow
/// C, with MIN / -1 defined as wrapping. Throws DivisionByZero.
Outcome oracle_divmod(std::uint64_t a, std::uint64_t b, Width w, Signedness s);

enum class CheckStatus : std::uint8_t { pass, mismatch, trace_violation, rejected };

const char* to_string(CheckStatus s) noexcept;

struct CheckReport {
  DivCase operands;
  Width width = Width::w64;
  Signedness signedness = Signedness::unsigned_int;
  Variant variant = Variant::cmov;
  CheckStatus status = CheckStatus::pass;
  Outcome expected;
  Outcome actual;
  std::string detail;

  bool ok() const noexcept { return status == CheckStatus::pass; }
};

/// Runs the selected divider on one pair, compares with the oracle and checks
/// the trace invariants. A zero divisor is reported as `rejected`, never
/// thrown. 32-bit has no branching form; the variant is ignored there.
CheckReport check_pair(std::uint64_t a, std::uint64_t b, Width w, Signedness s, Variant v = Variant::cmov);

// Same checks against an explicitly supplied divisor, so a corrupted
// reciprocal can be fed through the harness.
CheckReport check_traced(std::uint32_t a, const Divisor32& d);
CheckReport check_traced(std::uint64_t a, const Divisor64& d);

// ---------------------------------------------------------------------------
// Exact audits.

/// mantissa * 2^exponent, exact.
struct Dyadic {
  unsigned __int128 mantissa = 0;
  int exponent = 0;

  double to_double() const noexcept;
  /// "m*2^e" with m in decimal; exact.
  std::string to_string() const;

  friend std::strong_ordering operator<=>(const Dyadic& x, const Dyadic& y) noexcept;
  friend bool operator==(const Dyadic& x, const Dyadic& y) noexcept { return (x <=> y) == 0; }
};

inline constexpr Dyadic kRecipErrorBound{1049, -56};
inline constexpr std::uint64_t kR1Bound = 4'400'000'000'000;          // 44 * 10^11
inline constexpr std::uint64_t kR1Sufficient = 34'200'000'000'000;    // 342 * 10^11
inline constexpr std::uint64_t kSmallDivisorLimit = std::uint64_t{1} << 42;

enum class AuditKind : std::uint8_t { recip_error, r1_bound };

const char* to_string(AuditKind k) noexcept;

struct AuditRecord {
  AuditKind kind = AuditKind::recip_error;
  std::uint64_t b = 0;
  std::optional<std::uint64_t> a;
  Dyadic measured;
  Dyadic bound;
  bool pass = false;
  // r1 audits only: whether |r1| stays within the looser sufficiency threshold.
  bool within_sufficiency = false;
};

/// |invb - 1/b| / (1/b), exactly, against 1049 * 2^-56. Throws
/// DivisionByZero for b == 0.
AuditRecord audit_recip_error(std::uint64_t b);
AuditRecord audit_recip_error(const ReciprocalApprox& recip);

/// |r1| of the 64-bit trace against 44 * 10^11. Requires 2 <= b <= 2^42,
/// otherwise std::invalid_argument.
AuditRecord audit_r1_bound(std::uint64_t a, std::uint64_t b);

// ---------------------------------------------------------------------------
// Structured inputs.

struct CornerSuite {
  Width width = Width::w64;
  std::vector<DivCase> pairs;
};

/// Boundary-heavy pairs: the case-split divisors and their neighbours, the
/// dividends around multiples of each, and every pair within 2 of a power of
/// two in both operands. Deduplicated, in a fixed order.
CornerSuite corner_suite(Width w);

/// Deterministic boundary-biased pair stream. Draws rotate through four
/// shapes: uniform, near powers of two, near multiples of b, and small b with
/// a large a. In signed mode each operand is negated with probability 1/2.
class PairGenerator {
 public:
  PairGenerator(std::uint64_t seed, Width w, Signedness s);

  DivCase next();

 private:
  std::uint64_t draw() { return rng_(); }
  std::uint64_t near_power_of_two();

  std::mt19937_64 rng_;
  Width width_;
  Signedness signedness_;
  std::uint64_t index_ = 0;
};

/// Pairs with 2 <= b <= 2^42, biased toward large a and toward the edges of
/// the divisor range.
std::vector<DivCase> r1_audit_pairs(std::uint64_t count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Drivers.

struct SuiteSummary {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t rejected = 0;
  std::vector<CheckReport> failures;  // first few only

  bool ok() const noexcept { return failed == 0; }
  void record(const CheckReport& report);
};

inline constexpr std::size_t kKeptFailures = 16;

SuiteSummary run_corner_suite(Width w, Signedness s, Variant v);

/// Unsigned: a in [0, limit], b in [1, limit]. Signed: a and b in
/// [-limit, limit], b != 0.
SuiteSummary run_small_exhaustive(Width w, Signedness s, Variant v, std::uint32_t limit);

/// Every dividend a in [first, last) for one 32-bit divisor, against an
/// incrementally maintained quotient/remainder (no division involved).
SuiteSummary sweep_dividends32(std::uint32_t b, std::uint64_t first, std::uint64_t last);

struct FuzzSummary {
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
  Width width = Width::w64;
  Signedness signedness = Signedness::unsigned_int;
  Variant variant = Variant::cmov;
  std::uint64_t checked = 0;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::optional<std::uint64_t> first_failure_index;
  std::optional<CheckReport> first_failure;
  std::uint64_t recip_audits = 0;
  std::uint64_t recip_violations = 0;
  Dyadic max_recip_error;
  std::uint64_t r1_audits = 0;
  std::uint64_t r1_violations = 0;
  std::uint64_t max_abs_r1 = 0;

  bool ok() const noexcept { return failed == 0 && recip_violations == 0 && r1_violations == 0; }
};

/// Every generated pair goes through check_pair, the reciprocal audit on its
/// divisor magnitude, and (64-bit, 2 <= |b| <= 2^42) the r1 audit.
FuzzSummary fuzz(std::uint64_t count, std::uint64_t seed, Width w, Signedness s, Variant v = Variant::cmov);

struct AuditSummary {
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
  std::uint64_t recip_checked = 0;
  std::uint64_t recip_violations = 0;
  Dyadic max_recip_error;
  std::uint64_t max_recip_error_b = 0;
  std::uint64_t r1_checked = 0;
  std::uint64_t r1_violations = 0;
  std::uint64_t r1_sufficiency_violations = 0;
  std::uint64_t max_abs_r1 = 0;
  DivCase max_abs_r1_pair;
  std::vector<AuditRecord> violations;  // first few only

  bool ok() const noexcept { return recip_violations == 0 && r1_violations == 0 && r1_sufficiency_violations == 0; }
};

/// Reciprocal audit over {1..count} U {2^k, 2^k +- 1} U `count` random
/// divisors, plus the r1 audit over `count` pairs from r1_audit_pairs.
AuditSummary run_audits(std::uint64_t count, std::uint64_t seed);

}  // namespace fpdiv::verify
