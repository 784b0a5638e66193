#include "fpdiv/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

namespace fpdiv::verify {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::uint64_t kTop64 = std::uint64_t{1} << 63;

unsigned bits_of(Width w) noexcept { return static_cast<unsigned>(w); }

// Sign-extends a width-truncated pattern.
std::int64_t as_signed(std::uint64_t x, Width w) noexcept {
  if (w == Width::w32) return static_cast<std::int32_t>(static_cast<std::uint32_t>(x));
  return static_cast<std::int64_t>(x);
}

std::uint64_t magnitude_of(std::uint64_t x, Width w, Signedness s) noexcept {
  if (s == Signedness::unsigned_int) return x;
  const std::int64_t v = as_signed(x, w);
  return v < 0 ? (std::uint64_t{0} - static_cast<std::uint64_t>(v)) & width_mask(w) : static_cast<std::uint64_t>(v);
}

std::string hex(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "0x";
  bool started = false;
  for (int shift = 60; shift >= 0; shift -= 4) {
    const unsigned nibble = (v >> shift) & 0xf;
    if (nibble != 0 || started || shift == 0) {
      out += kDigits[nibble];
      started = true;
    }
  }
  return out;
}

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s += static_cast<char>('0' + static_cast<int>(v % 10));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

unsigned bit_length(u128 v) noexcept {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  if (hi != 0) return 128 - static_cast<unsigned>(std::countl_zero(hi));
  return 64 - static_cast<unsigned>(std::countl_zero(static_cast<std::uint64_t>(v)));
}

// Trace checks. Each returns an empty string when every invariant holds.

std::string validate32(std::uint64_t a, std::uint64_t b, const Div32Trace& t, std::uint64_t q) {
  std::string why;
  if (t.q0 != q && t.q0 != q + 1) why += "q0 not in {q, q+1}; ";
  if (static_cast<i128>(t.r0) != static_cast<i128>(a) - static_cast<i128>(b) * static_cast<i128>(t.q0)) {
    why += "r0 != a - b*q0; ";
  }
  if ((t.r0 < 0) != (t.q0 == q + 1)) why += "sign of r0 disagrees with q0 - q; ";
  return why;
}

std::string validate64(std::uint64_t a, std::uint64_t b, const Div64Trace& t, std::uint64_t q) {
  std::string why;
  const SpecialCase want = b == 1 ? SpecialCase::b_is_one : (b & kTop64) ? SpecialCase::b_top_bit : SpecialCase::none;
  if (t.special_case != want) why += "special-case flag wrong; ";
  if (want != SpecialCase::none) return why;

  const i128 r1 = static_cast<i128>(a) - static_cast<i128>(b) * static_cast<i128>(t.q1);
  if (r1 != t.r1) why += "r1 wrapped (a - b*q1 outside int64); ";
  if (b <= kSmallDivisorLimit) {
    const i128 mag = r1 < 0 ? -r1 : r1;
    if (mag > static_cast<i128>(kR1Bound)) why += "|r1| > 44e11; ";
  }
  const i128 r2 = r1 - static_cast<i128>(b) * static_cast<i128>(t.q2);
  if (r2 != t.r2) why += "r2 wrapped; ";
  if (!(r2 >= -static_cast<i128>(b) && r2 < static_cast<i128>(b))) why += "r2 outside [-b, b); ";
  const i128 q0 = static_cast<i128>(t.q1) + static_cast<i128>(t.q2);
  if (q0 != static_cast<i128>(q) && q0 != static_cast<i128>(q) + 1) why += "q0 not in {q, q+1}; ";
  if ((t.r2 < 0) != (q0 == static_cast<i128>(q) + 1)) why += "sign of r2 disagrees with q0 - q; ";
  return why;
}

CheckReport make_report(std::uint64_t a, std::uint64_t b, Width w, Signedness s, Variant v) {
  CheckReport r;
  r.operands = {a, b};
  r.width = w;
  r.signedness = s;
  r.variant = v;
  return r;
}

void finish(CheckReport& r, const std::string& trace_problems) {
  if (r.actual != r.expected) {
    r.status = CheckStatus::mismatch;
    r.detail = "expected q=" + hex(r.expected.quotient) + " r=" + hex(r.expected.remainder) + ", got q=" +
               hex(r.actual.quotient) + " r=" + hex(r.actual.remainder);
    if (!trace_problems.empty()) r.detail += "; " + trace_problems;
  } else if (!trace_problems.empty()) {
    r.status = CheckStatus::trace_violation;
    r.detail = trace_problems;
  }
}

std::uint64_t draw_delta(std::mt19937_64& rng) { return rng() % 5 - 2; }  // wraps for negatives

}  // namespace

const char* to_string(Width w) noexcept { return w == Width::w32 ? "32" : "64"; }
const char* to_string(Signedness s) noexcept { return s == Signedness::unsigned_int ? "unsigned" : "signed"; }
const char* to_string(Variant v) noexcept { return v == Variant::cmov ? "cmov" : "branching"; }

const char* to_string(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::mismatch: return "mismatch";
    case CheckStatus::trace_violation: return "trace_violation";
    case CheckStatus::rejected: return "rejected";
  }
  return "?";
}

const char* to_string(AuditKind k) noexcept { return k == AuditKind::recip_error ? "recip_error" : "r1_bound"; }

std::uint64_t width_mask(Width w) noexcept {
  return w == Width::w32 ? std::uint64_t{0xffffffff} : std::numeric_limits<std::uint64_t>::max();
}

Outcome oracle_divmod(std::uint64_t a, std::uint64_t b, Width w, Signedness s) {
  const std::uint64_t mask = width_mask(w);
  a &= mask;
  b &= mask;
  if (b == 0) throw DivisionByZero();
  if (s == Signedness::unsigned_int) return {a / b, a % b};

  const std::int64_t sa = as_signed(a, w);
  const std::int64_t sb = as_signed(b, w);
  const std::int64_t min = w == Width::w32 ? std::numeric_limits<std::int32_t>::min()
                                           : std::numeric_limits<std::int64_t>::min();
  if (sa == min && sb == -1) return {a, 0};
  return {static_cast<std::uint64_t>(sa / sb) & mask, static_cast<std::uint64_t>(sa % sb) & mask};
}

CheckReport check_pair(std::uint64_t a, std::uint64_t b, Width w, Signedness s, Variant v) {
  const std::uint64_t mask = width_mask(w);
  a &= mask;
  b &= mask;
  CheckReport r = make_report(a, b, w, s, v);
  if (b == 0) {
    r.status = CheckStatus::rejected;
    r.detail = "zero divisor";
    return r;
  }
  r.expected = oracle_divmod(a, b, w, s);

  // Trace invariants are stated for the unsigned division the signed forms
  // reduce to.
  const std::uint64_t ua = magnitude_of(a, w, s);
  const std::uint64_t ub = magnitude_of(b, w, s);
  const std::uint64_t uq = oracle_divmod(ua, ub, w, Signedness::unsigned_int).quotient;

  std::string problems;
  if (w == Width::w32) {
    const Div32Trace t = udivmod32_trace(static_cast<std::uint32_t>(ua), static_cast<std::uint32_t>(ub));
    problems = validate32(ua, ub, t, uq);
    if (s == Signedness::unsigned_int) {
      r.actual = {t.final.quotient, t.final.remainder};
    } else {
      const auto out = sdivmod32(static_cast<std::int32_t>(as_signed(a, w)), static_cast<std::int32_t>(as_signed(b, w)));
      r.actual = {static_cast<std::uint32_t>(out.quotient), static_cast<std::uint32_t>(out.remainder)};
    }
  } else {
    const Div64Trace t = udivmod64_trace(ua, ub);
    problems = validate64(ua, ub, t, uq);
    if (s == Signedness::signed_int) {
      const auto out = sdivmod64(as_signed(a, w), as_signed(b, w));
      r.actual = {static_cast<std::uint64_t>(out.quotient), static_cast<std::uint64_t>(out.remainder)};
    } else if (v == Variant::cmov) {
      r.actual = {t.final.quotient, t.final.remainder};
    } else {
      const auto out = udivmod64_branching(a, b);
      r.actual = {out.quotient, out.remainder};
      if (out != t.final) problems += "branching and cmov variants disagree; ";
    }
  }
  finish(r, problems);
  return r;
}

CheckReport check_traced(std::uint32_t a, const Divisor32& d) {
  CheckReport r = make_report(a, d.value(), Width::w32, Signedness::unsigned_int, Variant::cmov);
  r.expected = oracle_divmod(a, d.value(), Width::w32, Signedness::unsigned_int);
  const Div32Trace t = udivmod32_trace(a, d);
  r.actual = {t.final.quotient, t.final.remainder};
  finish(r, validate32(a, d.value(), t, r.expected.quotient));
  return r;
}

CheckReport check_traced(std::uint64_t a, const Divisor64& d) {
  CheckReport r = make_report(a, d.value(), Width::w64, Signedness::unsigned_int, Variant::cmov);
  r.expected = oracle_divmod(a, d.value(), Width::w64, Signedness::unsigned_int);
  const Div64Trace t = udivmod64_trace(a, d);
  r.actual = {t.final.quotient, t.final.remainder};
  finish(r, validate64(a, d.value(), t, r.expected.quotient));
  return r;
}

// ---------------------------------------------------------------------------

double Dyadic::to_double() const noexcept { return std::ldexp(static_cast<double>(mantissa), exponent); }

std::string Dyadic::to_string() const { return u128_to_string(mantissa) + "*2^" + std::to_string(exponent); }

std::strong_ordering operator<=>(const Dyadic& x, const Dyadic& y) noexcept {
  if (x.mantissa == 0 || y.mantissa == 0) return (x.mantissa != 0) <=> (y.mantissa != 0);
  const int top_x = static_cast<int>(bit_length(x.mantissa)) + x.exponent;
  const int top_y = static_cast<int>(bit_length(y.mantissa)) + y.exponent;
  if (top_x != top_y) return top_x <=> top_y;
  // Same leading-bit position: shifting the larger-exponent side left cannot
  // overflow, it only fills bits the other mantissa already uses.
  if (x.exponent >= y.exponent) return (x.mantissa << (x.exponent - y.exponent)) <=> y.mantissa;
  return x.mantissa <=> (y.mantissa << (y.exponent - x.exponent));
}

AuditRecord audit_recip_error(const ReciprocalApprox& recip) {
  if (recip.b == 0) throw DivisionByZero();
  AuditRecord rec;
  rec.kind = AuditKind::recip_error;
  rec.b = recip.b;
  rec.bound = kRecipErrorBound;

  // invb = m * 2^e, so |invb*b - 1| = |m*b - 2^-e| * 2^e. For 1 <= b < 2^64 the
  // reciprocal sits in [2^-64, 1], giving -e in [52, 116] and m*b < 2^117.
  const Binary64 invb = recip.invb;
  const std::uint64_t biased = (invb.bits >> 52) & 0x7ff;
  const bool sane = invb.classify() == FpClass::normal && (invb.bits >> 63) == 0;
  const int e = static_cast<int>(biased) - 1075;
  if (!sane || e > -1 || e < -126) {
    rec.measured = {std::numeric_limits<u128>::max(), 0};
    rec.pass = false;
    return rec;
  }
  const u128 m = (invb.bits & ((std::uint64_t{1} << 52) - 1)) | (std::uint64_t{1} << 52);
  const u128 product = m * recip.b;
  const u128 one = u128{1} << (-e);
  rec.measured = {product > one ? product - one : one - product, e};
  rec.pass = rec.measured < rec.bound;
  return rec;
}

AuditRecord audit_recip_error(std::uint64_t b) { return audit_recip_error(approx_inv(b)); }

AuditRecord audit_r1_bound(std::uint64_t a, std::uint64_t b) {
  if (b < 2 || b > kSmallDivisorLimit) throw std::invalid_argument("audit_r1_bound: need 2 <= b <= 2^42");
  const Div64Trace t = udivmod64_trace(a, b);
  const std::uint64_t mag =
      t.r1 < 0 ? std::uint64_t{0} - static_cast<std::uint64_t>(t.r1) : static_cast<std::uint64_t>(t.r1);
  AuditRecord rec;
  rec.kind = AuditKind::r1_bound;
  rec.b = b;
  rec.a = a;
  rec.measured = {mag, 0};
  rec.bound = {kR1Bound, 0};
  rec.pass = mag <= kR1Bound;
  rec.within_sufficiency = mag <= kR1Sufficient;
  return rec;
}

// ---------------------------------------------------------------------------

CornerSuite corner_suite(Width w) {
  const unsigned bits = bits_of(w);
  const std::uint64_t mask = width_mask(w);
  CornerSuite suite;
  suite.width = w;

  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  auto add = [&](u128 a, u128 b) {
    if (b == 0 || a > mask || b > mask) return;
    const auto key = std::make_pair(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
    if (seen.insert(key).second) suite.pairs.push_back({key.first, key.second});
  };

  std::vector<u128> divisors;
  if (w == Width::w64) {
    divisors = {1,
                2,
                3,
                (1u << 12) - 1,
                0xffffffffu,
                (u128{1} << 42) - 1,
                u128{1} << 42,
                (u128{1} << 42) + 1,
                (u128{1} << 53) + 1,
                (u128{1} << 63) - 1,
                u128{1} << 63,
                (u128{1} << 63) + 1,
                std::numeric_limits<std::uint64_t>::max()};
  } else {
    divisors = {1,          2,          3,          (1u << 12) - 1, (1u << 16) - 1, (1u << 24) + 1,
                (1u << 31) - 1, 1u << 31, (1u << 31) + 1, 0xffffffffu};
  }

  const u128 top = u128{1} << (bits - 1);
  for (const u128 b : divisors) {
    for (const u128 a : {u128{0}, u128{1}, b - 1, b, b + 1, 2 * b - 1, 2 * b, top, u128{mask}}) add(a, b);
    const u128 kmax = u128{mask} / b;
    for (const u128 k : {u128{1}, u128{2}, u128{3}, kmax - 1, kmax}) {
      if (k == 0 || k > kmax) continue;
      for (const u128 a : {k * b - 1, k * b, k * b + 1}) add(a, b);
    }
  }

  // Every operand within 2 of a power of two (including 2^bits itself).
  std::vector<u128> near;
  for (unsigned i = 0; i <= bits; ++i) {
    for (int d = -2; d <= 2; ++d) {
      const i128 v = static_cast<i128>(u128{1} << i) + d;
      if (v >= 0 && v <= static_cast<i128>(mask)) near.push_back(static_cast<u128>(v));
    }
  }
  std::sort(near.begin(), near.end());
  near.erase(std::unique(near.begin(), near.end()), near.end());
  for (const u128 b : near) {
    for (const u128 a : near) add(a, b);
  }
  return suite;
}

PairGenerator::PairGenerator(std::uint64_t seed, Width w, Signedness s) : rng_(seed), width_(w), signedness_(s) {}

std::uint64_t PairGenerator::near_power_of_two() {
  const unsigned bits = bits_of(width_);
  const unsigned k = static_cast<unsigned>(draw() % (bits + 1));
  const std::uint64_t base = k == 64 ? 0 : std::uint64_t{1} << k;
  return (base + draw_delta(rng_)) & width_mask(width_);
}

DivCase PairGenerator::next() {
  const unsigned bits = bits_of(width_);
  const std::uint64_t mask = width_mask(width_);
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  switch (index_++ % 4) {
    case 0:
      a = draw();
      b = draw();
      break;
    case 1:
      a = near_power_of_two();
      b = near_power_of_two();
      break;
    case 2: {
      b = std::max<std::uint64_t>((draw() & mask) >> (draw() % bits), 1);
      const std::uint64_t kmax = mask / b;
      std::uint64_t k = 0;
      switch (draw() % 3) {
        case 0: k = kmax == mask ? draw() & mask : draw() % (kmax + 1); break;
        case 1: k = std::min<std::uint64_t>(1 + draw() % 3, kmax); break;
        default: k = kmax - std::min<std::uint64_t>(draw() % 3, kmax); break;
      }
      a = b * k + draw_delta(rng_);
      break;
    }
    default:
      b = 1 + draw() % 4096;
      a = draw() | (std::uint64_t{1} << (bits - 1));
      break;
  }
  a &= mask;
  b &= mask;
  if (b == 0) b = 1;
  if (signedness_ == Signedness::signed_int) {
    if (draw() & 1) a = (std::uint64_t{0} - a) & mask;
    if (draw() & 1) b = (std::uint64_t{0} - b) & mask;
  }
  return {a, b};
}

std::vector<DivCase> r1_audit_pairs(std::uint64_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5f3759df9e3779b9ULL);
  std::vector<DivCase> out;
  out.reserve(count);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t b = 2;
    switch (i % 4) {
      case 0: b = 2 + rng() % (kSmallDivisorLimit - 1); break;
      case 1: {
        const unsigned k = 1 + static_cast<unsigned>(rng() % 42);
        b = (std::uint64_t{1} << k) + draw_delta(rng);
        break;
      }
      case 2: b = (rng() & 1) ? kSmallDivisorLimit - rng() % 16 : 2 + rng() % 16; break;
      default: b = rng() >> (22 + rng() % 42); break;
    }
    b = std::clamp<std::uint64_t>(b, 2, kSmallDivisorLimit);

    std::uint64_t a = 0;
    switch (rng() % 4) {
      case 0: a = rng(); break;
      case 1: a = kMax - rng() % 1024; break;
      case 2: {
        const std::uint64_t k = rng() % (kMax / b + 1);
        a = b * k + draw_delta(rng);
        break;
      }
      default: a = rng() | kTop64; break;
    }
    out.push_back({a, b});
  }
  return out;
}

// ---------------------------------------------------------------------------

void SuiteSummary::record(const CheckReport& report) {
  ++checked;
  switch (report.status) {
    case CheckStatus::pass: ++passed; break;
    case CheckStatus::rejected: ++rejected; break;
    default:
      ++failed;
      if (failures.size() < kKeptFailures) failures.push_back(report);
      break;
  }
}

SuiteSummary run_corner_suite(Width w, Signedness s, Variant v) {
  SuiteSummary sum;
  sum.name = std::string("corner/") + to_string(w) + "/" + to_string(s) + "/" + to_string(v);
  for (const DivCase& c : corner_suite(w).pairs) sum.record(check_pair(c.a, c.b, w, s, v));
  return sum;
}

SuiteSummary run_small_exhaustive(Width w, Signedness s, Variant v, std::uint32_t limit) {
  SuiteSummary sum;
  sum.name = std::string("exhaustive/") + to_string(w) + "/" + to_string(s) + "/" + to_string(v) + "/" +
             std::to_string(limit);
  const std::uint64_t mask = width_mask(w);
  const std::int64_t lo = s == Signedness::unsigned_int ? 0 : -static_cast<std::int64_t>(limit);
  const std::int64_t hi = limit;
  for (std::int64_t b = lo; b <= hi; ++b) {
    if (b == 0) continue;
    for (std::int64_t a = lo; a <= hi; ++a) {
      sum.record(check_pair(static_cast<std::uint64_t>(a) & mask, static_cast<std::uint64_t>(b) & mask, w, s, v));
    }
  }
  return sum;
}

SuiteSummary sweep_dividends32(std::uint32_t b, std::uint64_t first, std::uint64_t last) {
  SuiteSummary sum;
  sum.name = "sweep32/b=" + std::to_string(b);
  const Divisor32 d(b);
  last = std::min<std::uint64_t>(last, std::uint64_t{1} << 32);
  if (first >= last) return sum;
  std::uint64_t q = first / b;
  std::uint64_t r = first % b;
  for (std::uint64_t a = first; a < last; ++a) {
    const Div32Trace t = udivmod32_trace(static_cast<std::uint32_t>(a), d);
    const bool exact = t.final.quotient == q && t.final.remainder == r;
    const bool adjusted = (t.q0 == q || t.q0 == q + 1) && ((t.r0 < 0) == (t.q0 == q + 1));
    ++sum.checked;
    if (exact && adjusted) {
      ++sum.passed;
    } else {
      CheckReport rep = make_report(a, b, Width::w32, Signedness::unsigned_int, Variant::cmov);
      rep.expected = {q, r};
      rep.actual = {t.final.quotient, t.final.remainder};
      finish(rep, validate32(a, b, t, q));
      ++sum.failed;
      if (sum.failures.size() < kKeptFailures) sum.failures.push_back(rep);
    }
    if (++r == b) {
      r = 0;
      ++q;
    }
  }
  return sum;
}

FuzzSummary fuzz(std::uint64_t count, std::uint64_t seed, Width w, Signedness s, Variant v) {
  FuzzSummary sum;
  sum.count = count;
  sum.seed = seed;
  sum.width = w;
  sum.signedness = s;
  sum.variant = v;
  PairGenerator gen(seed, w, s);
  for (std::uint64_t i = 0; i < count; ++i) {
    const DivCase c = gen.next();
    const CheckReport rep = check_pair(c.a, c.b, w, s, v);
    ++sum.checked;
    if (rep.ok()) {
      ++sum.passed;
    } else {
      ++sum.failed;
      if (!sum.first_failure) {
        sum.first_failure = rep;
        sum.first_failure_index = i;
      }
    }

    const std::uint64_t ub = magnitude_of(c.b, w, s);
    const AuditRecord recip = audit_recip_error(ub);
    ++sum.recip_audits;
    if (!recip.pass) ++sum.recip_violations;
    if (recip.measured > sum.max_recip_error) sum.max_recip_error = recip.measured;

    if (w == Width::w64 && ub >= 2 && ub <= kSmallDivisorLimit) {
      const AuditRecord r1 = audit_r1_bound(magnitude_of(c.a, w, s), ub);
      ++sum.r1_audits;
      if (!r1.pass) ++sum.r1_violations;
      sum.max_abs_r1 = std::max(sum.max_abs_r1, static_cast<std::uint64_t>(r1.measured.mantissa));
    }
  }
  return sum;
}

AuditSummary run_audits(std::uint64_t count, std::uint64_t seed) {
  AuditSummary sum;
  sum.count = count;
  sum.seed = seed;

  auto recip = [&](std::uint64_t b) {
    const AuditRecord rec = audit_recip_error(b);
    ++sum.recip_checked;
    if (!rec.pass) {
      ++sum.recip_violations;
      if (sum.violations.size() < kKeptFailures) sum.violations.push_back(rec);
    }
    if (rec.measured > sum.max_recip_error) {
      sum.max_recip_error = rec.measured;
      sum.max_recip_error_b = b;
    }
  };

  for (std::uint64_t b = 1; b <= count; ++b) recip(b);
  for (unsigned k = 0; k < 64; ++k) {
    const std::uint64_t p = std::uint64_t{1} << k;
    if (p > 1) recip(p - 1);
    recip(p);
    recip(p + 1);
  }
  recip(std::numeric_limits<std::uint64_t>::max());
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t b = rng();
    if (i & 1) b >>= rng() % 64;
    recip(b == 0 ? 1 : b);
  }

  for (const DivCase& c : r1_audit_pairs(count, seed)) {
    const AuditRecord rec = audit_r1_bound(c.a, c.b);
    ++sum.r1_checked;
    if (!rec.pass) ++sum.r1_violations;
    if (!rec.within_sufficiency) ++sum.r1_sufficiency_violations;
    if ((!rec.pass || !rec.within_sufficiency) && sum.violations.size() < kKeptFailures) sum.violations.push_back(rec);
    const auto mag = static_cast<std::uint64_t>(rec.measured.mantissa);
    if (mag > sum.max_abs_r1 || sum.r1_checked == 1) {
      sum.max_abs_r1 = mag;
      sum.max_abs_r1_pair = c;
    }
  }
  return sum;
}

}  // namespace fpdiv::verify
