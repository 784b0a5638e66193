#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "fpdiv/bench.hpp"
#include "fpdiv/divider.hpp"
#include "fpdiv/verify.hpp"

namespace fpdiv::cli {

namespace {

using nlohmann::ordered_json;
using verify::Signedness;
using verify::Variant;
using verify::Width;

enum class Format { text, json, csv };

struct RunConfig {
  std::string subcommand;
  unsigned width = 64;
  bool is_signed = false;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> count;  // subcommand-specific default when unset
  Format format = Format::text;
  std::string out_path;                // empty: standard output
  Variant variant = Variant::cmov;
  unsigned reps = bench::kDefaultReps;
  std::string a_text;
  std::string b_text;

  Width w() const { return width == 32 ? Width::w32 : Width::w64; }
  Signedness s() const { return is_signed ? Signedness::signed_int : Signedness::unsigned_int; }
};

constexpr std::uint64_t kDefaultCount = 1'000'000;
constexpr std::uint32_t kExhaustiveLimit = 1u << 12;

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016" PRIx64, v);
  return buf;
}

std::string fp_text(Binary64 x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g (%s)", x.value(), hex(x.bits).c_str());
  return buf;
}

// Width-aware rendering of a bit pattern as a decimal integer.
std::string int_text(std::uint64_t bits, Width w, Signedness s) {
  if (s == Signedness::unsigned_int) return std::to_string(bits & verify::width_mask(w));
  if (w == Width::w32) return std::to_string(static_cast<std::int32_t>(static_cast<std::uint32_t>(bits)));
  return std::to_string(static_cast<std::int64_t>(bits));
}

ordered_json dyadic_json(const verify::Dyadic& d) {
  return {{"exact", d.to_string()}, {"approx", d.to_double()}};
}

ordered_json report_json(const verify::CheckReport& r) {
  return {{"a", int_text(r.operands.a, r.width, r.signedness)},
          {"b", int_text(r.operands.b, r.width, r.signedness)},
          {"status", verify::to_string(r.status)},
          {"expected_q", int_text(r.expected.quotient, r.width, r.signedness)},
          {"expected_r", int_text(r.expected.remainder, r.width, r.signedness)},
          {"actual_q", int_text(r.actual.quotient, r.width, r.signedness)},
          {"actual_r", int_text(r.actual.remainder, r.width, r.signedness)},
          {"detail", r.detail}};
}

std::string report_line(const verify::CheckReport& r) {
  return std::string("fail a=") + int_text(r.operands.a, r.width, r.signedness) +
         " b=" + int_text(r.operands.b, r.width, r.signedness) + " status=" + verify::to_string(r.status) +
         " detail=\"" + r.detail + "\"";
}

ordered_json config_json(const RunConfig& c) {
  return {{"subcommand", c.subcommand},
          {"width", c.width},
          {"signedness", verify::to_string(c.s())},
          {"variant", verify::to_string(c.variant)},
          {"seed", c.seed}};
}

// --- verify ----------------------------------------------------------------

int cmd_verify(const RunConfig& c, std::ostream& out) {
  std::vector<verify::SuiteSummary> suites;
  suites.push_back(verify::run_corner_suite(c.w(), c.s(), c.variant));
  const std::uint32_t limit = c.is_signed ? kExhaustiveLimit / 2 : kExhaustiveLimit;
  suites.push_back(verify::run_small_exhaustive(c.w(), c.s(), c.variant, limit));

  std::uint64_t failures = 0;
  std::uint64_t checked = 0;
  for (const auto& s : suites) {
    failures += s.failed;
    checked += s.checked;
  }

  switch (c.format) {
    case Format::text:
      out << "verify width=" << c.width << " signedness=" << verify::to_string(c.s())
          << " variant=" << verify::to_string(c.variant) << '\n';
      for (const auto& s : suites) {
        out << s.name << ": checked=" << s.checked << " passed=" << s.passed << " failed=" << s.failed
            << " rejected=" << s.rejected << '\n';
        for (const auto& f : s.failures) out << report_line(f) << '\n';
      }
      out << "total checked=" << checked << '\n' << failures << " failures\n";
      break;
    case Format::json: {
      ordered_json j = config_json(c);
      j.erase("seed");
      ordered_json arr = ordered_json::array();
      for (const auto& s : suites) {
        ordered_json fj = ordered_json::array();
        for (const auto& f : s.failures) fj.push_back(report_json(f));
        arr.push_back({{"name", s.name},
                       {"checked", s.checked},
                       {"passed", s.passed},
                       {"failed", s.failed},
                       {"rejected", s.rejected},
                       {"failures", fj}});
      }
      j["suites"] = arr;
      j["checked"] = checked;
      j["failures"] = failures;
      out << j.dump(2) << '\n';
      break;
    }
    case Format::csv:
      out << "suite,checked,passed,failed,rejected\n";
      for (const auto& s : suites) {
        out << s.name << ',' << s.checked << ',' << s.passed << ',' << s.failed << ',' << s.rejected << '\n';
      }
      break;
  }
  return failures == 0 ? kExitOk : kExitFailure;
}

// --- fuzz ------------------------------------------------------------------

int cmd_fuzz(const RunConfig& c, std::ostream& out) {
  const verify::FuzzSummary f = verify::fuzz(c.count.value_or(kDefaultCount), c.seed, c.w(), c.s(), c.variant);
  switch (c.format) {
    case Format::text:
      out << "fuzz width=" << c.width << " signedness=" << verify::to_string(c.s())
          << " variant=" << verify::to_string(c.variant) << " seed=" << f.seed << " count=" << f.count << '\n'
          << "checked=" << f.checked << " passed=" << f.passed << " failed=" << f.failed << '\n'
          << "recip_audits=" << f.recip_audits << " recip_violations=" << f.recip_violations
          << " max_recip_error=" << f.max_recip_error.to_string() << '\n'
          << "r1_audits=" << f.r1_audits << " r1_violations=" << f.r1_violations << " max_abs_r1=" << f.max_abs_r1
          << '\n';
      if (f.first_failure) out << "first_failure index=" << *f.first_failure_index << ' ' << report_line(*f.first_failure) << '\n';
      out << (f.failed + f.recip_violations + f.r1_violations) << " failures\n";
      break;
    case Format::json: {
      ordered_json j = config_json(c);
      j["count"] = f.count;
      j["checked"] = f.checked;
      j["passed"] = f.passed;
      j["failed"] = f.failed;
      j["recip_audits"] = f.recip_audits;
      j["recip_violations"] = f.recip_violations;
      j["max_recip_error"] = dyadic_json(f.max_recip_error);
      j["r1_audits"] = f.r1_audits;
      j["r1_violations"] = f.r1_violations;
      j["max_abs_r1"] = f.max_abs_r1;
      if (f.first_failure) {
        j["first_failure_index"] = *f.first_failure_index;
        j["first_failure"] = report_json(*f.first_failure);
      } else {
        j["first_failure"] = nullptr;
      }
      out << j.dump(2) << '\n';
      break;
    }
    case Format::csv:
      out << "width,signedness,variant,seed,count,checked,passed,failed,recip_audits,recip_violations,r1_audits,"
             "r1_violations,max_abs_r1\n"
          << c.width << ',' << verify::to_string(c.s()) << ',' << verify::to_string(c.variant) << ',' << f.seed << ','
          << f.count << ',' << f.checked << ',' << f.passed << ',' << f.failed << ',' << f.recip_audits << ','
          << f.recip_violations << ',' << f.r1_audits << ',' << f.r1_violations << ',' << f.max_abs_r1 << '\n';
      break;
  }
  return f.ok() ? kExitOk : kExitFailure;
}

// --- audit -----------------------------------------------------------------

int cmd_audit(const RunConfig& c, std::ostream& out) {
  const verify::AuditSummary a = verify::run_audits(c.count.value_or(kDefaultCount), c.seed);
  const verify::Dyadic bound = verify::kRecipErrorBound;
  const double ratio = a.max_recip_error.to_double() / bound.to_double();
  switch (c.format) {
    case Format::text:
      out << "audit seed=" << a.seed << " count=" << a.count << '\n'
          << "recip: checked=" << a.recip_checked << " violations=" << a.recip_violations
          << " max_error=" << a.max_recip_error.to_string() << " at b=" << a.max_recip_error_b
          << " bound=" << bound.to_string() << " max/bound=" << ratio << '\n'
          << "r1: checked=" << a.r1_checked << " violations=" << a.r1_violations
          << " sufficiency_violations=" << a.r1_sufficiency_violations << " max_abs_r1=" << a.max_abs_r1
          << " at a=" << a.max_abs_r1_pair.a << " b=" << a.max_abs_r1_pair.b << " bound=" << verify::kR1Bound << '\n';
      for (const auto& v : a.violations) {
        out << "violation kind=" << verify::to_string(v.kind) << " b=" << v.b;
        if (v.a) out << " a=" << *v.a;
        out << " measured=" << v.measured.to_string() << " bound=" << v.bound.to_string() << '\n';
      }
      out << (a.recip_violations + a.r1_violations + a.r1_sufficiency_violations) << " failures\n";
      break;
    case Format::json: {
      ordered_json j = {{"subcommand", c.subcommand}, {"seed", a.seed}, {"count", a.count}};
      j["recip"] = {{"checked", a.recip_checked},
                    {"violations", a.recip_violations},
                    {"max_error", dyadic_json(a.max_recip_error)},
                    {"max_error_b", a.max_recip_error_b},
                    {"bound", dyadic_json(bound)}};
      j["r1"] = {{"checked", a.r1_checked},
                 {"violations", a.r1_violations},
                 {"sufficiency_violations", a.r1_sufficiency_violations},
                 {"max_abs_r1", a.max_abs_r1},
                 {"max_abs_r1_a", a.max_abs_r1_pair.a},
                 {"max_abs_r1_b", a.max_abs_r1_pair.b},
                 {"bound", verify::kR1Bound},
                 {"sufficient", verify::kR1Sufficient}};
      ordered_json vj = ordered_json::array();
      for (const auto& v : a.violations) {
        ordered_json e = {{"kind", verify::to_string(v.kind)}, {"b", v.b}, {"measured", dyadic_json(v.measured)},
                          {"bound", dyadic_json(v.bound)}, {"pass", v.pass}};
        if (v.a) e["a"] = *v.a;
        vj.push_back(e);
      }
      j["violations"] = vj;
      out << j.dump(2) << '\n';
      break;
    }
    case Format::csv:
      out << "audit,checked,violations,max_measured,bound\n"
          << "recip_error," << a.recip_checked << ',' << a.recip_violations << ',' << a.max_recip_error.to_string()
          << ',' << bound.to_string() << '\n'
          << "r1_bound," << a.r1_checked << ',' << a.r1_violations << ',' << a.max_abs_r1 << ',' << verify::kR1Bound
          << '\n';
      break;
  }
  return a.ok() ? kExitOk : kExitFailure;
}

// --- bench -----------------------------------------------------------------

int cmd_bench(const RunConfig& c, std::ostream& out) {
  bench::pin_to_one_cpu();
  const auto records = bench::run_catalog(c.count.value_or(bench::kDefaultCount), c.reps);

  // Checksums must agree across methods on each workload.
  bool consistent = true;
  for (const auto& r : records) {
    for (const auto& o : records) {
      const std::string base_r = r.workload.substr(0, r.workload.find('/'));
      const std::string base_o = o.workload.substr(0, o.workload.find('/'));
      if (base_r == base_o && r.checksum != o.checksum) consistent = false;
    }
  }

  switch (c.format) {
    case Format::text:
      out << bench::report_text(records);
      for (const auto& r : records) {
        if (r.workload.find('/') == std::string::npos) continue;
        out << r.workload << " unroll=" << r.unroll << " fp best_ns=" << r.best_ns << '\n';
      }
      out << "checksums " << (consistent ? "consistent" : "INCONSISTENT") << '\n';
      break;
    case Format::csv: out << bench::report_csv(records); break;
    case Format::json: {
      ordered_json arr = ordered_json::array();
      for (const auto& r : records) {
        ordered_json e = {{"workload", r.workload}, {"width", r.width},     {"method", bench::to_string(r.method)},
                          {"unroll", r.unroll},     {"count", r.count},     {"reps", r.reps},
                          {"best_ns", r.best_ns},   {"checksum", r.checksum}};
        if (r.best_ticks) e["best_ticks"] = *r.best_ticks;
        arr.push_back(e);
      }
      out << ordered_json{{"subcommand", "bench"}, {"checksums_consistent", consistent}, {"records", arr}}.dump(2)
          << '\n';
      break;
    }
  }
  return consistent ? kExitOk : kExitFailure;
}

// --- divide ----------------------------------------------------------------

std::optional<std::uint64_t> parse_operand(const std::string& text, Width w, Signedness s) {
  try {
    std::size_t used = 0;
    if (s == Signedness::signed_int) {
      const long long v = std::stoll(text, &used, 0);
      if (used != text.size()) return std::nullopt;
      if (w == Width::w32 && (v < INT32_MIN || v > INT32_MAX)) return std::nullopt;
      return static_cast<std::uint64_t>(v) & verify::width_mask(w);
    }
    if (!text.empty() && text[0] == '-') return std::nullopt;
    const unsigned long long v = std::stoull(text, &used, 0);
    if (used != text.size()) return std::nullopt;
    if (v > verify::width_mask(w)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

int cmd_divide(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Width w = c.w();
  const Signedness s = c.s();
  const auto a = parse_operand(c.a_text, w, s);
  const auto b = parse_operand(c.b_text, w, s);
  if (!a || !b) {
    err << "divide: operands must be " << (c.is_signed ? "signed" : "unsigned") << " " << c.width
        << "-bit integers\n";
    return kExitUsage;
  }
  if (*b == 0) {
    err << "divide: division by zero\n";
    return kExitUsage;
  }

  verify::Outcome result;
  if (w == Width::w32 && s == Signedness::unsigned_int) {
    const auto r = udivmod32(static_cast<std::uint32_t>(*a), static_cast<std::uint32_t>(*b));
    result = {r.quotient, r.remainder};
  } else if (w == Width::w32) {
    const auto r = sdivmod32(static_cast<std::int32_t>(*a), static_cast<std::int32_t>(*b));
    result = {static_cast<std::uint32_t>(r.quotient), static_cast<std::uint32_t>(r.remainder)};
  } else if (s == Signedness::signed_int) {
    const auto r = sdivmod64(static_cast<std::int64_t>(*a), static_cast<std::int64_t>(*b));
    result = {static_cast<std::uint64_t>(r.quotient), static_cast<std::uint64_t>(r.remainder)};
  } else if (c.variant == Variant::branching) {
    const auto r = udivmod64_branching(*a, *b);
    result = {r.quotient, r.remainder};
  } else {
    const auto r = udivmod64(*a, *b);
    result = {r.quotient, r.remainder};
  }

  // The trace is of the unsigned division the signed forms reduce to.
  auto magnitude = [&](std::uint64_t x) {
    if (s == Signedness::unsigned_int) return x;
    const std::int64_t v = w == Width::w32 ? static_cast<std::int32_t>(static_cast<std::uint32_t>(x))
                                           : static_cast<std::int64_t>(x);
    return v < 0 ? (std::uint64_t{0} - static_cast<std::uint64_t>(v)) & verify::width_mask(w)
                 : static_cast<std::uint64_t>(v);
  };
  const std::uint64_t ua = magnitude(*a);
  const std::uint64_t ub = magnitude(*b);
  const ReciprocalApprox rc = approx_inv(ub);

  ordered_json trace;
  if (w == Width::w32) {
    const Div32Trace t = udivmod32_trace(static_cast<std::uint32_t>(ua), static_cast<std::uint32_t>(ub));
    trace = {{"qd", fp_text(t.qd)}, {"q0", t.q0}, {"r0", t.r0}};
  } else {
    const Div64Trace t = udivmod64_trace(ua, ub);
    trace = {{"q1", t.q1},        {"r1", t.r1}, {"q3d", fp_text(t.q3d)},
             {"q2", t.q2},        {"r2", t.r2}, {"q0", t.q0},
             {"special_case", to_string(t.special_case)}};
  }
  const ordered_json recip = {{"bd", fp_text(rc.bd)},
                              {"invb0", fp_text(rc.invb0)},
                              {"alpha", fp_text(rc.alpha)},
                              {"invb", fp_text(rc.invb)}};

  const std::string q_text = int_text(result.quotient, w, s);
  const std::string r_text = int_text(result.remainder, w, s);
  switch (c.format) {
    case Format::text:
      out << "q=" << q_text << " r=" << r_text << '\n';
      out << "width=" << c.width << " signedness=" << verify::to_string(s) << " variant=" << verify::to_string(c.variant)
          << '\n';
      for (const auto& [k, v] : recip.items()) out << "  " << k << " = " << v.get<std::string>() << '\n';
      for (const auto& [k, v] : trace.items()) {
        out << "  " << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
      }
      break;
    case Format::json: {
      ordered_json j = config_json(c);
      j.erase("seed");
      j["a"] = int_text(*a, w, s);
      j["b"] = int_text(*b, w, s);
      j["quotient"] = q_text;
      j["remainder"] = r_text;
      j["reciprocal"] = recip;
      j["trace"] = trace;
      out << j.dump(2) << '\n';
      break;
    }
    case Format::csv:
      out << "a,b,quotient,remainder\n" << int_text(*a, w, s) << ',' << int_text(*b, w, s) << ',' << q_text << ','
          << r_text << '\n';
      break;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Integer division through IEEE-754 floating point: verify, fuzz, audit, bench, divide", "fpdiv"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string format = "text";
  std::string variant = "cmov";
  std::uint64_t count = 0;

  app.add_option("--width", cfg.width, "Operand width")->check(CLI::IsMember({32u, 64u}));
  app.add_flag("--signed", cfg.is_signed, "Signed (C semantics) division");
  app.add_option("--seed", cfg.seed, "Seed for fuzzing and random audits");
  auto* count_opt = app.add_option("--count", count, "Number of pairs / divisors / workload iterations");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", cfg.out_path, "Write output to this file instead of standard output");
  app.add_option("--variant", variant, "64-bit algorithm form")->check(CLI::IsMember({"cmov", "branching"}));

  app.add_subcommand("verify", "Corner suite plus exhaustive small-operand sweep");
  app.add_subcommand("fuzz", "Seeded boundary-biased differential fuzzing");
  app.add_subcommand("audit", "Exact reciprocal-error and r1-magnitude audits");
  auto* bench_cmd = app.add_subcommand("bench", "Time the workload catalog");
  bench_cmd->add_option("--reps", cfg.reps, "Timed repetitions per measurement")->check(CLI::PositiveNumber);
  auto* divide_cmd = app.add_subcommand("divide", "Divide a by b and print the algorithm trace");
  divide_cmd->add_option("a", cfg.a_text, "Dividend")->required();
  divide_cmd->add_option("b", cfg.b_text, "Divisor")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (count_opt->count() > 0) cfg.count = count;
  cfg.format = format == "json" ? Format::json : format == "csv" ? Format::csv : Format::text;
  cfg.variant = variant == "branching" ? Variant::branching : Variant::cmov;

  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) {
      err << "cannot open " << cfg.out_path << " for writing\n";
      return kExitUsage;
    }
    sink = &file;
  }

  if (cfg.subcommand == "verify") return cmd_verify(cfg, *sink);
  if (cfg.subcommand == "fuzz") return cmd_fuzz(cfg, *sink);
  if (cfg.subcommand == "audit") return cmd_audit(cfg, *sink);
  if (cfg.subcommand == "bench") return cmd_bench(cfg, *sink);
  return cmd_divide(cfg, *sink, err);
}

}  // namespace fpdiv::cli
