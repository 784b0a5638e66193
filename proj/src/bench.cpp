#include "fpdiv/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fpdiv/batch.hpp"
#include "fpdiv/divider.hpp"
#include "fpdiv/loop_baseline.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <x86intrin.h>
#define FPDIV_HAVE_TSC 1
#endif

#if defined(__linux__)
#include <sched.h>
#endif

namespace fpdiv::bench {

namespace {

template <class U>
struct Operands {
  std::vector<U> a;
  std::vector<U> b;
};

template <class U>
Operands<U> generate(const Workload& w) {
  Operands<U> ops;
  ops.a.resize(w.count);
  ops.b.resize(w.count);
  for (std::uint64_t k = 0; k < w.count; ++k) {
    ops.a[k] = static_cast<U>(w.a_at(k));
    ops.b[k] = static_cast<U>(w.b_at(k));
  }
  return ops;
}

// Stops the optimizer from treating `value` as known or unused.
template <class T>
inline void opaque(T& value) {
#if defined(__GNUC__) || defined(__clang__)
  asm volatile("" : "+r"(value) : : "memory");
#endif
}

inline std::uint64_t ticks() noexcept {
#if defined(FPDIV_HAVE_TSC)
  return __rdtsc();
#else
  return 0;
#endif
}

template <class U, class Div>
std::uint64_t sweep(const Operands<U>& ops, unsigned unroll, Div div) {
  const std::size_t n = ops.a.size();
  const U* a = ops.a.data();
  const U* b = ops.b.data();
  std::uint64_t sum = 0;
  std::size_t k = 0;
  if (unroll == 2) {
    for (; k + 2 <= n; k += 2) {
      // Two independent quotients per iteration.
      const U q0 = div(a[k], b[k]);
      const U q1 = div(a[k + 1], b[k + 1]);
      sum += q0;
      sum += q1;
    }
  }
  for (; k < n; ++k) sum += div(a[k], b[k]);
  return sum;
}

template <class Body>
BenchRecord time_runs(const Workload& w, Method m, unsigned reps, Body body) {
  BenchRecord rec;
  rec.workload = w.id;
  rec.width = w.width;
  rec.method = m;
  rec.unroll = w.unroll;
  rec.count = w.count;
  rec.reps = reps;

  for (unsigned i = 0; i < kWarmupRuns; ++i) {
    std::uint64_t sink = body();
    opaque(sink);
  }
  std::uint64_t best_ns = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t best_ticks = std::numeric_limits<std::uint64_t>::max();
  for (unsigned i = 0; i < reps; ++i) {
    const std::uint64_t t0 = ticks();
    const auto start = std::chrono::steady_clock::now();
    std::uint64_t sum = body();
    opaque(sum);
    const auto stop = std::chrono::steady_clock::now();
    const std::uint64_t t1 = ticks();
    const auto ns = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
    rec.samples_ns.push_back(ns);
    best_ns = std::min(best_ns, ns);
    best_ticks = std::min(best_ticks, t1 - t0);
    rec.checksum = sum;
  }
  if (reps == 0) {
    rec.checksum = body();
    best_ns = 0;
  }
  rec.best_ns = best_ns;
#if defined(FPDIV_HAVE_TSC)
  if (reps > 0) rec.best_ticks = best_ticks;
#endif
  return rec;
}

template <class U>
BenchRecord run_typed(const Workload& w, Method m, unsigned reps) {
  const Operands<U> ops = generate<U>(w);
  switch (m) {
    case Method::fp:
      return time_runs(w, m, reps, [&] {
        if constexpr (sizeof(U) == 4) {
          return sweep(ops, w.unroll, [](U a, U b) { return udivmod32(a, b).quotient; });
        } else {
          return sweep(ops, w.unroll, [](U a, U b) { return udivmod64(a, b).quotient; });
        }
      });
    case Method::loop:
      return time_runs(w, m, reps, [&] {
        if constexpr (sizeof(U) == 4) {
          return sweep(ops, w.unroll, [](U a, U b) { return loop_udivmod32(a, b).quotient; });
        } else {
          return sweep(ops, w.unroll, [](U a, U b) { return loop_udivmod64(a, b).quotient; });
        }
      });
    case Method::native:
      return time_runs(w, m, reps, [&] { return sweep(ops, w.unroll, [](U a, U b) { return static_cast<U>(a / b); }); });
  }
  throw std::invalid_argument("unknown bench method");
}

template <class U>
BenchRecord hoisted_typed(const Workload& w, unsigned reps) {
  const Operands<U> ops = generate<U>(w);
  U b = static_cast<U>(*w.fixed_divisor);
  opaque(b);
  BenchRecord rec = time_runs(w, Method::fp, reps, [&] {
    if constexpr (sizeof(U) == 4) {
      const Divisor32 d(b);
      return sweep(ops, w.unroll, [&d](U a, U) { return udivmod32(a, d).quotient; });
    } else {
      const Divisor64 d(b);
      return sweep(ops, w.unroll, [&d](U a, U) { return udivmod64(a, d).quotient; });
    }
  });
  rec.workload += "/hoisted";
  return rec;
}

template <class U>
BenchRecord batch_typed(const Workload& w, unsigned reps) {
  const Operands<U> ops = generate<U>(w);
  std::vector<U> q(w.count);
  std::vector<U> r(w.count);
  const Isa isa = best_isa();
  BenchRecord rec = time_runs(w, Method::fp, reps, [&] {
    if constexpr (sizeof(U) == 4) {
      udivmod32_batch(ops.a, ops.b, q, r, isa);
    } else {
      udivmod64_batch(ops.a, ops.b, q, r, isa);
    }
    std::uint64_t sum = 0;
    for (const U v : q) sum += v;
    return sum;
  });
  rec.workload += std::string("/batch-") + to_string(isa);
  return rec;
}

Workload make(std::string id, std::string description, unsigned width, std::uint64_t count, std::uint64_t a_base,
              std::uint64_t a_step, std::uint64_t b_base, std::uint64_t b_step, std::optional<std::uint64_t> fixed) {
  Workload w;
  w.id = std::move(id);
  w.description = std::move(description);
  w.width = width;
  w.count = count;
  w.a_base = a_base;
  w.a_step = a_step;
  w.b_base = b_base;
  w.b_step = b_step;
  w.fixed_divisor = fixed;
  return w;
}

std::string format_ns(std::optional<std::uint64_t> ns) {
  if (!ns) return "-";
  return std::to_string(*ns);
}

}  // namespace

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::fp: return "fp";
    case Method::loop: return "loop";
    case Method::native: return "native";
  }
  return "?";
}

std::vector<Workload> workload_catalog(std::uint64_t count) {
  const std::vector<Workload> base = {
      make("div64_varying", "64-bit, a = 2^40 + 222823k, b = 2^12 + 19k", 64, count, std::uint64_t{1} << 40, 222823,
           4096, 19, std::nullopt),
      make("div32_varying", "32-bit, a = 2^24 + 871k, b = 2^12 + 19k", 32, count, std::uint64_t{1} << 24, 871, 4096,
           19, std::nullopt),
      make("div64_fixed", "64-bit, a = 2^40 + 222823k, b = 74567", 64, count, std::uint64_t{1} << 40, 222823, 0, 0,
           kFixedDivisor),
      make("div32_fixed", "32-bit, a = 2^24 + 871k, b = 74567", 32, count, std::uint64_t{1} << 24, 871, 0, 0,
           kFixedDivisor),
  };
  std::vector<Workload> out;
  for (const Workload& w : base) {
    for (unsigned unroll : {1u, 2u}) {
      Workload v = w;
      v.unroll = unroll;
      out.push_back(v);
    }
  }
  return out;
}

BenchRecord run_bench(const Workload& w, Method m, unsigned reps) {
  return w.width == 32 ? run_typed<std::uint32_t>(w, m, reps) : run_typed<std::uint64_t>(w, m, reps);
}

BenchRecord hoist_divisor_variant(const Workload& w, unsigned reps) {
  if (!w.fixed_divisor) throw std::invalid_argument("hoist_divisor_variant: workload " + w.id + " has no fixed divisor");
  return w.width == 32 ? hoisted_typed<std::uint32_t>(w, reps) : hoisted_typed<std::uint64_t>(w, reps);
}

BenchRecord run_batch(const Workload& w, unsigned reps) {
  return w.width == 32 ? batch_typed<std::uint32_t>(w, reps) : batch_typed<std::uint64_t>(w, reps);
}

std::vector<BenchRecord> run_catalog(std::uint64_t count, unsigned reps) {
  std::vector<BenchRecord> out;
  for (const Workload& w : workload_catalog(count)) {
    for (Method m : {Method::loop, Method::fp, Method::native}) out.push_back(run_bench(w, m, reps));
    if (w.fixed_divisor) out.push_back(hoist_divisor_variant(w, reps));
    out.push_back(run_batch(w, reps));
  }
  return out;
}

std::string report_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const BenchRecord& r : records) {
    os << r.workload << ',' << r.width << ',' << to_string(r.method) << ',' << r.unroll << ',' << r.count << ','
       << r.reps << ',' << r.best_ns << ',' << r.checksum << '\n';
  }
  return os.str();
}

std::optional<double> fp_speedup(const std::vector<BenchRecord>& records, const std::string& workload, unsigned unroll) {
  std::optional<std::uint64_t> loop_ns;
  std::optional<std::uint64_t> fp_ns;
  for (const BenchRecord& r : records) {
    if (r.workload != workload || r.unroll != unroll) continue;
    if (r.method == Method::loop) loop_ns = r.best_ns;
    if (r.method == Method::fp) fp_ns = r.best_ns;
  }
  if (!loop_ns || !fp_ns || *fp_ns == 0) return std::nullopt;
  return static_cast<double>(*loop_ns) / static_cast<double>(*fp_ns);
}

std::string report_text(const std::vector<BenchRecord>& records) {
  // Preserve first-seen workload order.
  std::vector<std::string> order;
  std::map<std::string, std::map<std::pair<unsigned, Method>, std::uint64_t>> cells;
  for (const BenchRecord& r : records) {
    if (!cells.contains(r.workload)) order.push_back(r.workload);
    cells[r.workload][{r.unroll, r.method}] = r.best_ns;
  }

  std::ostringstream os;
  char line[160];
  for (const std::string& id : order) {
    const auto& c = cells[id];
    auto cell = [&](unsigned unroll, Method m) -> std::optional<std::uint64_t> {
      const auto it = c.find({unroll, m});
      if (it == c.end()) return std::nullopt;
      return it->second;
    };
    os << id << " (best ns per sweep)\n";
    std::snprintf(line, sizeof line, "  %-30s %12s %16s %12s %10s\n", "Method", "Loop", "Floating-point", "Native",
                  "loop/fp");
    os << line;
    for (unsigned unroll : {1u, 2u}) {
      const auto loop = cell(unroll, Method::loop);
      const auto fp = cell(unroll, Method::fp);
      const auto native = cell(unroll, Method::native);
      if (!loop && !fp && !native) continue;
      std::string speed = "-";
      if (loop && fp && *fp != 0) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2fx", static_cast<double>(*loop) / static_cast<double>(*fp));
        speed = buf;
      }
      std::snprintf(line, sizeof line, "  %-30s %12s %16s %12s %10s\n",
                    unroll == 1 ? "One quotient per iteration" : "Two quotients per iteration", format_ns(loop).c_str(),
                    format_ns(fp).c_str(), format_ns(native).c_str(), speed.c_str());
      os << line;
    }
    os << '\n';
  }
  return os.str();
}

bool pin_to_one_cpu() noexcept {
#if defined(__linux__)
  cpu_set_t current;
  CPU_ZERO(&current);
  if (sched_getaffinity(0, sizeof current, &current) != 0) return false;
  for (int cpu = 0; cpu < CPU_SETSIZE; ++cpu) {
    if (CPU_ISSET(cpu, &current)) {
      cpu_set_t one;
      CPU_ZERO(&one);
      CPU_SET(cpu, &one);
      return sched_setaffinity(0, sizeof one, &one) == 0;
    }
  }
  return false;
#else
  return false;
#endif
}

}  // namespace fpdiv::bench
