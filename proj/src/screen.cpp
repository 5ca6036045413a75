#include "p2ode/screen.hpp"

#include "p2ode/simd/kernels.hpp"

#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace p2ode {

std::string to_string(PrimeStatus s) {
  switch (s) {
    case PrimeStatus::Ok:
      return "ok";
    case PrimeStatus::BadReduction:
      return "bad_reduction";
    case PrimeStatus::BudgetExceeded:
      return "budget_exceeded";
  }
  return "unknown";
}

std::vector<Monomial> curve_monomials(int e) {
  std::vector<Monomial> out;
  for (int i0 = e; i0 >= 0; --i0)
    for (int i1 = e - i0; i1 >= 0; --i1) {
      Monomial m;
      m.exp[kX0] = static_cast<std::uint16_t>(i0);
      m.exp[kX1] = static_cast<std::uint16_t>(i1);
      m.exp[kX2] = static_cast<std::uint16_t>(e - i0 - i1);
      out.push_back(m);
    }
  return out;
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

std::uint64_t sat_pow(std::uint64_t p, std::size_t n) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < n; ++i) r = sat_mul(r, p);
  return r;
}

using u32 = std::uint32_t;

struct KernelPoly {
  std::vector<u32> coeffs;
  std::vector<std::uint8_t> exps;
  unsigned nvars = 0;
};

KernelPoly to_kernel(const FpPoly& f) {
  KernelPoly k;
  k.nvars = static_cast<unsigned>(f.nvars());
  for (const auto& [m, c] : f.terms()) {
    k.coeffs.push_back(static_cast<u32>(c));
    for (unsigned v = 0; v < k.nvars; ++v) {
      if (m.exp[v] > 255) throw DomainError("exponent too large for the evaluation kernel");
      k.exps.push_back(static_cast<std::uint8_t>(m.exp[v]));
    }
  }
  return k;
}

// P^2(F_p): (1, a, b) for all a, b first, then (0, 1, b), then (0, 0, 1).
std::vector<std::array<u32, 3>> projective_points(std::uint64_t p) {
  std::vector<std::array<u32, 3>> pts;
  for (u32 a = 0; a < p; ++a)
    for (u32 b = 0; b < p; ++b) pts.push_back({1, a, b});
  for (u32 b = 0; b < p; ++b) pts.push_back({0, 1, b});
  pts.push_back({0, 0, 1});
  return pts;
}

u32 powmod32(u32 x, unsigned e, u32 p) {
  std::uint64_t r = 1 % p, b = x;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<u32>(r);
}

// Values at every point of each degree-e monomial and of its first and
// second derivatives (second derivatives only in X1, X2).
struct DegreeTables {
  std::size_t N = 0, npts = 0;
  std::vector<u32> val;
  std::array<std::vector<u32>, 3> grad;
  std::array<std::vector<u32>, 3> hess;  // d11, d12, d22
};

DegreeTables make_tables(int e, const std::vector<std::array<u32, 3>>& pts, u32 p) {
  auto mons = curve_monomials(e);
  DegreeTables t;
  t.N = mons.size();
  t.npts = pts.size();
  t.val.assign(t.N * t.npts, 0);
  for (auto& g : t.grad) g.assign(t.N * t.npts, 0);
  for (auto& h : t.hess) h.assign(t.N * t.npts, 0);
  auto value = [&](std::array<int, 3> ex, std::uint64_t factor, const std::array<u32, 3>& pt) -> u32 {
    if (factor % p == 0) return 0;
    std::uint64_t v = factor % p;
    for (int i = 0; i < 3; ++i) {
      if (ex[i] < 0) return 0;
      v = v * powmod32(pt[i], static_cast<unsigned>(ex[i]), p) % p;
    }
    return static_cast<u32>(v);
  };
  for (std::size_t m = 0; m < t.N; ++m) {
    std::array<int, 3> ex{mons[m].exp[0], mons[m].exp[1], mons[m].exp[2]};
    for (std::size_t i = 0; i < t.npts; ++i) {
      const auto& pt = pts[i];
      const std::size_t at = m * t.npts + i;
      t.val[at] = value(ex, 1, pt);
      for (int v = 0; v < 3; ++v) {
        auto d = ex;
        d[v] -= 1;
        t.grad[v][at] = value(d, static_cast<std::uint64_t>(ex[v]), pt);
      }
      const int pairs[3][2] = {{1, 1}, {1, 2}, {2, 2}};
      for (int h = 0; h < 3; ++h) {
        auto d = ex;
        int a = pairs[h][0], b = pairs[h][1];
        std::uint64_t f = static_cast<std::uint64_t>(ex[a]);
        d[a] -= 1;
        f *= static_cast<std::uint64_t>(std::max(d[b], 0));
        d[b] -= 1;
        t.hess[h][at] = value(d, f, pt);
      }
    }
  }
  return t;
}

// Accumulates sum_t c_t * table_row_t into out.
void combine(const simd::KernelTable& k, const std::vector<u32>& table, const std::vector<u32>& c, std::size_t npts,
             u32 p, std::vector<u32>& out) {
  std::fill(out.begin(), out.end(), 0);
  for (std::size_t t = 0; t < c.size(); ++t)
    if (c[t]) k.axpy(out.data(), table.data() + t * npts, npts, c[t], p);
}

struct Task {
  int degree;
  std::size_t lead;
  std::uint64_t lo, hi;  // tail index range
};

struct TaskResult {
  std::uint64_t enumerated = 0, exact = 0, skipped = 0;
  std::vector<FoundCurve> found;
};

enum class Mode { Web, Ode };

struct ScreenContext {
  Mode mode;
  const PrimeField* F;
  u32 p;
  std::vector<std::array<u32, 3>> pts;
  std::vector<DegreeTables> tables;  // index e - 1
  KernelPoly filter;                  // S(X, A) or the chart expression Phi
  std::optional<PlaneWeb<PrimeField>> web;
  std::optional<SecondOrderODE<PrimeField>> ode;
  std::vector<u32> inverse;
};

bool exact_check(const ScreenContext& ctx, const FpPoly& G) {
  if (ctx.mode == Mode::Web) return is_invariant_curve_web(*ctx.web, G).invariant;
  return is_solution_ode(*ctx.ode, G);
}

TaskResult run_task(const ScreenContext& ctx, const Task& task) {
  const auto& kern = simd::active_kernels();
  const DegreeTables& T = ctx.tables[task.degree - 1];
  const std::size_t N = T.N, npts = T.npts;
  const u32 p = ctx.p;
  TaskResult res;
  std::vector<u32> c(N, 0);
  std::vector<u32> gval(npts), g1(npts), g2(npts), g0(npts), h11(npts), h12(npts), h22(npts);
  std::vector<u32> coords, out;
  std::vector<std::size_t> zeros;

  // Tail digits, least significant last.
  c[task.lead] = 1;
  std::uint64_t idx = task.lo;
  for (std::size_t pos = N; pos-- > task.lead + 1;) {
    c[pos] = static_cast<u32>(idx % p);
    idx /= p;
  }
  for (std::uint64_t n = task.lo; n < task.hi; ++n) {
    if (n != task.lo) {
      for (std::size_t pos = N; pos-- > task.lead + 1;) {
        if (++c[pos] < p) break;
        c[pos] = 0;
      }
    }
    ++res.enumerated;
    combine(kern, T.val, c, npts, p, gval);
    zeros.clear();
    for (std::size_t i = 0; i < npts; ++i)
      if (gval[i] == 0) zeros.push_back(i);
    bool pass = true;
    if (!zeros.empty()) {
      if (ctx.mode == Mode::Web) {
        combine(kern, T.grad[0], c, npts, p, g0);
        combine(kern, T.grad[1], c, npts, p, g1);
        combine(kern, T.grad[2], c, npts, p, g2);
        const std::size_t nz = zeros.size();
        coords.assign(6 * nz, 0);
        for (std::size_t j = 0; j < nz; ++j) {
          const auto& pt = ctx.pts[zeros[j]];
          for (int v = 0; v < 3; ++v) coords[v * nz + j] = pt[v];
          coords[3 * nz + j] = g0[zeros[j]];
          coords[4 * nz + j] = g1[zeros[j]];
          coords[5 * nz + j] = g2[zeros[j]];
        }
        out.assign(nz, 0);
        kern.eval(ctx.filter.coeffs.data(), ctx.filter.exps.data(), ctx.filter.coeffs.size(), 6, coords.data(), nz, p,
                  out.data());
        for (auto v : out) pass = pass && v == 0;
      } else {
        combine(kern, T.grad[1], c, npts, p, g1);
        combine(kern, T.grad[2], c, npts, p, g2);
        combine(kern, T.hess[0], c, npts, p, h11);
        combine(kern, T.hess[1], c, npts, p, h12);
        combine(kern, T.hess[2], c, npts, p, h22);
        std::vector<std::size_t> use;
        for (auto i : zeros)
          if (ctx.pts[i][0] == 1 && g2[i] != 0) use.push_back(i);
        const std::size_t nz = use.size();
        if (nz) {
          coords.assign(8 * nz, 0);
          for (std::size_t j = 0; j < nz; ++j) {
            const std::size_t i = use[j];
            const u32 slope = static_cast<u32>((static_cast<std::uint64_t>(p - g1[i]) % p) * ctx.inverse[g2[i]] % p);
            const u32 vals[8] = {ctx.pts[i][1], ctx.pts[i][2], slope, g1[i], g2[i], h11[i], h12[i], h22[i]};
            for (int v = 0; v < 8; ++v) coords[v * nz + j] = vals[v];
          }
          out.assign(nz, 0);
          kern.eval(ctx.filter.coeffs.data(), ctx.filter.exps.data(), ctx.filter.coeffs.size(), 8, coords.data(), nz,
                    p, out.data());
          for (auto v : out) pass = pass && v == 0;
        }
      }
    }
    if (!pass) continue;
    std::vector<std::uint64_t> cv(c.begin(), c.end());
    FpPoly G = curve_from_coeffs(*ctx.F, task.degree, cv);
    if (!is_squarefree_curve(G)) {
      ++res.skipped;
      continue;
    }
    ++res.exact;
    if (exact_check(ctx, G)) res.found.push_back({task.degree, std::move(cv), G.to_string()});
  }
  return res;
}

PrimeScreen run_screen(ScreenContext& ctx, const ScreenOptions& opt) {
  PrimeScreen out;
  out.prime = ctx.p;
  const std::uint64_t p = ctx.p;
  if (opt.r < 1) throw DomainError("degree bound r must be at least 1");
  if (p < 3) throw DomainError("screening needs an odd prime");
  if (static_cast<std::uint64_t>(opt.r) >= p) {
    out.status = PrimeStatus::BudgetExceeded;
    out.note = "degree bound must stay below the characteristic";
    return out;
  }
  if (p >= simd::kMaxKernelModulus || curve_count(p, opt.r) > opt.budget) {
    out.status = PrimeStatus::BudgetExceeded;
    out.note = std::to_string(curve_count(p, opt.r)) + " curves exceed the budget of " + std::to_string(opt.budget);
    return out;
  }
  ctx.pts = projective_points(p);
  ctx.inverse.assign(p, 0);
  for (u32 a = 1; a < p; ++a) ctx.inverse[a] = powmod32(a, static_cast<unsigned>(p - 2), static_cast<u32>(p));
  for (int e = 1; e <= opt.r; ++e) ctx.tables.push_back(make_tables(e, ctx.pts, static_cast<u32>(p)));

  constexpr std::uint64_t kBlock = 4096;
  std::vector<Task> tasks;
  for (int e = 1; e <= opt.r; ++e) {
    const std::size_t N = ctx.tables[e - 1].N;
    for (std::size_t j = 0; j < N; ++j) {
      const std::uint64_t count = sat_pow(p, N - 1 - j);
      for (std::uint64_t lo = 0; lo < count; lo += kBlock) tasks.push_back({e, j, lo, std::min(count, lo + kBlock)});
    }
  }
  std::vector<TaskResult> results(tasks.size());
  unsigned nthreads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, tasks.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        results[i] = run_task(ctx, tasks[i]);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = tasks.size();
        return;
      }
    }
  };
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  for (auto& r : results) {
    out.enumerated += r.enumerated;
    out.exact_checks += r.exact;
    out.skipped_nonreduced += r.skipped;
    for (auto& f : r.found) out.found.push_back(std::move(f));
  }
  return out;
}

const VarNames& filter_vars() {
  static const VarNames v = make_vars({"x", "y", "p", "fx", "fy", "fxx", "fxy", "fyy"});
  return v;
}

}  // namespace

std::uint64_t curve_count(std::uint64_t p, int r) {
  std::uint64_t total = 0;
  for (int e = 1; e <= r; ++e) {
    const std::size_t N = static_cast<std::size_t>((e + 1) * (e + 2) / 2);
    for (std::size_t j = 0; j < N; ++j) total = sat_add(total, sat_pow(p, N - 1 - j));
  }
  return total;
}

FpPoly curve_from_coeffs(const PrimeField& F, int e, const std::vector<std::uint64_t>& coeffs) {
  auto mons = curve_monomials(e);
  if (coeffs.size() != mons.size()) throw DomainError("coefficient vector has the wrong length");
  FpPoly g(F, incidence_vars());
  for (std::size_t i = 0; i < mons.size(); ++i) g.add_term(mons[i], F.from_int(static_cast<long long>(coeffs[i] % F.modulus())));
  return g;
}

PrimeScreen screen_web_mod_p(const BiHomPoly<PrimeField>& section, const ScreenOptions& opt) {
  const PrimeField& F = section.field();
  ScreenContext ctx{Mode::Web, &F, static_cast<u32>(F.modulus()), {}, {}, {}, {}, {}, {}};
  if (F.modulus() < simd::kMaxKernelModulus) ctx.filter = to_kernel(section.poly);
  // Invariance only needs the section, not a validated chart form.
  ctx.web = PlaneWeb<PrimeField>{section.n, section.m, section, {}};
  return run_screen(ctx, opt);
}

PrimeScreen screen_ode_mod_p(const SecondOrderODE<PrimeField>& e, const ScreenOptions& opt) {
  const PrimeField& F = e.F1.field();
  ScreenContext ctx{Mode::Ode, &F, static_cast<u32>(F.modulus()), {}, {}, {}, {}, {}, {}};
  if (F.modulus() < simd::kMaxKernelModulus) {
    // Phi = B (fxx + 2 p fxy + p^2 fyy) + A fy: X(f_x + p f_y) at a point.
    auto cf = chart_vector_field(e);
    auto v = [&](std::size_t i) { return FpPoly::variable(F, filter_vars(), i); };
    std::vector<FpPoly> images{v(0), v(1), v(2)};
    FpPoly B = cf.B.is_zero() ? FpPoly(F, filter_vars()) : cf.B.compose(images);
    FpPoly A = cf.A.is_zero() ? FpPoly(F, filter_vars()) : cf.A.compose(images);
    FpPoly phi = B * (v(5) + v(2).scaled(2) * v(6) + v(2) * v(2) * v(7)) + A * v(4);
    ctx.filter = to_kernel(phi);
  }
  ctx.ode = e;
  return run_screen(ctx, opt);
}

std::vector<Point3<PrimeField>> invariant_fibers_mod_p(const BiHomPoly<PrimeField>& section) {
  const PrimeField& F = section.field();
  std::vector<Point3<PrimeField>> out;
  for (const auto& pt : projective_points(F.modulus())) {
    std::vector<FpPoly> images;
    for (int i = 0; i < 3; ++i) images.push_back(FpPoly::constant(F, incidence_vars(), pt[i]));
    for (int i = 0; i < 3; ++i) images.push_back(FpPoly::variable(F, incidence_vars(), kA0 + i));
    if (section.is_zero() || section.poly.compose(images).is_zero()) out.push_back({pt[0], pt[1], pt[2]});
  }
  return out;
}

}  // namespace p2ode
