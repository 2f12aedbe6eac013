// Acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance [path-to-unit_tests]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gegenforge/expansion.hpp"
#include "gegenforge/identities.hpp"
#include "gegenforge/oracle.hpp"
#include "gegenforge/ortho.hpp"

using namespace gegenforge;

namespace {

using clock_type = std::chrono::steady_clock;

constexpr real pi = std::numbers::pi_v<real>;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

real rel(real a, real b) { return std::fabs(a - b) / std::fabs(b); }
real rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

std::string sci(real v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2Le", v);
  return buf;
}

real poch(real a, int n) {
  real p = 1;
  for (int j = 0; j < n; ++j) p *= a + j;
  return p;
}

real harmonic(int k) {
  real h = 0;
  for (int j = 1; j <= k; ++j) h += 1.0L / j;
  return h;
}

PrecisionContext with_tol(real tol, std::int64_t max_terms = 100000) {
  PrecisionContext ctx;
  ctx.rel_tol = tol;
  ctx.max_terms = max_terms;
  return ctx;
}

// Series check of one identity case against an independent reference.
struct SeriesCheck {
  real worst = 0;
  std::int64_t most_terms = 0;

  void run(Outcome& o, const IdentityCase& c, cplx reference, real tol, const PrecisionContext& ctx,
           Accelerator acc, std::int64_t term_cap) {
    const auto rep = verify_identity(c, ctx, acc);
    const real e = rel(rep.series_value, reference);
    worst = std::max(worst, e);
    most_terms = std::max(most_terms, rep.terms_used);
    std::ostringstream what;
    what << to_string(c.id) << " lambda=" << static_cast<double>(c.lambda.value_or(0))
         << " m=" << c.m.value_or(0) << " q=" << c.q.value_or(0) << " rel=" << sci(e)
         << " terms=" << rep.terms_used;
    o.require(e <= tol && rep.terms_used <= term_cap, what.str());
  }

  void summarize(Outcome& o) const { o.detail << " max_rel=" << sci(worst) << " max_terms=" << most_terms; }
};

Outcome c1() {
  Outcome o;
  SeriesCheck s;
  const auto t0 = clock_type::now();
  for (int m = 0; m <= 3; ++m)
    s.run(o, {IdentityId::EQ48, {}, m, {}, {}}, 2 / pi, 1e-9L, with_tol(1e-9L, 500), Accelerator::levin_u, 500);
  const double t = seconds_since(t0);
  s.summarize(o);
  o.require(t < 1, "time");
  o.detail << " time=" << t << "s";
  return o;
}

Outcome c2() {
  Outcome o;
  SeriesCheck s;
  const auto t0 = clock_type::now();
  for (int m = 0; m <= 2; ++m)
    s.run(o, {IdentityId::EQ47, {}, m, {}, {}}, 4 / pi, 1e-8L, with_tol(1e-8L, 1000), Accelerator::levin_u, 1000);
  const double t = seconds_since(t0);
  s.summarize(o);
  o.require(t < 1, "time");
  o.detail << " time=" << t << "s";
  return o;
}

Outcome c3() {
  Outcome o;
  SeriesCheck s;
  const auto t0 = clock_type::now();
  s.run(o, {IdentityId::EQ411, {}, {}, {}, {}}, 32 / (3 * pi * pi), 1e-12L, with_tol(1e-12L, 3000),
        Accelerator::wynn_epsilon, 3000);
  const double t = seconds_since(t0);
  s.summarize(o);
  o.require(t < 0.5, "time");
  o.detail << " time=" << t << "s";
  return o;
}

Outcome c4() {
  Outcome o;
  SeriesCheck s;
  s.run(o, {IdentityId::EQ412, {}, {}, {}, {}}, 32 / (pi * pi), 1e-12L, with_tol(1e-12L, 3000),
        default_accelerator(IdentityId::EQ412), 3000);
  s.summarize(o);
  return o;
}

Outcome c5() {
  Outcome o;
  SeriesCheck s;
  for (int m = 0; m <= 4; ++m) {
    const real ref = std::ldexp(1.0L, 4 * m + 5) / (pi * pi * (2 * m + 1) * (2 * m + 3));
    s.run(o, {IdentityId::C13, {}, m, {}, {}}, ref, 1e-10L, with_tol(1e-10L), default_accelerator(IdentityId::C13),
          100000);
  }
  s.summarize(o);
  return o;
}

Outcome c6() {
  Outcome o;
  SeriesCheck s;
  for (auto [m, q] : {std::pair{0, 0}, {1, 0}, {0, 1}, {2, 1}}) {
    const int sidx = q + m;
    const real ref = std::ldexp(1.0L, 4 * q + 3) / (pi * pi * (2 * sidx + 1) * (2 * m + 1));
    s.run(o, {IdentityId::C15, {}, m, q, {}}, ref, 1e-8L, with_tol(1e-8L), Accelerator::levin_u, 100000);
  }
  s.summarize(o);
  return o;
}

Outcome c7() {
  Outcome o;
  SeriesCheck s;
  for (cplx z : {cplx(0.25L), cplx(-0.3L), cplx(0.3L, 0.2L), cplx(1.2L)}) {
    const cplx ref = std::tan(pi * z) / pi;
    s.run(o, {IdentityId::C12, {}, {}, {}, z}, ref, 1e-8L, with_tol(1e-8L, 10000), Accelerator::levin_u, 10000);
  }
  for (int m = 0; m <= 2; ++m)
    s.run(o, {IdentityId::C12B, {}, m, {}, {}}, 1 / pi, 1e-8L, with_tol(1e-8L, 10000), Accelerator::levin_u, 10000);
  s.summarize(o);
  return o;
}

Outcome c8() {
  Outcome o;
  SeriesCheck s;
  const auto t0 = clock_type::now();
  for (real l : {-0.3L, 0.1L, 0.25L, 0.4L}) {
    for (int m = 0; m <= 2; ++m) {
      const real ref = std::tan(pi * l) / (2 * pi) * (1 + poch(l, m) / poch(1 - l, m));
      s.run(o, {IdentityId::T6a, l, m, {}, {}}, ref, 1e-6L, with_tol(1e-6L), Accelerator::levin_u, 100000);
    }
  }
  const double t = seconds_since(t0);
  s.summarize(o);
  o.require(t < 5, "time");
  o.detail << " time=" << t << "s";
  return o;
}

// (1-2l) tan(pi l)/(1-l) * (1 - (l-1)_k/(2-l)_k) / (k^2 pi), k = m+1
real t6b_generic(real l, int m) {
  const int k = m + 1;
  return (1 - 2 * l) * std::tan(pi * l) / (1 - l) * (1 - poch(l - 1, k) / poch(2 - l, k)) / (k * k * pi);
}

Outcome c9() {
  Outcome o;
  SeriesCheck generic;
  for (real l : {0.25L, 0.75L, 1.2L})
    for (int m = 0; m <= 2; ++m)
      generic.run(o, {IdentityId::T6b, l, m, {}, {}}, t6b_generic(l, m), 1e-6L, with_tol(1e-6L),
                  Accelerator::levin_u, 100000);
  generic.summarize(o);

  SeriesCheck limits;
  const PrecisionContext ctx = with_tol(1e-5L);
  for (int m = 0; m <= 2; ++m) {
    const int k = m + 1;
    const real at_half = 4 * (1 - poch(-0.5L, k) / poch(1.5L, k)) / (k * k * pi * pi);
    const real at_three_halves = 8 * (2 * harmonic(2 * k) - harmonic(k)) / (k * k * pi * pi);
    for (auto [l, exact] : {std::pair{0.5L, at_half}, {1.5L, at_three_halves}}) {
      const IdentityCase c{IdentityId::T6b, l, m, {}, {}};
      const cplx closed = identity_closed_form(c, ctx);
      o.require(std::isfinite(closed.real()) && rel(closed.real(), exact) < 1e-15L,
                "limit value lambda=" + std::to_string(static_cast<double>(l)));
      limits.run(o, c, exact, 1e-5L, ctx, Accelerator::levin_u, 100000);
    }
  }
  o.detail << " |";
  limits.summarize(o);
  return o;
}

// Gamma(l+1/2)/Gamma(l) * sqrt(pi)
real norm_prefactor(real l) { return std::sqrt(pi) * std::tgamma(l + 0.5L) / std::tgamma(l); }

Outcome c10() {
  Outcome o;
  SeriesCheck s;
  for (real l : {0.25L, 0.5L, 0.8L}) {
    for (int m = 0; m <= 2; ++m) {
      s.run(o, {IdentityId::T7, l, m, {}, {}}, 2 * norm_prefactor(l) / (pi * (2 * m + 1)), 1e-8L, with_tol(1e-8L),
            Accelerator::levin_u, 100000);
      s.run(o, {IdentityId::T8, l, m, {}, {}}, norm_prefactor(l) / pi, 1e-8L, with_tol(1e-8L), Accelerator::levin_u,
            100000);
    }
  }
  s.summarize(o);
  return o;
}

Outcome c11() {
  Outcome o;
  PrecisionContext ctx = with_tol(1e-13L);
  ctx.abs_tol = 1e-16L;
  real worst = 0;
  const auto t0 = clock_type::now();
  for (real mu : {-0.4L, 0.1L, 0.2L, 0.45L}) {
    for (int m = 0; m <= 5; ++m) {
      for (auto kind : {Lemma5Kind::J, Lemma5Kind::K}) {
        const real closed = lemma5_closed(kind, mu, m);
        const real quad = lemma5_quadrature(kind, mu, m, ctx).value;
        const real e = rel(quad, closed);
        worst = std::max(worst, e);
        o.require(e <= 1e-11L, std::string(kind == Lemma5Kind::J ? "J" : "K") + " mu=" +
                                   std::to_string(static_cast<double>(mu)) + " m=" + std::to_string(m));
      }
    }
  }
  const double t = seconds_since(t0);
  o.require(t < 2, "time");
  o.detail << " max_rel=" << sci(worst) << " time=" << t << "s";
  return o;
}

Outcome c12() {
  Outcome o;
  PrecisionContext ctx = with_tol(1e-13L);
  ctx.abs_tol = 1e-16L;
  real worst = 0;
  for (real l : {0.25L, 0.7L, 1.5L}) {
    for (int m = 0; m <= 2; ++m) {
      for (int q = 0; q <= 5; ++q) {
        const real f = coeff_f(l, m, q);
        const real fq = coeff_by_quadrature(l, m, m + 2 * q, ExpansionKind::U_kind, ctx).value;
        worst = std::max(worst, rel(fq, f));
        o.require(rel(fq, f) <= 1e-9L, "f lambda=" + std::to_string(static_cast<double>(l)));
        if (l == 1.5L) continue;
        const real h = coeff_h(l, m, q);
        const real hq = coeff_by_quadrature(l, m, m + 2 * q, ExpansionKind::T_kind, ctx).value;
        worst = std::max(worst, rel(hq, h));
        o.require(rel(hq, h) <= 1e-9L, "h lambda=" + std::to_string(static_cast<double>(l)));
      }
    }
  }
  o.detail << " max_rel=" << sci(worst);
  return o;
}

Outcome c13() {
  Outcome o;
  const PrecisionContext ctx = with_tol(1e-6L, 1000000);
  real worst_u = 0, worst_t = 0;
  for (int m = 0; m <= 2; ++m) {
    const ExpansionParams u(0.5L, m, ExpansionKind::U_kind);
    const ExpansionParams h(0.5L, m, ExpansionKind::T_kind);
    for (real x : {0.0L, 0.5L, -0.5L, 0.9L, -0.9L}) {
      const auto pt = PolyPoint::from_x(x);
      const real eu = std::fabs(partial_sum(u, pt, 20000, ctx).value - target_f(u, pt));
      const real et = std::fabs(cesaro_partial_sum(h, pt, 20000, ctx).value - target_h(h, pt));
      worst_u = std::max(worst_u, eu);
      worst_t = std::max(worst_t, et);
      o.require(eu <= 1e-6L, "U m=" + std::to_string(m) + " x=" + std::to_string(static_cast<double>(x)));
      o.require(et <= 1e-4L, "T m=" + std::to_string(m) + " x=" + std::to_string(static_cast<double>(x)));
    }
    // x = 1: C^(1/2)_n(1) = 1, so S_N is the coefficient partial sum.
    const ExpansionParams f(0.5L, m, ExpansionKind::U_kind);
    const auto one = PolyPoint::from_x(1);
    o.require(target_f(f, one) == 0, "target at x=1");
    real previous = 1;
    for (int N : {1000, 2000, 4000, 8000, 16000}) {
      const real e = std::fabs(partial_sum(f, one, N, ctx).value);
      o.require(e < previous, "endpoint decrease m=" + std::to_string(m));
      previous = e;
    }
    PrecisionContext acc = with_tol(1e-12L);
    acc.abs_tol = 1e-10L;
    const auto limit = sum_series<real>([m](std::int64_t q) { return coeff_f(0.5L, m, q); }, acc);
    o.require(std::fabs(limit.value) < 1e-9L, "endpoint limit m=" + std::to_string(m));
    o.detail << " endpoint(m=" << m << ")=" << sci(previous) << "->" << sci(std::fabs(limit.value));
  }
  o.detail << " max_U=" << sci(worst_u) << " max_T_cesaro=" << sci(worst_t);
  return o;
}

Outcome c14() {
  Outcome o;
  const PrecisionContext ctx = with_tol(1e-7L);
  const auto p5 = hyp5f4_params(cplx(0.25L));
  const auto s5 = hyp_pfq_partial(p5.upper, p5.lower, p5.arg, 100000, ctx);
  const real e5 = rel(s5.value, cplx(4 / pi));
  o.require(e5 <= 1e-7L, "5F4 at z=1/4");
  o.detail << " 5F4(1/4) rel=" << sci(e5) << " terms=" << s5.terms_used;
  for (auto [m, z] : {std::pair{0, 0.5L}, {1, 0.25L}}) {
    const auto p4 = hyp4f3_params(m, cplx(z));
    const auto s4 = hyp_pfq_partial(p4.upper, p4.lower, p4.arg, 100000, ctx);
    const real rhs = std::pow(4.0L, m) * std::tgamma(m + 1.0L) / std::sqrt(pi) * std::tgamma(0.5L + m + z) /
                     std::tgamma(1 + 2 * m + z);
    const real e4 = rel(s4.value, cplx(rhs));
    o.require(e4 <= 1e-7L, "4F3 m=" + std::to_string(m));
    o.detail << " 4F3(" << m << "," << static_cast<double>(z) << ") rel=" << sci(e4);
  }
  return o;
}

Outcome c15(const char* unit_tests, clock_type::time_point start) {
  Outcome o;
  if (unit_tests == nullptr) {
    o.require(false, "no unit test binary given");
    return o;
  }
  const std::string cmd = std::string(unit_tests) + " --no-version 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  o.require(pipe != nullptr, "could not start unit tests");
  if (pipe == nullptr) return o;
  std::string summary;
  char line[512];
  while (std::fgets(line, sizeof line, pipe) != nullptr) {
    const std::string s(line);
    if (s.find("test cases:") != std::string::npos || s.find("assertions:") != std::string::npos) {
      std::string t = s.substr(s.find(':') - 10);
      t.erase(std::remove(t.begin(), t.end(), '\n'), t.end());
      summary += " " + t.substr(t.find_first_not_of(' '));
    }
  }
  const int status = ::pclose(pipe);
  o.require(status == 0, "unit tests failed");
  const double t = seconds_since(start);
  o.require(t < 60, "total time");
  o.detail << summary << " total_time=" << t << "s";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = clock_type::now();
  const std::vector<std::function<Outcome()>> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13, c14};
  int failures = 0;
  auto report = [&](std::size_t i, const Outcome& o) {
    std::printf("criterion %2zu: %s%s\n", i, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    report(i + 1, o);
  }
  report(15, c15(argc > 1 ? argv[1] : nullptr, start));
  std::printf("%d of 15 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
