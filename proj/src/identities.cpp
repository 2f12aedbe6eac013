#include "gegenforge/identities.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gegenforge/errors.hpp"
#include "gegenforge/gamma.hpp"
#include "gegenforge/ortho.hpp"

namespace gegenforge {
namespace {

constexpr real pi = std::numbers::pi_v<real>;

struct IdInfo {
  IdentityId id;
  std::string_view name;
  IdentitySchema schema;
};

constexpr std::array<IdInfo, 17> catalog = {{
    {IdentityId::T6a, "T6a", {true, true, false, false}},
    {IdentityId::T6b, "T6b", {true, true, false, false}},
    {IdentityId::T6c, "T6c", {true, true, true, false}},
    {IdentityId::T6d, "T6d", {true, true, true, false}},
    {IdentityId::T7, "T7", {true, true, false, false}},
    {IdentityId::T8, "T8", {true, true, false, false}},
    {IdentityId::EQ47, "EQ47", {false, true, false, false}},
    {IdentityId::EQ48, "EQ48", {false, true, false, false}},
    {IdentityId::C12, "C12", {false, false, false, true}},
    {IdentityId::C12B, "C12B", {false, true, false, false}},
    {IdentityId::C13, "C13", {false, true, false, false}},
    {IdentityId::EQ411, "EQ411", {false, false, false, false}},
    {IdentityId::C14, "C14", {false, true, false, false}},
    {IdentityId::EQ412, "EQ412", {false, false, false, false}},
    {IdentityId::C15, "C15", {false, true, true, false}},
    {IdentityId::HYP5F4, "HYP5F4", {false, false, false, true}},
    {IdentityId::HYP4F3, "HYP4F3", {false, true, false, true}},
}};

const IdInfo& info(IdentityId id) {
  for (const auto& e : catalog)
    if (e.id == id) return e;
  throw std::invalid_argument("unknown identity id");
}

bool is_half_integer(real x) noexcept {
  const real y = x - 0.5L;
  return std::fabs(y - std::nearbyint(y)) <=
         8 * std::numeric_limits<real>::epsilon() * std::fmax(1.0L, std::fabs(y));
}

bool is_nonnegative_even(cplx z) noexcept {
  return z.imag() == 0 && z.real() >= 0 && std::fmod(z.real(), 2.0L) == 0;
}

void require_open(real v, real lo, real hi, IdentityId id) {
  if (!(v > lo && v < hi) || v == 0)
    throw std::domain_error(std::string(to_string(id)) + ": lambda = " + std::to_string(v) +
                            " outside (" + std::to_string(lo) + ", " + std::to_string(hi) +
                            ") \\ {0}");
}

real cb(std::int64_t n) { return central_binomial_scaled(n); }

real sq(real x) { return x * x; }

real r(std::int64_t n) { return static_cast<real>(n); }

// -- summands ---------------------------------------------------------------

real term_real(const IdentityCase& c, std::int64_t n) {
  const real l = c.lambda.value_or(0);
  const std::int64_t m = c.m.value_or(0);
  const std::int64_t q = c.q.value_or(0);
  switch (c.id) {
    case IdentityId::T6a:
      return (l + r(m + 2 * n)) * sq(bbinom(l, n)) * sq(bbinom(l, n + m)) /
             bbinom(2 * l, m + 2 * n);
    case IdentityId::T6b:
      return (l + r(m + 2 * n)) / sq(r(m + n + 1)) * sq(bbinom(l - 1, n)) *
             sq(bbinom(l, m + n)) / bbinom(2 * l, m + 2 * n);
    case IdentityId::T6c:
      return (l + r(q + 2 * n)) / r(q + m + 1 + n) * bbinom(l - 1, n - m) * bbinom(l, n) *
             bbinom(l, q + n) * bbinom(l, q + m + n) / bbinom(2 * l, q + 2 * n);
    case IdentityId::T6d:
      return (l + r(q + 2 * n)) / r(q + n + 1) * bbinom(l, n - m - 1) * bbinom(l - 1, n) *
             bbinom(l, q + n) * bbinom(l, q + m + 1 + n) / bbinom(2 * l, q + 2 * n);
    case IdentityId::T7: {
      const real s = (n - m) % 2 == 0 ? 1 : -1;
      return s * (l + r(2 * n)) / r(n + m + 1) * bbinom(l - 1, n - m) * bbinom(l, n) *
             bbinom(l, m + n) / bbinom(2 * l, 2 * n);
    }
    case IdentityId::T8: {
      const real s = (n - m) % 2 == 0 ? 1 : -1;
      return s * (l + r(2 * n)) * bbinom(l, n - m) * bbinom(l, n) * bbinom(l, m + n) /
             bbinom(2 * l, 2 * n);
    }
    case IdentityId::EQ48: {
      const real s = (n - m) % 2 == 0 ? 1 : -1;
      return s * r(1 + 4 * n) * cb(n - m) * cb(n) * cb(n + m);
    }
    case IdentityId::EQ47: {
      const real s = (n - m) % 2 == 0 ? 1 : -1;
      return s * r(1 + 4 * n) * r(2 * m + 1) / (r(n + m + 1) * r(1 + 2 * m - 2 * n)) *
             cb(n - m) * cb(n) * cb(n + m);
    }
    case IdentityId::C13:
    case IdentityId::EQ411: {
      const real p16 = std::ldexp(1.0L, static_cast<int>(4 * m));
      return p16 * r(1 + 2 * m + 4 * n) / (sq(r(m + n + 1)) * sq(r(2 * n - 1))) * sq(cb(n)) *
             sq(cb(m + n));
    }
    case IdentityId::C14: {
      const real p16 = std::ldexp(1.0L, static_cast<int>(4 * m));
      return p16 * r(1 + 2 * m + 4 * n) / (r(m + 2 * n) * r(m + 1 + 2 * n)) * sq(cb(n)) *
             sq(cb(n + m));
    }
    case IdentityId::EQ412:
      return r(3 + 4 * n) * r(1 + 2 * n) / (r(n + 1) * r(n + 1) * r(n + 1)) * sq(sq(cb(n)));
    case IdentityId::C15: {
      const std::int64_t s = q + m;
      const real p16 = std::ldexp(1.0L, static_cast<int>(4 * q));
      return p16 * r(1 + 2 * q + 4 * n) / (r(s + 1 + n) * r(2 * m + 1 - 2 * n)) * cb(n - m) *
             cb(n) * cb(q + n) * cb(s + n);
    }
    case IdentityId::C12B: {
      const real z = r(m) + 0.25L;
      return cb(n) * (z - r(2 * n)) * sq(bbinom(-z, n)) * pochhammer_ratio(-z, 0.5L - z, n);
    }
    default:
      break;
  }
  throw std::logic_error("term_real: complex-parameter identity");
}

cplx term_complex(const IdentityCase& c, std::int64_t n) {
  const cplx z = c.z.value_or(0);
  const real nr = r(n);
  switch (c.id) {
    case IdentityId::C12: {
      const cplx b = bbinom(-z, n);
      return cb(n) * (z - 2 * nr) * b * b * pochhammer_ratio(-z, 0.5L - z, n);
    }
    case IdentityId::HYP5F4: {
      const cplx b = bbinom(-z, n);
      return cb(n) * b * b * pochhammer_ratio(-z, 0.5L - z, n) * (nr - z / 2.0L) / (-z / 2.0L);
    }
    case IdentityId::HYP4F3: {
      const real m = r(c.m.value_or(0));
      const real s = n % 2 == 0 ? 1 : -1;
      return s * pochhammer_ratio(z, cplx(1 + 2 * m), n) *
             pochhammer_ratio(cplx(0.5L + m), 0.5L + m + z, n) * (m + z / 2.0L + nr) /
             (m + z / 2.0L) * bbinom(2 * m + z, n);
    }
    default:
      return term_real(c, n);
  }
}

bool uses_z(IdentityId id) noexcept {
  return id == IdentityId::C12 || id == IdentityId::HYP5F4 || id == IdentityId::HYP4F3;
}

// -- closed forms -----------------------------------------------------------

bool in_band(real lambda, real centre, real guard) noexcept {
  const real e = lambda - centre;
  return e == 0 || std::fabs(e) < guard;
}

// (1−2λ)·tan(πλ) with λ = 1/2 + e.
real half_pole_factor(real lambda) {
  const real e = lambda - 0.5L;
  if (e == 0) return 2 / pi;
  return 2 * e / std::tan(pi * e);
}

// tan(πλ)/(1−λ) with λ = 1 + e.
real unit_zero_factor(real lambda) {
  const real e = lambda - 1;
  if (e == 0) return -pi;
  return -std::tan(pi * e) / e;
}

// (1−2λ)·tan(πλ)/(1−λ) near λ ∈ {1/2, 1}; raw elsewhere.
real t6_prefactor(real l, real guard) {
  if (in_band(l, 0.5L, guard)) return half_pole_factor(l) / (1 - l);
  if (in_band(l, 1, guard)) return (1 - 2 * l) * unit_zero_factor(l);
  return (1 - 2 * l) * std::tan(pi * l) / (1 - l);
}

real pratio(real a, real b, std::int64_t k) { return pochhammer_ratio(a, b, k); }

real t6b_closed(real l, std::int64_t m, real guard) {
  const std::int64_t k = m + 1;
  const real den = sq(r(k)) * pi;
  auto one_minus_ratio = [&] { return 1 - pratio(l - 1, 2 - l, k); };
  if (in_band(l, 1.5L, guard)) {
    // tan(πλ)(1 − R) = expm1(S)/tan(πe), S = Σ log1p(2e/(1/2 − e + j))
    const real e = l - 1.5L;
    real x;
    if (e == 0) {
      x = 2 * (2 * harmonic(2 * k) - harmonic(k)) / pi;
    } else {
      real s = 0;
      for (std::int64_t j = 0; j < k; ++j) s += std::log1p(2 * e / (0.5L - e + r(j)));
      x = std::expm1(s) / std::tan(pi * e);
    }
    return (1 - 2 * l) / (1 - l) * x / den;
  }
  if (in_band(l, 2, guard)) {
    // tan(πλ)(1 − R) = tan(πe) + tan(πe)/e · (1+e)_{k}/(1−e)_{k−1}
    const real e = l - 2;
    const real tr = e == 0 ? pi : std::tan(pi * e) / e;
    const real y = std::tan(pi * e) + tr * pratio(1 + e, 1 - e, m) * (1 + e + r(m));
    return (1 - 2 * l) / (1 - l) * y / den;
  }
  return t6_prefactor(l, guard) * one_minus_ratio() / den;
}

cplx tan_over_pi(cplx z) {
  if (z.imag() == 0 && z.real() == std::floor(z.real())) return 0;
  if (z.imag() == 0) return std::tan(pi * z.real()) / pi;
  return std::tan(pi * z) / pi;
}

}  // namespace

std::string_view to_string(IdentityId id) noexcept {
  for (const auto& e : catalog)
    if (e.id == id) return e.name;
  return "?";
}

std::optional<IdentityId> parse_identity_id(std::string_view name) noexcept {
  for (const auto& e : catalog)
    if (e.name == name) return e.id;
  return std::nullopt;
}

IdentitySchema schema(IdentityId id) noexcept {
  for (const auto& e : catalog)
    if (e.id == id) return e.schema;
  return {};
}

void IdentityCase::validate() const {
  const IdInfo& inf = info(id);
  const std::string name(inf.name);
  auto check_field = [&](bool want, bool have, const char* field) {
    if (want && !have) throw std::invalid_argument(name + ": missing parameter " + field);
    if (!want && have) throw std::invalid_argument(name + ": unexpected parameter " + field);
  };
  check_field(inf.schema.lambda, lambda.has_value(), "lambda");
  check_field(inf.schema.m, m.has_value(), "m");
  check_field(inf.schema.q, q.has_value(), "q");
  check_field(inf.schema.z, z.has_value(), "z");

  if (m && *m < 0) throw std::domain_error(name + ": m must be >= 0");
  if (q && *q < 0) throw std::domain_error(name + ": q must be >= 0");
  if (id == IdentityId::C14 && *m < 1) throw std::domain_error("C14: m must be >= 1");
  if (lambda && !std::isfinite(*lambda)) throw std::domain_error(name + ": lambda not finite");
  if (z && !(std::isfinite(z->real()) && std::isfinite(z->imag())))
    throw std::domain_error(name + ": z not finite");

  switch (id) {
    case IdentityId::T6a: require_open(*lambda, -0.5L, 0.5L, id); break;
    case IdentityId::T6b: require_open(*lambda, -0.5L, 2.5L, id); break;
    case IdentityId::T6c:
    case IdentityId::T6d: require_open(*lambda, -0.5L, 1.5L, id); break;
    case IdentityId::T7: require_open(*lambda, -0.5L, 3, id); break;
    case IdentityId::T8: require_open(*lambda, -0.5L, 1, id); break;
    case IdentityId::C12:
    case IdentityId::HYP5F4:
      if (!(z->real() > -0.5L)) throw std::domain_error(name + ": requires Re z > -1/2");
      if (z->imag() == 0 && is_half_integer(z->real()))
        throw pole_error(name + ": tan(pi z) has a pole at z in 1/2 + Z");
      if (id == IdentityId::HYP5F4 && is_nonnegative_even(*z))
        throw std::domain_error("HYP5F4: lower parameter -z/2 is a nonpositive integer");
      break;
    case IdentityId::HYP4F3:
      if (!(z->real() > -0.5L && z->real() < 1))
        throw std::domain_error("HYP4F3: requires -1/2 < Re z < 1");
      if (*m == 0 && *z == cplx(0))
        throw std::domain_error("HYP4F3: lower parameter m + z/2 vanishes at m = 0, z = 0");
      break;
    default: break;
  }
}

bool IdentityCase::complex_valued() const noexcept { return z && z->imag() != 0; }

std::int64_t start_index(const IdentityCase& c) {
  switch (c.id) {
    case IdentityId::T6c:
    case IdentityId::T7:
    case IdentityId::T8:
    case IdentityId::EQ47:
    case IdentityId::EQ48:
    case IdentityId::C15: return c.m.value_or(0);
    case IdentityId::T6d: return c.m.value_or(0) + 1;
    default: return 0;
  }
}

cplx identity_term(const IdentityCase& c, std::int64_t n) {
  c.validate();
  if (n < start_index(c))
    throw index_error(std::string(to_string(c.id)) + ": index " + std::to_string(n) +
                      " below start " + std::to_string(start_index(c)));
  return uses_z(c.id) ? term_complex(c, n) : cplx(term_real(c, n));
}

real t6c_bracket(real lambda, std::int64_t a, std::int64_t b) {
  return pratio(lambda, 2 - lambda, a) + pratio(lambda, 2 - lambda, b);
}

cplx identity_closed_form(const IdentityCase& c, const PrecisionContext& ctx) {
  c.validate();
  const real l = c.lambda.value_or(0);
  const std::int64_t m = c.m.value_or(0);
  const std::int64_t q = c.q.value_or(0);
  const real g = ctx.limit_guard;
  switch (c.id) {
    case IdentityId::T6a:
      return std::tan(pi * l) / (2 * pi) * (1 + pratio(l, 1 - l, m));
    case IdentityId::T6b:
      return t6b_closed(l, m, g);
    case IdentityId::T6c:
      return t6_prefactor(l, g) / (2 * pi * r(q + 2 * m + 1)) * t6c_bracket(l, m + q, m);
    case IdentityId::T6d:
      return t6_prefactor(l, g) / (2 * pi * r(q + 1)) *
             (pratio(l, 2 - l, m + q + 1) - pratio(l, 2 - l, m));
    case IdentityId::T7:
      return 2 * gegenbauer_norm_prefactor(l) / (pi * r(2 * m + 1));
    case IdentityId::T8:
      return gegenbauer_norm_prefactor(l) / pi;
    case IdentityId::EQ47: return 4 / pi;
    case IdentityId::EQ48: return 2 / pi;
    case IdentityId::C12: return tan_over_pi(*c.z);
    case IdentityId::C12B: return 1 / pi;
    case IdentityId::C13:
      return std::ldexp(1.0L, static_cast<int>(4 * m + 5)) /
             (pi * pi * r(2 * m + 1) * r(2 * m + 3));
    case IdentityId::EQ411: return 32 / (3 * pi * pi);
    case IdentityId::C14:
      return std::ldexp(1.0L, static_cast<int>(4 * m + 1)) / (pi * pi) *
             (2 * harmonic(2 * m) - harmonic(m)) / sq(r(m));
    case IdentityId::EQ412: return 32 / (pi * pi);
    case IdentityId::C15:
      return std::ldexp(1.0L, static_cast<int>(4 * q + 3)) /
             (pi * pi * r(2 * (q + m) + 1) * r(2 * m + 1));
    case IdentityId::HYP5F4: return tan_over_pi(*c.z) / *c.z;
    case IdentityId::HYP4F3: {
      const cplx z = *c.z;
      const real mr = r(m);
      const cplx lg = log_gamma(0.5L + mr + z) - log_gamma(1 + 2 * mr + z);
      const real scale = std::exp(mr * std::log(4.0L) + log_gamma(mr + 1)) / std::sqrt(pi);
      return scale * std::exp(lg);
    }
  }
  throw std::logic_error("identity_closed_form: unhandled id");
}

Accelerator default_accelerator(IdentityId id) noexcept {
  return id == IdentityId::EQ411 || id == IdentityId::C13 ? Accelerator::wynn_epsilon
                                                          : Accelerator::levin_u;
}

VerificationReport verify_identity(const IdentityCase& c, const PrecisionContext& ctx) {
  return verify_identity(c, ctx, default_accelerator(c.id));
}

VerificationReport verify_identity(const IdentityCase& c, const PrecisionContext& ctx,
                                   Accelerator accelerator) {
  const auto t0 = std::chrono::steady_clock::now();
  c.validate();
  ctx.validate();
  VerificationReport rep;
  rep.identity = c;
  rep.accelerator = accelerator;
  rep.closed_value = identity_closed_form(c, ctx);

  const std::int64_t start = start_index(c);
  const PrecisionContext run = ctx.with_accelerator(accelerator);
  bool series_ok = false;

  const bool finite_c12 = c.id == IdentityId::C12 && c.z->imag() == 0 &&
                          c.z->real() >= 0 && c.z->real() == std::floor(c.z->real());
  if (finite_c12) {
    // Polynomial case: binom(z, n) = 0 past n = z, but z − 2n can vanish earlier.
    const auto k = static_cast<std::int64_t>(c.z->real());
    real s = 0;
    for (std::int64_t n = 0; n <= k; ++n) s += term_complex(c, n).real();
    rep.series_value = s;
    rep.terms_used = k + 1;
    series_ok = true;
  } else if (c.complex_valued()) {
    const auto res = sum_series<cplx>(
        [&](std::int64_t k) { return term_complex(c, start + k); }, run);
    rep.series_value = res.value;
    rep.series_est_error = res.est_error;
    rep.terms_used = res.terms_used;
    series_ok = res.converged;
  } else {
    const bool zid = uses_z(c.id);
    const auto res = sum_series<real>(
        [&](std::int64_t k) {
          return zid ? term_complex(c, start + k).real() : term_real(c, start + k);
        },
        run);
    rep.series_value = res.value;
    rep.series_est_error = res.est_error;
    rep.terms_used = res.terms_used;
    series_ok = res.converged;
  }

  rep.abs_err = std::abs(rep.closed_value - rep.series_value);
  const real mag = std::abs(rep.closed_value);
  rep.rel_err = mag > 0 ? rep.abs_err / mag : rep.abs_err;
  const bool within = mag > 0 ? rep.rel_err <= ctx.rel_tol : rep.abs_err <= ctx.abs_tol;
  rep.converged = series_ok && within;
  rep.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

SeriesResult<cplx> hyp_pfq_partial(std::span<const cplx> upper, std::span<const cplx> lower,
                                   int arg, std::int64_t N, const PrecisionContext& ctx) {
  if (arg != 1 && arg != -1) throw std::invalid_argument("hyp_pfq_partial: arg must be +1 or -1");
  if (N < 0) throw std::invalid_argument("hyp_pfq_partial: N must be >= 0");
  for (const cplx& b : lower)
    if (is_nonpositive_integer(b) && static_cast<real>(N) > -b.real())
      throw pole_error("hyp_pfq_partial: lower parameter is a nonpositive integer within N terms");

  std::int64_t last = -1;
  cplx t = 1;
  auto advance = [&](std::int64_t n) {
    // t_{n+1} = t_n · Π(a+n) / Π(b+n) · arg / (n+1)
    const real nr = static_cast<real>(n);
    cplx f = static_cast<real>(arg) / (nr + 1);
    for (const cplx& a : upper) f *= a + nr;
    for (const cplx& b : lower) f /= b + nr;
    t *= f;
  };
  TermFn<cplx> term = [&](std::int64_t n) {
    if (n < last) {
      last = -1;
      t = 1;
    }
    if (last < 0) last = 0;
    while (last < n) advance(last++);
    return t;
  };
  return sum_series<cplx>(term, ctx.with_max_terms(std::min(ctx.max_terms, N + 1)));
}

HypParams hyp5f4_params(cplx z) {
  return {{0.5L, -z, -z, -z, 1.0L - z / 2.0L}, {1.0L, 1.0L, -z / 2.0L, 0.5L - z}, 1};
}

HypParams hyp4f3_params(std::int64_t m, cplx z) {
  const real mr = static_cast<real>(m);
  return {{z, 0.5L + mr, 1 + mr + z / 2.0L, 2 * mr + z}, {1 + 2 * mr, 0.5L + mr + z, mr + z / 2.0L},
          -1};
}

}  // namespace gegenforge
