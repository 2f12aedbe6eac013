#include "gegenforge/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gegenforge/gamma.hpp"

namespace gegenforge {
namespace {

constexpr real pi = std::numbers::pi_v<real>;

LambdaDomain domain_for(ExpansionKind kind) {
  return kind == ExpansionKind::U_kind ? LambdaDomain::expansion_u : LambdaDomain::expansion_t;
}

void require_lambda(real lambda, ExpansionKind kind) {
  if (!lambda_in_domain(lambda, domain_for(kind)))
    throw std::domain_error(std::string("lambda outside ") + to_string(domain_for(kind)));
}

void require_indices(std::int64_t m, std::int64_t q) {
  if (m < 0 || q < 0) throw std::domain_error("expansion indices must be nonnegative");
}

// sqrt(pi) Gamma(lambda) / Gamma(lambda + 1/2)
real leading_factor(real lambda) { return pi / gegenbauer_norm_prefactor(lambda); }

bool endpoint_allowed(const ExpansionParams& p) {
  return p.kind == ExpansionKind::U_kind && p.lambda.value() == 0.5L;
}

void require_interior(const ExpansionParams& p, const PolyPoint& x) {
  if (std::fabs(x.x) > 1) throw std::domain_error("|x| > 1");
  if (!endpoint_allowed(p) && std::fabs(x.x) > 1 - interior_guard)
    throw std::domain_error("partial sums are only evaluated for |x| <= 1 - 1e-6");
}

}  // namespace

ExpansionParams::ExpansionParams(real lambda_value, std::int64_t m_value, ExpansionKind k)
    : lambda(lambda_value, domain_for(k)), m(m_value), kind(k) {
  if (m < 0) throw std::domain_error("m must be nonnegative");
}

real coeff_f(real lambda, std::int64_t m, std::int64_t q) {
  require_lambda(lambda, ExpansionKind::U_kind);
  require_indices(m, q);
  const real mr = static_cast<real>(m);
  const real qr = static_cast<real>(q);
  const real lower = bbinom(lambda - 1, q);
  if (lower == 0) return 0;
  return (mr + 1) * leading_factor(lambda) / 2 * (mr + lambda + 2 * qr) / (mr + 1 + qr) * lower *
         bbinom(lambda, m + q) / bbinom(2 * lambda, m + 2 * q);
}

real coeff_h(real lambda, std::int64_t m, std::int64_t q) {
  require_lambda(lambda, ExpansionKind::T_kind);
  require_indices(m, q);
  const real mr = static_cast<real>(m);
  const real qr = static_cast<real>(q);
  return leading_factor(lambda) * (lambda + mr + 2 * qr) * bbinom(lambda, q) *
         bbinom(lambda, m + q) / bbinom(2 * lambda, m + 2 * q);
}

real coefficient(const ExpansionParams& p, std::int64_t q) {
  return p.kind == ExpansionKind::U_kind ? coeff_f(p.lambda.value(), p.m, q)
                                         : coeff_h(p.lambda.value(), p.m, q);
}

real target_f(const ExpansionParams& p, const PolyPoint& x) {
  if (p.kind != ExpansionKind::U_kind) throw std::invalid_argument("target_f needs U_kind");
  if (std::fabs(x.x) > 1) throw std::domain_error("|x| > 1");
  const real power = 1 - p.lambda.value();
  const real base = (1 - x.x) * (1 + x.x);
  if (base == 0 && power < 0) throw std::domain_error("target_f: endpoint singularity");
  return chebyshev_U(p.m, x.x) * (power == 0 ? 1 : std::pow(base, power));
}

real target_h(const ExpansionParams& p, const PolyPoint& x) {
  if (p.kind != ExpansionKind::T_kind) throw std::invalid_argument("target_h needs T_kind");
  if (std::fabs(x.x) > 1) throw std::domain_error("|x| > 1");
  const real power = -p.lambda.value();
  const real base = (1 - x.x) * (1 + x.x);
  if (base == 0 && power < 0) throw std::domain_error("target_h: endpoint singularity");
  return chebyshev_T(p.m, x.x) * std::pow(base, power);
}

real target(const ExpansionParams& p, const PolyPoint& x) {
  return p.kind == ExpansionKind::U_kind ? target_f(p, x) : target_h(p, x);
}

std::vector<real> partial_sums(const ExpansionParams& p, const PolyPoint& x, std::int64_t N) {
  if (N < 0) throw std::domain_error("N must be nonnegative");
  require_interior(p, x);
  const real lambda = p.lambda.value();
  const std::int64_t top = p.m + 2 * N;
  std::vector<real> out;
  out.reserve(static_cast<std::size_t>(N + 1));
  // One pass of the three-term recurrence; degrees m, m+2, ... are summed.
  real prev = 0;
  real cur = 1;
  real sum = 0;
  real comp = 0;
  for (std::int64_t n = 0; n <= top; ++n) {
    if (n == 1) {
      prev = 1;
      cur = 2 * lambda * x.x;
    } else if (n >= 2) {
      const real nr = static_cast<real>(n);
      const real next = (2 * (nr + lambda - 1) * x.x * cur - (nr + 2 * lambda - 2) * prev) / nr;
      prev = cur;
      cur = next;
    }
    if (n < p.m || (n - p.m) % 2 != 0) continue;
    const real y = coefficient(p, (n - p.m) / 2) * cur - comp;
    const real t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    out.push_back(sum);
  }
  return out;
}

namespace {

SeriesResult<real> finish(const ExpansionParams& p, const PolyPoint& x, real value,
                          std::int64_t N, const PrecisionContext& ctx) {
  SeriesResult<real> r;
  r.value = value;
  r.terms_used = N + 1;
  const real exact = target(p, x);
  r.est_error = std::fabs(value - exact);
  r.converged = r.est_error <= ctx.tolerance_for(exact);
  return r;
}

void require_budget(std::int64_t N, const PrecisionContext& ctx) {
  ctx.validate();
  if (N + 1 > ctx.max_terms) throw std::invalid_argument("N + 1 exceeds max_terms");
}

}  // namespace

SeriesResult<real> partial_sum(const ExpansionParams& p, const PolyPoint& x, std::int64_t N,
                               const PrecisionContext& ctx) {
  require_budget(N, ctx);
  const auto sums = partial_sums(p, x, N);
  return finish(p, x, sums.back(), N, ctx);
}

real cesaro_tail_mean(const std::vector<real>& sums, real fraction) {
  if (sums.empty()) throw std::invalid_argument("cesaro_tail_mean: empty sequence");
  if (!(fraction > 0 && fraction <= 1)) throw std::invalid_argument("cesaro_tail_mean: bad fraction");
  const auto count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(fraction * static_cast<real>(sums.size()))));
  real sum = 0;
  real comp = 0;
  for (std::size_t i = sums.size() - count; i < sums.size(); ++i) {
    const real y = sums[i] - comp;
    const real t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<real>(count);
}

SeriesResult<real> cesaro_partial_sum(const ExpansionParams& p, const PolyPoint& x,
                                      std::int64_t N, const PrecisionContext& ctx) {
  require_budget(N, ctx);
  return finish(p, x, cesaro_tail_mean(partial_sums(p, x, N)), N, ctx);
}

}  // namespace gegenforge
