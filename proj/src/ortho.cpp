#include "gegenforge/ortho.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gegenforge/gamma.hpp"

namespace gegenforge {
namespace {

constexpr real pi = std::numbers::pi_v<real>;

void require_degree(std::int64_t n) {
  if (n < 0) throw std::domain_error("polynomial degree must be nonnegative");
}

void require_weight_parameter(real lambda) {
  if (!(lambda > -0.5L) || lambda == 0)
    throw std::domain_error("lambda must satisfy -1/2 < lambda != 0");
}

}  // namespace

PolyPoint PolyPoint::from_x(real x) {
  if (!(std::fabs(x) <= 1)) throw std::domain_error("PolyPoint: |x| > 1");
  return {x, std::nullopt};
}

PolyPoint PolyPoint::from_theta(real theta) {
  if (!(theta >= 0 && theta <= pi)) throw std::domain_error("PolyPoint: theta outside [0, pi]");
  return {std::cos(theta), theta};
}

const char* to_string(LambdaDomain d) noexcept {
  switch (d) {
    case LambdaDomain::expansion_u:
      return "expansion_u";
    case LambdaDomain::expansion_t:
      return "expansion_t";
    case LambdaDomain::parseval_h:
      return "parseval_h";
    case LambdaDomain::parseval_f:
      return "parseval_f";
  }
  return "unknown";
}

bool lambda_in_domain(real lambda, LambdaDomain d) noexcept {
  if (!(lambda > -0.5L) || lambda == 0) return false;
  switch (d) {
    case LambdaDomain::expansion_u:
      return lambda < 3;
    case LambdaDomain::expansion_t:
      return lambda < 1;
    case LambdaDomain::parseval_h:
      return lambda < 0.5L;
    case LambdaDomain::parseval_f:
      return lambda < 2.5L;
  }
  return false;
}

LambdaParam::LambdaParam(real lambda, LambdaDomain domain) : lambda_(lambda), domain_(domain) {
  if (!lambda_in_domain(lambda, domain))
    throw std::domain_error("lambda = " + std::to_string(static_cast<double>(lambda)) +
                            " outside " + to_string(domain));
}

real gegenbauer_eval(real lambda, std::int64_t n, real x) {
  require_degree(n);
  if (n == 0) return 1;
  real prev = 1;
  real cur = 2 * lambda * x;
  for (std::int64_t k = 2; k <= n; ++k) {
    const real kr = static_cast<real>(k);
    const real next = (2 * (kr + lambda - 1) * x * cur - (kr + 2 * lambda - 2) * prev) / kr;
    prev = cur;
    cur = next;
  }
  return cur;
}

real gegenbauer_eval(const LambdaParam& lambda, std::int64_t n, const PolyPoint& x) {
  return gegenbauer_eval(lambda.value(), n, x.x);
}

real chebyshev_T(std::int64_t n, real x) {
  require_degree(n);
  if (n == 0) return 1;
  real prev = 1;
  real cur = x;
  for (std::int64_t k = 2; k <= n; ++k) {
    const real next = 2 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

real chebyshev_U(std::int64_t n, real x) {
  require_degree(n);
  if (n == 0) return 1;
  real prev = 1;
  real cur = 2 * x;
  for (std::int64_t k = 2; k <= n; ++k) {
    const real next = 2 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

real chebyshev_T(std::int64_t n, const PolyPoint& x) { return chebyshev_T(n, x.x); }
real chebyshev_U(std::int64_t n, const PolyPoint& x) { return chebyshev_U(n, x.x); }

real legendre_eval(std::int64_t n, const PolyPoint& x) { return gegenbauer_eval(0.5L, n, x.x); }

real gegenbauer_at_zero(real lambda, std::int64_t k) {
  require_degree(k);
  if (k % 2 == 1) return 0;
  const real b = bbinom(lambda, k / 2);
  return (k / 2) % 2 == 0 ? b : -b;
}

real gegenbauer_at_zero(const LambdaParam& lambda, std::int64_t k) {
  return gegenbauer_at_zero(lambda.value(), k);
}

real gegenbauer_norm_prefactor(real lambda) {
  require_weight_parameter(lambda);
  return std::sqrt(pi) * static_cast<real>(gamma_sign(lambda)) *
         std::exp(log_gamma(lambda + 0.5L) - log_gamma(lambda));
}

real gegenbauer_norm_sq(real lambda, std::int64_t n) {
  require_degree(n);
  return gegenbauer_norm_prefactor(lambda) * bbinom(2 * lambda, n) /
         (static_cast<real>(n) + lambda);
}

real gegenbauer_norm_sq(const LambdaParam& lambda, std::int64_t n) {
  return gegenbauer_norm_sq(lambda.value(), n);
}

std::vector<real> gegenbauer_fourier_coeffs(real lambda, std::int64_t n) {
  require_degree(n);
  std::vector<real> b(static_cast<std::size_t>(n + 1));
  for (std::int64_t k = 0; k <= n; ++k) b[k] = bbinom(lambda, k);
  std::vector<real> c(b.size());
  for (std::int64_t k = 0; k <= n; ++k) c[k] = b[k] * b[n - k];
  return c;
}

std::vector<real> gegenbauer_fourier_coeffs(const LambdaParam& lambda, std::int64_t n) {
  return gegenbauer_fourier_coeffs(lambda.value(), n);
}

}  // namespace gegenforge
