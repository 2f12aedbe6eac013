#include "gegenforge/gamma.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "gegenforge/errors.hpp"

namespace gegenforge {
namespace {

constexpr real pi = std::numbers::pi_v<real>;

// B_{2k} / (2k (2k-1)), k = 1..10
constexpr std::array<real, 10> stirling_coeffs = {
    1.0L / 12.0L,          -1.0L / 360.0L,        1.0L / 1260.0L,
    -1.0L / 1680.0L,       1.0L / 1188.0L,        -691.0L / 360360.0L,
    1.0L / 156.0L,         -3617.0L / 122400.0L,  43867.0L / 244188.0L,
    -174611.0L / 125400.0L};

constexpr real stirling_min_real = 20.0L;

bool near_pole(real x) noexcept {
  if (x > 0.5L) return false;
  const real nearest = std::nearbyint(x);
  return std::fabs(x - nearest) <=
         8 * std::numeric_limits<real>::epsilon() * std::fmax(1.0L, std::fabs(x));
}

// Count of j in [0, n) with a + j < 0.
std::int64_t negative_factor_count(real a, std::int64_t n) noexcept {
  if (a >= 0) return 0;
  const auto count = static_cast<std::int64_t>(std::floor(-a)) + 1;
  return count < n ? count : n;
}

real lgamma_abs(real x) {
  int sign = 0;
  return ::lgammal_r(x, &sign);
}

cplx stirling_log_gamma(cplx w) {
  const cplx inv = 1.0L / w;
  const cplx inv2 = inv * inv;
  cplx series = 0;
  cplx power = inv;
  for (real c : stirling_coeffs) {
    series += c * power;
    power *= inv2;
  }
  return (w - 0.5L) * std::log(w) - w + 0.5L * std::log(2 * pi) + series;
}

}  // namespace

bool is_nonpositive_integer(real x) noexcept {
  return x <= 0 && x == std::floor(x);
}

bool is_nonpositive_integer(cplx z) noexcept {
  return z.imag() == 0 && is_nonpositive_integer(z.real());
}

real log_gamma(real x) {
  if (near_pole(x)) throw pole_error("log_gamma: argument is a nonpositive integer");
  return lgamma_abs(x);
}

int gamma_sign(real x) {
  if (near_pole(x)) throw pole_error("gamma_sign: argument is a nonpositive integer");
  int sign = 1;
  ::lgammal_r(x, &sign);
  return sign;
}

real gamma_fn(real x) {
  if (near_pole(x)) throw pole_error("gamma: argument is a nonpositive integer");
  return std::tgamma(x);
}

cplx log_gamma(cplx z) {
  if (z.imag() == 0) {
    if (near_pole(z.real())) throw pole_error("log_gamma: argument is a nonpositive integer");
    if (z.real() > 0) return {lgamma_abs(z.real()), 0};
  }
  // Shift right until Stirling is accurate; the sum of principal logs keeps
  // the result on the principal branch.
  cplx shift_logs = 0;
  cplx w = z;
  while (w.real() < stirling_min_real) {
    shift_logs += std::log(w);
    w += 1.0L;
  }
  return stirling_log_gamma(w) - shift_logs;
}

real pochhammer(real a, std::int64_t n) {
  if (n < pochhammer_log_threshold || is_nonpositive_integer(a)) {
    if (is_nonpositive_integer(a) && n > -a) return 0;
    real p = 1;
    for (std::int64_t j = 0; j < n; ++j) p *= a + static_cast<real>(j);
    return p;
  }
  const real sign = negative_factor_count(a, n) % 2 == 0 ? 1 : -1;
  return sign * std::exp(lgamma_abs(a + static_cast<real>(n)) - lgamma_abs(a));
}

cplx pochhammer(cplx a, std::int64_t n) {
  if (a.imag() == 0) return pochhammer(a.real(), n);
  if (n < pochhammer_log_threshold) {
    cplx p = 1;
    for (std::int64_t j = 0; j < n; ++j) p *= a + static_cast<real>(j);
    return p;
  }
  return std::exp(log_gamma(a + static_cast<real>(n)) - log_gamma(a));
}

real pochhammer_ratio(real a, real b, std::int64_t n) {
  if (is_nonpositive_integer(b) && n > -b)
    throw pole_error("pochhammer_ratio: denominator vanishes");
  if (is_nonpositive_integer(a) && n > -a) return 0;
  if (n < pochhammer_log_threshold || is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    real p = 1;
    for (std::int64_t j = 0; j < n; ++j) {
      const real jr = static_cast<real>(j);
      p *= (a + jr) / (b + jr);
    }
    return p;
  }
  const real nr = static_cast<real>(n);
  const std::int64_t flips = negative_factor_count(a, n) + negative_factor_count(b, n);
  return (flips % 2 == 0 ? 1 : -1) *
         std::exp(lgamma_abs(a + nr) - lgamma_abs(a) - lgamma_abs(b + nr) + lgamma_abs(b));
}

cplx pochhammer_ratio(cplx a, cplx b, std::int64_t n) {
  if (a.imag() == 0 && b.imag() == 0) return pochhammer_ratio(a.real(), b.real(), n);
  if (is_nonpositive_integer(b) && n > -b.real())
    throw pole_error("pochhammer_ratio: denominator vanishes");
  if (is_nonpositive_integer(a) && n > -a.real()) return 0;
  if (n < pochhammer_log_threshold) {
    cplx p = 1;
    for (std::int64_t j = 0; j < n; ++j) {
      const real jr = static_cast<real>(j);
      p *= (a + jr) / (b + jr);
    }
    return p;
  }
  const real nr = static_cast<real>(n);
  return std::exp(log_gamma(a + nr) - log_gamma(a) - log_gamma(b + nr) + log_gamma(b));
}

real bbinom(real a, std::int64_t n) {
  if (n < pochhammer_log_threshold || is_nonpositive_integer(a)) {
    if (is_nonpositive_integer(a) && n > -a) return 0;
    real p = 1;
    for (std::int64_t j = 0; j < n; ++j)
      p *= (a + static_cast<real>(j)) / static_cast<real>(j + 1);
    return p;
  }
  const real nr = static_cast<real>(n);
  const real sign = negative_factor_count(a, n) % 2 == 0 ? 1 : -1;
  return sign * std::exp(lgamma_abs(a + nr) - lgamma_abs(a) - lgamma_abs(nr + 1));
}

cplx bbinom(cplx a, std::int64_t n) {
  if (a.imag() == 0) return bbinom(a.real(), n);
  if (n < pochhammer_log_threshold) {
    cplx p = 1;
    for (std::int64_t j = 0; j < n; ++j)
      p *= (a + static_cast<real>(j)) / static_cast<real>(j + 1);
    return p;
  }
  const real nr = static_cast<real>(n);
  return std::exp(log_gamma(a + nr) - log_gamma(a) - lgamma_abs(nr + 1));
}

real binomial_general(real a, std::int64_t n) {
  if (n < pochhammer_log_threshold) {
    real p = 1;
    for (std::int64_t j = 0; j < n; ++j)
      p *= (a - static_cast<real>(j)) / static_cast<real>(j + 1);
    return p;
  }
  return (n % 2 == 0 ? 1 : -1) * bbinom(-a, n);
}

cplx binomial_general(cplx a, std::int64_t n) {
  if (a.imag() == 0) return binomial_general(a.real(), n);
  if (n < pochhammer_log_threshold) {
    cplx p = 1;
    for (std::int64_t j = 0; j < n; ++j)
      p *= (a - static_cast<real>(j)) / static_cast<real>(j + 1);
    return p;
  }
  return (n % 2 == 0 ? 1.0L : -1.0L) * bbinom(-a, n);
}

real harmonic(std::int64_t k) {
  real sum = 0;
  real comp = 0;
  for (std::int64_t j = 1; j <= k; ++j) {
    const real y = 1.0L / static_cast<real>(j) - comp;
    const real t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

real central_binomial_scaled(std::int64_t n) { return bbinom(0.5L, n); }

}  // namespace gegenforge
