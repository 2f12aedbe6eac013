#pragma once

// Gamma-family building blocks: log-gamma, rising factorials and the two
// generalized binomials that every coefficient in this library is built from.
//
// Notation: bbinom(a, n) = (a)_n / n! = binom(a+n-1, n), the "multiset"
// binomial, and binomial_general(a, n) = a(a-1)...(a-n+1)/n!.

#include <cstdint>

#include "gegenforge/precision.hpp"

namespace gegenforge {

/// Degree at which Pochhammer-type products switch from the direct product
/// to log-gamma differences.
inline constexpr std::int64_t pochhammer_log_threshold = 64;

/// log|Γ(x)|. Throws pole_error at (or next to) a nonpositive integer.
real log_gamma(real x);

/// Principal log-gamma (analytic continuation of the real log-gamma, cut on
/// the negative real axis). Throws pole_error at nonpositive integers.
cplx log_gamma(cplx z);

/// Sign of Γ(x) for real x away from the poles.
int gamma_sign(real x);

/// Γ(x) for real x.
real gamma_fn(real x);

real pochhammer(real a, std::int64_t n);
cplx pochhammer(cplx a, std::int64_t n);

/// (a)_n / (b)_n without forming either factor. Zero when a is a
/// nonpositive integer reached within n steps; pole_error when b is.
real pochhammer_ratio(real a, real b, std::int64_t n);
cplx pochhammer_ratio(cplx a, cplx b, std::int64_t n);

real bbinom(real a, std::int64_t n);
cplx bbinom(cplx a, std::int64_t n);

real binomial_general(real a, std::int64_t n);
cplx binomial_general(cplx a, std::int64_t n);

/// H_k = 1 + 1/2 + ... + 1/k, H_0 = 0.
real harmonic(std::int64_t k);

/// binom(2n, n) / 4^n, i.e. bbinom(1/2, n).
real central_binomial_scaled(std::int64_t n);

/// True when x is exactly one of 0, -1, -2, ...
bool is_nonpositive_integer(real x) noexcept;
bool is_nonpositive_integer(cplx z) noexcept;

}  // namespace gegenforge
