#pragma once

// Software extended precision: an unevaluated sum hi + lo of two long doubles
// (about 38 significant digits on x87). Only the arithmetic the summation and
// sequence-transformation code needs is provided.

#include <cmath>

#include "gegenforge/precision.hpp"

namespace gegenforge {

struct dd_real {
  real hi = 0;
  real lo = 0;

  constexpr dd_real() = default;
  constexpr dd_real(real h) : hi(h), lo(0) {}  // NOLINT(google-explicit-constructor)
  constexpr dd_real(real h, real l) : hi(h), lo(l) {}

  explicit operator real() const noexcept { return hi + lo; }
};

namespace detail {

inline dd_real quick_two_sum(real a, real b) noexcept {
  const real s = a + b;
  return {s, b - (s - a)};
}

inline dd_real two_sum(real a, real b) noexcept {
  const real s = a + b;
  const real bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

// Veltkamp split for a 64-bit significand.
inline void split(real a, real& hi, real& lo) noexcept {
  constexpr real splitter = 4294967297.0L;  // 2^32 + 1
  const real t = splitter * a;
  hi = t - (t - a);
  lo = a - hi;
}

inline dd_real two_prod(real a, real b) noexcept {
  const real p = a * b;
  real ah, al, bh, bl;
  split(a, ah, al);
  split(b, bh, bl);
  return {p, ((ah * bh - p) + ah * bl + al * bh) + al * bl};
}

}  // namespace detail

inline dd_real operator+(dd_real a, dd_real b) noexcept {
  dd_real s = detail::two_sum(a.hi, b.hi);
  dd_real t = detail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = detail::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return detail::quick_two_sum(s.hi, s.lo);
}

inline dd_real operator-(dd_real a) noexcept { return {-a.hi, -a.lo}; }
inline dd_real operator-(dd_real a, dd_real b) noexcept { return a + (-b); }

inline dd_real operator*(dd_real a, dd_real b) noexcept {
  dd_real p = detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return detail::quick_two_sum(p.hi, p.lo);
}

inline dd_real operator/(dd_real a, dd_real b) noexcept {
  const real q1 = a.hi / b.hi;
  dd_real r = a - b * dd_real(q1);
  const real q2 = r.hi / b.hi;
  r = r - b * dd_real(q2);
  const real q3 = r.hi / b.hi;
  return detail::quick_two_sum(q1, q2) + dd_real(q3);
}

inline dd_real& operator+=(dd_real& a, dd_real b) noexcept { return a = a + b; }
inline dd_real& operator-=(dd_real& a, dd_real b) noexcept { return a = a - b; }
inline dd_real& operator*=(dd_real& a, dd_real b) noexcept { return a = a * b; }

inline real magnitude(dd_real a) noexcept { return std::fabs(a.hi + a.lo); }

struct dd_complex {
  dd_real re;
  dd_real im;

  constexpr dd_complex() = default;
  dd_complex(dd_real r, dd_real i = {}) : re(r), im(i) {}  // NOLINT
  dd_complex(cplx z) : re(z.real()), im(z.imag()) {}  // NOLINT
  dd_complex(real r) : re(r), im(0) {}                // NOLINT

  explicit operator cplx() const noexcept {
    return {static_cast<real>(re), static_cast<real>(im)};
  }
};

inline dd_complex operator+(const dd_complex& a, const dd_complex& b) noexcept {
  return {a.re + b.re, a.im + b.im};
}
inline dd_complex operator-(const dd_complex& a) noexcept { return {-a.re, -a.im}; }
inline dd_complex operator-(const dd_complex& a, const dd_complex& b) noexcept {
  return {a.re - b.re, a.im - b.im};
}
inline dd_complex operator*(const dd_complex& a, const dd_complex& b) noexcept {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline dd_complex operator/(const dd_complex& a, const dd_complex& b) noexcept {
  const dd_real den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
inline dd_complex& operator+=(dd_complex& a, const dd_complex& b) noexcept {
  return a = a + b;
}
inline dd_complex& operator-=(dd_complex& a, const dd_complex& b) noexcept {
  return a = a - b;
}

inline real magnitude(const dd_complex& a) noexcept {
  return std::hypot(static_cast<real>(a.re), static_cast<real>(a.im));
}

}  // namespace gegenforge
