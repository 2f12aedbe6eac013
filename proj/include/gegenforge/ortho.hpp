#pragma once

// Gegenbauer, Chebyshev and Legendre polynomials on [-1, 1].

#include <cstdint>
#include <optional>
#include <vector>

#include "gegenforge/precision.hpp"

namespace gegenforge {

/// A point x in [-1, 1], optionally carrying the angle with x = cos(theta).
struct PolyPoint {
  real x = 0;
  std::optional<real> theta;

  /// Throws std::domain_error when |x| > 1.
  static PolyPoint from_x(real x);
  /// Throws std::domain_error when theta is outside [0, pi].
  static PolyPoint from_theta(real theta);
};

/// Parameter intervals, all with lambda != 0:
///   expansion_u (-1/2, 3), expansion_t (-1/2, 1),
///   parseval_h  (-1/2, 1/2), parseval_f (-1/2, 5/2).
enum class LambdaDomain { expansion_u, expansion_t, parseval_h, parseval_f };

const char* to_string(LambdaDomain d) noexcept;
bool lambda_in_domain(real lambda, LambdaDomain d) noexcept;

class LambdaParam {
 public:
  /// Throws std::domain_error when lambda is 0 or outside the domain.
  LambdaParam(real lambda, LambdaDomain domain);

  real value() const noexcept { return lambda_; }
  LambdaDomain domain() const noexcept { return domain_; }

 private:
  real lambda_;
  LambdaDomain domain_;
};

/// C_n^(lambda)(x) by the three-term recurrence. Defined for any lambda; the
/// overloads taking LambdaParam are the checked entry points.
real gegenbauer_eval(real lambda, std::int64_t n, real x);
real gegenbauer_eval(const LambdaParam& lambda, std::int64_t n, const PolyPoint& x);

real chebyshev_T(std::int64_t n, real x);
real chebyshev_U(std::int64_t n, real x);
real chebyshev_T(std::int64_t n, const PolyPoint& x);
real chebyshev_U(std::int64_t n, const PolyPoint& x);

real legendre_eval(std::int64_t n, const PolyPoint& x);

/// 0 for odd k, (-1)^(k/2) bbinom(lambda, k/2) for even k.
real gegenbauer_at_zero(real lambda, std::int64_t k);
real gegenbauer_at_zero(const LambdaParam& lambda, std::int64_t k);

/// sqrt(pi) Gamma(lambda + 1/2) / Gamma(lambda), lambda > -1/2, lambda != 0.
real gegenbauer_norm_prefactor(real lambda);

/// ||C_n^(lambda)||^2 with respect to (1 - x^2)^(lambda - 1/2).
real gegenbauer_norm_sq(real lambda, std::int64_t n);
real gegenbauer_norm_sq(const LambdaParam& lambda, std::int64_t n);

/// c_k = bbinom(lambda, k) bbinom(lambda, n-k), k = 0..n, with
/// C_n^(lambda)(cos t) = sum_k c_k cos((2k - n) t).
std::vector<real> gegenbauer_fourier_coeffs(real lambda, std::int64_t n);
std::vector<real> gegenbauer_fourier_coeffs(const LambdaParam& lambda, std::int64_t n);

}  // namespace gegenforge
