#pragma once

// Double-exponential quadrature for integrands with algebraic endpoint
// singularities, and the weighted integrals built on it.

#include <cstdint>
#include <functional>
#include <optional>

#include "gegenforge/precision.hpp"

namespace gegenforge {

struct QuadratureResult {
  real value = 0;
  real est_error = 0;
  std::int64_t evaluations = 0;
  int levels = 0;
};

/// Abscissa handed to an integrand core, with its distances to both ends
/// computed without cancellation.
struct QuadraturePoint {
  real x;
  real from_left;
  real from_right;
};

/// core(x) * (x - lower)^left_exponent * (upper - x)^right_exponent on
/// (lower, upper). The core must be finite on the open interval.
struct SingularIntegrand {
  real lower = -1;
  real upper = 1;
  std::function<real(const QuadraturePoint&)> core;
  real left_exponent = 0;
  real right_exponent = 0;
};

/// Largest number of tanh-sinh levels (step 2^-k, k = 0..11).
inline constexpr int max_quadrature_levels = 12;

/// Tanh-sinh with step halving until two successive levels agree within
/// ctx.tolerance_for(|value|) or the rounding floor of the sum. Throws
/// std::domain_error for exponents <= -1 or an empty interval and
/// convergence_error after max_quadrature_levels.
QuadratureResult integrate_singular(const SingularIntegrand& f, const PrecisionContext& ctx);

enum class Lemma5Kind { J, K };

/// J_m(mu) = int_0^pi cos(2m t) / sin^(2mu) t dt
/// K_m(mu) = int_0^pi sin((2m+1) t) / sin^(2mu+1) t dt
/// Throws std::domain_error unless mu < 1/2.
real lemma5_closed(Lemma5Kind kind, real mu, std::int64_t m);
QuadratureResult lemma5_quadrature(Lemma5Kind kind, real mu, std::int64_t m,
                                   const PrecisionContext& ctx);

struct OracleComparison {
  QuadratureResult quadrature;
  std::optional<real> closed;
};

/// int_{-1}^{1} (1 - x^2)^(1/2 - lambda) U_p(x) T_q(x) dx for
/// lambda in (-1/2, 1/2), lambda != 0. The closed value is present when
/// p and q have the same parity.
OracleComparison inner_product_fh(real lambda, std::int64_t p, std::int64_t q,
                                  const PrecisionContext& ctx);

enum class ExpansionKind { U_kind, T_kind };

const char* to_string(ExpansionKind k) noexcept;

/// a_n of U_m(x)(1-x^2)^(1-lambda) (U_kind) or T_m(x)(1-x^2)^(-lambda)
/// (T_kind) in the lambda-Gegenbauer basis, by quadrature.
QuadratureResult coeff_by_quadrature(real lambda, std::int64_t m, std::int64_t n,
                                     ExpansionKind kind, const PrecisionContext& ctx);

enum class NormKind { h_norm, f_norm };

const char* to_string(NormKind k) noexcept;

/// Weighted squared norm of h_{lambda,m} (lambda in (-1/2, 1/2)) or
/// f_{lambda,m} (lambda in (-1/2, 5/2)), lambda != 0. The closed value is
/// present for h_norm, and for f_norm when lambda < 3/2.
OracleComparison norm_by_quadrature(NormKind which, real lambda, std::int64_t m,
                                    const PrecisionContext& ctx);

}  // namespace gegenforge
