#pragma once

// Gegenbauer expansions of
//   f_{lambda,m}(x) = U_m(x) (1 - x^2)^(1 - lambda),  lambda in (-1/2, 3) \ {0}
//   h_{lambda,m}(x) = T_m(x) (1 - x^2)^(-lambda),     lambda in (-1/2, 1) \ {0}
// Only the degrees m + 2q carry nonzero coefficients; the API indexes them by q.

#include <cstdint>
#include <vector>

#include "gegenforge/oracle.hpp"
#include "gegenforge/ortho.hpp"
#include "gegenforge/precision.hpp"
#include "gegenforge/series.hpp"

namespace gegenforge {

struct ExpansionParams {
  /// Throws std::domain_error when lambda is outside the kind's interval or m < 0.
  ExpansionParams(real lambda, std::int64_t m, ExpansionKind kind);

  LambdaParam lambda;
  std::int64_t m;
  ExpansionKind kind;
};

/// Distance from +-1 inside which partial sums are refused, except for the
/// U_kind expansion at lambda = 1/2, whose series converges on [-1, 1].
inline constexpr real interior_guard = 1e-6L;

/// a_{m+2q}(f_{lambda,m})
real coeff_f(real lambda, std::int64_t m, std::int64_t q);
/// a_{m+2q}(h_{lambda,m})
real coeff_h(real lambda, std::int64_t m, std::int64_t q);
real coefficient(const ExpansionParams& p, std::int64_t q);

/// Direct evaluation of f_{lambda,m} / h_{lambda,m}. Throws std::domain_error
/// at |x| = 1 when the power of (1 - x^2) is negative.
real target_f(const ExpansionParams& p, const PolyPoint& x);
real target_h(const ExpansionParams& p, const PolyPoint& x);
real target(const ExpansionParams& p, const PolyPoint& x);

/// S_0, S_1, ..., S_N with S_N = sum_{q<=N} coefficient(p, q) C_{m+2q}(x).
std::vector<real> partial_sums(const ExpansionParams& p, const PolyPoint& x, std::int64_t N);

/// S_N, with est_error = |S_N - target| and converged when that is within
/// ctx.tolerance_for(target). Throws std::domain_error outside the interior
/// guard and std::invalid_argument when N + 1 exceeds ctx.max_terms.
SeriesResult<real> partial_sum(const ExpansionParams& p, const PolyPoint& x, std::int64_t N,
                               const PrecisionContext& ctx);

/// Mean of the last `fraction` of the sequence (at least one element).
real cesaro_tail_mean(const std::vector<real>& sums, real fraction = 0.25L);

/// As partial_sum, with the value replaced by the Cesaro (C,1) mean of
/// S_{3N/4}, ..., S_N.
SeriesResult<real> cesaro_partial_sum(const ExpansionParams& p, const PolyPoint& x,
                                      std::int64_t N, const PrecisionContext& ctx);

}  // namespace gegenforge
