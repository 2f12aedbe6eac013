#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "gegenforge/precision.hpp"

namespace gegenforge {

/// Term generator t(n), n = 0, 1, 2, ...  sum_series calls it with
/// consecutive indices starting at 0.
template <class T>
using TermFn = std::function<T(std::int64_t)>;

template <class T>
struct SeriesResult {
  T value{};
  real est_error = 0;
  std::int64_t terms_used = 0;
  bool converged = false;
  /// Fitted p in |t_n| ~ C n^-p, when the accelerator produced one.
  std::optional<real> decay_exponent;
};

/// Sums t(0) + t(1) + ... according to ctx.accelerator.
///
/// An exactly-zero term ends the series. Non-convergence is reported through
/// `converged == false`; the value is then the best estimate seen. With
/// ctx.working_digits above native_digits accumulation and the sequence
/// transformations run in software extended precision.
template <class T>
SeriesResult<T> sum_series(const TermFn<T>& terms, const PrecisionContext& ctx);

extern template SeriesResult<real> sum_series<real>(const TermFn<real>&,
                                                    const PrecisionContext&);
extern template SeriesResult<cplx> sum_series<cplx>(const TermFn<cplx>&,
                                                    const PrecisionContext&);

/// Least-squares slope p of log|t_n| against log n, sampled log-uniformly on
/// [first, last]. Throws std::domain_error if a sampled term is zero.
real tail_exponent_estimate(const TermFn<real>& terms, std::int64_t first,
                            std::int64_t last, int samples = 64);

/// Same fit over [window, 10*window].
real tail_exponent_estimate(const TermFn<real>& terms, std::int64_t window);

}  // namespace gegenforge
