#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace gegenforge {

using real = long double;
using cplx = std::complex<long double>;

/// Digits carried natively by `real`.
inline constexpr int native_digits = std::numeric_limits<real>::digits10;

/// Largest working precision the software extended path can honour.
inline constexpr int max_working_digits = 36;

enum class Accelerator { direct, kahan, levin_u, wynn_epsilon };

std::string_view to_string(Accelerator a) noexcept;
std::optional<Accelerator> parse_accelerator(std::string_view name) noexcept;

/// Summation, acceleration and tolerance policy shared by every evaluation.
///
/// `limit_guard` is the half-width of the band around removable singularities
/// of closed forms; inside it the analytic limit branch is used.
struct PrecisionContext {
  int working_digits = native_digits;
  std::int64_t max_terms = 100000;
  real abs_tol = 1e-15L;
  real rel_tol = 1e-10L;
  Accelerator accelerator = Accelerator::levin_u;
  real limit_guard = 1e-3L;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  /// max(abs_tol, rel_tol*|value|)
  real tolerance_for(real magnitude) const noexcept;

  bool extended() const noexcept { return working_digits > native_digits; }

  PrecisionContext with_accelerator(Accelerator a) const {
    PrecisionContext c = *this;
    c.accelerator = a;
    return c;
  }
  PrecisionContext with_rel_tol(real tol) const {
    PrecisionContext c = *this;
    c.rel_tol = tol;
    return c;
  }
  PrecisionContext with_max_terms(std::int64_t n) const {
    PrecisionContext c = *this;
    c.max_terms = n;
    return c;
  }
};

}  // namespace gegenforge
