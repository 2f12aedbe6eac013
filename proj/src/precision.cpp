#include "gegenforge/precision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gegenforge {

std::string_view to_string(Accelerator a) noexcept {
  switch (a) {
    case Accelerator::direct:
      return "direct";
    case Accelerator::kahan:
      return "kahan";
    case Accelerator::levin_u:
      return "levin_u";
    case Accelerator::wynn_epsilon:
      return "wynn_epsilon";
  }
  return "unknown";
}

std::optional<Accelerator> parse_accelerator(std::string_view name) noexcept {
  for (auto a : {Accelerator::direct, Accelerator::kahan, Accelerator::levin_u,
                 Accelerator::wynn_epsilon}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

void PrecisionContext::validate() const {
  if (working_digits < 15)
    throw std::invalid_argument("working_digits must be at least 15");
  if (working_digits > max_working_digits)
    throw std::invalid_argument("working_digits above " +
                                std::to_string(max_working_digits) +
                                " is not supported");
  if (max_terms < 1) throw std::invalid_argument("max_terms must be positive");
  if (!(abs_tol > 0)) throw std::invalid_argument("abs_tol must be positive");
  if (!(rel_tol > 0)) throw std::invalid_argument("rel_tol must be positive");
  if (!(limit_guard > 0 && limit_guard < 0.125L))
    throw std::invalid_argument("limit_guard must lie in (0, 1/8)");
}

real PrecisionContext::tolerance_for(real magnitude) const noexcept {
  return std::max(abs_tol, rel_tol * std::fabs(magnitude));
}

}  // namespace gegenforge
