#pragma once

// Catalog of the closed-form series identities: each id pairs a summand with
// its closed form, plus a verifier that sums one and compares it to the other.
//
// Shorthand below: bb(a,n) = bbinom(a,n), cb(n) = binom(2n,n)/4^n.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gegenforge/precision.hpp"
#include "gegenforge/series.hpp"

namespace gegenforge {

enum class IdentityId {
  T6a, T6b, T6c, T6d, T7, T8,
  EQ47, EQ48,
  C12, C12B, C13, EQ411, C14, EQ412, C15,
  HYP5F4, HYP4F3,
};

inline constexpr IdentityId all_identity_ids[] = {
    IdentityId::T6a,  IdentityId::T6b,   IdentityId::T6c,    IdentityId::T6d,
    IdentityId::T7,   IdentityId::T8,    IdentityId::EQ47,   IdentityId::EQ48,
    IdentityId::C12,  IdentityId::C12B,  IdentityId::C13,    IdentityId::EQ411,
    IdentityId::C14,  IdentityId::EQ412, IdentityId::C15,    IdentityId::HYP5F4,
    IdentityId::HYP4F3};

std::string_view to_string(IdentityId id) noexcept;
std::optional<IdentityId> parse_identity_id(std::string_view name) noexcept;

/// Which IdentityCase fields an id takes.
struct IdentitySchema {
  bool lambda = false;
  bool m = false;
  bool q = false;
  bool z = false;
};

IdentitySchema schema(IdentityId id) noexcept;

struct IdentityCase {
  IdentityId id = IdentityId::EQ411;
  std::optional<real> lambda;
  std::optional<std::int64_t> m;
  std::optional<std::int64_t> q;
  std::optional<cplx> z;

  /// std::invalid_argument when the fields do not match schema(id);
  /// std::domain_error when λ, m, q or z lie outside the id's domain;
  /// pole_error for C12/HYP5F4 at z ∈ 1/2 + ℤ.
  void validate() const;

  /// True when the summands can be non-real (z present with Im z ≠ 0).
  bool complex_valued() const noexcept;
};

/// First summation index of the display (m for T6c, T7, T8, EQ47, EQ48, C15;
/// m+1 for T6d; 0 otherwise).
std::int64_t start_index(const IdentityCase& c);

/// Summand at index n. Throws index_error when n < start_index(c).
cplx identity_term(const IdentityCase& c, std::int64_t n);

/// Right-hand side. Within ctx.limit_guard of a removable point the limit
/// branch is used.
cplx identity_closed_form(const IdentityCase& c, const PrecisionContext& ctx);

/// (λ)_a/(2−λ)_a + (λ)_b/(2−λ)_b, the bracket of the T6c closed form.
real t6c_bracket(real lambda, std::int64_t a, std::int64_t b);

/// Accelerator used by verify_identity when none is given.
Accelerator default_accelerator(IdentityId id) noexcept;

struct VerificationReport {
  IdentityCase identity;
  cplx closed_value{};
  cplx series_value{};
  real abs_err = 0;
  real rel_err = 0;
  real series_est_error = 0;
  std::int64_t terms_used = 0;
  Accelerator accelerator = Accelerator::levin_u;
  bool converged = false;
  double runtime_ms = 0;
};

VerificationReport verify_identity(const IdentityCase& c, const PrecisionContext& ctx);
VerificationReport verify_identity(const IdentityCase& c, const PrecisionContext& ctx,
                                   Accelerator accelerator);

/// Σ_{n=0}^{N} Π(upper)_n / Π(lower)_n · arg^n / n!, summed under ctx
/// (max_terms is clipped to N+1). arg must be ±1. Throws pole_error when a
/// lower parameter is a nonpositive integer reached within N terms.
SeriesResult<cplx> hyp_pfq_partial(std::span<const cplx> upper, std::span<const cplx> lower,
                                   int arg, std::int64_t N, const PrecisionContext& ctx);

/// Parameter lists of the two hypergeometric identities.
struct HypParams {
  std::vector<cplx> upper;
  std::vector<cplx> lower;
  int arg = 1;
};

HypParams hyp5f4_params(cplx z);
HypParams hyp4f3_params(std::int64_t m, cplx z);

}  // namespace gegenforge
