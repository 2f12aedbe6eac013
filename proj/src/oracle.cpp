#include "gegenforge/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gegenforge/errors.hpp"
#include "gegenforge/gamma.hpp"
#include "gegenforge/ortho.hpp"

namespace gegenforge {
namespace {

constexpr real pi = std::numbers::pi_v<real>;
constexpr real half_pi = pi / 2;
constexpr real ln2 = std::numbers::ln2_v<real>;

// log(1 + e^y) without overflow.
real softplus(real y) { return y > 0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y)); }

// log cosh(u)
real log_cosh(real u) {
  const real a = std::fabs(u);
  return a + std::log1p(std::exp(-2 * a)) - ln2;
}

// Node t beyond which the endpoint contribution, roughly
// exp(-2u(1 + alpha)), is below e^-64.
real t_limit(real exponent) {
  const real u = 32 / (1 + exponent);
  return std::min<real>(std::asinh(u / half_pi), 8.5L);
}

struct Node {
  real value;
  real magnitude;
};

class TanhSinh {
 public:
  explicit TanhSinh(const SingularIntegrand& f)
      : f_(f),
        half_((f.upper - f.lower) / 2),
        log_width_(std::log(f.upper - f.lower)),
        t_left_(t_limit(f.left_exponent)),
        t_right_(t_limit(f.right_exponent)) {}

  // Contribution of node t (weight excluding the step).
  Node at(real t) {
    ++evaluations_;
    const real u = half_pi * std::sinh(t);
    const real log_left = log_width_ - softplus(-2 * u);
    const real log_right = log_width_ - softplus(2 * u);
    const real log_weight = std::log(half_pi * std::cosh(t) * half_) - 2 * log_cosh(u);
    const real left = std::exp(log_left);
    const real right = std::exp(log_right);
    const real x = left <= right ? f_.lower + left : f_.upper - right;
    const real scale = std::exp(log_weight + f_.left_exponent * log_left +
                                f_.right_exponent * log_right);
    if (scale == 0) return {0, 0};
    const real c = f_.core({x, left, right});
    if (!std::isfinite(c))
      throw std::domain_error("integrate_singular: core is not finite at x = " +
                              std::to_string(static_cast<double>(x)));
    return {c * scale, std::fabs(c * scale)};
  }

  // Sum of f over nodes j*h, j odd (or all j when first) within the limits.
  Node level_sum(real h, bool first) {
    real sum = 0, mag = 0;
    const std::int64_t step = first ? 1 : 2;
    const std::int64_t start = first ? 0 : 1;
    if (first) {
      const Node c = at(0);
      sum += c.value;
      mag += c.magnitude;
    }
    for (std::int64_t j = std::max<std::int64_t>(start, 1);; j += step) {
      const real t = static_cast<real>(j) * h;
      if (t > t_right_) break;
      const Node n = at(t);
      sum += n.value;
      mag += n.magnitude;
    }
    for (std::int64_t j = std::max<std::int64_t>(start, 1);; j += step) {
      const real t = static_cast<real>(j) * h;
      if (t > t_left_) break;
      const Node n = at(-t);
      sum += n.value;
      mag += n.magnitude;
    }
    return {sum, mag};
  }

  std::int64_t evaluations() const noexcept { return evaluations_; }

 private:
  const SingularIntegrand& f_;
  real half_;
  real log_width_;
  real t_left_;
  real t_right_;
  std::int64_t evaluations_ = 0;
};

void require_mu(real mu) {
  if (!(mu < 0.5L)) throw std::domain_error("J/K integrals need mu < 1/2");
}

// sin(t) / (t (pi - t)) from the distances to 0 and pi.
real sine_ratio(const QuadraturePoint& p) {
  return std::sin(std::min(p.from_left, p.from_right)) / (p.from_left * p.from_right);
}

SingularIntegrand on_unit_interval(std::function<real(const QuadraturePoint&)> core, real exponent) {
  return {-1, 1, std::move(core), exponent, exponent};
}

}  // namespace

QuadratureResult integrate_singular(const SingularIntegrand& f, const PrecisionContext& ctx) {
  ctx.validate();
  if (!(f.left_exponent > -1) || !(f.right_exponent > -1))
    throw std::domain_error("integrate_singular: endpoint exponents must exceed -1");
  if (!(f.upper > f.lower)) throw std::domain_error("integrate_singular: empty interval");
  if (!f.core) throw std::invalid_argument("integrate_singular: missing core");

  TanhSinh rule(f);
  constexpr real eps = std::numeric_limits<real>::epsilon();
  real h = 1;
  Node total = rule.level_sum(h, true);
  real estimate = total.value * h;
  real diff = std::numeric_limits<real>::infinity();
  for (int level = 1; level < max_quadrature_levels; ++level) {
    h /= 2;
    const Node added = rule.level_sum(h, false);
    total.value += added.value;
    total.magnitude += added.magnitude;
    const real next = total.value * h;
    diff = std::fabs(next - estimate);
    estimate = next;
    const real floor = 64 * eps * total.magnitude * h;
    if (level >= 3 && diff <= std::max(ctx.tolerance_for(estimate), floor))
      return {estimate, diff, rule.evaluations(), level + 1};
  }
  throw convergence_error("integrate_singular: no agreement after " +
                          std::to_string(max_quadrature_levels) + " levels (last difference " +
                          std::to_string(static_cast<double>(diff)) + ")");
}

real lemma5_closed(Lemma5Kind kind, real mu, std::int64_t m) {
  require_mu(mu);
  if (m < 0) throw std::domain_error("J/K index must be nonnegative");
  const real j0 = std::sqrt(pi) * std::exp(log_gamma(0.5L - mu) - log_gamma(1 - mu));
  const real top = kind == Lemma5Kind::J ? pochhammer(mu, m) : pochhammer(1 + mu, m);
  return j0 * top / pochhammer(1 - mu, m);
}

QuadratureResult lemma5_quadrature(Lemma5Kind kind, real mu, std::int64_t m,
                                   const PrecisionContext& ctx) {
  require_mu(mu);
  if (m < 0) throw std::domain_error("J/K index must be nonnegative");
  SingularIntegrand f;
  f.lower = 0;
  f.upper = pi;
  f.left_exponent = f.right_exponent = -2 * mu;
  if (kind == Lemma5Kind::J) {
    f.core = [mu, m](const QuadraturePoint& p) {
      return std::cos(2 * static_cast<real>(m) * p.x) * std::pow(sine_ratio(p), -2 * mu);
    };
  } else {
    f.core = [mu, m](const QuadraturePoint& p) {
      // sin((2m+1)t) / sin t
      real dirichlet = 1;
      for (std::int64_t j = 1; j <= m; ++j) dirichlet += 2 * std::cos(2 * static_cast<real>(j) * p.x);
      return dirichlet * std::pow(sine_ratio(p), -2 * mu);
    };
  }
  return integrate_singular(f, ctx);
}

OracleComparison inner_product_fh(real lambda, std::int64_t p, std::int64_t q,
                                  const PrecisionContext& ctx) {
  if (!lambda_in_domain(lambda, LambdaDomain::parseval_h))
    throw std::domain_error("inner_product_fh: lambda outside (-1/2, 1/2) \\ {0}");
  if (p < 0 || q < 0) throw std::domain_error("inner_product_fh: negative index");
  OracleComparison out;
  out.quadrature = integrate_singular(
      on_unit_interval([p, q](const QuadraturePoint& pt) { return chebyshev_U(p, pt.x) * chebyshev_T(q, pt.x); },
                       0.5L - lambda),
      ctx);
  if ((p - q) % 2 == 0) {
    const real mu = lambda - 1;
    const real a = lemma5_closed(Lemma5Kind::K, mu, (p + q) / 2);
    out.closed = p >= q ? (a + lemma5_closed(Lemma5Kind::K, mu, (p - q) / 2)) / 2
                        : (a - lemma5_closed(Lemma5Kind::K, mu, (q - p) / 2 - 1)) / 2;
  }
  return out;
}

const char* to_string(ExpansionKind k) noexcept {
  return k == ExpansionKind::U_kind ? "U_kind" : "T_kind";
}

const char* to_string(NormKind k) noexcept { return k == NormKind::h_norm ? "h_norm" : "f_norm"; }

QuadratureResult coeff_by_quadrature(real lambda, std::int64_t m, std::int64_t n,
                                     ExpansionKind kind, const PrecisionContext& ctx) {
  const auto domain = kind == ExpansionKind::U_kind ? LambdaDomain::expansion_u : LambdaDomain::expansion_t;
  if (!lambda_in_domain(lambda, domain))
    throw std::domain_error(std::string("coeff_by_quadrature: lambda outside ") + to_string(domain));
  if (m < 0 || n < 0) throw std::domain_error("coeff_by_quadrature: negative index");
  // target * weight = U_m (1-x^2)^(1/2)  or  T_m (1-x^2)^(-1/2)
  SingularIntegrand f;
  if (kind == ExpansionKind::U_kind) {
    f = on_unit_interval(
        [lambda, m, n](const QuadraturePoint& p) {
          return chebyshev_U(m, p.x) * gegenbauer_eval(lambda, n, p.x);
        },
        0.5L);
  } else {
    f = on_unit_interval(
        [lambda, m, n](const QuadraturePoint& p) {
          return chebyshev_T(m, p.x) * gegenbauer_eval(lambda, n, p.x);
        },
        -0.5L);
  }
  QuadratureResult r = integrate_singular(f, ctx);
  const real norm = gegenbauer_norm_sq(lambda, n);
  r.value /= norm;
  r.est_error /= std::fabs(norm);
  return r;
}

OracleComparison norm_by_quadrature(NormKind which, real lambda, std::int64_t m,
                                    const PrecisionContext& ctx) {
  if (m < 0) throw std::domain_error("norm_by_quadrature: negative index");
  OracleComparison out;
  if (which == NormKind::h_norm) {
    if (!lambda_in_domain(lambda, LambdaDomain::parseval_h))
      throw std::domain_error("h_norm: lambda outside (-1/2, 1/2) \\ {0}");
    out.quadrature = integrate_singular(
        on_unit_interval([m](const QuadraturePoint& p) {
          const real t = chebyshev_T(m, p.x);
          return t * t;
        }, -lambda - 0.5L),
        ctx);
    out.closed = (lemma5_closed(Lemma5Kind::J, lambda, 0) + lemma5_closed(Lemma5Kind::J, lambda, m)) / 2;
  } else {
    if (!lambda_in_domain(lambda, LambdaDomain::parseval_f))
      throw std::domain_error("f_norm: lambda outside (-1/2, 5/2) \\ {0}");
    out.quadrature = integrate_singular(
        on_unit_interval([m](const QuadraturePoint& p) {
          const real u = chebyshev_U(m, p.x);
          return u * u;
        }, 1.5L - lambda),
        ctx);
    if (lambda < 1.5L)
      out.closed = (lemma5_closed(Lemma5Kind::J, lambda - 1, 0) -
                    lemma5_closed(Lemma5Kind::J, lambda - 1, m + 1)) / 2;
  }
  return out;
}

}  // namespace gegenforge
