#include "gegenforge/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "gegenforge/extended.hpp"

namespace gegenforge {
namespace {

constexpr real infinity = std::numeric_limits<real>::infinity();

real mag(real x) noexcept { return std::fabs(x); }
real mag(const cplx& z) noexcept { return std::abs(z); }
real mag(dd_real x) noexcept { return magnitude(x); }
real mag(const dd_complex& z) noexcept { return magnitude(z); }

template <class T>
struct Scalar;
template <>
struct Scalar<real> {
  using extended = dd_real;
};
template <>
struct Scalar<cplx> {
  using extended = dd_complex;
};

template <class T, class S>
T narrow(const S& s) {
  if constexpr (std::is_same_v<S, T>)
    return s;
  else
    return static_cast<T>(s);
}

// Opposite signs (real) or an obtuse angle between consecutive terms (complex).
bool opposes(real a, real b) noexcept { return a * b < 0; }
bool opposes(const cplx& a, const cplx& b) noexcept {
  return (a * std::conj(b)).real() < 0;
}

// Slope of log|t_n| against log n on [lo, hi], negated.
std::optional<real> fit_decay(const std::vector<real>& mags, std::int64_t lo,
                              std::int64_t hi, int samples = 48) {
  lo = std::max<std::int64_t>(lo, 1);
  hi = std::min<std::int64_t>(hi, static_cast<std::int64_t>(mags.size()) - 1);
  if (hi - lo < 4) return std::nullopt;
  real sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  std::int64_t last = -1;
  const real llo = std::log(static_cast<real>(lo));
  const real lhi = std::log(static_cast<real>(hi));
  for (int i = 0; i < samples; ++i) {
    const real u = llo + (lhi - llo) * static_cast<real>(i) / (samples - 1);
    const auto n = static_cast<std::int64_t>(std::llround(std::exp(u)));
    if (n == last || n < lo || n > hi) continue;
    last = n;
    if (!(mags[n] > 0)) return std::nullopt;
    const real x = std::log(static_cast<real>(n));
    const real y = std::log(mags[n]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 4) return std::nullopt;
  const real den = count * sxx - sx * sx;
  if (den == 0) return std::nullopt;
  return -(count * sxy - sx * sy) / den;
}

// Bookkeeping shared by all summation modes: term magnitudes, the last few
// terms, and a tail bound for the plain partial sum.
template <class T>
class TermHistory {
 public:
  void push(const T& t) {
    mags_.push_back(mag(t));
    recent_[static_cast<std::size_t>(count() - 1) % recent_.size()] = t;
  }

  std::int64_t count() const noexcept {
    return static_cast<std::int64_t>(mags_.size());
  }

  static bool checkpoint(std::int64_t count) noexcept {
    return count >= 16 && ((count & (count - 1)) == 0 || count % 128 == 0);
  }

  // Bound on |S - S_n| for the plain partial sum.
  real tail_bound() {
    const std::int64_t n = count();
    const real last = mags_.back();
    if (alternating()) return last;
    exponent_ = fit_decay(mags_, n / 2, n - 1);
    if (exponent_ && *exponent_ > 1.05L)
      return last * static_cast<real>(n) / (*exponent_ - 1) + last;
    return infinity;
  }

  std::optional<real> exponent() {
    if (!exponent_ && count() >= 16) exponent_ = fit_decay(mags_, count() / 2, count() - 1);
    return exponent_;
  }

  // Consecutive recent terms oppose each other and shrink in magnitude.
  bool alternating() const {
    if (count() < static_cast<std::int64_t>(recent_.size())) return false;
    const std::int64_t n = count();
    const auto size = static_cast<std::int64_t>(recent_.size());
    for (std::int64_t k = n - size + 1; k < n; ++k) {
      const T& cur = recent_[static_cast<std::size_t>(k) % recent_.size()];
      const T& prev = recent_[static_cast<std::size_t>(k - 1) % recent_.size()];
      if (!opposes(cur, prev)) return false;
      if (mags_[k] > mags_[k - 1]) return false;
    }
    return true;
  }

 private:
  std::vector<real> mags_;
  std::array<T, 6> recent_{};
  std::optional<real> exponent_;
};

template <class T, class S>
SeriesResult<T> direct_sum(const TermFn<T>& terms, const PrecisionContext& ctx,
                           bool compensated) {
  SeriesResult<T> out;
  TermHistory<T> history;
  S sum{};
  S comp{};
  real bound = infinity;
  for (std::int64_t n = 0; n < ctx.max_terms; ++n) {
    const T t = terms(n);
    out.terms_used = n + 1;
    if (t == T(0)) {
      out.value = narrow<T>(sum);
      out.est_error = 0;
      out.converged = true;
      out.decay_exponent = history.exponent();
      return out;
    }
    if constexpr (std::is_same_v<S, T>) {
      if (compensated) {
        const S y = S(t) - comp;
        const S s = sum + y;
        comp = (s - sum) - y;
        sum = s;
      } else {
        sum += S(t);
      }
    } else {
      sum += S(t);
    }
    history.push(t);
    if (TermHistory<T>::checkpoint(n + 1)) {
      bound = history.tail_bound();
      if (bound <= ctx.tolerance_for(mag(sum))) {
        out.value = narrow<T>(sum);
        out.est_error = bound;
        out.converged = true;
        out.decay_exponent = history.exponent();
        return out;
      }
    }
  }
  out.value = narrow<T>(sum);
  out.est_error = std::isfinite(bound) ? bound : history.tail_bound();
  out.converged = false;
  out.decay_exponent = history.exponent();
  return out;
}

template <class W>
W int_pow(W base, int e) {
  W result(1);
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

// Levin u-transform, beta = 1, of the partial sums S_{n0}..S_{n0+k}:
//   sum_j (-1)^j C(k,j) ((b+n0+j)/(b+n0+k))^(k-1) S_j/w_j
//   -------------------------------------------------------,  w_j = (b+j) t_j
//   sum_j (-1)^j C(k,j) ((b+n0+j)/(b+n0+k))^(k-1) 1/w_j
template <class S, class W>
S levin_estimate(const std::vector<S>& partial, const std::vector<S>& inv_omega,
                 std::int64_t n0, int k) {
  constexpr real beta = 1;
  S num{};
  S den{};
  real binom = 1;  // C(k, j), exact for k <= 64
  const W last = W(beta + static_cast<real>(n0 + k));
  for (int j = 0; j <= k; ++j) {
    const W ratio = W(beta + static_cast<real>(n0 + j)) / last;
    W c = int_pow(ratio, k - 1) * W(binom);
    if (j % 2 == 1) c = -c;
    const S cs = S(c);
    num += cs * partial[n0 + j] * inv_omega[n0 + j];
    den += cs * inv_omega[n0 + j];
    binom = binom * static_cast<real>(k - j) / static_cast<real>(j + 1);
  }
  return num / den;
}

template <class T, class S, class W>
SeriesResult<T> levin_sum(const TermFn<T>& terms, const PrecisionContext& ctx) {
  constexpr int max_order = 60;
  constexpr real beta = 1;

  SeriesResult<T> out;
  TermHistory<T> history;
  std::vector<S> partial;
  std::vector<S> inv_omega;
  S sum{};
  bool terminated = false;

  auto fetch = [&](std::int64_t idx) {
    while (static_cast<std::int64_t>(partial.size()) <= idx && !terminated) {
      const auto n = static_cast<std::int64_t>(partial.size());
      const T t = terms(n);
      if (t == T(0)) {
        terminated = true;
        break;
      }
      sum += S(t);
      partial.push_back(sum);
      inv_omega.push_back(S(real{1}) / (S(t) * S(W(beta + static_cast<real>(n)))));
      history.push(t);
    }
    return !terminated;
  };

  T best{};
  real best_err = infinity;
  bool have_best = false;
  std::int64_t n0 = 0;

  while (n0 + 3 <= ctx.max_terms) {
    std::vector<S> est;
    real sweep_best = infinity;
    int sweep_best_k = 0;
    for (int k = 0; k <= max_order && n0 + k < ctx.max_terms; ++k) {
      if (!fetch(n0 + k)) {
        out.value = narrow<T>(sum);
        out.est_error = 0;
        out.converged = true;
        out.terms_used = static_cast<std::int64_t>(partial.size()) + 1;
        out.decay_exponent = history.exponent();
        return out;
      }
      est.push_back(k == 0 ? partial[n0] : levin_estimate<S, W>(partial, inv_omega, n0, k));
      if (k < 3) continue;
      const real err = std::max(mag(S(est[k] - est[k - 1])), mag(S(est[k - 1] - est[k - 2])));
      if (!std::isfinite(err)) break;
      if (err < best_err || !have_best) {
        best = narrow<T>(est[k]);
        best_err = err;
        have_best = true;
      }
      if (err <= ctx.tolerance_for(mag(est[k]))) {
        out.value = narrow<T>(est[k]);
        out.est_error = err;
        out.converged = true;
        out.terms_used = static_cast<std::int64_t>(partial.size());
        out.decay_exponent = history.exponent();
        return out;
      }
      if (err < sweep_best) {
        sweep_best = err;
        sweep_best_k = k;
      }
      // Rounding has taken over; a fresh sweep further out does better.
      if (k > sweep_best_k + 10 && err > 1e3L * sweep_best) break;
    }
    n0 = 2 * n0 + 16;
  }

  if (!have_best && ctx.max_terms > 0 && !fetch(ctx.max_terms - 1)) {
    out.value = narrow<T>(sum);
    out.est_error = 0;
    out.converged = true;
    out.terms_used = static_cast<std::int64_t>(partial.size()) + 1;
    out.decay_exponent = history.exponent();
    return out;
  }
  out.value = have_best ? best : narrow<T>(sum);
  out.est_error = best_err;
  out.converged = false;
  out.terms_used = static_cast<std::int64_t>(partial.size());
  out.decay_exponent = history.exponent();
  return out;
}

// One epsilon table fed a sequence element by element; keeps the current
// antidiagonal only.
template <class S>
class EpsilonTable {
 public:
  explicit EpsilonTable(std::size_t width) : width_(width) {}

  // Returns the error claimed for the newest estimate (infinity until three
  // estimates exist).
  real push(const S& s) {
    cur_.clear();
    cur_.push_back(s);
    for (std::size_t k = 0; k < prev_.size() && k < width_; ++k) {
      const S diff = cur_[k] - prev_[k];
      if (mag(diff) == 0) break;
      const S lower = k >= 1 ? prev_[k - 1] : S{};
      cur_.push_back(lower + S(real{1}) / diff);
    }
    const std::size_t top = (cur_.size() - 1) / 2 * 2;
    estimates_.push_back(cur_[top]);
    prev_.swap(cur_);
    const auto m = estimates_.size();
    if (m < 3) return infinity;
    const real err = std::max(mag(S(estimates_[m - 1] - estimates_[m - 2])),
                              mag(S(estimates_[m - 2] - estimates_[m - 3])));
    return std::isfinite(err) ? err : infinity;
  }

  const S& estimate() const { return estimates_.back(); }

 private:
  std::size_t width_;
  std::vector<S> prev_;
  std::vector<S> cur_;
  std::vector<S> estimates_;
};

// Wynn epsilon. Alternating tails run the table on consecutive partial sums.
// Fixed-sign algebraic tails S - S_n ~ n^-a (c0 + c1/n + ...) fool that table,
// so they use the partial sums at n = 4, 8, 16, ..., where each tail component
// is geometric. The plain partial sum with its fitted tail bound competes with
// both; whichever claims the smaller error is reported.
template <class T, class S>
SeriesResult<T> wynn_sum(const TermFn<T>& terms, const PrecisionContext& ctx) {
  constexpr std::size_t max_width = 40;

  SeriesResult<T> out;
  TermHistory<T> history;
  EpsilonTable<S> consecutive(max_width);
  EpsilonTable<S> doubling(max_width);
  std::int64_t next_sample = 4;
  S sum{};
  T best{};
  real best_err = infinity;

  auto finish = [&](const S& value, real err, bool converged) {
    out.value = narrow<T>(value);
    out.est_error = err;
    out.converged = converged;
    out.decay_exponent = history.exponent();
    return out;
  };
  auto consider = [&](const S& value, real err) {
    if (err < best_err) {
      best = narrow<T>(value);
      best_err = err;
    }
    return err <= ctx.tolerance_for(mag(value));
  };

  for (std::int64_t n = 0; n < ctx.max_terms; ++n) {
    const T t = terms(n);
    out.terms_used = n + 1;
    if (t == T(0)) return finish(sum, 0, true);
    sum += S(t);
    history.push(t);
    const std::int64_t count = n + 1;

    const real err_c = consecutive.push(sum);
    if (history.alternating() && consider(consecutive.estimate(), err_c))
      return finish(consecutive.estimate(), err_c, true);

    if (count == next_sample) {
      next_sample *= 2;
      const real err_d = doubling.push(sum);
      if (!history.alternating() && consider(doubling.estimate(), err_d))
        return finish(doubling.estimate(), err_d, true);
    }

    if (TermHistory<T>::checkpoint(count)) {
      const real bound = history.tail_bound();
      if (consider(sum, bound)) return finish(sum, bound, true);
    }
  }
  out.value = std::isfinite(best_err) ? best : narrow<T>(sum);
  out.est_error = best_err;
  out.converged = false;
  out.decay_exponent = history.exponent();
  return out;
}

template <class T, class S, class W>
SeriesResult<T> dispatch(const TermFn<T>& terms, const PrecisionContext& ctx) {
  switch (ctx.accelerator) {
    case Accelerator::direct:
      return direct_sum<T, S>(terms, ctx, false);
    case Accelerator::kahan:
      return direct_sum<T, S>(terms, ctx, true);
    case Accelerator::levin_u:
      return levin_sum<T, S, W>(terms, ctx);
    case Accelerator::wynn_epsilon:
      return wynn_sum<T, S>(terms, ctx);
  }
  throw std::invalid_argument("unknown accelerator");
}

}  // namespace

template <class T>
SeriesResult<T> sum_series(const TermFn<T>& terms, const PrecisionContext& ctx) {
  ctx.validate();
  if (ctx.extended()) return dispatch<T, typename Scalar<T>::extended, dd_real>(terms, ctx);
  return dispatch<T, T, real>(terms, ctx);
}

template SeriesResult<real> sum_series<real>(const TermFn<real>&, const PrecisionContext&);
template SeriesResult<cplx> sum_series<cplx>(const TermFn<cplx>&, const PrecisionContext&);

real tail_exponent_estimate(const TermFn<real>& terms, std::int64_t first,
                            std::int64_t last, int samples) {
  if (first < 1 || last <= first || samples < 2)
    throw std::invalid_argument("tail_exponent_estimate: bad window");
  real sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  std::int64_t prev = -1;
  const real llo = std::log(static_cast<real>(first));
  const real lhi = std::log(static_cast<real>(last));
  for (int i = 0; i < samples; ++i) {
    const real u = llo + (lhi - llo) * static_cast<real>(i) / (samples - 1);
    const auto n = std::clamp<std::int64_t>(std::llround(std::exp(u)), first, last);
    if (n == prev) continue;
    prev = n;
    const real t = std::fabs(terms(n));
    if (t == 0) throw std::domain_error("tail_exponent_estimate: degenerate window (zero term)");
    const real x = std::log(static_cast<real>(n));
    const real y = std::log(t);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) throw std::domain_error("tail_exponent_estimate: degenerate window");
  return -(count * sxy - sx * sy) / (count * sxx - sx * sx);
}

real tail_exponent_estimate(const TermFn<real>& terms, std::int64_t window) {
  return tail_exponent_estimate(terms, window, 10 * window);
}

}  // namespace gegenforge
