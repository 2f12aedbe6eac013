#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gegenforge/errors.hpp"
#include "gegenforge/expansion.hpp"
#include "gegenforge/identities.hpp"
#include "gegenforge/oracle.hpp"

namespace gegenforge::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr real pi = std::numbers::pi_v<real>;
constexpr const char* max_terms_env = "GEGENFORGE_MAX_TERMS";

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { json, csv, human };

struct CommonOpts {
  std::string rel_tol;
  std::string abs_tol;
  std::string max_terms;
  std::string digits;
  std::string accelerator;
  std::string limit_guard;
  std::string format;
  std::string out;
};

struct CaseOpts {
  std::string id;
  std::string lambda;
  std::string m;
  std::string q;
  std::string z_re;
  std::string z_im;
};

// -- parsing ----------------------------------------------------------------

real parse_real(const std::string& s, const char* what) {
  if (s.empty()) throw usage_error(std::string(what) + ": empty value");
  errno = 0;
  char* end = nullptr;
  const real v = std::strtold(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw usage_error(std::string(what) + ": not a finite number: '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s, const char* what) {
  if (s.empty()) throw usage_error(std::string(what) + ": empty value");
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    throw usage_error(std::string(what) + ": not an integer: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

// Rounds grid values to 15 significant digits so that 0.1:0.4:0.1 yields 0.3,
// not 0.1 + 2*0.1.
real tidy(real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15Lg", v);
  return std::strtold(buf, nullptr);
}

/// "v", "a,b,c" or "a:b[:step]" (inclusive, ascending).
template <class T, class Parse>
std::vector<T> parse_range(const std::string& s, const char* what, Parse parse) {
  std::vector<T> vals;
  if (s.find(',') != std::string::npos) {
    for (const auto& p : split(s, ',')) vals.push_back(parse(p, what));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
  }
  const auto parts = split(s, ':');
  if (parts.size() == 1) return {parse(parts[0], what)};
  if (parts.size() > 3) throw usage_error(std::string(what) + ": range is a:b or a:b:step");
  const T a = parse(parts[0], what);
  const T b = parse(parts[1], what);
  const T step = parts.size() == 3 ? parse(parts[2], what) : T(1);
  if (!(step > 0)) throw usage_error(std::string(what) + ": range step must be positive");
  if (b < a) throw usage_error(std::string(what) + ": empty range '" + s + "'");
  if constexpr (std::is_integral_v<T>) {
    for (T v = a; v <= b; v += step) vals.push_back(v);
  } else {
    const auto count = static_cast<std::int64_t>(std::floor((b - a) / step + 1e-9L)) + 1;
    for (std::int64_t i = 0; i < count; ++i) vals.push_back(tidy(a + static_cast<real>(i) * step));
  }
  return vals;
}

std::vector<real> real_range(const std::string& s, const char* what) {
  return parse_range<real>(s, what, parse_real);
}

std::vector<std::int64_t> int_range(const std::string& s, const char* what) {
  return parse_range<std::int64_t>(s, what, parse_int);
}

PrecisionContext make_context(const CommonOpts& o) {
  PrecisionContext ctx;
  if (const char* env = std::getenv(max_terms_env); env && *env)
    ctx.max_terms = parse_int(env, max_terms_env);
  if (!o.max_terms.empty()) ctx.max_terms = parse_int(o.max_terms, "--max-terms");
  if (!o.rel_tol.empty()) ctx.rel_tol = parse_real(o.rel_tol, "--rel-tol");
  if (!o.abs_tol.empty()) ctx.abs_tol = parse_real(o.abs_tol, "--abs-tol");
  if (!o.limit_guard.empty()) ctx.limit_guard = parse_real(o.limit_guard, "--limit-guard");
  if (!o.digits.empty())
    ctx.working_digits = static_cast<int>(parse_int(o.digits, "--digits"));
  if (!o.accelerator.empty()) {
    const auto a = parse_accelerator(o.accelerator);
    if (!a) throw usage_error("--accelerator: unknown '" + o.accelerator + "'");
    ctx.accelerator = *a;
  }
  ctx.validate();
  return ctx;
}

Format make_format(const CommonOpts& o, Format fallback) {
  if (o.format.empty()) return fallback;
  if (o.format == "json") return Format::json;
  if (o.format == "csv") return Format::csv;
  if (o.format == "human") return Format::human;
  throw usage_error("--format: expected json, csv or human");
}

IdentityId parse_id(const std::string& s) {
  const auto id = parse_identity_id(s);
  if (!id) throw usage_error("--id: unknown identity '" + s + "'");
  return *id;
}

// -- formatting -------------------------------------------------------------

std::string fmt(real v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lg", digits, v);
  return buf;
}

std::string csv_num(real v) { return fmt(v, 17); }

std::string human_num(cplx v, bool complex) {
  if (!complex) return fmt(v.real(), 12);
  return fmt(v.real(), 12) + (v.imag() < 0 ? "-" : "+") + fmt(std::fabs(v.imag()), 12) + "i";
}

json num(real v) { return static_cast<double>(v); }

json params_json(const IdentityCase& c) {
  json p;
  p["lambda"] = c.lambda ? num(*c.lambda) : json(nullptr);
  p["m"] = c.m ? json(*c.m) : json(nullptr);
  p["q"] = c.q ? json(*c.q) : json(nullptr);
  p["z_re"] = c.z ? num(c.z->real()) : json(nullptr);
  p["z_im"] = c.z ? num(c.z->imag()) : json(nullptr);
  return p;
}

json report_json(const VerificationReport& r) {
  json j;
  j["identity_id"] = std::string(to_string(r.identity.id));
  j["params"] = params_json(r.identity);
  j["closed_value"] = num(r.closed_value.real());
  j["series_value"] = num(r.series_value.real());
  j["abs_err"] = num(r.abs_err);
  j["rel_err"] = num(r.rel_err);
  j["terms_used"] = r.terms_used;
  j["accelerator"] = std::string(to_string(r.accelerator));
  j["converged"] = r.converged;
  j["runtime_ms"] = r.runtime_ms;
  j["closed_value_im"] = num(r.closed_value.imag());
  j["series_value_im"] = num(r.series_value.imag());
  return j;
}

const char* report_csv_header =
    "identity_id,lambda,m,q,z_re,z_im,closed_value,series_value,abs_err,rel_err,terms_used,"
    "accelerator,converged,runtime_ms,closed_value_im,series_value_im";

std::string report_csv(const VerificationReport& r) {
  const IdentityCase& c = r.identity;
  std::ostringstream s;
  s << to_string(c.id) << ',' << (c.lambda ? csv_num(*c.lambda) : "") << ','
    << (c.m ? std::to_string(*c.m) : "") << ',' << (c.q ? std::to_string(*c.q) : "") << ','
    << (c.z ? csv_num(c.z->real()) : "") << ',' << (c.z ? csv_num(c.z->imag()) : "") << ','
    << csv_num(r.closed_value.real()) << ',' << csv_num(r.series_value.real()) << ','
    << csv_num(r.abs_err) << ',' << csv_num(r.rel_err) << ',' << r.terms_used << ','
    << to_string(r.accelerator) << ',' << (r.converged ? "true" : "false") << ','
    << csv_num(r.runtime_ms) << ',' << csv_num(r.closed_value.imag()) << ','
    << csv_num(r.series_value.imag());
  return s.str();
}

std::string case_label(const IdentityCase& c) {
  std::string s(to_string(c.id));
  if (c.lambda) s += " lambda=" + fmt(*c.lambda, 12);
  if (c.m) s += " m=" + std::to_string(*c.m);
  if (c.q) s += " q=" + std::to_string(*c.q);
  if (c.z) s += " z=" + human_num(*c.z, c.z->imag() != 0);
  return s;
}

std::string report_human(const VerificationReport& r) {
  const bool cx = r.closed_value.imag() != 0 || r.series_value.imag() != 0;
  std::ostringstream s;
  s << (r.converged ? "  " : "! ") << case_label(r.identity)
    << "  closed=" << human_num(r.closed_value, cx) << "  series=" << human_num(r.series_value, cx)
    << "  rel_err=" << fmt(r.rel_err, 3) << "  terms=" << r.terms_used << "  "
    << to_string(r.accelerator);
  return s.str();
}

void emit_reports(const std::vector<VerificationReport>& reps, Format f, bool single,
                  std::ostream& out) {
  switch (f) {
    case Format::json: {
      if (single) {
        out << report_json(reps.front()).dump(2) << '\n';
      } else {
        json arr = json::array();
        for (const auto& r : reps) arr.push_back(report_json(r));
        out << arr.dump(2) << '\n';
      }
      break;
    }
    case Format::csv:
      out << report_csv_header << '\n';
      for (const auto& r : reps) out << report_csv(r) << '\n';
      break;
    case Format::human:
      for (const auto& r : reps) out << report_human(r) << '\n';
      break;
  }
}

/// Writes to --out when given, otherwise to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw usage_error("--out: cannot open '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

// -- commands ---------------------------------------------------------------

IdentityCase single_case(const CaseOpts& o) {
  IdentityCase c;
  c.id = parse_id(o.id);
  if (!o.lambda.empty()) c.lambda = parse_real(o.lambda, "--lambda");
  if (!o.m.empty()) c.m = parse_int(o.m, "--m");
  if (!o.q.empty()) c.q = parse_int(o.q, "--q");
  if (!o.z_re.empty() || !o.z_im.empty()) {
    const real re = o.z_re.empty() ? 0 : parse_real(o.z_re, "--z-re");
    const real im = o.z_im.empty() ? 0 : parse_real(o.z_im, "--z-im");
    c.z = cplx(re, im);
  }
  c.validate();
  return c;
}

int run_verify(const CaseOpts& co, const CommonOpts& o, std::ostream& out) {
  const PrecisionContext ctx = make_context(o);
  const Format f = make_format(o, Format::json);
  const IdentityCase c = single_case(co);
  const auto rep = o.accelerator.empty() ? verify_identity(c, ctx)
                                          : verify_identity(c, ctx, ctx.accelerator);
  Sink sink(o.out, out);
  emit_reports({rep}, f, true, sink.get());
  return rep.converged ? exit_ok : exit_not_converged;
}

std::vector<IdentityCase> sweep_grid(const CaseOpts& o) {
  const IdentityId id = parse_id(o.id);
  using OptR = std::optional<real>;
  using OptI = std::optional<std::int64_t>;
  std::vector<OptR> ls{std::nullopt}, zr{std::nullopt}, zi{std::nullopt};
  std::vector<OptI> ms{std::nullopt}, qs{std::nullopt};
  if (!o.lambda.empty()) {
    ls.clear();
    for (real v : real_range(o.lambda, "--lambda")) ls.push_back(v);
  }
  if (!o.m.empty()) {
    ms.clear();
    for (auto v : int_range(o.m, "--m")) ms.push_back(v);
  }
  if (!o.q.empty()) {
    qs.clear();
    for (auto v : int_range(o.q, "--q")) qs.push_back(v);
  }
  const bool has_z = !o.z_re.empty() || !o.z_im.empty();
  if (has_z) {
    zr.clear();
    zi.clear();
    for (real v : o.z_re.empty() ? std::vector<real>{0} : real_range(o.z_re, "--z-re"))
      zr.push_back(v);
    for (real v : o.z_im.empty() ? std::vector<real>{0} : real_range(o.z_im, "--z-im"))
      zi.push_back(v);
  }
  std::vector<IdentityCase> grid;
  for (const auto& l : ls)
    for (const auto& m : ms)
      for (const auto& q : qs)
        for (const auto& re : zr)
          for (const auto& im : zi) {
            IdentityCase c{id, l, m, q, std::nullopt};
            if (has_z) c.z = cplx(*re, *im);
            c.validate();
            grid.push_back(c);
          }
  return grid;
}

int run_sweep(const CaseOpts& co, const CommonOpts& o, unsigned threads, std::ostream& out) {
  const PrecisionContext ctx = make_context(o);
  const Format f = make_format(o, Format::csv);
  const auto grid = sweep_grid(co);
  const bool override_acc = !o.accelerator.empty();

  std::vector<VerificationReport> reps(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        reps[i] = override_acc ? verify_identity(grid[i], ctx, ctx.accelerator)
                               : verify_identity(grid[i], ctx);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, grid.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Sink sink(o.out, out);
  emit_reports(reps, f, false, sink.get());
  const bool all = std::all_of(reps.begin(), reps.end(), [](const auto& r) { return r.converged; });
  return all ? exit_ok : exit_not_converged;
}

struct ConstantEntry {
  std::string name;
  IdentityCase identity;
  real reference;
};

std::vector<ConstantEntry> constants_catalog() {
  std::vector<ConstantEntry> cat = {
      {"4/pi", {IdentityId::EQ47, {}, 0, {}, {}}, 4 / pi},
      {"2/pi", {IdentityId::EQ48, {}, 0, {}, {}}, 2 / pi},
      {"32/(3pi^2)", {IdentityId::EQ411, {}, {}, {}, {}}, 32 / (3 * pi * pi)},
      {"32/pi^2", {IdentityId::EQ412, {}, {}, {}, {}}, 32 / (pi * pi)},
  };
  for (std::int64_t q = 0; q <= 3; ++q) {
    const auto num = static_cast<long long>(1) << (4 * q + 3);
    const std::string name = q == 0 ? "8/pi^2" : std::to_string(num) + "/(" +
                                                     std::to_string(2 * q + 1) + "pi^2)";
    cat.push_back({name,
                   {IdentityId::C15, {}, 0, q, {}},
                   static_cast<real>(num) / (pi * pi * static_cast<real>(2 * q + 1))});
  }
  return cat;
}

constexpr int required_digits = 9;

int agreed_digits(real rel) {
  constexpr int cap = std::numeric_limits<real>::digits10 + 1;
  if (rel <= 0) return cap;
  return std::clamp(static_cast<int>(std::floor(-std::log10(rel))), 0, cap);
}

int run_constants(const CommonOpts& o, std::ostream& out) {
  const PrecisionContext ctx = make_context(o);
  const Format f = make_format(o, Format::human);
  const bool override_acc = !o.accelerator.empty();
  struct Row {
    ConstantEntry e;
    VerificationReport r;
    real rel;
    int digits;
    bool ok;
  };
  std::vector<Row> rows;
  for (const auto& e : constants_catalog()) {
    const auto r = override_acc ? verify_identity(e.identity, ctx, ctx.accelerator)
                                : verify_identity(e.identity, ctx);
    const real rel = std::fabs(r.series_value.real() - e.reference) / std::fabs(e.reference);
    const int d = agreed_digits(rel);
    rows.push_back({e, r, rel, d, d >= required_digits && r.converged});
  }

  Sink sink(o.out, out);
  std::ostream& s = sink.get();
  switch (f) {
    case Format::json: {
      json arr = json::array();
      for (const auto& row : rows) {
        json j;
        j["name"] = row.e.name;
        j["identity_id"] = std::string(to_string(row.e.identity.id));
        j["params"] = params_json(row.e.identity);
        j["reference"] = num(row.e.reference);
        j["series_value"] = num(row.r.series_value.real());
        j["rel_err"] = num(row.rel);
        j["digits"] = row.digits;
        j["terms_used"] = row.r.terms_used;
        j["accelerator"] = std::string(to_string(row.r.accelerator));
        j["converged"] = row.r.converged;
        j["ok"] = row.ok;
        arr.push_back(j);
      }
      s << arr.dump(2) << '\n';
      break;
    }
    case Format::csv:
      s << "name,identity_id,m,q,reference,series_value,rel_err,digits,terms_used,accelerator,"
           "converged,ok\n";
      for (const auto& row : rows) {
        const auto& c = row.e.identity;
        s << row.e.name << ',' << to_string(c.id) << ',' << (c.m ? std::to_string(*c.m) : "")
          << ',' << (c.q ? std::to_string(*c.q) : "") << ',' << csv_num(row.e.reference) << ','
          << csv_num(row.r.series_value.real()) << ',' << csv_num(row.rel) << ',' << row.digits
          << ',' << row.r.terms_used << ',' << to_string(row.r.accelerator) << ','
          << (row.r.converged ? "true" : "false") << ',' << (row.ok ? "true" : "false") << '\n';
      }
      break;
    case Format::human:
      for (const auto& row : rows) {
        char line[256];
        std::snprintf(line, sizeof line, "%s %-14s %-22s series=%-16s reference=%-16s digits=%d",
                      row.ok ? " " : "!", row.e.name.c_str(),
                      case_label(row.e.identity).c_str(),
                      fmt(row.r.series_value.real(), 12).c_str(),
                      fmt(row.e.reference, 12).c_str(), row.digits);
        s << line << '\n';
      }
      break;
  }
  const bool all = std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.ok; });
  return all ? exit_ok : exit_not_converged;
}

struct OracleOpts {
  std::string lambda;
  std::string mu;
  std::int64_t m_max = 2;
  std::int64_t q_max = 5;
};

struct OracleRow {
  std::string quantity;
  std::string param;
  real param_value;
  std::int64_t m;
  std::optional<std::int64_t> q;
  real closed;
  real quadrature;
  real rel_err;
  bool ok;
};

int run_oracle_check(const OracleOpts& oo, const CommonOpts& o, std::ostream& out) {
  const PrecisionContext ctx = make_context(o);
  const Format f = make_format(o, Format::human);
  if (oo.lambda.empty() && oo.mu.empty()) throw usage_error("oracle-check: give --lambda and/or --mu");
  if (oo.m_max < 0 || oo.q_max < 0) throw usage_error("oracle-check: --m-max and --q-max must be >= 0");
  // quadrature runs two digits tighter than the acceptance tolerance
  const PrecisionContext qctx = ctx.with_rel_tol(ctx.rel_tol / 100);

  std::vector<OracleRow> rows;
  auto add = [&](std::string what, std::string pname, real pv, std::int64_t m,
                 std::optional<std::int64_t> q, real closed, real quad) {
    const real rel = closed == 0 ? std::fabs(quad) : std::fabs(quad - closed) / std::fabs(closed);
    const bool ok = closed == 0 ? std::fabs(quad) <= ctx.abs_tol : rel <= ctx.rel_tol;
    rows.push_back({std::move(what), std::move(pname), pv, m, q, closed, quad, rel, ok});
  };

  if (!oo.lambda.empty()) {
    const real l = parse_real(oo.lambda, "--lambda");
    const bool f_ok = l > -0.5L && l < 3 && l != 0;
    const bool h_ok = l > -0.5L && l < 1 && l != 0;
    if (!f_ok && !h_ok) throw std::domain_error("oracle-check: lambda outside (-1/2, 3) \\ {0}");
    for (std::int64_t m = 0; m <= oo.m_max; ++m)
      for (std::int64_t q = 0; q <= oo.q_max; ++q) {
        if (f_ok)
          add("coeff_f", "lambda", l, m, q, coeff_f(l, m, q),
              coeff_by_quadrature(l, m, m + 2 * q, ExpansionKind::U_kind, qctx).value);
        if (h_ok)
          add("coeff_h", "lambda", l, m, q, coeff_h(l, m, q),
              coeff_by_quadrature(l, m, m + 2 * q, ExpansionKind::T_kind, qctx).value);
      }
  }
  if (!oo.mu.empty()) {
    const real mu = parse_real(oo.mu, "--mu");
    for (std::int64_t m = 0; m <= oo.m_max; ++m) {
      add("lemma5_J", "mu", mu, m, std::nullopt, lemma5_closed(Lemma5Kind::J, mu, m),
          lemma5_quadrature(Lemma5Kind::J, mu, m, qctx).value);
      add("lemma5_K", "mu", mu, m, std::nullopt, lemma5_closed(Lemma5Kind::K, mu, m),
          lemma5_quadrature(Lemma5Kind::K, mu, m, qctx).value);
    }
  }

  Sink sink(o.out, out);
  std::ostream& s = sink.get();
  switch (f) {
    case Format::json: {
      json arr = json::array();
      for (const auto& r : rows) {
        json j;
        j["quantity"] = r.quantity;
        j[r.param] = num(r.param_value);
        j["m"] = r.m;
        j["q"] = r.q ? json(*r.q) : json(nullptr);
        j["closed_value"] = num(r.closed);
        j["quadrature_value"] = num(r.quadrature);
        j["rel_err"] = num(r.rel_err);
        j["ok"] = r.ok;
        arr.push_back(j);
      }
      s << arr.dump(2) << '\n';
      break;
    }
    case Format::csv:
      s << "quantity,parameter,value,m,q,closed_value,quadrature_value,rel_err,ok\n";
      for (const auto& r : rows)
        s << r.quantity << ',' << r.param << ',' << csv_num(r.param_value) << ',' << r.m << ','
          << (r.q ? std::to_string(*r.q) : "") << ',' << csv_num(r.closed) << ','
          << csv_num(r.quadrature) << ',' << csv_num(r.rel_err) << ',' << (r.ok ? "true" : "false")
          << '\n';
      break;
    case Format::human:
      for (const auto& r : rows)
        s << (r.ok ? "  " : "! ") << r.quantity << ' ' << r.param << '=' << fmt(r.param_value, 12)
          << " m=" << r.m << (r.q ? " q=" + std::to_string(*r.q) : std::string())
          << "  closed=" << fmt(r.closed, 12) << "  quadrature=" << fmt(r.quadrature, 12)
          << "  rel_err=" << fmt(r.rel_err, 3) << '\n';
      break;
  }
  const bool all = std::all_of(rows.begin(), rows.end(), [](const OracleRow& r) { return r.ok; });
  return all ? exit_ok : exit_not_converged;
}

struct ExpandOpts {
  std::string lambda;
  std::int64_t m = 0;
  std::string kind = "U";
  std::string x;
  std::int64_t n = 1000;
  bool cesaro = false;
};

int run_expand(const ExpandOpts& eo, const CommonOpts& o, std::ostream& out) {
  const PrecisionContext ctx = make_context(o);
  const Format f = make_format(o, Format::json);
  ExpansionKind kind;
  if (eo.kind == "U") kind = ExpansionKind::U_kind;
  else if (eo.kind == "T") kind = ExpansionKind::T_kind;
  else throw usage_error("--kind: expected U or T");
  const ExpansionParams p(parse_real(eo.lambda, "--lambda"), eo.m, kind);
  const PolyPoint x = PolyPoint::from_x(parse_real(eo.x, "--x"));
  const auto res = eo.cesaro ? cesaro_partial_sum(p, x, eo.n, ctx) : partial_sum(p, x, eo.n, ctx);
  const real tgt = target(p, x);

  Sink sink(o.out, out);
  std::ostream& s = sink.get();
  switch (f) {
    case Format::json: {
      json j;
      j["lambda"] = num(p.lambda.value());
      j["m"] = p.m;
      j["kind"] = eo.kind;
      j["x"] = num(x.x);
      j["N"] = eo.n;
      j["cesaro"] = eo.cesaro;
      j["partial_sum"] = num(res.value);
      j["target"] = num(tgt);
      j["abs_err"] = num(std::fabs(res.value - tgt));
      j["converged"] = res.converged;
      s << j.dump(2) << '\n';
      break;
    }
    case Format::csv:
      s << "lambda,m,kind,x,N,cesaro,partial_sum,target,abs_err,converged\n"
        << csv_num(p.lambda.value()) << ',' << p.m << ',' << eo.kind << ',' << csv_num(x.x) << ','
        << eo.n << ',' << (eo.cesaro ? "true" : "false") << ',' << csv_num(res.value) << ','
        << csv_num(tgt) << ',' << csv_num(std::fabs(res.value - tgt)) << ','
        << (res.converged ? "true" : "false") << '\n';
      break;
    case Format::human:
      s << (res.converged ? "  " : "! ") << (eo.kind == "U" ? "f" : "h") << " lambda="
        << fmt(p.lambda.value(), 12) << " m=" << p.m << " x=" << fmt(x.x, 12) << " N=" << eo.n
        << (eo.cesaro ? " (cesaro)" : "") << "  partial_sum=" << fmt(res.value, 12)
        << "  target=" << fmt(tgt, 12) << "  abs_err=" << fmt(std::fabs(res.value - tgt), 3)
        << '\n';
      break;
  }
  return res.converged ? exit_ok : exit_not_converged;
}

void add_common(CLI::App* app, CommonOpts& o) {
  app->add_option("--rel-tol", o.rel_tol, "relative tolerance");
  app->add_option("--abs-tol", o.abs_tol, "absolute tolerance");
  app->add_option("--max-terms", o.max_terms, "term budget (env " + std::string(max_terms_env) + ")");
  app->add_option("--digits", o.digits, "working digits (18 native, up to 36)");
  app->add_option("--accelerator", o.accelerator, "direct, kahan, levin_u or wynn_epsilon");
  app->add_option("--limit-guard", o.limit_guard, "half-width of the removable-point band");
  app->add_option("--format", o.format, "json, csv or human");
  app->add_flag_callback("--json", [&o] { o.format = "json"; }, "same as --format json");
  app->add_flag_callback("--csv", [&o] { o.format = "csv"; }, "same as --format csv");
  app->add_flag_callback("--human", [&o] { o.format = "human"; }, "same as --format human");
  app->add_option("--out", o.out, "write results to this file");
}

void add_case(CLI::App* app, CaseOpts& c, bool ranges) {
  const std::string suffix = ranges ? " (value, a,b,c or a:b[:step])" : "";
  app->add_option("--id", c.id, "identity id")->required();
  app->add_option("--lambda", c.lambda, "lambda" + suffix);
  app->add_option("--m", c.m, "m" + suffix);
  app->add_option("--q", c.q, "q" + suffix);
  app->add_option("--z-re", c.z_re, "Re z" + suffix);
  app->add_option("--z-im", c.z_im, "Im z" + suffix);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gegenbauer expansion identities: verification and oracle checks", "gegenforge"};
  app.require_subcommand(1);

  CommonOpts common;
  CaseOpts vcase;
  CaseOpts scase;
  unsigned threads = 0;
  OracleOpts oracle;
  ExpandOpts expand;

  auto* verify = app.add_subcommand("verify", "verify one identity case");
  add_case(verify, vcase, false);
  add_common(verify, common);

  auto* sweep = app.add_subcommand("sweep", "verify a parameter grid");
  add_case(sweep, scase, true);
  sweep->add_option("--threads", threads, "worker threads (0 = all cores)");
  add_common(sweep, common);

  auto* constants = app.add_subcommand("constants", "reproduce the table of pi constants");
  add_common(constants, common);

  auto* oc = app.add_subcommand("oracle-check", "compare closed forms with quadrature");
  oc->add_option("--lambda", oracle.lambda, "check expansion coefficients at this lambda");
  oc->add_option("--mu", oracle.mu, "check the J/K integrals at this mu");
  oc->add_option("--m-max", oracle.m_max, "largest m");
  oc->add_option("--q-max", oracle.q_max, "largest q");
  add_common(oc, common);

  auto* ex = app.add_subcommand("expand", "partial sum of a Gegenbauer expansion at x");
  ex->add_option("--lambda", expand.lambda, "lambda")->required();
  ex->add_option("--m", expand.m, "m");
  ex->add_option("--kind", expand.kind, "U (f expansion) or T (h expansion)");
  ex->add_option("--x", expand.x, "point in [-1, 1]")->required();
  ex->add_option("--n", expand.n, "number of coefficients");
  ex->add_flag("--cesaro", expand.cesaro, "Cesaro-smooth the tail of partial sums");
  add_common(ex, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*verify) return run_verify(vcase, common, out);
    if (*sweep) return run_sweep(scase, common, threads, out);
    if (*constants) return run_constants(common, out);
    if (*oc) return run_oracle_check(oracle, common, out);
    if (*ex) return run_expand(expand, common, out);
  } catch (const convergence_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_not_converged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace gegenforge::cli
