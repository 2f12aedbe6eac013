#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "doctest.h"

namespace {

using nlohmann::ordered_json;
namespace cli = gegenforge::cli;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"gegenforge"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

ordered_json strip_runtime(ordered_json j) {
  if (j.is_array()) {
    for (auto& e : j) e = strip_runtime(e);
  } else if (j.is_object()) {
    j.erase("runtime_ms");
  }
  return j;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) cells.push_back(cell);
  if (!line.empty() && line.back() == sep) cells.emplace_back();
  return cells;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) v.push_back(l);
  return v;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fmax(std::fabs(a), std::fabs(b)); }

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
  ~ScopedEnv() { ::unsetenv(name_); }
  ScopedEnv(const ScopedEnv&) = delete;
  ScopedEnv& operator=(const ScopedEnv&) = delete;

 private:
  const char* name_;
};

const std::vector<std::string> report_fields{
    "identity_id", "params", "closed_value", "series_value", "abs_err", "rel_err", "terms_used",
    "accelerator", "converged", "runtime_ms", "closed_value_im", "series_value_im"};

}  // namespace

TEST_CASE("verify emits the report schema in a fixed field order") {
  const auto r = run({"verify", "--id", "EQ48", "--m", "0", "--rel-tol", "1e-9", "--json"});
  REQUIRE(r.code == cli::exit_ok);
  const auto j = ordered_json::parse(r.out);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == report_fields);
  std::vector<std::string> pkeys;
  for (const auto& [k, v] : j["params"].items()) pkeys.push_back(k);
  CHECK(pkeys == std::vector<std::string>{"lambda", "m", "q", "z_re", "z_im"});
  CHECK(j["params"]["lambda"].is_null());
  CHECK(j["params"]["m"] == 0);
  CHECK(std::fabs(j["series_value"].get<double>() - 2 / std::numbers::pi) < 1e-9);
}

TEST_CASE("verify output matches the golden file") {
  std::ifstream in(std::string(GEGENFORGE_GOLDEN_DIR) + "/verify_eq48_m0.json");
  REQUIRE(in.good());
  const auto golden = strip_runtime(ordered_json::parse(in));
  const auto r = run({"verify", "--id", "EQ48", "--m", "0", "--rel-tol", "1e-9", "--json"});
  REQUIRE(r.code == cli::exit_ok);
  const auto got = strip_runtime(ordered_json::parse(r.out));

  REQUIRE(got.size() == golden.size());
  auto gi = golden.items().begin();
  for (const auto& [k, v] : got.items()) {
    CAPTURE(k);
    REQUIRE(k == gi.key());
    const auto& g = gi.value();
    if (v.is_number_float()) {
      if (k == "abs_err" || k == "rel_err")
        CHECK(v.get<double>() <= 1e-9);
      else if (g.get<double>() == 0)
        CHECK(v.get<double>() == 0);
      else
        CHECK(rel(v.get<double>(), g.get<double>()) < 1e-12);
    } else {
      CHECK(v == g);
    }
    ++gi;
  }
}

TEST_CASE("identical invocations give identical JSON apart from runtime") {
  for (auto args : {std::initializer_list<const char*>{"verify", "--id", "T6b", "--lambda", "1.5", "--m", "1"},
                    std::initializer_list<const char*>{"sweep", "--id", "C13", "--m", "0:4", "--json"},
                    std::initializer_list<const char*>{"verify", "--id", "HYP5F4", "--z-re", "0.3", "--z-im", "0.2",
                                                       "--json"}}) {
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == b.code);
    CHECK(strip_runtime(ordered_json::parse(a.out)) == strip_runtime(ordered_json::parse(b.out)));
  }
}

TEST_CASE("exit codes") {
  CHECK(run({"verify", "--id", "C12", "--z-re", "0", "--z-im", "0"}).code == cli::exit_ok);
  const auto starved = run({"verify", "--id", "EQ48", "--m", "0", "--max-terms", "3"});
  CHECK(starved.code == cli::exit_not_converged);
  CHECK(ordered_json::parse(starved.out)["converged"] == false);

  const auto bad_lambda = run({"verify", "--id", "T6a", "--lambda", "0.7", "--m", "0"});
  CHECK(bad_lambda.code == cli::exit_usage);
  CHECK(bad_lambda.out.empty());
  CHECK_FALSE(bad_lambda.err.empty());

  CHECK(run({}).code == cli::exit_usage);
  CHECK(run({"frobnicate"}).code == cli::exit_usage);
  CHECK(run({"verify", "--id", "NOPE"}).code == cli::exit_usage);
  CHECK(run({"verify", "--id", "T6a", "--m", "0"}).code == cli::exit_usage);
  CHECK(run({"verify", "--id", "EQ48", "--m", "zero"}).code == cli::exit_usage);
  CHECK(run({"verify", "--id", "EQ48", "--m", "0", "--rel-tol", "-1"}).code == cli::exit_usage);
  CHECK(run({"verify", "--id", "EQ48", "--m", "0", "--accelerator", "magic"}).code == cli::exit_usage);
  CHECK(run({"verify", "--id", "EQ48", "--m", "0", "--format", "xml"}).code == cli::exit_usage);
  CHECK(run({"--help"}).code == cli::exit_ok);
}

TEST_CASE("EQ411 verifies to 32/(3 pi^2)") {
  const auto r = run({"verify", "--id", "EQ411"});
  REQUIRE(r.code == cli::exit_ok);
  const auto j = ordered_json::parse(r.out);
  const double ref = 32 / (3 * std::numbers::pi * std::numbers::pi);
  CHECK(rel(j["series_value"].get<double>(), ref) < 1e-9);
  CHECK(j["accelerator"] == "wynn_epsilon");
}

TEST_CASE("sweep over T6a gives 16 rows in lexicographic order") {
  const auto r = run({"sweep", "--id", "T6a", "--lambda", "0.1:0.4:0.1", "--m", "0:3", "--rel-tol", "1e-6", "--json"});
  REQUIRE(r.code == cli::exit_ok);
  const auto j = ordered_json::parse(r.out);
  REQUIRE(j.size() == 16);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    CAPTURE(i);
    CHECK(row["identity_id"] == "T6a");
    CHECK(std::fabs(row["params"]["lambda"].get<double>() - 0.1 * double(i / 4 + 1)) < 1e-12);
    CHECK(row["params"]["m"] == int(i % 4));
    CHECK(row["converged"] == true);
    CHECK(row["rel_err"].get<double>() <= 1e-6);
  }
}

TEST_CASE("sweep over C13 matches the closed display") {
  const auto r = run({"sweep", "--id", "C13", "--m", "0:4", "--csv"});
  REQUIRE(r.code == cli::exit_ok);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 6);
  const auto header = split(rows[0], ',');
  CHECK(header == std::vector<std::string>{"identity_id", "lambda", "m", "q", "z_re", "z_im", "closed_value",
                                           "series_value", "abs_err", "rel_err", "terms_used", "accelerator",
                                           "converged", "runtime_ms", "closed_value_im", "series_value_im"});
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (int m = 0; m <= 4; ++m) {
    const auto cells = split(rows[m + 1], ',');
    REQUIRE(cells.size() == header.size());
    CHECK(cells[0] == "C13");
    CHECK(std::stoi(cells[2]) == m);
    const double ref = std::ldexp(1.0, 4 * m + 5) / (pi2 * (2 * m + 1) * (2 * m + 3));
    CHECK(rel(std::stod(cells[7]), ref) < 1e-9);
    CHECK(cells[12] == "true");
  }
}

TEST_CASE("CSV floats carry 17 significant digits") {
  const auto r = run({"verify", "--id", "EQ48", "--m", "0", "--csv"});
  REQUIRE(r.code == cli::exit_ok);
  const auto cells = split(lines(r.out).at(1), ',');
  const std::string closed = cells.at(6);
  std::string digits;
  for (char c : closed)
    if (c >= '0' && c <= '9') digits += c;
  digits.erase(0, digits.find_first_not_of('0'));
  CHECK(digits.size() == 17);
  CHECK(std::stod(closed) == 2 / std::numbers::pi);
}

TEST_CASE("empty or malformed ranges are usage errors") {
  CHECK(run({"sweep", "--id", "C13", "--m", "4:0"}).code == cli::exit_usage);
  CHECK(run({"sweep", "--id", "C13", "--m", "0:4:0"}).code == cli::exit_usage);
  CHECK(run({"sweep", "--id", "C13", "--m", ""}).code == cli::exit_usage);
  CHECK(run({"sweep", "--id", "T6a", "--lambda", "0.1:0.9:0.1", "--m", "0"}).code == cli::exit_usage);
}

TEST_CASE("sweep order does not depend on the thread count") {
  const auto one = run({"sweep", "--id", "T7", "--lambda", "-0.25,0.5,2", "--m", "0:2", "--threads", "1", "--json"});
  const auto many = run({"sweep", "--id", "T7", "--lambda", "-0.25,0.5,2", "--m", "0:2", "--threads", "8", "--json"});
  REQUIRE(one.code == cli::exit_ok);
  CHECK(strip_runtime(ordered_json::parse(one.out)) == strip_runtime(ordered_json::parse(many.out)));
  CHECK(ordered_json::parse(one.out).size() == 9);
}

TEST_CASE("no converged row exceeds the requested tolerance") {
  for (const char* tol : {"1e-4", "1e-8", "1e-12"}) {
    CAPTURE(tol);
    const auto r = run({"sweep", "--id", "T6b", "--lambda", "-0.3,0.5,1.2,1.5,2.3", "--m", "0:2", "--rel-tol", tol,
                        "--json"});
    REQUIRE((r.code == cli::exit_ok || r.code == cli::exit_not_converged));
    bool all = true;
    for (const auto& row : ordered_json::parse(r.out)) {
      if (row["converged"] == true) CHECK(row["rel_err"].get<double>() <= std::stod(tol));
      all = all && row["converged"] == true;
    }
    CHECK((r.code == cli::exit_ok) == all);
  }
}

TEST_CASE("GEGENFORGE_MAX_TERMS caps the term budget") {
  {
    ScopedEnv env("GEGENFORGE_MAX_TERMS", "2");
    const auto r = run({"verify", "--id", "EQ48", "--m", "0"});
    CHECK(r.code == cli::exit_not_converged);
    CHECK(ordered_json::parse(r.out)["terms_used"] == 2);
    CHECK(run({"verify", "--id", "EQ48", "--m", "0", "--max-terms", "1000"}).code == cli::exit_ok);
  }
  {
    ScopedEnv env("GEGENFORGE_MAX_TERMS", "lots");
    CHECK(run({"verify", "--id", "EQ48", "--m", "0"}).code == cli::exit_usage);
  }
  CHECK(run({"verify", "--id", "EQ48", "--m", "0"}).code == cli::exit_ok);
}

TEST_CASE("constants reproduce the catalog") {
  const auto r = run({"constants", "--json"});
  REQUIRE(r.code == cli::exit_ok);
  const auto j = ordered_json::parse(r.out);
  REQUIRE(j.size() == 8);
  const double pi = std::numbers::pi;
  CHECK(j[0]["reference"].get<double>() == doctest::Approx(4 / pi).epsilon(1e-15));
  CHECK(std::fabs(j[0]["reference"].get<double>() - 1.2732395447) < 1e-10);
  for (const auto& row : j) {
    CAPTURE(row["name"].get<std::string>());
    CHECK(row["digits"].get<int>() >= 9);
    CHECK(row["ok"] == true);
    CHECK(rel(row["series_value"].get<double>(), row["reference"].get<double>()) < 1e-9);
  }
  const auto human = run({"constants"});
  CHECK(human.code == cli::exit_ok);
  CHECK(lines(human.out).size() == 8);
}

TEST_CASE("human output marks non-converged rows") {
  const auto ok = run({"verify", "--id", "EQ48", "--m", "0", "--human"});
  CHECK(ok.out.rfind("  EQ48", 0) == 0);
  const auto bad = run({"verify", "--id", "EQ48", "--m", "0", "--max-terms", "3", "--human"});
  CHECK(bad.code == cli::exit_not_converged);
  CHECK(bad.out.rfind("!", 0) == 0);
}

TEST_CASE("--out writes the report to a file") {
  const auto path = std::filesystem::temp_directory_path() / "gegenforge_cli_out.json";
  std::filesystem::remove(path);
  const std::string p = path.string();
  const auto r = run({"verify", "--id", "EQ412", "--out", p.c_str()});
  CHECK(r.code == cli::exit_ok);
  CHECK(r.out.empty());
  std::ifstream in(path);
  REQUIRE(in.good());
  const auto j = ordered_json::parse(in);
  CHECK(rel(j["series_value"].get<double>(), 32 / (std::numbers::pi * std::numbers::pi)) < 1e-9);
  in.close();
  std::filesystem::remove(path);
}

TEST_CASE("oracle-check and expand") {
  const auto oc = run({"oracle-check", "--lambda", "0.25", "--m-max", "1", "--q-max", "2", "--json"});
  CHECK(oc.code == cli::exit_ok);
  const auto mu = run({"oracle-check", "--mu", "0.3", "--m-max", "2", "--json"});
  CHECK(mu.code == cli::exit_ok);

  const auto ex = run({"expand", "--lambda", "0.25", "--m", "0", "--x", "0.5", "--n", "4000", "--json"});
  REQUIRE((ex.code == cli::exit_ok || ex.code == cli::exit_not_converged));
  const auto j = ordered_json::parse(ex.out);
  CHECK(j["abs_err"].get<double>() < 1e-4);
  CHECK(run({"expand", "--lambda", "0.25", "--x", "1.5"}).code == cli::exit_usage);
  CHECK(run({"expand", "--lambda", "0.25", "--x", "0.5", "--kind", "V"}).code == cli::exit_usage);
}
