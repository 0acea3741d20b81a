// ulat: exact intersection numbers and local densities of special cycles
// on the ramified U(1,1) Bruhat-Tits tree.
//
// Subcommands:
//   classify   classify one Hermitian 2x2 Gram matrix over F = F0(pi)
//   verify-kr  check intersection numbers against the density identity
//   table      emit the closed-formula value tables
//
// All numeric output is exact: integers, or rationals printed num/den.
// Reports embed the run configuration so reruns are byte-identical.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ulat/density.hpp"
#include "ulat/divisor.hpp"
#include "ulat/herm.hpp"
#include "ulat/oracle.hpp"
#include "ulat/padic.hpp"
#include "ulat/tree.hpp"

namespace {

using nlohmann::ordered_json;
using namespace ulat;

struct RunConfig {
  int64_t p = 3;
  int precision = 64;
  int64_t alpha_max = 3;
  int64_t beta_max = 4;
  std::vector<int64_t> n_list = {-1, 1, 3, 5};
  std::vector<int64_t> q_list = {3, 5, 7, 9};
  int64_t oracle_level = 2;
  int64_t budget = kDefaultOracleOps;
  std::string format = "markdown";
  uint64_t seed = 0;
  bool strict = false;
};

bool is_odd_prime(int64_t p) {
  if (p < 3 || p % 2 == 0) return false;
  for (int64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

void validate(const RunConfig& cfg) {
  if (!is_odd_prime(cfg.p))
    throw InvalidInput("--p must be an odd prime");
  if (cfg.precision < 8 || cfg.precision > 512)
    throw InvalidInput("--precision out of range [8, 512]");
  if (cfg.alpha_max < 0 || cfg.beta_max < cfg.alpha_max)
    throw InvalidInput("--alpha-max/--beta-max must satisfy 0 <= alpha <= beta");
  for (int64_t n : cfg.n_list)
    if (n % 2 == 0)
      throw InvalidInput("--n-list entries must be odd");
  if (cfg.q_list.empty() || cfg.n_list.empty())
    throw InvalidInput("--q-list and --n-list must be nonempty");
  for (int64_t q : cfg.q_list)
    if (q < 2) throw InvalidInput("--q-list entries must be at least 2");
  if (cfg.oracle_level < 1 || cfg.oracle_level > 6)
    throw InvalidInput("--oracle-level out of range [1, 6]");
  if (cfg.budget < 0) throw InvalidInput("--budget must be nonnegative");
}

std::string join_list(const std::vector<int64_t>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

std::string config_line(const RunConfig& cfg) {
  std::ostringstream os;
  os << "p=" << cfg.p << " precision=" << cfg.precision
     << " alpha-max=" << cfg.alpha_max << " beta-max=" << cfg.beta_max
     << " n-list=" << join_list(cfg.n_list) << " q-list=" << join_list(cfg.q_list)
     << " oracle-level=" << cfg.oracle_level << " budget=" << cfg.budget
     << " format=" << cfg.format << " seed=" << cfg.seed
     << " strict=" << (cfg.strict ? 1 : 0);
  return os.str();
}

ordered_json config_json(const RunConfig& cfg) {
  ordered_json j;
  j["p"] = cfg.p;
  j["precision"] = cfg.precision;
  j["alpha_max"] = cfg.alpha_max;
  j["beta_max"] = cfg.beta_max;
  j["n_list"] = cfg.n_list;
  j["q_list"] = cfg.q_list;
  j["oracle_level"] = cfg.oracle_level;
  j["budget"] = cfg.budget;
  j["format"] = cfg.format;
  j["seed"] = cfg.seed;
  j["strict"] = cfg.strict;
  return j;
}

std::string rational_str(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

// ---------------------------------------------------------------------
// Entry grammar: entry := term (('+'|'-') term)*
//                term  := rational | rational '*' 'pi' | 'pi'
//                rational := digits ['/' digits]
// ---------------------------------------------------------------------

int64_t parse_uint(const std::string& s) {
  if (s.empty()) throw InvalidInput("entry: expected digits, got ''");
  for (char ch : s)
    if (ch < '0' || ch > '9')
      throw InvalidInput("entry: expected digits, got '" + s + "'");
  return std::stoll(s);
}

std::pair<int64_t, int64_t> parse_ratio(const std::string& tok) {
  const size_t slash = tok.find('/');
  if (slash == std::string::npos) return {parse_uint(tok), 1};
  int64_t den = parse_uint(tok.substr(slash + 1));
  if (den == 0) throw InvalidInput("entry: zero denominator in '" + tok + "'");
  return {parse_uint(tok.substr(0, slash)), den};
}

PAdicElem parse_entry(const PrimeParam& f, const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (ch != ' ' && ch != '\t') s += ch;
  if (s.empty()) throw InvalidInput("entry: empty");
  PAdicElem acc = PAdicElem::zero(f);
  size_t pos = 0;
  bool first = true;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      throw InvalidInput("entry: expected '+' or '-' between terms");
    }
    const size_t start = pos;
    while (pos < s.size() && s[pos] != '+' && s[pos] != '-') ++pos;
    std::string term = s.substr(start, pos - start);
    if (term.empty()) throw InvalidInput("entry: dangling sign");
    bool is_pi = false;
    if (term == "pi") {
      is_pi = true;
      term = "1";
    } else if (term.size() > 3 && term.substr(term.size() - 3) == "*pi") {
      is_pi = true;
      term = term.substr(0, term.size() - 3);
    } else if (term.size() >= 2 && term.substr(term.size() - 2) == "pi") {
      throw InvalidInput("entry: write pi coefficients as b*pi");
    }
    auto [num, den] = parse_ratio(term);
    PAdicElem v = is_pi ? PAdicElem::from_pair(f, 0, 1, num, den)
                        : PAdicElem::from_rational(f, num, den);
    acc = acc.add(sign < 0 ? v.neg() : v);
    first = false;
  }
  return acc;
}

// ---------------------------------------------------------------------
// Output tables
// ---------------------------------------------------------------------

struct Table {
  std::vector<std::string> cols;
  std::vector<std::vector<std::string>> rows;
};

std::string csv_quote(const std::string& s) {
  if (s.find(',') == std::string::npos && s.find('"') == std::string::npos)
    return s;
  std::string r = "\"";
  for (char ch : s) {
    if (ch == '"') r += '"';
    r += ch;
  }
  return r + "\"";
}

void emit_table(const Table& t, const RunConfig& cfg) {
  if (cfg.format == "csv") {
    std::cout << "# config: " << config_line(cfg) << "\n";
    for (size_t i = 0; i < t.cols.size(); ++i)
      std::cout << (i ? "," : "") << t.cols[i];
    std::cout << "\n";
    for (const auto& row : t.rows) {
      for (size_t i = 0; i < row.size(); ++i)
        std::cout << (i ? "," : "") << csv_quote(row[i]);
      std::cout << "\n";
    }
  } else if (cfg.format == "markdown") {
    std::cout << "config: " << config_line(cfg) << "\n\n";
    std::cout << "|";
    for (const auto& c : t.cols) std::cout << " " << c << " |";
    std::cout << "\n|";
    for (size_t i = 0; i < t.cols.size(); ++i) std::cout << "---|";
    std::cout << "\n";
    for (const auto& row : t.rows) {
      std::cout << "|";
      for (const auto& v : row) std::cout << " " << v << " |";
      std::cout << "\n";
    }
  } else {
    ordered_json j;
    j["config"] = config_json(cfg);
    j["rows"] = ordered_json::array();
    for (const auto& row : t.rows) {
      ordered_json o;
      for (size_t i = 0; i < t.cols.size(); ++i) o[t.cols[i]] = row[i];
      j["rows"].push_back(o);
    }
    std::cout << j.dump(2) << "\n";
  }
}

// ---------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------

int cmd_classify(const RunConfig& cfg, const std::vector<std::string>& entries) {
  if (entries.size() != 4)
    throw InvalidInput("classify needs exactly 4 entries: t11 t12 t21 t22");
  PrimeParam f = PrimeParam::make(cfg.p, cfg.precision);
  Mat2 T{parse_entry(f, entries[0]), parse_entry(f, entries[1]),
         parse_entry(f, entries[2]), parse_entry(f, entries[3])};
  TClass cls = classify(T);
  std::cout << "class: " << cls.to_string() << "\n";
  std::cout << "integral: " << (cls.integral() ? "yes" : "no") << "\n";
  if (cls.kind == TClass::Diagonal)
    std::cout << "eps1: " << (cls.eps1 > 0 ? "+1" : "-1") << "\n";
  else
    std::cout << "eps1: n/a\n";
  const bool split = cls.kind == TClass::AntiDiagonal || cls.eps1 == +1;
  std::cout << "split_representable: " << (split ? "yes" : "no") << "\n";
  return 0;
}

// ---------------------------------------------------------------------
// verify-kr
// ---------------------------------------------------------------------

std::vector<TClass> kr_grid(const RunConfig& cfg) {
  std::vector<TClass> grid;
  for (int64_t al = -1; al <= cfg.alpha_max; ++al)
    for (int64_t be = al; be <= cfg.beta_max; ++be)
      grid.push_back(TClass::diagonal(al, be, +1));
  for (int64_t n : cfg.n_list) grid.push_back(TClass::antidiagonal(n));
  return grid;
}

struct OracleCheck {
  enum State { kNA, kValue, kExhausted } state = kNA;
  Rational value;
  bool consistent = true;  // all affordable faithful levels agreed
};

/// X = 1 density of cls in the base plane L at the affordable faithful
/// levels (a >= faithful_level(cls)), sharing level histograms across
/// rows.  Exhausted when no faithful level fits the budget; a
/// disagreement between faithful levels is reported as an inconsistent
/// value (a failure, not a skip).
OracleCheck oracle_stabilized(const PrimeParam& f, const TClass& cls,
                              const RunConfig& cfg,
                              std::map<int64_t, GramHistogram>& cache) {
  const bool dual_integral =
      cls.kind == TClass::Diagonal ? cls.alpha >= 0 : cls.n >= -1;
  if (!dual_integral) return {};
  OracleCheck out;
  out.state = OracleCheck::kExhausted;
  for (int64_t a = faithful_level(cls); a <= cfg.oracle_level; ++a) {
    ZInt ops = 1;
    for (int64_t i = 0; i < 8 * a; ++i) ops *= cfg.p;
    if (ops > cfg.budget) break;
    auto it = cache.find(a);
    if (it == cache.end())
      it = cache.emplace(a, gram_histogram(f, BaseLattice::L, a, cfg.budget))
               .first;
    const Rational cur = density_from_count(
        ZInt(it->second.at(class_key(f, cls, a))), cfg.p, a, 2);
    if (out.state == OracleCheck::kValue)
      out.consistent = out.consistent && cur == out.value;
    out.state = OracleCheck::kValue;
    out.value = cur;
  }
  return out;
}

int cmd_verify_kr(const RunConfig& cfg) {
  PrimeParam f = PrimeParam::make(cfg.p, cfg.precision);
  Table t{{"class", "q", "int_closed", "int_tree", "kr_rhs", "oracle_alpha",
           "status"},
          {}};
  bool any_fail = false, any_skip = false;
  std::map<int64_t, GramHistogram> cache;
  const std::vector<TClass> grid = kr_grid(cfg);
  for (int64_t q : cfg.q_list)
    for (const TClass& cls : grid) {
      const int64_t closed = intersect_closed(cls, q, HermSpace::Split);
      const Rational rhs = kr_rhs(cls, q);
      bool ok = rhs == Rational(closed);
      bool skipped = false;
      std::string tree = "-", oracle = "-";
      if (q == cfg.p && cls.integral()) {
        try {
          auto [x, y] = canonical_pair(f, cls);
          const int64_t ti = tree_intersection(x, y);
          tree = std::to_string(ti);
          ok = ok && ti == closed;
        } catch (const RegionExceeded&) {
          tree = "exhausted";
          skipped = true;
        }
      }
      if (q == cfg.p) {
        const OracleCheck oc = oracle_stabilized(f, cls, cfg, cache);
        if (oc.state == OracleCheck::kValue) {
          oracle = rational_str(oc.value);
          ok = ok && oc.consistent &&
               oc.value == alpha_value(BaseLattice::L, cls, -1, q, Rational(1));
        } else if (oc.state == OracleCheck::kExhausted) {
          oracle = "exhausted";
          skipped = true;
        }
      }
      any_fail = any_fail || !ok;
      any_skip = any_skip || (ok && skipped);
      t.rows.push_back({cls.to_string(), std::to_string(q),
                        std::to_string(closed), tree, rational_str(rhs),
                        oracle, !ok ? "FAIL" : skipped ? "SKIPPED" : "OK"});
    }
  emit_table(t, cfg);
  if (any_fail) return 1;
  if (any_skip && cfg.strict) return 3;
  return 0;
}

// ---------------------------------------------------------------------
// table
// ---------------------------------------------------------------------

int cmd_table_thm11(const RunConfig& cfg) {
  Table t{{"space", "class", "q", "int"}, {}};
  std::vector<TClass> split_classes, nonsplit_classes;
  for (int64_t al = 0; al <= cfg.alpha_max; ++al)
    for (int64_t be = al; be <= cfg.beta_max; ++be) {
      split_classes.push_back(TClass::diagonal(al, be, +1));
      nonsplit_classes.push_back(TClass::diagonal(al, be, +1));
      nonsplit_classes.push_back(TClass::diagonal(al, be, -1));
    }
  for (int64_t n : cfg.n_list) split_classes.push_back(TClass::antidiagonal(n));
  for (const TClass& cls : split_classes)
    for (int64_t q : cfg.q_list)
      t.rows.push_back(
          {"split", cls.to_string(), std::to_string(q),
           std::to_string(intersect_closed(cls, q, HermSpace::Split))});
  for (const TClass& cls : nonsplit_classes)
    for (int64_t q : cfg.q_list)
      t.rows.push_back(
          {"nonsplit", cls.to_string(), std::to_string(q),
           std::to_string(intersect_closed(cls, q, HermSpace::Nonsplit))});
  emit_table(t, cfg);
  return 0;
}

int cmd_table_thm61(const RunConfig& cfg) {
  Table t{{"base", "eps2", "class", "q", "alpha_at_1", "alpha_at_qinv2",
           "alpha_at_qinv4", "alpha_prime"},
          {}};
  std::vector<TClass> classes;
  for (int e1 : {+1, -1})
    for (int64_t al = 0; al <= cfg.alpha_max; ++al)
      for (int64_t be = al; be <= cfg.beta_max; ++be)
        classes.push_back(TClass::diagonal(al, be, e1));
  for (int64_t n : cfg.n_list) classes.push_back(TClass::antidiagonal(n));
  struct Combo {
    BaseLattice base;
    int eps2;
    const char* base_s;
    const char* eps2_s;
  };
  const std::vector<Combo> combos = {{BaseLattice::L, -1, "L", "-1"},
                                     {BaseLattice::L, +1, "L", "+1"},
                                     {BaseLattice::H, -1, "H", "-"}};
  for (const Combo& cb : combos)
    for (const TClass& cls : classes)
      for (int64_t q : cfg.q_list) {
        const Rational qq(q);
        const Rational x2 = Rational(1) / (qq * qq);
        t.rows.push_back(
            {cb.base_s, cb.eps2_s, cls.to_string(), std::to_string(q),
             rational_str(alpha_value(cb.base, cls, cb.eps2, q, Rational(1))),
             rational_str(alpha_value(cb.base, cls, cb.eps2, q, x2)),
             rational_str(alpha_value(cb.base, cls, cb.eps2, q, x2 * x2)),
             rational_str(alpha_prime(cb.base, cls, cb.eps2, q))});
      }
  emit_table(t, cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact intersection numbers and local densities of special "
               "cycles on the ramified U(1,1) Bruhat-Tits tree"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string which;

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "odd prime residue characteristic");
    sub->add_option("--precision", cfg.precision,
                    "working precision in pi-adic digits");
    sub->add_option("--alpha-max", cfg.alpha_max,
                    "largest diagonal exponent alpha in grids");
    sub->add_option("--beta-max", cfg.beta_max,
                    "largest diagonal exponent beta in grids");
    sub->add_option("--n-list", cfg.n_list, "anti-diagonal exponents (odd)")
        ->delimiter(',');
    sub->add_option("--q-list", cfg.q_list,
                    "residue sizes q for formula evaluation")
        ->delimiter(',');
    sub->add_option("--oracle-level", cfg.oracle_level,
                    "largest finite-quotient level a for the oracle");
    sub->add_option("--budget", cfg.budget, "oracle operation budget");
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"csv", "json", "markdown"}));
    sub->add_option("--seed", cfg.seed, "seed recorded in reports");
    sub->add_flag("--strict", cfg.strict,
                  "exit 3 when budget-skipped rows are present");
  };

  CLI::App* c_classify =
      app.add_subcommand("classify", "classify a Hermitian Gram matrix; "
                                     "entries t11 t12 t21 t22, e.g. 0 pi -pi 0");
  add_common(c_classify);
  c_classify->allow_extras();

  CLI::App* c_verify = app.add_subcommand(
      "verify-kr", "verify the intersection identity over a class grid");
  add_common(c_verify);

  CLI::App* c_table =
      app.add_subcommand("table", "emit closed-formula tables");
  add_common(c_table);
  c_table->add_option("--which", which, "table selector")
      ->required()
      ->check(CLI::IsMember({"thm1.1", "thm6.1"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    validate(cfg);
    if (c_classify->parsed())
      return cmd_classify(cfg, c_classify->remaining());
    if (c_verify->parsed()) return cmd_verify_kr(cfg);
    return which == "thm1.1" ? cmd_table_thm11(cfg) : cmd_table_thm61(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
