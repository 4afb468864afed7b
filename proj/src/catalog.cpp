#include "fink/catalog.hpp"

#include <cmath>
#include <functional>

#include "fink/errors.hpp"

namespace fink {

namespace {

using G = GrowthExpr;

G c(unsigned long v) { return G::constant(v); }
G v(const char* name) { return G::var(name); }
G f(G i) { return G::hier(std::move(i)); }
G f(unsigned long i) { return G::hier(i); }
G t(G i) { return G::tower(std::move(i)); }
G t(unsigned long i) { return G::tower(i); }

BigNat integer_param(const Params& p, const std::string& name) {
  const auto& q = p.at(name);
  if (q.get_den() != 1 || q < 0) throw InvalidArgument("parameter " + name + " must be a natural number");
  return q.get_num();
}

Rational required(const Params& p, const char* name) {
  auto it = p.find(name);
  if (it == p.end()) throw InvalidArgument(std::string("missing parameter ") + name);
  return it->second;
}

void check_eps(const Rational& eps) {
  if (eps <= 0 || eps >= 1) throw InvalidArgument("eps must lie in (0,1)");
}

void check_C(const Rational& C) {
  if (C <= 0) throw InvalidArgument("C must be positive");
}

BigNat rat_pow_num(const Rational& q, unsigned long n, bool num) {
  BigNat out;
  mpz_pow_ui(out.get_mpz_t(), num ? q.get_num_mpz_t() : q.get_den_mpz_t(), n);
  return out;
}

// (1-q)^n <= q, exactly.
bool pow_at_most(const Rational& base, unsigned long n, const Rational& q, bool strict) {
  BigNat lhs = rat_pow_num(base, n, true) * q.get_den();
  BigNat rhs = q.get_num() * rat_pow_num(base, n, false);
  return strict ? lhs < rhs : lhs <= rhs;
}

// Least n >= 0 with base^n (<|<=) q, for base, q in (0,1).
std::size_t least_power_below(const Rational& base, const Rational& q, bool strict) {
  long double est = std::log(q.get_d()) / std::log(base.get_d());
  if (!std::isfinite(est) || est > 2e4) {
    // Too large to confirm with exact powers; round outward so the bound never shrinks.
    return static_cast<std::size_t>(std::ceil(est)) + 1;
  }
  auto n = static_cast<unsigned long>(std::max<long double>(0, std::floor(est) - 1));
  while (n > 0 && pow_at_most(base, n - 1, q, strict)) --n;
  while (!pow_at_most(base, n, q, strict)) ++n;
  return n;
}

G build(const std::string& name, const Params& p) {
  if (name == "RamseyBound") return t(v("d"))(v("c") * v("m"));
  if (name == "VdWBound") return t(6)(v("m") + c(9));
  if (name == "N_bound") return f(4)(c(3) * v("m"));
  if (name == "N_tower") {
    G tt = G::compose(f(3), G::compose(f(3), f(3)));
    return G::iterate(tt, v("m"))(c(1));
  }
  if (name == "g11") return f(4)(c(6) * v("m") - c(3));
  if (name == "g11_iter") return G::iterate(f(4), v("l"))(c(6) * v("m") + v("l") - c(4));
  if (name == "g1d") return G::iterate(f(5), v("d"))(c(7) * v("m") + c(2) * (v("d") - c(1)));
  if (name == "barN2") {
    G N = v("N");
    return f(6)(c(4) * G::pow(N, c(2)) + c(11) * N - c(1));
  }
  if (name == "g21") return f(6)(f(4)(c(6) * v("m") - c(2)));
  if (name == "gk1") return G::compose(f(c(4) + c(2) * (v("k") - c(1))), f(4))(c(6) * v("m") - c(2));
  if (name == "gkd")
    return G::iterate(f(c(5) + c(2) * (v("k") - c(1))), v("d"))(f(4)(c(6) * v("m") - c(2)) +
                                                                  c(2) * (v("d") - c(1)));
  if (name == "h_d") return G::pow(c(2), v("l") * v("d"));
  if (name == "h_kd") return v("d") * G::pow(v("l"), v("k"));

  if (name == "mbar") {
    auto C = required(p, "C"), eps = required(p, "eps");
    check_C(C), check_eps(eps);
    G q = G::constant(ceil_q(3 * C / eps));
    G L = G::constant(ceil_log2(Rational(3) / eps));
    return f(3)(v("m") * G::pow(q, v("m")) * L);
  }
  if (name == "D") {
    auto eps = required(p, "eps");
    check_eps(eps);
    G s = c(diameter_s(eps));
    return G::pow(c(3), (s + c(1)) * v("t"));
  }
  if (name == "n_stab") {
    auto C = required(p, "C"), eps = required(p, "eps");
    check_C(C), check_eps(eps);
    G s = c(stab_s(C, eps));
    G e = G::pow(c(3), v("t") * s);
    G q = G::constant(ceil_q(9 * C / eps));
    G L = G::constant(ceil_log2(Rational(9) / eps));
    return f(3)(e * G::pow(q, e) * L);
  }
  if (name == "N_stab") {
    auto C = required(p, "C"), eps = required(p, "eps");
    check_C(C), check_eps(eps);
    G s = c(stab_s(C, eps));
    G e = G::pow(v("m"), s);
    G q = G::constant(ceil_q(C / eps));
    return f(3)(e * G::pow(q, e));
  }
  throw UnknownName("unknown bound '" + name + "'");
}

}  // namespace

const std::vector<CatalogEntry>& bound_catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"RamseyBound", {"d", "m", "c"}, "Ramsey number for d-sets, t_d(c*m); c defaults to 3"},
      {"VdWBound", {"m"}, "van der Waerden number, t_6(m+9)"},
      {"N_bound", {"m"}, "min-determined length m, f_4(3m)"},
      {"N_tower", {"m"}, "min-determined recursion unrolled, (t^3)^m(1) with t = f_3"},
      {"g11", {"m"}, "Folkman, f_4(6m-3)"},
      {"g11_iter", {"l", "m"}, "l-fold iterate of g11, f_4^l(6m+l-4)"},
      {"g1d", {"d", "m"}, "k=1 in dimension d, f_5^d(7m+2(d-1))"},
      {"barN2", {"N"}, "supp-top homogeneity width for k=2, f_6(4N^2+11N-1)"},
      {"g21", {"m"}, "k=2 in dimension 1, f_6(f_4(6m-2))"},
      {"gk1", {"k", "m"}, "dimension 1, f_{4+2(k-1)} o f_4(6m-2)"},
      {"gkd", {"k", "d", "m"}, "dimension d > 1, f_{5+2(k-1)}^d(f_4(6m-2)+2(d-1))"},
      {"h_d", {"d", "l"}, "bound on |FIN(l)^[d]|, 2^(ld)"},
      {"h_kd", {"k", "d", "l"}, "bound on |FIN_k(l)^[d]|, d*l^k"},
      {"mbar", {"C", "eps", "m"}, "almost-spreading width"},
      {"D", {"eps", "t"}, "small-diameter width for m = 3^t, 3^((s+1)t)"},
      {"n_stab", {"C", "eps", "t"}, "stabilization width for m = 3^t via the two claims"},
      {"N_stab", {"C", "eps", "m"}, "stabilization width, f_3(m^s*ceil(C/eps)^(m^s))"},
  };
  return entries;
}

GrowthExpr catalog_expr(const std::string& name, const Params& params) {
  Params p = params;
  if (name == "RamseyBound" && !p.count("c")) p["c"] = 3;
  if ((name == "D" || name == "n_stab") && p.count("m") && !p.count("t")) {
    // m = 3^t; a non-power m is rounded up to the next power of three.
    auto m = integer_param(p, "m");
    unsigned long tt = 0;
    for (BigNat pw = 1; pw < m; pw *= 3) ++tt;
    p["t"] = tt;
  }
  G e = build(name, p);
  std::map<std::string, G> bind;
  for (const auto& name_ : e.variables())
    if (p.count(name_)) bind[name_] = G::constant(integer_param(p, name_));
  return e.substitute(bind);
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw InvalidArgument("empty number");
  try {
    auto dot = text.find('.');
    if (dot != std::string::npos) {
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      BigNat den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, text.size() - dot - 1);
      Rational q(BigNat(digits, 10), den);
      q.canonicalize();
      return q;
    }
    Rational q(text, 10);
    if (q.get_den() == 0) throw InvalidArgument("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw InvalidArgument("bad rational '" + text + "'");
  }
}

std::string format_rational(const Rational& q) { return q.get_str(); }

BigNat ceil_q(const Rational& x) {
  BigNat out;
  mpz_cdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

std::size_t ceil_log2(const Rational& x) {
  if (x <= 0) throw InvalidArgument("log2 of a non-positive number");
  std::size_t L = 0;
  Rational p = 1;
  while (p < x) p *= 2, ++L;
  return L;
}

std::size_t ceil_log_ratio(const Rational& q) {
  if (q <= 0 || q >= 1) throw InvalidArgument("ratio must lie in (0,1)");
  return least_power_below(1 - q, q, false);
}

std::size_t stab_s(const Rational& C, const Rational& eps) {
  check_C(C), check_eps(eps);
  Rational q = eps / (12 * C);
  return ceil_log_ratio(q) + 2;
}

std::size_t diameter_s(const Rational& eps) {
  check_eps(eps);
  Rational q = eps / 4;
  return least_power_below(1 - q, q, true) + 1;
}

std::vector<std::array<std::string, 3>> summary_table() {
  std::vector<std::array<std::string, 3>> rows;
  auto add_block = [&](const std::string& k_label, const Params& kp) {
    Params d2 = kp;
    d2["d"] = 2;
    rows.push_back({k_label, "1", catalog_expr("gk1", kp).render()});
    rows.push_back({k_label, "2", catalog_expr("gkd", d2).render()});
    rows.push_back({k_label, "d", catalog_expr("gkd", kp).render()});
  };
  add_block("2", {{"k", 2}});
  add_block("3", {{"k", 3}});
  add_block("k", {});
  return rows;
}

std::string render_summary_table() {
  std::string out = "k | dimension | upper bound\n";
  for (const auto& r : summary_table()) out += r[0] + " | " + r[1] + " | " + r[2] + "\n";
  return out;
}

}  // namespace fink
