#include "fink/recursion.hpp"

#include <algorithm>
#include <functional>

#include "fink/catalog.hpp"
#include "fink/errors.hpp"
#include "fink/search.hpp"
#include "fink/span.hpp"

namespace fink {

namespace {

using G = GrowthExpr;
using Value = std::optional<BigNat>;
using SideFn = std::function<Value(const Env&, std::size_t)>;

struct Side {
  std::string text;
  SideFn eval;
};

struct Link {
  Side lhs, rhs;
  std::vector<std::string> vars;
  std::string note;
};

struct Chain {
  std::vector<Link> links;
  SampleRange defaults;
};

Side expr_side(const G& e) {
  return {e.render(), [e](const Env& env, std::size_t budget) { return eval(e, env, budget); }};
}

Side never(std::string text) {
  return {std::move(text), [](const Env&, std::size_t) -> Value { return std::nullopt; }};
}

unsigned long at(const Env& env, const char* name) { return env.at(name).get_ui(); }

Value catalog_at(const std::string& name, Params p, std::size_t budget) {
  return eval(catalog_expr(name, p), Env{}, budget);
}

// g_{k,d} bound: dimension 1 uses gk1 (g11 for k=1), higher dimensions gkd (g1d for k=1).
Value gkd_bound(unsigned long k, unsigned long d, const BigNat& m, std::size_t budget) {
  if (!m.fits_ulong_p()) return std::nullopt;
  Params p{{"m", Rational(m)}};
  if (k == 1) {
    if (d == 1) return catalog_at("g11", p, budget);
    p["d"] = d;
    return catalog_at("g1d", p, budget);
  }
  p["k"] = k;
  if (d == 1) return catalog_at("gk1", p, budget);
  p["d"] = d;
  return catalog_at("gkd", p, budget);
}

Value iterate_bound(const std::function<Value(const BigNat&)>& g, const Value& times, BigNat start) {
  if (!times) return std::nullopt;
  for (BigNat i = 0; i < *times; ++i) {
    auto next = g(start);
    if (!next) return std::nullopt;
    start = std::move(*next);
  }
  return start;
}

Value exact_or_indeterminate(const std::function<std::size_t()>& run) {
  try {
    return BigNat(run());
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
}

SearchOptions small_budget() {
  SearchOptions o;
  o.node_budget = 2'000'000;
  o.workers = 1;
  o.parallel = false;
  return o;
}

Chain build_chain(const std::string& name) {
  G m = G::var("m"), l = G::var("l"), N = G::var("N"), p = G::var("p");
  G f4 = G::hier(4), f5 = G::hier(5), f6 = G::hier(6);
  auto c = [](unsigned long v) { return G::constant(v); };

  if (name == "N_recursion") {
    Chain ch;
    ch.defaults = {{"m", {1, 3}}};
    ch.links.push_back({{"N(m) (exact, r=2)",
                         [](const Env& env, std::size_t) {
                           auto mm = at(env, "m");
                           if (mm > 2) return Value{};
                           return exact_or_indeterminate(
                               [&] { return exact_min_determined(mm, 2, small_budget()).value; });
                         }},
                        expr_side(catalog_expr("N_tower")),
                        {"m"},
                        "exact values from the exhaustive oracle; m >= 3 is beyond desk search"});
    ch.links.push_back({never("N(m+1)"), never("t[l+1](W(N(m)))"), {"m"},
                        "l = sum_{i <= t[6](m+9)} i; never evaluable"});
    ch.links.push_back({expr_side(catalog_expr("N_tower")), expr_side(catalog_expr("N_bound")), {"m"}, ""});
    return ch;
  }
  if (name == "g11_iter") {
    Chain ch;
    ch.defaults = {{"m", {1, 2}}, {"l", {1, 2}}};
    ch.links.push_back({{"g(1,1,m) (exact, r=2)",
                         [](const Env& env, std::size_t) {
                           auto mm = at(env, "m");
                           if (mm > 2) return Value{};
                           return exact_or_indeterminate([&] { return exact_g(1, 1, mm, 2, small_budget()).value; });
                         }},
                        expr_side(catalog_expr("g11")),
                        {"m"},
                        ""});
    ch.links.push_back({{"g11^l(m)",
                         [](const Env& env, std::size_t budget) {
                           auto g = [budget](const BigNat& x) { return gkd_bound(1, 1, x, budget); };
                           return iterate_bound(g, env.at("l"), env.at("m"));
                         }},
                        expr_side(catalog_expr("g11_iter")),
                        {"m", "l"},
                        ""});
    G next = G::iterate(f4, l + c(1))(c(6) * m + l - c(3));
    ch.links.push_back({expr_side(catalog_expr("g11_iter")), expr_side(next), {"m", "l"}, "monotone in l"});
    return ch;
  }
  if (name == "g12_chain") {
    Chain ch;
    ch.defaults = {{"m", {1, 2}}};
    G two_p = G::pow(c(2), p) - c(1);
    G a = G::iterate(f4, two_p)(G::pow(c(2), p) + c(7));
    G inner = f4(c(6) * m - c(2));
    G b = G::iterate(f4, inner)(inner);
    G d = G::iterate(f4, inner + c(1))(c(6) * m - c(2));
    G e = f5(f4(c(7) * m));
    G last = G::iterate(f5, c(2))(c(7) * m);
    ch.links.push_back({{"g11^(2^p-1)(2)",
                         [](const Env& env, std::size_t budget) {
                           auto pw = BigNat(2);
                           if (!env.at("p").fits_ulong_p()) return Value{};
                           auto times = eval(G::pow(G::constant(2), G::constant(env.at("p"))) - G::constant(1),
                                             Env{}, budget);
                           auto g = [budget](const BigNat& x) { return gkd_bound(1, 1, x, budget); };
                           return iterate_bound(g, times, pw);
                         }},
                        expr_side(a),
                        {"m"},
                        "p = f[4](6*m-3)"});
    ch.links.push_back({expr_side(a), expr_side(b), {"m"}, "p = f[4](6*m-3)"});
    ch.links.push_back({expr_side(b), expr_side(d), {"m"}, ""});
    ch.links.push_back({expr_side(d), expr_side(e), {"m"}, ""});
    ch.links.push_back({expr_side(e), expr_side(last), {"m"}, ""});
    return ch;
  }
  if (name == "barN2_chain") {
    Chain ch;
    ch.defaults = {{"N", {1, 2}}};
    G iters = c(2) * G::pow(N, c(2)) + N;
    G mid = G::iterate(f5, iters)(c(2) * G::pow(N, c(2)) + c(10) * N - c(1));
    Side power{"g(1,2(N-1)+3)^N(N)", [](const Env& env, std::size_t budget) {
                 auto n = at(env, "N");
                 auto g = [n, budget](const BigNat& x) { return gkd_bound(1, 2 * (n - 1) + 3, x, budget); };
                 return iterate_bound(g, env.at("N"), env.at("N"));
               }};
    ch.links.push_back({{"g(1,2(N-1)+3)∘...∘g(1,3)(N)",
                         [](const Env& env, std::size_t budget) {
                           auto n = at(env, "N");
                           Value v = env.at("N");
                           for (unsigned long i = 0; i < n && v; ++i) v = gkd_bound(1, 2 * i + 3, *v, budget);
                           return v;
                         }},
                        power,
                        {"N"},
                        ""});
    ch.links.push_back({power, expr_side(mid), {"N"}, ""});
    ch.links.push_back({expr_side(mid), expr_side(catalog_expr("barN2")), {"N"}, ""});
    return ch;
  }
  if (name == "gkd_chain") {
    Chain ch;
    ch.defaults = {{"k", {1, 2}}, {"d", {1, 2}}, {"m", {1, 2}}};
    ch.links.push_back({{"g(k,d+1,m)",
                         [](const Env& env, std::size_t budget) {
                           return gkd_bound(at(env, "k"), at(env, "d") + 1, env.at("m"), budget);
                         }},
                        {"g(k,1)^(h(k,d)(g(k,d,m)))(2)",
                         [](const Env& env, std::size_t budget) -> Value {
                           auto k = at(env, "k"), d = at(env, "d");
                           auto inner = gkd_bound(k, d, env.at("m"), budget);
                           if (!inner || !inner->fits_ulong_p() || *inner > 64) return std::nullopt;
                           Value h = BigNat(count_block_tuples(static_cast<int>(k), inner->get_ui(), d));
                           auto g = [k, budget](const BigNat& x) { return gkd_bound(k, 1, x, budget); };
                           return iterate_bound(g, h, BigNat(2));
                         }},
                        {"k", "d", "m"},
                        ""});
    ch.links.push_back({{"g(k+1,1,m)",
                         [](const Env& env, std::size_t budget) {
                           return gkd_bound(at(env, "k") + 1, 1, env.at("m"), budget);
                         }},
                        {"g(k,2(g11(m)-1)+3)∘...∘g(k,3)(g11(m))",
                         [](const Env& env, std::size_t budget) -> Value {
                           auto k = at(env, "k");
                           auto h = gkd_bound(1, 1, env.at("m"), budget);
                           if (!h || !h->fits_ulong_p()) return std::nullopt;
                           Value v = *h;
                           for (unsigned long i = 0; i < h->get_ui() && v; ++i) v = gkd_bound(k, 2 * i + 3, *v, budget);
                           return v;
                         }},
                        {"k", "m"},
                        ""});
    return ch;
  }
  if (name == "h_d" || name == "h_kd") {
    bool general = name == "h_kd";
    Chain ch;
    if (general)
      ch.defaults = {{"k", {1, 3}}, {"l", {1, 5}}, {"d", {1, 2}}};
    else
      ch.defaults = {{"l", {1, 8}}, {"d", {1, 3}}};
    Side count{general ? "|FIN_k(l)^[d]|" : "|FIN(l)^[d]|", [general](const Env& env, std::size_t) -> Value {
                 int k = general ? static_cast<int>(at(env, "k")) : 1;
                 return BigNat(count_block_tuples(k, at(env, "l"), at(env, "d")));
               }};
    std::vector<std::string> vars = general ? std::vector<std::string>{"k", "l", "d"} : std::vector<std::string>{"l", "d"};
    ch.links.push_back({count, expr_side(catalog_expr(name)), vars, "left side by enumeration"});
    return ch;
  }
  throw UnknownName("unknown derivation chain '" + name + "'");
}

void for_each_point(const std::vector<std::string>& vars, const SampleRange& range, std::size_t i, Env& env,
                    const std::function<void(const Env&)>& fn) {
  if (i == vars.size()) {
    fn(env);
    return;
  }
  auto [lo, hi] = range.at(vars[i]);
  for (auto x = lo; x <= hi; ++x) {
    env[vars[i]] = x;
    for_each_point(vars, range, i + 1, env, fn);
  }
  env.erase(vars[i]);
}

}  // namespace

std::string to_string(LinkStatus s) {
  switch (s) {
    case LinkStatus::Holds: return "holds";
    case LinkStatus::Fails: return "fails";
    case LinkStatus::Indeterminate: return "indeterminate";
  }
  return "?";
}

std::vector<std::string> recursion_chains() {
  return {"N_recursion", "g11_iter", "g12_chain", "barN2_chain", "gkd_chain", "h_d", "h_kd"};
}

std::size_t count_block_tuples(int k, std::size_t l, std::size_t d) {
  auto members = enumerate_fink(l, k);
  std::sort(members.begin(), members.end());
  return block_tuples(members, d).size();
}

RecursionReport verify_recursion(const std::string& name, const SampleRange& range, std::size_t digit_budget) {
  auto chain = build_chain(name);
  SampleRange r = chain.defaults;
  for (const auto& [var, span] : range) {
    if (!r.count(var)) throw InvalidArgument("chain " + name + " has no variable '" + var + "'");
    r[var] = span;
  }
  RecursionReport report{name, {}};
  for (const auto& link : chain.links) {
    LinkReport lr{link.lhs.text, link.rhs.text, link.note, {}, LinkStatus::Indeterminate};
    bool any_hold = false, any_fail = false;
    Env env;
    for_each_point(link.vars, r, 0, env, [&](const Env& at_point) {
      Env full = at_point;
      if (name == "g12_chain") {
        auto pv = eval(catalog_expr("g11"), full, digit_budget);
        if (pv) full["p"] = *pv;
      }
      LinkPoint pt{at_point, LinkStatus::Indeterminate, "overflow", "overflow"};
      Value a, b;
      if (name != "g12_chain" || full.count("p")) {
        a = link.lhs.eval(full, digit_budget);
        b = link.rhs.eval(full, digit_budget);
      }
      if (a) pt.lhs_value = a->get_str();
      if (b) pt.rhs_value = b->get_str();
      if (a && b) {
        pt.status = *a <= *b ? LinkStatus::Holds : LinkStatus::Fails;
        (pt.status == LinkStatus::Holds ? any_hold : any_fail) = true;
      }
      lr.points.push_back(std::move(pt));
    });
    lr.status = any_fail ? LinkStatus::Fails : any_hold ? LinkStatus::Holds : LinkStatus::Indeterminate;
    report.links.push_back(std::move(lr));
  }
  return report;
}

nlohmann::json to_json(const RecursionReport& r) {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : r.links) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : l.points) {
      nlohmann::json at_point;
      for (const auto& [k, v] : p.point) at_point[k] = v.get_str();
      std::string lv = p.lhs_value.size() > 60 ? std::to_string(p.lhs_value.size()) + " digits" : p.lhs_value;
      std::string rv = p.rhs_value.size() > 60 ? std::to_string(p.rhs_value.size()) + " digits" : p.rhs_value;
      pts.push_back({{"at", at_point}, {"status", to_string(p.status)}, {"lhs", lv}, {"rhs", rv}});
    }
    links.push_back({{"lhs", l.lhs}, {"rhs", l.rhs}, {"note", l.note}, {"status", to_string(l.status)}, {"points", pts}});
  }
  return {{"chain", r.name}, {"links", links}};
}

}  // namespace fink
