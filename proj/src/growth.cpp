#include "fink/growth.hpp"

#include "fink/errors.hpp"

namespace fink {

namespace {

using Kind = GrowthExpr::Kind;

bool function_kind(Kind k) { return k == Kind::Hier || k == Kind::Tower || k == Kind::Compose || k == Kind::Iterate; }

int precedence(const GrowthExpr& e) {
  switch (e.kind()) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul: return 2;
    case Kind::Pow: return 3;
    case Kind::Compose: return 0;
    default: return 4;
  }
}

std::string wrap(const GrowthExpr& e, int need) {
  auto s = e.render();
  return precedence(e) < need ? "(" + s + ")" : s;
}

bool fits(const BigNat& v, std::size_t budget) {
  auto upper = mpz_sizeinbase(v.get_mpz_t(), 10);
  if (upper <= budget) return true;
  if (upper - 1 > budget) return false;
  return decimal_digits(v) <= budget;
}

std::optional<BigNat> checked(BigNat v, std::size_t budget) {
  if (!fits(v, budget)) return std::nullopt;
  return v;
}

std::optional<BigNat> pow2(const BigNat& x, std::size_t budget) {
  // 2^x has floor(x*log10 2)+1 digits; 0.3 < log10 2 keeps this test sound.
  if (x * 3 > BigNat(budget) * 10 + 10) return std::nullopt;
  BigNat out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, x.get_ui());
  return checked(std::move(out), budget);
}

std::optional<BigNat> power(const BigNat& a, const BigNat& b, std::size_t budget) {
  if (b == 0) return BigNat(1);
  if (a <= 1) return a;
  if (!b.fits_ulong_p()) return std::nullopt;
  // digits(a^b) > b*(bits(a)-1)*log10 2
  BigNat lower = b * BigNat(mpz_sizeinbase(a.get_mpz_t(), 2) - 1) * 3 / 10;
  if (lower > BigNat(budget)) return std::nullopt;
  BigNat out;
  mpz_pow_ui(out.get_mpz_t(), a.get_mpz_t(), b.get_ui());
  return checked(std::move(out), budget);
}

unsigned long small_index(const BigNat& i, const char* what) {
  if (i < 1 || !i.fits_ulong_p()) throw InvalidArgument(std::string(what) + " index must be a positive integer");
  return i.get_ui();
}

}  // namespace

GrowthExpr GrowthExpr::make(Kind k, std::vector<GrowthExpr> kids) {
  auto want_fn = [&](std::size_t i, bool fn) {
    if (kids.at(i).is_function() != fn)
      throw InvalidArgument(fn ? "expected a function expression" : "expected a value expression");
  };
  switch (k) {
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Pow: want_fn(0, false), want_fn(1, false); break;
    case Kind::Apply: want_fn(0, true), want_fn(1, false); break;
    case Kind::Hier:
    case Kind::Tower: want_fn(0, false); break;
    case Kind::Compose: want_fn(0, true), want_fn(1, true); break;
    case Kind::Iterate: want_fn(0, true), want_fn(1, false); break;
    default: break;
  }
  return GrowthExpr(std::make_shared<const Node>(Node{k, 0, {}, std::move(kids)}));
}

GrowthExpr GrowthExpr::constant(BigNat v) {
  if (v < 0) throw InvalidArgument("growth constants are natural numbers");
  return GrowthExpr(std::make_shared<const Node>(Node{Kind::Const, std::move(v), {}, {}}));
}

GrowthExpr GrowthExpr::var(std::string name) {
  if (name.empty()) throw InvalidArgument("empty variable name");
  return GrowthExpr(std::make_shared<const Node>(Node{Kind::Var, 0, std::move(name), {}}));
}

GrowthExpr GrowthExpr::hier(GrowthExpr index) {
  if (index.kind() == Kind::Const && index.value() < 1) throw InvalidArgument("f index must be at least 1");
  return make(Kind::Hier, {std::move(index)});
}

GrowthExpr GrowthExpr::tower(GrowthExpr index) {
  if (index.kind() == Kind::Const && index.value() < 1) throw InvalidArgument("t index must be at least 1");
  return make(Kind::Tower, {std::move(index)});
}

GrowthExpr GrowthExpr::compose(GrowthExpr outer, GrowthExpr inner) {
  return make(Kind::Compose, {std::move(outer), std::move(inner)});
}
GrowthExpr GrowthExpr::iterate(GrowthExpr fn, GrowthExpr times) {
  return make(Kind::Iterate, {std::move(fn), std::move(times)});
}
GrowthExpr GrowthExpr::apply(GrowthExpr fn, GrowthExpr arg) { return make(Kind::Apply, {std::move(fn), std::move(arg)}); }
GrowthExpr GrowthExpr::pow(GrowthExpr base, GrowthExpr exp) { return make(Kind::Pow, {std::move(base), std::move(exp)}); }
GrowthExpr operator+(GrowthExpr a, GrowthExpr b) { return GrowthExpr::make(Kind::Add, {std::move(a), std::move(b)}); }
GrowthExpr operator-(GrowthExpr a, GrowthExpr b) { return GrowthExpr::make(Kind::Sub, {std::move(a), std::move(b)}); }
GrowthExpr operator*(GrowthExpr a, GrowthExpr b) { return GrowthExpr::make(Kind::Mul, {std::move(a), std::move(b)}); }

bool GrowthExpr::is_function() const { return function_kind(kind()); }

std::string GrowthExpr::render() const {
  switch (kind()) {
    case Kind::Const: return value().get_str();
    case Kind::Var: return name();
    case Kind::Add: return wrap(lhs(), 1) + "+" + wrap(rhs(), 2);
    case Kind::Sub: return wrap(lhs(), 1) + "-" + wrap(rhs(), 2);
    case Kind::Mul: return wrap(lhs(), 2) + "*" + wrap(rhs(), 3);
    case Kind::Pow: return wrap(lhs(), 4) + "^" + wrap(rhs(), 4);
    case Kind::Apply: return lhs().render() + "(" + rhs().render() + ")";
    case Kind::Hier: return "f[" + lhs().render() + "]";
    case Kind::Tower: return "t[" + lhs().render() + "]";
    case Kind::Compose: return lhs().render() + "∘" + rhs().render();
    case Kind::Iterate: return "iter(" + lhs().render() + "," + rhs().render() + ")";
  }
  return "?";
}

std::set<std::string> GrowthExpr::variables() const {
  if (kind() == Kind::Var) return {name()};
  std::set<std::string> out;
  for (const auto& k : node_->kids) {
    auto sub = k.variables();
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

GrowthExpr GrowthExpr::substitute(const std::map<std::string, GrowthExpr>& env) const {
  if (kind() == Kind::Var) {
    auto it = env.find(name());
    return it == env.end() ? *this : it->second;
  }
  if (node_->kids.empty()) return *this;
  std::vector<GrowthExpr> kids;
  for (const auto& k : node_->kids) kids.push_back(k.substitute(env));
  bool arith = kind() == Kind::Add || kind() == Kind::Sub || kind() == Kind::Mul || kind() == Kind::Pow;
  if (arith) {
    const auto &a = kids[0], &b = kids[1];
    bool ca = a.kind() == Kind::Const, cb = b.kind() == Kind::Const;
    if (ca && cb) {
      GrowthExpr folded = make(kind(), kids);
      if (auto v = eval(folded, Env{}, 40)) return constant(*v);
    }
    if ((kind() == Kind::Add || kind() == Kind::Sub) && cb && b.value() == 0) return a;
    if (kind() == Kind::Add && ca && a.value() == 0) return b;
    if (kind() == Kind::Mul && cb && b.value() == 1) return a;
    if (kind() == Kind::Mul && ca && a.value() == 1) return b;
  }
  return make(kind(), std::move(kids));
}

std::size_t decimal_digits(const BigNat& v) {
  if (v == 0) return 1;
  BigNat a = abs(v);
  auto s = mpz_sizeinbase(a.get_mpz_t(), 10);
  if (s == 1) return 1;
  BigNat low;
  mpz_ui_pow_ui(low.get_mpz_t(), 10, s - 1);
  return a < low ? s - 1 : s;
}

std::optional<BigNat> tower_value(unsigned long i, const BigNat& x, std::size_t budget) {
  if (!fits(x, budget)) return std::nullopt;
  BigNat v = x;
  for (unsigned long j = 1; j < i; ++j) {
    auto next = pow2(v, budget);
    if (!next) return std::nullopt;
    v = std::move(*next);
  }
  return v;
}

std::optional<BigNat> hier_value(unsigned long i, const BigNat& x, std::size_t budget) {
  if (i == 1) return checked(2 * x, budget);
  if (i == 2) return pow2(x, budget);
  if (x == 0) return BigNat(1);
  // f[i](3) >= f[5](3) = f[4](4) = f[3](65536), a tower of 65536 twos; no
  // representable digit budget holds it.
  if (i >= 5 && x >= 3) return std::nullopt;
  BigNat v = 1;
  for (BigNat c = 0; c < x; ++c) {
    auto next = hier_value(i - 1, v, budget);
    if (!next) return std::nullopt;
    v = std::move(*next);
  }
  return checked(std::move(v), budget);
}

std::optional<BigNat> apply_fn(const GrowthExpr& fn, const BigNat& x, const Env& env, std::size_t budget) {
  switch (fn.kind()) {
    case Kind::Hier:
    case Kind::Tower: {
      auto idx = eval(fn.lhs(), env, budget);
      if (!idx) return std::nullopt;
      auto i = small_index(*idx, fn.kind() == Kind::Hier ? "f" : "t");
      return fn.kind() == Kind::Hier ? hier_value(i, x, budget) : tower_value(i, x, budget);
    }
    case Kind::Compose: {
      auto inner = apply_fn(fn.rhs(), x, env, budget);
      if (!inner) return std::nullopt;
      return apply_fn(fn.lhs(), *inner, env, budget);
    }
    case Kind::Iterate: {
      auto times = eval(fn.rhs(), env, budget);
      if (!times) return std::nullopt;
      BigNat v = x;
      for (BigNat c = 0; c < *times; ++c) {
        auto next = apply_fn(fn.lhs(), v, env, budget);
        if (!next) return std::nullopt;
        if (*next == v) break;  // fixed point: further iterations change nothing
        v = std::move(*next);
      }
      return v;
    }
    default: throw InvalidArgument("apply_fn needs a function expression");
  }
}

std::optional<BigNat> eval(const GrowthExpr& e, const Env& env, std::size_t budget) {
  if (budget < 1) throw InvalidArgument("digit budget must be at least 1");
  switch (e.kind()) {
    case Kind::Const: return checked(e.value(), budget);
    case Kind::Var: {
      auto it = env.find(e.name());
      if (it == env.end()) throw InvalidArgument("unbound variable '" + e.name() + "'");
      if (it->second < 0) throw InvalidArgument("variables range over the naturals");
      return checked(it->second, budget);
    }
    case Kind::Apply: {
      auto x = eval(e.rhs(), env, budget);
      if (!x) return std::nullopt;
      return apply_fn(e.lhs(), *x, env, budget);
    }
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Pow: {
      auto a = eval(e.lhs(), env, budget);
      if (!a) return std::nullopt;
      auto b = eval(e.rhs(), env, budget);
      if (!b) return std::nullopt;
      if (e.kind() == Kind::Add) return checked(*a + *b, budget);
      if (e.kind() == Kind::Sub) return *a > *b ? BigNat(*a - *b) : BigNat(0);
      if (e.kind() == Kind::Mul) return checked(*a * *b, budget);
      return power(*a, *b, budget);
    }
    default: throw InvalidArgument("cannot evaluate a function expression without an argument");
  }
}

std::optional<BigNat> eval(const GrowthExpr& e, const BigNat& x, std::size_t budget) {
  auto vars = e.variables();
  if (vars.size() > 1) throw InvalidArgument("expression has more than one free variable");
  Env env;
  if (!vars.empty()) env[*vars.begin()] = x;
  if (e.is_function()) return apply_fn(e, x, env, budget);
  return eval(e, env, budget);
}

std::string to_string(Order o) {
  switch (o) {
    case Order::Less: return "<";
    case Order::Equal: return "=";
    case Order::Greater: return ">";
    case Order::Indeterminate: return "indeterminate";
  }
  return "?";
}

std::vector<Order> compare_at(const GrowthExpr& a, const GrowthExpr& b, const std::vector<BigNat>& points,
                              std::size_t budget) {
  std::vector<Order> out;
  for (const auto& x : points) {
    auto va = eval(a, x, budget), vb = eval(b, x, budget);
    if (!va || !vb) {
      out.push_back(Order::Indeterminate);
      continue;
    }
    int c = cmp(*va, *vb);
    out.push_back(c < 0 ? Order::Less : c == 0 ? Order::Equal : Order::Greater);
  }
  return out;
}

}  // namespace fink
