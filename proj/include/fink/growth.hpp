#pragma once

// Symbolic growth calculus: expressions over naturals built from +, monus,
// *, ^, the tower functions t[i], the hierarchy f[i] (f[1](x)=2x,
// f[i+1](x)=f[i]^(x)(1)), composition and explicit iteration. Evaluation is
// exact under a decimal digit budget; running past the budget yields nullopt
// instead of a number.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace fink {

using BigNat = mpz_class;

class GrowthExpr {
 public:
  enum class Kind {
    Const,
    Var,
    Add,
    Sub,  // truncated at zero
    Mul,
    Pow,
    Apply,  // function applied to a value
    Hier,   // f[i], a function
    Tower,  // t[i], a function
    Compose,
    Iterate
  };

  GrowthExpr() : GrowthExpr(constant(0)) {}

  static GrowthExpr constant(BigNat v);
  static GrowthExpr constant(unsigned long v) { return constant(BigNat(v)); }
  static GrowthExpr var(std::string name);
  static GrowthExpr hier(GrowthExpr index);
  static GrowthExpr hier(unsigned long index) { return hier(constant(index)); }
  static GrowthExpr tower(GrowthExpr index);
  static GrowthExpr tower(unsigned long index) { return tower(constant(index)); }
  static GrowthExpr compose(GrowthExpr outer, GrowthExpr inner);
  static GrowthExpr iterate(GrowthExpr fn, GrowthExpr times);
  static GrowthExpr apply(GrowthExpr fn, GrowthExpr arg);
  static GrowthExpr pow(GrowthExpr base, GrowthExpr exp);

  friend GrowthExpr operator+(GrowthExpr a, GrowthExpr b);
  friend GrowthExpr operator-(GrowthExpr a, GrowthExpr b);
  friend GrowthExpr operator*(GrowthExpr a, GrowthExpr b);

  /// Applies a function-valued expression: shorthand for apply(*this, arg).
  GrowthExpr operator()(GrowthExpr arg) const { return apply(*this, std::move(arg)); }

  Kind kind() const { return node_->kind; }
  bool is_function() const;
  const BigNat& value() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  const GrowthExpr& lhs() const { return node_->kids.at(0); }
  const GrowthExpr& rhs() const { return node_->kids.at(1); }

  std::string render() const;
  std::set<std::string> variables() const;

  /// Replaces variables and folds constant arithmetic (+, -, *, ^ on
  /// constants with small results). Function applications are kept symbolic.
  GrowthExpr substitute(const std::map<std::string, GrowthExpr>& env) const;

 private:
  struct Node {
    Kind kind;
    BigNat value;
    std::string name;
    std::vector<GrowthExpr> kids;
  };
  explicit GrowthExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static GrowthExpr make(Kind k, std::vector<GrowthExpr> kids);

  std::shared_ptr<const Node> node_;
};

using Env = std::map<std::string, BigNat>;

/// Exact decimal digit count (1 for zero).
std::size_t decimal_digits(const BigNat& v);

/// Exact value, or nullopt once any intermediate exceeds `digit_budget` digits.
/// Throws InvalidArgument for unbound variables or function-valued input.
std::optional<BigNat> eval(const GrowthExpr& e, const Env& env, std::size_t digit_budget);
/// Binds the expression's single free variable (if any) to x.
std::optional<BigNat> eval(const GrowthExpr& e, const BigNat& x, std::size_t digit_budget);
/// Applies a function-valued expression to x.
std::optional<BigNat> apply_fn(const GrowthExpr& fn, const BigNat& x, const Env& env, std::size_t digit_budget);

std::optional<BigNat> hier_value(unsigned long i, const BigNat& x, std::size_t digit_budget);
std::optional<BigNat> tower_value(unsigned long i, const BigNat& x, std::size_t digit_budget);

enum class Order { Less, Equal, Greater, Indeterminate };
std::string to_string(Order o);

/// Per-point comparison of two single-variable expressions.
std::vector<Order> compare_at(const GrowthExpr& a, const GrowthExpr& b, const std::vector<BigNat>& points,
                              std::size_t digit_budget);

}  // namespace fink
