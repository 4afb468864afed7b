#pragma once

// Named Lipschitz families on positive vectors of l_inf. The Lipschitz
// constant is derived from the family, never taken from the caller.

#include <map>
#include <string>
#include <string_view>

#include "fink/posvector.hpp"

namespace fink {

class LipschitzFn {
 public:
  enum class Family { Constant, Projection, SupNorm, DistanceTo, WeightedSum };

  static LipschitzFn constant(Rational value);
  static LipschitzFn projection(std::size_t coordinate);
  static LipschitzFn sup_norm();
  static LipschitzFn distance_to(PosVector point);
  /// x -> sum_i w_i x_i.
  static LipschitzFn weighted_sum(std::map<std::size_t, Rational> weights);

  /// "const:1/2", "proj:3", "sup", "dist:0=1,2=1/2", "avg:0=1/2,1=1/2".
  static LipschitzFn parse(std::string_view spec);
  std::string describe() const;

  Family family() const { return family_; }
  Rational operator()(const PosVector& x) const;
  /// Analytic constant C with |f(x)-f(y)| <= C*||x-y||_inf.
  Rational lipschitz_constant() const;

 private:
  Family family_ = Family::Constant;
  Rational value_;
  std::size_t coordinate_ = 0;
  PosVector point_;
  std::map<std::size_t, Rational> weights_;
};

}  // namespace fink
