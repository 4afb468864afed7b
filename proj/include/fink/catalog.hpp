#pragma once

// Named upper-bound formulas. Integer parameters left out of `params` stay as
// free variables; C and eps (exact rationals) must be supplied for the
// stabilization formulas because their ceilings and logarithms are computed.

#include <array>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "fink/growth.hpp"

namespace fink {

using Rational = mpq_class;
using Params = std::map<std::string, Rational>;

struct CatalogEntry {
  std::string name;
  std::vector<std::string> params;
  std::string description;
};

const std::vector<CatalogEntry>& bound_catalog();

/// Throws UnknownName for names outside the catalog.
GrowthExpr catalog_expr(const std::string& name, const Params& params = {});

/// Parses "p/q", "p" or a decimal such as "0.9" into an exact rational.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

/// Least integer n with (1-q)^n <= q, i.e. ceil(log q / log(1-q)), for q in (0,1).
std::size_t ceil_log_ratio(const Rational& q);
/// Least L with 2^L >= x, for x > 0.
std::size_t ceil_log2(const Rational& x);
/// ceil(x) for x >= 0.
BigNat ceil_q(const Rational& x);
/// s in the stabilization bound: ceil(log(eps/12C)/log(1-eps/12C)) + 2.
std::size_t stab_s(const Rational& C, const Rational& eps);
/// Least s with (1-eps/4)^(s-1) < eps/4, the exponent behind D(eps, 3^t).
std::size_t diameter_s(const Rational& eps);

/// The headline table: (k, dimension, rendered bound) rows for k = 2, 3 and general k.
std::vector<std::array<std::string, 3>> summary_table();
std::string render_summary_table();

}  // namespace fink
