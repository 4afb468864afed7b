#pragma once

// Finite colorings of the combinatorial domains searched by the library,
// either as explicit tables or as small parametric families.

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fink/element.hpp"

namespace fink {

enum class DomainKind {
  Fink,     ///< FIN_k(n)
  FinkSeq,  ///< FIN_k(n)^[d]
  Subsets,  ///< non-empty subsets of n (FIN_1(n))
  Tuples,   ///< d-element subsets of n
  Ints,     ///< {0, ..., n-1}
};

struct Domain {
  DomainKind kind = DomainKind::Fink;
  int k = 1;
  std::size_t n = 1;
  std::size_t d = 1;

  bool operator==(const Domain&) const = default;
};

std::string to_string(DomainKind kind);
DomainKind parse_domain_kind(std::string_view s);

enum class Family {
  Constant,  ///< params: color
  Parity,    ///< total support cardinality mod 2 (mod r when r < 2)
  MinMod,    ///< min of the first element's support mod r
  Hash,      ///< params: seed; hash of the canonical encoding
};

std::string to_string(Family f);
Family parse_family(std::string_view s);

class ColoringSpec {
 public:
  static ColoringSpec family(Domain domain, int colors, Family f, std::uint64_t param = 0);
  static ColoringSpec table(Domain domain, int colors, std::map<std::string, int> entries);
  /// Uniformly random explicit table over the whole domain.
  static ColoringSpec random(Domain domain, int colors, std::mt19937_64& rng);

  const Domain& domain() const { return domain_; }
  int colors() const { return colors_; }
  bool is_family() const { return is_family_; }
  Family family_kind() const { return family_; }
  std::uint64_t family_param() const { return param_; }
  const std::map<std::string, int>& entries() const { return entries_; }

  /// Color of a tuple of elements (length 1 for Fink and Subsets domains).
  int color(std::span<const FinkElement> tuple) const;
  int color(const FinkElement& f) const { return color(std::span<const FinkElement>(&f, 1)); }
  /// Color of an integer (Ints domain).
  int color_int(std::uint64_t value) const;

  /// Canonical table key of a tuple: comma-joined width-n encodings.
  std::string key(std::span<const FinkElement> tuple) const;

  /// Same coloring re-expressed over a new domain of the same kind (families only).
  ColoringSpec with_domain(Domain domain) const;

  /// Coloring file text; parse(serialize(c)) reproduces c.
  std::string serialize() const;
  static ColoringSpec parse(std::string_view text);

 private:
  Domain domain_;
  int colors_ = 1;
  bool is_family_ = true;
  Family family_ = Family::Constant;
  std::uint64_t param_ = 0;
  std::map<std::string, int> entries_;
};

/// Every point of the domain in canonical order, as element tuples
/// (Ints are not representable and throw InvalidArgument).
std::vector<std::vector<FinkElement>> domain_points(const Domain& domain, std::size_t budget = 1u << 22);

/// 64-bit mixing used by the Hash family.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace fink
