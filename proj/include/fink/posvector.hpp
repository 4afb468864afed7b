#pragma once

// Finitely supported non-negative vectors with exact rational coefficients.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace fink {

using Rational = mpq_class;

class PosVector {
 public:
  PosVector() = default;
  /// Zero coefficients are dropped; negative ones throw InvalidArgument.
  explicit PosVector(std::map<std::size_t, Rational> coeffs);
  static PosVector unit(std::size_t pos) { return PosVector({{pos, Rational(1)}}); }

  Rational at(std::size_t pos) const;
  void set(std::size_t pos, const Rational& value);
  const std::map<std::size_t, Rational>& coeffs() const { return coeffs_; }
  std::vector<std::size_t> support() const;
  std::size_t support_size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }
  std::size_t min_support() const;
  std::size_t max_support() const;

  /// Sup norm (0 for the zero vector).
  Rational norm() const;
  /// Coefficients in increasing position order.
  std::vector<Rational> profile() const;

  PosVector shifted(std::size_t offset) const;
  PosVector scaled(const Rational& factor) const;
  PosVector operator+(const PosVector& other) const;
  bool operator==(const PosVector& other) const = default;

 private:
  std::map<std::size_t, Rational> coeffs_;
};

Rational sup_distance(const PosVector& a, const PosVector& b);

/// One "pos:coeff" pair per line, coefficients as p/q.
std::string format_vector(const PosVector& v);
PosVector parse_vector(std::string_view text);

}  // namespace fink
