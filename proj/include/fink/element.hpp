#pragma once

// Elements of FIN_k: finitely supported maps N -> {0..k} that attain k.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fink {

class FinkElement {
 public:
  /// `digits[i]` is the value at position i. Trailing zeros are dropped.
  /// Throws InvalidArgument unless every value is <= k and k is attained.
  FinkElement(int k, std::vector<std::uint8_t> digits);

  /// Digit string with position 0 first, e.g. "021".
  static FinkElement from_digits(int k, std::string_view digits);
  /// The element with value k at `position` and 0 elsewhere.
  static FinkElement singleton(int k, std::size_t position);
  /// Level-1 element with the given (non-empty) support.
  static FinkElement from_set(const std::vector<std::size_t>& support);

  int level() const { return k_; }
  std::uint8_t at(std::size_t position) const {
    return position < digits_.size() ? digits_[position] : 0;
  }
  const std::vector<std::uint8_t>& digits() const { return digits_; }

  std::size_t min_support() const { return min_; }
  std::size_t max_support() const { return digits_.size() - 1; }
  std::vector<std::size_t> support() const;
  std::size_t support_size() const;

  /// Fixed-width digit string; throws InvalidArgument if the support does not fit.
  std::string encode(std::size_t width) const;
  /// Little-endian base-(k+1) integer: sum of f(i) * (k+1)^i.
  std::uint64_t code() const;

  bool operator==(const FinkElement&) const = default;
  /// Level first, then the digit strings compared lexicographically
  /// (equivalent to comparing encodings at any common width).
  std::strong_ordering operator<=>(const FinkElement& other) const;

 private:
  int k_;
  std::size_t min_;
  std::vector<std::uint8_t> digits_;
};

/// max(supp f) < min(supp g)
inline bool precedes(const FinkElement& f, const FinkElement& g) {
  return f.max_support() < g.min_support();
}

/// Fixed-width encoding of FIN_k(n). Position i holds f(i).
struct Encoding {
  std::size_t width;
  std::string digits;
};

Encoding encode(const FinkElement& f, std::size_t width);
FinkElement decode(int k, const Encoding& e);
FinkElement decode_code(int k, std::uint64_t code);

/// T^l f. `std::nullopt` is the zero vector, produced once l >= k.
std::optional<FinkElement> tetris(const FinkElement& f, int l);

/// Pointwise sum of f < g at the same level.
FinkElement block_sum(const FinkElement& f, const FinkElement& g);

/// U f: every non-zero value incremented by one; level k -> k+1.
FinkElement lift_u(const FinkElement& f);

/// All of FIN_k(n) ordered by encoding. Throws BudgetExceeded above `budget` elements.
std::vector<FinkElement> enumerate_fink(std::size_t n, int k, std::size_t budget = 1u << 22);

/// (k+1)^n - k^n
std::uint64_t fink_cardinality(std::size_t n, int k);

/// Text format `k:n:digits`.
std::string format_element(const FinkElement& f, std::size_t width);
FinkElement parse_element(std::string_view text);

class BlockSequence {
 public:
  BlockSequence() = default;
  /// Throws InvalidArgument when levels differ or blocks are not increasing.
  BlockSequence(int k, std::vector<FinkElement> elements);

  int level() const { return k_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const FinkElement& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<FinkElement>& elements() const { return elements_; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  /// One past the largest support position used (0 when empty).
  std::size_t width() const;

  bool operator==(const BlockSequence&) const = default;

 private:
  int k_ = 1;
  std::vector<FinkElement> elements_;
};

/// One `k:n:digits` line per element.
std::string format_sequence(const BlockSequence& s, std::size_t width);
BlockSequence parse_sequence(std::string_view text);

}  // namespace fink
