#include "fink/element.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "fink/errors.hpp"

namespace fink {

namespace {

void trim(std::vector<std::uint8_t>& digits) {
  while (!digits.empty() && digits.back() == 0) digits.pop_back();
}

std::size_t parse_size(std::string_view s, const char* what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw InvalidArgument(std::string("bad ") + what + ": '" + std::string(s) + "'");
  return v;
}

}  // namespace

FinkElement::FinkElement(int k, std::vector<std::uint8_t> digits) : k_(k), min_(0), digits_(std::move(digits)) {
  if (k < 1) throw InvalidArgument("level must be >= 1");
  trim(digits_);
  bool attains = false;
  for (auto v : digits_) {
    if (v > k) throw InvalidArgument("value exceeds level");
    attains = attains || v == k;
  }
  if (!attains) throw InvalidArgument("element does not attain its level");
  while (digits_[min_] == 0) ++min_;
}

FinkElement FinkElement::from_digits(int k, std::string_view digits) {
  std::vector<std::uint8_t> d;
  d.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '9') throw InvalidArgument("bad digit in '" + std::string(digits) + "'");
    d.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return FinkElement(k, std::move(d));
}

FinkElement FinkElement::singleton(int k, std::size_t position) {
  std::vector<std::uint8_t> d(position + 1, 0);
  d[position] = static_cast<std::uint8_t>(k);
  return FinkElement(k, std::move(d));
}

FinkElement FinkElement::from_set(const std::vector<std::size_t>& support) {
  if (support.empty()) throw InvalidArgument("empty set");
  std::vector<std::uint8_t> d(*std::max_element(support.begin(), support.end()) + 1, 0);
  for (auto p : support) d[p] = 1;
  return FinkElement(1, std::move(d));
}

std::vector<std::size_t> FinkElement::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = min_; i < digits_.size(); ++i)
    if (digits_[i] != 0) s.push_back(i);
  return s;
}

std::size_t FinkElement::support_size() const {
  return static_cast<std::size_t>(std::count_if(digits_.begin(), digits_.end(), [](auto v) { return v != 0; }));
}

std::string FinkElement::encode(std::size_t width) const {
  if (digits_.size() > width) throw InvalidArgument("support does not fit width " + std::to_string(width));
  std::string s(width, '0');
  for (std::size_t i = 0; i < digits_.size(); ++i) s[i] = static_cast<char>('0' + digits_[i]);
  return s;
}

std::uint64_t FinkElement::code() const {
  std::uint64_t base = static_cast<std::uint64_t>(k_) + 1, v = 0;
  for (std::size_t i = digits_.size(); i-- > 0;) {
    if (v > (UINT64_MAX - digits_[i]) / base) throw BudgetExceeded("element code exceeds 64 bits");
    v = v * base + digits_[i];
  }
  return v;
}

std::strong_ordering FinkElement::operator<=>(const FinkElement& other) const {
  if (auto c = k_ <=> other.k_; c != 0) return c;
  std::size_t n = std::max(digits_.size(), other.digits_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = at(i) <=> other.at(i); c != 0) return c;
  return std::strong_ordering::equal;
}

Encoding encode(const FinkElement& f, std::size_t width) { return {width, f.encode(width)}; }

FinkElement decode(int k, const Encoding& e) {
  if (e.digits.size() != e.width) throw InvalidArgument("encoding length differs from width");
  return FinkElement::from_digits(k, e.digits);
}

FinkElement decode_code(int k, std::uint64_t code) {
  std::vector<std::uint8_t> d;
  std::uint64_t base = static_cast<std::uint64_t>(k) + 1;
  while (code != 0) {
    d.push_back(static_cast<std::uint8_t>(code % base));
    code /= base;
  }
  return FinkElement(k, std::move(d));
}

std::optional<FinkElement> tetris(const FinkElement& f, int l) {
  if (l < 0) throw InvalidArgument("negative tetris exponent");
  if (l >= f.level()) return std::nullopt;
  std::vector<std::uint8_t> d(f.digits());
  for (auto& v : d) v = static_cast<std::uint8_t>(v > l ? v - l : 0);
  return FinkElement(f.level() - l, std::move(d));
}

FinkElement block_sum(const FinkElement& f, const FinkElement& g) {
  if (f.level() != g.level()) throw LevelMismatch("block_sum of different levels");
  if (!precedes(f, g)) throw OverlapError("block_sum requires max supp(f) < min supp(g)");
  std::vector<std::uint8_t> d(g.digits());
  for (std::size_t i = 0; i < f.digits().size(); ++i) d[i] = f.digits()[i];
  return FinkElement(f.level(), std::move(d));
}

FinkElement lift_u(const FinkElement& f) {
  std::vector<std::uint8_t> d(f.digits());
  for (auto& v : d)
    if (v != 0) ++v;
  return FinkElement(f.level() + 1, std::move(d));
}

std::uint64_t fink_cardinality(std::size_t n, int k) {
  std::uint64_t a = 1, b = 1;
  for (std::size_t i = 0; i < n; ++i) {
    a *= static_cast<std::uint64_t>(k) + 1;
    b *= static_cast<std::uint64_t>(k);
  }
  return a - b;
}

std::vector<FinkElement> enumerate_fink(std::size_t n, int k, std::size_t budget) {
  if (n < 1 || k < 1) throw InvalidArgument("enumerate_fink needs n >= 1 and k >= 1");
  if (n > 40 || fink_cardinality(n, k) > budget)
    throw BudgetExceeded("|FIN_" + std::to_string(k) + "(" + std::to_string(n) + ")| exceeds budget");
  std::vector<FinkElement> out;
  out.reserve(fink_cardinality(n, k));
  // Odometer over digit strings, most significant character first.
  std::vector<std::uint8_t> d(n, 0);
  while (true) {
    if (std::find(d.begin(), d.end(), static_cast<std::uint8_t>(k)) != d.end()) out.emplace_back(k, d);
    std::size_t i = n;
    while (i > 0 && d[i - 1] == k) d[--i] = 0;
    if (i == 0) break;
    ++d[i - 1];
  }
  return out;
}

std::string format_element(const FinkElement& f, std::size_t width) {
  return std::to_string(f.level()) + ":" + std::to_string(width) + ":" + f.encode(width);
}

FinkElement parse_element(std::string_view text) {
  auto a = text.find(':');
  auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
  if (b == std::string_view::npos) throw InvalidArgument("expected k:n:digits, got '" + std::string(text) + "'");
  int k = static_cast<int>(parse_size(text.substr(0, a), "level"));
  std::size_t n = parse_size(text.substr(a + 1, b - a - 1), "width");
  auto digits = text.substr(b + 1);
  if (digits.size() != n) throw InvalidArgument("digit count differs from width in '" + std::string(text) + "'");
  return FinkElement::from_digits(k, digits);
}

BlockSequence::BlockSequence(int k, std::vector<FinkElement> elements) : k_(k), elements_(std::move(elements)) {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].level() != k) throw InvalidArgument("block sequence mixes levels");
    if (i > 0 && !precedes(elements_[i - 1], elements_[i]))
      throw InvalidArgument("block sequence elements are not in increasing blocks");
  }
}

std::size_t BlockSequence::width() const { return elements_.empty() ? 0 : elements_.back().max_support() + 1; }

std::string format_sequence(const BlockSequence& s, std::size_t width) {
  std::string out;
  for (const auto& f : s) out += format_element(f, width) + "\n";
  return out;
}

BlockSequence parse_sequence(std::string_view text) {
  std::vector<FinkElement> elems;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    elems.push_back(parse_element(line));
  }
  if (elems.empty()) return {};
  int k = elems.front().level();
  return BlockSequence(k, std::move(elems));
}

}  // namespace fink
