#include "fink/lipschitz.hpp"

#include <charconv>

#include "fink/catalog.hpp"
#include "fink/errors.hpp"

namespace fink {

namespace {

std::map<std::size_t, Rational> parse_pairs(std::string_view body) {
  std::map<std::size_t, Rational> out;
  while (!body.empty()) {
    auto comma = body.find(',');
    auto item = body.substr(0, comma);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InvalidArgument("expected pos=value in '" + std::string(item) + "'");
    std::size_t pos = 0;
    auto key = item.substr(0, eq);
    auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), pos);
    if (ec != std::errc{} || p != key.data() + key.size()) throw InvalidArgument("bad position '" + std::string(key) + "'");
    out[pos] = parse_rational(std::string(item.substr(eq + 1)));
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
  }
  return out;
}

std::string pairs_text(const std::map<std::size_t, Rational>& m) {
  std::string s;
  for (const auto& [pos, v] : m) {
    if (!s.empty()) s += ',';
    s += std::to_string(pos) + "=" + v.get_str();
  }
  return s;
}

}  // namespace

LipschitzFn LipschitzFn::constant(Rational value) {
  LipschitzFn f;
  f.family_ = Family::Constant;
  f.value_ = std::move(value);
  return f;
}

LipschitzFn LipschitzFn::projection(std::size_t coordinate) {
  LipschitzFn f;
  f.family_ = Family::Projection;
  f.coordinate_ = coordinate;
  return f;
}

LipschitzFn LipschitzFn::sup_norm() {
  LipschitzFn f;
  f.family_ = Family::SupNorm;
  return f;
}

LipschitzFn LipschitzFn::distance_to(PosVector point) {
  LipschitzFn f;
  f.family_ = Family::DistanceTo;
  f.point_ = std::move(point);
  return f;
}

LipschitzFn LipschitzFn::weighted_sum(std::map<std::size_t, Rational> weights) {
  LipschitzFn f;
  f.family_ = Family::WeightedSum;
  f.weights_ = std::move(weights);
  return f;
}

LipschitzFn LipschitzFn::parse(std::string_view spec) {
  auto colon = spec.find(':');
  auto name = spec.substr(0, colon);
  auto body = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (name == "const") return constant(parse_rational(std::string(body)));
  if (name == "proj") {
    std::size_t c = 0;
    auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), c);
    if (ec != std::errc{} || p != body.data() + body.size()) throw InvalidArgument("bad coordinate in '" + std::string(spec) + "'");
    return projection(c);
  }
  if (name == "sup") return sup_norm();
  if (name == "dist") return distance_to(PosVector(parse_pairs(body)));
  if (name == "avg") return weighted_sum(parse_pairs(body));
  throw InvalidArgument("unknown function family '" + std::string(name) + "'");
}

std::string LipschitzFn::describe() const {
  switch (family_) {
    case Family::Constant: return "const:" + value_.get_str();
    case Family::Projection: return "proj:" + std::to_string(coordinate_);
    case Family::SupNorm: return "sup";
    case Family::DistanceTo: return "dist:" + pairs_text(point_.coeffs());
    case Family::WeightedSum: return "avg:" + pairs_text(weights_);
  }
  return "?";
}

Rational LipschitzFn::operator()(const PosVector& x) const {
  switch (family_) {
    case Family::Constant: return value_;
    case Family::Projection: return x.at(coordinate_);
    case Family::SupNorm: return x.norm();
    case Family::DistanceTo: return sup_distance(x, point_);
    case Family::WeightedSum: {
      Rational s = 0;
      for (const auto& [pos, w] : weights_) s += w * x.at(pos);
      return s;
    }
  }
  return 0;
}

Rational LipschitzFn::lipschitz_constant() const {
  switch (family_) {
    case Family::Constant: return 0;
    case Family::Projection:
    case Family::SupNorm:
    case Family::DistanceTo: return 1;
    case Family::WeightedSum: {
      Rational s = 0;
      for (const auto& [pos, w] : weights_) s += abs(w);
      return s;
    }
  }
  return 0;
}

}  // namespace fink
