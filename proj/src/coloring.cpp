#include "fink/coloring.hpp"

#include <charconv>
#include <sstream>

#include "fink/errors.hpp"
#include "fink/span.hpp"

namespace fink {

namespace {

std::uint64_t parse_u64(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw InvalidArgument(std::string("bad ") + what + ": '" + std::string(s) + "'");
  return v;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void check_tuple(const Domain& d, std::span<const FinkElement> tuple) {
  std::size_t want = d.kind == DomainKind::FinkSeq ? d.d : 1;
  if (tuple.size() != want) throw InvalidArgument("tuple length does not match the coloring domain");
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Fink: return "fink";
    case DomainKind::FinkSeq: return "finkseq";
    case DomainKind::Subsets: return "subsets";
    case DomainKind::Tuples: return "tuples";
    case DomainKind::Ints: return "ints";
  }
  return "?";
}

DomainKind parse_domain_kind(std::string_view s) {
  if (s == "fink") return DomainKind::Fink;
  if (s == "finkseq") return DomainKind::FinkSeq;
  if (s == "subsets") return DomainKind::Subsets;
  if (s == "tuples") return DomainKind::Tuples;
  if (s == "ints") return DomainKind::Ints;
  throw InvalidArgument("unknown domain '" + std::string(s) + "'");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::Constant: return "constant";
    case Family::Parity: return "parity";
    case Family::MinMod: return "minmod";
    case Family::Hash: return "hash";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  if (s == "constant") return Family::Constant;
  if (s == "parity") return Family::Parity;
  if (s == "minmod") return Family::MinMod;
  if (s == "hash") return Family::Hash;
  throw InvalidArgument("unknown coloring family '" + std::string(s) + "'");
}

ColoringSpec ColoringSpec::family(Domain domain, int colors, Family f, std::uint64_t param) {
  if (colors < 1) throw InvalidArgument("need at least one color");
  if (f == Family::Constant && param >= static_cast<std::uint64_t>(colors))
    throw InvalidArgument("constant color out of range");
  ColoringSpec c;
  c.domain_ = domain;
  c.colors_ = colors;
  c.is_family_ = true;
  c.family_ = f;
  c.param_ = param;
  return c;
}

ColoringSpec ColoringSpec::table(Domain domain, int colors, std::map<std::string, int> entries) {
  if (colors < 1) throw InvalidArgument("need at least one color");
  for (const auto& [key, col] : entries)
    if (col < 0 || col >= colors) throw InvalidArgument("color out of range for key " + key);
  ColoringSpec c;
  c.domain_ = domain;
  c.colors_ = colors;
  c.is_family_ = false;
  c.entries_ = std::move(entries);
  return c;
}

ColoringSpec ColoringSpec::random(Domain domain, int colors, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, colors - 1);
  std::map<std::string, int> entries;
  if (domain.kind == DomainKind::Ints) {
    for (std::size_t i = 0; i < domain.n; ++i) entries[std::to_string(i)] = pick(rng);
  } else {
    ColoringSpec probe = family(domain, colors, Family::Constant);
    for (const auto& t : domain_points(domain)) entries[probe.key(t)] = pick(rng);
  }
  return table(domain, colors, std::move(entries));
}

std::string ColoringSpec::key(std::span<const FinkElement> tuple) const {
  std::string k;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) k += ',';
    k += tuple[i].encode(domain_.n);
  }
  return k;
}

int ColoringSpec::color(std::span<const FinkElement> tuple) const {
  if (domain_.kind == DomainKind::Ints) throw InvalidArgument("integer domain colored via color_int");
  check_tuple(domain_, tuple);
  if (!is_family_) {
    auto it = entries_.find(key(tuple));
    if (it == entries_.end()) throw InvalidArgument("coloring table has no entry for " + key(tuple));
    return it->second;
  }
  switch (family_) {
    case Family::Constant: return static_cast<int>(param_);
    case Family::Parity: {
      std::size_t total = 0;
      for (const auto& f : tuple) total += f.support_size();
      return static_cast<int>(total % static_cast<std::size_t>(std::min(colors_, 2)));
    }
    case Family::MinMod: return static_cast<int>(tuple.front().min_support() % static_cast<std::size_t>(colors_));
    case Family::Hash:
      return static_cast<int>(splitmix64(fnv1a(key(tuple)) ^ splitmix64(param_)) % static_cast<std::uint64_t>(colors_));
  }
  return 0;
}

int ColoringSpec::color_int(std::uint64_t value) const {
  if (domain_.kind != DomainKind::Ints) throw InvalidArgument("color_int on a non-integer domain");
  if (!is_family_) {
    auto it = entries_.find(std::to_string(value));
    if (it == entries_.end()) throw InvalidArgument("coloring table has no entry for " + std::to_string(value));
    return it->second;
  }
  switch (family_) {
    case Family::Constant: return static_cast<int>(param_);
    case Family::Parity: return static_cast<int>(value % static_cast<std::uint64_t>(std::min(colors_, 2)));
    case Family::MinMod: return static_cast<int>(value % static_cast<std::uint64_t>(colors_));
    case Family::Hash:
      return static_cast<int>(splitmix64(value ^ splitmix64(param_)) % static_cast<std::uint64_t>(colors_));
  }
  return 0;
}

ColoringSpec ColoringSpec::with_domain(Domain domain) const {
  if (!is_family_) throw InvalidArgument("explicit tables cannot change domain");
  return family(domain, colors_, family_, param_);
}

std::string ColoringSpec::serialize() const {
  std::ostringstream out;
  out << "domain=" << to_string(domain_.kind) << " k=" << domain_.k << " n=" << domain_.n << " d=" << domain_.d
      << " r=" << colors_ << "\n";
  if (is_family_) {
    out << "family=" << to_string(family_) << " params=";
    if (family_ == Family::Constant) out << "color=" << param_;
    if (family_ == Family::Hash) out << "seed=" << param_;
    out << "\n";
  } else {
    for (const auto& [key, col] : entries_) out << key << " " << col << "\n";
  }
  return out.str();
}

ColoringSpec ColoringSpec::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw InvalidArgument("empty coloring file");
  Domain dom;
  int colors = 0;
  {
    std::istringstream hs(line);
    std::string tok;
    bool seen_domain = false;
    while (hs >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) throw InvalidArgument("bad header token '" + tok + "'");
      auto name = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (name == "domain") {
        dom.kind = parse_domain_kind(val);
        seen_domain = true;
      } else if (name == "k") {
        dom.k = static_cast<int>(parse_u64(val, "k"));
      } else if (name == "n") {
        dom.n = parse_u64(val, "n");
      } else if (name == "d") {
        dom.d = parse_u64(val, "d");
      } else if (name == "r") {
        colors = static_cast<int>(parse_u64(val, "r"));
      } else {
        throw InvalidArgument("unknown header field '" + name + "'");
      }
    }
    if (!seen_domain || colors < 1) throw InvalidArgument("header needs domain= and r=");
  }
  std::map<std::string, int> entries;
  bool first = true;
  while (next_line()) {
    if (first && line.rfind("family=", 0) == 0) {
      std::istringstream fs(line);
      std::string ftok, ptok;
      fs >> ftok >> ptok;
      Family f = parse_family(ftok.substr(7));
      std::uint64_t param = 0;
      if (ptok.rfind("params=", 0) == 0) {
        auto p = ptok.substr(7);
        auto eq = p.find('=');
        if (eq != std::string::npos) param = parse_u64(p.substr(eq + 1), "family parameter");
      }
      return family(dom, colors, f, param);
    }
    first = false;
    std::istringstream ls(line);
    std::string key;
    int col = -1;
    if (!(ls >> key >> col)) throw InvalidArgument("bad table line '" + line + "'");
    entries[key] = col;
  }
  return table(dom, colors, std::move(entries));
}

std::vector<std::vector<FinkElement>> domain_points(const Domain& domain, std::size_t budget) {
  std::vector<std::vector<FinkElement>> out;
  switch (domain.kind) {
    case DomainKind::Ints: throw InvalidArgument("integer domain has no element tuples");
    case DomainKind::Fink:
    case DomainKind::Subsets:
      for (auto& f : enumerate_fink(domain.n, domain.kind == DomainKind::Subsets ? 1 : domain.k, budget))
        out.push_back({std::move(f)});
      return out;
    case DomainKind::FinkSeq: {
      auto all = enumerate_fink(domain.n, domain.k, budget);
      std::sort(all.begin(), all.end());
      return block_tuples(all, domain.d);
    }
    case DomainKind::Tuples: {
      for (auto& f : enumerate_fink(domain.n, 1, budget))
        if (f.support_size() == domain.d) out.push_back({std::move(f)});
      return out;
    }
  }
  return out;
}

}  // namespace fink
