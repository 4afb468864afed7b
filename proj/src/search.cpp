#include "fink/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <functional>
#include <map>

#include <omp.h>

#include "fink/errors.hpp"
#include "fink/span.hpp"

namespace fink {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Support extent and code of one Tetris image.
struct Piece {
  std::uint64_t code;
  std::uint32_t lo, hi;
};

// FIN_k(n) in encoding order with every T^l image precomputed.
struct Catalog {
  int k = 1;
  std::size_t n = 0;
  std::vector<FinkElement> elems;
  std::vector<std::vector<Piece>> images;  // images[i][l], l < k
};

Catalog make_catalog(int k, std::size_t n) {
  Catalog cat;
  cat.k = k;
  cat.n = n;
  cat.elems = enumerate_fink(n, k);
  std::uint64_t base = static_cast<std::uint64_t>(k) + 1;
  for (const auto& f : cat.elems) {
    std::vector<Piece> im;
    for (int l = 0; l < k; ++l) {
      Piece p{0, std::numeric_limits<std::uint32_t>::max(), 0};
      std::uint64_t w = 1;
      for (std::size_t i = 0; i < f.digits().size(); ++i, w *= base) {
        int v = f.digits()[i] - l;
        if (v <= 0) continue;
        p.code += static_cast<std::uint64_t>(v) * w;
        p.lo = std::min<std::uint32_t>(p.lo, static_cast<std::uint32_t>(i));
        p.hi = static_cast<std::uint32_t>(i);
      }
      im.push_back(p);
    }
    cat.images.push_back(std::move(im));
  }
  return cat;
}

// A partial sum of Tetris images of the generators chosen so far.
struct Partial {
  std::uint64_t code;
  std::uint32_t lo, hi;
  bool top;             // some term has exponent 0, i.e. a span member
  std::uint32_t first;  // least generator index used
};

constexpr Partial kEmpty{0, std::numeric_limits<std::uint32_t>::max(), 0, false,
                         std::numeric_limits<std::uint32_t>::max()};

// Appends to `partials` every extension of partials[0..old) by T^l(generator).
void extend_partials(const Catalog& cat, std::size_t gen_index, std::uint32_t position,
                     std::vector<Partial>& partials) {
  std::size_t old = partials.size();
  for (std::size_t p = 0; p < old; ++p) {
    for (int l = 0; l < cat.k; ++l) {
      const Piece& im = cat.images[gen_index][static_cast<std::size_t>(l)];
      const Partial& b = partials[p];
      Partial q;
      q.code = b.code + im.code;
      q.lo = std::min(b.lo, im.lo);
      q.hi = im.hi;
      q.top = b.top || l == 0;
      q.first = b.first == kEmpty.first ? position : b.first;
      partials.push_back(q);
    }
  }
}

// Colors of FIN_k(n) indexed by code, or a memo for tuple colorings.
class ColorOracle {
 public:
  ColorOracle(const Catalog& cat, const ColoringSpec& c) : cat_(cat), c_(c) {
    d_ = c.domain().kind == DomainKind::FinkSeq ? c.domain().d : 1;
    if (d_ == 1) {
      std::uint64_t size = 1;
      for (std::size_t i = 0; i < cat.n; ++i) size *= static_cast<std::uint64_t>(cat.k) + 1;
      dense_.assign(size, -1);
      for (std::size_t i = 0; i < cat.elems.size(); ++i)
        dense_[cat.images[i][0].code] = static_cast<std::int32_t>(c.color(cat.elems[i]));
    }
  }
  std::size_t dimension() const { return d_; }
  int single(std::uint64_t code) const { return dense_[code]; }
  int tuple(const std::vector<std::uint64_t>& codes) {
    auto it = memo_.find(codes);
    if (it != memo_.end()) return it->second;
    std::vector<FinkElement> t;
    t.reserve(codes.size());
    for (auto code : codes) t.push_back(decode_code(cat_.k, code));
    int col = c_.color(t);
    memo_.emplace(codes, col);
    return col;
  }

 private:
  const Catalog& cat_;
  const ColoringSpec& c_;
  std::size_t d_ = 1;
  std::vector<std::int32_t> dense_;
  std::map<std::vector<std::uint64_t>, int> memo_;
};

enum class Mode { Monochromatic, MinDetermined };

// Depth-first search for the least admissible block sequence with a given first generator.
class SequenceSearch {
 public:
  SequenceSearch(const Catalog& cat, ColorOracle& oracle, std::size_t m, Mode mode,
                 std::atomic<std::uint64_t>& nodes, std::uint64_t budget, const GroupPredicate* accept = nullptr)
      : cat_(cat), oracle_(oracle), m_(m), mode_(mode), nodes_(nodes), budget_(budget), accept_(accept) {}

  std::optional<std::vector<std::size_t>> run(std::size_t first) {
    partials_.assign(1, kEmpty);
    frames_.clear();
    members_.clear();
    chosen_.clear();
    group_color_.clear();
    target_ = -1;
    if (!room_after(first, m_ - 1)) return std::nullopt;
    if (!push(first)) return std::nullopt;
    if (descend()) return chosen_;
    return std::nullopt;
  }

  std::uint64_t local_nodes() const { return local_; }

 private:
  bool room_after(std::size_t idx, std::size_t remaining) const {
    return cat_.n - (cat_.images[idx][0].hi + 1) >= remaining;
  }

  void tick() {
    ++local_;
    if ((local_ & 1023) == 0 && nodes_.fetch_add(1024) + 1024 > budget_)
      throw BudgetExceeded("witness search exceeded node budget");
  }

  bool descend() {
    if (chosen_.size() == m_) return !accept_ || !*accept_ || (*accept_)(group_color_);
    std::uint32_t start = cat_.images[chosen_.back()][0].hi + 1;
    std::size_t remaining = m_ - chosen_.size() - 1;
    for (std::size_t idx = 0; idx < cat_.elems.size(); ++idx) {
      if (cat_.images[idx][0].lo < start || !room_after(idx, remaining)) continue;
      if (push(idx) && descend()) return true;
      pop();
    }
    return false;
  }

  struct Frame {
    std::size_t partials, members;
    int target;
  };

  bool push(std::size_t idx) {
    tick();
    frames_.push_back({partials_.size(), members_.size(), target_});
    auto position = static_cast<std::uint32_t>(chosen_.size());
    chosen_.push_back(idx);
    std::size_t before = partials_.size();
    extend_partials(cat_, idx, position, partials_);
    if (mode_ == Mode::MinDetermined) group_color_.push_back(-1);
    for (std::size_t i = before; i < partials_.size(); ++i) {
      if (!partials_[i].top) continue;
      members_.push_back(partials_[i]);
      if (!accept_member(partials_[i])) return false;
    }
    if (oracle_.dimension() > 1) return accept_tuples(frames_.back().members);
    return true;
  }

  void pop() {
    auto f = frames_.back();
    frames_.pop_back();
    partials_.resize(f.partials);
    members_.resize(f.members);
    target_ = f.target;
    chosen_.pop_back();
    if (mode_ == Mode::MinDetermined) group_color_.pop_back();
  }

  bool accept_member(const Partial& q) {
    if (oracle_.dimension() > 1) return true;
    int col = oracle_.single(q.code);
    if (mode_ == Mode::MinDetermined) {
      int& g = group_color_[q.first];
      if (g < 0) g = col;
      return g == col;
    }
    if (target_ < 0) target_ = col;
    return target_ == col;
  }

  // Every d-tuple of span members whose last element is new must match the target color.
  bool accept_tuples(std::size_t first_new) {
    std::size_t d = oracle_.dimension();
    std::vector<std::uint64_t> codes(d);
    for (std::size_t e = first_new; e < members_.size(); ++e) {
      codes[d - 1] = members_[e].code;
      if (!tuples_before(members_[e].lo, d - 1, codes)) return false;
    }
    return true;
  }

  bool tuples_before(std::uint32_t bound, std::size_t slots, std::vector<std::uint64_t>& codes) {
    if (slots == 0) {
      int col = oracle_.tuple(codes);
      if (target_ < 0) target_ = col;
      return target_ == col;
    }
    for (const auto& mem : members_) {
      if (mem.hi >= bound) continue;
      codes[slots - 1] = mem.code;
      if (!tuples_before(mem.lo, slots - 1, codes)) return false;
    }
    return true;
  }

  const Catalog& cat_;
  ColorOracle& oracle_;
  std::size_t m_;
  Mode mode_;
  std::atomic<std::uint64_t>& nodes_;
  std::uint64_t budget_;
  const GroupPredicate* accept_;
  std::uint64_t local_ = 0;

  std::vector<Partial> partials_;
  std::vector<Partial> members_;
  std::vector<std::size_t> chosen_;
  std::vector<int> group_color_;
  std::vector<Frame> frames_;
  int target_ = -1;
};

struct SequenceResult {
  std::optional<std::vector<std::size_t>> indices;
  std::uint64_t nodes = 0;
};

SequenceResult search_sequences(const Catalog& cat, const ColoringSpec& c, std::size_t m, Mode mode,
                                const SearchOptions& opts, const GroupPredicate* accept = nullptr) {
  std::atomic<std::uint64_t> nodes{0};
  SequenceResult out;
  auto count = static_cast<std::int64_t>(cat.elems.size());
  if (!opts.parallel || opts.workers <= 1) {
    ColorOracle oracle(cat, c);
    SequenceSearch s(cat, oracle, m, mode, nodes, opts.node_budget, accept);
    for (std::int64_t i = 0; i < count && !out.indices; ++i) out.indices = s.run(static_cast<std::size_t>(i));
    out.nodes = nodes.load() + (s.local_nodes() & 1023);
    return out;
  }
  ColorOracle shared(cat, c);
  std::atomic<std::int64_t> best{std::numeric_limits<std::int64_t>::max()};
  std::vector<std::optional<std::vector<std::size_t>>> found(static_cast<std::size_t>(count));
  std::atomic<bool> over{false};
#pragma omp parallel num_threads(opts.workers)
  {
    ColorOracle oracle = shared;
    SequenceSearch s(cat, oracle, m, mode, nodes, opts.node_budget, accept);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
      if (i > best.load() || over.load()) continue;
      try {
        auto r = s.run(static_cast<std::size_t>(i));
        if (r) {
          found[static_cast<std::size_t>(i)] = std::move(r);
          auto cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
        }
      } catch (const BudgetExceeded&) {
        over = true;
      }
    }
  }
  if (over) throw BudgetExceeded("witness search exceeded node budget");
  out.nodes = nodes.load();
  if (best.load() < count) out.indices = std::move(found[static_cast<std::size_t>(best.load())]);
  return out;
}

std::size_t coloring_dimension(const ColoringSpec& c) {
  return c.domain().kind == DomainKind::FinkSeq ? c.domain().d : 1;
}

int coloring_level(const ColoringSpec& c) { return c.domain().kind == DomainKind::Subsets ? 1 : c.domain().k; }

void check_sequence_domain(const ColoringSpec& c) {
  auto kind = c.domain().kind;
  if (kind != DomainKind::Fink && kind != DomainKind::FinkSeq && kind != DomainKind::Subsets)
    throw InvalidArgument("witness search needs a fink, finkseq or subsets coloring");
}

}  // namespace

std::optional<WitnessReport> find_witness(const ColoringSpec& c, std::size_t m, const SearchOptions& opts) {
  check_sequence_domain(c);
  std::size_t d = coloring_dimension(c);
  if (d < 1 || m < d) throw InvalidArgument("find_witness requires m >= d >= 1");
  auto t0 = Clock::now();
  auto cat = make_catalog(coloring_level(c), c.domain().n);
  auto res = search_sequences(cat, c, m, Mode::Monochromatic, opts);
  if (!res.indices) return std::nullopt;
  std::vector<FinkElement> elems;
  for (auto i : *res.indices) elems.push_back(cat.elems[i]);
  WitnessReport rep;
  rep.witness = BlockSequence(cat.k, std::move(elems));
  rep.verified = verify_monochromatic(c, rep.witness, &rep.color);
  if (!rep.verified) throw VerificationFailed("witness search returned a non-monochromatic sequence");
  rep.span_size = span(rep.witness).size();
  rep.stats = {res.nodes, seconds_since(t0)};
  return rep;
}

std::optional<BlockSequence> find_min_determined(const ColoringSpec& c, std::size_t m, const SearchOptions& opts,
                                                 const GroupPredicate& accept) {
  check_sequence_domain(c);
  if (coloring_level(c) != 1 || coloring_dimension(c) != 1)
    throw InvalidArgument("min-determined search is defined on colorings of FIN(n)");
  if (m < 1) throw InvalidArgument("m must be >= 1");
  auto cat = make_catalog(1, c.domain().n);
  auto res = search_sequences(cat, c, m, Mode::MinDetermined, opts, &accept);
  if (!res.indices) return std::nullopt;
  std::vector<FinkElement> elems;
  for (auto i : *res.indices) elems.push_back(cat.elems[i]);
  BlockSequence seq(1, std::move(elems));
  if (!verify_min_determined(c, seq)) throw VerificationFailed("min-determined search returned a bad sequence");
  return seq;
}

bool verify_monochromatic(const ColoringSpec& c, const BlockSequence& seq, int* color) {
  if (seq.empty()) return false;
  auto s = span(seq);
  std::size_t d = coloring_dimension(c);
  std::optional<int> first;
  auto check = [&](int col) {
    if (!first) first = col;
    return *first == col;
  };
  if (d == 1) {
    for (const auto& f : s.elements())
      if (!check(c.color(f))) return false;
  } else {
    auto tuples = block_tuples(s.elements(), d);
    if (tuples.empty()) return false;
    for (const auto& t : tuples)
      if (!check(c.color(t))) return false;
  }
  if (color) *color = *first;
  return true;
}

bool verify_min_determined(const ColoringSpec& c, const BlockSequence& seq) {
  if (seq.empty()) return false;
  auto s = span(seq);
  std::map<std::size_t, int> group;
  for (const auto& r : s.recipes()) {
    int col = c.color(r.element);
    auto [it, inserted] = group.emplace(r.recipe.front().index, col);
    if (!inserted && it->second != col) return false;
  }
  return true;
}

namespace {

// Visits every block sequence of length m in FIN_k(n) with its span partials.
template <class Visit>
void for_each_sequence(const Catalog& cat, std::size_t m, std::vector<std::size_t>& chosen,
                       std::vector<Partial>& partials, Visit& visit) {
  if (chosen.size() == m) {
    visit(chosen, partials);
    return;
  }
  std::uint32_t start = chosen.empty() ? 0 : cat.images[chosen.back()][0].hi + 1;
  std::size_t remaining = m - chosen.size() - 1;
  for (std::size_t idx = 0; idx < cat.elems.size(); ++idx) {
    const auto& im = cat.images[idx][0];
    if (im.lo < start || cat.n - (im.hi + 1) < remaining) continue;
    std::size_t before = partials.size();
    auto position = static_cast<std::uint32_t>(chosen.size());
    chosen.push_back(idx);
    extend_partials(cat, idx, position, partials);
    for_each_sequence(cat, m, chosen, partials, visit);
    chosen.pop_back();
    partials.resize(before);
  }
}

// Variable order for the avoidance search: by last support position, then encoding.
bool point_order(const std::vector<FinkElement>& a, const std::vector<FinkElement>& b) {
  if (a.back().max_support() != b.back().max_support()) return a.back().max_support() < b.back().max_support();
  return a < b;
}

ColoringSpec coloring_from_assignment(const Domain& dom, int r, const std::vector<std::vector<FinkElement>>& points,
                                      const std::vector<int>& colors) {
  auto probe = ColoringSpec::family(dom, r, Family::Constant);
  std::map<std::string, int> entries;
  for (std::size_t i = 0; i < points.size(); ++i) entries[probe.key(points[i])] = colors[i];
  return ColoringSpec::table(dom, r, std::move(entries));
}

std::optional<std::vector<int>> solve(const AvoidanceProblem& p, const SearchOptions& opts, SearchStats& stats) {
  auto res = opts.parallel ? avoid_parallel(p, opts.node_budget, opts.workers) : avoid_serial(p, opts.node_budget);
  stats.nodes += res.nodes;
  return res.coloring;
}

// Ascending scan n = start, start+1, ... until no bad coloring exists.
template <class BadAt>
NumberCertificate scan(std::string quantity, nlohmann::json params, std::size_t start,
                       std::optional<ColoringSpec> below_start, BadAt bad_at) {
  auto t0 = Clock::now();
  NumberCertificate cert;
  cert.quantity = std::move(quantity);
  cert.params = std::move(params);
  std::optional<ColoringSpec> last = std::move(below_start);
  for (std::size_t n = start;; ++n) {
    auto bad = bad_at(n, cert.stats);
    if (!bad) {
      cert.value = n;
      cert.lower_witness = std::move(last);
      break;
    }
    last = std::move(bad);
  }
  cert.stats.wall_seconds = seconds_since(t0);
  return cert;
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  if (m > n) return out;
  std::vector<std::size_t> c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = i;
  while (true) {
    out.push_back(c);
    std::size_t i = m;
    while (i > 0 && c[i - 1] == n - m + i - 1) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t j = i; j < m; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

}  // namespace

AvoidanceProblem witness_problem(int k, std::size_t d, std::size_t n, std::size_t m, int r,
                                 std::vector<std::vector<FinkElement>>& points) {
  if (d < 1 || m < d) throw InvalidArgument("witness problems require m >= d >= 1");
  Domain dom{d == 1 ? DomainKind::Fink : DomainKind::FinkSeq, k, n, d};
  points = domain_points(dom);
  std::sort(points.begin(), points.end(), point_order);
  std::map<std::vector<std::uint64_t>, std::uint32_t> index;
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    std::vector<std::uint64_t> key;
    for (const auto& f : points[i]) key.push_back(f.code());
    index.emplace(std::move(key), i);
  }
  AvoidanceProblem prob;
  prob.variables = points.size();
  prob.colors = r;
  auto cat = make_catalog(k, n);
  std::vector<std::size_t> chosen;
  std::vector<Partial> partials{kEmpty};
  auto visit = [&](const std::vector<std::size_t>&, const std::vector<Partial>& parts) {
    std::vector<Partial> members;
    for (const auto& q : parts)
      if (q.top) members.push_back(q);
    std::vector<std::uint32_t> group;
    if (d == 1) {
      for (const auto& q : members) group.push_back(index.at({q.code}));
    } else {
      std::vector<std::uint64_t> codes(d);
      std::function<void(std::uint32_t, std::size_t)> rec = [&](std::uint32_t bound, std::size_t slot) {
        for (const auto& q : members) {
          if (q.hi >= bound) continue;
          codes[slot] = q.code;
          if (slot == 0) group.push_back(index.at(codes));
          else rec(q.lo, slot - 1);
        }
      };
      rec(std::numeric_limits<std::uint32_t>::max(), d - 1);
    }
    prob.constraints.push_back({{std::move(group)}});
  };
  for_each_sequence(cat, m, chosen, partials, visit);
  return prob;
}

AvoidanceProblem min_determined_problem(std::size_t n, std::size_t m, int r, std::vector<FinkElement>& points) {
  points = enumerate_fink(n, 1);
  std::sort(points.begin(), points.end(), [](const FinkElement& a, const FinkElement& b) {
    if (a.max_support() != b.max_support()) return a.max_support() < b.max_support();
    return a < b;
  });
  std::map<std::uint64_t, std::uint32_t> index;
  for (std::uint32_t i = 0; i < points.size(); ++i) index.emplace(points[i].code(), i);
  AvoidanceProblem prob;
  prob.variables = points.size();
  prob.colors = r;
  auto cat = make_catalog(1, n);
  std::vector<std::size_t> chosen;
  std::vector<Partial> partials{kEmpty};
  auto visit = [&](const std::vector<std::size_t>&, const std::vector<Partial>& parts) {
    std::vector<std::vector<std::uint32_t>> groups(m);
    for (const auto& q : parts)
      if (q.top) groups[q.first].push_back(index.at(q.code));
    prob.constraints.push_back({std::move(groups)});
  };
  for_each_sequence(cat, m, chosen, partials, visit);
  return prob;
}

std::optional<ColoringSpec> find_bad_coloring(int k, std::size_t n, std::size_t m, int r, const SearchOptions& opts,
                                              std::size_t d) {
  if (k < 1 || n < 1 || r < 1) throw InvalidArgument("find_bad_coloring needs k, n, r >= 1");
  Domain dom{d == 1 ? DomainKind::Fink : DomainKind::FinkSeq, k, n, d};
  // FIN_k(n) holds at most n blocks: no witness can exist.
  if (n < m) return ColoringSpec::family(dom, r, Family::Constant);
  std::vector<std::vector<FinkElement>> points;
  auto prob = witness_problem(k, d, n, m, r, points);
  SearchStats stats;
  auto sol = solve(prob, opts, stats);
  if (!sol) return std::nullopt;
  return coloring_from_assignment(dom, r, points, *sol);
}

NumberCertificate exact_g(int k, std::size_t d, std::size_t m, int r, const SearchOptions& opts) {
  if (k < 1 || d < 1 || m < d || r < 1) throw InvalidArgument("exact_g requires k, r >= 1 and m >= d >= 1");
  Domain below{d == 1 ? DomainKind::Fink : DomainKind::FinkSeq, k, m - 1, d};
  std::optional<ColoringSpec> trivial;
  if (m > 1) trivial = ColoringSpec::family(below, r, Family::Constant);
  return scan("g", {{"k", k}, {"d", d}, {"m", m}, {"r", r}}, m, std::move(trivial),
              [&](std::size_t n, SearchStats& stats) -> std::optional<ColoringSpec> {
                std::vector<std::vector<FinkElement>> points;
                auto prob = witness_problem(k, d, n, m, r, points);
                auto sol = solve(prob, opts, stats);
                if (!sol) return std::nullopt;
                Domain dom{d == 1 ? DomainKind::Fink : DomainKind::FinkSeq, k, n, d};
                return coloring_from_assignment(dom, r, points, *sol);
              });
}

NumberCertificate exact_min_determined(std::size_t m, int r, const SearchOptions& opts) {
  if (m < 1 || r < 1) throw InvalidArgument("exact_min_determined requires m, r >= 1");
  std::optional<ColoringSpec> trivial;
  if (m > 1) trivial = ColoringSpec::family({DomainKind::Subsets, 1, m - 1, 1}, r, Family::Constant);
  return scan("min_determined", {{"m", m}, {"r", r}}, m, std::move(trivial),
              [&](std::size_t n, SearchStats& stats) -> std::optional<ColoringSpec> {
                std::vector<FinkElement> points;
                auto prob = min_determined_problem(n, m, r, points);
                auto sol = solve(prob, opts, stats);
                if (!sol) return std::nullopt;
                std::vector<std::vector<FinkElement>> tuples;
                for (auto& f : points) tuples.push_back({f});
                return coloring_from_assignment({DomainKind::Subsets, 1, n, 1}, r, tuples, *sol);
              });
}

NumberCertificate exact_vdw(std::size_t m, int r, const SearchOptions& opts) {
  if (m < 1 || r < 1) throw InvalidArgument("exact_vdw requires m, r >= 1");
  return scan("vdw", {{"m", m}, {"r", r}}, 1, std::nullopt,
              [&](std::size_t n, SearchStats& stats) -> std::optional<ColoringSpec> {
                AvoidanceProblem prob;
                prob.variables = n;
                prob.colors = r;
                for (std::size_t a = 0; a < n; ++a) {
                  for (std::size_t gap = 1; m == 1 ? gap == 1 : a + gap * (m - 1) < n; ++gap) {
                    std::vector<std::uint32_t> g;
                    for (std::size_t j = 0; j < m; ++j) g.push_back(static_cast<std::uint32_t>(a + gap * j));
                    prob.constraints.push_back({{std::move(g)}});
                  }
                }
                auto sol = solve(prob, opts, stats);
                if (!sol) return std::nullopt;
                std::map<std::string, int> entries;
                for (std::size_t i = 0; i < n; ++i) entries[std::to_string(i)] = (*sol)[i];
                return ColoringSpec::table({DomainKind::Ints, 1, n, 1}, r, std::move(entries));
              });
}

NumberCertificate exact_ramsey(std::size_t i, std::size_t m, int r, const SearchOptions& opts) {
  if (i < 1 || m < i || r < 1) throw InvalidArgument("exact_ramsey requires m >= i >= 1 and r >= 1");
  return scan("ramsey", {{"i", i}, {"m", m}, {"r", r}}, 1, std::nullopt,
              [&](std::size_t n, SearchStats& stats) -> std::optional<ColoringSpec> {
                Domain dom{DomainKind::Tuples, 1, n, i};
                std::vector<std::vector<FinkElement>> points;
                std::map<std::uint64_t, std::uint32_t> index;
                if (n >= i) {
                  points = domain_points(dom);
                  std::sort(points.begin(), points.end(), point_order);
                  for (std::uint32_t v = 0; v < points.size(); ++v) index.emplace(points[v][0].code(), v);
                }
                AvoidanceProblem prob;
                prob.variables = points.size();
                prob.colors = r;
                for (const auto& big : combinations(n, m)) {
                  std::vector<std::uint32_t> g;
                  for (const auto& sub : combinations(m, i)) {
                    std::uint64_t code = 0;
                    for (auto j : sub) code |= std::uint64_t{1} << big[j];
                    g.push_back(index.at(code));
                  }
                  prob.constraints.push_back({{std::move(g)}});
                }
                auto sol = solve(prob, opts, stats);
                if (!sol) return std::nullopt;
                return coloring_from_assignment(dom, r, points, *sol);
              });
}

bool has_monochromatic_progression(const ColoringSpec& c, std::size_t m) {
  std::size_t n = c.domain().n;
  if (m == 0) return true;
  for (std::size_t a = 0; a < n; ++a) {
    if (m == 1) return true;
    for (std::size_t gap = 1; a + gap * (m - 1) < n; ++gap) {
      bool mono = true;
      for (std::size_t j = 1; j < m && mono; ++j) mono = c.color_int(a + gap * j) == c.color_int(a);
      if (mono) return true;
    }
  }
  return false;
}

bool has_monochromatic_clique(const ColoringSpec& c, std::size_t m) {
  std::size_t n = c.domain().n, i = c.domain().d;
  for (const auto& big : combinations(n, m)) {
    std::optional<int> first;
    bool mono = true;
    for (const auto& sub : combinations(m, i)) {
      std::vector<std::size_t> set;
      for (auto j : sub) set.push_back(big[j]);
      int col = c.color(FinkElement::from_set(set));
      if (!first) first = col;
      if (*first != col) {
        mono = false;
        break;
      }
    }
    if (mono) return true;
  }
  return false;
}

nlohmann::json to_json(const NumberCertificate& cert) {
  nlohmann::json j;
  j["quantity"] = cert.quantity;
  j["params"] = cert.params;
  j["value"] = cert.value;
  j["lower_witness"] = cert.lower_witness ? nlohmann::json(cert.lower_witness->serialize()) : nlohmann::json(nullptr);
  j["stats"] = {{"nodes", cert.stats.nodes}, {"wall_seconds", cert.stats.wall_seconds}};
  return j;
}

}  // namespace fink
