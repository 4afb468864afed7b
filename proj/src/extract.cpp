#include "fink/extract.hpp"

#include <algorithm>
#include <functional>

#include "fink/catalog.hpp"
#include "fink/errors.hpp"
#include "fink/search.hpp"
#include "fink/span.hpp"

namespace fink {

nlohmann::json to_json(const ExtractionTrace& trace) {
  auto steps = nlohmann::json::array();
  for (const auto& s : trace.steps) {
    nlohmann::json j;
    j["name"] = s.name;
    j["widths"] = s.widths;
    j["sequences"] = s.sequences;
    j["colors"] = s.colors;
    if (!s.note.empty()) j["note"] = s.note;
    steps.push_back(std::move(j));
  }
  return {{"steps", steps}};
}

FinkElement embed(const BlockSequence& gens, const FinkElement& g) {
  std::vector<RecipeTerm> recipe;
  int k = gens.level();
  for (auto i : g.support()) {
    if (i >= gens.size()) throw InvalidArgument("element exceeds the generator count");
    recipe.push_back({i, k - g.at(i)});
  }
  return evaluate_recipe(gens, recipe);
}

BlockSequence code_sequence(const BlockSequence& f) {
  if (f.size() % 3 != 0) throw InvalidArgument("code_sequence needs 3N generators");
  int k = f.level();
  std::vector<FinkElement> h;
  for (std::size_t i = 0; i < f.size() / 3; ++i) {
    std::vector<std::uint8_t> digits(f[3 * i + 2].max_support() + 1, 0);
    for (int part = 0; part < 3; ++part)
      for (auto p : f[3 * i + part].support())
        digits[p] = static_cast<std::uint8_t>(f[3 * i + part].at(p) + (part == 1 ? 1 : 0));
    h.emplace_back(k + 1, std::move(digits));
  }
  return BlockSequence(k + 1, std::move(h));
}

bool verify_supp_top_determined(const ColoringSpec& c, const BlockSequence& h) {
  if (h.empty()) return false;
  auto s = span(h);
  std::map<std::vector<std::size_t>, int> seen;
  for (const auto& r : s.recipes()) {
    int col = c.color(r.element);
    auto [it, inserted] = seen.emplace(supp_top(r), col);
    if (!inserted && it->second != col) return false;
  }
  return true;
}

namespace {

std::string seq_text(const BlockSequence& s) {
  std::size_t w = std::max<std::size_t>(s.width(), 1);
  return format_sequence(s, w);
}

std::string set_text(const std::vector<std::size_t>& a) {
  std::string out = "{";
  for (std::size_t i = 0; i < a.size(); ++i) out += (i ? "," : "") + std::to_string(a[i]);
  return out + "}";
}

BlockSequence singletons(int k, std::size_t from, std::size_t count) {
  std::vector<FinkElement> e;
  for (std::size_t i = 0; i < count; ++i) e.push_back(FinkElement::singleton(k, from + i));
  return BlockSequence(k, std::move(e));
}

BlockSequence tail(const BlockSequence& s) {
  return BlockSequence(s.level(), std::vector<FinkElement>(s.begin() + 1, s.end()));
}

std::size_t dimension_of(const ColoringSpec& c) {
  return c.domain().kind == DomainKind::FinkSeq ? c.domain().d : 1;
}

int level_of(const ColoringSpec& c) { return c.domain().kind == DomainKind::Subsets ? 1 : c.domain().k; }

Domain fink_domain(int k, std::size_t n, std::size_t d) {
  return {d == 1 ? DomainKind::Fink : DomainKind::FinkSeq, k, n, d};
}

// Explicit table over FIN_k(L)^[d] (L = gens.size()), coloring u by color_of(images of u).
ColoringSpec induced_table(const BlockSequence& gens, std::size_t d, int colors,
                           const std::function<int(const std::vector<FinkElement>&)>& color_of) {
  Domain dom = fink_domain(gens.level(), gens.size(), d);
  ColoringSpec probe = ColoringSpec::family(dom, 1, Family::Constant);
  std::map<std::string, int> entries;
  std::vector<FinkElement> image;
  for (const auto& u : domain_points(dom)) {
    image.clear();
    for (const auto& g : u) image.push_back(embed(gens, g));
    entries[probe.key(u)] = color_of(image);
  }
  return ColoringSpec::table(dom, colors, std::move(entries));
}

BlockSequence carry(const BlockSequence& gens, const BlockSequence& sub) {
  std::vector<FinkElement> out;
  for (const auto& g : sub) out.push_back(embed(gens, g));
  return BlockSequence(gens.level(), std::move(out));
}

// First subset (in lexicographic DFS order) of `ground` with `size` elements
// whose i-subsets all receive one color.
std::optional<std::vector<std::size_t>> homogeneous_set(const std::vector<std::size_t>& ground, std::size_t i,
                                                        std::size_t size,
                                                        const std::function<int(const std::vector<std::size_t>&)>& color,
                                                        std::uint64_t budget) {
  std::vector<std::size_t> chosen;
  int ref = -1;
  std::uint64_t nodes = 0;
  std::function<bool(std::size_t)> go = [&](std::size_t from) -> bool {
    if (chosen.size() == size) return true;
    for (std::size_t p = from; p + (size - chosen.size()) <= ground.size(); ++p) {
      if (++nodes > budget) throw BudgetExceeded("homogeneous set search exceeded node budget");
      int saved = ref;
      bool ok = true;
      if (chosen.size() + 1 >= i) {
        // every (i-1)-subset of `chosen` together with ground[p]
        std::vector<std::size_t> idx(i - 1);
        for (std::size_t a = 0; a + 1 < i; ++a) idx[a] = a;
        while (ok) {
          std::vector<std::size_t> s;
          for (auto a : idx) s.push_back(chosen[a]);
          s.push_back(ground[p]);
          int col = color(s);
          if (ref < 0) ref = col;
          ok = ref == col;
          std::size_t t = i - 1;
          while (t > 0 && idx[t - 1] == chosen.size() - (i - 1) + t - 1) --t;
          if (t == 0) break;
          ++idx[t - 1];
          for (std::size_t u = t; u + 1 < i; ++u) idx[u] = idx[u - 1] + 1;
        }
      }
      if (ok) {
        chosen.push_back(ground[p]);
        if (go(p + 1)) return true;
        chosen.pop_back();
      }
      ref = saved;
    }
    return false;
  };
  if (go(0)) return chosen;
  return std::nullopt;
}

struct Progression {
  std::size_t alpha, lambda;
  int color;
};

// Least (alpha, lambda) with alpha, lambda >= 1, alpha + lambda*M <= W and
// d constant on {alpha + lambda*j : j <= M}. d is indexed 1..W.
std::optional<Progression> least_progression(const std::vector<int>& d, std::size_t M) {
  std::size_t W = d.size() - 1;
  for (std::size_t a = 1; a <= W; ++a)
    for (std::size_t l = 1; a + l * M <= W; ++l) {
      bool ok = true;
      for (std::size_t j = 1; j <= M && ok; ++j) ok = d[a + l * j] == d[a];
      if (ok) return Progression{a, l, d[a]};
    }
  return std::nullopt;
}

class MinDet {
 public:
  MinDet(const NumberProvider& p, ExtractionTrace& trace) : p_(p), trace_(trace) {}

  BlockSequence run(const ColoringSpec& c, std::size_t L) {
    std::size_t n = c.domain().n;
    int r = c.colors();
    if (L > n) throw InsufficientWidth("length " + std::to_string(L) + " needs at least that many points, have " +
                                       std::to_string(n));
    if (L == 1) {
      trace_.add({"base", {{"n", n}}, {}, {}, "x_0 = {0}"});
      return singletons(1, 0, 1);
    }
    auto mode = p_.mode();
    std::string plan;
    std::vector<std::size_t> need;
    std::size_t M = 0;
    if (mode != NumberProvider::Mode::Adaptive) {
      auto m_ans = p_.min_determined(L - 1, r);
      plan = "N(" + std::to_string(L - 1) + "): " + m_ans.plan;
      // The nested Ramsey widths are only computable when the progression is short.
      if (m_ans.value && (mode == NumberProvider::Mode::PaperBound || *m_ans.value + 1 <= 3)) {
        M = *m_ans.value;
        auto w_ans = p_.vdw(M + 1, r);
        plan += "; W(" + std::to_string(M + 1) + "): " + w_ans.plan;
        if (w_ans.value) {
          std::size_t W = *w_ans.value;
          need.assign(W + 1, 0);
          need[W] = W;
          for (std::size_t i = W; i >= 1 && !need.empty(); --i) {
            auto r_ans = p_.ramsey(i, need[i], r);
            if (!r_ans.value) {
              plan += "; R_" + std::to_string(i) + "(" + std::to_string(need[i]) + "): " + r_ans.plan;
              need.clear();
              break;
            }
            need[i - 1] = *r_ans.value;
          }
          if (!need.empty()) plan += "; plan width " + std::to_string(need[0]);
        }
      } else if (m_ans.value) {
        plan += "; W(" + std::to_string(*m_ans.value + 1) + ") and the nested Ramsey widths are beyond desk scale";
      }
    }
    if (!need.empty() && need[0] <= n) return construct(c, L, M, need);
    if (mode == NumberProvider::Mode::PaperBound)
      throw InsufficientWidth("min-determined plan for length " + std::to_string(L) + " does not fit FIN(" +
                                  std::to_string(n) + ")",
                              plan);
    if (mode == NumberProvider::Mode::Adaptive)
      if (auto s = adaptive(c, L)) return *s;
    auto s = find_min_determined(c, L, p_.search_options());
    if (!s)
      throw InsufficientWidth("no min-determined sequence of length " + std::to_string(L) + " in FIN(" +
                                  std::to_string(n) + ")",
                              plan.empty() ? "exhaustive search" : plan);
    trace_.add({"oracle", {{"length", L}, {"n", n}}, {seq_text(*s)}, {}, plan.empty() ? "direct search" : plan});
    return *s;
  }

 private:
  static int subset_color(const ColoringSpec& c, const std::vector<std::size_t>& s) {
    return c.color(FinkElement::from_set(s));
  }

  // Steps shared by the plan and adaptive routes once A and the progression are fixed.
  BlockSequence finish(const ColoringSpec& c, std::size_t L, std::size_t M, const std::vector<std::size_t>& A,
                       const Progression& ap) {
    std::vector<std::size_t> x0(A.begin(), A.begin() + static_cast<std::ptrdiff_t>(ap.alpha));
    std::vector<FinkElement> ys;
    for (std::size_t j = 1; j <= M; ++j) {
      auto b = A.begin() + static_cast<std::ptrdiff_t>(ap.alpha + (j - 1) * ap.lambda);
      ys.push_back(FinkElement::from_set(std::vector<std::size_t>(b, b + static_cast<std::ptrdiff_t>(ap.lambda))));
    }
    BlockSequence y(1, ys);
    trace_.add({"blocks",
                {{"alpha", ap.alpha}, {"lambda", ap.lambda}, {"M", M}},
                {set_text(x0), seq_text(y)},
                {ap.color},
                "x_0 = first alpha points of A, y_j = consecutive lambda-blocks"});
    auto induced = induced_table(y, 1, c.colors(), [&](const std::vector<FinkElement>& e) { return c.color(e[0]); });
    auto sub = run(induced, L - 1);
    std::vector<FinkElement> out{FinkElement::from_set(x0)};
    for (const auto& g : carry(y, sub)) out.push_back(g);
    return BlockSequence(1, std::move(out));
  }

  BlockSequence construct(const ColoringSpec& c, std::size_t L, std::size_t M, const std::vector<std::size_t>& need) {
    std::size_t n = c.domain().n, W = need.size() - 1;
    std::vector<std::size_t> B(n);
    for (std::size_t i = 0; i < n; ++i) B[i] = i;
    std::vector<int> ci(W + 1, -1);
    for (std::size_t i = 1; i <= W; ++i) {
      auto next = homogeneous_set(B, i, need[i], [&](const std::vector<std::size_t>& s) { return subset_color(c, s); },
                                  p_.search_options().node_budget);
      if (!next) throw SearchFailed("Ramsey width " + std::to_string(need[i - 1]) + " gave no homogeneous set");
      B = std::move(*next);
      ci[i] = subset_color(c, std::vector<std::size_t>(B.begin(), B.begin() + static_cast<std::ptrdiff_t>(i)));
      trace_.add({"homogenize", {{"i", i}, {"from", need[i - 1]}, {"to", need[i]}}, {set_text(B)}, {ci[i]}, ""});
    }
    auto ap = least_progression(ci, M);
    if (!ap) throw SearchFailed("van der Waerden width gave no progression");
    trace_.add({"progression", {{"W", W}, {"terms", M + 1}}, {}, std::vector<int>(ci.begin() + 1, ci.end()), ""});
    return finish(c, L, M, B, *ap);
  }

  // Every width chosen by direct search: M from L-1 up, W from M+1 up, A the
  // first set homogeneous on all cardinalities up to W.
  std::optional<BlockSequence> adaptive(const ColoringSpec& c, std::size_t L) {
    std::size_t n = c.domain().n;
    auto budget = p_.search_options().node_budget;
    for (std::size_t M = L - 1; M + 1 < n; ++M)
      for (std::size_t W = M + 1; W <= n; ++W) {
        std::vector<std::size_t> A;
        std::vector<int> ref;
        std::uint64_t nodes = 0;
        std::optional<BlockSequence> result;
        std::function<bool(std::size_t)> go = [&](std::size_t from) -> bool {
          if (A.size() == W) {
            std::vector<int> d(ref.begin(), ref.end());
            d.insert(d.begin(), -1);
            auto ap = least_progression(d, M);
            if (!ap) return false;
            std::size_t mark = trace_.steps.size();
            try {
              trace_.add({"adaptive", {{"M", M}, {"W", W}}, {set_text(A)}, ref, "homogeneous on every cardinality"});
              result = finish(c, L, M, A, *ap);
              return true;
            } catch (const InsufficientWidth&) {
              trace_.steps.resize(mark);
              return false;
            }
          }
          for (std::size_t x = from; x + (W - A.size()) <= n; ++x) {
            if (++nodes > budget) throw BudgetExceeded("adaptive min-determined search exceeded node budget");
            auto saved = ref;
            bool ok = true;
            // every subset of A joined with x; its color must match ref[size-1]
            std::size_t subsets = std::size_t(1) << A.size();
            ref.resize(A.size() + 1, -1);
            for (std::size_t mask = 0; mask < subsets && ok; ++mask) {
              std::vector<std::size_t> s;
              for (std::size_t b = 0; b < A.size(); ++b)
                if (mask >> b & 1) s.push_back(A[b]);
              s.push_back(x);
              int col = subset_color(c, s);
              int& want = ref[s.size() - 1];
              if (want < 0) want = col;
              ok = want == col;
            }
            if (ok) {
              A.push_back(x);
              if (go(x + 1)) return true;
              A.pop_back();
            }
            ref = std::move(saved);
          }
          return false;
        };
        if (W > 20) break;
        if (go(0)) return result;
      }
    return std::nullopt;
  }

  const NumberProvider& p_;
  ExtractionTrace& trace_;
};

void check_level_one(const ColoringSpec& c, const char* who) {
  if (level_of(c) != 1 || dimension_of(c) != 1) throw InvalidArgument(std::string(who) + " needs a coloring of FIN(n)");
}

// Indices of the first m entries sharing the least color that occurs >= m times.
std::optional<std::vector<std::size_t>> pigeonhole(const std::vector<int>& colors, std::size_t m) {
  std::map<int, std::vector<std::size_t>> by;
  for (std::size_t i = 0; i < colors.size(); ++i) by[colors[i]].push_back(i);
  for (auto& [col, idx] : by)
    if (idx.size() >= m) return std::vector<std::size_t>(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(m));
  return std::nullopt;
}

BlockSequence pick(const BlockSequence& s, const std::vector<std::size_t>& idx) {
  std::vector<FinkElement> out;
  for (auto i : idx) out.push_back(s[i]);
  return BlockSequence(s.level(), std::move(out));
}

Extraction finish_mono(const ColoringSpec& c, BlockSequence w, ExtractionTrace trace) {
  Extraction out;
  out.witness = std::move(w);
  out.trace = std::move(trace);
  int col = 0;
  out.verified = verify_monochromatic(c, out.witness, &col);
  if (!out.verified) throw VerificationFailed("extracted sequence is not monochromatic");
  out.color = col;
  out.trace.add({"verify", {{"length", out.witness.size()}}, {}, {col}, "span re-walked"});
  return out;
}

}  // namespace

Extraction min_determined_extract(const ColoringSpec& c, std::size_t m, const NumberProvider& provider) {
  check_level_one(c, "min_determined_extract");
  if (m < 1) throw InvalidArgument("m must be at least 1");
  Extraction out;
  MinDet md(provider, out.trace);
  out.witness = md.run(c, m);
  out.verified = verify_min_determined(c, out.witness);
  if (!out.verified) throw VerificationFailed("extracted sequence is not min-determined");
  out.trace.add({"verify", {{"length", m}}, {}, {}, "min-match check over the span"});
  return out;
}

Extraction folkman_extract(const ColoringSpec& c, std::size_t m, const NumberProvider& provider) {
  check_level_one(c, "folkman_extract");
  if (m < 1) throw InvalidArgument("m must be at least 1");
  std::size_t n = c.domain().n;
  int r = c.colors();
  if (m > n) throw InsufficientWidth("m = " + std::to_string(m) + " exceeds n = " + std::to_string(n));
  ExtractionTrace trace;
  if (r == 1 || m == 1) {
    auto w = singletons(1, 0, m);
    trace.add({"trivial", {{"m", m}}, {seq_text(w)}, {}, r == 1 ? "one color" : "single generator"});
    return finish_mono(c, std::move(w), std::move(trace));
  }
  std::size_t Lp = static_cast<std::size_t>(r) * (m - 1) + 1;
  try {
    MinDet md(provider, trace);
    auto seq = md.run(c, Lp);
    std::vector<int> cols;
    for (const auto& x : seq) cols.push_back(c.color(x));
    auto idx = pigeonhole(cols, m);
    if (!idx) throw SearchFailed("pigeonhole found no repeated min-color");
    auto w = pick(seq, *idx);
    trace.add({"pigeonhole", {{"length", Lp}, {"m", m}}, {seq_text(w)}, cols, ""});
    return finish_mono(c, std::move(w), std::move(trace));
  } catch (const InsufficientWidth& e) {
    if (provider.mode() == NumberProvider::Mode::PaperBound)
      throw InsufficientWidth("Folkman plan via min-determined length " + std::to_string(Lp) + ": " + e.what(),
                              e.plan());
    // Below the pigeonhole length, ask for a min-determined sequence whose
    // group colors already repeat m times.
    for (std::size_t L = Lp - 1; L >= m; --L) {
      GroupPredicate enough = [m](const std::vector<int>& g) { return pigeonhole(g, m).has_value(); };
      auto seq = find_min_determined(c, L, provider.search_options(), enough);
      if (!seq) continue;
      std::vector<int> cols;
      for (const auto& x : *seq) cols.push_back(c.color(x));
      auto w = pick(*seq, *pigeonhole(cols, m));
      trace.add({"oracle-pigeonhole", {{"length", L}, {"m", m}}, {seq_text(*seq), seq_text(w)}, cols, e.what()});
      return finish_mono(c, std::move(w), std::move(trace));
    }
    throw InsufficientWidth("no monochromatic sequence of length " + std::to_string(m) + " in FIN(" +
                                std::to_string(n) + ")",
                            e.plan());
  }
}

Extraction code_extract(const ColoringSpec& c, std::size_t N, const NumberProvider& provider) {
  if (dimension_of(c) != 1 || level_of(c) < 2) throw InvalidArgument("code_extract needs a coloring of FIN_{k+1}(n), k >= 1");
  if (N < 1) throw InvalidArgument("N must be at least 1");
  int K = level_of(c), k = K - 1, r = c.colors();
  std::size_t n = c.domain().n;
  Extraction out;
  auto bar = provider.bar_n(K, N, r);
  if (bar.value && *bar.value > n)
    throw InsufficientWidth("supp_top width " + std::to_string(*bar.value) + " exceeds n = " + std::to_string(n), bar.plan);
  if (!bar.value && provider.mode() == NumberProvider::Mode::PaperBound)
    throw InsufficientWidth("supp_top width is not evaluable", bar.plan);
  if (3 * N > n) throw InsufficientWidth("3N = " + std::to_string(3 * N) + " generators exceed n = " + std::to_string(n), bar.plan);

  auto gens = singletons(k, 0, n);
  if (r == 1) {
    gens = singletons(k, 0, 3 * N);
    out.trace.add({"trivial", {{"N", N}}, {seq_text(gens)}, {}, "one color"});
  } else {
    // e_i(u_0..u_{2i+2}) = c(sum_j U^{j mod 2} u_j), homogenized for i = N-1 down to 0.
    for (std::size_t i = N; i-- > 0;) {
      std::size_t d = 2 * i + 3;
      auto e = induced_table(gens, d, r, [&](const std::vector<FinkElement>& w) {
        std::vector<std::uint8_t> digits(w.back().max_support() + 1, 0);
        for (std::size_t j = 0; j < w.size(); ++j)
          for (auto p : w[j].support()) digits[p] = static_cast<std::uint8_t>(w[j].at(p) + (j % 2));
        return c.color(FinkElement(K, std::move(digits)));
      });
      auto found = find_witness(e, 3 * N, provider.search_options());
      if (!found)
        throw InsufficientWidth("e_" + std::to_string(i) + " has no homogeneous sequence of length " +
                                    std::to_string(3 * N) + " among " + std::to_string(gens.size()) + " generators",
                                bar.plan);
      gens = carry(gens, found->witness);
      out.trace.add({"homogenize e_" + std::to_string(i), {{"i", i}, {"dimension", d}, {"generators", found->witness.size()}},
                     {seq_text(gens)}, {found->color}, ""});
    }
  }
  out.witness = code_sequence(gens);
  out.trace.add({"code", {{"N", N}}, {seq_text(out.witness)}, {}, "h_i = f_{3i} + U f_{3i+1} + f_{3i+2}"});
  out.verified = verify_supp_top_determined(c, out.witness);
  if (!out.verified) throw VerificationFailed("coded sequence is not supp_top-determined");
  out.trace.add({"verify", {{"N", N}}, {}, {}, "equal supp_top, equal color"});
  return out;
}

Extraction step_up_extract(const ColoringSpec& c, std::size_t m, const NumberProvider& provider) {
  if (dimension_of(c) != 1 || level_of(c) < 2) throw InvalidArgument("step_up_extract needs a coloring of FIN_{k+1}(n), k >= 1");
  if (m < 1) throw InvalidArgument("m must be at least 1");
  int K = level_of(c), r = c.colors();
  std::size_t n = c.domain().n;
  if (m > n) throw InsufficientWidth("m = " + std::to_string(m) + " exceeds n = " + std::to_string(n));
  ExtractionTrace trace;
  if (r == 1) {
    auto w = singletons(K, 0, m);
    trace.add({"trivial", {{"m", m}}, {seq_text(w)}, {}, "one color"});
    return finish_mono(c, std::move(w), std::move(trace));
  }
  auto H = provider.g(1, 1, m, r);
  std::string plan = "g_{" + std::to_string(K) + ",1}(m) <= " +
                     catalog_expr("gk1", {{"k", Rational(K)}}).render() + "; H = g_{1,1}(m): " + H.plan;
  if (provider.mode() == NumberProvider::Mode::PaperBound) {
    if (!H.value) throw InsufficientWidth("step-up plan is not evaluable", plan);
    auto bar = provider.bar_n(K, *H.value, r);
    plan += "; barN: " + bar.plan;
    if (!bar.value || *bar.value > n) throw InsufficientWidth("step-up plan does not fit FIN_" + std::to_string(K) + "(" + std::to_string(n) + ")", plan);
  }
  std::vector<std::size_t> widths;
  if (H.value)
    widths.push_back(*H.value);
  else if (provider.mode() == NumberProvider::Mode::Adaptive)
    for (std::size_t h = m; 3 * h <= n; ++h) widths.push_back(h);
  else
    throw InsufficientWidth("no value for g_{1,1}(m)", plan);

  std::string last = "no width tried";
  for (auto Hv : widths) {
    try {
      auto code = code_extract(c, Hv, provider);
      const auto& h = code.witness;
      // Pushed-down coloring of FIN(H): x -> c(sum_{j in x} h_j).
      auto push = [&](const FinkElement& x) {
        std::vector<RecipeTerm> rec;
        for (auto j : x.support()) rec.push_back({j, 0});
        return evaluate_recipe(h, rec);
      };
      BlockSequence base = singletons(1, 0, Hv);
      auto pushed = induced_table(base, 1, r, [&](const std::vector<FinkElement>& x) { return c.color(push(x[0])); });
      auto fk = folkman_extract(pushed, m, provider);
      std::vector<FinkElement> f;
      for (const auto& x : fk.witness) f.push_back(push(x));
      for (auto& s : code.trace.steps) s.name = "code/" + s.name, trace.add(s);
      for (auto& s : fk.trace.steps) s.name = "folkman/" + s.name, trace.add(s);
      BlockSequence w(K, std::move(f));
      trace.add({"pull-back", {{"H", Hv}, {"m", m}}, {seq_text(w)}, {}, "f_i = sum_{j in x_i} h_j"});
      return finish_mono(c, std::move(w), std::move(trace));
    } catch (const InsufficientWidth& e) {
      last = e.what();
    }
  }
  throw InsufficientWidth("step-up failed: " + last, plan);
}

Extraction raise_dimension_extract(const ColoringSpec& c, std::size_t m, const NumberProvider& provider) {
  std::size_t D = dimension_of(c);
  int k = level_of(c), r = c.colors();
  std::size_t n = c.domain().n;
  if (D == 1) {
    if (k == 1) return folkman_extract(c, m, provider);
    auto w = find_witness(c, m, provider.search_options());
    if (!w) throw InsufficientWidth("no monochromatic sequence of length " + std::to_string(m));
    ExtractionTrace trace;
    trace.add({"oracle", {{"m", m}}, {seq_text(w->witness)}, {w->color}, "base dimension"});
    return finish_mono(c, w->witness, std::move(trace));
  }
  if (m < D) throw InvalidArgument("m must be at least the dimension");
  std::size_t d = D - 1;
  if (provider.mode() == NumberProvider::Mode::PaperBound) {
    auto g = provider.g(k, D, m, r);
    if (!g.value || *g.value > n) throw InsufficientWidth("dimension-raising plan does not fit n = " + std::to_string(n), g.plan);
  }
  // Refinement chain: S_0 = singletons, a_j = first element of S_j, and S_j
  // homogeneous for every c(x, .) with x in <a_i>_{i<j}^[d] reaching a_{j-1}.
  // The choice of each S_j (its length) is searched depth-first; a chain may
  // stop after any refinement, with S = the heads taken so far.
  using TupleColors = std::map<std::vector<FinkElement>, int>;
  std::size_t attempts = 0;
  const std::size_t max_attempts = 4096;
  std::function<std::optional<Extraction>(const BlockSequence&, const std::vector<FinkElement>&, const TupleColors&,
                                          const ExtractionTrace&)>
      go;
  auto conclude = [&](const std::vector<FinkElement>& heads, const TupleColors& ix,
                      ExtractionTrace trace) -> std::optional<Extraction> {
    if (heads.size() < m) return std::nullopt;
    if (++attempts > max_attempts) throw BudgetExceeded("refinement chain search exceeded its budget");
    BlockSequence S(k, heads);
    auto reduced = induced_table(S, d, r, [&](const std::vector<FinkElement>& x) {
      auto it = ix.find(x);
      if (it == ix.end()) throw SearchFailed("tuple without a recorded i_x");
      return it->second;
    });
    try {
      auto sub = raise_dimension_extract(reduced, m, provider);
      trace.add({"heads", {{"p", S.size()}}, {seq_text(S)}, {}, "i_x = c(x, first element of the next S)"});
      for (auto& s : sub.trace.steps) s.name = "dim" + std::to_string(d) + "/" + s.name, trace.add(s);
      return finish_mono(c, carry(S, sub.witness), std::move(trace));
    } catch (const InsufficientWidth&) {
      return std::nullopt;
    }
  };
  go = [&](const BlockSequence& rest, const std::vector<FinkElement>& heads, const TupleColors& ix,
           const ExtractionTrace& trace) -> std::optional<Extraction> {
    if (rest.empty()) return std::nullopt;
    auto take = [&](const BlockSequence& s, const TupleColors& ix2, const ExtractionTrace& tr) {
      auto h2 = heads;
      h2.push_back(s[0]);
      return go(s.size() > 1 ? tail(s) : BlockSequence(k, {}), h2, ix2, tr);
    };
    if (heads.size() < d) return take(rest, ix, trace);
    BlockSequence hs(k, heads);
    std::vector<std::vector<FinkElement>> fresh;
    for (auto& x : block_tuples(span(hs).elements(), d))
      if (x.back().max_support() >= heads.back().min_support()) fresh.push_back(std::move(x));
    // One combined color per y: the vector (c(x, y))_x.
    std::map<std::vector<int>, int> ids;
    auto combined = [&](const std::vector<FinkElement>& y) {
      std::vector<int> v;
      for (const auto& x : fresh) {
        auto t = x;
        t.push_back(y[0]);
        v.push_back(c.color(t));
      }
      return ids.emplace(std::move(v), static_cast<int>(ids.size())).first->second;
    };
    std::size_t cap = fink_cardinality(rest.size(), k);
    auto table = induced_table(rest, 1, static_cast<int>(std::max<std::size_t>(cap, 1)), combined);
    std::vector<std::vector<int>> by_id(ids.size());
    for (const auto& [v, id] : ids) by_id[static_cast<std::size_t>(id)] = v;
    for (std::size_t len = rest.size(); len >= 1; --len) {
      auto w = find_witness(table, len, provider.search_options());
      if (!w) continue;
      auto refined = carry(rest, w->witness);
      auto ix2 = ix;
      const auto& vec = by_id[static_cast<std::size_t>(w->color)];
      for (std::size_t q = 0; q < fresh.size(); ++q) ix2[fresh[q]] = vec[q];
      auto tr = trace;
      tr.add({"refine S_" + std::to_string(heads.size()), {{"tuples", fresh.size()}, {"length", refined.size()}},
              {seq_text(refined)}, vec, ""});
      if (auto out = take(refined, ix2, tr)) return out;
      if (auto out = conclude(heads, ix2, tr)) return out;
    }
    return std::nullopt;
  };
  if (auto out = go(singletons(k, 0, n), {}, {}, {})) return *out;
  throw InsufficientWidth("no refinement chain in FIN_" + std::to_string(k) + "(" + std::to_string(n) +
                              ") reduces to a dimension-" + std::to_string(d) + " witness of length " +
                              std::to_string(m),
                          "n = " + std::to_string(n));
}

RewriteReport check_u_rewrite(const BlockSequence& f) {
  auto h = code_sequence(f);
  auto fs = span(f);
  auto hs = span(h);
  RewriteReport rep;
  int K = h.level();
  std::map<std::size_t, std::vector<FinkElement>> sums;  // length -> every sum_j U^{j mod 2} w_j
  for (const auto& g : hs.recipes()) {
    ++rep.elements;
    std::size_t l = supp_top(g).size();
    std::size_t len = 2 * (l - 1) + 3;
    auto it = sums.find(len);
    if (it == sums.end()) {
      std::vector<FinkElement> all;
      for (const auto& w : block_tuples(fs.elements(), len)) {
        std::vector<std::uint8_t> digits(w.back().max_support() + 1, 0);
        for (std::size_t j = 0; j < w.size(); ++j)
          for (auto p : w[j].support()) digits[p] = static_cast<std::uint8_t>(w[j].at(p) + (j % 2));
        all.emplace_back(K, std::move(digits));
      }
      std::sort(all.begin(), all.end());
      it = sums.emplace(len, std::move(all)).first;
    }
    if (!std::binary_search(it->second.begin(), it->second.end(), g.element)) ++rep.counterexamples;
  }
  return rep;
}

}  // namespace fink
