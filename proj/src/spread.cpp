#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "fink/catalog.hpp"
#include "fink/errors.hpp"
#include "fink/growth.hpp"
#include "fink/stab.hpp"

namespace fink {

namespace {

// Coefficient tuples of length l with entries in {1/q, ..., 1} and max 1.
std::vector<std::vector<Rational>> positive_grid(std::size_t l, std::size_t q) {
  std::vector<std::vector<Rational>> out;
  std::vector<std::size_t> num(l, 1);
  while (true) {
    if (*std::max_element(num.begin(), num.end()) == q) {
      std::vector<Rational> a;
      for (auto x : num) a.emplace_back(static_cast<long>(x), static_cast<long>(q)), a.back().canonicalize();
      out.push_back(std::move(a));
    }
    std::size_t i = l;
    while (i > 0 && num[i - 1] == q) num[--i] = 1;
    if (i == 0) break;
    ++num[i - 1];
  }
  return out;
}

PosVector place(const std::vector<Rational>& a, const std::vector<std::size_t>& at) {
  std::map<std::size_t, Rational> c;
  for (std::size_t i = 0; i < a.size(); ++i) c[at[i]] = a[i];
  return PosVector(std::move(c));
}

void for_each_subset(const std::vector<std::size_t>& ground, std::size_t l,
                     const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (l > ground.size()) return;
  std::vector<std::size_t> idx(l), pick(l);
  for (std::size_t i = 0; i < l; ++i) idx[i] = i;
  while (true) {
    for (std::size_t i = 0; i < l; ++i) pick[i] = ground[idx[i]];
    fn(pick);
    std::size_t i = l;
    while (i > 0 && idx[i - 1] == ground.size() - l + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < l; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::size_t binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  double b = 1;
  for (std::size_t i = 0; i < k; ++i) b = b * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return b > 1e18 ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(b + 0.5);
}

std::size_t color_count(const Rational& C, const Rational& eps) {
  auto q = ceil_q(3 * C / eps);
  if (q < 1) q = 1;
  if (!q.fits_ulong_p() || q > 4096) throw BudgetExceeded("too many interval colors: ceil(3C/eps) = " + q.get_str());
  return q.get_ui();
}

// The colorings c_{f,a}: every (l, a) pair with its value table over the
// l-subsets of {0..d-1}, colored by intervals of length eps/3 anchored at the
// least value seen.
struct ColoringFamily {
  struct Member {
    std::size_t l;
    std::vector<Rational> a;
    std::map<std::vector<std::size_t>, int> color;
  };
  std::vector<Member> members;
};

ColoringFamily build_family(const LipschitzFn& f, std::size_t d, std::size_t m, const Rational& eps, std::size_t q,
                            std::size_t budget = 1u << 21) {
  std::vector<std::size_t> ground(d);
  for (std::size_t i = 0; i < d; ++i) ground[i] = i;
  std::size_t work = 0;
  for (std::size_t l = 1; l < m; ++l) {
    double grid = std::pow(double(q), double(l));
    double cost = grid * double(binom(d, l));
    if (cost > double(budget) || (work += static_cast<std::size_t>(cost)) > budget)
      throw BudgetExceeded("spreading colorings need more than " + std::to_string(budget) + " evaluations");
  }
  ColoringFamily fam;
  std::vector<std::map<std::vector<std::size_t>, Rational>> values;
  Rational fmin;
  bool first = true;
  for (std::size_t l = 1; l < m; ++l)
    for (auto& a : positive_grid(l, q)) {
      std::map<std::vector<std::size_t>, Rational> vals;
      for_each_subset(ground, l, [&](const std::vector<std::size_t>& s) {
        auto v = f(place(a, s));
        if (first || v < fmin) fmin = v, first = false;
        vals.emplace(s, std::move(v));
      });
      fam.members.push_back({l, a, {}});
      values.push_back(std::move(vals));
    }
  Rational width = eps / 3;
  for (std::size_t k = 0; k < fam.members.size(); ++k)
    for (auto& [s, v] : values[k]) {
      mpz_class fl;
      Rational x = (v - fmin) / width;
      mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
      long col = fl.fits_slong_p() ? fl.get_si() : long(q) - 1;
      fam.members[k].color[s] = static_cast<int>(std::min<long>(col, long(q) - 1));
    }
  return fam;
}

// Depth-first search for an m-subset homogeneous for every member.
std::optional<std::vector<std::size_t>> homogeneous_dfs(const ColoringFamily& fam, std::size_t d, std::size_t m,
                                                        std::uint64_t node_budget) {
  std::vector<std::size_t> chosen;
  std::vector<int> ref(fam.members.size(), -1);
  std::uint64_t nodes = 0;
  std::function<bool(std::size_t)> go = [&](std::size_t from) -> bool {
    if (chosen.size() == m) return true;
    for (std::size_t x = from; x + (m - chosen.size()) <= d; ++x) {
      if (++nodes > node_budget) throw BudgetExceeded("spreading search exceeded node budget");
      auto saved = ref;
      bool ok = true;
      std::vector<std::size_t> prior = chosen;
      for (std::size_t k = 0; k < fam.members.size() && ok; ++k) {
        const auto& mem = fam.members[k];
        if (mem.l > prior.size() + 1) continue;
        for_each_subset(prior, mem.l - 1, [&](const std::vector<std::size_t>& s) {
          if (!ok) return;
          auto key = s;
          key.push_back(x);
          int c = mem.color.at(key);
          if (ref[k] < 0)
            ref[k] = c;
          else if (ref[k] != c)
            ok = false;
        });
      }
      if (ok) {
        chosen.push_back(x);
        if (go(x + 1)) return true;
        chosen.pop_back();
      }
      ref = std::move(saved);
    }
    return false;
  };
  if (go(0)) return chosen;
  return std::nullopt;
}

// A homogeneous subset of the given size for one member, inside `ground`.
std::optional<std::vector<std::size_t>> homogeneous_subset(const ColoringFamily::Member& mem,
                                                           const std::vector<std::size_t>& ground, std::size_t size,
                                                           std::uint64_t node_budget) {
  ColoringFamily::Member re{mem.l, mem.a, {}};
  std::vector<std::size_t> all(ground.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  for_each_subset(all, mem.l, [&](const std::vector<std::size_t>& s) {
    std::vector<std::size_t> orig;
    for (auto i : s) orig.push_back(ground[i]);
    re.color[s] = mem.color.at(orig);
  });
  ColoringFamily one;
  one.members.push_back(std::move(re));
  auto found = homogeneous_dfs(one, ground.size(), size, node_budget);
  if (!found) return std::nullopt;
  for (auto& i : *found) i = ground[i];
  return found;
}

std::string rat(const Rational& x) { return x.get_str(); }

}  // namespace

bool verify_spreading(const LipschitzFn& f, const std::vector<std::size_t>& set, std::size_t m, const Rational& eps,
                      std::size_t q) {
  std::vector<std::size_t> ground = set;
  std::sort(ground.begin(), ground.end());
  for (std::size_t l = 1; l < m && l <= ground.size(); ++l)
    for (const auto& a : positive_grid(l, q)) {
      bool first = true;
      Rational lo, hi;
      for_each_subset(ground, l, [&](const std::vector<std::size_t>& s) {
        auto v = f(place(a, s));
        if (first) lo = hi = v, first = false;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      });
      if (!(hi - lo < eps)) return false;
    }
  return true;
}

SpreadingResult spreading_extract(const LipschitzFn& f, std::size_t d, std::size_t m, const Rational& C,
                                  const Rational& eps, const NumberProvider& provider) {
  if (m < 1) throw InvalidArgument("spreading set size must be at least 1");
  if (eps <= 0) throw InvalidArgument("eps must be positive");
  if (C < f.lipschitz_constant())
    throw InvalidArgument("C = " + rat(C) + " is below the Lipschitz constant " + rat(f.lipschitz_constant()) +
                          " of " + f.describe());
  SpreadingResult out;
  std::size_t q = color_count(C, eps);
  out.colors = q;
  if (d < m) throw InsufficientWidth("need at least m = " + std::to_string(m) + " coordinates, have " + std::to_string(d));

  if (provider.mode() == NumberProvider::Mode::PaperBound) {
    Params p{{"C", C}, {"eps", eps}, {"m", Rational(static_cast<long>(m))}};
    auto e = catalog_expr("mbar", p);
    out.plan = e.render() + " (mbar at C=" + rat(C) + ", eps=" + rat(eps) + ", m=" + std::to_string(m) + ")";
    auto v = eval(e, Env{}, provider.digit_budget());
    if (!v || !v->fits_ulong_p() || v->get_ui() > d)
      throw InsufficientWidth("the spreading bound does not fit the ambient dimension " + std::to_string(d), out.plan);
  }

  auto fam = build_family(f, d, m, eps, q);
  out.colorings = fam.members.size();
  auto budget = provider.search_options().node_budget;

  if (provider.mode() == NumberProvider::Mode::ExactSearch) {
    // Homogenize one coloring at a time; sizes come from the Ramsey numbers, computed backward.
    std::vector<std::size_t> need(fam.members.size() + 1);
    need.back() = m;
    std::string plan;
    for (std::size_t k = fam.members.size(); k-- > 0;) {
      auto w = provider.ramsey(fam.members[k].l, need[k + 1], static_cast<int>(q));
      if (!w.value) {
        out.plan = "R_" + std::to_string(fam.members[k].l) + "(" + std::to_string(need[k + 1]) + ", " +
                   std::to_string(q) + " colors): " + w.plan;
        throw InsufficientWidth("no usable Ramsey width for the spreading colorings", out.plan);
      }
      need[k] = *w.value;
    }
    out.plan = "iterated Ramsey widths, outermost " + std::to_string(need[0]);
    if (need[0] > d) throw InsufficientWidth("iterated Ramsey width exceeds d = " + std::to_string(d), out.plan);
    std::vector<std::size_t> ground(d);
    for (std::size_t i = 0; i < d; ++i) ground[i] = i;
    for (std::size_t k = 0; k < fam.members.size(); ++k) {
      auto h = homogeneous_subset(fam.members[k], ground, need[k + 1], budget);
      if (!h) throw SearchFailed("Ramsey width did not yield a homogeneous set");
      ground = std::move(*h);
    }
    ground.resize(m);
    out.set = std::move(ground);
  } else {
    auto found = homogeneous_dfs(fam, d, m, budget);
    if (!found) {
      if (out.plan.empty()) out.plan = "direct search over " + std::to_string(d) + " coordinates";
      throw InsufficientWidth("no " + std::to_string(m) + "-set is homogeneous for all interval colorings in " +
                                  std::to_string(d) + " coordinates",
                              out.plan);
    }
    out.set = std::move(*found);
    if (out.plan.empty()) out.plan = "direct search";
  }
  out.verified = verify_spreading(f, out.set, m, eps, q);
  if (!out.verified) throw VerificationFailed("spreading set failed re-verification");
  return out;
}

namespace {

std::vector<PosVector> sphere_points(const std::vector<PosVector>& blocks, std::size_t q) {
  std::vector<PosVector> out;
  for (const auto& a : positive_net(blocks.size(), q)) {
    PosVector x;
    for (const auto& [i, c] : a.coeffs()) x = x + blocks[i].scaled(c);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

StabilizeResult stabilize(const LipschitzFn& f, const Rational& C, const Rational& eps, std::size_t m, StabMode mode,
                          std::size_t ambient, std::size_t digit_budget) {
  if (m < 1) throw InvalidArgument("m must be at least 1");
  if (eps <= 0 || eps >= 1) throw InvalidArgument("eps must lie in (0,1)");
  if (C < f.lipschitz_constant())
    throw InvalidArgument("C = " + rat(C) + " is below the Lipschitz constant " + rat(f.lipschitz_constant()));
  StabilizeResult out;
  std::size_t q = color_count(C, eps);

  if (f.lipschitz_constant() == 0) {
    for (std::size_t i = 0; i < m; ++i) out.blocks.push_back(PosVector::unit(i));
    auto pts = sphere_points(out.blocks, q);
    out.osc = oscillation(f, pts);
    out.net_points = pts.size();
    out.certified = true;
    out.strategy = "constant function: any block sequence";
    return out;
  }

  if (mode == StabMode::Guaranteed) {
    Rational eps3 = eps / 3, deps = eps / (3 * C);
    std::size_t t = 0;
    for (std::size_t p = 1; p < m; p *= 3) ++t;
    auto dsym = catalog_expr("D", {{"eps", deps}});
    auto dval = eval(dsym, Env{{"t", BigNat(static_cast<unsigned long>(t))}}, digit_budget);
    out.plan = "n = mbar(C, eps/3, D(eps/(3C), m)); D = " + dsym.render() + " at t = " + std::to_string(t);
    if (!dval) throw InsufficientWidth("stabilization plan is not evaluable", out.plan);
    out.plan += " = " + (decimal_digits(*dval) > 60 ? std::to_string(decimal_digits(*dval)) + " digits" : dval->get_str());
    auto mexpr = catalog_expr("mbar", {{"C", C}, {"eps", eps3}});
    out.plan += "; mbar = " + mexpr.render() + " at m = D";
    auto n = eval(mexpr, Env{{"m", *dval}}, digit_budget);
    if (!n) throw InsufficientWidth("stabilization plan exceeds " + std::to_string(digit_budget) + " digits", out.plan);
    out.plan += " = " + n->get_str();
    if (!n->fits_ulong_p() || n->get_ui() > ambient || !dval->fits_ulong_p())
      throw InsufficientWidth("stabilization plan exceeds the ambient dimension " + std::to_string(ambient), out.plan);
    std::size_t D = dval->get_ui();
    auto spread = spreading_extract(f, ambient, D, C, eps3, NumberProvider::adaptive());
    auto seq = small_diameter_seq(deps, t);
    for (std::size_t b = 0; b < m; ++b) {
      std::map<std::size_t, Rational> c;
      for (const auto& [pos, v] : seq.blocks[b].coeffs()) c[spread.set[pos]] = v;
      out.blocks.emplace_back(std::move(c));
    }
    out.certified = true;
    out.strategy = "spreading set of size D carrying the small-diameter sequence";
  } else {
    // Candidates: consecutive mountain blocks y_{1/2}^(n') at every offset, and
    // unit vectors on a spreading set.
    Rational best;
    bool have = false;
    auto consider = [&](std::vector<PosVector> blocks, std::string strategy) {
      auto pts = sphere_points(blocks, q);
      auto o = oscillation(f, pts);
      if (!have || o < best) {
        best = o, have = true;
        out.blocks = std::move(blocks);
        out.osc = o;
        out.net_points = pts.size();
        out.strategy = std::move(strategy);
      }
    };
    for (std::size_t n = 0;; ++n) {
      std::size_t L = 1;
      for (std::size_t i = 0; i < n; ++i) L *= 3;
      if (L * m > ambient) break;
      auto y = build_y(n, Rational(1, 2));
      for (std::size_t off = 0; off + L * m <= ambient; ++off) {
        std::vector<PosVector> blocks;
        for (std::size_t b = 0; b < m; ++b) blocks.push_back(y.shifted(off + b * L));
        consider(std::move(blocks), "y_1/2^(" + std::to_string(n) + ") blocks at offset " + std::to_string(off));
      }
    }
    try {
      auto spread = spreading_extract(f, ambient, m + 1, C, eps, NumberProvider::adaptive());
      std::vector<PosVector> blocks;
      for (std::size_t i = 0; i < m; ++i) blocks.push_back(PosVector::unit(spread.set[i]));
      consider(std::move(blocks), "unit vectors on an almost-spreading set");
    } catch (const Error&) {
    }
    if (!have) throw InsufficientWidth("ambient dimension " + std::to_string(ambient) + " holds no " + std::to_string(m) + " blocks");
    return out;
  }
  auto pts = sphere_points(out.blocks, q);
  out.osc = oscillation(f, pts);
  out.net_points = pts.size();
  return out;
}

}  // namespace fink
