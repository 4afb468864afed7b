#include "fink/stab.hpp"

#include <algorithm>
#include <sstream>

#include "fink/catalog.hpp"
#include "fink/errors.hpp"

namespace fink {

PosVector::PosVector(std::map<std::size_t, Rational> coeffs) {
  for (auto& [pos, v] : coeffs) set(pos, v);
}

Rational PosVector::at(std::size_t pos) const {
  auto it = coeffs_.find(pos);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

void PosVector::set(std::size_t pos, const Rational& value) {
  if (value < 0) throw InvalidArgument("positive vectors have non-negative coefficients");
  if (value == 0) {
    coeffs_.erase(pos);
    return;
  }
  // equality on mpq_class assumes lowest terms
  auto& slot = coeffs_[pos];
  slot = value;
  slot.canonicalize();
}

std::vector<std::size_t> PosVector::support() const {
  std::vector<std::size_t> out;
  for (const auto& [pos, v] : coeffs_) out.push_back(pos);
  return out;
}

std::size_t PosVector::min_support() const {
  if (empty()) throw InvalidArgument("zero vector has no support");
  return coeffs_.begin()->first;
}

std::size_t PosVector::max_support() const {
  if (empty()) throw InvalidArgument("zero vector has no support");
  return coeffs_.rbegin()->first;
}

Rational PosVector::norm() const {
  Rational m = 0;
  for (const auto& [pos, v] : coeffs_) m = std::max(m, v);
  return m;
}

std::vector<Rational> PosVector::profile() const {
  std::vector<Rational> out;
  for (const auto& [pos, v] : coeffs_) out.push_back(v);
  return out;
}

PosVector PosVector::shifted(std::size_t offset) const {
  PosVector out;
  for (const auto& [pos, v] : coeffs_) out.coeffs_[pos + offset] = v;
  return out;
}

PosVector PosVector::scaled(const Rational& factor) const {
  if (factor < 0) throw InvalidArgument("negative scale of a positive vector");
  PosVector out;
  if (factor == 0) return out;
  for (const auto& [pos, v] : coeffs_) out.coeffs_[pos] = v * factor;
  return out;
}

PosVector PosVector::operator+(const PosVector& other) const {
  PosVector out = *this;
  for (const auto& [pos, v] : other.coeffs_) out.set(pos, out.at(pos) + v);
  return out;
}

Rational sup_distance(const PosVector& a, const PosVector& b) {
  Rational m = 0;
  for (const auto& [pos, v] : a.coeffs()) m = std::max(m, Rational(abs(v - b.at(pos))));
  for (const auto& [pos, v] : b.coeffs())
    if (!a.coeffs().count(pos)) m = std::max(m, v);
  return m;
}

std::string format_vector(const PosVector& v) {
  std::string out;
  for (const auto& [pos, c] : v.coeffs()) out += std::to_string(pos) + ":" + c.get_str() + "\n";
  return out;
}

PosVector parse_vector(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::map<std::size_t, Rational> coeffs;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw InvalidArgument("expected pos:coeff, got '" + line + "'");
    std::size_t pos = 0;
    try {
      std::size_t used = 0;
      pos = std::stoul(line.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("pos");
    } catch (const std::exception&) {
      throw InvalidArgument("bad position in '" + line + "'");
    }
    if (coeffs.count(pos)) throw InvalidArgument("duplicate position " + std::to_string(pos));
    coeffs[pos] = parse_rational(line.substr(colon + 1));
  }
  return PosVector(std::move(coeffs));
}

std::vector<int> y_exponents(std::size_t n, std::size_t budget) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < n; ++i) {
    size *= 3;
    if (size > budget) throw BudgetExceeded("y vector support 3^" + std::to_string(n) + " exceeds budget");
  }
  std::vector<int> e{0};
  for (std::size_t level = 1; level <= n; ++level) {
    std::vector<int> next;
    next.reserve(e.size() * 3);
    for (int x : e) {
      next.push_back(static_cast<int>(level));
      next.push_back(x);
      next.push_back(static_cast<int>(level));
    }
    e = std::move(next);
  }
  return e;
}

namespace {

Rational rpow(const Rational& r, int e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(out.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<unsigned long>(e));
  out.canonicalize();
  return out;
}

void check_r(const Rational& r) {
  if (r <= 0 || r >= 1) throw InvalidArgument("r must lie in (0,1)");
}

PosVector from_exponents(const std::vector<int>& e, const Rational& r, std::size_t offset = 0) {
  int top = e.empty() ? 0 : *std::max_element(e.begin(), e.end());
  std::vector<Rational> pw;
  for (int j = 0; j <= top; ++j) pw.push_back(rpow(r, j));
  std::map<std::size_t, Rational> c;
  for (std::size_t i = 0; i < e.size(); ++i) c[offset + i] = pw[e[i]];
  return PosVector(std::move(c));
}

// Bitset over columns 0..q of one DP row.
class Row {
 public:
  explicit Row(std::size_t bits) : w_((bits + 63) / 64, 0) {}
  void set(std::size_t j) { w_[j / 64] |= std::uint64_t(1) << (j % 64); }
  bool test(std::size_t j) const { return (w_[j / 64] >> (j % 64)) & 1; }
  std::vector<std::uint64_t>& words() { return w_; }
  const std::vector<std::uint64_t>& words() const { return w_; }

 private:
  std::vector<std::uint64_t> w_;
};

void shl1(const std::vector<std::uint64_t>& in, std::vector<std::uint64_t>& out) {
  std::uint64_t carry = 0;
  for (std::size_t w = 0; w < in.size(); ++w) {
    out[w] = (in[w] << 1) | carry;
    carry = in[w] >> 63;
  }
}

// Closes `s` under j-1 -> j moves allowed where `b` is set: each seed fills
// forward to the end of the run of b after it. Uses that adding the run's
// first reached bit to the run carries through its remainder.
void close_runs(std::vector<std::uint64_t>& s, const std::vector<std::uint64_t>& b, std::vector<std::uint64_t>& tmp) {
  shl1(s, tmp);
  unsigned __int128 carry = 0;
  for (std::size_t w = 0; w < s.size(); ++w) {
    std::uint64_t a = tmp[w] & b[w];
    unsigned __int128 sum = static_cast<unsigned __int128>(b[w]) + a + carry;
    auto low = static_cast<std::uint64_t>(sum);
    carry = sum >> 64;
    s[w] |= ((low ^ b[w]) & b[w]) | a;
  }
}

}  // namespace

PosVector build_y(std::size_t n, const Rational& r, std::size_t budget) {
  check_r(r);
  return from_exponents(y_exponents(n, budget), r);
}

Rational dis_reference(const PosVector& x, const PosVector& y, std::size_t cell_budget) {
  auto a = x.profile(), b = y.profile();
  std::size_t p = a.size(), q = b.size();
  if ((p + 1) * (q + 1) > cell_budget) throw BudgetExceeded("dis reference table exceeds budget");
  // best[j] for the current row: least possible running max after placing a[0..i) and b[0..j).
  std::vector<Rational> prev(q + 1), cur(q + 1);
  prev[0] = 0;
  for (std::size_t j = 1; j <= q; ++j) prev[j] = std::max(prev[j - 1], b[j - 1]);
  for (std::size_t i = 1; i <= p; ++i) {
    cur[0] = std::max(prev[0], a[i - 1]);
    for (std::size_t j = 1; j <= q; ++j) {
      Rational best = std::max(prev[j], a[i - 1]);
      best = std::min(best, std::max(cur[j - 1], b[j - 1]));
      best = std::min(best, std::max(prev[j - 1], Rational(abs(a[i - 1] - b[j - 1]))));
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  return prev[q];
}

Rational dis(const PosVector& x, const PosVector& y, std::size_t cell_budget) {
  auto a = x.profile(), b = y.profile();
  if (a.empty() || b.empty()) return std::max(x.norm(), y.norm());
  std::size_t p = a.size(), q = b.size();
  if (p * (q + 1) > cell_budget) throw BudgetExceeded("dis table exceeds budget");

  std::vector<Rational> vals(a);
  vals.insert(vals.end(), b.begin(), b.end());
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  auto id_of = [&](const Rational& v) {
    return static_cast<std::size_t>(std::lower_bound(vals.begin(), vals.end(), v) - vals.begin());
  };
  std::vector<std::size_t> ai(p), bi(q);
  for (std::size_t i = 0; i < p; ++i) ai[i] = id_of(a[i]);
  for (std::size_t j = 0; j < q; ++j) bi[j] = id_of(b[j]);

  // The optimum is a running max of single values and pairwise gaps.
  std::vector<Rational> cand{Rational(0)};
  for (std::size_t u = 0; u < vals.size(); ++u) {
    cand.push_back(vals[u]);
    for (std::size_t v = u + 1; v < vals.size(); ++v) cand.push_back(vals[v] - vals[u]);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  std::size_t V = vals.size();
  auto feasible = [&](const Rational& theta) {
    std::vector<char> ok(V);
    for (std::size_t u = 0; u < V; ++u) ok[u] = vals[u] <= theta;
    Row B(q + 1);
    for (std::size_t j = 1; j <= q; ++j)
      if (ok[bi[j - 1]]) B.set(j);
    std::vector<Row> P(V, Row(q + 1));
    std::vector<char> used(V, 0);
    for (std::size_t i = 0; i < p; ++i) used[ai[i]] = 1;
    for (std::size_t u = 0; u < V; ++u) {
      if (!used[u]) continue;
      for (std::size_t j = 1; j <= q; ++j)
        if (abs(vals[u] - vals[bi[j - 1]]) <= theta) P[u].set(j);
    }
    Row R(q + 1), S(q + 1);
    std::vector<std::uint64_t> tmp(R.words().size());
    R.set(0);
    close_runs(R.words(), B.words(), tmp);
    for (std::size_t i = 0; i < p; ++i) {
      auto u = ai[i];
      shl1(R.words(), tmp);
      auto& s = S.words();
      const auto& r = R.words();
      const auto& pu = P[u].words();
      for (std::size_t w = 0; w < s.size(); ++w) s[w] = (ok[u] ? r[w] : 0) | (tmp[w] & pu[w]);
      close_runs(s, B.words(), tmp);
      std::swap(R, S);
    }
    return R.test(q);
  };

  std::size_t lo = 0, hi = cand.size() - 1;  // the largest candidate, max of all values, is always feasible
  while (lo < hi) {
    auto mid = (lo + hi) / 2;
    if (feasible(cand[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return cand[lo];
}

bool dist_equal(const PosVector& x, const PosVector& y) { return x.profile() == y.profile(); }

std::size_t positive_net_size(std::size_t l, std::size_t q) {
  std::size_t a = 1, b = 1;
  for (std::size_t i = 0; i < l; ++i) a *= q + 1, b *= q;
  return a - b;
}

std::vector<PosVector> positive_net(std::size_t l, std::size_t q, std::size_t budget) {
  if (l < 1 || q < 1) throw InvalidArgument("net needs l >= 1 and q >= 1");
  double approx = std::pow(static_cast<double>(q + 1), static_cast<double>(l));
  if (approx > static_cast<double>(budget)) throw BudgetExceeded("net size exceeds budget");
  std::vector<PosVector> out;
  std::vector<std::size_t> num(l, 0);
  while (true) {
    if (*std::max_element(num.begin(), num.end()) == q) {
      std::map<std::size_t, Rational> c;
      for (std::size_t i = 0; i < l; ++i)
        if (num[i]) c[i] = Rational(static_cast<long>(num[i]), static_cast<long>(q));
      out.emplace_back(std::move(c));
    }
    std::size_t i = l;
    while (i > 0 && num[i - 1] == q) num[--i] = 0;
    if (i == 0) break;
    ++num[i - 1];
  }
  return out;
}

std::vector<MountainComponent> mountains_decompose(std::size_t n, const Rational& r) {
  check_r(r);
  if (n < 1) throw InvalidArgument("mountains need n >= 1");
  std::vector<MountainComponent> out;
  std::size_t offset = 0;
  auto push = [&](int scale, int depth, bool center) {
    auto e = y_exponents(static_cast<std::size_t>(depth));
    for (auto& x : e) x += scale;
    out.push_back({offset, scale, depth, center, from_exponents(e, r, offset)});
    offset += e.size();
  };
  for (std::size_t j = 1; j <= n; ++j) push(static_cast<int>(j), static_cast<int>(n - j), false);
  push(0, 0, true);
  for (std::size_t j = n; j >= 1; --j) push(static_cast<int>(j), static_cast<int>(n - j), false);
  return out;
}

PosVector reassemble(const std::vector<MountainComponent>& parts) {
  PosVector out;
  for (const auto& c : parts) {
    for (const auto& [pos, v] : c.vec.coeffs())
      if (out.at(pos) != 0) throw OverlapError("mountain components overlap at " + std::to_string(pos));
    out = out + c.vec;
  }
  return out;
}

Rational oscillation_serial(const LipschitzFn& f, const std::vector<PosVector>& points) {
  if (points.empty()) throw InvalidArgument("oscillation over an empty set");
  Rational lo = f(points[0]), hi = lo;
  for (const auto& x : points) {
    auto v = f(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

Rational oscillation(const LipschitzFn& f, const std::vector<PosVector>& points) {
  if (points.empty()) throw InvalidArgument("oscillation over an empty set");
  std::vector<Rational> vals(points.size());
  const auto count = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) vals[i] = f(points[i]);
  auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  return *hi - *lo;
}

PosVector pre_diameter_witness(std::size_t s, std::size_t t, const Rational& r, const std::vector<int>& alpha) {
  check_r(r);
  std::size_t blocks = 1;
  for (std::size_t i = 0; i < t; ++i) blocks *= 3;
  if (alpha.size() != blocks) throw InvalidArgument("need 3^t exponents");
  if (*std::min_element(alpha.begin(), alpha.end()) != 0 ||
      std::any_of(alpha.begin(), alpha.end(), [](int a) { return a < 0; }))
    throw InvalidArgument("exponents must be non-negative with minimum 0");
  auto P = y_exponents(s * t);
  std::size_t L = P.size();
  int limit = static_cast<int>((s - 1) * t);

  // Constrained coordinates of z, in order.
  std::vector<std::size_t> pos;
  std::vector<int> exps;
  for (std::size_t l = 0; l < blocks; ++l)
    for (std::size_t i = 0; i < L; ++i)
      if (alpha[l] + P[i] <= limit) pos.push_back(l * L + i), exps.push_back(alpha[l] + P[i]);

  // reach[c][k]: constraint c can take profile entry k, with a consistent prefix.
  std::size_t Q = pos.size();
  auto allowed = [&](std::size_t c, std::size_t k) {
    return P[k] >= exps[c] && P[k] <= exps[c] + static_cast<int>(t);
  };
  std::vector<std::vector<int>> from(Q, std::vector<int>(L, -2));  // -2 unreachable, -1 start
  for (std::size_t k = 0; k < L; ++k)
    if (Q && k <= pos[0] && allowed(0, k)) from[0][k] = -1;
  for (std::size_t c = 1; c < Q; ++c) {
    std::size_t gap = pos[c] - pos[c - 1];
    for (std::size_t k = 1; k < L; ++k) {
      if (!allowed(c, k)) continue;
      std::size_t lo = k > gap ? k - gap : 0;
      for (std::size_t kp = lo; kp < k; ++kp)
        if (from[c - 1][kp] != -2) {
          from[c][k] = static_cast<int>(kp);
          break;
        }
    }
  }
  std::vector<std::size_t> match(Q);
  if (Q) {
    int last = -1;
    for (std::size_t k = 0; k < L; ++k)
      if (from[Q - 1][k] != -2) {
        last = static_cast<int>(k);
        break;
      }
    if (last < 0) throw SearchFailed("no pre-diameter witness exists for this combination");
    for (std::size_t c = Q; c-- > 0;) {
      match[c] = static_cast<std::size_t>(last);
      last = from[c][last];
    }
  }

  // Place the profile: matched entries at their coordinates, the rest packed in the gaps.
  std::vector<std::size_t> place(L);
  std::size_t first_k = Q ? match[0] : 0, first_pos = Q ? pos[0] : 0;
  for (std::size_t k = 0; k < first_k; ++k) place[k] = first_pos - (first_k - k);
  for (std::size_t c = 0; c < Q; ++c) {
    std::size_t end = c + 1 < Q ? match[c + 1] : L;
    for (std::size_t k = match[c]; k < end; ++k) place[k] = pos[c] + (k - match[c]);
  }
  std::vector<Rational> pw;
  for (int j = 0; j <= static_cast<int>(s * t); ++j) pw.push_back(rpow(r, j));
  std::map<std::size_t, Rational> c;
  for (std::size_t k = 0; k < L; ++k) c[place[k]] = pw[P[k]];
  PosVector w(std::move(c));
  if (!check_pre_diameter(s, t, r, alpha, w)) throw VerificationFailed("pre-diameter witness failed its check");
  return w;
}

bool check_pre_diameter(std::size_t s, std::size_t t, const Rational& r, const std::vector<int>& alpha,
                        const PosVector& witness) {
  auto y = build_y(s * t, r);
  if (!dist_equal(witness, y)) return false;
  std::size_t L = y.support_size();
  std::vector<Rational> pw;
  for (std::size_t j = 0; j <= (s + 1) * t + static_cast<std::size_t>(*std::max_element(alpha.begin(), alpha.end())); ++j)
    pw.push_back(rpow(r, static_cast<int>(j)));
  PosVector z;
  for (std::size_t l = 0; l < alpha.size(); ++l) z = z + y.shifted(l * L).scaled(pw[alpha[l]]);
  for (const auto& [i, v] : z.coeffs()) {
    for (std::size_t j = 0; j <= (s - 1) * t; ++j) {
      if (v != pw[j]) continue;
      auto w = witness.at(i);
      bool ok = false;
      for (std::size_t l = 0; l <= t; ++l) ok = ok || w == pw[j + l];
      if (!ok) return false;
    }
  }
  return true;
}

bool diameter_params_ok(const Rational& eps, std::size_t t, const Rational& r, std::size_t s) {
  if (t == 0) return true;
  Rational q = eps / 4;
  bool first = 1 - rpow(r, static_cast<int>(t)) < q;
  bool second = s >= 1 && rpow(r, static_cast<int>((s - 1) * t)) < q;
  return first && second;
}

DiameterSeq small_diameter_seq(const Rational& eps, std::size_t t, std::size_t budget) {
  if (eps <= 0 || eps >= 1) throw InvalidArgument("eps must lie in (0,1)");
  DiameterSeq out;
  out.t = t;
  if (t == 0) {
    out.r = Rational(1, 2);
    out.s = 1;
    out.n = 0;
    out.dimension = 1;
    out.blocks.push_back(PosVector::unit(0));
    return out;
  }
  Rational q = eps / 4;
  bool found = false;
  for (long den = 2; den <= 64; ++den)
    for (long num = 1; num < den; ++num) {
      Rational r(num, den);
      r.canonicalize();
      if (1 - rpow(r, static_cast<int>(t)) < q && (!found || r < out.r)) out.r = r, found = true;
    }
  if (!found) throw InsufficientWidth("no r with denominator <= 64 satisfies 1 - r^t < eps/4");
  std::size_t s = 1;
  while (!(rpow(out.r, static_cast<int>((s - 1) * t)) < q)) ++s;
  out.s = s;
  out.n = s * t;
  std::size_t dim = 1;
  for (std::size_t i = 0; i < (s + 1) * t; ++i) {
    dim *= 3;
    if (dim > budget) throw BudgetExceeded("ambient dimension 3^" + std::to_string((s + 1) * t) + " exceeds budget");
  }
  out.dimension = dim;
  auto y = build_y(out.n, out.r);
  std::size_t L = y.support_size(), m = dim / L;
  for (std::size_t i = 0; i < m; ++i) out.blocks.push_back(y.shifted(i * L));
  return out;
}

PosVector sample_sphere_point(const std::vector<PosVector>& blocks, std::mt19937_64& rng, std::size_t den) {
  if (blocks.empty()) throw InvalidArgument("no blocks to sample from");
  std::uniform_int_distribution<std::size_t> num(0, den), pick(0, blocks.size() - 1);
  std::vector<std::size_t> a(blocks.size());
  for (auto& x : a) x = num(rng);
  a[pick(rng)] = den;
  PosVector out;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (a[i]) out = out + blocks[i].scaled(Rational(static_cast<long>(a[i]), static_cast<long>(den)));
  return out;
}

}  // namespace fink
