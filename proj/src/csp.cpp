#include "fink/csp.hpp"

#include <algorithm>
#include <atomic>
#include <limits>

#include <omp.h>

#include "fink/errors.hpp"

namespace fink {

namespace {

struct Compiled {
  std::size_t vars = 0;
  int colors = 1;
  bool unavoidable = false;  // some constraint is hit by every coloring
  std::vector<Constraint> cons;
  std::vector<std::vector<std::uint32_t>> trigger;  // constraints whose last variable is v
};

Compiled compile(const AvoidanceProblem& p) {
  Compiled c;
  c.vars = p.variables;
  c.colors = p.colors;
  c.trigger.resize(p.variables);
  std::vector<Constraint> norm;
  for (const auto& con : p.constraints) {
    Constraint n;
    for (auto g : con.groups) {
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
      for (auto v : g)
        if (v >= p.variables) throw InvalidArgument("constraint variable out of range");
      if (g.size() > 1) n.groups.push_back(std::move(g));
    }
    if (n.groups.empty()) {
      c.unavoidable = true;
      continue;
    }
    std::sort(n.groups.begin(), n.groups.end());
    norm.push_back(std::move(n));
  }
  std::sort(norm.begin(), norm.end(), [](const Constraint& a, const Constraint& b) { return a.groups < b.groups; });
  norm.erase(std::unique(norm.begin(), norm.end(),
                         [](const Constraint& a, const Constraint& b) { return a.groups == b.groups; }),
             norm.end());
  c.cons = std::move(norm);
  for (std::uint32_t id = 0; id < c.cons.size(); ++id) {
    std::uint32_t last = 0;
    for (const auto& g : c.cons[id].groups) last = std::max(last, g.back());
    c.trigger[last].push_back(id);
  }
  return c;
}

bool consistent_at(const Compiled& c, std::size_t v, const std::vector<int>& col) {
  for (auto id : c.trigger[v])
    if (hits(c.cons[id], col)) return false;
  return true;
}

class NodeCounter {
 public:
  NodeCounter(std::atomic<std::uint64_t>& shared, std::uint64_t budget) : shared_(shared), budget_(budget) {}
  ~NodeCounter() { flush(); }
  /// False once the shared budget is exhausted.
  bool tick() {
    if (++local_ < 1024) return true;
    return flush();
  }
  bool flush() {
    auto total = shared_.fetch_add(local_) + local_;
    local_ = 0;
    return total <= budget_;
  }

 private:
  std::atomic<std::uint64_t>& shared_;
  std::uint64_t budget_;
  std::uint64_t local_ = 0;
};

enum class Outcome { Found, Exhausted, OutOfBudget };

// Extends col[0..start) (already consistent) to a full avoiding coloring.
Outcome extend(const Compiled& c, std::vector<int>& col, std::size_t start, NodeCounter& counter) {
  std::size_t n = c.vars;
  if (start == n) return Outcome::Found;
  std::vector<int> max_used(n + 1, -1);
  for (std::size_t i = 0; i < start; ++i) max_used[i + 1] = std::max(max_used[i], col[i]);
  std::size_t v = start;
  col[v] = -1;
  while (true) {
    int limit = std::min(c.colors - 1, max_used[v] + 1);
    if (++col[v] > limit) {
      col[v] = -1;
      if (v == start) return Outcome::Exhausted;
      --v;
      continue;
    }
    if (!counter.tick()) return Outcome::OutOfBudget;
    if (!consistent_at(c, v, col)) continue;
    max_used[v + 1] = std::max(max_used[v], col[v]);
    if (++v == n) return Outcome::Found;
    col[v] = -1;
  }
}

}  // namespace

bool hits(const Constraint& c, std::span<const int> coloring) {
  for (const auto& g : c.groups) {
    int first = coloring[g.front()];
    if (first < 0) return false;
    for (auto v : g)
      if (coloring[v] != first) return false;
  }
  return true;
}

AvoidanceResult avoid_serial(const AvoidanceProblem& p, std::uint64_t node_budget) {
  auto c = compile(p);
  AvoidanceResult out;
  if (c.unavoidable) return out;
  std::atomic<std::uint64_t> nodes{0};
  std::vector<int> col(c.vars, -1);
  Outcome o;
  {
    NodeCounter counter(nodes, node_budget);
    o = extend(c, col, 0, counter);
  }
  out.nodes = nodes.load();
  if (o == Outcome::OutOfBudget) throw BudgetExceeded("coloring search exceeded node budget");
  if (o == Outcome::Found) out.coloring = std::move(col);
  return out;
}

AvoidanceResult avoid_parallel(const AvoidanceProblem& p, std::uint64_t node_budget, int workers) {
  auto c = compile(p);
  AvoidanceResult out;
  if (c.unavoidable) return out;
  if (workers < 1) workers = 1;

  // Consistent prefixes in DFS order, deep enough to feed the pool.
  std::vector<std::vector<int>> prefixes{{}};
  std::size_t depth = 0;
  std::uint64_t prefix_nodes = 0;
  while (depth < c.vars && prefixes.size() < static_cast<std::size_t>(64 * workers)) {
    std::vector<std::vector<int>> next;
    for (const auto& pre : prefixes) {
      int used = -1;
      for (int x : pre) used = std::max(used, x);
      std::vector<int> col(c.vars, -1);
      std::copy(pre.begin(), pre.end(), col.begin());
      for (int x = 0; x <= std::min(c.colors - 1, used + 1); ++x) {
        col[depth] = x;
        ++prefix_nodes;
        if (!consistent_at(c, depth, col)) continue;
        auto ext = pre;
        ext.push_back(x);
        next.push_back(std::move(ext));
      }
    }
    prefixes = std::move(next);
    ++depth;
    if (prefixes.empty()) break;
  }
  if (prefix_nodes > node_budget) throw BudgetExceeded("coloring search exceeded node budget");

  std::atomic<std::uint64_t> nodes{prefix_nodes};
  std::atomic<std::int64_t> best{std::numeric_limits<std::int64_t>::max()};
  std::atomic<std::int64_t> first_out_of_budget{std::numeric_limits<std::int64_t>::max()};
  std::vector<std::vector<int>> found(prefixes.size());
  const auto count = static_cast<std::int64_t>(prefixes.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::int64_t i = 0; i < count; ++i) {
    if (i > best.load() || i > first_out_of_budget.load()) continue;
    std::vector<int> col(c.vars, -1);
    std::copy(prefixes[i].begin(), prefixes[i].end(), col.begin());
    NodeCounter counter(nodes, node_budget);
    auto o = extend(c, col, prefixes[i].size(), counter);
    if (o == Outcome::OutOfBudget) {
      auto cur = first_out_of_budget.load();
      while (i < cur && !first_out_of_budget.compare_exchange_weak(cur, i)) {
      }
    } else if (o == Outcome::Found) {
      found[i] = std::move(col);
      auto cur = best.load();
      while (i < cur && !best.compare_exchange_weak(cur, i)) {
      }
    }
  }
  out.nodes = nodes.load();
  // Undecided only if a prefix before the winner ran out of budget.
  if (first_out_of_budget.load() < best.load()) throw BudgetExceeded("coloring search exceeded node budget");
  if (best.load() < count) out.coloring = std::move(found[best.load()]);
  return out;
}

}  // namespace fink
