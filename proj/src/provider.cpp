#include "fink/provider.hpp"

#include <charconv>

#include "fink/catalog.hpp"
#include "fink/errors.hpp"

namespace fink {

namespace {

std::string params_text(const std::map<std::string, long>& params) {
  std::string s;
  for (const auto& [k, v] : params) {
    if (!s.empty()) s += ",";
    s += k + "=" + std::to_string(v);
  }
  return s;
}

WidthAnswer oracle(const std::string& call, const std::function<std::size_t()>& run) {
  try {
    return {run(), call};
  } catch (const BudgetExceeded&) {
    return {std::nullopt, call + " (node budget exceeded)"};
  }
}

std::size_t parse_size(std::string_view s) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw InvalidArgument("bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

NumberProvider::NumberProvider(Mode mode, SearchOptions opts, std::size_t digits)
    : mode_(mode), opts_(opts), digits_(digits), cache_(std::make_shared<std::map<std::string, WidthAnswer>>()) {}

NumberProvider NumberProvider::paper(std::size_t digit_budget) { return {Mode::PaperBound, {}, digit_budget}; }
NumberProvider NumberProvider::exact(SearchOptions opts) { return {Mode::ExactSearch, opts, 0}; }
NumberProvider NumberProvider::adaptive(SearchOptions opts) { return {Mode::Adaptive, opts, 0}; }

NumberProvider NumberProvider::parse(std::string_view text) {
  auto colon = text.find(':');
  auto name = text.substr(0, colon);
  auto arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (name == "paper") return paper(arg.empty() ? 100000 : parse_size(arg));
  if (name == "exact") {
    SearchOptions o;
    if (!arg.empty()) o.node_budget = parse_size(arg);
    return exact(o);
  }
  if (name == "adaptive" && arg.empty()) return adaptive();
  throw InvalidArgument("provider must be paper[:digits], exact[:nodes] or adaptive");
}

std::string NumberProvider::describe() const {
  switch (mode_) {
    case Mode::PaperBound: return "paper:" + std::to_string(digits_);
    case Mode::ExactSearch: return "exact:" + std::to_string(opts_.node_budget);
    case Mode::Adaptive: return "adaptive";
  }
  return "?";
}

WidthAnswer NumberProvider::cached(const std::string& key, const std::function<WidthAnswer()>& compute) const {
  auto it = cache_->find(key);
  if (it != cache_->end()) return it->second;
  auto a = compute();
  (*cache_)[key] = a;
  return a;
}

WidthAnswer NumberProvider::from_formula(const std::string& name, const std::map<std::string, long>& params,
                                         int r) const {
  Params p;
  for (const auto& [k, v] : params) p[k] = v;
  auto e = catalog_expr(name, p);
  std::string plan = e.render() + " (" + name + " at " + params_text(params) + ")";
  if (r != 2) return {std::nullopt, plan + ": the bound is stated for 2 colors only"};
  auto v = eval(e, Env{}, digits_);
  if (!v) return {std::nullopt, plan + ": beyond " + std::to_string(digits_) + " digits"};
  if (!v->fits_ulong_p()) return {std::nullopt, plan + ": " + std::to_string(decimal_digits(*v)) + " digits"};
  return {static_cast<std::size_t>(v->get_ui()), plan};
}

WidthAnswer NumberProvider::ramsey(std::size_t i, std::size_t m, int r) const {
  if (m <= i) return {m, "trivial: no i-subsets to color"};
  if (i == 1) return {static_cast<std::size_t>(r) * (m - 1) + 1, "pigeonhole r(m-1)+1"};
  auto key = "ramsey/" + std::to_string(i) + "/" + std::to_string(m) + "/" + std::to_string(r);
  return cached(key, [&]() -> WidthAnswer {
    switch (mode_) {
      case Mode::PaperBound:
        return from_formula("RamseyBound", {{"d", static_cast<long>(i)}, {"m", static_cast<long>(m)}}, r);
      case Mode::ExactSearch:
        return oracle("exact_ramsey(" + std::to_string(i) + "," + std::to_string(m) + "," + std::to_string(r) + ")",
                      [&] { return exact_ramsey(i, m, r, opts_).value; });
      case Mode::Adaptive: break;
    }
    return {std::nullopt, "adaptive"};
  });
}

WidthAnswer NumberProvider::vdw(std::size_t m, int r) const {
  if (m <= 1) return {m, "trivial"};
  if (r == 1) return {m, "one color"};
  auto key = "vdw/" + std::to_string(m) + "/" + std::to_string(r);
  return cached(key, [&]() -> WidthAnswer {
    switch (mode_) {
      case Mode::PaperBound: return from_formula("VdWBound", {{"m", static_cast<long>(m)}}, r);
      case Mode::ExactSearch:
        return oracle("exact_vdw(" + std::to_string(m) + "," + std::to_string(r) + ")",
                      [&] { return exact_vdw(m, r, opts_).value; });
      case Mode::Adaptive: break;
    }
    return {std::nullopt, "adaptive"};
  });
}

WidthAnswer NumberProvider::min_determined(std::size_t m, int r) const {
  if (m <= 1) return {m, "trivial"};
  auto key = "mindet/" + std::to_string(m) + "/" + std::to_string(r);
  return cached(key, [&]() -> WidthAnswer {
    switch (mode_) {
      case Mode::PaperBound: return from_formula("N_bound", {{"m", static_cast<long>(m)}}, r);
      case Mode::ExactSearch:
        return oracle("exact_min_determined(" + std::to_string(m) + "," + std::to_string(r) + ")",
                      [&] { return exact_min_determined(m, r, opts_).value; });
      case Mode::Adaptive: break;
    }
    return {std::nullopt, "adaptive"};
  });
}

WidthAnswer NumberProvider::g(int k, std::size_t d, std::size_t m, int r) const {
  auto key = "g/" + std::to_string(k) + "/" + std::to_string(d) + "/" + std::to_string(m) + "/" + std::to_string(r);
  return cached(key, [&]() -> WidthAnswer {
    switch (mode_) {
      case Mode::PaperBound: {
        std::map<std::string, long> p{{"m", static_cast<long>(m)}};
        if (k == 1 && d == 1) return from_formula("g11", p, r);
        if (k == 1) return from_formula("g1d", {{"m", static_cast<long>(m)}, {"d", static_cast<long>(d)}}, r);
        p["k"] = k;
        if (d == 1) return from_formula("gk1", p, r);
        p["d"] = static_cast<long>(d);
        return from_formula("gkd", p, r);
      }
      case Mode::ExactSearch:
        return oracle("exact_g(" + std::to_string(k) + "," + std::to_string(d) + "," + std::to_string(m) + "," +
                          std::to_string(r) + ")",
                      [&] { return exact_g(k, d, m, r, opts_).value; });
      case Mode::Adaptive: break;
    }
    return {std::nullopt, "adaptive"};
  });
}

WidthAnswer NumberProvider::bar_n(int k, std::size_t N, int r) const {
  switch (mode_) {
    case Mode::PaperBound:
      if (k == 2) return from_formula("barN2", {{"N", static_cast<long>(N)}}, r);
      return {std::nullopt, "g(" + std::to_string(k - 1) + ",2(N-1)+3)∘...∘g(" + std::to_string(k - 1) +
                                ",3)(N) at N=" + std::to_string(N) + ": beyond any digit budget"};
    case Mode::ExactSearch: return {std::nullopt, "no exhaustive oracle for the supp_top width"};
    case Mode::Adaptive: break;
  }
  return {std::nullopt, "adaptive"};
}

}  // namespace fink
