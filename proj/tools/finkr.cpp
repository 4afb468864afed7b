// finkr: command-line front end for the fink library.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fink/catalog.hpp"
#include "fink/errors.hpp"
#include "fink/extract.hpp"
#include "fink/growth.hpp"
#include "fink/recursion.hpp"
#include "fink/report.hpp"
#include "fink/search.hpp"
#include "fink/span.hpp"
#include "fink/stab.hpp"

using nlohmann::json;
using namespace fink;

namespace {

constexpr int kExitOk = 0, kExitUsage = 1, kExitBudget = 2, kExitWidth = 3, kExitInternal = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json sequence_json(const BlockSequence& s) {
  auto out = json::array();
  std::size_t w = std::max<std::size_t>(s.width(), 1);
  for (const auto& f : s) out.push_back(format_element(f, w));
  return out;
}

std::size_t to_size(const std::string& text, const char* what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || text[0] == '-')
    throw InvalidArgument(std::string("expected a non-negative integer for ") + what + ", got '" + text + "'");
  return static_cast<std::size_t>(v);
}

// Result of one command: `result` is deterministic and digested, `stats` is not.
struct Outcome {
  json result;
  json stats = json::object();
  std::string summary;
};

struct Common {
  std::string json_path;
  std::string manifest_path;
  int workers = 1;
  std::uint64_t nodes = 200'000'000;
  std::size_t digits = 100000;
  bool serial = false;

  SearchOptions options() const {
    SearchOptions o;
    o.node_budget = nodes;
    o.workers = workers;
    o.parallel = !serial;
    return o;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--json", c.json_path, "write the JSON report here (default: stdout)");
  sub->add_option("--manifest", c.manifest_path, "write a replayable run manifest here");
  sub->add_option("--workers", c.workers, "search threads")->check(CLI::PositiveNumber);
  sub->add_option("--nodes", c.nodes, "search node budget");
  sub->add_option("--digit-budget", c.digits, "decimal digit budget for bound evaluation");
  sub->add_flag("--serial", c.serial, "use the serial reference kernels");
}

// Positional values first, named flags as fallback.
struct Slots {
  std::vector<std::string> pos;
  std::map<std::string, std::string> named;
  std::size_t get(std::size_t index, const std::string& name) const {
    auto it = named.find(name);
    if (it != named.end() && !it->second.empty()) return to_size(it->second, name.c_str());
    if (index < pos.size()) return to_size(pos[index], name.c_str());
    throw InvalidArgument("missing value for " + name);
  }
};

json certificate_result(const NumberCertificate& cert, bool lower_verified) {
  json j = to_json(cert);
  j.erase("stats");
  j["lower_verified"] = lower_verified;
  return j;
}

Outcome search_number(const std::string& what, const Slots& s, const Common& c) {
  auto opts = c.options();
  NumberCertificate cert;
  bool lower_ok = true;
  if (what == "vdw") {
    std::size_t m = s.get(0, "len");
    int r = static_cast<int>(s.get(1, "colors"));
    cert = exact_vdw(m, r, opts);
    if (cert.lower_witness) lower_ok = !has_monochromatic_progression(*cert.lower_witness, m);
  } else if (what == "ramsey") {
    std::size_t i = s.get(0, "i"), m = s.get(1, "m");
    int r = static_cast<int>(s.get(2, "colors"));
    cert = exact_ramsey(i, m, r, opts);
    if (cert.lower_witness) lower_ok = !has_monochromatic_clique(*cert.lower_witness, m);
  } else if (what == "g") {
    int k = static_cast<int>(s.get(0, "k"));
    std::size_t d = s.get(1, "d"), m = s.get(2, "m");
    int r = static_cast<int>(s.get(3, "colors"));
    cert = exact_g(k, d, m, r, opts);
    if (cert.lower_witness) lower_ok = !find_witness(*cert.lower_witness, m, opts);
  } else if (what == "mindet") {
    std::size_t m = s.get(0, "m");
    int r = static_cast<int>(s.get(1, "colors"));
    cert = exact_min_determined(m, r, opts);
    if (cert.lower_witness) lower_ok = !find_min_determined(*cert.lower_witness, m, opts);
  } else {
    throw InvalidArgument("unknown quantity '" + what + "'");
  }
  if (!lower_ok) throw VerificationFailed("lower-bound coloring has a witness");
  Outcome o;
  o.result = certificate_result(cert, lower_ok);
  o.stats = {{"nodes", cert.stats.nodes}, {"wall_seconds", cert.stats.wall_seconds}};
  o.summary = cert.quantity + " = " + std::to_string(cert.value) +
              (cert.lower_witness ? " (bad coloring at " + std::to_string(cert.value - 1) + " verified)" : "");
  return o;
}

std::map<std::string, Rational> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, Rational> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      auto eq = part.find('=');
      if (eq == std::string::npos) throw InvalidArgument("expected name=value, got '" + part + "'");
      out[part.substr(0, eq)] = parse_rational(part.substr(eq + 1));
    }
  }
  return out;
}

std::string value_text(const std::optional<BigNat>& v) {
  if (!v) return "overflow";
  return v->get_str();
}

NumberProvider provider_from(const std::string& text, const Common& c) {
  auto p = NumberProvider::parse(text);
  if (p.mode() == NumberProvider::Mode::PaperBound && text.find(':') == std::string::npos)
    return NumberProvider::paper(c.digits);
  auto opts = c.options();
  if (p.mode() == NumberProvider::Mode::ExactSearch) {
    if (text.find(':') != std::string::npos) opts.node_budget = p.search_options().node_budget;
    return NumberProvider::exact(opts);
  }
  if (p.mode() == NumberProvider::Mode::Adaptive) return NumberProvider::adaptive(opts);
  return p;
}

json extraction_json(const Extraction& e) {
  json j = {{"witness", sequence_json(e.witness)}, {"verified", e.verified}, {"trace", to_json(e.trace)}};
  if (e.color) j["color"] = *e.color;
  return j;
}

json vector_json(const PosVector& v) {
  json j = json::object();
  for (const auto& [pos, c] : v.coeffs()) j[std::to_string(pos)] = c.get_str();
  return j;
}

}  // namespace

int run(int argc, char** argv, json* result_out = nullptr);

int main(int argc, char** argv) { return run(argc, argv); }

int run(int argc, char** argv, json* result_out) {
  CLI::App app{"finkr: FIN_k Ramsey engine, bound calculus and stabilization lab"};
  app.require_subcommand(1);
  Common common;
  std::function<Outcome()> handler;
  std::string command;

  // enum
  auto* en = app.add_subcommand("enum", "list FIN_k(n)");
  std::size_t en_n = 3;
  int en_k = 1;
  bool en_count = false;
  en->add_option("--n", en_n, "width")->required();
  en->add_option("--k", en_k, "level")->check(CLI::PositiveNumber);
  en->add_flag("--count", en_count, "only report the cardinality");
  add_common(en, common);
  en->callback([&] {
    command = "enum";
    handler = [&] {
      Outcome o;
      auto count = fink_cardinality(en_n, en_k);
      o.result = {{"n", en_n}, {"k", en_k}, {"count", count}};
      if (!en_count) {
        auto list = json::array();
        for (const auto& f : enumerate_fink(en_n, en_k)) list.push_back(format_element(f, en_n));
        o.result["elements"] = list;
      }
      o.summary = "|FIN_" + std::to_string(en_k) + "(" + std::to_string(en_n) + ")| = " + std::to_string(count);
      return o;
    };
  });

  // span
  auto* sp = app.add_subcommand("span", "span of a block sequence file");
  std::string sp_gens;
  std::size_t sp_budget = 1u << 20;
  sp->add_option("--gens", sp_gens, "block sequence file, one k:n:digits per line")->required();
  sp->add_option("--budget", sp_budget, "recipe budget");
  add_common(sp, common);
  sp->callback([&] {
    command = "span";
    handler = [&] {
      auto gens = parse_sequence(slurp(sp_gens));
      auto s = span(gens, sp_budget);
      Outcome o;
      auto recipes = json::array();
      std::size_t w = std::max<std::size_t>(gens.width(), 1);
      for (const auto& r : s.recipes()) {
        auto terms = json::array();
        for (const auto& t : r.recipe) terms.push_back({t.index, t.exponent});
        recipes.push_back({{"element", format_element(r.element, w)}, {"recipe", terms}, {"supp_top", supp_top(r)}});
      }
      o.result = {{"generators", sequence_json(gens)}, {"size", s.size()}, {"recipes", recipes}};
      o.summary = "span has " + std::to_string(s.size()) + " elements from " + std::to_string(s.recipes().size()) +
                  " recipes";
      return o;
    };
  });

  // search
  auto* se = app.add_subcommand("search", "exact numbers and witnesses");
  std::string se_what;
  Slots se_slots;
  std::string se_coloring;
  std::size_t se_m = 0;
  se->add_option("quantity", se_what, "vdw | ramsey | g | mindet | witness | bad")->required();
  se->add_option("values", se_slots.pos, "positional parameters, e.g. `vdw 3 2`");
  for (const char* name : {"len", "colors", "i", "m", "k", "d", "n"})
    se->add_option(std::string("--") + name, se_slots.named[name]);
  se->add_option("--coloring", se_coloring, "coloring file (witness)");
  add_common(se, common);
  se->callback([&] {
    command = "search";
    handler = [&] {
      if (se_what == "witness") {
        auto c = ColoringSpec::parse(slurp(se_coloring));
        se_m = se_slots.get(0, "m");
        auto w = find_witness(c, se_m, common.options());
        Outcome o;
        o.result = {{"m", se_m}, {"found", w.has_value()}};
        if (w) {
          o.result["witness"] = sequence_json(w->witness);
          o.result["color"] = w->color;
          o.result["verified"] = w->verified;
          o.stats = {{"nodes", w->stats.nodes}, {"wall_seconds", w->stats.wall_seconds}};
        }
        o.summary = w ? "witness found, color " + std::to_string(w->color) : "no witness";
        return o;
      }
      if (se_what == "bad") {
        int k = static_cast<int>(se_slots.get(0, "k"));
        std::size_t n = se_slots.get(1, "n"), m = se_slots.get(2, "m");
        int r = static_cast<int>(se_slots.get(3, "colors"));
        std::size_t d = se_slots.named["d"].empty() ? 1 : to_size(se_slots.named["d"], "d");
        auto bad = find_bad_coloring(k, n, m, r, common.options(), d);
        Outcome o;
        o.result = {{"found", bad.has_value()}};
        if (bad) o.result["coloring"] = bad->serialize();
        o.summary = bad ? "bad coloring found" : "every coloring has a witness";
        return o;
      }
      return search_number(se_what, se_slots, common);
    };
  });

  // extract
  auto* ex = app.add_subcommand("extract", "witness extraction following the proofs");
  std::string ex_step, ex_coloring, ex_provider = "exact";
  std::size_t ex_m = 1;
  ex->add_option("--step", ex_step, "mindet | folkman | code | stepup | raisedim")->required();
  ex->add_option("--coloring", ex_coloring, "coloring file")->required();
  ex->add_option("--m", ex_m, "target length (N for code)")->required();
  ex->add_option("--provider", ex_provider, "paper[:digits] | exact[:nodes] | adaptive");
  add_common(ex, common);
  ex->callback([&] {
    command = "extract";
    handler = [&] {
      auto c = ColoringSpec::parse(slurp(ex_coloring));
      auto p = provider_from(ex_provider, common);
      Extraction e;
      if (ex_step == "mindet")
        e = min_determined_extract(c, ex_m, p);
      else if (ex_step == "folkman")
        e = folkman_extract(c, ex_m, p);
      else if (ex_step == "code")
        e = code_extract(c, ex_m, p);
      else if (ex_step == "stepup")
        e = step_up_extract(c, ex_m, p);
      else if (ex_step == "raisedim")
        e = raise_dimension_extract(c, ex_m, p);
      else
        throw InvalidArgument("unknown step '" + ex_step + "'");
      Outcome o;
      o.result = extraction_json(e);
      o.result["step"] = ex_step;
      o.result["provider"] = p.describe();
      o.summary = ex_step + ": " + std::to_string(e.witness.size()) + " blocks, verified";
      return o;
    };
  });

  // bounds
  auto* bo = app.add_subcommand("bounds", "upper-bound calculus");
  bo->require_subcommand(1);
  std::string bo_name, bo_other;
  std::vector<std::string> bo_params;
  std::map<std::string, std::string> bo_direct;
  std::vector<std::string> bo_points;
  std::string bo_x;
  auto bounds_params = [&] {
    auto p = parse_params(bo_params);
    for (const auto& [k, v] : bo_direct)
      if (!v.empty()) p[k] = parse_rational(v);
    return p;
  };
  auto add_bound_opts = [&](CLI::App* s) {
    s->add_option("--params", bo_params, "name=value[,name=value...]");
    for (const char* name : {"m", "d", "k", "l", "N", "t", "C", "eps", "c", "p"})
      s->add_option(std::string("--") + name, bo_direct[name]);
    add_common(s, common);
  };
  auto* bo_eval = bo->add_subcommand("eval", "evaluate a catalog bound");
  bo_eval->add_option("--name", bo_name)->required();
  bo_eval->add_option("--x", bo_x, "value for a single free variable");
  add_bound_opts(bo_eval);
  bo_eval->callback([&] {
    command = "bounds eval";
    handler = [&] {
      auto e = catalog_expr(bo_name, bounds_params());
      std::optional<BigNat> v;
      if (!bo_x.empty())
        v = eval(e, BigNat(bo_x, 10), common.digits);
      else if (!e.variables().empty())
        throw InvalidArgument("unbound variables in " + e.render() + "; pass them with --params");
      else
        v = eval(e, Env{}, common.digits);
      Outcome o;
      o.result = {{"name", bo_name}, {"expression", e.render()}, {"digit_budget", common.digits}};
      if (v) {
        o.result["digits"] = decimal_digits(*v);
        o.result["value"] = decimal_digits(*v) <= 2000 ? v->get_str() : std::string("(") + std::to_string(decimal_digits(*v)) + " digits)";
        o.summary = e.render() + " = " + (decimal_digits(*v) <= 60 ? v->get_str() : std::to_string(decimal_digits(*v)) + " digits");
      } else {
        o.result["overflow"] = true;
        o.summary = e.render() + " exceeds " + std::to_string(common.digits) + " digits";
        throw BudgetExceeded(o.summary);
      }
      return o;
    };
  });
  auto* bo_render = bo->add_subcommand("render", "render a catalog bound, or the summary table");
  bo_render->add_option("--name", bo_name, "catalog name, or `table`")->required();
  add_bound_opts(bo_render);
  bo_render->callback([&] {
    command = "bounds render";
    handler = [&] {
      Outcome o;
      if (bo_name == "table") {
        auto t = render_summary_table();
        o.result = {{"table", t}};
        o.summary = t;
        return o;
      }
      auto e = catalog_expr(bo_name, bounds_params());
      o.result = {{"name", bo_name}, {"expression", e.render()}};
      o.summary = e.render();
      return o;
    };
  });
  auto* bo_cmp = bo->add_subcommand("compare", "compare two catalog bounds at points");
  bo_cmp->add_option("--name", bo_name)->required();
  bo_cmp->add_option("--other", bo_other)->required();
  bo_cmp->add_option("--points", bo_points, "values of the free variable")->required();
  add_bound_opts(bo_cmp);
  bo_cmp->callback([&] {
    command = "bounds compare";
    handler = [&] {
      auto p = bounds_params();
      auto a = catalog_expr(bo_name, p), b = catalog_expr(bo_other, p);
      std::vector<BigNat> pts;
      for (const auto& s : bo_points) pts.emplace_back(s, 10);
      auto ord = compare_at(a, b, pts, common.digits);
      Outcome o;
      auto rows = json::array();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        rows.push_back({{"x", pts[i].get_str()}, {"order", to_string(ord[i])}});
        o.summary += pts[i].get_str() + ": " + to_string(ord[i]) + (i + 1 < pts.size() ? "\n" : "");
      }
      o.result = {{"lhs", a.render()}, {"rhs", b.render()}, {"points", rows}};
      return o;
    };
  });
  auto* bo_ver = bo->add_subcommand("verify", "check a recursion chain at sample points");
  bo_ver->add_option("--name", bo_name, "chain name")->required();
  add_common(bo_ver, common);
  bo_ver->callback([&] {
    command = "bounds verify";
    handler = [&] {
      auto rep = verify_recursion(bo_name, {}, common.digits);
      Outcome o;
      o.result = to_json(rep);
      for (const auto& l : rep.links) o.summary += l.lhs + " <= " + l.rhs + ": " + to_string(l.status) + "\n";
      if (!o.summary.empty()) o.summary.pop_back();
      return o;
    };
  });
  auto* bo_list = bo->add_subcommand("list", "catalog names");
  add_common(bo_list, common);
  bo_list->callback([&] {
    command = "bounds list";
    handler = [&] {
      Outcome o;
      o.result = json::array();
      for (const auto& e : bound_catalog()) {
        o.result.push_back({{"name", e.name}, {"params", e.params}, {"description", e.description}});
        o.summary += e.name + ": " + e.description + "\n";
      }
      o.summary.pop_back();
      return o;
    };
  });

  // stab
  auto* st = app.add_subcommand("stab", "stabilization lab");
  st->require_subcommand(1);
  std::size_t st_n = 1, st_l = 1, st_q = 1, st_t = 1, st_m = 2, st_d = 4, st_ambient = 27, st_samples = 0;
  std::string st_r = "1/2", st_x, st_y, st_f, st_C, st_eps, st_mode = "empirical", st_provider = "adaptive";
  std::uint64_t st_seed = 1;
  auto* st_yc = st->add_subcommand("y", "the vector y_r^(n)");
  st_yc->add_option("--n", st_n)->required();
  st_yc->add_option("--r", st_r, "rational in (0,1)");
  add_common(st_yc, common);
  st_yc->callback([&] {
    command = "stab y";
    handler = [&] {
      auto y = build_y(st_n, parse_rational(st_r));
      Outcome o;
      o.result = {{"n", st_n}, {"r", parse_rational(st_r).get_str()}, {"support", y.support_size()}, {"vector", vector_json(y)}};
      o.summary = format_vector(y);
      o.summary.pop_back();
      return o;
    };
  });
  auto* st_dis = st->add_subcommand("dis", "distribution distance of two vector files");
  st_dis->add_option("--x", st_x)->required();
  st_dis->add_option("--y", st_y)->required();
  add_common(st_dis, common);
  st_dis->callback([&] {
    command = "stab dis";
    handler = [&] {
      auto x = parse_vector(slurp(st_x)), y = parse_vector(slurp(st_y));
      auto v = dis(x, y);
      Outcome o;
      o.result = {{"dis", v.get_str()}, {"same_distribution", dist_equal(x, y)}};
      o.summary = "dis = " + v.get_str();
      return o;
    };
  });
  auto* st_net = st->add_subcommand("net", "positive net of span(e_0..e_{l-1})");
  st_net->add_option("--l", st_l)->required();
  st_net->add_option("--q", st_q)->required();
  add_common(st_net, common);
  st_net->callback([&] {
    command = "stab net";
    handler = [&] {
      auto net = positive_net(st_l, st_q);
      Outcome o;
      auto pts = json::array();
      for (const auto& v : net) pts.push_back(vector_json(v));
      std::size_t stated = 1;
      for (std::size_t i = 1; i < st_l; ++i) stated *= st_q;
      o.result = {{"l", st_l}, {"q", st_q}, {"size", net.size()}, {"stated_size", stated}, {"points", pts}};
      o.summary = std::to_string(net.size()) + " points (stated cardinality q^(l-1) = " + std::to_string(stated) + ")";
      return o;
    };
  });
  auto* st_sp = st->add_subcommand("spread", "almost-spreading set extraction");
  st_sp->add_option("--f", st_f, "function, e.g. proj:0, sup, dist:0=1, avg:0=1/2,1=1/2")->required();
  st_sp->add_option("--C", st_C)->required();
  st_sp->add_option("--eps", st_eps)->required();
  st_sp->add_option("--m", st_m)->required();
  st_sp->add_option("--d", st_d, "ambient dimension")->required();
  st_sp->add_option("--provider", st_provider);
  add_common(st_sp, common);
  st_sp->callback([&] {
    command = "stab spread";
    handler = [&] {
      auto f = LipschitzFn::parse(st_f);
      auto res = spreading_extract(f, st_d, st_m, parse_rational(st_C), parse_rational(st_eps),
                                   provider_from(st_provider, common));
      Outcome o;
      o.result = {{"set", res.set}, {"colors", res.colors}, {"colorings", res.colorings}, {"plan", res.plan},
                  {"verified", res.verified}};
      std::string set;
      for (auto i : res.set) set += (set.empty() ? "" : ",") + std::to_string(i);
      o.summary = "A = {" + set + "}, verified";
      return o;
    };
  });
  auto* st_dia = st->add_subcommand("diameter", "small-diameter block sequence");
  st_dia->add_option("--eps", st_eps)->required();
  st_dia->add_option("--t", st_t)->required();
  st_dia->add_option("--samples", st_samples, "random sphere pairs to measure");
  st_dia->add_option("--seed", st_seed);
  add_common(st_dia, common);
  st_dia->callback([&] {
    command = "stab diameter";
    handler = [&] {
      auto eps = parse_rational(st_eps);
      auto seq = small_diameter_seq(eps, st_t);
      Outcome o;
      o.result = {{"r", seq.r.get_str()}, {"s", seq.s}, {"t", seq.t}, {"n", seq.n}, {"dimension", seq.dimension},
                  {"blocks", seq.blocks.size()}, {"params_ok", diameter_params_ok(eps, st_t, seq.r, seq.s)}};
      o.summary = "r = " + seq.r.get_str() + ", s = " + std::to_string(seq.s) + ", dimension " +
                  std::to_string(seq.dimension);
      if (st_samples) {
        std::mt19937_64 rng(st_seed);
        Rational worst = 0;
        std::size_t below = 0;
        for (std::size_t i = 0; i < st_samples; ++i) {
          auto a = sample_sphere_point(seq.blocks, rng), b = sample_sphere_point(seq.blocks, rng);
          auto v = dis(a, b);
          worst = std::max(worst, v);
          below += v < eps;
        }
        o.result["samples"] = st_samples;
        o.result["below_eps"] = below;
        o.result["max_dis"] = worst.get_str();
        o.summary += "; max sampled dis " + worst.get_str() + ", " + std::to_string(below) + "/" +
                     std::to_string(st_samples) + " below eps";
      }
      return o;
    };
  });
  auto* st_run = st->add_subcommand("run", "end-to-end stabilization");
  st_run->add_option("--f", st_f)->required();
  st_run->add_option("--C", st_C)->required();
  st_run->add_option("--eps", st_eps)->required();
  st_run->add_option("--m", st_m)->required();
  st_run->add_option("--mode", st_mode, "guaranteed | empirical");
  st_run->add_option("--ambient", st_ambient, "ambient dimension n");
  add_common(st_run, common);
  st_run->callback([&] {
    command = "stab run";
    handler = [&] {
      StabMode mode;
      if (st_mode == "guaranteed")
        mode = StabMode::Guaranteed;
      else if (st_mode == "empirical")
        mode = StabMode::Empirical;
      else
        throw InvalidArgument("mode must be guaranteed or empirical");
      auto f = LipschitzFn::parse(st_f);
      auto res = stabilize(f, parse_rational(st_C), parse_rational(st_eps), st_m, mode, st_ambient, common.digits);
      Outcome o;
      auto blocks = json::array();
      for (const auto& b : res.blocks) blocks.push_back(vector_json(b));
      o.result = {{"blocks", blocks},       {"osc", res.osc.get_str()},     {"certified", res.certified},
                  {"plan", res.plan},       {"strategy", res.strategy},     {"net_points", res.net_points}};
      o.summary = "osc = " + res.osc.get_str() + " via " + res.strategy;
      return o;
    };
  });

  // replay
  auto* rp = app.add_subcommand("replay", "re-run a manifest and compare digests");
  std::string rp_path;
  rp->add_option("--manifest", rp_path)->required();
  rp->callback([&] { command = "replay"; });

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (command == "replay") {
    try {
      auto m = manifest_from_json(read_json(rp_path));
      std::vector<std::string> store{"finkr"};
      for (const auto& a : m.argv) store.push_back(a);
      std::vector<char*> av;
      for (auto& s : store) av.push_back(s.data());
      json replayed;
      int code = run(static_cast<int>(av.size()), av.data(), &replayed);
      if (code != kExitOk) return code;
      auto digest = result_digest(replayed);
      bool same = digest == m.digest;
      std::cout << (same ? "replay matches " : "replay differs: ") << digest << "\n";
      return same ? kExitOk : kExitInternal;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }

  // Manifest argv without output paths.
  std::vector<std::string> replay_args;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--json" || args[i] == "--manifest") {
      ++i;
      continue;
    }
    if (args[i].rfind("--json=", 0) == 0 || args[i].rfind("--manifest=", 0) == 0) continue;
    replay_args.push_back(args[i]);
  }

  auto t0 = std::chrono::steady_clock::now();
  json report = {{"command", command}, {"version", kToolVersion}};
  int code = kExitOk;
  Outcome out;
  try {
    out = handler();
    report["status"] = "ok";
    report["result"] = out.result;
    report["stats"] = out.stats;
  } catch (const BudgetExceeded& e) {
    code = kExitBudget;
    report["status"] = "budget_exceeded";
    report["message"] = e.what();
    report["result"] = nullptr;
  } catch (const InsufficientWidth& e) {
    code = kExitWidth;
    report["status"] = "insufficient_width";
    report["message"] = e.what();
    report["plan"] = e.plan();
    report["result"] = nullptr;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownName& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report["stats"]["wall_seconds"] = wall;
  if (result_out) {
    *result_out = report["result"];
    return code;
  }

  if (common.json_path.empty()) {
    write_json("-", report);
  } else {
    write_json(common.json_path, report);
    if (code == kExitOk)
      std::cout << out.summary << "\n";
    else
      std::cout << report["status"].get<std::string>() << ": " << report["message"].get<std::string>() << "\n";
  }
  if (code != kExitOk && report.contains("plan")) std::cerr << "plan: " << report["plan"].get<std::string>() << "\n";
  if (!common.manifest_path.empty()) {
    RunManifest m;
    m.subcommand = command;
    m.argv = replay_args;
    for (const auto* opt : app.get_subcommands().back()->get_options())
      if (opt->count() > 0 && opt->get_name() != "--json" && opt->get_name() != "--manifest")
        m.params[opt->get_name()] = opt->results();
    m.budgets = {{"nodes", common.nodes}, {"digit_budget", common.digits}, {"workers", common.workers}};
    m.wall_seconds = wall;
    m.digest = result_digest(report["result"]);
    write_json(common.manifest_path, to_json(m));
  }
  return code;
}
