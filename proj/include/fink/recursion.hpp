#pragma once

// Checks the inequality links of the bound derivations at sample points.
// A link holds or fails only where both sides evaluate within the digit
// budget; elsewhere it is Indeterminate.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fink/growth.hpp"

namespace fink {

enum class LinkStatus { Holds, Fails, Indeterminate };
std::string to_string(LinkStatus s);

struct LinkPoint {
  Env point;
  LinkStatus status = LinkStatus::Indeterminate;
  std::string lhs_value;  // decimal, or "overflow"
  std::string rhs_value;
};

struct LinkReport {
  std::string lhs;
  std::string rhs;
  std::string note;
  std::vector<LinkPoint> points;
  /// Fails if any point fails; Holds if some point holds and none fails.
  LinkStatus status = LinkStatus::Indeterminate;
};

struct RecursionReport {
  std::string name;
  std::vector<LinkReport> links;
};

using SampleRange = std::map<std::string, std::pair<unsigned long, unsigned long>>;

/// Chain names: N_recursion, g11_iter, g12_chain, barN2_chain, gkd_chain, h_d, h_kd.
std::vector<std::string> recursion_chains();

/// Throws UnknownName. `range` overrides the default sample range per variable.
RecursionReport verify_recursion(const std::string& name, const SampleRange& range = {},
                                 std::size_t digit_budget = 100000);

/// |FIN_k(l)^[d]| by enumeration.
std::size_t count_block_tuples(int k, std::size_t l, std::size_t d);

nlohmann::json to_json(const RecursionReport& r);

}  // namespace fink
