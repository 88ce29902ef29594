#ifndef QDRG_REPORT_HPP
#define QDRG_REPORT_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "qdrg/schemes.hpp"
#include "qdrg/tmodules.hpp"

namespace qdrg {

using Json = nlohmann::ordered_json;

inline const std::set<std::string>& all_check_groups() {
  static const std::set<std::string> groups{"bm", "dual", "talg", "tmod", "scheme"};
  return groups;
}

struct RunConfig {
  std::string spec;
  std::string vertex = "0";  // index, label or "all"
  std::optional<std::vector<int>> ordering;
  std::string domain = "auto";  // exact | float | auto
  ToleranceContext tol;
  std::uint64_t seed = 1;
  std::string output;  // JSON path, empty for none
  std::set<std::string> checks = all_check_groups();
  std::set<std::string> cells{"first", "last"};  // subconstituents for scheme detection

  // Throws UsageError on unknown groups, cells or domain.
  void validate() const;
};

struct Check {
  std::string anchor;
  std::string statement;
  bool pass = false;
  double residual = 0.0;
  std::string detail;

  bool operator==(const Check&) const = default;
};

struct Report {
  Json data;  // deterministic content
  std::vector<Check> checks;  // one per anchor, aggregated over vertices
  Json timings = Json::object();

  bool pass() const;
  Json to_json() const;
  static Report from_json(const Json& j);
  // Ignores timings.
  bool operator==(const Report& other) const { return data == other.data && checks == other.checks; }
};

// "0,2,1,3" -> {0, 2, 1, 3}
std::vector<int> parse_ordering(const std::string& text);
// "rank=1e-10" style overrides; keys rank, cluster, residual.
void apply_tolerance(ToleranceContext& ctx, const std::string& key_value);

// Pipeline: graphs, bose_mesner, dual_algebra, terwilliger, tmodules,
// subconstituent_schemes, honouring config.checks.  UsageError and GuardError
// propagate; a VerificationError ends the pipeline with a failed check named
// after the stage and the violated identity.
Report run(const RunConfig& config);

// 0 pass, 1 some check failed.
int exit_code(const Report& report);

// Human-readable module table and scoreboard.
std::string render_text(const Report& report);

void emit_json(const Report& report, const std::string& path);
Report load_golden(const std::string& path);

// Floats rounded to 12 significant digits.
double round12(double x);

}  // namespace qdrg

#endif  // QDRG_REPORT_HPP
