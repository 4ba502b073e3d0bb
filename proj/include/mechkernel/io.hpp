#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mechkernel/feasible_priors.hpp"
#include "mechkernel/kernel_algebra.hpp"
#include "mechkernel/monopoly.hpp"
#include "mechkernel/revelation.hpp"
#include "mechkernel/self_confirming.hpp"

namespace mechkernel::io {

using json = nlohmann::ordered_json;

// Exact value from a JSON string ("1/3", "0.35") or integer. Non-integer
// numeric literals pass through IEEE doubles and are recovered via the
// shortest round-trip decimal; strings are the unambiguous form.
Rational rational_from_json(const json& v);
json to_json(const Rational& r);

json load_json_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

// {"rows","cols","entries","row_labels","col_labels"}; entries row-major,
// decimal or "p/q" strings. Columns that do not sum to 1 are an error naming
// the column and its sum unless repair_columns rescales them.
StochasticKernel parse_kernel(const json& j, bool repair_columns = false);
json kernel_to_json(const StochasticKernel& k);

// {"labels": [...], "atoms": [...]}
Prior parse_prior(const json& j);
json prior_to_json(const Prior& p);

// {"type_spaces","message_spaces","outcome_space","agent_utilities",
//  "designer_utility"}; utilities nested [outcome][theta^1]...[theta^n].
std::shared_ptr<const GameInstance> parse_game(const json& j);

// {"game": {...}, "outcome_kernel": {...}, "strategies": [kernel...]}
AugmentedMechanism parse_mechanism(const json& j);

// {"grid": [...], "pi0": [...], "price_support": {"0.5": "1"}}
MonopolyInstance parse_monopoly(const json& j);

// {"members": [kernel...], "provenance": "..."}
CompetitorFamily parse_family(const json& j);

// {"agent_atoms": [[...], ...], "epsilon": "1/8"} (atom indices per agent)
GrainSet parse_grain(const json& j);

json polytope_to_json(const PriorPolytope& p);
json characterization_to_json(const CharacterizationVerdict& v);
json oracle_verdict_to_json(const OracleVerdict& v, const MonopolyInstance& inst);
json robust_verdict_to_json(const RobustVerdict& v);
json equilibrium_report_to_json(const EquilibriumReport& r);

enum class ReportFormat { Json, Csv, Text };
ReportFormat parse_format(const std::string& name);

// Stable rendering of a verdict object: JSON dump, flat two-line CSV of the
// top-level scalars, or "key: value" text lines, all in field order.
std::string emit_report(const json& verdict, ReportFormat format);

// CSV "p,revenue_pi0" rows sorted by p.
std::string revenue_curve_csv(const MonopolyInstance& inst);

// FNV-1a 64-bit content digest, rendered "fnv1a:<16 hex digits>".
std::string fnv1a_digest(const std::string& bytes);

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> input_digests;  // path, digest
  std::uint64_t seed = 0;
  std::map<std::string, std::uint64_t> caps;
  std::int64_t wall_ms = 0;
  json verdicts;
};

json manifest_to_json(const RunManifest& m);

// Runs every corpus case (*.json under corpus_dir), logging one line per
// case. Returns 0 iff all expectations hold.
int run_suite(const std::string& corpus_dir, std::ostream& log);

}  // namespace mechkernel::io
