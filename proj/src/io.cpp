#include "mechkernel/io.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mechkernel/errors.hpp"

namespace mechkernel::io {

namespace {

std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + ": expected an array");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw InvalidInput(std::string(what) + ": expected string entries");
    out.push_back(v.get<std::string>());
  }
  return out;
}

RatVec rational_list(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + ": expected an array");
  RatVec out;
  for (const auto& v : j) out.push_back(rational_from_json(v));
  return out;
}

json rational_array(const RatVec& v) {
  json a = json::array();
  for (const Rational& r : v) a.push_back(to_string(r));
  return a;
}

// Nested utility table indexed [outcome][theta^1]...[theta^n], flattened to
// one row per outcome with joint columns (agent 0 most significant).
Matrix parse_utility_table(const json& j, std::size_t outcomes,
                           const std::vector<std::size_t>& type_sizes, const char* what) {
  std::size_t joint = 1;
  for (std::size_t s : type_sizes) joint *= s;
  Matrix m(outcomes, joint);
  if (!j.is_array() || j.size() != outcomes) {
    throw InvalidInput(std::string(what) + ": expected one entry per outcome");
  }
  for (std::size_t o = 0; o < outcomes; ++o) {
    std::size_t col = 0;
    auto walk = [&](auto&& self, const json& node, std::size_t depth) -> void {
      if (depth == type_sizes.size()) {
        m.at(o, col++) = rational_from_json(node);
        return;
      }
      if (!node.is_array() || node.size() != type_sizes[depth]) {
        throw InvalidInput(std::string(what) + ": level " + std::to_string(depth + 1) +
                           " must have one entry per type");
      }
      for (const auto& child : node) self(self, child, depth + 1);
    };
    walk(walk, j[o], 0);
  }
  return m;
}

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

const json& require(const json& j, const char* field) {
  if (!j.contains(field)) throw InvalidInput(std::string("missing field '") + field + "'");
  return j.at(field);
}

}  // namespace

Rational rational_from_json(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(static_cast<long>(v.get<std::int64_t>()));
  if (v.is_number_unsigned()) return Rational(static_cast<unsigned long>(v.get<std::uint64_t>()));
  if (v.is_number_float()) return parse_rational(v.dump());
  throw InvalidInput("expected a rational value (string, integer, or decimal)");
}

json to_json(const Rational& r) { return to_string(r); }

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InvalidInput("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << bytes;
}

StochasticKernel parse_kernel(const json& j, bool repair_columns) {
  const std::size_t rows = require(j, "rows").get<std::size_t>();
  const std::size_t cols = require(j, "cols").get<std::size_t>();
  const json& entries = require(j, "entries");
  if (!entries.is_array() || entries.size() != rows) {
    throw InvalidInput("kernel: 'entries' must have one array per row");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!entries[r].is_array() || entries[r].size() != cols) {
      throw InvalidInput("kernel: row " + std::to_string(r) + " must have " +
                         std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rational_from_json(entries[r][c]);
  }
  for (std::size_t c = 0; c < cols; ++c) {
    Rational sum = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (m.at(r, c) < 0) {
        throw InvalidInput("kernel: negative entry in column " + std::to_string(c));
      }
      sum += m.at(r, c);
    }
    if (sum == 1) continue;
    if (!repair_columns) {
      throw InvalidInput("kernel: column " + std::to_string(c) + " sums to " + to_string(sum) +
                         ", not 1 (enable column repair to rescale)");
    }
    if (sum == 0) {
      throw InvalidInput("kernel: column " + std::to_string(c) + " sums to 0 and cannot be repaired");
    }
    for (std::size_t r = 0; r < rows; ++r) m.at(r, c) /= sum;
  }
  std::vector<std::string> row_labels =
      j.contains("row_labels") ? string_list(j.at("row_labels"), "row_labels")
                               : index_labels(rows);
  std::vector<std::string> col_labels =
      j.contains("col_labels") ? string_list(j.at("col_labels"), "col_labels")
                               : index_labels(cols);
  return StochasticKernel(std::move(m), std::move(row_labels), std::move(col_labels));
}

json kernel_to_json(const StochasticKernel& k) {
  json j;
  j["rows"] = k.rows();
  j["cols"] = k.cols();
  j["entries"] = matrix_rows(k.matrix());
  j["row_labels"] = k.row_labels();
  j["col_labels"] = k.col_labels();
  return j;
}

Prior parse_prior(const json& j) {
  RatVec atoms = rational_list(require(j, "atoms"), "prior atoms");
  if (j.contains("labels")) {
    return Prior(string_list(j.at("labels"), "prior labels"), std::move(atoms));
  }
  return Prior(std::move(atoms));
}

json prior_to_json(const Prior& p) {
  json j;
  j["labels"] = p.labels;
  j["atoms"] = rational_array(p.atoms);
  return j;
}

std::shared_ptr<const GameInstance> parse_game(const json& j) {
  std::vector<std::vector<std::string>> type_spaces;
  for (const auto& s : require(j, "type_spaces")) type_spaces.push_back(string_list(s, "type space"));
  std::vector<std::vector<std::string>> message_spaces;
  for (const auto& s : require(j, "message_spaces")) {
    message_spaces.push_back(string_list(s, "message space"));
  }
  std::vector<std::string> outcomes = string_list(require(j, "outcome_space"), "outcome space");
  std::vector<std::size_t> type_sizes;
  for (const auto& s : type_spaces) type_sizes.push_back(s.size());

  const json& au = require(j, "agent_utilities");
  if (!au.is_array() || au.size() != type_spaces.size()) {
    throw InvalidInput("game: 'agent_utilities' must have one table per agent");
  }
  std::vector<Matrix> agent_utilities;
  for (const auto& t : au) {
    agent_utilities.push_back(parse_utility_table(t, outcomes.size(), type_sizes, "agent utility"));
  }
  Matrix designer =
      parse_utility_table(require(j, "designer_utility"), outcomes.size(), type_sizes,
                          "designer utility");
  return std::make_shared<GameInstance>(std::move(type_spaces), std::move(message_spaces),
                                        std::move(outcomes), std::move(agent_utilities),
                                        std::move(designer));
}

AugmentedMechanism parse_mechanism(const json& j) {
  std::shared_ptr<const GameInstance> game = parse_game(require(j, "game"));
  StochasticKernel omega = parse_kernel(require(j, "outcome_kernel"));
  const json& sj = require(j, "strategies");
  std::vector<StochasticKernel> strategies;
  for (const auto& s : sj) strategies.push_back(parse_kernel(s));
  return AugmentedMechanism(std::move(game), std::move(omega), std::move(strategies));
}

MonopolyInstance parse_monopoly(const json& j) {
  RatVec grid = rational_list(require(j, "grid"), "grid");
  RatVec pi0 = rational_list(require(j, "pi0"), "pi0");
  const json& ps = require(j, "price_support");
  RatVec pmf(grid.size(), Rational(0));
  if (ps.is_array()) {
    pmf = rational_list(ps, "price_support");
  } else if (ps.is_object()) {
    for (const auto& [key, value] : ps.items()) {
      const Rational p = parse_rational(key);
      bool found = false;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] == p) {
          pmf[i] = rational_from_json(value);
          found = true;
          break;
        }
      }
      if (!found) {
        throw InvalidInput("price_support key '" + key + "' is not a grid point");
      }
    }
  } else {
    throw InvalidInput("price_support must be an object or an array");
  }
  return MonopolyInstance(std::move(grid), std::move(pi0), std::move(pmf));
}

CompetitorFamily parse_family(const json& j) {
  CompetitorFamily f;
  for (const auto& m : require(j, "members")) f.members.push_back(parse_kernel(m));
  if (j.contains("provenance")) f.provenance = j.at("provenance").get<std::string>();
  return f;
}

GrainSet parse_grain(const json& j) {
  GrainSet g;
  for (const auto& a : require(j, "agent_atoms")) {
    std::vector<std::size_t> atoms;
    for (const auto& v : a) atoms.push_back(v.get<std::size_t>());
    std::sort(atoms.begin(), atoms.end());
    g.agent_atoms.push_back(std::move(atoms));
  }
  g.epsilon = rational_from_json(require(j, "epsilon"));
  return g;
}

json polytope_to_json(const PriorPolytope& p) {
  json j;
  j["ambient_labels"] = p.ambient_labels;
  j["agent_sizes"] = p.agent_sizes;
  j["equality_matrix"] = matrix_rows(p.equality_matrix);
  j["rhs"] = rational_array(p.rhs);
  json pins = json::array();
  for (const AgreementConstraint& a : p.agreements) {
    json pin;
    pin["agent"] = a.agent;
    pin["atoms"] = a.atoms;
    pin["values"] = rational_array(a.pins);
    pins.push_back(std::move(pin));
  }
  j["pins"] = std::move(pins);
  j["pi0"] = prior_to_json(p.pi0);
  return j;
}

json characterization_to_json(const CharacterizationVerdict& v) {
  json j;
  j["verdict"] = v.holds();
  j["cond_equal_revenue"] = v.cond_equal_revenue;
  j["cond_local_max"] = v.cond_local_max;
  return j;
}

json oracle_verdict_to_json(const OracleVerdict& v, const MonopolyInstance& inst) {
  json j;
  switch (v.status) {
    case OracleStatus::True: j["verdict"] = true; break;
    case OracleStatus::False: j["verdict"] = false; break;
    case OracleStatus::Inconclusive: j["verdict"] = "inconclusive"; break;
  }
  j["epsilon"] = to_string(v.epsilon);
  if (v.status == OracleStatus::False) {
    json w = json::array();
    for (std::size_t idx : v.witness) w.push_back(to_string(inst.grid[idx]));
    j["witness"] = std::move(w);
  }
  if (v.justifying) j["justifying_belief"] = prior_to_json(*v.justifying);
  j["sets_examined"] = v.sets_examined;
  return j;
}

json robust_verdict_to_json(const RobustVerdict& v) {
  json j;
  switch (v.status) {
    case RobustStatus::Robust: j["verdict"] = true; break;
    case RobustStatus::NotRobust: j["verdict"] = false; break;
    case RobustStatus::Inconclusive: j["verdict"] = "inconclusive"; break;
  }
  j["level"] = to_string(v.level);
  if (v.witness_belief) j["witness_belief"] = prior_to_json(*v.witness_belief);
  if (v.failing_grain) {
    json g;
    g["epsilon"] = to_string(v.failing_grain->epsilon);
    g["agent_atoms"] = v.failing_grain->agent_atoms;
    j["failing_grain"] = std::move(g);
  }
  j["incomplete"] = v.incomplete;
  j["grains_examined"] = v.grains_examined;
  return j;
}

json equilibrium_report_to_json(const EquilibriumReport& r) {
  json j;
  j["holds"] = r.holds;
  json vs = json::array();
  for (const Violation& v : r.violations) {
    json e;
    e["agent"] = v.agent;
    e["type_profile"] = v.type_profile;
    e["message_profile"] = v.message_profile;
    e["deviation"] = v.deviation;
    vs.push_back(std::move(e));
  }
  j["violations"] = std::move(vs);
  j["truncated"] = r.truncated;
  return j;
}

ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "text") return ReportFormat::Text;
  throw InvalidInput("unknown report format '" + name + "' (json|csv|text)");
}

namespace {

std::string scalar_to_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string emit_report(const json& verdict, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json:
      return verdict.dump(2) + "\n";
    case ReportFormat::Csv: {
      std::string header;
      std::string row;
      for (const auto& [key, value] : verdict.items()) {
        if (!value.is_primitive()) continue;
        if (!header.empty()) {
          header += ',';
          row += ',';
        }
        header += key;
        row += scalar_to_text(value);
      }
      return header + "\n" + row + "\n";
    }
    case ReportFormat::Text: {
      std::string out;
      for (const auto& [key, value] : verdict.items()) {
        out += key + ": " + (value.is_primitive() ? scalar_to_text(value) : value.dump()) + "\n";
      }
      return out;
    }
  }
  return {};
}

std::string revenue_curve_csv(const MonopolyInstance& inst) {
  std::string out = "p,revenue_pi0\n";
  for (const Rational& p : inst.grid) {
    out += to_decimal_string(p) + "," + to_decimal_string(revenue(inst, p, inst.pi0)) + "\n";
  }
  return out;
}

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 1099511628211ull;
  }
  std::ostringstream os;
  os << "fnv1a:" << std::hex << std::setw(16) << std::setfill('0') << hash;
  return os.str();
}

json manifest_to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  json inputs = json::object();
  for (const auto& [path, digest] : m.input_digests) inputs[path] = digest;
  j["inputs"] = std::move(inputs);
  j["seed"] = m.seed;
  j["caps"] = m.caps;
  j["wall_ms"] = m.wall_ms;
  j["verdicts"] = m.verdicts;
  j["verdict_digest"] = fnv1a_digest(m.verdicts.dump());
  return j;
}

namespace {

// Deep subset check: every field in `expect` must be present and equal in
// `actual`; objects recurse, everything else compares exactly.
bool matches_expectation(const json& expect, const json& actual, std::string& why) {
  if (expect.is_object()) {
    if (!actual.is_object()) {
      why = "expected an object";
      return false;
    }
    for (const auto& [key, value] : expect.items()) {
      if (!actual.contains(key)) {
        why = "missing field '" + key + "'";
        return false;
      }
      if (!matches_expectation(value, actual.at(key), why)) {
        why = "'" + key + "': " + why;
        return false;
      }
    }
    return true;
  }
  if (expect != actual) {
    why = "expected " + expect.dump() + ", got " + actual.dump();
    return false;
  }
  return true;
}

json run_case(const json& c) {
  const std::string command = require(c, "command").get<std::string>();
  if (command == "kernel-order") {
    const StochasticKernel g = parse_kernel(require(c, "g"));
    const StochasticKernel h = parse_kernel(require(c, "h"));
    json out;
    out["verdict"] = kernel_more_informative(g, h);
    out["g_over_h"] = kernel_more_informative(g, h);
    out["h_over_g"] = kernel_more_informative(h, g);
    out["equivalent"] = kernel_equivalent(g, h);
    return out;
  }
  if (command == "blackwell") {
    const StochasticKernel g = parse_kernel(require(c, "g"));
    const StochasticKernel h = parse_kernel(require(c, "h"));
    const std::optional<StochasticKernel> witness = blackwell_more_informative(g, h);
    json out;
    out["verdict"] = witness.has_value();
    if (witness) out["witness"] = kernel_to_json(*witness);
    return out;
  }
  if (command == "feasible") {
    const StochasticKernel k = parse_kernel(require(c, "kernel"));
    const Prior pi0 = parse_prior(require(c, "prior"));
    PriorPolytope p = feasible_set(k, pi0);
    if (c.contains("grain")) p = restrict_grain(p, parse_grain(c.at("grain")), pi0);
    json out;
    out["verdict"] = true;
    out["dimension"] = dimension(p);
    out["polytope"] = polytope_to_json(p);
    if (c.contains("contains")) {
      bool all = true;
      for (const auto& pj : c.at("contains")) {
        if (!membership(p, parse_prior(pj))) all = false;
      }
      out["contains"] = all;
      out["verdict"] = all;
    }
    return out;
  }
  if (command == "reveal") {
    const AugmentedMechanism am = parse_mechanism(require(c, "mechanism"));
    const std::string mode = require(c, "mode").get<std::string>();
    json out;
    if (mode == "weak") {
      const FictitiousDirect fd = synthesize_weak_filter(am);
      out["verdict"] = check_equivalence(am, fd);
      out["equivalent"] = out["verdict"];
      out["strong"] = fd.strong_filter;
    } else if (mode == "deterministic") {
      const FictitiousDirect fd = represent_deterministic(am);
      out["verdict"] = check_equivalence(am, fd);
      out["equivalent"] = out["verdict"];
      out["strong"] = fd.strong_filter;
    } else if (mode == "strong-search") {
      const std::size_t budget = c.contains("budget") ? c.at("budget").get<std::size_t>() : 100000;
      const StrongSearchResult r = search_strong_representation(am, budget);
      switch (r.outcome) {
        case SearchOutcome::Found: out["verdict"] = true; break;
        case SearchOutcome::ClassExhausted: out["verdict"] = false; break;
        case SearchOutcome::BudgetExhausted: out["verdict"] = "inconclusive"; break;
      }
      out["candidates_tried"] = r.candidates_tried;
    } else {
      throw InvalidInput("unknown reveal mode '" + mode + "'");
    }
    return out;
  }
  if (command == "sc") {
    const StochasticKernel delta = parse_kernel(require(c, "delta"));
    const StochasticKernel observation = parse_kernel(require(c, "observation"));
    const Prior pi0 = parse_prior(require(c, "pi0"));
    const CompetitorFamily family = parse_family(require(c, "family"));
    std::vector<std::size_t> agent_sizes;
    if (c.contains("agent_sizes")) {
      for (const auto& v : c.at("agent_sizes")) agent_sizes.push_back(v.get<std::size_t>());
    } else {
      agent_sizes = {pi0.size()};
    }
    const Matrix u0 = parse_utility_table(require(c, "designer_utility"), delta.rows(),
                                          {delta.cols()}, "designer utility");
    if (c.contains("robust") && c.at("robust").get<bool>()) {
      std::vector<Rational> schedule;
      if (c.contains("eps_schedule") && c.at("eps_schedule").is_array()) {
        for (const auto& e : c.at("eps_schedule")) schedule.push_back(rational_from_json(e));
      }
      const RobustVerdict v = is_robustly_self_confirming(delta, observation, pi0, family, u0,
                                                          schedule, kDefaultGrainBudget,
                                                          agent_sizes);
      return robust_verdict_to_json(v);
    }
    const PriorPolytope polytope = feasible_set(observation, pi0, agent_sizes);
    const std::optional<Prior> witness = is_self_confirming(delta, polytope, family, u0);
    json out;
    out["verdict"] = witness.has_value();
    if (witness) out["witness_belief"] = prior_to_json(*witness);
    return out;
  }
  if (command == "monopoly") {
    const MonopolyInstance inst = parse_monopoly(require(c, "instance"));
    const std::string check = require(c, "check").get<std::string>();
    if (check == "characterization") {
      return characterization_to_json(check_characterization(inst));
    }
    if (check == "oracle") {
      const Rational eps = rational_from_json(require(c, "eps"));
      const std::size_t cap =
          c.contains("grain_cap") ? c.at("grain_cap").get<std::size_t>() : kDefaultGrainCap;
      return oracle_verdict_to_json(oracle_robust_sc(inst, eps, cap), inst);
    }
    throw InvalidInput("unknown monopoly check '" + check + "'");
  }
  throw InvalidInput("unknown corpus command '" + command + "'");
}

}  // namespace

int run_suite(const std::string& corpus_dir, std::ostream& log) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(corpus_dir)) {
    log << "corpus directory '" << corpus_dir << "' not found\n";
    return 3;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corpus_dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    log << "corpus directory '" << corpus_dir << "' has no cases\n";
    return 3;
  }
  int failures = 0;
  for (const fs::path& file : files) {
    std::string name = file.filename().string();
    try {
      const json c = load_json_file(file.string());
      if (c.contains("name")) name = c.at("name").get<std::string>();
      const json verdict = run_case(c);
      std::string why;
      if (c.contains("expect") && !matches_expectation(c.at("expect"), verdict, why)) {
        log << "FAIL " << name << ": " << why << "\n";
        ++failures;
      } else {
        log << "PASS " << name << "\n";
      }
    } catch (const std::exception& e) {
      log << "FAIL " << name << ": " << e.what() << "\n";
      ++failures;
    }
  }
  log << files.size() - failures << "/" << files.size() << " corpus cases passed\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace mechkernel::io
