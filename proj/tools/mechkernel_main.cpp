// mechkernel: exact-arithmetic toolkit for kernel informativeness orders,
// revelation constructions, feasible-prior polytopes, self-confirmation
// checks, and the posted-price monopoly application.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mechkernel/errors.hpp"
#include "mechkernel/io.hpp"
#include "mechkernel/monopoly.hpp"

namespace mk = mechkernel;
namespace io = mechkernel::io;
using io::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mk::InvalidInput("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Output {
  std::string format = "json";
  std::string out_path;       // empty: stdout
  std::string manifest_path;  // empty: no manifest
};

struct ManifestInfo {
  std::string command;
  std::vector<std::pair<std::string, std::string>> digests;
  std::uint64_t seed = 0;
  std::map<std::string, std::uint64_t> caps;
};

int exit_code_for(const json& verdict) {
  if (!verdict.contains("verdict")) return 0;
  const json& v = verdict.at("verdict");
  if (v.is_boolean()) return v.get<bool>() ? 0 : 1;
  return 2;  // "inconclusive"
}

// Prints the verdict, writes the optional manifest, and maps the verdict to
// the process exit code. Wall time lives only in the manifest so the verdict
// bytes replay identically.
int deliver(const json& verdict, const Output& out, const ManifestInfo& info,
            std::chrono::steady_clock::time_point start) {
  const std::string rendered = io::emit_report(verdict, io::parse_format(out.format));
  if (out.out_path.empty()) {
    std::cout << rendered;
  } else {
    io::write_file(out.out_path, rendered);
  }
  if (!out.manifest_path.empty()) {
    io::RunManifest m;
    m.command = info.command;
    m.input_digests = info.digests;
    m.seed = info.seed;
    m.caps = info.caps;
    m.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    m.verdicts = verdict;
    io::write_file(out.manifest_path, io::manifest_to_json(m).dump(2) + "\n");
  }
  return exit_code_for(verdict);
}

json load_input(const std::string& path, ManifestInfo& info) {
  const std::string bytes = slurp(path);
  info.digests.emplace_back(path, io::fnv1a_digest(bytes));
  return json::parse(bytes);
}

std::vector<mk::Rational> parse_schedule(const std::vector<std::string>& parts) {
  std::vector<mk::Rational> out;
  for (const std::string& p : parts) out.push_back(mk::parse_rational(p));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact decision procedures for information orders, revelation-principle "
               "constructions, feasible priors, and self-confirming mechanisms"};
  app.require_subcommand(1);

  Output out;
  ManifestInfo info;
  std::size_t solver_cap = mk::kDefaultSolverCap;
  app.add_option("--emit", out.format, "Report format: json, csv, or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", out.out_path, "Write the report to a file instead of stdout");
  app.add_option("--manifest", out.manifest_path, "Write a replayable run manifest");
  app.add_option("--seed", info.seed, "Seed recorded in the manifest");
  app.add_option("--cap", solver_cap, "Simplex pivot cap")
      ->envname("MECHKERNEL_SOLVER_CAP");

  // kernel-order
  auto* ord = app.add_subcommand("kernel-order", "Decide the kernel order g over h");
  std::string ord_g, ord_h;
  bool repair = false;
  ord->add_option("G", ord_g, "Kernel g (JSON)")->required();
  ord->add_option("H", ord_h, "Kernel h (JSON)")->required();
  ord->add_flag("--repair", repair, "Rescale kernel columns that do not sum to 1");

  // blackwell
  auto* bw = app.add_subcommand("blackwell", "Find a garbling S with h = S g");
  std::string bw_g, bw_h;
  bw->add_option("G", bw_g, "Kernel g (JSON)")->required();
  bw->add_option("H", bw_h, "Kernel h (JSON)")->required();
  bw->add_flag("--repair", repair, "Rescale kernel columns that do not sum to 1");

  // reveal
  auto* rv = app.add_subcommand("reveal", "Build a fictitious direct representation");
  std::string rv_mech, rv_mode = "weak", rv_check = "none";
  std::size_t rv_budget = 100000;
  unsigned rv_denom = 2;
  rv->add_option("mechanism", rv_mech, "Augmented mechanism (JSON)")->required();
  rv->add_option("--mode", rv_mode, "weak, deterministic, or strong-search")
      ->check(CLI::IsMember({"weak", "deterministic", "strong-search"}));
  rv->add_option("--check", rv_check, "Equilibrium check: dominant, expost, or none")
      ->check(CLI::IsMember({"dominant", "expost", "none"}));
  rv->add_option("--budget", rv_budget, "Candidate budget for strong-search");
  rv->add_option("--max-denominator", rv_denom, "Largest filter entry denominator searched");

  // feasible
  auto* fs = app.add_subcommand("feasible", "Feasible-prior polytope of a kernel");
  std::string fs_kernel, fs_prior, fs_grain, fs_contains;
  bool fs_vertices = false;
  std::size_t vertex_cap = mk::kDefaultVertexCap;
  std::size_t ambient_cap = mk::kDefaultAmbientCap;
  std::vector<std::size_t> fs_sizes;
  fs->add_option("kernel", fs_kernel, "Observation kernel (JSON)")->required();
  fs->add_option("prior", fs_prior, "Generating prior (JSON)")->required();
  fs->add_option("--grain", fs_grain, "Grain set to pin (JSON)");
  fs->add_option("--contains", fs_contains, "Prior whose membership decides the verdict");
  fs->add_option("--agent-sizes", fs_sizes, "Product structure of the type space");
  fs->add_flag("--vertices", fs_vertices, "Enumerate vertices");
  fs->add_option("--vertex-cap", vertex_cap, "Vertex enumeration cap");
  fs->add_option("--ambient-cap", ambient_cap, "Ambient dimension cap for vertices");

  // sc
  auto* sc = app.add_subcommand("sc", "Self-confirmation of a direct mechanism");
  std::string sc_inst, sc_family;
  bool sc_robust = false, sc_maxmin = false;
  std::vector<std::string> sc_eps;
  std::size_t sc_budget = mk::kDefaultGrainBudget;
  sc->add_option("instance", sc_inst, "Instance (JSON): delta, observation, pi0, designer_utility")
      ->required();
  sc->add_option("--family", sc_family, "Competitor family (JSON)")->required();
  sc->add_flag("--robust", sc_robust, "Scan grain perturbations over an epsilon schedule");
  sc->add_flag("--maxmin", sc_maxmin, "Report the maxmin designer value");
  sc->add_option("--eps", sc_eps, "Epsilon schedule (descending rationals)")->delimiter(',');
  sc->add_option("--budget", sc_budget, "Grain budget per epsilon level");

  // monopoly
  auto* mono = app.add_subcommand("monopoly", "Posted-price robustness checks");
  std::string mono_inst, mono_check = "characterization", mono_eps = "0", mono_csv;
  std::size_t grain_cap = mk::kDefaultGrainCap;
  mono->add_option("instance", mono_inst, "Monopoly instance (JSON)")->required();
  mono->add_option("--check", mono_check, "characterization, oracle, or both")
      ->check(CLI::IsMember({"characterization", "oracle", "both"}));
  mono->add_option("--eps", mono_eps, "Grain bound for the oracle");
  mono->add_option("--grain-cap", grain_cap, "Oracle grain-set cap");
  mono->add_option("--emit-csv", mono_csv, "Write the revenue curve to a CSV file");

  // suite
  auto* su = app.add_subcommand("suite", "Run every corpus case and report pass/fail");
  std::string su_dir;
  su->add_option("corpus", su_dir, "Directory of corpus case files")->required();

  CLI11_PARSE(app, argc, argv);

  const auto start = std::chrono::steady_clock::now();
  {
    std::ostringstream cmd;
    for (int i = 1; i < argc; ++i) cmd << (i > 1 ? " " : "") << argv[i];
    info.command = cmd.str();
  }
  info.caps["solver_cap"] = solver_cap;

  try {
    json verdict;
    if (*ord) {
      const mk::StochasticKernel g = io::parse_kernel(load_input(ord_g, info), repair);
      const mk::StochasticKernel h = io::parse_kernel(load_input(ord_h, info), repair);
      verdict["verdict"] = mk::kernel_more_informative(g, h);
      verdict["g_over_h"] = verdict["verdict"];
      verdict["h_over_g"] = mk::kernel_more_informative(h, g);
      verdict["equivalent"] = mk::kernel_equivalent(g, h);
    } else if (*bw) {
      const mk::StochasticKernel g = io::parse_kernel(load_input(bw_g, info), repair);
      const mk::StochasticKernel h = io::parse_kernel(load_input(bw_h, info), repair);
      const auto witness = mk::blackwell_more_informative(g, h, solver_cap);
      verdict["verdict"] = witness.has_value();
      if (witness) verdict["witness"] = io::kernel_to_json(*witness);
    } else if (*rv) {
      const mk::AugmentedMechanism am = io::parse_mechanism(load_input(rv_mech, info));
      if (rv_mode == "strong-search") {
        info.caps["budget"] = rv_budget;
        const mk::StrongSearchResult r =
            mk::search_strong_representation(am, rv_budget, rv_denom, solver_cap);
        switch (r.outcome) {
          case mk::SearchOutcome::Found: verdict["verdict"] = true; break;
          case mk::SearchOutcome::ClassExhausted: verdict["verdict"] = false; break;
          case mk::SearchOutcome::BudgetExhausted: verdict["verdict"] = "inconclusive"; break;
        }
        verdict["candidates_tried"] = r.candidates_tried;
        if (r.witness) {
          json filters = json::array();
          for (const auto& f : r.witness->filters) filters.push_back(io::kernel_to_json(f));
          verdict["filters"] = std::move(filters);
        }
      } else {
        const mk::FictitiousDirect fd = rv_mode == "weak" ? mk::synthesize_weak_filter(am)
                                                          : mk::represent_deterministic(am);
        verdict["verdict"] = mk::check_equivalence(am, fd);
        verdict["equivalent"] = verdict["verdict"];
        verdict["strong"] = fd.strong_filter;
        verdict["delta"] = io::kernel_to_json(fd.delta);
        json filters = json::array();
        for (const auto& f : fd.filters) filters.push_back(io::kernel_to_json(f));
        verdict["filters"] = std::move(filters);
      }
      if (rv_check != "none") {
        const mk::EquilibriumReport rep =
            rv_check == "dominant" ? mk::is_dominant_strategy_eq(am) : mk::is_ex_post_eq(am);
        verdict["equilibrium"] = io::equilibrium_report_to_json(rep);
      }
    } else if (*fs) {
      const mk::StochasticKernel k = io::parse_kernel(load_input(fs_kernel, info), repair);
      const mk::Prior pi0 = io::parse_prior(load_input(fs_prior, info));
      mk::PriorPolytope p = mk::feasible_set(k, pi0, fs_sizes);
      if (!fs_grain.empty()) {
        p = mk::restrict_grain(p, io::parse_grain(load_input(fs_grain, info)), pi0);
      }
      verdict["verdict"] = true;
      verdict["dimension"] = mk::dimension(p, solver_cap);
      if (!fs_contains.empty()) {
        verdict["verdict"] = mk::membership(p, io::parse_prior(load_input(fs_contains, info)));
      }
      if (fs_vertices) {
        info.caps["vertex_cap"] = vertex_cap;
        const mk::VertexSet vs = mk::vertices(p, vertex_cap, ambient_cap);
        json arr = json::array();
        for (const mk::Prior& v : vs.vertices) arr.push_back(io::prior_to_json(v));
        verdict["vertices"] = std::move(arr);
        verdict["truncated"] = vs.truncated;
      }
      verdict["polytope"] = io::polytope_to_json(p);
    } else if (*sc) {
      const json inst = load_input(sc_inst, info);
      const mk::StochasticKernel delta = io::parse_kernel(inst.at("delta"));
      const mk::StochasticKernel observation = io::parse_kernel(inst.at("observation"));
      const mk::Prior pi0 = io::parse_prior(inst.at("pi0"));
      std::vector<std::size_t> agent_sizes;
      if (inst.contains("agent_sizes")) {
        for (const auto& v : inst.at("agent_sizes")) agent_sizes.push_back(v.get<std::size_t>());
      } else {
        agent_sizes = {pi0.size()};
      }
      mk::Matrix u0(delta.rows(), delta.cols());
      {
        const json& uj = inst.at("designer_utility");
        for (std::size_t r = 0; r < delta.rows(); ++r) {
          for (std::size_t c = 0; c < delta.cols(); ++c) {
            u0.at(r, c) = io::rational_from_json(uj.at(r).at(c));
          }
        }
      }
      const mk::CompetitorFamily family = io::parse_family(load_input(sc_family, info));
      if (sc_robust) {
        info.caps["grain_budget"] = sc_budget;
        const mk::RobustVerdict v = mk::is_robustly_self_confirming(
            delta, observation, pi0, family, u0, parse_schedule(sc_eps), sc_budget, agent_sizes,
            solver_cap);
        verdict = io::robust_verdict_to_json(v);
      } else {
        const mk::PriorPolytope polytope = mk::feasible_set(observation, pi0, agent_sizes);
        const auto witness = mk::is_self_confirming(delta, polytope, family, u0, solver_cap);
        verdict["verdict"] = witness.has_value();
        if (witness) verdict["witness_belief"] = io::prior_to_json(*witness);
        if (sc_maxmin && witness) {
          verdict["maxmin_value"] =
              mk::to_string(mk::maxmin_value(delta, polytope, u0, solver_cap));
        }
      }
    } else if (*mono) {
      const mk::MonopolyInstance inst = io::parse_monopoly(load_input(mono_inst, info));
      if (!mono_csv.empty()) io::write_file(mono_csv, io::revenue_curve_csv(inst));
      if (mono_check == "characterization") {
        verdict = io::characterization_to_json(mk::check_characterization(inst));
      } else {
        info.caps["grain_cap"] = grain_cap;
        const mk::OracleVerdict ov =
            mk::oracle_robust_sc(inst, mk::parse_rational(mono_eps), grain_cap, solver_cap);
        if (mono_check == "oracle") {
          verdict = io::oracle_verdict_to_json(ov, inst);
        } else {
          const mk::CharacterizationVerdict cv = mk::check_characterization(inst);
          json agree;
          if (ov.status == mk::OracleStatus::Inconclusive) {
            agree = "inconclusive";
          } else {
            agree = cv.holds() == (ov.status == mk::OracleStatus::True);
          }
          verdict["verdict"] = agree;
          verdict["characterization"] = io::characterization_to_json(cv);
          verdict["oracle"] = io::oracle_verdict_to_json(ov, inst);
        }
      }
    } else if (*su) {
      return io::run_suite(su_dir, std::cout);
    }
    return deliver(verdict, out, info, start);
  } catch (const mk::CapExceeded& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
