// qmlab: command-line front end for the quasimorphism / cocycle library.
//
// Exit codes: 0 success, 1 check failure, 2 refused precondition, 64 usage.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "qmlab/cocycle.hpp"
#include "qmlab/experiments.hpp"
#include "qmlab/quasimorphism.hpp"
#include "qmlab/random_walk.hpp"
#include "qmlab/subgroup.hpp"

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitRefused = 2;
constexpr int kExitUsage = 64;

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qmlab::InputError("cannot write '" + path + "'");
  out << contents;
}

std::string replace_extension(const std::string& path, const std::string& ext) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ext;
  return path.substr(0, dot) + ext;
}

std::string format_estimate(const std::string& name, const qmlab::Estimate& e) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %llu/%llu = %.4f [%.4f, %.4f]", name.c_str(),
                static_cast<unsigned long long>(e.successes), static_cast<unsigned long long>(e.trials), e.estimate,
                e.ci.low, e.ci.high);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qmlab;

  CLI::App app{"Exact quasimorphisms, bounded 2-cocycles and random-walk experiments on free groups"};
  app.require_subcommand(1);
  int rank = 2;
  app.add_option("--rank", rank, "Rank of the free group (generators a, b, c, d, f, ...)")->check(CLI::Range(1, 25));

  std::uint64_t seed = 0;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Master seed")->envname("QMLAB_SEED");
  };

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a quasimorphism at a word");
  std::string qm;
  std::string word_text;
  eval->add_option("qm", qm, "Quasimorphism descriptor, e.g. hom:brooks:ab")->required();
  eval->add_option("word", word_text, "Word, e.g. \"a b^-1 a^3\"")->required();

  // cocycle
  auto* cocycle = app.add_subcommand("cocycle", "Evaluate c_f(g0, g1, g2) for a homogeneous f");
  std::vector<std::string> triple;
  cocycle->add_option("qm", qm, "Homogeneous quasimorphism descriptor")->required();
  cocycle->add_option("words", triple, "Three words g0 g1 g2")->required()->expected(3);

  // check
  auto* check = app.add_subcommand("check", "Run exact identity checks on random inputs");
  std::string suite;
  std::uint64_t samples = 500;
  std::string check_out = "check-report.json";
  bool keep_records = false;
  check->add_option("suite", suite, "all | cocycle-identity | alternating | invariance | restriction-homogeneous | "
                                    "power-sum | tetrahedron | propagation")
      ->required();
  check->add_option("qm", qm, "Homogeneous descriptor (prefix corrupt: for the adversarial fixture)")->required();
  check->add_option("--samples", samples, "Samples per check");
  check->add_option("--out", check_out, "Report path (JSON)");
  check->add_flag("--records", keep_records, "Keep every check record in the report");
  add_seed(check);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo experiments along lazy random walks");
  std::string kind;
  ExperimentParams params;
  std::vector<std::size_t> n_values{60}, m_values{60};
  std::string eps_text = "1/2";
  std::string out_path, csv_path;
  experiment->add_option("kind", kind, "twist-prob | branch-census | subgroup-pipeline")
      ->required()
      ->check(CLI::IsMember({"twist-prob", "branch-census", "subgroup-pipeline"}));
  experiment->add_option("--qm", params.cocycle, "Homogeneous quasimorphism descriptor");
  experiment->add_option("--n", n_values, "Steps of the first walk (comma list for a grid)")->delimiter(',');
  experiment->add_option("--m", m_values, "Steps of the second walk (comma list for a grid)")->delimiter(',');
  experiment->add_option("--eps", eps_text, "Twist threshold (rational)");
  experiment->add_option("--trials", params.trials, "Trials per cell");
  experiment->add_option("--radius", params.radius, "Subgroup search radius");
  experiment->add_option("--threads", params.threads, "Worker threads (does not affect results)");
  experiment->add_option("--out", out_path, "JSON report path (default <kind>.json)");
  experiment->add_option("--csv", csv_path, "CSV summary path (default: JSON path with .csv)");
  experiment->add_flag("--record-trials", params.record_trials, "Include per-trial outcomes in the JSON");
  add_seed(experiment);

  // subgroup
  auto* subgroup = app.add_subcommand("subgroup", "Stallings graph and rank of <words...>");
  std::vector<std::string> gens_text;
  std::string export_path;
  subgroup->add_option("words", gens_text, "Generators");
  subgroup->add_option("--export", export_path, "Write the folded graph as 'src label dst' lines");

  // walk
  auto* walk = app.add_subcommand("walk", "Print a lazy random walk trajectory, one position per line");
  std::size_t steps = 20;
  std::uint64_t stream = 0;
  std::string walk_out;
  walk->add_option("--n", steps, "Number of steps");
  walk->add_option("--stream", stream, "Stream id");
  walk->add_option("--out", walk_out, "Write the log to a file instead of stdout");
  add_seed(walk);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const Alphabet alphabet = Alphabet::standard(rank);
  try {
    if (*eval) {
      const auto f = parse_quasimorphism(qm, alphabet);
      std::cout << to_string(f(parse_word(word_text, alphabet))) << "\n";
    } else if (*cocycle) {
      const auto c = parse_cocycle(qm, alphabet);
      std::cout << to_string(c(parse_word(triple[0], alphabet), parse_word(triple[1], alphabet),
                               parse_word(triple[2], alphabet)))
                << "\n";
    } else if (*check) {
      const auto c = parse_cocycle(qm, alphabet);
      const auto report = identity_suite(c, SampleSizes::uniform(samples), seed, suite, keep_records);
      write_file(check_out, to_json(report).dump(2) + "\n");
      for (const auto& s : report.checks)
        std::cout << s.name << ": " << s.failures << " failures / " << s.samples << " samples"
                  << (s.failures == 0 ? "  PASS" : "  FAIL") << "\n";
      std::cout << "report " << check_out << "\n";
      return report.total_failures() == 0 ? 0 : kExitCheckFailed;
    } else if (*experiment) {
      params.epsilon = parse_rational(eps_text);
      params.seed = seed;
      params.walk = WalkConfig::standard(rank);
      if (kind == "branch-census") m_values = {0};
      ExperimentReport merged;
      for (std::size_t n : n_values)
        for (std::size_t m : m_values) {
          params.n = n;
          params.m = m;
          ExperimentReport r = kind == "twist-prob"      ? twisted_probability(params)
                               : kind == "branch-census" ? twist_branch_census(params)
                                                         : random_subgroup_pipeline(params);
          for (const auto& cell : r.cells) {
            std::cout << kind << " n=" << cell.n << " m=" << cell.m;
            for (const auto& [name, e] : cell.estimates) std::cout << "  " << format_estimate(name, e);
            std::cout << "\n";
          }
          if (merged.kind.empty()) {
            merged = std::move(r);
          } else {
            merged.cells.insert(merged.cells.end(), r.cells.begin(), r.cells.end());
            merged.runtime_seconds += r.runtime_seconds;
          }
        }
      merged.params["n"] = n_values;
      merged.params["m"] = m_values;
      merged.params["threads_do_not_affect_results"] = true;
      if (out_path.empty()) out_path = kind + ".json";
      if (csv_path.empty()) csv_path = replace_extension(out_path, ".csv");
      write_file(out_path, to_json(merged).dump(2) + "\n");
      write_file(csv_path, to_csv(merged));
      std::cout << "report " << out_path << "\n"
                << "csv " << csv_path << "\n";
    } else if (*subgroup) {
      std::vector<Word> gens;
      for (const auto& t : gens_text) gens.push_back(parse_word(t, alphabet));
      const auto graph = stallings_graph(gens, rank);
      std::cout << "rank " << graph.rank() << "\n";
      if (!export_path.empty()) {
        write_file(export_path, graph.export_text(alphabet));
        std::cout << "graph " << export_path << "\n";
      }
    } else if (*walk) {
      WalkConfig cfg = WalkConfig::standard(rank, seed);
      const std::string log = trajectory_log(make_walker(cfg, stream).trajectory(steps), alphabet);
      if (walk_out.empty())
        std::cout << log;
      else
        write_file(walk_out, log);
    }
  } catch (const RefusedError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const PreconditionError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
