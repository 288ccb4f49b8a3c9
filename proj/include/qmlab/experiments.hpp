#pragma once

// Monte Carlo estimators over lazy random walks, exact identity sweeps, and
// their persisted reports (JSON + CSV).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qmlab/cocycle.hpp"
#include "qmlab/errors.hpp"
#include "qmlab/random_walk.hpp"
#include "qmlab/rational.hpp"
#include "qmlab/subgroup.hpp"
#include "qmlab/word.hpp"

namespace qmlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Binomial estimates.

struct Interval {
  double low;
  double high;
};

// Two-sided Wilson score interval; z = 1.96 gives 95%.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  double low = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  double high = successes == trials ? 1.0 : std::min(1.0, centre + half);
  // Guard the containment invariant against rounding at the extremes.
  low = std::min(low, p);
  high = std::max(high, p);
  return {low, high};
}

struct Estimate {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  Interval ci{0.0, 1.0};

  static Estimate of(std::uint64_t successes, std::uint64_t trials) {
    Estimate e;
    e.successes = successes;
    e.trials = trials;
    e.estimate = trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
    e.ci = wilson_interval(successes, trials);
    return e;
  }
};

inline Json to_json(const Estimate& e) {
  return Json{{"successes", e.successes},
              {"trials", e.trials},
              {"estimate", e.estimate},
              {"ci_low", e.ci.low},
              {"ci_high", e.ci.high}};
}

// ---------------------------------------------------------------------------
// Parameters and reports.

struct ExperimentParams {
  std::string cocycle = "hom:brooks:ab";
  WalkConfig walk = WalkConfig::standard();
  std::size_t n = 60;
  std::size_t m = 60;
  Rational epsilon{1, 2};
  std::uint64_t trials = 1000;
  int radius = 3;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool record_trials = false;

  void validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (epsilon <= 0) throw ConfigError("epsilon must be positive");
    if (radius < 1) throw ConfigError("radius must be >= 1");
    walk.validate();
  }

  WalkConfig seeded_walk() const {
    WalkConfig w = walk;
    w.seed = seed;
    return w;
  }
};

struct ReportCell {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::pair<std::string, Estimate>> estimates;
  Json details = Json::object();
  Json trials = Json::array();

  const Estimate& estimate(std::string_view name) const {
    for (const auto& [k, v] : estimates)
      if (k == name) return v;
    throw InputError("no estimate named '" + std::string(name) + "'");
  }
};

struct CheckRecord {
  std::string check;
  std::vector<std::string> inputs;  // word text
  Rational value;
  bool pass;
};

struct CheckSummary {
  std::string name;
  std::uint64_t samples = 0;
  std::uint64_t failures = 0;
  std::vector<CheckRecord> failing;  // capped
  std::vector<CheckRecord> records;  // every record when requested
};

struct ExperimentReport {
  std::string kind;
  Json params = Json::object();
  std::vector<ReportCell> cells;
  std::vector<CheckSummary> checks;
  std::string timestamp;
  double runtime_seconds = 0.0;

  std::uint64_t total_failures() const {
    std::uint64_t f = 0;
    for (const auto& c : checks) f += c.failures;
    return f;
  }
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline Json params_json(const ExperimentParams& p) {
  Json steps = Json::array();
  for (const Word& s : p.walk.steps) steps.push_back(to_string(s));
  return Json{{"cocycle", p.cocycle},   {"steps", steps},    {"n", p.n},
              {"m", p.m},               {"epsilon", to_string(p.epsilon)}, {"trials", p.trials},
              {"radius", p.radius},     {"seed", p.seed},    {"record_trials", p.record_trials}};
}

inline Json to_json(const CheckRecord& r) {
  return Json{{"check", r.check}, {"inputs", r.inputs}, {"value", to_string(r.value)}, {"pass", r.pass}};
}

// Wall-clock fields live under "run" so that reproducibility comparisons can
// drop them; everything else is a function of the parameters.
inline Json to_json(const ExperimentReport& r, bool include_run_metadata = true) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["version"] = kVersion;
  j["kind"] = r.kind;
  j["params"] = r.params;
  if (!r.cells.empty()) {
    Json cells = Json::array();
    for (const auto& c : r.cells) {
      Json cj{{"n", c.n}, {"m", c.m}};
      Json est = Json::object();
      for (const auto& [name, e] : c.estimates) est[name] = to_json(e);
      cj["estimates"] = est;
      if (!c.details.empty()) cj["details"] = c.details;
      if (!c.trials.empty()) cj["trials"] = c.trials;
      cells.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells);
  }
  if (!r.checks.empty() || r.kind == "identity-suite") {
    Json checks = Json::array();
    for (const auto& c : r.checks) {
      Json cj{{"name", c.name}, {"samples", c.samples}, {"failures", c.failures}, {"pass", c.failures == 0}};
      Json failing = Json::array();
      for (const auto& f : c.failing) failing.push_back(to_json(f));
      cj["failing"] = std::move(failing);
      if (!c.records.empty()) {
        Json recs = Json::array();
        for (const auto& rec : c.records) recs.push_back(to_json(rec));
        cj["records"] = std::move(recs);
      }
      checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    j["total_failures"] = r.total_failures();
  }
  if (include_run_metadata) j["run"] = Json{{"timestamp", r.timestamp}, {"runtime_seconds", r.runtime_seconds}};
  return j;
}

// One row per (n, m) cell; columns are <estimate>_{successes,trials,estimate,ci_low,ci_high}.
inline std::string to_csv(const ExperimentReport& r) {
  std::ostringstream os;
  if (r.cells.empty()) return "kind\n" + r.kind + "\n";
  os << "kind,n,m";
  for (const auto& [name, e] : r.cells.front().estimates)
    os << ',' << name << "_successes," << name << "_trials," << name << "_estimate," << name << "_ci_low," << name
       << "_ci_high";
  os << '\n';
  auto num = [](double d) {
    std::ostringstream s;
    s.precision(17);
    s << d;
    return s.str();
  };
  for (const auto& c : r.cells) {
    os << r.kind << ',' << c.n << ',' << c.m;
    for (const auto& [name, e] : c.estimates)
      os << ',' << e.successes << ',' << e.trials << ',' << num(e.estimate) << ',' << num(e.ci.low) << ','
         << num(e.ci.high);
    os << '\n';
  }
  return os.str();
}

// Results land at their trial index, so the output does not depend on the
// number of workers or on scheduling.
template <typename Outcome>
std::vector<Outcome> run_trials(std::uint64_t trials, unsigned threads, const std::function<Outcome(std::uint64_t)>& trial) {
  std::vector<std::optional<Outcome>> slots(trials);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t t = next++; t < trials; t = next++) slots[t] = trial(t);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(trials, 1024))));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  std::vector<Outcome> out;
  out.reserve(trials);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline Json witness_json(const TwistWitness& w) {
  return Json{{"g0", to_string(w.g0)},
              {"h0", to_string(w.h0)},
              {"value", to_string(w.value)},
              {"epsilon", to_string(w.epsilon)}};
}

inline TwistWitness require_witness(const BoundedCocycle& c) {
  constexpr int kWitnessRadius = 3;
  auto w = find_twist_witness(c, kWitnessRadius);
  if (!w)
    throw RefusedError("no twisted triangle (g0, h0, e) with |g0|, |h0| <= " + std::to_string(kWitnessRadius) +
                       "; the class of '" + c.provenance() + "' may be zero");
  return *w;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Estimators.

// P(|c(x_n, y_m, e)| >= epsilon) over independent walks.
inline ExperimentReport twisted_probability(const ExperimentParams& params) {
  params.validate();
  const detail::Stopwatch clock;
  const BoundedCocycle c = parse_cocycle(params.cocycle, params.walk.rank());
  if (!c.claims(CocycleProperty::restriction_homogeneous))
    throw PreconditionError("twisted probability needs a restriction-homogeneous cocycle");
  const TwistWitness witness = detail::require_witness(c);
  const WalkConfig walk = params.seeded_walk();

  struct Outcome {
    Rational value;
    std::size_t x_length, y_length;
  };
  const auto outcomes = run_trials<Outcome>(params.trials, params.threads, [&](std::uint64_t t) {
    const auto [x, y] = sample_pair(walk, t, params.n, params.m);
    return Outcome{c(x, y, Word(x.rank())), x.size(), y.size()};
  });

  ReportCell cell;
  cell.n = params.n;
  cell.m = params.m;
  std::uint64_t twisted = 0, nonzero = 0;
  for (std::uint64_t t = 0; t < outcomes.size(); ++t) {
    const auto& o = outcomes[t];
    const bool hit = abs(o.value) >= params.epsilon;
    twisted += hit;
    nonzero += o.value != 0;
    if (params.record_trials)
      cell.trials.push_back(Json{{"trial", t},
                                 {"x_length", o.x_length},
                                 {"y_length", o.y_length},
                                 {"value", to_string(o.value)},
                                 {"twisted", hit}});
  }
  cell.estimates.emplace_back("twisted", Estimate::of(twisted, params.trials));
  cell.estimates.emplace_back("nonzero", Estimate::of(nonzero, params.trials));
  cell.details = Json{{"threshold_epsilon", to_string(params.epsilon)}, {"witness", detail::witness_json(witness)}};

  ExperimentReport r;
  r.kind = "twist-prob";
  r.params = params_json(params);
  r.cells.push_back(std::move(cell));
  r.timestamp = utc_timestamp();
  r.runtime_seconds = clock.seconds();
  return r;
}

// For x = x_n, which of (h0^-1, x, e), (g0, h0 x, e), (h0^-1 g0, x, e) are
// eps-twisted, eps taken from the witness. At least one always is.
inline ExperimentReport twist_branch_census(const ExperimentParams& params, const TwistWitness& witness) {
  params.validate();
  const detail::Stopwatch clock;
  const BoundedCocycle c = parse_cocycle(params.cocycle, params.walk.rank());
  const Word e(c.rank());
  if (witness.value == 0 || c(witness.g0, witness.h0, e) != witness.value || witness.epsilon * 3 != abs(witness.value))
    throw PreconditionError("twist witness does not match the cocycle");
  const WalkConfig walk = params.seeded_walk();
  const Word h0_inv = inverse(witness.h0);
  const Word h0_inv_g0 = h0_inv * witness.g0;

  using Outcome = std::array<Rational, 3>;
  const auto outcomes = run_trials<Outcome>(params.trials, params.threads, [&](std::uint64_t t) {
    Walker w(walk, 2 * t);
    const Word x = w.sample_position(params.n);
    return Outcome{abs(c(h0_inv, x, e)), abs(c(witness.g0, witness.h0 * x, e)), abs(c(h0_inv_g0, x, e))};
  });

  ReportCell cell;
  cell.n = params.n;
  cell.m = 0;
  std::array<std::uint64_t, 3> hits{};
  std::uint64_t any = 0;
  for (std::uint64_t t = 0; t < outcomes.size(); ++t) {
    bool some = false;
    for (int b = 0; b < 3; ++b) {
      const bool h = outcomes[t][b] >= witness.epsilon;
      hits[b] += h;
      some = some || h;
    }
    any += some;
    if (params.record_trials)
      cell.trials.push_back(Json{{"trial", t},
                                 {"values", {to_string(outcomes[t][0]), to_string(outcomes[t][1]), to_string(outcomes[t][2])}}});
  }
  const char* names[] = {"branch_a", "branch_b", "branch_c"};
  for (int b = 0; b < 3; ++b) cell.estimates.emplace_back(names[b], Estimate::of(hits[b], params.trials));
  cell.estimates.emplace_back("any_branch", Estimate::of(any, params.trials));
  double max_high = 0.0, sum = 0.0;
  for (int b = 0; b < 3; ++b) {
    max_high = std::max(max_high, cell.estimates[b].second.ci.high);
    sum += cell.estimates[b].second.estimate;
  }
  cell.details = Json{{"witness", detail::witness_json(witness)},
                      {"disjunction_always_holds", any == params.trials},
                      {"max_branch_reaches_one_third", max_high >= 1.0 / 3.0},
                      {"branch_frequency_sum", sum}};

  ExperimentReport r;
  r.kind = "branch-census";
  r.params = params_json(params);
  r.cells.push_back(std::move(cell));
  r.timestamp = utc_timestamp();
  r.runtime_seconds = clock.seconds();
  return r;
}

inline ExperimentReport twist_branch_census(const ExperimentParams& params) {
  return twist_branch_census(params, detail::require_witness(parse_cocycle(params.cocycle, params.walk.rank())));
}

// Evidence that <x, y> is a rank-2 free subgroup on which c is nonzero.
struct RestrictionCertificate {
  Word x, y;
  std::string graph;  // export_text of the folded graph of <x, y>
  Rational value;     // c(x, y, e)
};

inline Json to_json(const RestrictionCertificate& cert) {
  return Json{{"x", to_string(cert.x)}, {"y", to_string(cert.y)}, {"graph", cert.graph}, {"value", to_string(cert.value)}};
}

inline RestrictionCertificate certificate_from_json(const Json& j, const Alphabet& alphabet) {
  return {parse_word(j.at("x").get<std::string>(), alphabet), parse_word(j.at("y").get<std::string>(), alphabet),
          j.at("graph").get<std::string>(), parse_rational(j.at("value").get<std::string>())};
}

// Rechecks a certificate without the folding code path: the graph must be
// folded with rank 2, carry x and y as closed loops that together cover every
// edge, x and y must not commute (so <x, y> is free of rank 2), and the
// cocycle value must be reproduced and nonzero.
inline bool verify_certificate(const RestrictionCertificate& cert, const BoundedCocycle& c, const Alphabet& alphabet,
                               std::string* reason = nullptr) {
  auto fail = [&](const char* why) {
    if (reason) *reason = why;
    return false;
  };
  std::optional<SubgroupGraph> graph;
  try {
    graph.emplace(parse_subgroup_graph(cert.graph, alphabet));
  } catch (const InputError&) {
    return fail("graph does not parse as a folded graph");
  }
  if (graph->rank() != 2) return fail("graph rank is not 2");
  std::vector<bool> covered(graph->edge_count(), false);
  for (const Word* w : {&cert.x, &cert.y}) {
    int v = 0;
    for (Letter l : w->letters()) {
      const int next = graph->step(v, l);
      if (next < 0) return fail("generator does not trace in the graph");
      const Edge e = l.inverted() ? Edge{next, l.generator(), v} : Edge{v, l.generator(), next};
      const auto it = std::lower_bound(graph->edges().begin(), graph->edges().end(), e);
      covered[static_cast<std::size_t>(it - graph->edges().begin())] = true;
      v = next;
    }
    if (v != 0) return fail("generator is not a closed loop at the basepoint");
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) return fail("graph has edges outside <x, y>");
  if (cert.x.is_identity() || cert.y.is_identity() || cert.x * cert.y == cert.y * cert.x)
    return fail("x and y commute");
  const Rational v = c(cert.x, cert.y, Word(cert.x.rank()));
  if (v == 0 || v != cert.value) return fail("cocycle value mismatch");
  return true;
}

// Per trial: is <x_n, y_m> free of rank 2, and does c restrict nontrivially to it.
inline ExperimentReport random_subgroup_pipeline(const ExperimentParams& params) {
  params.validate();
  const detail::Stopwatch clock;
  const BoundedCocycle c = parse_cocycle(params.cocycle, params.walk.rank());
  if (!c.claims(CocycleProperty::restriction_homogeneous))
    throw PreconditionError("subgroup pipeline needs a restriction-homogeneous cocycle");
  const WalkConfig walk = params.seeded_walk();

  struct Outcome {
    Word x, y;
    int rank;
    Rational direct;
    bool witness;
    std::string graph;
  };
  const auto outcomes = run_trials<Outcome>(params.trials, params.threads, [&](std::uint64_t t) {
    auto [x, y] = sample_pair(walk, t, params.n, params.m);
    const auto cert = certify_free_pair(x, y);
    const Rational direct = c(x, y, Word(x.rank()));
    const bool witness =
        direct != 0 || restriction_nontrivial(c, cert.graph, {x, y}, params.radius).has_value();
    return Outcome{std::move(x), std::move(y), cert.rank, direct, witness, cert.graph.export_text()};
  });

  ReportCell cell;
  cell.n = params.n;
  cell.m = params.m;
  std::uint64_t rank2 = 0, direct = 0, witness = 0, joint = 0, joint_witness = 0;
  Json certificates = Json::array();
  for (std::uint64_t t = 0; t < outcomes.size(); ++t) {
    const auto& o = outcomes[t];
    const bool r2 = o.rank == 2;
    rank2 += r2;
    direct += o.direct != 0;
    witness += o.witness;
    joint += r2 && o.direct != 0;
    joint_witness += r2 && o.witness;
    if (params.record_trials) {
      Json tj{{"trial", t}, {"rank", o.rank}, {"value", to_string(o.direct)}, {"restriction_witness", o.witness}};
      if (r2 && o.direct != 0) tj["certificate"] = to_json(RestrictionCertificate{o.x, o.y, o.graph, o.direct});
      cell.trials.push_back(std::move(tj));
    }
  }
  cell.estimates.emplace_back("rank2", Estimate::of(rank2, params.trials));
  cell.estimates.emplace_back("direct_nonzero", Estimate::of(direct, params.trials));
  cell.estimates.emplace_back("restriction_witness", Estimate::of(witness, params.trials));
  cell.estimates.emplace_back("joint", Estimate::of(joint, params.trials));
  cell.estimates.emplace_back("joint_witness", Estimate::of(joint_witness, params.trials));
  cell.details = Json{{"kernel", "trivial (free ambient group): F2 x| K(G) = F2"}};

  ExperimentReport r;
  r.kind = "subgroup-pipeline";
  r.params = params_json(params);
  r.cells.push_back(std::move(cell));
  r.timestamp = utc_timestamp();
  r.runtime_seconds = clock.seconds();
  return r;
}

// ---------------------------------------------------------------------------
// Exact identity sweep.

struct SampleSizes {
  std::uint64_t quadruples = 1000;      // cocycle identity
  std::uint64_t alternating = 500;
  std::uint64_t invariance = 500;
  std::uint64_t restriction_words = 100;  // each over all |n|, |m| <= max_exponent
  std::uint64_t power_sums = 200;         // each over all N <= max_power_sum
  std::uint64_t tetrahedra = 1000;
  std::uint64_t propagations = 1000;
  std::size_t max_length = 30;
  long long max_exponent = 10;
  long long max_power_sum = 20;

  static SampleSizes uniform(std::uint64_t n) {
    SampleSizes s;
    s.quadruples = s.alternating = s.invariance = s.restriction_words = s.power_sums = s.tetrahedra = s.propagations = n;
    return s;
  }
};

inline const std::vector<std::string>& identity_check_names() {
  static const std::vector<std::string> names{"cocycle-identity", "alternating",   "invariance", "restriction-homogeneous",
                                              "power-sum",        "tetrahedron",   "propagation"};
  return names;
}

// Runs the selected exact checks ("all" or one name from
// identity_check_names()) on random inputs. Every failure is recorded with
// its inputs; at most `kMaxFailing` per check are kept in the summary.
inline ExperimentReport identity_suite(const BoundedCocycle& c, const SampleSizes& sizes, std::uint64_t seed,
                                       const std::string& only = "all", bool keep_records = false) {
  constexpr std::size_t kMaxFailing = 10;
  const auto& names = identity_check_names();
  if (only != "all" && std::find(names.begin(), names.end(), only) == names.end())
    throw InputError("unknown check suite '" + only + "'");
  const detail::Stopwatch clock;
  const int rank = c.rank();
  const Word e(rank);
  const Alphabet alphabet = Alphabet::standard(rank);

  ExperimentReport report;
  report.kind = "identity-suite";
  report.params = Json{{"cocycle", c.provenance()},
                       {"suite", only},
                       {"seed", seed},
                       {"max_length", sizes.max_length},
                       {"samples",
                        {{"quadruples", sizes.quadruples},
                         {"alternating", sizes.alternating},
                         {"invariance", sizes.invariance},
                         {"restriction_words", sizes.restriction_words},
                         {"power_sums", sizes.power_sums},
                         {"tetrahedra", sizes.tetrahedra},
                         {"propagations", sizes.propagations}}}};

  for (std::size_t index = 0; index < names.size(); ++index) {
    const std::string& name = names[index];
    if (only != "all" && only != name) continue;
    std::mt19937_64 rng(derive_stream_seed(seed, index));
    auto word = [&] { return random_word_up_to(rank, sizes.max_length, rng); };
    CheckSummary summary;
    summary.name = name;
    auto record = [&](std::vector<Word> inputs, std::vector<std::string> extra, Rational value, bool pass) {
      ++summary.samples;
      if (!pass) ++summary.failures;
      if (pass && !keep_records) return;
      CheckRecord rec{name, {}, std::move(value), pass};
      for (const Word& w : inputs) rec.inputs.push_back(to_string(w, alphabet));
      for (auto& x : extra) rec.inputs.push_back(std::move(x));
      if (!pass && summary.failing.size() < kMaxFailing) summary.failing.push_back(rec);
      if (keep_records) summary.records.push_back(std::move(rec));
    };

    if (name == "cocycle-identity") {
      for (std::uint64_t i = 0; i < sizes.quadruples; ++i) {
        const Word g0 = word(), g1 = word(), g2 = word(), g3 = word();
        const Rational r = cocycle_identity_residual(c, g0, g1, g2, g3);
        record({g0, g1, g2, g3}, {}, r, r == 0);
      }
    } else if (name == "alternating") {
      for (std::uint64_t i = 0; i < sizes.alternating; ++i) {
        const Word g0 = word(), g1 = word(), g2 = word();
        record({g0, g1, g2}, {}, c(g0, g1, g2), check_alternating(c, g0, g1, g2));
      }
    } else if (name == "invariance") {
      for (std::uint64_t i = 0; i < sizes.invariance; ++i) {
        const Word h = word(), g0 = word(), g1 = word(), g2 = word();
        const Rational r = invariance_residual(c, h, g0, g1, g2);
        record({h, g0, g1, g2}, {}, r, r == 0);
      }
    } else if (name == "restriction-homogeneous") {
      for (std::uint64_t i = 0; i < sizes.restriction_words; ++i) {
        const Word g = word();
        for (long long n = -sizes.max_exponent; n <= sizes.max_exponent; ++n)
          for (long long m = -sizes.max_exponent; m <= sizes.max_exponent; ++m) {
            const Rational v = c(e, power(g, n), power(g, m));
            record({g}, {"n=" + std::to_string(n), "m=" + std::to_string(m)}, v, v == 0);
          }
      }
    } else if (name == "power-sum") {
      for (std::uint64_t i = 0; i < sizes.power_sums; ++i) {
        const Word g = word(), h = word();
        for (long long N = 0; N <= sizes.max_power_sum; ++N) {
          const Rational r = homogeneous_sum_residual(c, g, h, N);
          record({g, h}, {"N=" + std::to_string(N)}, r, r == 0);
        }
      }
    } else if (name == "tetrahedron") {
      for (std::uint64_t i = 0; i < sizes.tetrahedra; ++i) {
        const Word g = word(), h = word(), y = word();
        const Rational gap = tetrahedron_gap(c, g, h, y);
        record({g, h, y}, {}, gap, gap >= 0);
      }
    } else if (name == "propagation") {
      // Only 3*eps-twisted triples qualify; eps = |c|/3 of the sampled triple.
      const std::uint64_t max_attempts = 50 * sizes.propagations;
      for (std::uint64_t attempt = 0; summary.samples < sizes.propagations && attempt < max_attempts; ++attempt) {
        const Word g0 = word(), g1 = word(), g2 = word(), h = word();
        const Rational v = c(g0, g1, g2);
        if (v == 0) continue;
        const auto face = propagate_twist(c, {g0, g1, g2}, h, abs(v) / 3);
        record({g0, g1, g2, h}, {"epsilon=" + to_string(abs(v) / 3)}, face ? Rational(*face) : Rational(-1),
               face.has_value());
      }
    }
    report.checks.push_back(std::move(summary));
  }
  report.timestamp = utc_timestamp();
  report.runtime_seconds = clock.seconds();
  return report;
}

inline ExperimentReport identity_suite(const std::string& cocycle_descriptor, const SampleSizes& sizes,
                                       std::uint64_t seed, const std::string& only = "all") {
  return identity_suite(parse_cocycle(cocycle_descriptor), sizes, seed, only);
}

}  // namespace qmlab
