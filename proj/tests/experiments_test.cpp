#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qmlab/experiments.hpp"

namespace qmlab {
namespace {

ExperimentParams small_params(std::size_t n, std::uint64_t trials, std::uint64_t seed = 1) {
  ExperimentParams p;
  p.n = p.m = n;
  p.trials = trials;
  p.seed = seed;
  return p;
}

TEST(Wilson, ZeroSuccessesHasZeroLowerBound) {
  for (std::uint64_t k : {1u, 10u, 1000u}) {
    const auto ci = wilson_interval(0, k);
    EXPECT_EQ(ci.low, 0.0);
    EXPECT_GT(ci.high, 0.0);
    EXPECT_EQ(wilson_interval(k, k).high, 1.0);
  }
}

TEST(Wilson, ContainsPointEstimate) {
  for (std::uint64_t n = 1; n <= 60; ++n)
    for (std::uint64_t s = 0; s <= n; ++s) {
      const auto e = Estimate::of(s, n);
      ASSERT_LE(e.ci.low, e.estimate);
      ASSERT_GE(e.ci.high, e.estimate);
      ASSERT_GE(e.ci.low, 0.0);
      ASSERT_LE(e.ci.high, 1.0);
    }
}

TEST(Wilson, KnownValue) {
  // p = 0.5, n = 100: centre 0.5, half-width z sqrt(0.0025 + z^2/40000)/(1 + z^2/100).
  const double z = 1.959963984540054;
  const double half = z * std::sqrt(0.25 / 100 + z * z / 40000) / (1 + z * z / 100);
  const auto ci = wilson_interval(50, 100);
  EXPECT_NEAR(ci.low, 0.5 - half, 1e-12);
  EXPECT_NEAR(ci.high, 0.5 + half, 1e-12);
}

TEST(TwistedProbability, DegenerateWalksGiveZero) {
  const auto r = twisted_probability(small_params(0, 50));
  EXPECT_EQ(r.cells.at(0).estimate("twisted").successes, 0u);
  EXPECT_EQ(r.cells.at(0).estimate("twisted").ci.low, 0.0);
}

TEST(TwistedProbability, RefusesZeroClass) {
  auto p = small_params(10, 10);
  p.cocycle = "lincomb:1*hom:brooks:ab,-1*hom:brooks:ab";
  EXPECT_THROW(twisted_probability(p), RefusedError);
  p.cocycle = "zero";
  EXPECT_THROW(twisted_probability(p), RefusedError);
  p.cocycle = "hom:brooks:a";
  EXPECT_THROW(twisted_probability(p), RefusedError);
}

TEST(TwistedProbability, RejectsBadParams) {
  auto p = small_params(10, 0);
  EXPECT_THROW(twisted_probability(p), ConfigError);
  p = small_params(10, 10);
  p.epsilon = 0;
  EXPECT_THROW(twisted_probability(p), ConfigError);
  p = small_params(10, 10);
  p.cocycle = "brooks:ab";
  EXPECT_THROW(twisted_probability(p), PreconditionError);
}

TEST(TwistedProbability, PositiveAtModerateLength) {
  const auto r = twisted_probability(small_params(30, 600, 9));
  EXPECT_GT(r.cells.at(0).estimate("twisted").ci.low, 0.0);
}

TEST(Determinism, ThreadCountDoesNotChangeReports) {
  for (const char* kind : {"twist", "pipeline", "census"}) {
    std::string reference;
    for (unsigned threads : {1u, 3u, 8u}) {
      auto p = small_params(25, 120, 4);
      p.threads = threads;
      p.record_trials = true;
      p.radius = 1;
      ExperimentReport r;
      if (std::string(kind) == "twist") r = twisted_probability(p);
      else if (std::string(kind) == "pipeline") r = random_subgroup_pipeline(p);
      else r = twist_branch_census(p);
      const std::string dumped = to_json(r, false).dump();
      if (reference.empty()) reference = dumped;
      EXPECT_EQ(dumped, reference) << kind << " threads=" << threads;
      EXPECT_EQ(to_json(r)["schema_version"], kSchemaVersion);
      EXPECT_TRUE(to_json(r).contains("run"));
    }
  }
}

TEST(Determinism, SeedChangesOutcome) {
  const auto a = to_json(twisted_probability(small_params(25, 200, 1)), false);
  const auto b = to_json(twisted_probability(small_params(25, 200, 2)), false);
  EXPECT_NE(a["cells"], b["cells"]);
}

TEST(BranchCensus, DisjunctionAlwaysHolds) {
  const auto r = twist_branch_census(small_params(40, 500, 3));
  const auto& cell = r.cells.at(0);
  EXPECT_EQ(cell.estimate("any_branch").successes, 500u);
  EXPECT_TRUE(cell.details["disjunction_always_holds"].get<bool>());
  EXPECT_TRUE(cell.details["max_branch_reaches_one_third"].get<bool>());
  EXPECT_GE(cell.details["branch_frequency_sum"].get<double>(), 1.0);
}

TEST(BranchCensus, ZeroStepsUsesWitnessConstants) {
  const auto c = parse_cocycle("hom:brooks:ab");
  const auto witness = *find_twist_witness(c, 3);
  const auto r = twist_branch_census(small_params(0, 20), witness);
  const Word e(2);
  const bool a = abs(c(inverse(witness.h0), e, e)) >= witness.epsilon;
  const bool b = abs(c(witness.g0, witness.h0, e)) >= witness.epsilon;
  const bool cc = abs(c(inverse(witness.h0) * witness.g0, e, e)) >= witness.epsilon;
  EXPECT_EQ(r.cells[0].estimate("branch_a").successes, a ? 20u : 0u);
  EXPECT_EQ(r.cells[0].estimate("branch_b").successes, b ? 20u : 0u);
  EXPECT_EQ(r.cells[0].estimate("branch_c").successes, cc ? 20u : 0u);
  EXPECT_EQ(r.cells[0].estimate("any_branch").successes, 20u);
}

TEST(BranchCensus, RejectsForeignWitness) {
  TwistWitness bogus{parse_word("a"), parse_word("a"), 1, Rational(1, 3)};
  EXPECT_THROW(twist_branch_census(small_params(5, 5), bogus), PreconditionError);
}

TEST(SubgroupPipeline, ZeroStepsGivesNothing) {
  const auto r = random_subgroup_pipeline(small_params(0, 30));
  const auto& cell = r.cells.at(0);
  EXPECT_EQ(cell.estimate("rank2").successes, 0u);
  EXPECT_EQ(cell.estimate("restriction_witness").successes, 0u);
  EXPECT_EQ(cell.estimate("joint").successes, 0u);
}

TEST(SubgroupPipeline, CertificatesVerifyIndependently) {
  auto p = small_params(30, 150, 6);
  p.record_trials = true;
  const auto r = random_subgroup_pipeline(p);
  const auto c = parse_cocycle(p.cocycle);
  const Alphabet alphabet = Alphabet::standard(2);
  std::uint64_t certs = 0;
  for (const auto& trial : r.cells[0].trials) {
    if (!trial.contains("certificate")) continue;
    ++certs;
    std::string why;
    EXPECT_TRUE(verify_certificate(certificate_from_json(trial["certificate"], alphabet), c, alphabet, &why)) << why;
  }
  EXPECT_EQ(certs, r.cells[0].estimate("joint").successes);
  EXPECT_GT(certs, 0u);
}

TEST(Certificates, TamperingIsCaught) {
  const auto c = parse_cocycle("hom:brooks:ab");
  const Alphabet alphabet = Alphabet::standard(2);
  const Word x = parse_word("a"), y = parse_word("b^-1");
  const Word gens[] = {x, y};
  RestrictionCertificate good{x, y, stallings_graph(gens).export_text(), c(x, y, Word(2))};
  ASSERT_TRUE(verify_certificate(good, c, alphabet));

  auto wrong_value = good;
  wrong_value.value += 1;
  EXPECT_FALSE(verify_certificate(wrong_value, c, alphabet));

  // <a^2, b> sits inside the rose but does not span it.
  RestrictionCertificate not_spanned{parse_word("a^2"), parse_word("b"), good.graph, 0};
  not_spanned.value = c(not_spanned.x, not_spanned.y, Word(2));
  std::string why;
  EXPECT_FALSE(verify_certificate(not_spanned, c, alphabet, &why));

  auto unfolded = good;
  unfolded.graph = "0 a 1\n0 a 0\n1 b 0\n";
  EXPECT_FALSE(verify_certificate(unfolded, c, alphabet));

  const Word cx = parse_word("a b"), cy = parse_word("a b a b");
  const Word cgens[] = {cx, cy};
  RestrictionCertificate commuting{cx, cy, stallings_graph(cgens).export_text(), 1};
  EXPECT_FALSE(verify_certificate(commuting, c, alphabet));
}

TEST(IdentitySuite, CoboundaryPassesEverything) {
  const auto r = identity_suite("hom:brooks:ab", SampleSizes::uniform(40), 7);
  ASSERT_EQ(r.checks.size(), identity_check_names().size());
  EXPECT_EQ(r.total_failures(), 0u);
  for (const auto& c : r.checks) EXPECT_GT(c.samples, 0u) << c.name;
}

TEST(IdentitySuite, CorruptedCocycleFailsWithWitness) {
  const auto r = identity_suite("corrupt:hom:brooks:ab", SampleSizes::uniform(60), 7);
  EXPECT_GT(r.total_failures(), 0u);
  bool witnessed = false;
  for (const auto& c : r.checks)
    if (c.failures > 0) {
      ASSERT_FALSE(c.failing.empty());
      witnessed = !c.failing.front().inputs.empty();
    }
  EXPECT_TRUE(witnessed);
  const auto j = to_json(r);
  EXPECT_GT(j["total_failures"].get<std::uint64_t>(), 0u);
}

TEST(IdentitySuite, ZeroSamplesIsEmpty) {
  const auto r = identity_suite("hom:brooks:ab", SampleSizes::uniform(0), 7);
  EXPECT_EQ(r.total_failures(), 0u);
  for (const auto& c : r.checks) EXPECT_EQ(c.samples, 0u);
}

TEST(IdentitySuite, SingleCheckAndUnknownName) {
  const auto r = identity_suite("hom:brooks:ab", SampleSizes::uniform(10), 1, "tetrahedron");
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_EQ(r.checks[0].name, "tetrahedron");
  EXPECT_THROW(identity_suite("hom:brooks:ab", SampleSizes::uniform(10), 1, "bogus"), InputError);
}

TEST(IdentitySuite, RecordsCarryWordTextAndRationals) {
  const auto r = identity_suite(parse_cocycle("hom:brooks:ab"), SampleSizes::uniform(3), 2, "cocycle-identity", true);
  const auto j = to_json(r);
  const auto& recs = j["checks"][0]["records"];
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0]["inputs"].size(), 4u);
  EXPECT_EQ(recs[0]["value"], "0");
  EXPECT_TRUE(recs[0]["pass"].get<bool>());
}

TEST(Reports, CsvHasOneRowPerCell) {
  auto r = twisted_probability(small_params(10, 20));
  r.cells.push_back(twisted_probability(small_params(12, 20)).cells.front());
  const std::string csv = to_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "kind,n,m,twisted_successes,twisted_trials,twisted_estimate,twisted_ci_low,twisted_ci_high,"
            "nonzero_successes,nonzero_trials,nonzero_estimate,nonzero_ci_low,nonzero_ci_high");
}

TEST(Reports, CiWidthScalesLikeInverseSqrtTrials) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto small = twisted_probability(small_params(30, 400, seed)).cells[0].estimate("twisted");
    const auto large = twisted_probability(small_params(30, 800, seed + 100)).cells[0].estimate("twisted");
    const double ratio = (small.ci.high - small.ci.low) / (large.ci.high - large.ci.low);
    EXPECT_GT(ratio, std::sqrt(2.0) / 2.0);
    EXPECT_LT(ratio, 2.0 * std::sqrt(2.0));
  }
}

}  // namespace
}  // namespace qmlab
