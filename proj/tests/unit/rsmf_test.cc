#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.h"
#include "oracle.h"
#include "strikebench/error.h"
#include "strikebench/rsmf.h"
#include "strikebench/synthetic.h"

using namespace strikebench;

namespace {

std::vector<TimeIndex> v(std::initializer_list<TimeIndex> x) { return x; }

TemporalRule rule(RelationId head, RelationId body, double conf) {
  return {head, body, conf, 10, static_cast<std::uint64_t>(conf * 10)};
}

RuleSet rules_of(std::vector<TemporalRule> r) { return RuleSet(std::move(r), 0.0, 0); }

}  // namespace

TEST(GroundingChain, SingleBodyHypotheticalHead) {
  const auto c = build_grounding_chain(v({2}), v({}), INT64_MIN, 10);
  EXPECT_EQ(c.body_times, v({2}));
  EXPECT_EQ(c.head_times, v({10}));
}

TEST(GroundingChain, TwoLinks) {
  const auto c = build_grounding_chain(v({2, 5}), v({4}), INT64_MIN, 10);
  EXPECT_EQ(c.body_times, v({2, 5}));
  EXPECT_EQ(c.head_times, v({4, 10}));
}

TEST(GroundingChain, BodyBeforeHeadRejected) {
  const auto c = build_grounding_chain(v({2, 3}), v({4}), INT64_MIN, 10);
  EXPECT_EQ(c.body_times, v({2}));
  EXPECT_EQ(c.head_times, v({10}));
}

TEST(GroundingChain, WindowAndEmpty) {
  EXPECT_TRUE(build_grounding_chain(v({}), v({1}), INT64_MIN, 10).empty());
  EXPECT_TRUE(build_grounding_chain(v({10, 11}), v({}), INT64_MIN, 10).empty());
  const auto c = build_grounding_chain(v({1, 6, 8}), v({7}), 5, 10);
  EXPECT_EQ(c.body_times, v({6, 8}));
  EXPECT_EQ(c.head_times, v({7, 10}));
}

// Greedy construction against the exhaustive canonical chain.
TEST(GroundingChain, MatchesCanonicalOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 4000; ++trial) {
    std::uniform_int_distribution<int> count(0, 10), time(0, 24);
    std::vector<TimeIndex> bodies, heads;
    for (int i = count(rng); i > 0; --i) bodies.push_back(time(rng));
    for (int i = count(rng); i > 0; --i) heads.push_back(time(rng));
    std::sort(bodies.begin(), bodies.end());
    bodies.erase(std::unique(bodies.begin(), bodies.end()), bodies.end());
    std::sort(heads.begin(), heads.end());
    heads.erase(std::unique(heads.begin(), heads.end()), heads.end());
    const TimeIndex t = 14 + trial % 12;
    const TimeIndex begin = trial % 3 == 0 ? INT64_MIN : t - 1 - trial % 9;

    const auto got = build_grounding_chain(bodies, heads, begin, t);
    const auto dp = oracle::canonical_chain(bodies, heads, begin, t);
    const auto brute = oracle::subset_chain(bodies, heads, begin, t);
    ASSERT_EQ(dp, brute);
    ASSERT_EQ(got.body_times, dp.bodies);
    ASSERT_EQ(got.head_times, dp.heads);
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_LT(got.body_times[i], got.head_times[i]);
      if (i + 1 < got.size()) EXPECT_LE(got.head_times[i], got.body_times[i + 1]);
      EXPECT_GE(got.body_times[i], begin);
    }
    if (!got.empty()) EXPECT_EQ(got.head_times.back(), t);
  }
}

TEST(ExpectationScore, SingleTerm) {
  const auto idx = testing_util::index_of({{0, 1, 1, 0}}, 2, 2);
  const auto rules = rules_of({rule(0, 1, 0.5)});
  RsmfConfig cfg;
  EXPECT_NEAR(expectation_score({0, 0, 1, 10}, rules, idx, cfg, 10), 0.5 * std::exp(-1.0), 1e-12);
}

TEST(ExpectationScore, NoRulesIsZero) {
  const auto idx = testing_util::index_of({{0, 1, 1, 0}}, 2, 2);
  EXPECT_EQ(expectation_score({0, 0, 1, 10}, RuleSet{}, idx, RsmfConfig{}, 10), 0.0);
}

TEST(ExpectationScore, MayExceedOne) {
  // Two rules, both bodies at t (decay 1) are not allowed since bodies need
  // t' < t; with lambda tiny the score approaches 2.
  const auto idx = testing_util::index_of({{0, 1, 1, 9}, {0, 2, 1, 9}}, 2, 3);
  const auto rules = rules_of({rule(0, 1, 1.0), rule(0, 2, 1.0)});
  RsmfConfig cfg;
  cfg.lambda_decay = 1e-12;
  EXPECT_NEAR(expectation_score({0, 0, 1, 10}, rules, idx, cfg, 10), 2.0, 1e-9);
}

TEST(ExpectationScore, DecayAndConfidenceMonotone) {
  RsmfConfig cfg;
  double prev = INFINITY;
  for (TimeIndex y = 9; y >= 0; --y) {
    const auto idx = testing_util::index_of({{0, 1, 1, y}}, 2, 2);
    const double sc = expectation_score({0, 0, 1, 10}, rules_of({rule(0, 1, 0.5)}), idx, cfg, 10);
    EXPECT_LT(sc, prev);
    prev = sc;
  }
  const auto idx = testing_util::index_of({{0, 1, 1, 5}}, 2, 2);
  double last = 0.0;
  for (double c : {0.1, 0.2, 0.5, 0.9}) {
    const double sc = expectation_score({0, 0, 1, 10}, rules_of({rule(0, 1, c)}), idx, cfg, 10);
    EXPECT_GT(sc, last);
    last = sc;
  }
}

TEST(PeerCandidates, SingleGrounding) {
  // history (A=0, rb=1, B=1, t-1), rule (r=0 <- rb=1)
  const auto idx = testing_util::index_of({{0, 1, 1, 9}}, 3, 2);
  const auto rules = rules_of({rule(0, 1, 0.5)});
  const auto c = peer_candidates({0, 0, 2, 10}, Element::kObject, rules, idx, RsmfConfig{});
  EXPECT_EQ(c, (std::vector<std::uint32_t>{1}));
  EXPECT_TRUE(peer_candidates({0, 0, 2, 10}, Element::kObject, RuleSet{}, idx, RsmfConfig{}).empty());
  const auto subj = peer_candidates({2, 0, 1, 10}, Element::kSubject, rules, idx, RsmfConfig{});
  EXPECT_EQ(subj, (std::vector<std::uint32_t>{0}));
  const auto rel = peer_candidates({0, 3, 1, 10}, Element::kRelation, rules, idx, RsmfConfig{});
  EXPECT_EQ(rel, (std::vector<std::uint32_t>{0}));
  RsmfConfig narrow;
  narrow.window = 1;
  EXPECT_EQ(peer_candidates({0, 0, 2, 11}, Element::kObject, rules, idx, narrow).size(), 0u);
}

TEST(StrikingnessFromScores, Examples) {
  EXPECT_EQ(strikingness_from_scores(0.0, {}), 0.0);
  const std::vector<double> zero = {0.0, 0.0};
  EXPECT_EQ(strikingness_from_scores(0.0, zero), 0.0);
  const std::vector<double> one = {1.0};
  EXPECT_NEAR(strikingness_from_scores(1.0, one), 0.0, 1e-15);
  const std::vector<double> peers = {3.0, 4.0};
  EXPECT_NEAR(strikingness_from_scores(0.0, peers), 1.0, 1e-12);
}

TEST(StrikingnessFromScores, Properties) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::uniform_int_distribution<int> len(0, 40);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> peers(static_cast<std::size_t>(len(rng)));
    for (auto& p : peers) p = trial % 4 == 0 ? std::floor(u(rng)) : u(rng);
    const double target = trial % 5 == 0 ? 0.0 : u(rng);
    const double sk = strikingness_from_scores(target, peers);
    EXPECT_GE(sk, 0.0);
    EXPECT_LE(sk, 1.0 + 1e-12);
    EXPECT_NEAR(sk, oracle::strikingness(target, peers), 1e-12);
    // Scale invariance.
    for (double c : {1e-6, 0.5, 7.0, 1e6}) {
      std::vector<double> scaled = peers;
      for (auto& p : scaled) p *= c;
      EXPECT_NEAR(strikingness_from_scores(target * c, scaled), sk, 1e-10);
    }
    // Raising the target never raises strikingness.
    EXPECT_LE(strikingness_from_scores(target + u(rng), peers), sk + 1e-12);
  }
}

TEST(EventStrikingness, AllEmptyIsZero) {
  const auto idx = testing_util::index_of({{0, 1, 1, 9}}, 3, 2);
  const auto rec = event_strikingness({0, 0, 2, 10}, RuleSet{}, idx, RsmfConfig{});
  EXPECT_EQ(rec.sk, 0.0);
  EXPECT_EQ(rec.subject.candidate_count + rec.object.candidate_count + rec.relation.candidate_count, 0u);
}

TEST(EventStrikingness, ConvexCombination) {
  SyntheticConfig sc;
  sc.seed = 12;
  const auto ds = augment_inverse(generate_synthetic(sc));
  const auto idx = TemporalIndex::build(ds, {Split::kTrain, Split::kValid, Split::kTest});
  const auto rules = mine_rules(TemporalIndex::build(ds, {Split::kTrain}), MiningConfig{});
  RsmfConfig cfg;
  for (const auto& q : make_queries(ds, Split::kTest)) {
    const auto rec = event_strikingness(q.event, rules, idx, cfg);
    EXPECT_NEAR(rec.sk, 0.4 * rec.subject.strikingness + 0.4 * rec.object.strikingness +
                            0.2 * rec.relation.strikingness, 1e-12);
    for (double x : {rec.sk, rec.subject.strikingness, rec.object.strikingness,
                     rec.relation.strikingness}) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0 + 1e-12);
    }
  }
}

TEST(RsmfConfig, Validation) {
  RsmfConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.lambda_decay = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.alpha_subject = 0.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.window = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(BatchStrikingness, IndependentOfJobs) {
  SyntheticConfig sc;
  sc.seed = 13;
  const auto ds = augment_inverse(generate_synthetic(sc));
  const auto idx = TemporalIndex::build(ds, {Split::kTrain, Split::kValid, Split::kTest});
  const auto rules = mine_rules(TemporalIndex::build(ds, {Split::kTrain}), MiningConfig{});
  const auto queries = make_queries(ds, Split::kTest);
  EXPECT_EQ(queries.size(), 2 * ds.raw_size(Split::kTest));
  const auto a = batch_strikingness(queries, rules, idx, RsmfConfig{}, 1);
  const auto b = batch_strikingness(queries, rules, idx, RsmfConfig{}, 8);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].query_index, b[i].query_index);
    EXPECT_EQ(a[i].direction, b[i].direction);
    EXPECT_EQ(a[i].sk, b[i].sk);
  }
}

// Whole pipeline against the flat-fact oracle on one small graph; the
// acceptance binary runs the larger sweep.
TEST(OracleEquivalence, SmallGraph) {
  SyntheticConfig sc;
  sc.entity_count = 15;
  sc.relation_count = 3;
  sc.train_facts = 150;
  sc.valid_facts = 30;
  sc.test_facts = 30;
  sc.seed = 99;
  const auto ds = augment_inverse(generate_synthetic(sc));
  const auto idx = TemporalIndex::build(ds, {Split::kTrain, Split::kValid, Split::kTest});
  MiningConfig mc;
  mc.tau = 0.01;
  const auto rules = mine_rules(TemporalIndex::build(ds, {Split::kTrain}), mc);
  const std::vector<TemporalRule> flat(rules.all().begin(), rules.all().end());
  std::vector<Quadruple> all = ds.train;
  all.insert(all.end(), ds.valid.begin(), ds.valid.end());
  all.insert(all.end(), ds.test.begin(), ds.test.end());
  const oracle::History history(all);
  std::size_t nonzero = 0;
  for (const Window w : {Window{}, Window{4}}) {
    RsmfConfig cfg;
    cfg.window = w;
    oracle::Settings os;
    os.window = w;
    for (const auto& q : make_queries(ds, Split::kTest)) {
      const auto rec = event_strikingness(q.event, rules, idx, cfg);
      const auto ref = oracle::event(q.event, flat, history, os);
      EXPECT_NEAR(rec.subject.strikingness, ref.sk_s, 1e-9);
      EXPECT_NEAR(rec.object.strikingness, ref.sk_o, 1e-9);
      EXPECT_NEAR(rec.relation.strikingness, ref.sk_r, 1e-9);
      EXPECT_NEAR(rec.sk, ref.sk, 1e-9);
      nonzero += rec.sk > 0.0;
    }
  }
  EXPECT_GT(nonzero, 10u);
}
