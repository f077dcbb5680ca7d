#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.h"
#include "strikebench/error.h"
#include "strikebench/metrics.h"

using namespace strikebench;

namespace {

RankTable table_of(const std::vector<std::size_t>& ranks, const std::vector<double>& sk = {}) {
  RankTable t;
  t.model_name = "m";
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    RankRow row;
    row.key = {i / 2, i % 2 ? Direction::kHead : Direction::kTail};
    row.rank = ranks[i];
    if (!sk.empty()) row.sk = sk[i];
    t.rows.push_back(row);
  }
  return t;
}

RankTable random_table(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> rank(1, 50);
  std::uniform_real_distribution<double> sk(0.0, 1.0);
  std::vector<std::size_t> r(n);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = rank(rng);
    s[i] = sk(rng);
  }
  return table_of(r, s);
}

}  // namespace

TEST(ComputeRank, Examples) {
  const std::vector<double> unique = {0.1, 0.9, 0.3};
  EXPECT_EQ(compute_rank(unique, 1, {}, TiePolicy::kRealistic), 1u);
  const std::vector<double> tied = {0.5, 0.5, 0.5, 0.1};
  EXPECT_EQ(compute_rank(tied, 0, {}, TiePolicy::kRealistic), 2u);
  EXPECT_EQ(compute_rank(tied, 0, {}, TiePolicy::kOptimistic), 1u);
  EXPECT_EQ(compute_rank(tied, 0, {}, TiePolicy::kPessimistic), 3u);
  const std::vector<double> blocked = {0.2, 0.9, 0.1};
  const std::vector<EntityId> filter = {1};
  EXPECT_EQ(compute_rank(blocked, 0, filter, TiePolicy::kRealistic), 1u);
  EXPECT_THROW(compute_rank(blocked, 3, {}, TiePolicy::kRealistic), ValidationError);
}

TEST(ComputeRank, SparseUnlistedAreWorst) {
  const auto p = Prediction::make_sparse({{2, 0.5}, {4, 0.7}});
  EXPECT_EQ(compute_rank(p, 6, 2, {}, TiePolicy::kRealistic), 2u);
  EXPECT_EQ(compute_rank(p, 6, 4, {}, TiePolicy::kRealistic), 1u);
  // Answer unlisted: beaten by 2 listed, tied with 3 unlisted others.
  EXPECT_EQ(compute_rank(p, 6, 0, {}, TiePolicy::kRealistic), 1 + 2 + 1u);
  EXPECT_EQ(compute_rank(p, 6, 0, {}, TiePolicy::kPessimistic), 1 + 2 + 3u);
  const std::vector<EntityId> filter = {1, 4};
  EXPECT_EQ(compute_rank(p, 6, 0, filter, TiePolicy::kPessimistic), 1 + 1 + 2u);
  // Same as densifying.
  for (EntityId a = 0; a < 6; ++a) {
    for (auto pol : {TiePolicy::kRealistic, TiePolicy::kOptimistic, TiePolicy::kPessimistic}) {
      EXPECT_EQ(compute_rank(p, 6, a, filter, pol), compute_rank(p.densify(6), a, filter, pol));
    }
  }
}

TEST(ComputeRank, FilteredEntityNeverChangesRank) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> s(20);
    for (auto& x : s) x = std::round(u(rng) * 5) / 5;
    const EntityId answer = trial % 20;
    const std::vector<EntityId> filter = {static_cast<EntityId>((answer + 7) % 20)};
    const auto base = compute_rank(s, answer, filter, TiePolicy::kRealistic);
    for (double v : {-1.0, 0.0, 0.4, 2.0}) {
      s[filter[0]] = v;
      EXPECT_EQ(compute_rank(s, answer, filter, TiePolicy::kRealistic), base);
    }
  }
}

TEST(Aggregate, WeightedExample) {
  const auto report = aggregate(table_of({1, 2}, {1.0, 0.0}), 0.1);
  EXPECT_NEAR(report.weighted.mrr, (1.1 * 1 + 0.1 * 0.5) / 1.2, 1e-15);
  EXPECT_NEAR(report.original.mrr, 0.75, 1e-15);
  EXPECT_NEAR(report.delta.mrr, (0.75 - report.weighted.mrr) / 0.75, 1e-15);
  EXPECT_TRUE(report.sk_available);
}

TEST(Aggregate, ConstantSkMatchesOriginal) {
  std::mt19937_64 rng(4);
  auto t = random_table(rng, 301);
  for (auto& row : t.rows) row.sk = 0.37;
  const auto r = aggregate(t, 0.1);
  EXPECT_NEAR(r.weighted.mrr, r.original.mrr, 1e-12);
  EXPECT_NEAR(r.weighted.hits3, r.original.hits3, 1e-12);
}

TEST(Aggregate, LargeBiasApproachesOriginal) {
  std::mt19937_64 rng(5);
  double prev = INFINITY;
  const auto t = random_table(rng, 400);
  for (double b : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
    const auto r = aggregate(t, b);
    const double dev = std::abs(r.weighted.mrr - r.original.mrr);
    EXPECT_LE(dev, prev + 1e-15);
    prev = dev;
  }
  EXPECT_LT(prev, 0.01);
}

TEST(Aggregate, BoundsAndErrors) {
  std::mt19937_64 rng(6);
  const auto t = random_table(rng, 100);
  const auto r = aggregate(t, 0.1);
  for (double x : {r.weighted.mrr, r.weighted.hits1, r.weighted.hits3, r.weighted.hits10}) {
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
  EXPECT_THROW(aggregate(table_of({1, 2}, {0.0, 0.5}), 0.0), ConfigError);
  EXPECT_THROW(aggregate(table_of({1, 2}, {0.5, 0.5}), -1.0), ConfigError);
  auto partial = table_of({1, 2}, {0.5, 0.5});
  partial.rows[1].sk = NAN;
  EXPECT_THROW(aggregate(partial, 0.1), ValidationError);
  const auto org = aggregate(table_of({1, 4}), 0.1);
  EXPECT_FALSE(org.sk_available);
  EXPECT_NEAR(org.original.mrr, 0.625, 1e-15);
}

TEST(Aggregate, WeightRatioIsEleven) {
  // One hit at sk=1, one miss at sk=0: WHits@1 = 1.1 / 1.2 exposes the ratio.
  const auto r = aggregate(table_of({1, 50}, {1.0, 0.0}), 0.1);
  EXPECT_DOUBLE_EQ(r.weighted.hits1 / (1.0 - r.weighted.hits1), (1.0 + 0.1) / (0.0 + 0.1));
}

TEST(GroupByStrikingness, EdgesAndRecombination) {
  auto bins = group_by_strikingness(table_of({1}, {0.05}), 0.1);
  ASSERT_EQ(bins.size(), 10u);
  EXPECT_EQ(bins[0].count, 1u);
  EXPECT_TRUE(std::isnan(bins[1].mrr));
  bins = group_by_strikingness(table_of({1, 1}, {1.0, 0.3}), 0.1);
  EXPECT_EQ(bins[9].count, 1u);
  EXPECT_EQ(bins[3].count, 1u);
  EXPECT_DOUBLE_EQ(bins[9].upper, 1.0);
  EXPECT_THROW(group_by_strikingness(table_of({1}, {0.1}), 0.0), ConfigError);

  std::mt19937_64 rng(8);
  const auto t = random_table(rng, 777);
  for (double width : {0.1, 0.25, 0.3, 1.0}) {
    double weighted = 0.0;
    std::size_t total = 0;
    for (const auto& b : group_by_strikingness(t, width)) {
      if (b.count) weighted += b.mrr * static_cast<double>(b.count);
      total += b.count;
    }
    EXPECT_EQ(total, t.rows.size());
    EXPECT_NEAR(weighted / static_cast<double>(total), original_metrics(t).mrr, 1e-9);
  }
}

TEST(Report, JsonAndCsv) {
  const auto r = aggregate(table_of({1, 2, 3}, {0.0, 0.5, 1.0}), 0.1);
  std::ostringstream json, csv;
  write_report_json(r, json);
  write_bins_csv(r.bins, csv);
  EXPECT_NE(json.str().find("\"weighted\""), std::string::npos);
  EXPECT_NE(json.str().find("null"), std::string::npos);
  const std::string rows = csv.str();
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 11);
}

TEST(NeighborhoodOverlap, Examples) {
  // s=0 neighbours {1,2,3}; o=9 neighbours {3,4}.
  const auto idx = testing_util::index_of(
      {{0, 0, 1, 1}, {2, 0, 0, 1}, {0, 1, 3, 2}, {9, 0, 3, 1}, {4, 0, 9, 2}}, 10, 2);
  EXPECT_NEAR(neighborhood_overlap({0, 0, 9, 5}, idx, {}), 0.25, 1e-15);
  const auto same = testing_util::index_of({{0, 0, 1, 1}, {0, 0, 2, 1}, {5, 0, 1, 1}, {5, 0, 2, 1}}, 6, 1);
  EXPECT_EQ(neighborhood_overlap({0, 0, 5, 3}, same, {}), 1.0);
  const auto apart = testing_util::index_of({{0, 0, 1, 1}, {5, 0, 2, 1}}, 6, 1);
  EXPECT_EQ(neighborhood_overlap({0, 0, 5, 3}, apart, {}), 0.0);
  EXPECT_EQ(neighborhood_overlap({3, 0, 4, 3}, apart, {}), 0.0);
  // Window excludes the shared neighbour seen long ago.
  EXPECT_EQ(neighborhood_overlap({0, 0, 5, 3}, same, Window{1}), 0.0);
}

TEST(NModelHits, Properties) {
  std::mt19937_64 rng(9);
  std::vector<RankTable> tables;
  for (int m = 0; m < 4; ++m) tables.push_back(random_table(rng, 200));
  const auto single = std::span<const RankTable>(tables.data(), 1);
  EXPECT_DOUBLE_EQ(n_model_hits(single, 1, 10), original_metrics(tables[0]).hits10);
  for (std::size_t k : {1, 3, 10}) {
    double prev = 1.0;
    for (std::size_t n = 1; n <= tables.size(); ++n) {
      const double v = n_model_hits(tables, n, k);
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
  auto wrong = tables;
  for (auto& row : wrong[2].rows) row.rank = 99;
  EXPECT_EQ(n_model_hits(wrong, 4, 10), 0.0);
  EXPECT_THROW(n_model_hits(tables, 5, 10), ConfigError);
  EXPECT_THROW(n_model_hits(tables, 0, 10), ConfigError);
  auto mismatch = tables;
  mismatch[1].rows.pop_back();
  EXPECT_THROW(n_model_hits(mismatch, 1, 10), ValidationError);
}

TEST(RankTable, RoundTripAndFilter) {
  auto t = table_of({1, 5, 2}, {0.2, 0.9, 1.0});
  t.tie_policy = TiePolicy::kPessimistic;
  std::stringstream io;
  write_rank_table(t, io);
  const auto back = read_rank_table(io);
  ASSERT_EQ(back.rows.size(), 3u);
  EXPECT_EQ(back.tie_policy, TiePolicy::kPessimistic);
  EXPECT_EQ(back.rows[1].rank, 5u);
  EXPECT_EQ(back.rows[2].sk, 1.0);
  EXPECT_EQ(filter_by_sk(t, 0.5, 1.0).rows.size(), 2u);
  EXPECT_EQ(filter_by_sk(t, 0.0, 0.5).rows.size(), 1u);
}

TEST(RankPredictions, FiltersAndChecksCoverage) {
  const auto truth = testing_util::index_of({{0, 0, 1, 5}, {0, 0, 2, 5}}, 3, 1);
  std::vector<EvalQuery> queries = {{{0, Direction::kTail}, {0, 0, 1, 5}}};
  PredictionSet preds("m");
  preds.add({0, Direction::kTail}, Prediction::make_dense({0.0, 0.5, 0.9}));
  const auto t = rank_predictions(queries, preds, truth, TiePolicy::kRealistic);
  EXPECT_EQ(t.rows[0].rank, 1u);
  preds.add({1, Direction::kTail}, Prediction::make_dense({0.0, 0.5, 0.9}));
  EXPECT_THROW(rank_predictions(queries, preds, truth, TiePolicy::kRealistic), ValidationError);
  PredictionSet none("m");
  EXPECT_THROW(rank_predictions(queries, none, truth, TiePolicy::kRealistic), ValidationError);
  PredictionSet topk("m");
  topk.add({0, Direction::kTail}, Prediction::make_sparse({{1, 0.5}}, Prediction::Kind::kTopK));
  EXPECT_FALSE(rank_predictions(queries, topk, truth, TiePolicy::kRealistic).mrr_available);
}
