#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.h"
#include "strikebench/error.h"
#include "strikebench/synthetic.h"
#include "strikebench/temporal_index.h"

using namespace strikebench;

TEST(TemporalIndex, TripleTimes) {
  const auto idx = testing_util::index_of({{0, 0, 1, 7}, {0, 0, 1, 3}}, 3, 1);
  const auto times = idx.triple_times(0, 0, 1);
  ASSERT_EQ(times.size(), 2u);
  EXPECT_EQ(times[0], 3);
  EXPECT_EQ(times[1], 7);
  EXPECT_TRUE(idx.triple_times(0, 0, 2).empty());
}

TEST(TemporalIndex, SameTimeTruth) {
  const auto idx = testing_util::index_of({{0, 0, 1, 3}, {0, 0, 2, 3}}, 3, 1);
  const auto truth = idx.same_time_truth(0, 0, 3);
  EXPECT_EQ(std::vector<EntityId>(truth.begin(), truth.end()), (std::vector<EntityId>{1, 2}));
  // Inverse facts live in the same index.
  EXPECT_EQ(idx.same_time_truth(1, 1, 3).size(), 1u);
}

TEST(TemporalIndex, RequiresAugmentedDataset) {
  SyntheticConfig cfg;
  const auto ds = generate_synthetic(cfg);
  EXPECT_THROW(TemporalIndex::build(ds, {Split::kTrain}), ValidationError);
  const auto idx = TemporalIndex::build(augment_inverse(ds), {Split::kTrain});
  EXPECT_LE(idx.subject_key_count(), ds.entity_count);
  EXPECT_EQ(idx.facts().size(), 2 * ds.train.size());
}

TEST(TemporalIndex, InWindow) {
  const std::vector<TimeIndex> t = {1, 3, 3, 5, 9};
  const auto w = in_window(std::span<const TimeIndex>(t), 3, 9);
  EXPECT_EQ(std::vector<TimeIndex>(w.begin(), w.end()), (std::vector<TimeIndex>{3, 3, 5}));
}

// Every lookup returns exactly the matching source facts, sorted by time.
TEST(TemporalIndex, MembershipFuzz) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SyntheticConfig cfg;
    cfg.seed = seed;
    const auto ds = augment_inverse(generate_synthetic(cfg));
    const auto idx = TemporalIndex::build(ds, {Split::kTrain, Split::kValid});
    std::set<Quadruple> source(ds.train.begin(), ds.train.end());
    source.insert(ds.valid.begin(), ds.valid.end());

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<EntityId> ent(0, static_cast<EntityId>(ds.entity_count - 1));
    std::uniform_int_distribution<RelationId> rel(0, static_cast<RelationId>(ds.relation_count() - 1));
    for (int probe = 0; probe < 300; ++probe) {
      const EntityId s = ent(rng);
      const RelationId r = rel(rng);
      std::vector<TimedEntity> expect_pair;
      std::vector<TimedEdge> expect_subject;
      for (const auto& q : source) {
        if (q.subject == s && q.relation == r) expect_pair.push_back({q.timestamp, q.object});
        if (q.subject == s) expect_subject.push_back({q.timestamp, q.relation, q.object});
      }
      std::sort(expect_pair.begin(), expect_pair.end());
      std::sort(expect_subject.begin(), expect_subject.end());
      const auto pair = idx.pair_history(s, r);
      const auto subj = idx.subject_history(s);
      EXPECT_EQ(std::vector<TimedEntity>(pair.begin(), pair.end()), expect_pair);
      EXPECT_EQ(std::vector<TimedEdge>(subj.begin(), subj.end()), expect_subject);
      for (const auto& te : pair) {
        const auto times = idx.triple_times(s, r, te.entity);
        EXPECT_TRUE(std::is_sorted(times.begin(), times.end()));
        EXPECT_TRUE(std::binary_search(times.begin(), times.end(), te.time));
        const auto truth = idx.same_time_truth(s, r, te.time);
        EXPECT_TRUE(std::binary_search(truth.begin(), truth.end(), te.entity));
      }
    }
  }
}
