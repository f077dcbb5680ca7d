#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.h"
#include "strikebench/dataset.h"
#include "strikebench/error.h"
#include "strikebench/synthetic.h"

using namespace strikebench;
using testing_util::TempDir;
using testing_util::write_file;

namespace {

void write_splits(const TempDir& dir, const std::string& train, const std::string& valid,
                  const std::string& test) {
  write_file(dir / "train.txt", train);
  write_file(dir / "valid.txt", valid);
  write_file(dir / "test.txt", test);
}

std::vector<Quadruple> sorted(std::vector<Quadruple> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(LoadDataset, MinimalThreeFacts) {
  TempDir dir("ds-min");
  write_splits(dir, "0\t0\t1\t0\n", "1\t0\t2\t1\n", "2\t0\t0\t2\n");
  const auto ds = load_dataset(dir.path(), FormatSpec{.time_divisor = 1});
  EXPECT_EQ(ds.train.size(), 1u);
  EXPECT_EQ(ds.valid.size(), 1u);
  EXPECT_EQ(ds.test.size(), 1u);
  EXPECT_EQ(ds.entity_count, 3u);
  EXPECT_EQ(ds.raw_relation_count, 1u);
  EXPECT_NO_THROW(validate_dataset(ds));
}

TEST(LoadDataset, EmptyTrainSplit) {
  TempDir dir("ds-empty");
  write_splits(dir, "# nothing here\n", "1\t0\t2\t1\n", "2\t0\t0\t2\n");
  try {
    load_dataset(dir.path());
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("empty split"), std::string::npos);
  }
}

TEST(LoadDataset, ParseErrorCarriesLineNumber) {
  TempDir dir("ds-parse");
  write_splits(dir, "0\t0\t1\t0\n# c\n0\t0\n", "1\t0\t2\t1\n", "2\t0\t0\t2\n");
  try {
    load_dataset(dir.path());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  write_splits(dir, "0\tx\t1\t0\n", "1\t0\t2\t1\n", "2\t0\t0\t2\n");
  EXPECT_THROW(load_dataset(dir.path()), ParseError);
}

TEST(LoadDataset, ChronologyViolation) {
  TempDir dir("ds-chrono");
  write_splits(dir, "0\t0\t1\t5\n", "1\t0\t2\t1\n", "2\t0\t0\t6\n");
  EXPECT_THROW(load_dataset(dir.path(), FormatSpec{.time_divisor = 1}), ValidationError);
}

TEST(LoadDataset, MissingSplitIsIoError) {
  TempDir dir("ds-missing");
  write_file(dir / "train.txt", "0\t0\t1\t0\n");
  EXPECT_THROW(load_dataset(dir.path()), IoError);
}

TEST(LoadDataset, TimeDivisor) {
  TempDir dir("ds-div");
  write_splits(dir, "0\t0\t1\t0\n0\t0\t1\t24\n", "1\t0\t2\t48\n", "2\t0\t0\t72\textra\n");
  const auto ds = load_dataset(dir.path());
  EXPECT_EQ(ds.time_divisor, 24);
  EXPECT_EQ(ds.train[1].timestamp, 1);
  EXPECT_EQ(ds.test[0].timestamp, 3);
  EXPECT_THROW(load_dataset(dir.path(), FormatSpec{.time_divisor = 5}), ValidationError);
}

TEST(LoadDataset, DuplicatesDroppedAndCounted) {
  TempDir dir("ds-dup");
  write_splits(dir, "0\t0\t1\t0\n0\t0\t1\t0\n0\t0\t2\t0\n", "1\t0\t2\t1\n", "2\t0\t0\t2\n");
  const auto ds = load_dataset(dir.path(), FormatSpec{.time_divisor = 1});
  EXPECT_EQ(ds.train.size(), 2u);
  EXPECT_EQ(ds.duplicates_dropped[0], 1u);
  EXPECT_EQ(ds.train[1].object, 2u);
}

TEST(LoadDataset, Vocabularies) {
  TempDir dir("ds-vocab");
  write_splits(dir, "0\t0\t1\t0\n", "1\t0\t2\t1\n", "2\t0\t0\t2\n");
  write_file(dir / "entity2id.txt", "Alice\t0\nBob\t1\nCarol\t2\nDan\t3\n");
  write_file(dir / "relation2id.txt", "meet\t0\n");
  const auto ds = load_dataset(dir.path());
  EXPECT_EQ(ds.entity_count, 4u);
  EXPECT_EQ(ds.entity_vocab.label_of(2), "Carol");
  EXPECT_EQ(ds.relation_vocab.id_of("meet"), 0u);
  write_file(dir / "relation2id.txt", "meet\t0\n");
  write_file(dir / "entity2id.txt", "Alice\t0\n");
  EXPECT_THROW(load_dataset(dir.path()), ValidationError);
}

TEST(LoadDataset, RoundTrip) {
  SyntheticConfig cfg;
  cfg.seed = 3;
  const auto ds = generate_synthetic(cfg);
  TempDir dir("ds-rt");
  save_dataset(ds, dir.path());
  const auto back = load_dataset(dir.path(), FormatSpec{.time_divisor = 1});
  for (const Split s : {Split::kTrain, Split::kValid, Split::kTest}) {
    EXPECT_EQ(sorted(ds.split(s)), sorted(back.split(s)));
  }
}

TEST(Augment, SingleFact) {
  Dataset ds;
  ds.train = {{0, 0, 1, 5}};
  ds.valid = {{0, 0, 1, 6}};
  ds.test = {{0, 0, 1, 7}};
  ds.entity_count = 2;
  ds.raw_relation_count = 1;
  const auto aug = augment_inverse(ds);
  ASSERT_EQ(aug.train.size(), 2u);
  EXPECT_EQ(aug.train[1], (Quadruple{1, 1, 0, 5}));
  EXPECT_EQ(aug.relation_count(), 2u);
  EXPECT_THROW(augment_inverse(aug), ValidationError);
}

TEST(Augment, InvolutionAndDoubling) {
  SyntheticConfig cfg;
  cfg.seed = 9;
  const auto ds = generate_synthetic(cfg);
  const auto aug = augment_inverse(ds);
  EXPECT_EQ(aug.relation_count(), 2 * ds.raw_relation_count);
  for (const Split s : {Split::kTrain, Split::kValid, Split::kTest}) {
    EXPECT_EQ(aug.split(s).size(), 2 * ds.split(s).size());
    EXPECT_EQ(aug.raw_size(s), ds.split(s).size());
  }
  for (const auto& q : ds.train) {
    EXPECT_EQ(inverse_fact(inverse_fact(q, ds.raw_relation_count), ds.raw_relation_count), q);
  }
  EXPECT_EQ(query_fact(aug, Split::kTest, 0, Direction::kTail), ds.test[0]);
  EXPECT_EQ(query_fact(aug, Split::kTest, 0, Direction::kHead),
            inverse_fact(ds.test[0], ds.raw_relation_count));
}

TEST(SplitNames, UnknownIsConfigError) {
  EXPECT_EQ(parse_split("valid"), Split::kValid);
  EXPECT_THROW(parse_split("dev"), ConfigError);
}
