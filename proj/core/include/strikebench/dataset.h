#ifndef STRIKEBENCH_DATASET_H_
#define STRIKEBENCH_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "strikebench/types.h"

namespace strikebench {

enum class Split : std::uint8_t { kTrain, kValid, kTest };

std::string_view to_string(Split s);
Split parse_split(std::string_view name);

/// Bidirectional label <-> id map. Ids need not be dense; `size()` reports
/// one past the largest id.
class Vocabulary {
 public:
  void add(std::string label, std::uint32_t id);

  std::optional<std::uint32_t> id_of(const std::string& label) const;
  /// Label for `id`; the decimal id when no label was registered.
  std::string label_of(std::uint32_t id) const;

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

 private:
  std::vector<std::optional<std::string>> labels_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

/// How raw files map onto the internal representation.
struct FormatSpec {
  /// Raw timestamps are divided by this value. Zero requests auto-detection
  /// (gcd of every raw timestamp in the three splits).
  std::int64_t time_divisor = 0;
  std::string train_file = "train.txt";
  std::string valid_file = "valid.txt";
  std::string test_file = "test.txt";
  std::string entity_vocab_file = "entity2id.txt";
  std::string relation_vocab_file = "relation2id.txt";
};

struct Dataset {
  Vocabulary entity_vocab;
  Vocabulary relation_vocab;
  std::vector<Quadruple> train;
  std::vector<Quadruple> valid;
  std::vector<Quadruple> test;
  std::string granularity;

  std::size_t entity_count = 0;
  /// Relation count before inverse augmentation.
  std::size_t raw_relation_count = 0;
  bool augmented = false;
  std::int64_t time_divisor = 1;

  /// Duplicates removed per split at load time (train, valid, test).
  std::size_t duplicates_dropped[3] = {0, 0, 0};

  std::size_t relation_count() const {
    return augmented ? 2 * raw_relation_count : raw_relation_count;
  }

  const std::vector<Quadruple>& split(Split s) const;
  std::vector<Quadruple>& split(Split s);

  /// Number of raw (pre-augmentation) facts in a split.
  std::size_t raw_size(Split s) const {
    return augmented ? split(s).size() / 2 : split(s).size();
  }
};

/// Reads train/valid/test quadruple files and optional vocabularies from
/// `dir`. Throws ParseError on malformed lines, ValidationError on empty
/// splits, out-of-range ids or a non-chronological split, IoError when a
/// split file is missing.
Dataset load_dataset(const std::filesystem::path& dir,
                     const FormatSpec& format = {});

/// Writes `dataset` (raw facts only, normalized time indexes, divisor 1) in
/// the same layout `load_dataset` reads.
void save_dataset(const Dataset& dataset, const std::filesystem::path& dir);

/// Checks the split chronology and id-range invariants.
void validate_dataset(const Dataset& dataset);

/// Maps r to r + R and r + R back to r.
RelationId inverse_relation(RelationId r, std::size_t raw_relation_count);

/// (s, r, o, t) -> (o, r^-1, s, t).
Quadruple inverse_fact(const Quadruple& q, std::size_t raw_relation_count);

/// Appends the inverse companion of every fact. Within each split the first
/// half holds the raw facts in their original order and the second half
/// their inverses, so raw fact i pairs with inverse fact i + n.
Dataset augment_inverse(Dataset dataset);

/// The fact queried for `direction` on raw row `query_index` of `split`.
/// Tail queries use the raw fact; head queries its inverse.
Quadruple query_fact(const Dataset& dataset, Split split,
                     std::size_t query_index, Direction direction);

}  // namespace strikebench

#endif  // STRIKEBENCH_DATASET_H_
