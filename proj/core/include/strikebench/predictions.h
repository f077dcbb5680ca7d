#ifndef STRIKEBENCH_PREDICTIONS_H_
#define STRIKEBENCH_PREDICTIONS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "strikebench/types.h"

namespace strikebench {

/// Scores a model assigns to candidate answers of one query.
///
/// kDense holds one score per entity. kScores and kTopK hold (entity, score)
/// entries sorted by entity id; every unlisted entity scores -inf. kTopK
/// marks a truncated candidate list for which reciprocal-rank metrics are
/// not meaningful.
struct Prediction {
  enum class Kind { kDense, kScores, kTopK };

  Kind kind = Kind::kScores;
  std::vector<double> dense;
  std::vector<std::pair<EntityId, double>> entries;

  static Prediction make_dense(std::vector<double> scores);
  /// Sorts `entries` by entity; throws ValidationError on a repeated id.
  static Prediction make_sparse(std::vector<std::pair<EntityId, double>> entries,
                                Kind kind = Kind::kScores);

  /// Score of `e`, -inf when unlisted (sparse) or out of range (dense).
  double score(EntityId e) const;
  /// Materializes every entity's score.
  std::vector<double> densify(std::size_t entity_count) const;
};

class PredictionSet {
 public:
  PredictionSet() = default;
  explicit PredictionSet(std::string model_name) : model_name_(std::move(model_name)) {}

  /// Throws ValidationError when `key` is already present.
  void add(QueryKey key, Prediction prediction);

  const Prediction* find(const QueryKey& key) const;
  const std::map<QueryKey, Prediction>& entries() const { return by_query_; }
  std::size_t size() const { return by_query_.size(); }

  const std::string& model_name() const { return model_name_; }
  void set_model_name(std::string name) { model_name_ = std::move(name); }

  /// True when any prediction is a truncated top-K list.
  bool has_topk() const;

 private:
  std::string model_name_;
  std::map<QueryKey, Prediction> by_query_;
};

/// JSON Lines, one query per line:
///   {"query_index": 3, "direction": "tail", "scores": {"17": 0.5, ...}}
///   {"query_index": 3, "direction": "head", "topk": [[17, 0.5], ...]}
/// Dense predictions are written as a "scores" map of their finite entries.
void write_predictions(const PredictionSet& predictions, std::ostream& out);
void save_predictions(const PredictionSet& predictions,
                      const std::filesystem::path& path);
PredictionSet read_predictions(std::istream& in,
                               const std::string& source = "<stream>");

/// Dense float32 little-endian matrix at `bin_path` with a JSON sidecar at
/// `bin_path + ".json"`: {"rows": N, "cols": E, "model_name": "...",
/// "row_keys": [[query_index, "tail"|"head"], ...]}. Without "row_keys", row
/// k belongs to query k / 2, tail for even k and head for odd k.
PredictionSet load_dense_predictions(const std::filesystem::path& bin_path);
void save_dense_predictions(const PredictionSet& predictions,
                            std::size_t entity_count,
                            const std::filesystem::path& bin_path);

/// Dispatches on extension: ".bin" is the dense binary layout, anything else
/// JSON Lines. The model name defaults to the file stem.
PredictionSet load_predictions(const std::filesystem::path& path);

}  // namespace strikebench

#endif  // STRIKEBENCH_PREDICTIONS_H_
