#ifndef STRIKEBENCH_ENSEMBLE_H_
#define STRIKEBENCH_ENSEMBLE_H_

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "strikebench/metrics.h"
#include "strikebench/predictions.h"

namespace strikebench {

enum class ScoreNormalization { kNone, kMinMax, kL2 };

std::string_view to_string(ScoreNormalization n);
ScoreNormalization parse_normalization(std::string_view text);

struct EnsembleConfig {
  /// Weight of model A.
  double eta = 0.5;
  double grid_step = 0.1;
  ScoreNormalization normalization = ScoreNormalization::kMinMax;

  /// eta in [0, 1]; grid_step in (0, 1] dividing 1 within 1e-9.
  void validate() const;
  /// 0, step, 2 step, ..., 1.
  std::vector<double> grid() const;
};

/// Per-query normalization of the finite entries; -inf entries stay -inf.
std::vector<double> normalize_scores(std::span<const double> scores,
                                     ScoreNormalization normalization);

/// eta * a + (1 - eta) * b after normalizing each side. A zero weight
/// drops its side entirely. With a normalization other than kNone, an entity
/// that is -inf on one side only takes 0 for that side; -inf on both sides
/// stays -inf. Throws ValidationError on a size mismatch.
std::vector<double> combine_scores(std::span<const double> a,
                                   std::span<const double> b,
                                   const EnsembleConfig& config);

/// Fuses every query present in both sets.
PredictionSet fuse_predictions(const PredictionSet& a, const PredictionSet& b,
                               std::size_t entity_count,
                               const EnsembleConfig& config);

enum class SearchMetric { kMrr, kWmrr };

SearchMetric parse_search_metric(std::string_view text);
std::string_view to_string(SearchMetric m);

/// What the grid search ranks against.
struct RankingContext {
  std::span<const EvalQuery> queries;
  const TemporalIndex* truth = nullptr;
  std::size_t entity_count = 0;
  TiePolicy tie_policy = TiePolicy::kRealistic;
  /// Required for kWmrr.
  const StrikingnessTable* strikingness = nullptr;
  double bias_b = 0.1;
  unsigned jobs = 1;
};

struct EtaSearchResult {
  double eta = 0.5;
  double best_value = 0.0;
  /// (eta, metric value) per grid point, ascending eta.
  std::vector<std::pair<double, double>> scan;
};

/// Grid search for eta over the queries both prediction sets cover. Ties go
/// to the grid point closest to 0.5, then the smaller eta. Throws
/// ValidationError when the sets share no query of the context.
EtaSearchResult search_eta(const PredictionSet& a, const PredictionSet& b,
                           const RankingContext& context, SearchMetric metric,
                           const EnsembleConfig& config);

}  // namespace strikebench

#endif  // STRIKEBENCH_ENSEMBLE_H_
