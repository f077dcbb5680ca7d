#ifndef STRIKEBENCH_RECURRENCY_H_
#define STRIKEBENCH_RECURRENCY_H_

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "strikebench/metrics.h"
#include "strikebench/predictions.h"
#include "strikebench/temporal_index.h"
#include "strikebench/types.h"

namespace strikebench {

/// Recency/frequency heuristic predictor.
///
/// For a query (s, r, ?, t) every object o' seen with (s, r) before t scores
///   kappa * xi^(t - t_last(o')) + (1 - kappa) * count(o') / sum counts.
/// Objects never seen with (s, r) receive no entry.
struct RecurrencyConfig {
  double decay_xi = 0.9;
  double mix_kappa = 0.5;

  void validate() const;
};

struct RecurrencyGrid {
  std::vector<double> xi = {0.5, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999};
  std::vector<double> kappa = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                               0.6, 0.7, 0.8, 0.9, 1.0};
};

/// Sparse scores sorted by entity id. `query` is read as (s, r, ?, t); its
/// object is ignored.
std::vector<std::pair<EntityId, double>> recurrency_scores(
    const Quadruple& query, const TemporalIndex& history,
    const RecurrencyConfig& config);

PredictionSet predict_recurrency(std::span<const EvalQuery> queries,
                                 const TemporalIndex& history,
                                 const RecurrencyConfig& config, unsigned jobs = 1);

struct RecurrencyTuning {
  RecurrencyConfig best;
  double best_mrr = 0.0;
  /// (xi, kappa, validation MRR) for every grid point, xi-major.
  std::vector<std::array<double, 3>> scan;
};

/// Exhaustive grid search maximizing filtered MRR on `valid_queries`; ties
/// go to the smaller xi, then the smaller kappa. Throws ConfigError on an
/// empty grid and ValidationError on an empty query list.
RecurrencyTuning tune_recurrency(std::span<const EvalQuery> valid_queries,
                                 const TemporalIndex& history,
                                 const RecurrencyGrid& grid, TiePolicy policy,
                                 unsigned jobs = 1);

}  // namespace strikebench

#endif  // STRIKEBENCH_RECURRENCY_H_
