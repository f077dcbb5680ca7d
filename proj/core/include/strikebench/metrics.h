#ifndef STRIKEBENCH_METRICS_H_
#define STRIKEBENCH_METRICS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "strikebench/dataset.h"
#include "strikebench/predictions.h"
#include "strikebench/strikingness_table.h"
#include "strikebench/temporal_index.h"
#include "strikebench/types.h"

namespace strikebench {

/// How an answer tied with other candidates is ranked.
enum class TiePolicy { kRealistic, kOptimistic, kPessimistic };

std::string_view to_string(TiePolicy p);
TiePolicy parse_tie_policy(std::string_view text);

/// Filtered rank of `answer`. Entities in `filter` (other than the answer)
/// are removed from contention. With g strictly better and e equally scored
/// surviving competitors the rank is 1 + g + floor(e / 2) (realistic),
/// 1 + g (optimistic) or 1 + g + e (pessimistic).
std::size_t compute_rank(std::span<const double> scores, EntityId answer,
                         std::span<const EntityId> filter, TiePolicy policy);
std::size_t compute_rank(const Prediction& prediction, std::size_t entity_count,
                         EntityId answer, std::span<const EntityId> filter,
                         TiePolicy policy);

/// One ranking query: the answer is `fact.object`; the time-aware filter is
/// every other object true for (fact.subject, fact.relation, fact.timestamp).
struct EvalQuery {
  QueryKey key;
  Quadruple fact;
};

/// Both directions of every raw fact of `split` (augmented dataset).
std::vector<EvalQuery> make_eval_queries(const Dataset& dataset, Split split);

struct RankRow {
  QueryKey key;
  EntityId answer = 0;
  std::size_t rank = 0;
  /// NaN until joined with a strikingness table.
  double sk = std::numeric_limits<double>::quiet_NaN();
};

struct RankTable {
  std::string model_name;
  TiePolicy tie_policy = TiePolicy::kRealistic;
  /// False when ranks derive from truncated top-K predictions.
  bool mrr_available = true;
  std::size_t entity_count = 0;
  std::vector<RankRow> rows;

  bool has_sk() const;
};

/// Ranks every query against `predictions`; `truth` supplies the filter
/// sets. Throws ValidationError when a query has no prediction or a
/// prediction matches no query.
RankTable rank_predictions(std::span<const EvalQuery> queries,
                           const PredictionSet& predictions,
                           const TemporalIndex& truth, TiePolicy policy,
                           unsigned jobs = 1);

/// Copies sk values into `ranks`. Throws ValidationError when a row has no
/// matching strikingness entry.
void join_strikingness(RankTable& ranks, const StrikingnessTable& table);

void write_rank_table(const RankTable& table, std::ostream& out);
void save_rank_table(const RankTable& table, const std::filesystem::path& path);
RankTable read_rank_table(std::istream& in, const std::string& source = "<stream>");
RankTable load_rank_table(const std::filesystem::path& path);

struct MetricValues {
  double mrr = 0.0;
  double hits1 = 0.0;
  double hits3 = 0.0;
  double hits10 = 0.0;
};

struct BinRow {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  /// NaN for empty bins.
  double mean_sk = 0.0;
  double mrr = 0.0;
  double hits1 = 0.0;
  double hits3 = 0.0;
  double hits10 = 0.0;
};

struct EvalReport {
  std::string model_name;
  TiePolicy tie_policy = TiePolicy::kRealistic;
  std::size_t query_count = 0;
  bool mrr_available = true;
  bool sk_available = false;
  double bias_b = 0.1;

  MetricValues original;
  /// Strikingness-weighted values; meaningful only when sk_available.
  MetricValues weighted;
  /// (ORG - SK) / ORG per metric; NaN where ORG is 0 or SK is unavailable.
  MetricValues delta;

  double bin_width = 0.1;
  std::vector<BinRow> bins;
};

/// Unweighted and (sk + b)-weighted MRR / Hits@{1,3,10}. Weighted metrics
/// are computed only when every row carries sk; a table with sk on some
/// rows but not others is rejected. Throws ConfigError when any weight
/// sk + b is not positive.
EvalReport aggregate(const RankTable& ranks, double b, double bin_width = 0.1);

/// Weight of one query in the weighted metrics: sk + b.
inline double metric_weight(double sk, double b) { return sk + b; }

/// Weighted metric values alone (no bins, no validation of sk presence).
MetricValues weighted_metrics(const RankTable& ranks, double b);
MetricValues original_metrics(const RankTable& ranks);

/// Bins [0, w), [w, 2w), ..., with the last bin closed at 1. Empty bins are
/// emitted with count 0 and NaN means. Requires 0 < bin_width <= 1.
std::vector<BinRow> group_by_strikingness(const RankTable& ranks, double bin_width);

/// Report JSON (NaN written as null) and per-bin CSV.
void write_report_json(const EvalReport& report, std::ostream& out);
void write_bins_csv(std::span<const BinRow> bins, std::ostream& out);

/// Jaccard overlap of the window neighbourhoods of event.subject and
/// event.object, each taken over both argument positions. Reads facts with
/// t - w <= t' < event.timestamp; 0 when both neighbourhoods are empty.
double neighborhood_overlap(const Quadruple& event, const TemporalIndex& history,
                            const Window& window);

/// Fraction of queries on which at least `n` of the tables have rank <= k.
/// Throws ValidationError when the tables disagree on the query set and
/// ConfigError unless 1 <= n <= tables.size().
double n_model_hits(std::span<const RankTable> tables, std::size_t n, std::size_t k);

/// Rows whose sk lies in [lo, hi) (hi == 1 includes 1).
RankTable filter_by_sk(const RankTable& table, double lo, double hi);

}  // namespace strikebench

#endif  // STRIKEBENCH_METRICS_H_
