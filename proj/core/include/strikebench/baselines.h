#ifndef STRIKEBENCH_BASELINES_H_
#define STRIKEBENCH_BASELINES_H_

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "strikebench/rsmf.h"
#include "strikebench/strikingness_table.h"
#include "strikebench/temporal_index.h"
#include "strikebench/types.h"

namespace strikebench {

/// Occurrence counts of (subject, relation) pairs over a training history.
/// Frozen at construction.
class PairFrequencyTable {
 public:
  PairFrequencyTable() = default;
  explicit PairFrequencyTable(std::span<const Quadruple> train);

  std::uint64_t count(EntityId s, RelationId r) const;
  std::uint64_t max_count() const { return max_count_; }
  bool empty() const { return counts_.empty(); }

 private:
  std::unordered_map<detail::PairKey, std::uint64_t, detail::PairKeyHash> counts_;
  std::uint64_t max_count_ = 0;
};

/// 1 - count(s, r) / max count; 1 for unseen pairs. Throws ValidationError
/// on an empty table.
double freq_inv(const Quadruple& event, const PairFrequencyTable& table);

/// 1 - exp(-lambda_t * (t - t_last)) over the latest exact (s, r, o)
/// occurrence strictly before t; 1 when the fact never occurred.
double temp_inv(const Quadruple& event, const TemporalIndex& history,
                double lambda_t = 0.005);

enum class BaselineMeasure { kFreqInv, kTempInv };

/// Baseline strikingness for every query, element columns left NaN.
std::vector<StrikingnessRow> batch_baseline(std::span<const StrikingnessQuery> queries,
                                            BaselineMeasure measure,
                                            const PairFrequencyTable& table,
                                            const TemporalIndex& history,
                                            double lambda_t, unsigned jobs);

}  // namespace strikebench

#endif  // STRIKEBENCH_BASELINES_H_
