#include "strikebench/baselines.h"

#include <cmath>
#include <limits>

#include "strikebench/error.h"
#include "strikebench/parallel.h"

namespace strikebench {

PairFrequencyTable::PairFrequencyTable(std::span<const Quadruple> train) {
  for (const auto& f : train) {
    const auto c = ++counts_[{f.subject, f.relation}];
    max_count_ = std::max(max_count_, c);
  }
}

std::uint64_t PairFrequencyTable::count(EntityId s, RelationId r) const {
  const auto it = counts_.find({s, r});
  return it == counts_.end() ? 0 : it->second;
}

double freq_inv(const Quadruple& event, const PairFrequencyTable& table) {
  if (table.empty()) throw ValidationError("frequency table is empty");
  return 1.0 - static_cast<double>(table.count(event.subject, event.relation)) /
                   static_cast<double>(table.max_count());
}

double temp_inv(const Quadruple& event, const TemporalIndex& history, double lambda_t) {
  const auto times = in_window(history.triple_times(event.subject, event.relation, event.object),
                               std::numeric_limits<TimeIndex>::min(), event.timestamp);
  if (times.empty()) return 1.0;
  const auto gap = static_cast<double>(event.timestamp - times.back());
  return 1.0 - std::exp(-lambda_t * gap);
}

std::vector<StrikingnessRow> batch_baseline(std::span<const StrikingnessQuery> queries,
                                            BaselineMeasure measure,
                                            const PairFrequencyTable& table,
                                            const TemporalIndex& history, double lambda_t,
                                            unsigned jobs) {
  if (measure == BaselineMeasure::kFreqInv && table.empty()) {
    throw ValidationError("frequency table is empty");
  }
  if (measure == BaselineMeasure::kTempInv && !(lambda_t > 0.0)) {
    throw ConfigError("temp_inv decay must be positive");
  }
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  std::vector<StrikingnessRow> rows(queries.size());
  parallel_for(queries.size(), jobs, [&](std::size_t i) {
    const auto& q = queries[i];
    auto& row = rows[i];
    row.query_index = q.query_index;
    row.direction = q.direction;
    row.sk_subject = row.sk_object = row.sk_relation = kNaN;
    row.sk = measure == BaselineMeasure::kFreqInv ? freq_inv(q.event, table)
                                                   : temp_inv(q.event, history, lambda_t);
  });
  return rows;
}

}  // namespace strikebench
