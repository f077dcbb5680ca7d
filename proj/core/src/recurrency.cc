#include "strikebench/recurrency.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "strikebench/error.h"
#include "strikebench/parallel.h"

namespace strikebench {

void RecurrencyConfig::validate() const {
  if (!(decay_xi > 0.0 && decay_xi <= 1.0)) throw ConfigError("xi must lie in (0, 1]");
  if (!(mix_kappa >= 0.0 && mix_kappa <= 1.0)) throw ConfigError("kappa must lie in [0, 1]");
}

std::vector<std::pair<EntityId, double>> recurrency_scores(const Quadruple& query,
                                                           const TemporalIndex& history,
                                                           const RecurrencyConfig& config) {
  const auto past = in_window(history.pair_history(query.subject, query.relation),
                              std::numeric_limits<TimeIndex>::min(), query.timestamp);
  if (past.empty()) return {};
  struct Seen {
    TimeIndex last = 0;
    std::size_t count = 0;
  };
  std::unordered_map<EntityId, Seen> seen;
  for (const auto& p : past) {
    auto& s = seen[p.entity];
    s.last = std::max(s.last, p.time);
    ++s.count;
  }
  const auto total = static_cast<double>(past.size());
  std::vector<std::pair<EntityId, double>> out;
  out.reserve(seen.size());
  for (const auto& [o, s] : seen) {
    const double recency = std::pow(config.decay_xi, static_cast<double>(query.timestamp - s.last));
    const double freq = static_cast<double>(s.count) / total;
    out.emplace_back(o, config.mix_kappa * recency + (1.0 - config.mix_kappa) * freq);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PredictionSet predict_recurrency(std::span<const EvalQuery> queries, const TemporalIndex& history,
                                 const RecurrencyConfig& config, unsigned jobs) {
  config.validate();
  std::vector<std::vector<std::pair<EntityId, double>>> scores(queries.size());
  parallel_for(queries.size(), jobs,
               [&](std::size_t i) { scores[i] = recurrency_scores(queries[i].fact, history, config); });
  PredictionSet out("recurrency");
  for (std::size_t i = 0; i < queries.size(); ++i) {
    out.add(queries[i].key, Prediction::make_sparse(std::move(scores[i])));
  }
  return out;
}

RecurrencyTuning tune_recurrency(std::span<const EvalQuery> valid_queries,
                                 const TemporalIndex& history, const RecurrencyGrid& grid,
                                 TiePolicy policy, unsigned jobs) {
  if (grid.xi.empty() || grid.kappa.empty()) throw ConfigError("empty recurrency grid");
  if (valid_queries.empty()) throw ValidationError("no validation queries for tuning");
  auto xs = grid.xi;
  auto ks = grid.kappa;
  std::sort(xs.begin(), xs.end());
  std::sort(ks.begin(), ks.end());

  const std::size_t entity_count = history.entity_count();
  RecurrencyTuning tuning;
  bool have_best = false;
  std::vector<double> rr(valid_queries.size());
  for (const double xi : xs) {
    for (const double kappa : ks) {
      const RecurrencyConfig cfg{xi, kappa};
      cfg.validate();
      parallel_for(valid_queries.size(), jobs, [&](std::size_t i) {
        const auto& q = valid_queries[i];
        const auto pred = Prediction::make_sparse(recurrency_scores(q.fact, history, cfg));
        const auto filter = history.same_time_truth(q.fact.subject, q.fact.relation, q.fact.timestamp);
        rr[i] = 1.0 / static_cast<double>(compute_rank(pred, entity_count, q.fact.object, filter, policy));
      });
      double mrr = 0.0;
      for (const double v : rr) mrr += v;
      mrr /= static_cast<double>(rr.size());
      tuning.scan.push_back({xi, kappa, mrr});
      // Strict improvement keeps the earlier (smaller) grid point on ties.
      if (!have_best || mrr > tuning.best_mrr) {
        tuning.best = cfg;
        tuning.best_mrr = mrr;
        have_best = true;
      }
    }
  }
  return tuning;
}

}  // namespace strikebench
