#include "strikebench/ensemble.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "strikebench/error.h"
#include "strikebench/parallel.h"

namespace strikebench {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t grid_points(double step) {
  return static_cast<std::size_t>(std::llround(1.0 / step));
}

}  // namespace

std::string_view to_string(ScoreNormalization n) {
  switch (n) {
    case ScoreNormalization::kNone:
      return "none";
    case ScoreNormalization::kMinMax:
      return "minmax";
    case ScoreNormalization::kL2:
      return "l2";
  }
  return "?";
}

ScoreNormalization parse_normalization(std::string_view text) {
  if (text == "none") return ScoreNormalization::kNone;
  if (text == "minmax") return ScoreNormalization::kMinMax;
  if (text == "l2") return ScoreNormalization::kL2;
  throw ConfigError("unknown normalization '" + std::string(text) + "'");
}

void EnsembleConfig::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta must lie in [0, 1]");
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw ConfigError("grid step must lie in (0, 1]");
  const double n = 1.0 / grid_step;
  if (std::abs(n - std::round(n)) * grid_step > 1e-9) {
    throw ConfigError("grid step must divide 1");
  }
}

std::vector<double> EnsembleConfig::grid() const {
  validate();
  const std::size_t n = grid_points(grid_step);
  std::vector<double> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out[k] = static_cast<double>(k) / static_cast<double>(n);
  return out;
}

std::vector<double> normalize_scores(std::span<const double> scores,
                                     ScoreNormalization normalization) {
  std::vector<double> out(scores.begin(), scores.end());
  if (normalization == ScoreNormalization::kNone) return out;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sq = 0.0;
  for (const double v : scores) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sq += v * v;
  }
  if (lo > hi) return out;
  for (double& v : out) {
    if (!std::isfinite(v)) continue;
    if (normalization == ScoreNormalization::kMinMax) {
      v = hi > lo ? (v - lo) / (hi - lo) : 0.0;
    } else if (sq > 0.0) {
      v /= std::sqrt(sq);
    }
  }
  return out;
}

std::vector<double> combine_scores(std::span<const double> a, std::span<const double> b,
                                   const EnsembleConfig& config) {
  if (a.size() != b.size()) {
    throw ValidationError("score vectors differ in size: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
  if (!(config.eta >= 0.0 && config.eta <= 1.0)) throw ConfigError("eta must lie in [0, 1]");
  if (config.eta == 1.0) return normalize_scores(a, config.normalization);
  if (config.eta == 0.0) return normalize_scores(b, config.normalization);
  const auto na = normalize_scores(a, config.normalization);
  const auto nb = normalize_scores(b, config.normalization);
  const bool fill = config.normalization != ScoreNormalization::kNone;
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double x = na[i];
    double y = nb[i];
    if (fill && x == kNegInf && y != kNegInf) x = 0.0;
    if (fill && y == kNegInf && x != kNegInf) y = 0.0;
    out[i] = config.eta * x + (1.0 - config.eta) * y;
  }
  return out;
}

PredictionSet fuse_predictions(const PredictionSet& a, const PredictionSet& b,
                               std::size_t entity_count, const EnsembleConfig& config) {
  PredictionSet out(a.model_name() + "+" + b.model_name());
  for (const auto& [key, pa] : a.entries()) {
    const Prediction* pb = b.find(key);
    if (!pb) continue;
    out.add(key, Prediction::make_dense(
                     combine_scores(pa.densify(entity_count), pb->densify(entity_count), config)));
  }
  return out;
}

SearchMetric parse_search_metric(std::string_view text) {
  if (text == "mrr") return SearchMetric::kMrr;
  if (text == "wmrr") return SearchMetric::kWmrr;
  throw ConfigError("unknown search metric '" + std::string(text) + "'");
}

std::string_view to_string(SearchMetric m) {
  return m == SearchMetric::kMrr ? "mrr" : "wmrr";
}

EtaSearchResult search_eta(const PredictionSet& a, const PredictionSet& b,
                           const RankingContext& context, SearchMetric metric,
                           const EnsembleConfig& config) {
  if (!context.truth) throw ConfigError("ranking context has no truth index");
  if (metric == SearchMetric::kWmrr && !context.strikingness) {
    throw ConfigError("wmrr search needs a strikingness table");
  }
  std::vector<EvalQuery> shared;
  std::vector<std::pair<std::vector<double>, std::vector<double>>> dense;
  for (const auto& q : context.queries) {
    const Prediction* pa = a.find(q.key);
    const Prediction* pb = b.find(q.key);
    if (!pa || !pb) continue;
    shared.push_back(q);
  }
  if (shared.empty()) throw ValidationError("prediction sets share no query of the context");

  dense.resize(shared.size());
  parallel_for(shared.size(), context.jobs, [&](std::size_t i) {
    dense[i].first = a.find(shared[i].key)->densify(context.entity_count);
    dense[i].second = b.find(shared[i].key)->densify(context.entity_count);
  });

  std::vector<double> weights(shared.size(), 1.0);
  if (metric == SearchMetric::kWmrr) {
    const auto sk = context.strikingness->sk_by_query();
    for (std::size_t i = 0; i < shared.size(); ++i) {
      const auto it = sk.find(shared[i].key);
      if (it == sk.end()) throw ValidationError("no strikingness for an ensemble query");
      weights[i] = it->second + context.bias_b;
      if (!(weights[i] > 0.0)) throw ConfigError("non-positive metric weight sk + b");
    }
  }

  EtaSearchResult result;
  bool have_best = false;
  std::vector<double> rr(shared.size());
  for (const double eta : config.grid()) {
    EnsembleConfig point = config;
    point.eta = eta;
    parallel_for(shared.size(), context.jobs, [&](std::size_t i) {
      const auto& q = shared[i];
      const auto fused = combine_scores(dense[i].first, dense[i].second, point);
      const auto filter =
          context.truth->same_time_truth(q.fact.subject, q.fact.relation, q.fact.timestamp);
      rr[i] = 1.0 / static_cast<double>(compute_rank(fused, q.fact.object, filter, context.tie_policy));
    });
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < rr.size(); ++i) {
      num += weights[i] * rr[i];
      den += weights[i];
    }
    const double value = num / den;
    result.scan.emplace_back(eta, value);
    const bool closer = std::abs(eta - 0.5) < std::abs(result.eta - 0.5) - 1e-12;
    if (!have_best || value > result.best_value || (value == result.best_value && closer)) {
      result.eta = eta;
      result.best_value = value;
      have_best = true;
    }
  }
  return result;
}

}  // namespace strikebench
