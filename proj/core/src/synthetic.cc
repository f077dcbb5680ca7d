#include "strikebench/synthetic.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "strikebench/error.h"

namespace strikebench {
namespace {

std::discrete_distribution<std::uint32_t> zipf(std::size_t n, double exponent) {
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = 1.0 / std::pow(static_cast<double>(k + 1), exponent);
  return {w.begin(), w.end()};
}

// Spreads `facts` over `stamps` timestamps as evenly as possible.
std::vector<std::size_t> quotas(std::size_t facts, std::size_t stamps) {
  std::vector<std::size_t> q(stamps, facts / stamps);
  for (std::size_t i = 0; i < facts % stamps; ++i) ++q[i];
  return q;
}

}  // namespace

Dataset generate_synthetic(const SyntheticConfig& config) {
  if (config.entity_count < 2 || config.relation_count < 1) {
    throw ConfigError("synthetic graph needs at least 2 entities and 1 relation");
  }
  if (config.train_timestamps == 0 || config.valid_timestamps == 0 || config.test_timestamps == 0) {
    throw ConfigError("every split needs at least one timestamp");
  }
  if (config.repeat_probability < 0 || config.rule_probability < 0 ||
      config.repeat_probability + config.rule_probability > 1.0) {
    throw ConfigError("process probabilities must be non-negative and sum to at most 1");
  }

  std::mt19937_64 rng(config.seed);
  auto entity_dist = zipf(config.entity_count, config.zipf_exponent);
  auto relation_dist = zipf(config.relation_count, config.zipf_exponent);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<RelationId> rule_map(config.relation_count);
  {
    std::uniform_int_distribution<RelationId> pick(0, static_cast<RelationId>(config.relation_count - 1));
    for (auto& r : rule_map) r = pick(rng);
  }

  Dataset ds;
  ds.entity_count = config.entity_count;
  ds.raw_relation_count = config.relation_count;
  ds.granularity = "synthetic";

  std::vector<Quadruple> past;
  std::size_t recent_begin = 0;
  std::vector<std::size_t> stamp_starts;
  TimeIndex t = 0;

  struct Part {
    Split split;
    std::size_t facts;
    std::size_t stamps;
  };
  const Part parts[] = {{Split::kTrain, config.train_facts, config.train_timestamps},
                        {Split::kValid, config.valid_facts, config.valid_timestamps},
                        {Split::kTest, config.test_facts, config.test_timestamps}};
  for (const auto& part : parts) {
    auto& out = ds.split(part.split);
    for (const std::size_t quota : quotas(part.facts, part.stamps)) {
      stamp_starts.push_back(past.size());
      // Rule bodies come from the last few timestamps.
      const std::size_t window = 3;
      if (stamp_starts.size() > window) recent_begin = stamp_starts[stamp_starts.size() - 1 - window];
      const std::size_t recent_end = past.size();

      std::set<std::tuple<EntityId, RelationId, EntityId>> seen;
      std::vector<Quadruple> now;
      std::size_t attempts = 0;
      while (now.size() < quota && attempts < 20 * quota + 100) {
        ++attempts;
        Quadruple q{};
        q.timestamp = t;
        const double u = coin(rng);
        if (!past.empty() && u < config.repeat_probability) {
          std::uniform_int_distribution<std::size_t> pick(0, past.size() - 1);
          q = past[pick(rng)];
          q.timestamp = t;
        } else if (recent_end > recent_begin && u < config.repeat_probability + config.rule_probability) {
          std::uniform_int_distribution<std::size_t> pick(recent_begin, recent_end - 1);
          q = past[pick(rng)];
          q.relation = rule_map[q.relation];
          q.timestamp = t;
        } else {
          q.subject = entity_dist(rng);
          do {
            q.object = entity_dist(rng);
          } while (q.object == q.subject);
          q.relation = relation_dist(rng);
        }
        if (seen.emplace(q.subject, q.relation, q.object).second) now.push_back(q);
      }
      past.insert(past.end(), now.begin(), now.end());
      out.insert(out.end(), now.begin(), now.end());
      ++t;
    }
  }
  return ds;
}

SyntheticConfig icews14_scale_config(std::uint64_t seed) {
  SyntheticConfig c;
  c.entity_count = 6869;
  c.relation_count = 230;
  c.train_facts = 74845;
  c.valid_facts = 8514;
  c.test_facts = 7371;
  // 365 days split chronologically in roughly the same proportions.
  c.train_timestamps = 301;
  c.valid_timestamps = 34;
  c.test_timestamps = 30;
  c.seed = seed;
  return c;
}

}  // namespace strikebench
