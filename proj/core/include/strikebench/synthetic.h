#ifndef STRIKEBENCH_SYNTHETIC_H_
#define STRIKEBENCH_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>

#include "strikebench/dataset.h"

namespace strikebench {

/// Generator settings for synthetic event graphs. Facts are produced one
/// timestamp at a time by three processes: repeating a past fact (drawn in
/// proportion to its past frequency), following a hidden relation mapping
/// from a past fact (so length-1 rules exist), or drawing a fresh triple
/// with Zipf-distributed entities and relations.
struct SyntheticConfig {
  std::size_t entity_count = 50;
  std::size_t relation_count = 8;
  std::size_t train_facts = 600;
  std::size_t valid_facts = 100;
  std::size_t test_facts = 100;
  std::size_t train_timestamps = 30;
  std::size_t valid_timestamps = 5;
  std::size_t test_timestamps = 5;
  double repeat_probability = 0.5;
  double rule_probability = 0.2;
  double zipf_exponent = 1.0;
  std::uint64_t seed = 1;
};

/// Raw (not augmented) dataset with chronological splits and no duplicate
/// quadruples. Split sizes may fall short of the request when the id space
/// is too small to produce enough distinct facts.
Dataset generate_synthetic(const SyntheticConfig& config);

/// Proportions of the ICEWS14 benchmark: 6,869 entities, 230 relations,
/// 74,845 / 8,514 / 7,371 facts over 365 daily timestamps.
SyntheticConfig icews14_scale_config(std::uint64_t seed = 7);

}  // namespace strikebench

#endif  // STRIKEBENCH_SYNTHETIC_H_
