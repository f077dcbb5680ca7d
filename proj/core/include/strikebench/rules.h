#ifndef STRIKEBENCH_RULES_H_
#define STRIKEBENCH_RULES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <unordered_map>
#include <vector>

#include "strikebench/temporal_index.h"
#include "strikebench/types.h"

namespace strikebench {

/// Length-1 temporal rule (E1, head, E2, T2) <- (E1, body, E2, T1), T1 < T2.
struct TemporalRule {
  RelationId head = 0;
  RelationId body = 0;
  double confidence = 0.0;
  std::uint64_t body_support = 0;
  std::uint64_t rule_support = 0;

  friend bool operator==(const TemporalRule&, const TemporalRule&) = default;
};

/// Mined rules grouped by head relation. Immutable once constructed.
class RuleSet {
 public:
  RuleSet() = default;
  /// Sorts and groups `rules`. Rules below `min_confidence` or
  /// `min_body_support` are dropped.
  RuleSet(std::vector<TemporalRule> rules, double min_confidence,
          std::uint64_t min_body_support);

  /// Rules with head `r`, descending confidence, ties by ascending body.
  std::span<const TemporalRule> for_head(RelationId r) const;
  /// Indexes into `all()` of the rules whose body is `r`.
  std::span<const std::uint32_t> for_body(RelationId r) const;

  /// All rules, grouped by ascending head.
  std::span<const TemporalRule> all() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }

  double min_confidence() const { return min_confidence_; }
  std::uint64_t min_body_support() const { return min_body_support_; }

 private:
  std::vector<TemporalRule> rules_;
  std::unordered_map<RelationId, std::pair<std::uint32_t, std::uint32_t>> head_ranges_;
  std::unordered_map<RelationId, std::vector<std::uint32_t>> by_body_;
  double min_confidence_ = 0.0;
  std::uint64_t min_body_support_ = 0;
};

struct MiningConfig {
  double tau = 0.01;
  std::uint64_t min_body_support = 2;
  /// When set, at most this many body groundings per body relation are
  /// counted, drawn uniformly with `seed`.
  std::optional<std::uint64_t> sample_cap;
  std::uint64_t seed = 42;
  unsigned jobs = 1;
};

/// Mines every length-1 rule over `train_index`. A body grounding is one
/// stored fact (s, body, o, t1); it supports the rule when some
/// (s, head, o, t2) with t2 > t1 exists. Pairs with zero rule support are
/// never emitted. Throws ConfigError when tau is outside [0, 1].
RuleSet mine_rules(const TemporalIndex& train_index, const MiningConfig& config);

/// JSON Lines, one rule per line, in `RuleSet::all()` order.
void write_rules(const RuleSet& rules, std::ostream& out);
void save_rules(const RuleSet& rules, const std::filesystem::path& path);

/// Reads a rules file, keeping rules with confidence >= `min_confidence`.
RuleSet read_rules(std::istream& in, double min_confidence = 0.0,
                   const std::string& source = "<stream>");
RuleSet load_rules(const std::filesystem::path& path, double min_confidence = 0.0);

}  // namespace strikebench

#endif  // STRIKEBENCH_RULES_H_
