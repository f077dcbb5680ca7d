#ifndef STRIKEBENCH_RSMF_H_
#define STRIKEBENCH_RSMF_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "strikebench/rules.h"
#include "strikebench/temporal_index.h"
#include "strikebench/types.h"

namespace strikebench {

/// Hyperparameters of rule-based strikingness measurement.
struct RsmfConfig {
  /// Grounding window w in time steps; empty means the whole history.
  Window window;
  /// Temporal decay coefficient of the expectation score.
  double lambda_decay = 0.1;
  double alpha_subject = 0.4;
  double alpha_object = 0.4;
  double alpha_relation = 0.2;

  /// Throws ConfigError unless lambda > 0, each alpha is in [0, 1], the
  /// alphas sum to 1 within 1e-12 and the window is >= 1 when set.
  void validate() const;
};

/// Alternating body/head timestamps of one (peer, rule) grounding chain:
/// y1 < h1 <= y2 < h2 <= ... <= yn < hn, with hn the query time.
struct GroundingChain {
  TemporalRule rule;
  std::vector<TimeIndex> body_times;
  std::vector<TimeIndex> head_times;

  std::size_t size() const { return body_times.size(); }
  bool empty() const { return body_times.empty(); }
};

/// Canonical chain over explicit occurrence lists: the longest valid chain,
/// and among those the one with lexicographically earliest body times.
/// Only bodies in [window_begin, query_time) and heads in (y1, query_time)
/// are eligible; both inputs must be sorted ascending.
GroundingChain build_grounding_chain(std::span<const TimeIndex> body_times,
                                     std::span<const TimeIndex> head_times,
                                     TimeIndex window_begin,
                                     TimeIndex query_time);

/// Chain for `peer` under `rule`, reading body (s, rule.body, o) and head
/// (s, peer.relation, o) occurrences from `history`.
GroundingChain build_grounding_chain(const Quadruple& peer,
                                     const TemporalRule& rule,
                                     const TemporalIndex& history,
                                     const RsmfConfig& config,
                                     TimeIndex query_time);

/// Replacement ids for `element` of `event` supported by some rule body
/// grounded in [t - w, t). Sorted ascending; may be empty.
std::vector<std::uint32_t> peer_candidates(const Quadruple& event,
                                           Element element,
                                           const RuleSet& rules,
                                           const TemporalIndex& history,
                                           const RsmfConfig& config);

/// sum over rules with head peer.relation, sum over chain entries, of
/// conf * exp(-lambda * (t - t_y)).
double expectation_score(const Quadruple& peer, const RuleSet& rules,
                         const TemporalIndex& history, const RsmfConfig& config,
                         TimeIndex query_time);

struct ElementStrikingness {
  double strikingness = 0.0;
  std::size_t candidate_count = 0;
  double target_raw_score = 0.0;
};

/// Strikingness of a target given the raw expectation scores of its peers.
/// The target score is compared against every peer after joint L2
/// normalization; an all-zero vector yields 0.
double strikingness_from_scores(double target_score,
                                std::span<const double> peer_scores);

ElementStrikingness element_strikingness(const Quadruple& target,
                                         Element element, const RuleSet& rules,
                                         const TemporalIndex& history,
                                         const RsmfConfig& config);

struct StrikingnessRecord {
  std::size_t query_index = 0;
  Direction direction = Direction::kTail;
  Quadruple event;
  ElementStrikingness subject;
  ElementStrikingness object;
  ElementStrikingness relation;
  double sk = 0.0;
};

/// Full per-event strikingness: the alpha-weighted sum of the three element
/// strikingness values.
StrikingnessRecord event_strikingness(const Quadruple& target,
                                      const RuleSet& rules,
                                      const TemporalIndex& history,
                                      const RsmfConfig& config);

struct StrikingnessQuery {
  std::size_t query_index = 0;
  Direction direction = Direction::kTail;
  /// The fact being scored (the inverse fact for head queries).
  Quadruple event;
};

/// Every raw fact of `split` in both directions, ordered by (index, tail
/// before head).
std::vector<StrikingnessQuery> make_queries(const Dataset& dataset, Split split);

/// Scores every query with history restricted to t' < event.t. The output
/// order matches `queries` and does not depend on `jobs`.
std::vector<StrikingnessRecord> batch_strikingness(
    std::span<const StrikingnessQuery> queries, const RuleSet& rules,
    const TemporalIndex& history, const RsmfConfig& config, unsigned jobs);

}  // namespace strikebench

#endif  // STRIKEBENCH_RSMF_H_
