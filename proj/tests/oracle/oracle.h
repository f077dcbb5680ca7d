#ifndef STRIKEBENCH_TESTS_ORACLE_H_
#define STRIKEBENCH_TESTS_ORACLE_H_

// Slow reference implementations built directly on flat fact lists.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "strikebench/rules.h"
#include "strikebench/types.h"

namespace oracle {

using strikebench::EntityId;
using strikebench::Quadruple;
using strikebench::RelationId;
using strikebench::TemporalRule;
using strikebench::TimeIndex;

// Double loop over every (body fact, head fact) pair.
std::vector<TemporalRule> mine(const std::vector<Quadruple>& facts, std::size_t relation_count,
                               double tau, std::uint64_t min_body_support);

struct Chain {
  std::vector<TimeIndex> bodies;
  std::vector<TimeIndex> heads;
  friend bool operator==(const Chain&, const Chain&) = default;
};

// Longest valid chain, earliest bodies first, earliest heads. Memoized search.
Chain canonical_chain(const std::vector<TimeIndex>& bodies, const std::vector<TimeIndex>& heads,
                      TimeIndex begin, TimeIndex t);
// Same answer by trying every subset of bodies; small inputs only.
Chain subset_chain(const std::vector<TimeIndex>& bodies, const std::vector<TimeIndex>& heads,
                   TimeIndex begin, TimeIndex t);

// Facts bucketed by (subject, object); no time ordering assumed.
class History {
 public:
  explicit History(const std::vector<Quadruple>& facts);

  // Ascending distinct times of (s, r, o) within [lo, hi).
  std::vector<TimeIndex> times(EntityId s, RelationId r, EntityId o, TimeIndex lo,
                               TimeIndex hi) const;
  const std::vector<Quadruple>& all() const { return facts_; }

 private:
  std::vector<Quadruple> facts_;
  std::map<std::pair<EntityId, EntityId>, std::vector<Quadruple>> by_pair_;
};

struct Settings {
  std::optional<TimeIndex> window;
  double lambda = 0.1;
  double alpha_s = 0.4;
  double alpha_o = 0.4;
  double alpha_r = 0.2;
};

enum class Mode { kSubject, kObject, kRelation };

std::set<std::uint32_t> candidates(const Quadruple& event, Mode mode,
                                   const std::vector<TemporalRule>& rules, const History& history,
                                   const Settings& settings);

Chain chain_for(const Quadruple& peer, const TemporalRule& rule, const History& history,
                const Settings& settings, TimeIndex t);

double score(const Quadruple& peer, const std::vector<TemporalRule>& rules,
             const History& history, const Settings& settings, TimeIndex t);

// Plain L2 normalization and the comparison sum.
double strikingness(double target, const std::vector<double>& peers);

double element(const Quadruple& target, Mode mode, const std::vector<TemporalRule>& rules,
               const History& history, const Settings& settings);

struct EventResult {
  double sk_s = 0.0;
  double sk_o = 0.0;
  double sk_r = 0.0;
  double sk = 0.0;
};

EventResult event(const Quadruple& target, const std::vector<TemporalRule>& rules,
                  const History& history, const Settings& settings);

}  // namespace oracle

#endif  // STRIKEBENCH_TESTS_ORACLE_H_
