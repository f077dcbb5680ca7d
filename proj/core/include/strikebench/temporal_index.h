#ifndef STRIKEBENCH_TEMPORAL_INDEX_H_
#define STRIKEBENCH_TEMPORAL_INDEX_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "strikebench/dataset.h"
#include "strikebench/types.h"

namespace strikebench {

struct TimedEntity {
  TimeIndex time;
  EntityId entity;

  friend auto operator<=>(const TimedEntity&, const TimedEntity&) = default;
};

struct TimedEdge {
  TimeIndex time;
  RelationId relation;
  EntityId object;

  friend auto operator<=>(const TimedEdge&, const TimedEdge&) = default;
};

namespace detail {

struct PairKey {
  std::uint32_t a;
  std::uint32_t b;
  friend bool operator==(const PairKey&, const PairKey&) = default;
};

struct TripleKey {
  std::uint32_t a;
  std::uint32_t b;
  std::uint64_t c;
  friend bool operator==(const TripleKey&, const TripleKey&) = default;
};

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const noexcept {
    return mix64((std::uint64_t{k.a} << 32) | k.b);
  }
};

struct TripleKeyHash {
  std::size_t operator()(const TripleKey& k) const noexcept {
    return mix64(((std::uint64_t{k.a} << 32) | k.b) ^ mix64(k.c + 0x9e3779b97f4a7c15ULL));
  }
};

struct Range {
  std::uint32_t offset = 0;
  std::uint32_t length = 0;
};

}  // namespace detail

/// Immutable time-sorted lookups over a fact set. All lists are sorted
/// ascending by time (then by the remaining fields), contain each fact once,
/// and are never modified after construction, so one index may be shared by
/// any number of reader threads.
///
/// The index stores every fact it was built from regardless of time. History
/// restrictions (t' < t, t - w <= t') are applied by the caller through
/// `in_window`.
class TemporalIndex {
 public:
  TemporalIndex() = default;

  /// Builds over the union of `splits` of an augmented dataset.
  static TemporalIndex build(const Dataset& dataset,
                             std::initializer_list<Split> splits);
  static TemporalIndex build(const Dataset& dataset,
                             std::span<const Split> splits);
  /// Builds over an explicit fact list (used for synthetic data and tests).
  static TemporalIndex from_facts(std::vector<Quadruple> facts,
                                  std::size_t entity_count,
                                  std::size_t raw_relation_count);

  /// (s, r) -> [(t, o)], the objects reached from s through r.
  std::span<const TimedEntity> pair_history(EntityId s, RelationId r) const;
  /// (s, r, o) -> [t].
  std::span<const TimeIndex> triple_times(EntityId s, RelationId r,
                                          EntityId o) const;
  /// s -> [(t, r, o)].
  std::span<const TimedEdge> subject_history(EntityId s) const;
  /// (s, r, t) -> sorted set of objects o with (s, r, o, t) in the index.
  std::span<const EntityId> same_time_truth(EntityId s, RelationId r,
                                            TimeIndex t) const;

  /// Every stored fact, sorted by (s, r, o, t).
  std::span<const Quadruple> facts() const { return facts_; }

  std::size_t entity_count() const { return entity_count_; }
  std::size_t raw_relation_count() const { return raw_relation_count_; }
  std::size_t relation_count() const { return 2 * raw_relation_count_; }
  std::size_t subject_key_count() const { return by_subject_.size(); }
  std::size_t pair_key_count() const { return by_pair_.size(); }
  std::size_t triple_key_count() const { return by_triple_.size(); }

 private:
  std::vector<Quadruple> facts_;
  std::size_t entity_count_ = 0;
  std::size_t raw_relation_count_ = 0;

  std::vector<TimedEntity> pair_values_;
  std::unordered_map<detail::PairKey, detail::Range, detail::PairKeyHash> by_pair_;

  std::vector<TimeIndex> triple_values_;
  std::unordered_map<detail::TripleKey, detail::Range, detail::TripleKeyHash> by_triple_;

  std::vector<TimedEdge> subject_values_;
  std::unordered_map<EntityId, detail::Range> by_subject_;

  std::vector<EntityId> truth_values_;
  std::unordered_map<detail::TripleKey, detail::Range, detail::TripleKeyHash> same_time_;
};

/// Sub-span of a time-sorted list with lo <= time < hi.
template <typename T>
std::span<const T> in_window(std::span<const T> sorted, TimeIndex lo,
                             TimeIndex hi) {
  auto time_of = [](const T& v) -> TimeIndex {
    if constexpr (std::is_same_v<T, TimeIndex>) {
      return v;
    } else {
      return v.time;
    }
  };
  auto first = std::partition_point(sorted.begin(), sorted.end(),
                                    [&](const T& v) { return time_of(v) < lo; });
  auto last = std::partition_point(first, sorted.end(),
                                   [&](const T& v) { return time_of(v) < hi; });
  return {first, last};
}

}  // namespace strikebench

#endif  // STRIKEBENCH_TEMPORAL_INDEX_H_
