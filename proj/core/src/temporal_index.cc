#include "strikebench/temporal_index.h"

#include <algorithm>
#include <string>
#include <tuple>

#include "strikebench/error.h"

namespace strikebench {
namespace {

using detail::PairKey;
using detail::Range;
using detail::TripleKey;

// Groups `sorted` (ordered by key first) into contiguous ranges of `values`.
template <typename Map, typename KeyFn, typename ValueFn, typename Value>
void build_ranges(const std::vector<Quadruple>& sorted, KeyFn key_of,
                  ValueFn value_of, Map& map, std::vector<Value>& values) {
  values.clear();
  values.reserve(sorted.size());
  map.clear();
  std::size_t i = 0;
  while (i < sorted.size()) {
    const auto key = key_of(sorted[i]);
    const std::size_t begin = values.size();
    while (i < sorted.size() && key_of(sorted[i]) == key) {
      values.push_back(value_of(sorted[i]));
      ++i;
    }
    map.emplace(key, Range{static_cast<std::uint32_t>(begin),
                           static_cast<std::uint32_t>(values.size() - begin)});
  }
}

template <typename T, typename Map, typename Key>
std::span<const T> lookup(const Map& map, const std::vector<T>& values, const Key& key) {
  const auto it = map.find(key);
  if (it == map.end()) return {};
  return {values.data() + it->second.offset, it->second.length};
}

}  // namespace

TemporalIndex TemporalIndex::build(const Dataset& dataset,
                                   std::initializer_list<Split> splits) {
  return build(dataset, std::span<const Split>(splits.begin(), splits.size()));
}

TemporalIndex TemporalIndex::build(const Dataset& dataset,
                                   std::span<const Split> splits) {
  if (!dataset.augmented) {
    throw ValidationError("temporal index requires an inverse-augmented dataset");
  }
  std::vector<Quadruple> facts;
  for (const Split s : splits) {
    const auto& part = dataset.split(s);
    facts.insert(facts.end(), part.begin(), part.end());
  }
  return from_facts(std::move(facts), dataset.entity_count,
                    dataset.raw_relation_count);
}

TemporalIndex TemporalIndex::from_facts(std::vector<Quadruple> facts,
                                        std::size_t entity_count,
                                        std::size_t raw_relation_count) {
  if (facts.size() >= UINT32_MAX) {
    throw ValidationError("too many facts for one temporal index");
  }
  TemporalIndex index;
  index.entity_count_ = entity_count;
  index.raw_relation_count_ = raw_relation_count;

  // (s, r, o, t) order serves the pair-full map directly.
  std::sort(facts.begin(), facts.end());
  facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
  index.facts_ = facts;

  build_ranges(
      facts, [](const Quadruple& q) { return TripleKey{q.subject, q.relation, q.object}; },
      [](const Quadruple& q) { return q.timestamp; }, index.by_triple_,
      index.triple_values_);

  auto by_pair = facts;
  std::sort(by_pair.begin(), by_pair.end(), [](const Quadruple& a, const Quadruple& b) {
    return std::tie(a.subject, a.relation, a.timestamp, a.object) <
           std::tie(b.subject, b.relation, b.timestamp, b.object);
  });
  build_ranges(
      by_pair, [](const Quadruple& q) { return PairKey{q.subject, q.relation}; },
      [](const Quadruple& q) { return TimedEntity{q.timestamp, q.object}; },
      index.by_pair_, index.pair_values_);

  // (s, r, t, o) order also groups the same-time truth sets.
  build_ranges(
      by_pair,
      [](const Quadruple& q) {
        return TripleKey{q.subject, q.relation, static_cast<std::uint64_t>(q.timestamp)};
      },
      [](const Quadruple& q) { return q.object; }, index.same_time_,
      index.truth_values_);

  auto by_subject = std::move(by_pair);
  std::sort(by_subject.begin(), by_subject.end(),
            [](const Quadruple& a, const Quadruple& b) {
              return std::tie(a.subject, a.timestamp, a.relation, a.object) <
                     std::tie(b.subject, b.timestamp, b.relation, b.object);
            });
  build_ranges(
      by_subject, [](const Quadruple& q) { return q.subject; },
      [](const Quadruple& q) { return TimedEdge{q.timestamp, q.relation, q.object}; },
      index.by_subject_, index.subject_values_);
  return index;
}

std::span<const TimedEntity> TemporalIndex::pair_history(EntityId s,
                                                         RelationId r) const {
  return lookup(by_pair_, pair_values_, PairKey{s, r});
}

std::span<const TimeIndex> TemporalIndex::triple_times(EntityId s, RelationId r,
                                                       EntityId o) const {
  return lookup(by_triple_, triple_values_, TripleKey{s, r, o});
}

std::span<const TimedEdge> TemporalIndex::subject_history(EntityId s) const {
  return lookup(by_subject_, subject_values_, s);
}

std::span<const EntityId> TemporalIndex::same_time_truth(EntityId s, RelationId r,
                                                         TimeIndex t) const {
  return lookup(same_time_, truth_values_,
                TripleKey{s, r, static_cast<std::uint64_t>(t)});
}

}  // namespace strikebench
