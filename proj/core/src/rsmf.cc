#include "strikebench/rsmf.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "strikebench/error.h"
#include "strikebench/parallel.h"

namespace strikebench {
namespace {

// Index of the first element >= value in a sorted list.
std::size_t first_at_least(std::span<const TimeIndex> sorted, TimeIndex value) {
  return static_cast<std::size_t>(
      std::lower_bound(sorted.begin(), sorted.end(), value) - sorted.begin());
}

std::size_t first_greater(std::span<const TimeIndex> sorted, TimeIndex value) {
  return static_cast<std::size_t>(
      std::upper_bound(sorted.begin(), sorted.end(), value) - sorted.begin());
}

// Sum of exp(-lambda (t - y)) over the canonical chain, without
// materializing it.
double chain_decay_sum(std::span<const TimeIndex> body, std::span<const TimeIndex> head,
                       TimeIndex window_begin, TimeIndex t, double lambda) {
  double total = 0.0;
  TimeIndex lower = window_begin;
  for (;;) {
    const std::size_t b = first_at_least(body, lower);
    if (b == body.size() || body[b] >= t) break;
    const TimeIndex y = body[b];
    total += std::exp(-lambda * static_cast<double>(t - y));
    const std::size_t h = first_greater(head, y);
    if (h == head.size() || head[h] >= t) break;
    const std::size_t next = first_at_least(body, head[h]);
    if (next == body.size() || body[next] >= t) break;
    lower = head[h];
  }
  return total;
}

// Subject/object ids of a peer event obtained by replacing `element`.
Quadruple make_peer(const Quadruple& event, Element element, std::uint32_t id) {
  Quadruple peer = event;
  switch (element) {
    case Element::kSubject:
      peer.subject = id;
      break;
    case Element::kObject:
      peer.object = id;
      break;
    case Element::kRelation:
      peer.relation = id;
      break;
  }
  return peer;
}

std::uint32_t element_id(const Quadruple& event, Element element) {
  switch (element) {
    case Element::kSubject:
      return event.subject;
    case Element::kObject:
      return event.object;
    case Element::kRelation:
      return event.relation;
  }
  return 0;
}

// Candidate id -> rules whose body is grounded for that candidate within the
// window. Rules that never ground for a candidate contribute nothing to its
// expectation score, so scoring only these is exact.
using CandidateRules = std::map<std::uint32_t, std::vector<const TemporalRule*>>;

CandidateRules collect_candidates(const Quadruple& event, Element element,
                                  const RuleSet& rules, const TemporalIndex& history,
                                  const RsmfConfig& config) {
  CandidateRules out;
  const TimeIndex t = event.timestamp;
  const TimeIndex begin = window_start(config.window, t);
  auto attach = [&](std::uint32_t id, const TemporalRule* rule) {
    auto& list = out[id];
    if (list.empty() || list.back() != rule) list.push_back(rule);
  };

  switch (element) {
    case Element::kObject:
      for (const auto& rule : rules.for_head(event.relation)) {
        for (const auto& te : in_window(history.pair_history(event.subject, rule.body), begin, t)) {
          attach(te.entity, &rule);
        }
      }
      break;
    case Element::kSubject:
      // (s', body, o) is stored as its inverse (o, body^-1, s').
      for (const auto& rule : rules.for_head(event.relation)) {
        const RelationId inv = inverse_relation(rule.body, history.raw_relation_count());
        for (const auto& te : in_window(history.pair_history(event.object, inv), begin, t)) {
          attach(te.entity, &rule);
        }
      }
      break;
    case Element::kRelation: {
      std::vector<RelationId> bodies;
      for (const auto& edge : in_window(history.subject_history(event.subject), begin, t)) {
        if (edge.object == event.object) bodies.push_back(edge.relation);
      }
      std::sort(bodies.begin(), bodies.end());
      bodies.erase(std::unique(bodies.begin(), bodies.end()), bodies.end());
      const auto all = rules.all();
      for (const RelationId body : bodies) {
        for (const auto k : rules.for_body(body)) attach(all[k].head, &all[k]);
      }
      break;
    }
  }
  return out;
}

double score_with_rules(const Quadruple& peer, std::span<const TemporalRule* const> rules,
                        const TemporalIndex& history, const RsmfConfig& config) {
  const TimeIndex t = peer.timestamp;
  const TimeIndex begin = window_start(config.window, t);
  const auto head = history.triple_times(peer.subject, peer.relation, peer.object);
  double sc = 0.0;
  for (const TemporalRule* rule : rules) {
    const auto body = history.triple_times(peer.subject, rule->body, peer.object);
    if (body.empty()) continue;
    sc += rule->confidence * chain_decay_sum(body, head, begin, t, config.lambda_decay);
  }
  return sc;
}

}  // namespace

void RsmfConfig::validate() const {
  if (!(lambda_decay > 0.0) || !std::isfinite(lambda_decay)) {
    throw ConfigError("lambda must be positive, got " + std::to_string(lambda_decay));
  }
  for (const double a : {alpha_subject, alpha_object, alpha_relation}) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw ConfigError("alpha weights must lie in [0, 1]");
    }
  }
  if (std::abs(alpha_subject + alpha_object + alpha_relation - 1.0) > 1e-12) {
    throw ConfigError("alpha weights must sum to 1");
  }
  if (window && *window < 1) {
    throw ConfigError("window must be at least 1 time step");
  }
}

GroundingChain build_grounding_chain(std::span<const TimeIndex> body_times,
                                     std::span<const TimeIndex> head_times,
                                     TimeIndex window_begin, TimeIndex query_time) {
  GroundingChain chain;
  TimeIndex lower = window_begin;
  for (;;) {
    const std::size_t b = first_at_least(body_times, lower);
    if (b == body_times.size() || body_times[b] >= query_time) break;
    const TimeIndex y = body_times[b];
    chain.body_times.push_back(y);
    // Earliest head after y that still leaves a body before t to pair with;
    // otherwise y pairs with the hypothetical head at t.
    const std::size_t h = first_greater(head_times, y);
    const bool head_ok = h < head_times.size() && head_times[h] < query_time;
    const std::size_t next = head_ok ? first_at_least(body_times, head_times[h]) : 0;
    if (!head_ok || next == body_times.size() || body_times[next] >= query_time) {
      chain.head_times.push_back(query_time);
      break;
    }
    chain.head_times.push_back(head_times[h]);
    lower = head_times[h];
  }
  return chain;
}

GroundingChain build_grounding_chain(const Quadruple& peer, const TemporalRule& rule,
                                     const TemporalIndex& history,
                                     const RsmfConfig& config, TimeIndex query_time) {
  auto chain = build_grounding_chain(
      history.triple_times(peer.subject, rule.body, peer.object),
      history.triple_times(peer.subject, peer.relation, peer.object),
      window_start(config.window, query_time), query_time);
  chain.rule = rule;
  return chain;
}

std::vector<std::uint32_t> peer_candidates(const Quadruple& event, Element element,
                                           const RuleSet& rules,
                                           const TemporalIndex& history,
                                           const RsmfConfig& config) {
  const auto found = collect_candidates(event, element, rules, history, config);
  std::vector<std::uint32_t> ids;
  ids.reserve(found.size());
  for (const auto& [id, unused] : found) ids.push_back(id);
  return ids;
}

double expectation_score(const Quadruple& peer, const RuleSet& rules,
                         const TemporalIndex& history, const RsmfConfig& config,
                         TimeIndex query_time) {
  const TimeIndex begin = window_start(config.window, query_time);
  const auto head = history.triple_times(peer.subject, peer.relation, peer.object);
  double sc = 0.0;
  for (const auto& rule : rules.for_head(peer.relation)) {
    const auto body = history.triple_times(peer.subject, rule.body, peer.object);
    if (body.empty()) continue;
    sc += rule.confidence *
          chain_decay_sum(body, head, begin, query_time, config.lambda_decay);
  }
  return sc;
}

double strikingness_from_scores(double target_score, std::span<const double> peer_scores) {
  double scale = target_score;
  for (const double p : peer_scores) scale = std::max(scale, p);
  if (!(scale > 0.0)) return 0.0;
  double sq = (target_score / scale) * (target_score / scale);
  for (const double p : peer_scores) sq += (p / scale) * (p / scale);
  const double norm = scale * std::sqrt(sq);
  const double vt = target_score / norm;
  double sk = 0.0;
  for (const double p : peer_scores) {
    const double v = p / norm;
    if (v > vt) sk += v * (v - vt);
  }
  // Bounded by 1; trim rounding overshoot.
  return std::min(sk, 1.0);
}

ElementStrikingness element_strikingness(const Quadruple& target, Element element,
                                         const RuleSet& rules,
                                         const TemporalIndex& history,
                                         const RsmfConfig& config) {
  const auto candidates = collect_candidates(target, element, rules, history, config);
  const std::uint32_t own = element_id(target, element);

  ElementStrikingness out;
  out.candidate_count = candidates.size();
  out.target_raw_score =
      expectation_score(target, rules, history, config, target.timestamp);

  std::vector<double> peers;
  peers.reserve(candidates.size());
  for (const auto& [id, grounded] : candidates) {
    if (id == own) continue;
    peers.push_back(score_with_rules(make_peer(target, element, id), grounded, history, config));
  }
  out.strikingness = strikingness_from_scores(out.target_raw_score, peers);
  return out;
}

StrikingnessRecord event_strikingness(const Quadruple& target, const RuleSet& rules,
                                      const TemporalIndex& history,
                                      const RsmfConfig& config) {
  StrikingnessRecord rec;
  rec.event = target;
  rec.subject = element_strikingness(target, Element::kSubject, rules, history, config);
  rec.object = element_strikingness(target, Element::kObject, rules, history, config);
  rec.relation = element_strikingness(target, Element::kRelation, rules, history, config);
  rec.sk = config.alpha_subject * rec.subject.strikingness +
           config.alpha_object * rec.object.strikingness +
           config.alpha_relation * rec.relation.strikingness;
  return rec;
}

std::vector<StrikingnessQuery> make_queries(const Dataset& dataset, Split split) {
  if (!dataset.augmented) {
    throw ValidationError("strikingness queries require an inverse-augmented dataset");
  }
  const std::size_t n = dataset.raw_size(split);
  std::vector<StrikingnessQuery> queries;
  queries.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Direction d : {Direction::kTail, Direction::kHead}) {
      queries.push_back({i, d, query_fact(dataset, split, i, d)});
    }
  }
  return queries;
}

std::vector<StrikingnessRecord> batch_strikingness(std::span<const StrikingnessQuery> queries,
                                                   const RuleSet& rules,
                                                   const TemporalIndex& history,
                                                   const RsmfConfig& config,
                                                   unsigned jobs) {
  config.validate();
  std::vector<StrikingnessRecord> out(queries.size());
  parallel_for(queries.size(), jobs, [&](std::size_t i) {
    const auto& q = queries[i];
    out[i] = event_strikingness(q.event, rules, history, config);
    out[i].query_index = q.query_index;
    out[i].direction = q.direction;
  });
  return out;
}

}  // namespace strikebench
