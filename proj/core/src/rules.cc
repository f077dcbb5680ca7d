#include "strikebench/rules.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include <nlohmann/json.hpp>
#include "strikebench/error.h"
#include "strikebench/parallel.h"

namespace strikebench {
namespace {

struct RelationTimes {
  RelationId relation;
  std::uint32_t begin;  // into the pair-ordered fact array
  std::uint32_t end;
};

// Facts sharing one (subject, object) pair, split by relation.
struct PairGroup {
  std::vector<RelationTimes> relations;
};

}  // namespace

RuleSet::RuleSet(std::vector<TemporalRule> rules, double min_confidence,
                 std::uint64_t min_body_support)
    : min_confidence_(min_confidence), min_body_support_(min_body_support) {
  std::erase_if(rules, [&](const TemporalRule& r) {
    return r.confidence < min_confidence || r.body_support < min_body_support;
  });
  std::sort(rules.begin(), rules.end(), [](const TemporalRule& a, const TemporalRule& b) {
    if (a.head != b.head) return a.head < b.head;
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.body < b.body;
  });
  rules_ = std::move(rules);
  std::size_t i = 0;
  while (i < rules_.size()) {
    std::size_t j = i;
    while (j < rules_.size() && rules_[j].head == rules_[i].head) ++j;
    head_ranges_.emplace(rules_[i].head, std::pair{static_cast<std::uint32_t>(i),
                                                   static_cast<std::uint32_t>(j - i)});
    i = j;
  }
  for (std::uint32_t k = 0; k < rules_.size(); ++k) {
    by_body_[rules_[k].body].push_back(k);
  }
}

std::span<const TemporalRule> RuleSet::for_head(RelationId r) const {
  const auto it = head_ranges_.find(r);
  if (it == head_ranges_.end()) return {};
  return {rules_.data() + it->second.first, it->second.second};
}

std::span<const std::uint32_t> RuleSet::for_body(RelationId r) const {
  const auto it = by_body_.find(r);
  if (it == by_body_.end()) return {};
  return it->second;
}

RuleSet mine_rules(const TemporalIndex& train_index, const MiningConfig& config) {
  if (!(config.tau >= 0.0 && config.tau <= 1.0)) {
    throw ConfigError("tau must lie in [0, 1], got " + std::to_string(config.tau));
  }
  if (config.sample_cap && *config.sample_cap == 0) {
    throw ConfigError("sample cap must be positive");
  }

  // Order facts by (s, o, r, t) so each entity pair is contiguous.
  std::vector<Quadruple> facts(train_index.facts().begin(), train_index.facts().end());
  std::sort(facts.begin(), facts.end(), [](const Quadruple& a, const Quadruple& b) {
    return std::tie(a.subject, a.object, a.relation, a.timestamp) <
           std::tie(b.subject, b.object, b.relation, b.timestamp);
  });

  std::size_t relation_count = train_index.relation_count();
  for (const auto& f : facts) relation_count = std::max<std::size_t>(relation_count, f.relation + 1);

  std::vector<PairGroup> groups;
  std::vector<std::vector<std::uint32_t>> groups_with_relation(relation_count);
  std::vector<std::vector<std::uint32_t>> occurrences(relation_count);
  for (std::size_t i = 0; i < facts.size();) {
    PairGroup group;
    const auto s = facts[i].subject;
    const auto o = facts[i].object;
    while (i < facts.size() && facts[i].subject == s && facts[i].object == o) {
      const auto r = facts[i].relation;
      const auto begin = static_cast<std::uint32_t>(i);
      while (i < facts.size() && facts[i].subject == s && facts[i].object == o &&
             facts[i].relation == r) {
        occurrences[r].push_back(static_cast<std::uint32_t>(i));
        ++i;
      }
      group.relations.push_back({r, begin, static_cast<std::uint32_t>(i)});
      groups_with_relation[r].push_back(static_cast<std::uint32_t>(groups.size()));
    }
    groups.push_back(std::move(group));
  }

  // Body groundings that count toward support; all of them without a cap.
  std::vector<std::uint64_t> body_total(relation_count, 0);
  std::vector<char> counted(facts.size(), 1);
  for (std::size_t r = 0; r < relation_count; ++r) {
    const auto& occ = occurrences[r];
    if (config.sample_cap && occ.size() > *config.sample_cap) {
      for (const auto idx : occ) counted[idx] = 0;
      std::mt19937_64 rng(config.seed ^ detail::mix64(r + 1));
      std::vector<std::uint32_t> picked;
      picked.reserve(*config.sample_cap);
      std::sample(occ.begin(), occ.end(), std::back_inserter(picked),
                  *config.sample_cap, rng);
      for (const auto idx : picked) counted[idx] = 1;
      body_total[r] = *config.sample_cap;
    } else {
      body_total[r] = occ.size();
    }
  }
  const bool sampled = config.sample_cap.has_value();

  std::vector<std::vector<std::uint64_t>> support(relation_count);
  parallel_for(relation_count, config.jobs, [&](std::size_t head) {
    if (groups_with_relation[head].empty()) return;
    auto& slot = support[head];
    slot.assign(relation_count, 0);
    for (const auto g : groups_with_relation[head]) {
      const auto& rels = groups[g].relations;
      const auto head_it = std::find_if(rels.begin(), rels.end(), [&](const RelationTimes& rt) {
        return rt.relation == head;
      });
      const TimeIndex last_head = facts[head_it->end - 1].timestamp;
      for (const auto& body : rels) {
        const auto first = facts.begin() + body.begin;
        const auto last = facts.begin() + body.end;
        const auto bound = std::partition_point(
            first, last, [&](const Quadruple& q) { return q.timestamp < last_head; });
        if (!sampled) {
          slot[body.relation] += static_cast<std::uint64_t>(bound - first);
        } else {
          for (auto it = first; it != bound; ++it) {
            slot[body.relation] += counted[static_cast<std::size_t>(it - facts.begin())];
          }
        }
      }
    }
  });

  std::vector<TemporalRule> rules;
  for (std::size_t head = 0; head < relation_count; ++head) {
    if (support[head].empty()) continue;
    for (std::size_t body = 0; body < relation_count; ++body) {
      const std::uint64_t hits = support[head][body];
      if (hits == 0) continue;
      TemporalRule rule;
      rule.head = static_cast<RelationId>(head);
      rule.body = static_cast<RelationId>(body);
      rule.body_support = body_total[body];
      rule.rule_support = hits;
      rule.confidence = static_cast<double>(hits) / static_cast<double>(body_total[body]);
      rules.push_back(rule);
    }
  }
  return RuleSet(std::move(rules), config.tau, config.min_body_support);
}

void write_rules(const RuleSet& rules, std::ostream& out) {
  for (const auto& r : rules.all()) {
    nlohmann::ordered_json line;
    line["head"] = r.head;
    line["body"] = r.body;
    line["conf"] = r.confidence;
    line["body_support"] = r.body_support;
    line["rule_support"] = r.rule_support;
    out << line.dump() << '\n';
  }
}

void save_rules(const RuleSet& rules, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write rules file " + path.string());
  write_rules(rules, out);
  if (!out) throw IoError("write failed: " + path.string());
}

RuleSet read_rules(std::istream& in, double min_confidence, const std::string& source) {
  std::vector<TemporalRule> rules;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      TemporalRule r;
      r.head = j.at("head").get<RelationId>();
      r.body = j.at("body").get<RelationId>();
      r.confidence = j.at("conf").get<double>();
      r.body_support = j.at("body_support").get<std::uint64_t>();
      r.rule_support = j.at("rule_support").get<std::uint64_t>();
      if (!(r.confidence >= 0.0 && r.confidence <= 1.0) ||
          r.rule_support > r.body_support) {
        throw ParseError(source, line_no, "rule violates 0 <= support <= body support");
      }
      rules.push_back(r);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return RuleSet(std::move(rules), min_confidence, 0);
}

RuleSet load_rules(const std::filesystem::path& path, double min_confidence) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open rules file " + path.string());
  return read_rules(in, min_confidence, path.string());
}

}  // namespace strikebench
