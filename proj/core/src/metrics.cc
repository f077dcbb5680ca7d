#include "strikebench/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "format_util.h"
#include <nlohmann/json.hpp>
#include "strikebench/error.h"
#include "strikebench/parallel.h"

namespace strikebench {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_filtered(std::span<const EntityId> filter, EntityId e) {
  return std::binary_search(filter.begin(), filter.end(), e);
}

std::size_t finish_rank(std::size_t greater, std::size_t equal, TiePolicy policy) {
  switch (policy) {
    case TiePolicy::kOptimistic:
      return 1 + greater;
    case TiePolicy::kPessimistic:
      return 1 + greater + equal;
    case TiePolicy::kRealistic:
      break;
  }
  return 1 + greater + equal / 2;
}

nlohmann::json maybe(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::ordered_json metrics_json(const MetricValues& m, bool mrr_available) {
  nlohmann::ordered_json j;
  j["mrr"] = mrr_available ? maybe(m.mrr) : nlohmann::json(nullptr);
  j["hits@1"] = maybe(m.hits1);
  j["hits@3"] = maybe(m.hits3);
  j["hits@10"] = maybe(m.hits10);
  return j;
}

double relative_drop(double org, double sk) {
  return org > 0.0 ? (org - sk) / org : kNaN;
}

std::size_t bin_count(double width) {
  return static_cast<std::size_t>(std::ceil(1.0 / width - 1e-9));
}

// Lower edges of the strikingness bins; k / n when the width divides 1 so
// that values such as 0.3 land in the bin that starts at 0.3.
std::vector<double> bin_edges(double width) {
  const std::size_t n = bin_count(width);
  const bool divides = std::abs(static_cast<double>(n) * width - 1.0) < 1e-9;
  std::vector<double> edges(n);
  for (std::size_t k = 0; k < n; ++k) {
    edges[k] = divides ? static_cast<double>(k) / static_cast<double>(n)
                       : static_cast<double>(k) * width;
  }
  return edges;
}

}  // namespace

std::string_view to_string(TiePolicy p) {
  switch (p) {
    case TiePolicy::kRealistic:
      return "realistic";
    case TiePolicy::kOptimistic:
      return "optimistic";
    case TiePolicy::kPessimistic:
      return "pessimistic";
  }
  return "?";
}

TiePolicy parse_tie_policy(std::string_view text) {
  if (text == "realistic") return TiePolicy::kRealistic;
  if (text == "optimistic") return TiePolicy::kOptimistic;
  if (text == "pessimistic") return TiePolicy::kPessimistic;
  throw ConfigError("unknown tie policy '" + std::string(text) + "'");
}

std::size_t compute_rank(std::span<const double> scores, EntityId answer,
                         std::span<const EntityId> filter, TiePolicy policy) {
  if (answer >= scores.size()) {
    throw ValidationError("answer " + std::to_string(answer) +
                          " outside the score vector of size " + std::to_string(scores.size()));
  }
  const double target = scores[answer];
  std::size_t greater = 0;
  std::size_t equal = 0;
  for (std::size_t e = 0; e < scores.size(); ++e) {
    if (e == answer || is_filtered(filter, static_cast<EntityId>(e))) continue;
    if (scores[e] > target) {
      ++greater;
    } else if (scores[e] == target) {
      ++equal;
    }
  }
  return finish_rank(greater, equal, policy);
}

std::size_t compute_rank(const Prediction& prediction, std::size_t entity_count,
                         EntityId answer, std::span<const EntityId> filter,
                         TiePolicy policy) {
  if (prediction.kind == Prediction::Kind::kDense) {
    if (prediction.dense.size() != entity_count) {
      throw ValidationError("dense prediction has " + std::to_string(prediction.dense.size()) +
                            " scores for " + std::to_string(entity_count) + " entities");
    }
    return compute_rank(prediction.dense, answer, filter, policy);
  }
  if (answer >= entity_count) {
    throw ValidationError("answer " + std::to_string(answer) + " outside entity range");
  }
  const double target = prediction.score(answer);
  std::size_t greater = 0;
  std::size_t equal = 0;
  std::size_t listed = 0;
  for (const auto& [e, s] : prediction.entries) {
    if (e >= entity_count) continue;
    ++listed;
    if (e == answer || is_filtered(filter, e)) continue;
    if (s > target) {
      ++greater;
    } else if (s == target) {
      ++equal;
    }
  }
  // Unlisted competitors all score -inf.
  if (std::isinf(target) && target < 0) {
    auto listed_id = [&](EntityId e) {
      auto it = std::lower_bound(prediction.entries.begin(), prediction.entries.end(), e,
                                 [](const auto& entry, EntityId id) { return entry.first < id; });
      return it != prediction.entries.end() && it->first == e;
    };
    std::size_t unlisted = entity_count - listed;
    if (!listed_id(answer)) --unlisted;
    for (const EntityId f : filter) {
      if (f != answer && f < entity_count && !listed_id(f)) --unlisted;
    }
    equal += unlisted;
  }
  return finish_rank(greater, equal, policy);
}

std::vector<EvalQuery> make_eval_queries(const Dataset& dataset, Split split) {
  if (!dataset.augmented) {
    throw ValidationError("evaluation queries require an inverse-augmented dataset");
  }
  const std::size_t n = dataset.raw_size(split);
  std::vector<EvalQuery> queries;
  queries.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Direction d : {Direction::kTail, Direction::kHead}) {
      queries.push_back({{i, d}, query_fact(dataset, split, i, d)});
    }
  }
  return queries;
}

bool RankTable::has_sk() const {
  return !rows.empty() &&
         std::all_of(rows.begin(), rows.end(), [](const RankRow& r) { return !std::isnan(r.sk); });
}

RankTable rank_predictions(std::span<const EvalQuery> queries, const PredictionSet& predictions,
                           const TemporalIndex& truth, TiePolicy policy, unsigned jobs) {
  RankTable table;
  table.model_name = predictions.model_name();
  table.tie_policy = policy;
  table.mrr_available = !predictions.has_topk();
  table.entity_count = truth.entity_count();
  table.rows.resize(queries.size());

  std::vector<const Prediction*> matched(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    matched[i] = predictions.find(queries[i].key);
    if (!matched[i]) {
      throw ValidationError("no prediction for query " +
                            std::to_string(queries[i].key.query_index) + " " +
                            std::string(to_string(queries[i].key.direction)));
    }
  }
  if (predictions.size() != queries.size()) {
    throw ValidationError("prediction file has " + std::to_string(predictions.size()) +
                          " queries, the split has " + std::to_string(queries.size()));
  }
  parallel_for(queries.size(), jobs, [&](std::size_t i) {
    const auto& q = queries[i];
    const auto filter = truth.same_time_truth(q.fact.subject, q.fact.relation, q.fact.timestamp);
    auto& row = table.rows[i];
    row.key = q.key;
    row.answer = q.fact.object;
    row.rank = compute_rank(*matched[i], table.entity_count, q.fact.object, filter, policy);
  });
  return table;
}

void join_strikingness(RankTable& ranks, const StrikingnessTable& table) {
  const auto sk = table.sk_by_query();
  for (auto& row : ranks.rows) {
    const auto it = sk.find(row.key);
    if (it == sk.end()) {
      throw ValidationError("no strikingness value for query " +
                            std::to_string(row.key.query_index) + " " +
                            std::string(to_string(row.key.direction)));
    }
    row.sk = it->second;
  }
}

void write_rank_table(const RankTable& table, std::ostream& out) {
  nlohmann::ordered_json header;
  header["model_name"] = table.model_name;
  header["tie_policy"] = std::string(to_string(table.tie_policy));
  header["mrr_available"] = table.mrr_available;
  header["entity_count"] = table.entity_count;
  out << "# " << header.dump() << '\n';
  out << "query_index\tdirection\tanswer\trank\tsk\n";
  for (const auto& row : table.rows) {
    out << row.key.query_index << '\t' << to_string(row.key.direction) << '\t' << row.answer
        << '\t' << row.rank << '\t' << internal::format_double(row.sk) << '\n';
  }
}

void save_rank_table(const RankTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write rank table " + path.string());
  write_rank_table(table, out);
  if (!out) throw IoError("write failed: " + path.string());
}

RankTable read_rank_table(std::istream& in, const std::string& source) {
  RankTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = internal::strip_cr(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      const auto header = nlohmann::json::parse(view.substr(1), nullptr, false);
      if (!header.is_discarded() && header.is_object()) {
        table.model_name = header.value("model_name", "");
        table.tie_policy = parse_tie_policy(header.value("tie_policy", "realistic"));
        table.mrr_available = header.value("mrr_available", true);
        table.entity_count = header.value("entity_count", std::size_t{0});
      }
      continue;
    }
    if (view.starts_with("query_index")) continue;
    const auto cols = internal::split_tabs(view);
    if (cols.size() != 5) {
      throw ParseError(source, line_no, "expected 5 columns, found " + std::to_string(cols.size()));
    }
    RankRow row;
    double index = 0, answer = 0, rank = 0;
    if (!internal::parse_double(cols[0], index) || !internal::parse_double(cols[2], answer) ||
        !internal::parse_double(cols[3], rank) || !internal::parse_double(cols[4], row.sk) ||
        rank < 1) {
      throw ParseError(source, line_no, "bad rank row");
    }
    try {
      row.key = {static_cast<std::size_t>(index), parse_direction(cols[1])};
    } catch (const ValidationError& e) {
      throw ParseError(source, line_no, e.what());
    }
    row.answer = static_cast<EntityId>(answer);
    row.rank = static_cast<std::size_t>(rank);
    table.rows.push_back(row);
  }
  return table;
}

RankTable load_rank_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open rank table " + path.string());
  return read_rank_table(in, path.string());
}

MetricValues original_metrics(const RankTable& ranks) {
  MetricValues m;
  if (ranks.rows.empty()) return m;
  for (const auto& row : ranks.rows) {
    const double rr = 1.0 / static_cast<double>(row.rank);
    m.mrr += rr;
    m.hits1 += row.rank <= 1;
    m.hits3 += row.rank <= 3;
    m.hits10 += row.rank <= 10;
  }
  const auto n = static_cast<double>(ranks.rows.size());
  m.mrr /= n;
  m.hits1 /= n;
  m.hits3 /= n;
  m.hits10 /= n;
  return m;
}

MetricValues weighted_metrics(const RankTable& ranks, double b) {
  if (!std::isfinite(b)) throw ConfigError("bias b must be finite");
  MetricValues m;
  double total = 0.0;
  for (const auto& row : ranks.rows) {
    const double w = metric_weight(row.sk, b);
    if (!(w > 0.0)) {
      throw ConfigError("non-positive metric weight sk + b = " + internal::format_double(w) +
                        " (b = " + internal::format_double(b) + ")");
    }
    total += w;
    m.mrr += w / static_cast<double>(row.rank);
    m.hits1 += row.rank <= 1 ? w : 0.0;
    m.hits3 += row.rank <= 3 ? w : 0.0;
    m.hits10 += row.rank <= 10 ? w : 0.0;
  }
  if (total > 0.0) {
    m.mrr /= total;
    m.hits1 /= total;
    m.hits3 /= total;
    m.hits10 /= total;
  }
  return m;
}

EvalReport aggregate(const RankTable& ranks, double b, double bin_width) {
  EvalReport report;
  report.model_name = ranks.model_name;
  report.tie_policy = ranks.tie_policy;
  report.query_count = ranks.rows.size();
  report.mrr_available = ranks.mrr_available;
  report.bias_b = b;
  report.bin_width = bin_width;
  report.original = original_metrics(ranks);

  const auto with_sk = std::count_if(ranks.rows.begin(), ranks.rows.end(),
                                     [](const RankRow& r) { return !std::isnan(r.sk); });
  if (with_sk != 0 && static_cast<std::size_t>(with_sk) != ranks.rows.size()) {
    throw ValidationError("strikingness is missing for " +
                          std::to_string(ranks.rows.size() - static_cast<std::size_t>(with_sk)) +
                          " of " + std::to_string(ranks.rows.size()) + " queries");
  }
  report.sk_available = with_sk > 0;
  if (report.sk_available) {
    report.weighted = weighted_metrics(ranks, b);
    report.delta = {relative_drop(report.original.mrr, report.weighted.mrr),
                    relative_drop(report.original.hits1, report.weighted.hits1),
                    relative_drop(report.original.hits3, report.weighted.hits3),
                    relative_drop(report.original.hits10, report.weighted.hits10)};
    report.bins = group_by_strikingness(ranks, bin_width);
  } else {
    report.weighted = {kNaN, kNaN, kNaN, kNaN};
    report.delta = {kNaN, kNaN, kNaN, kNaN};
  }
  return report;
}

std::vector<BinRow> group_by_strikingness(const RankTable& ranks, double bin_width) {
  if (!(bin_width > 0.0 && bin_width <= 1.0)) {
    throw ConfigError("bin width must lie in (0, 1]");
  }
  const auto edges = bin_edges(bin_width);
  std::vector<BinRow> bins(edges.size());
  for (std::size_t k = 0; k < bins.size(); ++k) {
    bins[k].lower = edges[k];
    bins[k].upper = k + 1 < edges.size() ? edges[k + 1] : 1.0;
  }
  for (const auto& row : ranks.rows) {
    if (std::isnan(row.sk)) throw ValidationError("grouping requires strikingness on every row");
    auto it = std::upper_bound(edges.begin(), edges.end(), row.sk);
    std::size_t k = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
    k = std::min(k, bins.size() - 1);
    auto& bin = bins[k];
    ++bin.count;
    bin.mean_sk += row.sk;
    bin.mrr += 1.0 / static_cast<double>(row.rank);
    bin.hits1 += row.rank <= 1;
    bin.hits3 += row.rank <= 3;
    bin.hits10 += row.rank <= 10;
  }
  for (auto& bin : bins) {
    if (bin.count == 0) {
      bin.mean_sk = bin.mrr = bin.hits1 = bin.hits3 = bin.hits10 = kNaN;
      continue;
    }
    const auto n = static_cast<double>(bin.count);
    bin.mean_sk /= n;
    bin.mrr /= n;
    bin.hits1 /= n;
    bin.hits3 /= n;
    bin.hits10 /= n;
  }
  return bins;
}

void write_report_json(const EvalReport& report, std::ostream& out) {
  nlohmann::ordered_json j;
  j["model_name"] = report.model_name;
  j["tie_policy"] = std::string(to_string(report.tie_policy));
  j["queries"] = report.query_count;
  j["bias_b"] = report.bias_b;
  j["mrr_available"] = report.mrr_available;
  j["sk_available"] = report.sk_available;
  j["original"] = metrics_json(report.original, report.mrr_available);
  if (report.sk_available) {
    j["weighted"] = metrics_json(report.weighted, report.mrr_available);
    j["delta"] = metrics_json(report.delta, report.mrr_available);
  } else {
    j["weighted"] = nullptr;
    j["delta"] = nullptr;
  }
  j["bin_width"] = report.bin_width;
  auto bins = nlohmann::ordered_json::array();
  for (const auto& bin : report.bins) {
    nlohmann::ordered_json b;
    b["lower"] = bin.lower;
    b["upper"] = bin.upper;
    b["count"] = bin.count;
    b["mean_sk"] = maybe(bin.mean_sk);
    b["mrr"] = report.mrr_available ? maybe(bin.mrr) : nlohmann::json(nullptr);
    b["hits@1"] = maybe(bin.hits1);
    b["hits@3"] = maybe(bin.hits3);
    b["hits@10"] = maybe(bin.hits10);
    bins.push_back(std::move(b));
  }
  j["bins"] = std::move(bins);
  out << j.dump(2) << '\n';
}

void write_bins_csv(std::span<const BinRow> bins, std::ostream& out) {
  auto cell = [](double v) { return std::isnan(v) ? std::string() : internal::format_double(v); };
  out << "sk_lower,sk_upper,count,mean_sk,mrr,hits@1,hits@3,hits@10\n";
  for (const auto& b : bins) {
    out << internal::format_double(b.lower) << ',' << internal::format_double(b.upper) << ','
        << b.count << ',' << cell(b.mean_sk) << ',' << cell(b.mrr) << ',' << cell(b.hits1) << ','
        << cell(b.hits3) << ',' << cell(b.hits10) << '\n';
  }
}

double neighborhood_overlap(const Quadruple& event, const TemporalIndex& history,
                            const Window& window) {
  const TimeIndex t = event.timestamp;
  const TimeIndex begin = window_start(window, t);
  auto neighbours = [&](EntityId e) {
    std::vector<EntityId> out;
    // Inverse facts make subject_history cover both argument positions.
    for (const auto& edge : in_window(history.subject_history(e), begin, t)) {
      out.push_back(edge.object);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  const auto ns = neighbours(event.subject);
  const auto no = neighbours(event.object);
  std::vector<EntityId> common;
  std::set_intersection(ns.begin(), ns.end(), no.begin(), no.end(), std::back_inserter(common));
  const std::size_t uni = ns.size() + no.size() - common.size();
  return uni == 0 ? 0.0 : static_cast<double>(common.size()) / static_cast<double>(uni);
}

double n_model_hits(std::span<const RankTable> tables, std::size_t n, std::size_t k) {
  if (n < 1 || n > tables.size()) {
    throw ConfigError("n must lie in [1, " + std::to_string(tables.size()) + "]");
  }
  std::map<QueryKey, std::size_t> hits;
  for (const auto& row : tables[0].rows) {
    if (!hits.emplace(row.key, 0).second) throw ValidationError("duplicate query in rank table");
  }
  for (const auto& table : tables) {
    if (table.rows.size() != hits.size()) {
      throw ValidationError("rank tables cover different query sets");
    }
    for (const auto& row : table.rows) {
      const auto it = hits.find(row.key);
      if (it == hits.end()) throw ValidationError("rank tables cover different query sets");
      if (row.rank <= k) ++it->second;
    }
  }
  if (hits.empty()) return 0.0;
  const auto satisfied = std::count_if(hits.begin(), hits.end(),
                                       [&](const auto& kv) { return kv.second >= n; });
  return static_cast<double>(satisfied) / static_cast<double>(hits.size());
}

RankTable filter_by_sk(const RankTable& table, double lo, double hi) {
  RankTable out = table;
  out.rows.clear();
  for (const auto& row : table.rows) {
    if (row.sk >= lo && (row.sk < hi || (hi >= 1.0 && row.sk <= 1.0))) out.rows.push_back(row);
  }
  return out;
}

}  // namespace strikebench
