#include "commands.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "strikebench/baselines.h"
#include "strikebench/dataset.h"
#include "strikebench/ensemble.h"
#include "strikebench/error.h"
#include "strikebench/metrics.h"
#include "strikebench/predictions.h"
#include "strikebench/recurrency.h"
#include "strikebench/rsmf.h"
#include "strikebench/rules.h"
#include "strikebench/stats.h"
#include "strikebench/strikingness_table.h"

namespace strikebench::cli {
namespace fs = std::filesystem;

namespace {

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }
void info(const std::string& msg) { std::cerr << msg << '\n'; }

fs::path prepare_output(const std::string& path) {
  if (path.empty()) throw ConfigError("an output path is required");
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create " + p.parent_path().string() + ": " + ec.message());
  }
  return p;
}

fs::path prepare_dir(const std::string& path) {
  if (path.empty()) throw ConfigError("an output directory is required");
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw IoError("cannot create " + path + ": " + ec.message());
  return fs::path(path);
}

fs::path manifest_for(const fs::path& output) {
  return output.string() + ".manifest.json";
}

struct Loaded {
  fs::path dir;
  Dataset raw;
  Dataset aug;
};

Loaded load(const DataOptions& o) {
  Loaded l;
  l.dir = resolve_data_dir(o.data);
  FormatSpec spec;
  spec.time_divisor = o.time_divisor;
  l.raw = load_dataset(l.dir, spec);
  const char* names[3] = {"train", "valid", "test"};
  for (int i = 0; i < 3; ++i) {
    if (l.raw.duplicates_dropped[i]) {
      warn(std::to_string(l.raw.duplicates_dropped[i]) + " duplicate quadruples dropped from " +
           names[i]);
    }
  }
  l.aug = augment_inverse(l.raw);
  return l;
}

TemporalIndex full_index(const Dataset& aug) {
  return TemporalIndex::build(aug, {Split::kTrain, Split::kValid, Split::kTest});
}

Window parse_window(const std::string& text) {
  if (text == "full") return std::nullopt;
  try {
    std::size_t used = 0;
    const long long w = std::stoll(text, &used);
    if (used != text.size() || w < 1) throw std::invalid_argument(text);
    return Window{w};
  } catch (const std::exception&) {
    throw ConfigError("--window must be a positive integer or 'full', got '" + text + "'");
  }
}

RsmfConfig parse_rsmf(const StrikingnessOptions& o) {
  RsmfConfig cfg;
  cfg.window = parse_window(o.window);
  cfg.lambda_decay = o.lambda;
  std::vector<double> alpha;
  std::stringstream ss(o.alpha);
  std::string part;
  while (std::getline(ss, part, ',')) {
    char* end = nullptr;
    const double v = std::strtod(part.c_str(), &end);
    if (part.empty() || *end != '\0') throw ConfigError("bad --alpha component '" + part + "'");
    alpha.push_back(v);
  }
  if (alpha.size() != 3) throw ConfigError("--alpha needs three comma-separated weights");
  cfg.alpha_subject = alpha[0];
  cfg.alpha_object = alpha[1];
  cfg.alpha_relation = alpha[2];
  cfg.validate();
  return cfg;
}

std::string window_text(const Window& w) { return w ? std::to_string(*w) : "full"; }

void print_metrics(const EvalReport& r) {
  auto cell = [](double v, bool ok = true) {
    if (!ok || std::isnan(v)) return std::string("     n/a");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%8.2f", 100.0 * v);
    return std::string(buf);
  };
  std::cout << "model " << r.model_name << "  queries " << r.query_count << "  tie "
            << to_string(r.tie_policy) << '\n';
  std::cout << "            MRR    H@1     H@3     H@10\n";
  std::cout << "ORG  " << cell(r.original.mrr, r.mrr_available) << cell(r.original.hits1)
            << cell(r.original.hits3) << cell(r.original.hits10) << '\n';
  if (r.sk_available) {
    std::cout << "SK   " << cell(r.weighted.mrr, r.mrr_available) << cell(r.weighted.hits1)
              << cell(r.weighted.hits3) << cell(r.weighted.hits10) << "   (b = " << r.bias_b
              << ")\n";
    std::cout << "Δ%   " << cell(r.delta.mrr, r.mrr_available) << cell(r.delta.hits1)
              << cell(r.delta.hits3) << cell(r.delta.hits10) << '\n';
  } else {
    std::cout << "SK   strikingness not supplied\n";
  }
}

nlohmann::ordered_json metrics_json(const MetricValues& m) {
  auto num = [](double v) { return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v); };
  return {{"mrr", num(m.mrr)}, {"hits@1", num(m.hits1)}, {"hits@3", num(m.hits3)}, {"hits@10", num(m.hits10)}};
}

template <typename Fn>
void write_text(const fs::path& path, Fn&& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  body(out);
  if (!out) throw IoError("write failed: " + path.string());
}

std::string sanitize(std::string name) {
  for (char& c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  }
  return name.empty() ? "model" : name;
}

}  // namespace

fs::path resolve_data_dir(const std::string& arg) {
  const char* root = std::getenv("STRIKEBENCH_DATA_DIR");
  if (arg.empty()) {
    if (!root || !*root) throw ConfigError("no dataset given: pass --data or set STRIKEBENCH_DATA_DIR");
    return fs::path(root);
  }
  const fs::path p(arg);
  if (!fs::exists(p) && p.is_relative() && root && *root && fs::exists(fs::path(root) / p)) {
    return fs::path(root) / p;
  }
  return p;
}

Outcome run_ingest(const IngestOptions& o) {
  const auto l = load(o.data);
  validate_dataset(l.raw);
  const auto dir = prepare_dir(o.out);
  save_dataset(l.raw, dir);
  Outcome out;
  out.inputs = {l.dir};
  out.outputs = {dir};
  out.manifest_path = dir / "manifest.json";
  out.results = {{"entities", l.raw.entity_count},
                 {"relations", l.raw.raw_relation_count},
                 {"train", l.raw.train.size()},
                 {"valid", l.raw.valid.size()},
                 {"test", l.raw.test.size()},
                 {"time_divisor", l.raw.time_divisor},
                 {"duplicates_dropped",
                  {l.raw.duplicates_dropped[0], l.raw.duplicates_dropped[1], l.raw.duplicates_dropped[2]}}};
  std::cout << out.results.dump(2) << '\n';
  return out;
}

Outcome run_mine(const MineOptions& o) {
  const auto l = load(o.data);
  MiningConfig mc;
  mc.tau = o.tau;
  mc.min_body_support = o.min_body_support;
  mc.sample_cap = o.sample_cap;
  mc.seed = o.seed;
  mc.jobs = o.jobs;
  const auto rules = mine_rules(TemporalIndex::build(l.aug, {Split::kTrain}), mc);
  const auto path = prepare_output(o.out);
  save_rules(rules, path);
  info("mined " + std::to_string(rules.size()) + " rules");
  Outcome out;
  out.inputs = {l.dir};
  out.outputs = {path};
  out.manifest_path = manifest_for(path);
  out.results = {{"rules", rules.size()}};
  return out;
}

Outcome run_strikingness(const StrikingnessOptions& o) {
  const auto l = load(o.data);
  const Split split = parse_split(o.split);
  if (o.history_scope != "all-before-t" && o.history_scope != "train-only") {
    throw ConfigError("--history-scope must be all-before-t or train-only");
  }
  const auto history = o.history_scope == "train-only"
                           ? TemporalIndex::build(l.aug, {Split::kTrain})
                           : full_index(l.aug);
  const auto queries = make_queries(l.aug, split);
  Outcome out;
  out.inputs = {l.dir};

  StrikingnessTable table;
  if (o.measure == "rsmf") {
    const auto cfg = parse_rsmf(o);
    RuleSet rules;
    double tau = o.tau;
    if (!o.rules.empty()) {
      rules = load_rules(o.rules, o.tau);
      out.inputs.push_back(o.rules);
    } else {
      MiningConfig mc;
      mc.tau = o.tau;
      mc.min_body_support = o.min_body_support;
      mc.jobs = o.jobs;
      rules = mine_rules(TemporalIndex::build(l.aug, {Split::kTrain}), mc);
    }
    if (rules.empty()) warn("rule set is empty; every strikingness value will be 0");
    const auto records = batch_strikingness(queries, rules, history, cfg, o.jobs);
    table.header_json = rsmf_header(cfg, tau, o.history_scope, o.split);
    table.rows.reserve(records.size());
    for (const auto& r : records) table.rows.push_back(to_row(r));
  } else if (o.measure == "freq_inv" || o.measure == "temp_inv") {
    const PairFrequencyTable freq(l.aug.train);
    const auto measure = o.measure == "freq_inv" ? BaselineMeasure::kFreqInv : BaselineMeasure::kTempInv;
    table.rows = batch_baseline(queries, measure, freq, history, o.lambda_t, o.jobs);
    table.header_json = baseline_header(o.measure, o.lambda_t, o.history_scope, o.split);
  } else {
    throw ConfigError("--measure must be rsmf, freq_inv or temp_inv");
  }

  const auto path = prepare_output(o.out);
  save_strikingness_table(table, path);
  out.outputs = {path};
  out.manifest_path = manifest_for(path);
  double mean = 0.0;
  for (const auto& r : table.rows) mean += r.sk;
  out.results = {{"queries", table.rows.size()},
                 {"mean_sk", table.rows.empty() ? 0.0 : mean / static_cast<double>(table.rows.size())}};
  return out;
}

Outcome run_recurrency(const RecurrencyOptions& o) {
  const auto l = load(o.data);
  const Split split = parse_split(o.split);
  const auto history = full_index(l.aug);
  const TiePolicy policy = parse_tie_policy(o.tie_policy);
  Outcome out;
  out.inputs = {l.dir};

  RecurrencyConfig cfg;
  if (o.xi.has_value() != o.kappa.has_value()) {
    throw ConfigError("--xi and --kappa must be given together");
  }
  if (o.xi) {
    cfg = {*o.xi, *o.kappa};
    cfg.validate();
  } else {
    RecurrencyGrid grid;
    grid.xi = o.grid_xi;
    grid.kappa = o.grid_kappa;
    const auto valid = make_eval_queries(l.aug, Split::kValid);
    const auto tuning = tune_recurrency(valid, history, grid, policy, o.jobs);
    cfg = tuning.best;
    out.results["valid_mrr"] = tuning.best_mrr;
    auto scan = nlohmann::ordered_json::array();
    for (const auto& p : tuning.scan) scan.push_back({{"xi", p[0]}, {"kappa", p[1]}, {"mrr", p[2]}});
    out.results["scan"] = std::move(scan);
    info("tuned xi = " + std::to_string(cfg.decay_xi) + ", kappa = " + std::to_string(cfg.mix_kappa));
  }
  out.results["xi"] = cfg.decay_xi;
  out.results["kappa"] = cfg.mix_kappa;

  const auto queries = make_eval_queries(l.aug, split);
  const auto preds = predict_recurrency(queries, history, cfg, o.jobs);
  const auto path = prepare_output(o.out);
  save_predictions(preds, path);
  out.outputs = {path};
  out.manifest_path = manifest_for(path);
  return out;
}

Outcome run_evaluate(const EvaluateOptions& o) {
  const auto l = load(o.data);
  const Split split = parse_split(o.split);
  const auto truth = full_index(l.aug);
  const auto queries = make_eval_queries(l.aug, split);
  const auto preds = load_predictions(o.preds);
  Outcome out;
  out.inputs = {l.dir, o.preds};

  auto ranks = rank_predictions(queries, preds, truth, parse_tie_policy(o.tie_policy), o.jobs);
  if (!o.sk.empty()) {
    join_strikingness(ranks, load_strikingness_table(o.sk));
    out.inputs.push_back(o.sk);
  }
  const auto report = aggregate(ranks, o.b, o.bin_width);

  const auto dir = prepare_dir(o.out_dir);
  const auto report_path = dir / "report.json";
  const auto ranks_path = dir / "ranks.tsv";
  write_text(report_path, [&](std::ostream& s) { write_report_json(report, s); });
  save_rank_table(ranks, ranks_path);
  out.outputs = {report_path, ranks_path};
  if (report.sk_available) {
    const auto bins_path = dir / "bins.csv";
    write_text(bins_path, [&](std::ostream& s) { write_bins_csv(report.bins, s); });
    out.outputs.push_back(bins_path);
  }
  out.manifest_path = dir / "manifest.json";
  out.results = {{"original", metrics_json(report.original)}};
  if (report.sk_available) out.results["weighted"] = metrics_json(report.weighted);
  print_metrics(report);
  return out;
}

Outcome run_ensemble(const EnsembleOptions& o) {
  const auto l = load(o.data);
  const Split split = parse_split(o.split);
  const auto truth = full_index(l.aug);
  EnsembleConfig cfg;
  cfg.grid_step = o.grid_step;
  cfg.normalization = parse_normalization(o.normalization);
  cfg.validate();
  const auto a = load_predictions(o.a);
  const auto b = load_predictions(o.b);
  Outcome out;
  out.inputs = {l.dir, o.a, o.b};

  if (o.eta) {
    cfg.eta = *o.eta;
    cfg.validate();
  } else {
    const bool have_valid = !o.valid_a.empty() && !o.valid_b.empty();
    if (o.valid_a.empty() != o.valid_b.empty()) {
      throw ConfigError("--valid-a and --valid-b must be given together");
    }
    PredictionSet va, vb;
    if (have_valid) {
      va = load_predictions(o.valid_a);
      vb = load_predictions(o.valid_b);
      out.inputs.push_back(o.valid_a);
      out.inputs.push_back(o.valid_b);
    } else {
      warn("no validation predictions; searching eta on the " + o.split + " split itself");
    }
    const auto search_split = have_valid ? Split::kValid : split;
    const auto queries = make_eval_queries(l.aug, search_split);
    StrikingnessTable sk;
    RankingContext ctx;
    ctx.queries = queries;
    ctx.truth = &truth;
    ctx.entity_count = l.aug.entity_count;
    ctx.tie_policy = parse_tie_policy(o.tie_policy);
    ctx.bias_b = o.bias_b;
    ctx.jobs = o.jobs;
    const auto metric = parse_search_metric(o.metric);
    if (!o.sk.empty()) {
      sk = load_strikingness_table(o.sk);
      ctx.strikingness = &sk;
      out.inputs.push_back(o.sk);
    }
    const auto result = search_eta(have_valid ? va : a, have_valid ? vb : b, ctx, metric, cfg);
    cfg.eta = result.eta;
    auto scan = nlohmann::ordered_json::array();
    for (const auto& [eta, value] : result.scan) scan.push_back({{"eta", eta}, {"value", value}});
    out.results["metric"] = std::string(to_string(metric));
    out.results["search_split"] = std::string(to_string(search_split));
    out.results["best_value"] = result.best_value;
    out.results["scan"] = std::move(scan);
  }
  out.results["eta"] = cfg.eta;
  out.results["normalization"] = std::string(to_string(cfg.normalization));

  const auto fused = fuse_predictions(a, b, l.aug.entity_count, cfg);
  if (fused.size() != a.size() || fused.size() != b.size()) {
    warn("prediction sets cover different queries; fused only the " +
         std::to_string(fused.size()) + " shared ones");
  }
  const auto path = prepare_output(o.out);
  if (path.extension() == ".bin") {
    save_dense_predictions(fused, l.aug.entity_count, path);
    out.outputs = {path, fs::path(path.string() + ".json")};
  } else {
    save_predictions(fused, path);
    out.outputs = {path};
  }
  const fs::path scan_path = path.string() + ".scan.json";
  write_text(scan_path, [&](std::ostream& s) { s << out.results.dump(2) << '\n'; });
  out.outputs.push_back(scan_path);
  out.manifest_path = manifest_for(path);
  info("eta = " + std::to_string(cfg.eta));
  return out;
}

Outcome run_report(const ReportOptions& o) {
  if (o.ranks.empty()) throw ConfigError("report needs at least one --ranks table");
  Outcome out;
  std::vector<RankTable> tables;
  std::optional<StrikingnessTable> sk;
  if (!o.sk.empty()) {
    sk = load_strikingness_table(o.sk);
    out.inputs.push_back(o.sk);
  }
  for (const auto& path : o.ranks) {
    auto t = load_rank_table(path);
    if (t.model_name.empty()) t.model_name = fs::path(path).stem().string();
    if (sk) join_strikingness(t, *sk);
    tables.push_back(std::move(t));
    out.inputs.push_back(path);
  }
  const auto dir = prepare_dir(o.out_dir);
  nlohmann::ordered_json summary;
  auto models = nlohmann::ordered_json::array();

  for (const auto& t : tables) {
    const auto report = aggregate(t, o.b, o.group_width);
    nlohmann::ordered_json m;
    m["model_name"] = t.model_name;
    m["original"] = metrics_json(report.original);
    if (report.sk_available) {
      m["weighted"] = metrics_json(report.weighted);
      m["delta"] = metrics_json(report.delta);
      const auto bins_path =
          dir / (tables.size() == 1 ? std::string("bins.csv") : "bins_" + sanitize(t.model_name) + ".csv");
      write_text(bins_path, [&](std::ostream& s) { write_bins_csv(report.bins, s); });
      out.outputs.push_back(bins_path);

      // Reciprocal ranks of the low-strikingness half against the high half.
      std::vector<double> sks;
      for (const auto& r : t.rows) sks.push_back(r.sk);
      std::nth_element(sks.begin(), sks.begin() + static_cast<std::ptrdiff_t>(sks.size() / 2), sks.end());
      const double median = sks.empty() ? 0.0 : sks[sks.size() / 2];
      std::vector<double> low, high;
      for (const auto& r : t.rows) (r.sk < median ? low : high).push_back(1.0 / static_cast<double>(r.rank));
      nlohmann::ordered_json sig;
      sig["split_at_sk"] = median;
      sig["low_count"] = low.size();
      sig["high_count"] = high.size();
      if (!low.empty() && !high.empty()) {
        const auto s = group_significance(low, high);
        auto opt = [](const std::optional<double>& v) {
          return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
        };
        sig["welch_t"] = opt(s.welch_t);
        sig["welch_df"] = opt(s.welch_df);
        sig["welch_p"] = opt(s.welch_p);
        sig["mannwhitney_u"] = s.mannwhitney_u;
        sig["mannwhitney_p"] = opt(s.mannwhitney_p);
      } else {
        warn("strikingness median split leaves an empty group; significance skipped");
      }
      m["significance_low_vs_high_sk"] = std::move(sig);
    }
    models.push_back(std::move(m));
    print_metrics(report);
  }
  summary["models"] = std::move(models);
  summary["bias_b"] = o.b;
  summary["group_width"] = o.group_width;

  if (tables.size() > 1) {
    auto nm = nlohmann::ordered_json::object();
    for (std::size_t n = 1; n <= tables.size(); ++n) {
      nm[std::to_string(n)] = n_model_hits(tables, n, o.k);
    }
    summary["n_model_hits"] = {{"k", o.k}, {"by_n", std::move(nm)}};
  }

  if (!o.data.data.empty() || std::getenv("STRIKEBENCH_DATA_DIR")) {
    const auto l = load(o.data);
    out.inputs.push_back(l.dir);
    const auto history = full_index(l.aug);
    const auto queries = make_eval_queries(l.aug, parse_split(o.split));
    const Window w = parse_window(o.window);
    std::unordered_map<QueryKey, double, QueryKeyHash> nof;
    std::vector<double> values;
    for (const auto& q : queries) {
      const double v = neighborhood_overlap(q.fact, history, w);
      nof[q.key] = v;
      values.push_back(v);
    }
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
    auto groups = nlohmann::ordered_json::array();
    for (const auto& t : tables) {
      RankTable hi = t, lo = t;
      hi.rows.clear();
      lo.rows.clear();
      for (const auto& r : t.rows) {
        const auto it = nof.find(r.key);
        if (it == nof.end()) throw ValidationError("rank table query missing from the " + o.split + " split");
        (it->second >= median ? hi : lo).rows.push_back(r);
      }
      nlohmann::ordered_json g;
      g["model_name"] = t.model_name;
      g["high_no_f"] = {{"count", hi.rows.size()}, {"original", metrics_json(original_metrics(hi))}};
      g["low_no_f"] = {{"count", lo.rows.size()}, {"original", metrics_json(original_metrics(lo))}};
      if (t.has_sk()) {
        double shi = 0.0, slo = 0.0;
        for (const auto& r : hi.rows) shi += r.sk;
        for (const auto& r : lo.rows) slo += r.sk;
        g["high_no_f"]["mean_sk"] = hi.rows.empty() ? 0.0 : shi / static_cast<double>(hi.rows.size());
        g["low_no_f"]["mean_sk"] = lo.rows.empty() ? 0.0 : slo / static_cast<double>(lo.rows.size());
      }
      groups.push_back(std::move(g));
    }
    summary["neighborhood_overlap"] = {{"window", window_text(w)}, {"median", median}, {"groups", std::move(groups)}};
  }

  const auto summary_path = dir / "analysis.json";
  write_text(summary_path, [&](std::ostream& s) { s << summary.dump(2) << '\n'; });
  out.outputs.push_back(summary_path);
  out.manifest_path = dir / "manifest.json";
  return out;
}

}  // namespace strikebench::cli
