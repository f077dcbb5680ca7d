#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.h"
#include "manifest.h"
#include "strikebench/error.h"
#include "strikebench/parallel.h"
#include "strikebench/version.h"

namespace {

using namespace strikebench::cli;

void add_data(CLI::App* sub, DataOptions& d) {
  sub->add_option("--data", d.data, "Dataset directory (falls back to $STRIKEBENCH_DATA_DIR)");
  sub->add_option("--time-divisor", d.time_divisor,
                  "Divide raw timestamps by this before indexing (0 = infer)")
      ->capture_default_str();
}

void add_jobs(CLI::App* sub, unsigned& jobs) {
  jobs = strikebench::default_jobs();
  sub->add_option("--jobs,-j", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

// Every option of the chosen subcommand with its resolved value, defaults
// included.
std::map<std::string, std::string> resolved_flags(const CLI::App* sub) {
  std::map<std::string, std::string> flags;
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_name();
    if (name.empty() || name == "--help" || name == "--config") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) {
        if (!value.empty()) value += ',';
        value += r;
      }
    } else {
      value = opt->get_default_str();
    }
    flags[name] = value;
  }
  return flags;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strikebench: strikingness-aware evaluation for temporal knowledge graph forecasting"};
  app.set_version_flag("--version", std::string(STRIKEBENCH_VERSION));
  app.set_config("--config", "", "TOML/INI file of flag values; explicit flags take precedence");
  app.require_subcommand(1);

  IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Validate a dataset and write it in normalized form");
  add_data(c_ingest, ingest.data);
  c_ingest->add_option("--out", ingest.out, "Output directory")->required();

  MineOptions mine;
  auto* c_mine = app.add_subcommand("mine-rules", "Mine length-1 temporal rules from the training split");
  add_data(c_mine, mine.data);
  c_mine->add_option("--out", mine.out, "Rules file (JSON Lines) to write")->required();
  c_mine->add_option("--tau", mine.tau, "Minimum confidence")->capture_default_str();
  c_mine->add_option("--min-body-support", mine.min_body_support, "Minimum body support")
      ->capture_default_str();
  c_mine->add_option("--sample-cap", mine.sample_cap, "Body groundings sampled per body relation");
  c_mine->add_option("--seed", mine.seed, "Sampling seed")->capture_default_str();
  add_jobs(c_mine, mine.jobs);

  StrikingnessOptions sk;
  auto* c_sk = app.add_subcommand("strikingness", "Score every query of a split for strikingness");
  add_data(c_sk, sk.data);
  c_sk->add_option("--rules", sk.rules, "Rules file (mined on the fly when absent)");
  c_sk->add_option("--out", sk.out, "Strikingness TSV to write")->required();
  c_sk->add_option("--split", sk.split, "train, valid or test")->capture_default_str();
  c_sk->add_option("--measure", sk.measure, "rsmf, freq_inv or temp_inv")->capture_default_str();
  c_sk->add_option("--window", sk.window, "History window in time steps, or 'full'")->capture_default_str();
  c_sk->add_option("--lambda", sk.lambda, "Time decay of the expectation score")->capture_default_str();
  c_sk->add_option("--alpha", sk.alpha, "Subject,object,relation weights")->capture_default_str();
  c_sk->add_option("--history-scope", sk.history_scope, "all-before-t or train-only")
      ->capture_default_str();
  c_sk->add_option("--lambda-t", sk.lambda_t, "Decay for temp_inv")->capture_default_str();
  c_sk->add_option("--tau", sk.tau, "Minimum rule confidence")->capture_default_str();
  c_sk->add_option("--min-body-support", sk.min_body_support, "Minimum body support when mining")
      ->capture_default_str();
  add_jobs(c_sk, sk.jobs);

  RecurrencyOptions rec;
  auto* c_rec = app.add_subcommand("predict-recurrency", "Score queries with the recurrency baseline");
  add_data(c_rec, rec.data);
  c_rec->add_option("--out", rec.out, "Prediction JSONL to write")->required();
  c_rec->add_option("--split", rec.split, "Split to predict")->capture_default_str();
  c_rec->add_option("--grid-xi", rec.grid_xi, "Decay values searched on valid")
      ->delimiter(',')
      ->capture_default_str();
  c_rec->add_option("--grid-kappa", rec.grid_kappa, "Mix values searched on valid")
      ->delimiter(',')
      ->capture_default_str();
  c_rec->add_option("--xi", rec.xi, "Fixed decay (skips tuning with --kappa)");
  c_rec->add_option("--kappa", rec.kappa, "Fixed mix (skips tuning with --xi)");
  c_rec->add_option("--tie-policy", rec.tie_policy, "realistic, optimistic or pessimistic")
      ->capture_default_str();
  add_jobs(c_rec, rec.jobs);

  EvaluateOptions ev;
  auto* c_ev = app.add_subcommand("evaluate", "Filtered ranks, ORG and SK metrics, per-bin CSV");
  add_data(c_ev, ev.data);
  c_ev->add_option("--preds", ev.preds, "Predictions (JSONL or .bin)")->required();
  c_ev->add_option("--sk", ev.sk, "Strikingness TSV");
  c_ev->add_option("--split", ev.split, "Split the predictions cover")->capture_default_str();
  c_ev->add_option("--out-dir", ev.out_dir, "Directory for report.json, bins.csv, ranks.tsv")
      ->required();
  c_ev->add_option("--b", ev.b, "Weight bias")->capture_default_str();
  c_ev->add_option("--bin-width", ev.bin_width, "Strikingness bin width")->capture_default_str();
  c_ev->add_option("--tie-policy", ev.tie_policy, "realistic, optimistic or pessimistic")
      ->capture_default_str();
  add_jobs(c_ev, ev.jobs);

  EnsembleOptions en;
  auto* c_en = app.add_subcommand("ensemble", "Fuse two prediction sets with a tuned weight");
  add_data(c_en, en.data);
  c_en->add_option("--a", en.a, "First model predictions")->required();
  c_en->add_option("--b", en.b, "Second model predictions")->required();
  c_en->add_option("--valid-a", en.valid_a, "First model validation predictions");
  c_en->add_option("--valid-b", en.valid_b, "Second model validation predictions");
  c_en->add_option("--sk", en.sk, "Strikingness TSV of the search split (for wmrr)");
  c_en->add_option("--split", en.split, "Split of --a/--b")->capture_default_str();
  c_en->add_option("--metric", en.metric, "mrr or wmrr")->capture_default_str();
  c_en->add_option("--grid-step", en.grid_step, "Eta grid step")->capture_default_str();
  c_en->add_option("--normalization", en.normalization, "minmax, l2 or none")->capture_default_str();
  c_en->add_option("--eta", en.eta, "Fixed weight of the first model (skips the search)");
  c_en->add_option("--bias-b", en.bias_b, "Weight bias for wmrr")->capture_default_str();
  c_en->add_option("--tie-policy", en.tie_policy, "realistic, optimistic or pessimistic")
      ->capture_default_str();
  c_en->add_option("--out", en.out, "Fused predictions (.bin for dense binary)")->required();
  add_jobs(c_en, en.jobs);

  ReportOptions rep;
  auto* c_rep = app.add_subcommand("report", "Bins, n-model hits, significance and overlap analysis");
  c_rep->add_option("--ranks", rep.ranks, "Rank tables from evaluate")->required();
  c_rep->add_option("--sk", rep.sk, "Strikingness TSV to join");
  c_rep->add_option("--out-dir", rep.out_dir, "Output directory")->required();
  c_rep->add_option("--group-width", rep.group_width, "Strikingness bin width")->capture_default_str();
  c_rep->add_option("--b", rep.b, "Weight bias")->capture_default_str();
  c_rep->add_option("--k", rep.k, "Cutoff for n-model hits")->capture_default_str();
  add_data(c_rep, rep.data);
  c_rep->add_option("--split", rep.split, "Split of the rank tables")->capture_default_str();
  c_rep->add_option("--window", rep.window, "Window for neighbourhood overlap, or 'full'")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome outcome;
    const std::string name = sub->get_name();
    if (name == "ingest") outcome = run_ingest(ingest);
    else if (name == "mine-rules") outcome = run_mine(mine);
    else if (name == "strikingness") outcome = run_strikingness(sk);
    else if (name == "predict-recurrency") outcome = run_recurrency(rec);
    else if (name == "evaluate") outcome = run_evaluate(ev);
    else if (name == "ensemble") outcome = run_ensemble(en);
    else outcome = run_report(rep);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(name, resolved_flags(sub), outcome, seconds);
  } catch (const strikebench::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const strikebench::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
