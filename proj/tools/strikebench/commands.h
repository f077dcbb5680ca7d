#ifndef STRIKEBENCH_TOOLS_COMMANDS_H_
#define STRIKEBENCH_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace strikebench::cli {

// Files a command read and wrote, plus any small summary worth keeping in
// the manifest.
struct Outcome {
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  std::filesystem::path manifest_path;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
};

struct DataOptions {
  std::string data;
  std::int64_t time_divisor = 0;
};

struct IngestOptions {
  DataOptions data;
  std::string out;
};

struct MineOptions {
  DataOptions data;
  std::string out;
  double tau = 0.01;
  std::uint64_t min_body_support = 2;
  std::optional<std::uint64_t> sample_cap;
  std::uint64_t seed = 42;
  unsigned jobs = 1;
};

struct StrikingnessOptions {
  DataOptions data;
  std::string rules;
  std::string out;
  std::string split = "test";
  std::string measure = "rsmf";
  std::string window = "full";
  double lambda = 0.1;
  std::string alpha = "0.4,0.4,0.2";
  std::string history_scope = "all-before-t";
  double lambda_t = 0.005;
  double tau = 0.01;
  std::uint64_t min_body_support = 2;
  unsigned jobs = 1;
};

struct RecurrencyOptions {
  DataOptions data;
  std::string out;
  std::string split = "test";
  std::vector<double> grid_xi = {0.5, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999};
  std::vector<double> grid_kappa = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::optional<double> xi;
  std::optional<double> kappa;
  std::string tie_policy = "realistic";
  unsigned jobs = 1;
};

struct EvaluateOptions {
  DataOptions data;
  std::string preds;
  std::string sk;
  std::string split = "test";
  std::string out_dir;
  double b = 0.1;
  double bin_width = 0.1;
  std::string tie_policy = "realistic";
  unsigned jobs = 1;
};

struct EnsembleOptions {
  DataOptions data;
  std::string a;
  std::string b;
  std::string valid_a;
  std::string valid_b;
  std::string sk;
  std::string split = "test";
  std::string metric = "mrr";
  double grid_step = 0.1;
  std::string normalization = "minmax";
  std::optional<double> eta;
  double bias_b = 0.1;
  std::string tie_policy = "realistic";
  std::string out;
  unsigned jobs = 1;
};

struct ReportOptions {
  std::vector<std::string> ranks;
  std::string sk;
  std::string out_dir;
  double group_width = 0.1;
  double b = 0.1;
  std::size_t k = 3;
  DataOptions data;
  std::string split = "test";
  std::string window = "full";
};

Outcome run_ingest(const IngestOptions& o);
Outcome run_mine(const MineOptions& o);
Outcome run_strikingness(const StrikingnessOptions& o);
Outcome run_recurrency(const RecurrencyOptions& o);
Outcome run_evaluate(const EvaluateOptions& o);
Outcome run_ensemble(const EnsembleOptions& o);
Outcome run_report(const ReportOptions& o);

// --data, falling back to $STRIKEBENCH_DATA_DIR (also used as the root for
// relative names that do not exist on their own).
std::filesystem::path resolve_data_dir(const std::string& arg);

}  // namespace strikebench::cli

#endif  // STRIKEBENCH_TOOLS_COMMANDS_H_
