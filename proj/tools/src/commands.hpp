#pragma once

#include <optional>
#include <string>

namespace chaineval::cli {

// Stable exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitPartial = 3;

// Effective configuration. Precedence: command-line flags > config file >
// these built-in defaults.
struct RunConfig {
  std::string catalog_path;
  std::string challenges_dir;
  std::string adapter_kind = "scripted";  // scripted | http
  std::string adapter_script;
  std::string adapter_base_url;
  std::string adapter_model;
  std::string adapter_token_env = "CHAINEVAL_API_TOKEN";
  std::string adapter_extra_params = "{}";
  std::string sandbox_kind = "mock";  // mock | container
  std::string runtime_binary = "docker";
  int max_interactions = 30;
  int parallelism = 1;
  int attempts_per_challenge = 1;
  std::string run_store_path = "runs/latest.jsonl";
  double salary_per_year = 500000.0;
  int working_days_per_year = 250;
  double bottleneck_threshold = 0.10;
  std::string mode = "by_unique_challenge";  // or by_attempt
};

// Overlays the JSON config file (same schema as RunConfig) onto defaults.
RunConfig load_run_config(const std::string& path);

std::string run_config_to_json(const RunConfig& config);

struct ValidateArgs {
  std::string catalog_path;
  std::string challenges_dir;
};
int cmd_validate(const ValidateArgs& args);

struct RunArgs {
  RunConfig config;
  bool print_config = false;
};
int cmd_run(const RunArgs& args);

struct ScoreArgs {
  std::string store_path;
  std::string challenges_dir;
  std::string catalog_path;  // optional, for provenance
  std::string mode = "by_unique_challenge";
  std::string by = "difficulty";  // difficulty | cluster | phase
  std::string format = "json";
  std::string out_path;      // explicit output file
  std::string out_dir = "."; // used when out_path is empty
};
int cmd_score(const ScoreArgs& args);

struct BottleneckArgs {
  std::string estimates_path;
  double salary_per_year = 500000.0;
  int working_days_per_year = 250;
  double threshold = 0.10;
  bool use_min_resource = false;
  std::string interval_point = "mid";
  bool exclude_outliers = false;
  std::string format = "json";  // json | csv
  std::string out_dir = ".";
};
int cmd_bottleneck(const BottleneckArgs& args);

struct ReportArgs {
  std::string kind;  // heatmap | gaps | emulate | compare | cds
  std::string store_path;
  std::string defended_store_path;  // compare
  std::string challenges_dir;
  std::string catalog_path;
  std::string shares_path;     // JSON map phase -> share
  std::string estimates_path;  // alternative shares source
  std::string archetype;       // emulate
  int top_k = 3;               // emulate
  int min_evals = 1;           // gaps
  double alert_rate = 0.30;    // gaps
  std::string mode = "by_unique_challenge";
  std::string format;  // empty selects a per-kind default
  std::string out_path;
  std::string out_dir = ".";
  double salary_per_year = 500000.0;
  int working_days_per_year = 250;
  double threshold = 0.10;
};
int cmd_report(const ReportArgs& args);

}  // namespace chaineval::cli
