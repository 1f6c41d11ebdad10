#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "chaineval/errors.hpp"
#include "commands.hpp"

namespace cli = chaineval::cli;

int main(int argc, char** argv) {
  CLI::App app{
      "chaineval - attack-chain capability evaluation: run agents on "
      "CTF-style challenges, score results, and emit bottleneck/cost "
      "reports"};
  app.require_subcommand(1);

  // validate ---------------------------------------------------------------
  cli::ValidateArgs validate_args;
  CLI::App* validate =
      app.add_subcommand("validate", "Validate a catalog and/or challenge pack");
  validate->add_option("--catalog", validate_args.catalog_path,
                       "Attack-chain catalog JSON file");
  validate->add_option("--challenges", validate_args.challenges_dir,
                       "Challenge pack directory");

  // run ----------------------------------------------------------------------
  cli::RunArgs run_args;
  std::string run_config_path;
  CLI::App* run = app.add_subcommand(
      "run", "Run the agent harness over a challenge pack");
  run->add_option("--config", run_config_path,
                  "JSON config file (flags override it)");
  auto* opt_catalog = run->add_option("--catalog", run_args.config.catalog_path,
                                      "Attack-chain catalog JSON file");
  auto* opt_challenges =
      run->add_option("--challenges", run_args.config.challenges_dir,
                      "Challenge pack directory");
  auto* opt_adapter =
      run->add_option("--adapter", run_args.config.adapter_kind,
                      "Adapter kind: scripted | http (default scripted)");
  auto* opt_script = run->add_option("--script", run_args.config.adapter_script,
                                     "Turn script for the scripted adapter");
  auto* opt_base_url =
      run->add_option("--base-url", run_args.config.adapter_base_url,
                      "Chat-completion endpoint base URL (http adapter)");
  auto* opt_model = run->add_option("--model", run_args.config.adapter_model,
                                    "Model name sent to the endpoint");
  auto* opt_token_env =
      run->add_option("--token-env", run_args.config.adapter_token_env,
                      "Env var holding the bearer token (default "
                      "CHAINEVAL_API_TOKEN; value never logged)");
  auto* opt_sandbox =
      run->add_option("--sandbox", run_args.config.sandbox_kind,
                      "Sandbox kind: mock | container (default mock)");
  auto* opt_runtime =
      run->add_option("--runtime-binary", run_args.config.runtime_binary,
                      "OCI runtime binary for container sandboxes "
                      "(default docker)");
  auto* opt_max =
      run->add_option("--max-interactions", run_args.config.max_interactions,
                      "Interaction limit per episode (default 30)");
  auto* opt_par = run->add_option("--parallelism", run_args.config.parallelism,
                                  "Concurrent episodes (default 1)");
  auto* opt_attempts =
      run->add_option("--attempts", run_args.config.attempts_per_challenge,
                      "Attempts per challenge (default 1)");
  auto* opt_store = run->add_option("--store", run_args.config.run_store_path,
                                    "Run store path (default runs/latest.jsonl)");
  run->add_flag("--print-config", run_args.print_config,
                "Print the effective config and exit");

  // score --------------------------------------------------------------------
  cli::ScoreArgs score_args;
  CLI::App* score =
      app.add_subcommand("score", "Aggregate a run store into rate tables");
  score->add_option("--store", score_args.store_path, "Run store (JSONL)")
      ->required();
  score->add_option("--challenges", score_args.challenges_dir,
                    "Challenge pack directory")
      ->required();
  score->add_option("--catalog", score_args.catalog_path,
                    "Catalog, for provenance stamping");
  score->add_option("--mode", score_args.mode,
                    "by_unique_challenge (default) | by_attempt");
  score->add_option("--by", score_args.by,
                    "Dimension: difficulty (default) | cluster | phase");
  score->add_option("--format", score_args.format,
                    "json (default) | csv | markdown");
  score->add_option("--out", score_args.out_path, "Exact output file");
  score->add_option("--out-dir", score_args.out_dir,
                    "Output directory for auto-named files (default .)");

  // bottleneck -----------------------------------------------------------------
  cli::BottleneckArgs bottleneck_args;
  CLI::App* bottleneck = app.add_subcommand(
      "bottleneck", "Per-phase cost breakdowns from an expert survey");
  bottleneck
      ->add_option("--estimates", bottleneck_args.estimates_path,
                   "Survey file (.json or .csv)")
      ->required();
  bottleneck->add_option("--salary", bottleneck_args.salary_per_year,
                         "Salary per year (default 500000)");
  bottleneck->add_option("--days", bottleneck_args.working_days_per_year,
                         "Working days per year (default 250)");
  bottleneck->add_option("--threshold", bottleneck_args.threshold,
                         "Inclusive bottleneck share threshold (default 0.10)");
  bottleneck->add_flag("--use-min-resource", bottleneck_args.use_min_resource,
                       "Use the sophisticated-adversary minimum intervals");
  bottleneck->add_option("--point", bottleneck_args.interval_point,
                         "Interval point: lo | mid (default) | hi");
  bottleneck->add_flag("--exclude-outliers", bottleneck_args.exclude_outliers,
                       "Drop cases marked excluded_as_outlier");
  bottleneck->add_option("--format", bottleneck_args.format,
                         "json (default) | csv");
  bottleneck->add_option("--out-dir", bottleneck_args.out_dir,
                         "Output directory (default .)");

  // report ------------------------------------------------------------------
  cli::ReportArgs report_args;
  CLI::App* report = app.add_subcommand(
      "report", "Emit heatmap, coverage-gap, emulation, compare, or cds files");
  report
      ->add_option("--kind", report_args.kind,
                   "heatmap | gaps | emulate | compare | cds")
      ->required();
  report->add_option("--store", report_args.store_path, "Run store (JSONL)");
  report->add_option("--defended-store", report_args.defended_store_path,
                     "Second run store for compare");
  report->add_option("--challenges", report_args.challenges_dir,
                     "Challenge pack directory");
  report->add_option("--catalog", report_args.catalog_path,
                     "Attack-chain catalog JSON file");
  report->add_option("--shares", report_args.shares_path,
                     "Per-phase bottleneck shares (JSON map)");
  report->add_option("--estimates", report_args.estimates_path,
                     "Survey file to derive shares from");
  report->add_option("--archetype", report_args.archetype,
                     "Archetype id for emulate");
  report->add_option("--top-k", report_args.top_k,
                     "Plan steps per phase (default 3)");
  report->add_option("--min-evals", report_args.min_evals,
                     "Coverage floor per phase (default 1)");
  report->add_option("--alert-rate", report_args.alert_rate,
                     "Capability alert threshold (default 0.30)");
  report->add_option("--mode", report_args.mode,
                     "by_unique_challenge (default) | by_attempt");
  report->add_option("--format", report_args.format,
                     "json | csv | markdown | svg-heatmap (per-kind default)");
  report->add_option("--out", report_args.out_path, "Exact output file");
  report->add_option("--out-dir", report_args.out_dir,
                     "Output directory for auto-named files (default .)");
  report->add_option("--salary", report_args.salary_per_year,
                     "Salary per year for --estimates (default 500000)");
  report->add_option("--days", report_args.working_days_per_year,
                     "Working days per year for --estimates (default 250)");
  report->add_option("--threshold", report_args.threshold,
                     "Bottleneck threshold for --estimates (default 0.10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitValidation;
  }

  try {
    if (validate->parsed()) {
      return cli::cmd_validate(validate_args);
    }
    if (run->parsed()) {
      // Precedence: flags > config file > defaults. The config file is
      // loaded first, then any flag the user passed wins.
      if (!run_config_path.empty()) {
        cli::RunConfig merged = cli::load_run_config(run_config_path);
        if (opt_catalog->count()) merged.catalog_path = run_args.config.catalog_path;
        if (opt_challenges->count())
          merged.challenges_dir = run_args.config.challenges_dir;
        if (opt_adapter->count()) merged.adapter_kind = run_args.config.adapter_kind;
        if (opt_script->count()) merged.adapter_script = run_args.config.adapter_script;
        if (opt_base_url->count())
          merged.adapter_base_url = run_args.config.adapter_base_url;
        if (opt_model->count()) merged.adapter_model = run_args.config.adapter_model;
        if (opt_token_env->count())
          merged.adapter_token_env = run_args.config.adapter_token_env;
        if (opt_sandbox->count()) merged.sandbox_kind = run_args.config.sandbox_kind;
        if (opt_runtime->count())
          merged.runtime_binary = run_args.config.runtime_binary;
        if (opt_max->count())
          merged.max_interactions = run_args.config.max_interactions;
        if (opt_par->count()) merged.parallelism = run_args.config.parallelism;
        if (opt_attempts->count())
          merged.attempts_per_challenge = run_args.config.attempts_per_challenge;
        if (opt_store->count())
          merged.run_store_path = run_args.config.run_store_path;
        run_args.config = merged;
      }
      return cli::cmd_run(run_args);
    }
    if (score->parsed()) {
      return cli::cmd_score(score_args);
    }
    if (bottleneck->parsed()) {
      return cli::cmd_bottleneck(bottleneck_args);
    }
    if (report->parsed()) {
      return cli::cmd_report(report_args);
    }
  } catch (const chaineval::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return cli::kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitValidation;
  }
  return cli::kExitValidation;
}
