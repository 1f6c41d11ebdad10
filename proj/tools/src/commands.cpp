#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "chaineval/adapter.hpp"
#include "chaineval/analytics.hpp"
#include "chaineval/catalog.hpp"
#include "chaineval/challenge.hpp"
#include "chaineval/cost_model.hpp"
#include "chaineval/errors.hpp"
#include "chaineval/fingerprint.hpp"
#include "chaineval/harness.hpp"
#include "chaineval/render.hpp"
#include "chaineval/reports.hpp"
#include "chaineval/run_store.hpp"
#include "chaineval/sandbox.hpp"
#include "chaineval/survey.hpp"
#include "json.hpp"

namespace chaineval::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Machine-readable findings go to stderr; human summary to stdout.
void emit_findings(const std::string& source,
                   const std::vector<std::string>& findings) {
  json doc;
  doc["findings"] = json::array();
  for (const std::string& finding : findings) {
    doc["findings"].push_back({{"source", source}, {"message", finding}});
  }
  std::cerr << doc.dump() << "\n";
}

int fail(const std::string& source, const std::exception& e, int code) {
  emit_findings(source, {e.what()});
  return code;
}

void write_output(const fs::path& path, const std::string& bytes) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  out << bytes;
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
  std::cout << "wrote " << path.string() << "\n";
}

fs::path output_path(const std::string& explicit_path,
                     const std::string& out_dir, const std::string& stem,
                     RenderFormat format) {
  if (!explicit_path.empty()) {
    return explicit_path;
  }
  return fs::path(out_dir) /
         (stem + "." + std::string(file_extension(format)));
}

RenderFormat parse_format(const std::string& name) {
  auto format = render_format_from_string(name);
  if (!format) {
    throw ValidationError("unknown format '" + name + "'");
  }
  return *format;
}

RateMode parse_mode(const std::string& name) {
  auto mode = rate_mode_from_string(name);
  if (!mode) {
    throw ValidationError("unknown mode '" + name +
                          "' (expected by_attempt or by_unique_challenge)");
  }
  return *mode;
}

std::unique_ptr<ModelAdapter> make_adapter(const RunConfig& config) {
  if (config.adapter_kind == "scripted") {
    if (config.adapter_script.empty()) {
      throw ValidationError("scripted adapter requires a script file");
    }
    return std::make_unique<ScriptedAdapter>(
        ScriptedAdapter::from_file(config.adapter_script));
  }
  if (config.adapter_kind == "http") {
    if (config.adapter_base_url.empty()) {
      throw ValidationError("http adapter requires a base URL");
    }
    HttpAdapterConfig http;
    http.base_url = config.adapter_base_url;
    http.model = config.adapter_model;
    http.token_env = config.adapter_token_env;
    http.extra_params_json = config.adapter_extra_params;
    return std::make_unique<HttpAdapter>(std::move(http));
  }
  throw ValidationError("unknown adapter kind '" + config.adapter_kind + "'");
}

SandboxFactory make_sandbox_factory(const RunConfig& config) {
  if (config.sandbox_kind == "mock") {
    return mock_sandbox_factory();
  }
  if (config.sandbox_kind == "container") {
    return container_sandbox_factory(
        ContainerRuntimeConfig{config.runtime_binary});
  }
  throw ValidationError("unknown sandbox kind '" + config.sandbox_kind + "'");
}

std::map<Phase, double> shares_from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("no such file: " + path);
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  std::map<Phase, double> shares;
  for (const auto& [name, value] : doc.items()) {
    auto phase = phase_from_string(name);
    if (!phase) {
      throw ValidationError(path + ": unknown phase '" + name + "'");
    }
    if (!value.is_number()) {
      throw ValidationError(path + ": share for '" + name +
                            "' must be a number");
    }
    shares[*phase] = value.get<double>();
  }
  return shares;
}

std::map<Phase, double> shares_from_estimates(const std::string& path,
                                              double salary, int days,
                                              double threshold) {
  CostConfig config;
  config.salary_per_year = salary;
  config.working_days_per_year = days;
  config.bottleneck_threshold = threshold;
  const auto cases = load_survey(path);
  const auto aggregate = aggregate_bottlenecks(cases, config, false);
  std::map<Phase, double> shares;
  for (const auto& [phase, stats] : aggregate.phases) {
    shares[phase] = stats.mean_share.value_or(0.0);
  }
  return shares;
}

std::map<Phase, double> resolve_shares(const ReportArgs& args) {
  if (!args.shares_path.empty()) {
    return shares_from_file(args.shares_path);
  }
  if (!args.estimates_path.empty()) {
    return shares_from_estimates(args.estimates_path, args.salary_per_year,
                                 args.working_days_per_year, args.threshold);
  }
  return {};
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  RunConfig config;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("no such config file: " + path);
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }

  config.catalog_path = doc.value("catalog", config.catalog_path);
  config.challenges_dir = doc.value("challenges", config.challenges_dir);
  const json adapter = doc.value("adapter", json::object());
  config.adapter_kind = adapter.value("kind", config.adapter_kind);
  config.adapter_script = adapter.value("script", config.adapter_script);
  config.adapter_base_url = adapter.value("base_url", config.adapter_base_url);
  config.adapter_model = adapter.value("model", config.adapter_model);
  config.adapter_token_env =
      adapter.value("token_env", config.adapter_token_env);
  if (adapter.contains("extra_params")) {
    config.adapter_extra_params = adapter["extra_params"].dump();
  }
  const json sandbox = doc.value("sandbox", json::object());
  config.sandbox_kind = sandbox.value("kind", config.sandbox_kind);
  config.runtime_binary =
      sandbox.value("runtime_binary", config.runtime_binary);
  config.max_interactions =
      doc.value("max_interactions", config.max_interactions);
  config.parallelism = doc.value("parallelism", config.parallelism);
  config.attempts_per_challenge =
      doc.value("attempts_per_challenge", config.attempts_per_challenge);
  config.run_store_path = doc.value("run_store", config.run_store_path);
  config.salary_per_year =
      doc.value("salary_per_year", config.salary_per_year);
  config.working_days_per_year =
      doc.value("working_days_per_year", config.working_days_per_year);
  config.bottleneck_threshold =
      doc.value("bottleneck_threshold", config.bottleneck_threshold);
  config.mode = doc.value("mode", config.mode);

  if (config.max_interactions < 1) {
    throw ValidationError("max_interactions must be >= 1");
  }
  if (config.parallelism < 1) {
    throw ValidationError("parallelism must be >= 1");
  }
  if (config.attempts_per_challenge < 1) {
    throw ValidationError("attempts_per_challenge must be >= 1");
  }
  return config;
}

std::string run_config_to_json(const RunConfig& config) {
  json doc;
  doc["catalog"] = config.catalog_path;
  doc["challenges"] = config.challenges_dir;
  doc["adapter"] = {{"kind", config.adapter_kind},
                    {"script", config.adapter_script},
                    {"base_url", config.adapter_base_url},
                    {"model", config.adapter_model},
                    {"token_env", config.adapter_token_env},
                    {"extra_params",
                     json::parse(config.adapter_extra_params, nullptr, false)}};
  doc["sandbox"] = {{"kind", config.sandbox_kind},
                    {"runtime_binary", config.runtime_binary}};
  doc["max_interactions"] = config.max_interactions;
  doc["parallelism"] = config.parallelism;
  doc["attempts_per_challenge"] = config.attempts_per_challenge;
  doc["run_store"] = config.run_store_path;
  doc["salary_per_year"] = config.salary_per_year;
  doc["working_days_per_year"] = config.working_days_per_year;
  doc["bottleneck_threshold"] = config.bottleneck_threshold;
  doc["mode"] = config.mode;
  return doc.dump(2) + "\n";
}

int cmd_validate(const ValidateArgs& args) {
  if (args.catalog_path.empty() && args.challenges_dir.empty()) {
    emit_findings("usage", {"nothing to validate: give --catalog and/or "
                            "--challenges"});
    return kExitValidation;
  }

  std::vector<std::string> findings;
  AttackChainCatalog catalog;
  bool have_catalog = false;

  if (!args.catalog_path.empty()) {
    try {
      catalog = load_catalog(args.catalog_path);
      have_catalog = true;
      std::cout << "catalog ok: " << catalog.ttps.size() << " ttps, "
                << catalog.archetypes.size() << " archetypes (version '"
                << catalog.version << "')\n";
    } catch (const IoError& e) {
      return fail("catalog", e, kExitIo);
    } catch (const ValidationError& e) {
      for (const std::string& f : e.findings()) {
        findings.push_back("catalog: " + f);
      }
    } catch (const ParseError& e) {
      findings.push_back(std::string("catalog: ") + e.what());
    }
  }

  if (!args.challenges_dir.empty()) {
    try {
      const auto manifests = load_registry(
          args.challenges_dir, have_catalog ? &catalog : nullptr);
      std::cout << "challenges ok: " << manifests.size() << " manifests\n";
    } catch (const IoError& e) {
      return fail("challenges", e, kExitIo);
    } catch (const ValidationError& e) {
      for (const std::string& f : e.findings()) {
        findings.push_back("challenges: " + f);
      }
    } catch (const ParseError& e) {
      findings.push_back(std::string("challenges: ") + e.what());
    }
  }

  if (!findings.empty()) {
    for (const std::string& finding : findings) {
      std::cout << "FINDING " << finding << "\n";
    }
    emit_findings("validate", findings);
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_run(const RunArgs& args) {
  const RunConfig& config = args.config;
  if (args.print_config) {
    std::cout << run_config_to_json(config);
    return kExitOk;
  }

  try {
    AttackChainCatalog catalog;
    const AttackChainCatalog* catalog_ptr = nullptr;
    if (!config.catalog_path.empty()) {
      catalog = load_catalog(config.catalog_path);
      catalog_ptr = &catalog;
    }
    if (config.challenges_dir.empty()) {
      throw IoError("nothing to run: no challenges directory configured");
    }
    const auto manifests = load_registry(config.challenges_dir, catalog_ptr);
    if (manifests.empty()) {
      throw IoError("nothing to run: no manifests in " +
                    config.challenges_dir);
    }

    auto adapter = make_adapter(config);
    auto factory = make_sandbox_factory(config);

    RunOptions options;
    options.default_max_interactions = config.max_interactions;
    options.parallelism = config.parallelism;
    options.attempts_per_challenge = config.attempts_per_challenge;

    RunStoreWriter store(config.run_store_path);
    const SuiteResult result =
        run_suite(manifests, *adapter, factory, options, &store);

    const RateTable table = rates_by_difficulty(
        result.records, manifests, RateMode::ByUniqueChallenge);
    for (const auto& [key, cell] : table.cells) {
      std::cout << key << " " << cell.solved << "/" << cell.total << "\n";
    }
    std::cout << "overall " << table.overall.solved << "/"
              << table.overall.total << "\n";
    std::cout << "errored " << result.errored << "\n";
    std::cout << "store " << config.run_store_path << " ("
              << result.records.size() << " records)\n";

    return result.errored > 0 ? kExitPartial : kExitOk;
  } catch (const IoError& e) {
    return fail("run", e, kExitIo);
  } catch (const ValidationError& e) {
    emit_findings("run", e.findings());
    return kExitValidation;
  } catch (const ParseError& e) {
    return fail("run", e, kExitValidation);
  }
}

int cmd_score(const ScoreArgs& args) {
  try {
    const auto records = load_run_store(args.store_path);
    const auto manifests = load_registry(args.challenges_dir);
    const RateMode mode = parse_mode(args.mode);

    RateTable table;
    if (args.by == "difficulty") {
      table = rates_by_difficulty(records, manifests, mode);
    } else if (args.by == "cluster") {
      table = rates_by_cluster(records, manifests, mode);
    } else if (args.by == "phase") {
      table = rates_by_phase(records, manifests, mode);
    } else {
      throw ValidationError("unknown dimension '" + args.by +
                            "' (expected difficulty, cluster, or phase)");
    }

    std::string catalog_version;
    if (!args.catalog_path.empty()) {
      catalog_version = load_catalog(args.catalog_path).version;
    }
    const RenderFormat format = parse_format(args.format);
    const std::string stem =
        "rates-" + args.by + "-" + run_fingerprint(records, catalog_version);
    write_output(output_path(args.out_path, args.out_dir, stem, format),
                 render(table, format));
    return kExitOk;
  } catch (const IoError& e) {
    return fail("score", e, kExitIo);
  } catch (const ValidationError& e) {
    emit_findings("score", e.findings());
    return kExitValidation;
  } catch (const ParseError& e) {
    return fail("score", e, kExitValidation);
  }
}

int cmd_bottleneck(const BottleneckArgs& args) {
  try {
    const auto cases = load_survey(args.estimates_path);

    CostConfig config;
    config.salary_per_year = args.salary_per_year;
    config.working_days_per_year = args.working_days_per_year;
    config.bottleneck_threshold = args.threshold;
    config.use_min_resource = args.use_min_resource;
    if (auto p = interval_point_from_string(args.interval_point)) {
      config.interval_point = *p;
    } else {
      throw ValidationError("unknown interval point '" + args.interval_point +
                            "' (expected lo, mid, or hi)");
    }

    const RenderFormat format = parse_format(args.format);
    if (format != RenderFormat::Json && format != RenderFormat::Csv) {
      throw ValidationError("bottleneck reports support json or csv");
    }

    json config_doc = {{"salary", args.salary_per_year},
                       {"days", args.working_days_per_year},
                       {"threshold", args.threshold},
                       {"min", args.use_min_resource},
                       {"point", args.interval_point},
                       {"exclude_outliers", args.exclude_outliers}};
    const std::string fp =
        fingerprint_hex(args.estimates_path + "\n" + config_doc.dump());

    // Per-case breakdowns in one file.
    std::string cases_bytes;
    if (format == RenderFormat::Json) {
      json arr = json::array();
      for (const CaseStudy& case_study : cases) {
        arr.push_back(
            json::parse(render(phase_costs(case_study, config), format)));
      }
      cases_bytes = arr.dump(2) + "\n";
    } else {
      bool first = true;
      for (const CaseStudy& case_study : cases) {
        std::string chunk = render(phase_costs(case_study, config), format);
        if (!first) {
          chunk.erase(0, chunk.find('\n') + 1);  // keep one header
        }
        cases_bytes += chunk;
        first = false;
      }
    }
    write_output(output_path("", args.out_dir, "bottleneck-cases-" + fp,
                             format),
                 cases_bytes);

    const BottleneckAggregate aggregate =
        aggregate_bottlenecks(cases, config, args.exclude_outliers);
    write_output(output_path("", args.out_dir, "bottleneck-aggregate-" + fp,
                             format),
                 render(aggregate, format));
    return kExitOk;
  } catch (const IoError& e) {
    return fail("bottleneck", e, kExitIo);
  } catch (const ValidationError& e) {
    emit_findings("bottleneck", e.findings());
    return kExitValidation;
  } catch (const ParseError& e) {
    return fail("bottleneck", e, kExitValidation);
  }
}

int cmd_report(const ReportArgs& args) {
  try {
    const RateMode mode = parse_mode(args.mode);

    AttackChainCatalog catalog;
    bool have_catalog = false;
    if (!args.catalog_path.empty()) {
      catalog = load_catalog(args.catalog_path);
      have_catalog = true;
    }

    std::vector<EpisodeRecord> records;
    std::vector<ChallengeManifest> manifests;
    const bool have_store = !args.store_path.empty();
    if (have_store) {
      records = load_run_store(args.store_path);
      manifests = load_registry(args.challenges_dir,
                                have_catalog ? &catalog : nullptr);
    }
    const std::string catalog_version = have_catalog ? catalog.version : "";

    if (args.kind == "heatmap") {
      if (!have_store || !have_catalog) {
        throw ValidationError("heatmap needs --store, --challenges, --catalog");
      }
      const Heatmap heatmap = cost_reduction_heatmap(
          records, manifests, catalog, resolve_shares(args), mode);
      const RenderFormat format = parse_format(
          args.format.empty() ? "svg-heatmap" : args.format);
      const std::string stem =
          "heatmap-" + run_fingerprint(records, catalog_version);
      write_output(output_path(args.out_path, args.out_dir, stem, format),
                   render(heatmap, format));
      return kExitOk;
    }

    if (args.kind == "gaps") {
      if (!have_store) {
        throw ValidationError("gaps needs --store and --challenges");
      }
      CoverageGapConfig config;
      config.min_evals_per_phase = args.min_evals;
      config.alert_rate = args.alert_rate;
      CoverageGapReport report =
          coverage_gaps(rates_by_phase(records, manifests, mode), config);
      report.run_fingerprint = run_fingerprint(records, catalog_version);
      const RenderFormat format =
          parse_format(args.format.empty() ? "json" : args.format);
      const std::string stem = "gaps-" + report.run_fingerprint;
      write_output(output_path(args.out_path, args.out_dir, stem, format),
                   render(report, format));
      return kExitOk;
    }

    if (args.kind == "emulate") {
      if (!have_catalog) {
        throw ValidationError("emulate needs --catalog");
      }
      if (args.archetype.empty()) {
        throw ValidationError("emulate needs --archetype");
      }
      Heatmap heatmap;
      heatmap.catalog_version = catalog.version;
      for (const Archetype& archetype : catalog.archetypes) {
        heatmap.archetype_ids.push_back(archetype.id);
      }
      if (have_store) {
        heatmap = cost_reduction_heatmap(records, manifests, catalog,
                                         resolve_shares(args), mode);
      }
      const EmulationPlan plan =
          emulation_plan(catalog, heatmap, args.archetype, args.top_k);
      const RenderFormat format =
          parse_format(args.format.empty() ? "json" : args.format);
      const std::string stem =
          "emulate-" + args.archetype + "-" + heatmap.fingerprint();
      write_output(output_path(args.out_path, args.out_dir, stem, format),
                   render(plan, format));
      return kExitOk;
    }

    if (args.kind == "compare") {
      if (!have_store || args.defended_store_path.empty()) {
        throw ValidationError(
            "compare needs --store (baseline) and --defended-store");
      }
      const auto defended_records = load_run_store(args.defended_store_path);
      const DefenseComparison comparison =
          compare_defenses(rates_by_phase(records, manifests, mode),
                           rates_by_phase(defended_records, manifests, mode));
      const RenderFormat format =
          parse_format(args.format.empty() ? "json" : args.format);
      const std::string stem =
          "compare-" + run_fingerprint(records, catalog_version) + "-vs-" +
          run_fingerprint(defended_records, catalog_version);
      write_output(output_path(args.out_path, args.out_dir, stem, format),
                   render(comparison, format));
      return kExitOk;
    }

    if (args.kind == "cds") {
      if (!have_store) {
        throw ValidationError("cds needs --store and --challenges");
      }
      auto shares = resolve_shares(args);
      if (shares.empty()) {
        throw ValidationError("cds needs --shares or --estimates");
      }
      shares = normalize_shares(shares);
      const CostDifferentialReport report = build_cost_differential_report(
          records, manifests, shares, default_cluster_phase_map(), mode,
          catalog_version);
      const RenderFormat format =
          parse_format(args.format.empty() ? "json" : args.format);
      const std::string stem = "cds-" + report.run_fingerprint;
      write_output(output_path(args.out_path, args.out_dir, stem, format),
                   render(report, format));
      return kExitOk;
    }

    throw ValidationError("unknown report kind '" + args.kind +
                          "' (expected heatmap, gaps, emulate, compare, cds)");
  } catch (const IoError& e) {
    return fail("report", e, kExitIo);
  } catch (const ValidationError& e) {
    emit_findings("report", e.findings());
    return kExitValidation;
  } catch (const ParseError& e) {
    return fail("report", e, kExitValidation);
  }
}

}  // namespace chaineval::cli
