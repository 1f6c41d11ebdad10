#include "chaineval/render.hpp"

#include <cstdio>
#include <sstream>

#include "chaineval/errors.hpp"
#include "json_util.hpp"

namespace chaineval {

namespace {

using nlohmann::json;

[[noreturn]] void unsupported(const char* report, RenderFormat format) {
  throw ValidationError(std::string(report) + " cannot be rendered as " +
                        std::string(to_string(format)));
}

// Fixed-precision then trimmed, so renders are byte-stable across platforms.
std::string fmt_num(double value, int decimals = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

json cell_to_json(const RateCell& cell) {
  json out;
  out["solved"] = cell.solved;
  out["total"] = cell.total;
  if (cell.rate) out["rate"] = *cell.rate;
  return out;
}

json rate_table_to_json(const RateTable& table) {
  json doc;
  doc["dimension"] = table.dimension;
  doc["mode"] = std::string(to_string(table.mode));
  json cells = json::object();
  for (const auto& [key, cell] : table.cells) {
    cells[key] = cell_to_json(cell);
  }
  doc["cells"] = std::move(cells);
  doc["overall"] = cell_to_json(table.overall);
  doc["errored_excluded"] = table.errored_excluded;
  return doc;
}

json cost_config_to_json(const CostConfig& config) {
  return {{"salary_per_year", config.salary_per_year},
          {"working_days_per_year", config.working_days_per_year},
          {"bottleneck_threshold", config.bottleneck_threshold},
          {"use_min_resource", config.use_min_resource},
          {"interval_point", std::string(to_string(config.interval_point))}};
}

json heatmap_to_json(const Heatmap& heatmap) {
  json doc;
  doc["catalog_version"] = heatmap.catalog_version;
  doc["archetypes"] = heatmap.archetype_ids;
  json rows = json::object();
  for (Phase phase : phases_in_order()) {
    json row = json::object();
    for (const std::string& archetype : heatmap.archetype_ids) {
      if (auto value = heatmap.cell(phase, archetype)) {
        row[archetype] = *value;
      }
    }
    rows[std::string(to_string(phase))] = std::move(row);
  }
  doc["cells"] = std::move(rows);
  doc["fingerprint"] = heatmap.fingerprint();
  return doc;
}

// White -> deep red ramp over [0,1].
std::string heat_color(double value) {
  const double v = value < 0.0 ? 0.0 : (value > 1.0 ? 1.0 : value);
  const int r = static_cast<int>(255 + v * (178 - 255));
  const int g = static_cast<int>(255 + v * (24 - 255));
  const int b = static_cast<int>(255 + v * (43 - 255));
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string render_heatmap_svg(const Heatmap& heatmap) {
  constexpr int kCellW = 96;
  constexpr int kCellH = 36;
  constexpr int kLeft = 170;
  constexpr int kTop = 70;
  const int columns = static_cast<int>(heatmap.archetype_ids.size());
  const int width = kLeft + std::max(columns, 1) * kCellW + 20;
  const int height = kTop + kPhaseCount * kCellH + 70;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"monospace\" "
      << "font-size=\"11\">\n";
  svg << "  <defs>\n"
      << "    <pattern id=\"hatch\" width=\"6\" height=\"6\" "
         "patternTransform=\"rotate(45)\" patternUnits=\"userSpaceOnUse\">\n"
      << "      <rect width=\"6\" height=\"6\" fill=\"#f4f4f4\"/>\n"
      << "      <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#bbbbbb\" "
         "stroke-width=\"2\"/>\n"
      << "    </pattern>\n"
      << "  </defs>\n";
  svg << "  <text x=\"10\" y=\"20\" font-size=\"14\">cost reduction by phase "
         "and archetype</text>\n";
  svg << "  <text x=\"10\" y=\"38\" fill=\"#555555\">scale 0-1; hatched = no "
         "evidence</text>\n";

  for (int c = 0; c < columns; ++c) {
    svg << "  <text x=\"" << (kLeft + c * kCellW + 4) << "\" y=\"" << (kTop - 8)
        << "\" transform=\"rotate(-20 " << (kLeft + c * kCellW + 4) << " "
        << (kTop - 8) << ")\">" << heatmap.archetype_ids[c] << "</text>\n";
  }

  int row = 0;
  for (Phase phase : phases_in_order()) {
    const int y = kTop + row * kCellH;
    svg << "  <text x=\"10\" y=\"" << (y + kCellH / 2 + 4) << "\">"
        << to_string(phase) << "</text>\n";
    for (int c = 0; c < columns; ++c) {
      const int x = kLeft + c * kCellW;
      const auto value = heatmap.cell(phase, heatmap.archetype_ids[c]);
      if (value) {
        svg << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCellW
            << "\" height=\"" << kCellH << "\" fill=\"" << heat_color(*value)
            << "\" stroke=\"#888888\"/>\n";
        svg << "  <text x=\"" << (x + 6) << "\" y=\"" << (y + kCellH / 2 + 4)
            << "\">" << fmt_num(*value) << "</text>\n";
      } else {
        svg << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCellW
            << "\" height=\"" << kCellH
            << "\" fill=\"url(#hatch)\" stroke=\"#888888\"/>\n";
      }
    }
    ++row;
  }

  // Legend ribbon.
  const int ly = kTop + kPhaseCount * kCellH + 24;
  for (int i = 0; i < 10; ++i) {
    svg << "  <rect x=\"" << (kLeft + i * 20) << "\" y=\"" << ly
        << "\" width=\"20\" height=\"12\" fill=\"" << heat_color(i / 9.0)
        << "\"/>\n";
  }
  svg << "  <text x=\"" << (kLeft - 14) << "\" y=\"" << (ly + 10)
      << "\">0</text>\n";
  svg << "  <text x=\"" << (kLeft + 206) << "\" y=\"" << (ly + 10)
      << "\">1</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string opt_num(const std::optional<double>& value, int decimals = 4) {
  return value ? fmt_num(*value, decimals) : "";
}

}  // namespace

std::string_view to_string(RenderFormat f) {
  switch (f) {
    case RenderFormat::Json:
      return "json";
    case RenderFormat::Csv:
      return "csv";
    case RenderFormat::Markdown:
      return "markdown";
    case RenderFormat::SvgHeatmap:
      return "svg-heatmap";
  }
  return "unknown";
}

std::optional<RenderFormat> render_format_from_string(std::string_view name) {
  if (name == "json") return RenderFormat::Json;
  if (name == "csv") return RenderFormat::Csv;
  if (name == "markdown" || name == "md") return RenderFormat::Markdown;
  if (name == "svg-heatmap" || name == "svg") return RenderFormat::SvgHeatmap;
  return std::nullopt;
}

std::string_view file_extension(RenderFormat f) {
  switch (f) {
    case RenderFormat::Json:
      return "json";
    case RenderFormat::Csv:
      return "csv";
    case RenderFormat::Markdown:
      return "md";
    case RenderFormat::SvgHeatmap:
      return "svg";
  }
  return "out";
}

std::string render(const RateTable& table, RenderFormat format) {
  switch (format) {
    case RenderFormat::Json:
      return rate_table_to_json(table).dump(2) + "\n";
    case RenderFormat::Csv: {
      std::ostringstream out;
      out << table.dimension << ",solved,total,rate\n";
      for (const auto& [key, cell] : table.cells) {
        out << key << "," << cell.solved << "," << cell.total << ","
            << opt_num(cell.rate, 6) << "\n";
      }
      out << "overall," << table.overall.solved << "," << table.overall.total
          << "," << opt_num(table.overall.rate, 6) << "\n";
      return out.str();
    }
    case RenderFormat::Markdown: {
      std::ostringstream out;
      out << "| " << table.dimension << " | solved | total | rate |\n";
      out << "| --- | ---: | ---: | ---: |\n";
      for (const auto& [key, cell] : table.cells) {
        out << "| " << key << " | " << cell.solved << " | " << cell.total
            << " | " << (cell.rate ? fmt_num(*cell.rate) : "-") << " |\n";
      }
      out << "| overall | " << table.overall.solved << " | "
          << table.overall.total << " | "
          << (table.overall.rate ? fmt_num(*table.overall.rate) : "-")
          << " |\n";
      out << "\nmode: " << to_string(table.mode)
          << "; errored episodes excluded: " << table.errored_excluded << "\n";
      return out.str();
    }
    default:
      unsupported("rate table", format);
  }
}

std::string render(const CostBreakdown& breakdown, RenderFormat format) {
  switch (format) {
    case RenderFormat::Json: {
      json doc;
      doc["case_study_id"] = breakdown.case_study_id;
      json phases = json::object();
      for (const auto& [phase, cost] : breakdown.phases) {
        json item;
        item["dollars"] = cost.dollars;
        if (cost.share) item["share"] = *cost.share;
        item["is_bottleneck"] = cost.is_bottleneck;
        phases[std::string(to_string(phase))] = std::move(item);
      }
      doc["phases"] = std::move(phases);
      doc["total_dollars"] = breakdown.total_dollars;
      doc["config"] = cost_config_to_json(breakdown.config);
      return doc.dump(2) + "\n";
    }
    case RenderFormat::Csv: {
      std::ostringstream out;
      out << "case_study_id,phase,dollars,share,is_bottleneck\n";
      for (const auto& [phase, cost] : breakdown.phases) {
        out << breakdown.case_study_id << "," << to_string(phase) << ","
            << fmt_num(cost.dollars, 2) << "," << opt_num(cost.share, 6) << ","
            << (cost.is_bottleneck ? "true" : "false") << "\n";
      }
      return out.str();
    }
    default:
      unsupported("cost breakdown", format);
  }
}

std::string render(const BottleneckAggregate& aggregate, RenderFormat format) {
  switch (format) {
    case RenderFormat::Json: {
      json doc;
      json phases = json::object();
      for (const auto& [phase, stats] : aggregate.phases) {
        json item;
        item["n"] = stats.n;
        if (stats.mean_share) item["mean_share"] = *stats.mean_share;
        if (stats.mean_dollars) item["mean_dollars"] = *stats.mean_dollars;
        phases[std::string(to_string(phase))] = std::move(item);
      }
      doc["phases"] = std::move(phases);
      doc["cases_included"] = aggregate.cases_included;
      doc["outliers_excluded"] = aggregate.outliers_excluded;
      doc["config"] = cost_config_to_json(aggregate.config);
      return doc.dump(2) + "\n";
    }
    case RenderFormat::Csv: {
      std::ostringstream out;
      out << "phase,n,mean_share,mean_dollars\n";
      for (Phase phase : phases_in_order()) {
        const PhaseBottleneckStats& stats = aggregate.phases.at(phase);
        out << to_string(phase) << "," << stats.n << ","
            << opt_num(stats.mean_share, 6) << ","
            << opt_num(stats.mean_dollars, 2) << "\n";
      }
      return out.str();
    }
    case RenderFormat::Markdown: {
      std::ostringstream out;
      out << "| phase | n | mean share | mean dollars |\n";
      out << "| --- | ---: | ---: | ---: |\n";
      for (Phase phase : phases_in_order()) {
        const PhaseBottleneckStats& stats = aggregate.phases.at(phase);
        out << "| " << to_string(phase) << " | " << stats.n << " | "
            << (stats.mean_share ? fmt_num(*stats.mean_share) : "-") << " | "
            << (stats.mean_dollars ? fmt_num(*stats.mean_dollars, 2) : "-")
            << " |\n";
      }
      out << "\ncases included: " << aggregate.cases_included
          << (aggregate.outliers_excluded ? " (outliers excluded)" : "")
          << "\n";
      return out.str();
    }
    default:
      unsupported("bottleneck aggregate", format);
  }
}

std::string render(const Heatmap& heatmap, RenderFormat format) {
  switch (format) {
    case RenderFormat::Json:
      return heatmap_to_json(heatmap).dump(2) + "\n";
    case RenderFormat::Csv: {
      std::ostringstream out;
      out << "phase";
      for (const std::string& archetype : heatmap.archetype_ids) {
        out << "," << archetype;
      }
      out << "\n";
      for (Phase phase : phases_in_order()) {
        out << to_string(phase);
        for (const std::string& archetype : heatmap.archetype_ids) {
          out << "," << opt_num(heatmap.cell(phase, archetype), 6);
        }
        out << "\n";
      }
      return out.str();
    }
    case RenderFormat::Markdown: {
      std::ostringstream out;
      out << "| phase |";
      for (const std::string& archetype : heatmap.archetype_ids) {
        out << " " << archetype << " |";
      }
      out << "\n| --- |";
      for (std::size_t i = 0; i < heatmap.archetype_ids.size(); ++i) {
        out << " ---: |";
      }
      out << "\n";
      for (Phase phase : phases_in_order()) {
        out << "| " << to_string(phase) << " |";
        for (const std::string& archetype : heatmap.archetype_ids) {
          const auto value = heatmap.cell(phase, archetype);
          out << " " << (value ? fmt_num(*value) : "-") << " |";
        }
        out << "\n";
      }
      return out.str();
    }
    case RenderFormat::SvgHeatmap:
      return render_heatmap_svg(heatmap);
  }
  unsupported("heatmap", format);
}

std::string render(const CoverageGapReport& report, RenderFormat format) {
  switch (format) {
    case RenderFormat::Json: {
      json doc;
      json phases = json::object();
      for (const auto& [phase, coverage] : report.phases) {
        json item;
        if (coverage.measured_capability) {
          item["measured_capability"] = *coverage.measured_capability;
        }
        item["evaluation_count"] = coverage.evaluation_count;
        item["gap_flag"] = coverage.gap_flag;
        phases[std::string(to_string(phase))] = std::move(item);
      }
      doc["phases"] = std::move(phases);
      doc["narrative"] = report.narrative_lines;
      doc["config"] = {{"min_evals_per_phase", report.config.min_evals_per_phase},
                       {"alert_rate", report.config.alert_rate}};
      if (!report.run_fingerprint.empty()) {
        doc["run_fingerprint"] = report.run_fingerprint;
      }
      return doc.dump(2) + "\n";
    }
    case RenderFormat::Markdown: {
      std::ostringstream out;
      out << "| phase | evaluations | measured capability | gap |\n";
      out << "| --- | ---: | ---: | :-: |\n";
      for (Phase phase : phases_in_order()) {
        const PhaseCoverage& coverage = report.phases.at(phase);
        out << "| " << to_string(phase) << " | " << coverage.evaluation_count
            << " | "
            << (coverage.measured_capability
                    ? fmt_num(*coverage.measured_capability)
                    : "-")
            << " | " << (coverage.gap_flag ? "yes" : "no") << " |\n";
      }
      out << "\n";
      for (const std::string& line : report.narrative_lines) {
        out << "- " << line << "\n";
      }
      return out.str();
    }
    default:
      unsupported("coverage gap report", format);
  }
}

std::string render(const EmulationPlan& plan, RenderFormat format) {
  switch (format) {
    case RenderFormat::Json: {
      json doc;
      doc["archetype_id"] = plan.archetype_id;
      doc["top_k"] = plan.top_k;
      // rank score = prevalence x cost reduction; either zero suppresses
      doc["rank_score_definition"] = "prevalence_weight * cost_reduction";
      json steps = json::array();
      for (const PlanStep& step : plan.steps) {
        steps.push_back(
            {{"phase", std::string(to_string(step.phase))},
             {"ttp_id", step.ttp_id},
             {"rationale",
              {{"prevalence_weight", step.rationale.prevalence_weight},
               {"cost_reduction", step.rationale.cost_reduction},
               {"combined_rank_score", step.rationale.combined_rank_score}}}});
      }
      doc["steps"] = std::move(steps);
      doc["generated_from"] = plan.generated_from;
      return doc.dump(2) + "\n";
    }
    case RenderFormat::Markdown: {
      std::ostringstream out;
      out << "# emulation plan: " << plan.archetype_id << "\n\n";
      out << "| phase | ttp | prevalence | cost reduction | rank score |\n";
      out << "| --- | --- | ---: | ---: | ---: |\n";
      for (const PlanStep& step : plan.steps) {
        out << "| " << to_string(step.phase) << " | " << step.ttp_id << " | "
            << fmt_num(step.rationale.prevalence_weight) << " | "
            << fmt_num(step.rationale.cost_reduction) << " | "
            << fmt_num(step.rationale.combined_rank_score) << " |\n";
      }
      out << "\nrank score = prevalence x cost reduction (top " << plan.top_k
          << " per phase)\n";
      out << "generated from: " << plan.generated_from << "\n";
      return out.str();
    }
    default:
      unsupported("emulation plan", format);
  }
}

std::string render(const DefenseComparison& comparison, RenderFormat format) {
  switch (format) {
    case RenderFormat::Json: {
      json doc;
      doc["mode"] = std::string(to_string(comparison.mode));
      json phases = json::object();
      for (const auto& [phase, delta] : comparison.phases) {
        json item;
        if (delta.baseline_rate) item["baseline_rate"] = *delta.baseline_rate;
        if (delta.defended_rate) item["defended_rate"] = *delta.defended_rate;
        if (delta.imposed_delta) item["imposed_delta"] = *delta.imposed_delta;
        phases[std::string(to_string(phase))] = std::move(item);
      }
      doc["phases"] = std::move(phases);
      if (comparison.overall_delta) {
        doc["overall_delta"] = *comparison.overall_delta;
      }
      return doc.dump(2) + "\n";
    }
    case RenderFormat::Csv: {
      std::ostringstream out;
      out << "phase,baseline_rate,defended_rate,imposed_delta\n";
      for (Phase phase : phases_in_order()) {
        const PhaseDelta& delta = comparison.phases.at(phase);
        out << to_string(phase) << "," << opt_num(delta.baseline_rate, 6)
            << "," << opt_num(delta.defended_rate, 6) << ","
            << opt_num(delta.imposed_delta, 6) << "\n";
      }
      return out.str();
    }
    case RenderFormat::Markdown: {
      std::ostringstream out;
      out << "| phase | baseline | defended | imposed delta |\n";
      out << "| --- | ---: | ---: | ---: |\n";
      for (Phase phase : phases_in_order()) {
        const PhaseDelta& delta = comparison.phases.at(phase);
        out << "| " << to_string(phase) << " | "
            << (delta.baseline_rate ? fmt_num(*delta.baseline_rate) : "-")
            << " | "
            << (delta.defended_rate ? fmt_num(*delta.defended_rate) : "-")
            << " | "
            << (delta.imposed_delta ? fmt_num(*delta.imposed_delta) : "-")
            << " |\n";
      }
      if (comparison.overall_delta) {
        out << "\noverall delta: " << fmt_num(*comparison.overall_delta)
            << "\n";
      }
      return out.str();
    }
    default:
      unsupported("defense comparison", format);
  }
}

std::string render(const CostDifferentialReport& report, RenderFormat format) {
  switch (format) {
    case RenderFormat::Json: {
      json doc;
      doc["score"] = report.score;
      // score = sum over phases of share * mean mapped-cluster rate; this
      // artifact's aggregation, stamped so readers know what they get
      doc["score_definition"] =
          "sum over phases of bottleneck_share * mean rate of clusters "
          "mapped to the phase";
      doc["rates"] = {{"by_difficulty", rate_table_to_json(report.by_difficulty)},
                      {"by_cluster", rate_table_to_json(report.by_cluster)},
                      {"by_phase", rate_table_to_json(report.by_phase)}};
      json shares = json::object();
      for (const auto& [phase, share] : report.bottleneck_shares) {
        shares[std::string(to_string(phase))] = share;
      }
      doc["bottleneck_shares"] = std::move(shares);
      json mapping = json::object();
      for (const auto& [cluster, phases] : report.cluster_phase_map) {
        json arr = json::array();
        for (Phase phase : phases_in_order()) {
          if (phases.count(phase)) {
            arr.push_back(std::string(to_string(phase)));
          }
        }
        mapping[std::string(to_string(cluster))] = std::move(arr);
      }
      doc["cluster_phase_map"] = std::move(mapping);
      doc["provenance"] = {{"run_fingerprint", report.run_fingerprint},
                           {"catalog_version", report.catalog_version}};
      return doc.dump(2) + "\n";
    }
    case RenderFormat::Markdown: {
      std::ostringstream out;
      out << "# cost differential report\n\n";
      out << "score: **" << fmt_num(report.score, 6) << "** (sum over phases "
          << "of bottleneck share x mean mapped-cluster rate)\n\n";
      out << "## rates by difficulty\n\n"
          << render(report.by_difficulty, RenderFormat::Markdown) << "\n";
      out << "## rates by cluster\n\n"
          << render(report.by_cluster, RenderFormat::Markdown) << "\n";
      out << "## rates by phase\n\n"
          << render(report.by_phase, RenderFormat::Markdown) << "\n";
      out << "provenance: run " << report.run_fingerprint << ", catalog '"
          << report.catalog_version << "'\n";
      return out.str();
    }
    default:
      unsupported("cost differential report", format);
  }
}

}  // namespace chaineval
