#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "chaineval/analytics.hpp"
#include "chaineval/cost_model.hpp"
#include "chaineval/rates.hpp"
#include "chaineval/reports.hpp"

namespace chaineval {

enum class RenderFormat { Json, Csv, Markdown, SvgHeatmap };

std::string_view to_string(RenderFormat f);
std::optional<RenderFormat> render_format_from_string(std::string_view name);
std::string_view file_extension(RenderFormat f);

// All renders are deterministic: identical inputs give identical bytes.
// Unsupported report/format pairings throw ValidationError.
std::string render(const RateTable& table, RenderFormat format);
std::string render(const CostBreakdown& breakdown, RenderFormat format);
std::string render(const BottleneckAggregate& aggregate, RenderFormat format);
std::string render(const Heatmap& heatmap, RenderFormat format);
std::string render(const CoverageGapReport& report, RenderFormat format);
std::string render(const EmulationPlan& plan, RenderFormat format);
std::string render(const DefenseComparison& comparison, RenderFormat format);
std::string render(const CostDifferentialReport& report, RenderFormat format);

}  // namespace chaineval
