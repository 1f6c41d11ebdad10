#pragma once

#include <map>
#include <optional>
#include <vector>

#include "chaineval/phase.hpp"
#include "chaineval/survey.hpp"

namespace chaineval {

// Cost-model knobs. Defaults follow the documented convention:
// $500k/year over 250 working days = $2,000/day; every CostBreakdown carries
// the config it was computed with so the convention stays auditable.
struct CostConfig {
  double salary_per_year = 500000.0;
  int working_days_per_year = 250;
  double bottleneck_threshold = 0.10;  // inclusive share threshold, in (0,1]
  bool use_min_resource = false;
  IntervalPoint interval_point = IntervalPoint::Mid;

  bool operator==(const CostConfig&) const = default;
};

// salary / working days. Throws ValidationError on nonpositive input.
double day_rate(double salary_per_year, int working_days_per_year);

struct PhaseCost {
  double dollars = 0.0;
  // dollars / total; absent when the case total is exactly 0.
  std::optional<double> share;
  bool is_bottleneck = false;  // share >= threshold, inclusive

  bool operator==(const PhaseCost&) const = default;
};

struct CostBreakdown {
  std::string case_study_id;
  std::map<Phase, PhaseCost> phases;  // only phases with estimates
  double total_dollars = 0.0;
  CostConfig config;

  bool operator==(const CostBreakdown&) const = default;
};

// Per-phase dollar costs for one case study: per expert,
// point(human_days) x day_rate + point(direct_dollars); experts averaged per
// phase; shares over the case total; bottleneck flags at the inclusive
// threshold. With use_min_resource, the minimum-resource intervals are used
// where present. Throws ValidationError when the case has no estimates.
CostBreakdown phase_costs(const CaseStudy& case_study, const CostConfig& config);

struct PhaseBottleneckStats {
  int n = 0;  // case studies where the phase was flagged
  std::optional<double> mean_share;    // over exactly those cases
  std::optional<double> mean_dollars;  // over exactly those cases

  bool operator==(const PhaseBottleneckStats&) const = default;
};

struct BottleneckAggregate {
  std::map<Phase, PhaseBottleneckStats> phases;  // all seven present
  int cases_included = 0;
  bool outliers_excluded = false;
  CostConfig config;

  bool operator==(const BottleneckAggregate&) const = default;
};

// Bottleneck counts and means across case studies. exclude_outliers drops
// cases marked excluded_as_outlier. Throws ValidationError on empty input.
BottleneckAggregate aggregate_bottlenecks(const std::vector<CaseStudy>& cases,
                                          const CostConfig& config,
                                          bool exclude_outliers);

}  // namespace chaineval
