#include "chaineval/cost_model.hpp"

#include <map>
#include <vector>

#include "chaineval/errors.hpp"

namespace chaineval {

double day_rate(double salary_per_year, int working_days_per_year) {
  if (salary_per_year <= 0.0) {
    throw ValidationError("salary_per_year must be positive");
  }
  if (working_days_per_year <= 0) {
    throw ValidationError("working_days_per_year must be positive");
  }
  return salary_per_year / working_days_per_year;
}

CostBreakdown phase_costs(const CaseStudy& case_study,
                          const CostConfig& config) {
  if (case_study.estimates.empty()) {
    throw ValidationError("case '" + case_study.id + "' has no estimates");
  }

  const double rate =
      day_rate(config.salary_per_year, config.working_days_per_year);

  const auto point_of = [&](const std::optional<double>& override_point,
                            const Interval& iv) {
    if (config.interval_point == IntervalPoint::Mid && override_point) {
      return *override_point;  // consensus point from a merge
    }
    return iv.at(config.interval_point);
  };

  // Per phase: each expert's point dollars, then the experts averaged.
  std::map<Phase, std::vector<double>> per_expert_dollars;
  for (const ExpertEstimate& e : case_study.estimates) {
    const Interval& days = (config.use_min_resource && e.min_resource_human_days)
                               ? *e.min_resource_human_days
                               : e.human_days;
    const Interval& dollars = (config.use_min_resource && e.min_resource_dollars)
                                  ? *e.min_resource_dollars
                                  : e.direct_dollars;
    const double value = point_of(e.point_human_days, days) * rate +
                         point_of(e.point_direct_dollars, dollars);
    per_expert_dollars[e.phase].push_back(value);
  }

  CostBreakdown breakdown;
  breakdown.case_study_id = case_study.id;
  breakdown.config = config;

  for (const auto& [phase, values] : per_expert_dollars) {
    double sum = 0.0;
    for (double v : values) sum += v;
    PhaseCost cost;
    cost.dollars = sum / static_cast<double>(values.size());
    breakdown.phases[phase] = cost;
    breakdown.total_dollars += cost.dollars;
  }

  if (breakdown.total_dollars > 0.0) {
    for (auto& [phase, cost] : breakdown.phases) {
      cost.share = cost.dollars / breakdown.total_dollars;
      cost.is_bottleneck = *cost.share >= config.bottleneck_threshold;
    }
  }
  return breakdown;
}

BottleneckAggregate aggregate_bottlenecks(const std::vector<CaseStudy>& cases,
                                          const CostConfig& config,
                                          bool exclude_outliers) {
  if (cases.empty()) {
    throw ValidationError("aggregate_bottlenecks requires at least one case");
  }

  BottleneckAggregate aggregate;
  aggregate.config = config;
  aggregate.outliers_excluded = exclude_outliers;

  struct Acc {
    int n = 0;
    double share_sum = 0.0;
    double dollars_sum = 0.0;
  };
  std::map<Phase, Acc> acc;

  for (const CaseStudy& case_study : cases) {
    if (exclude_outliers && case_study.excluded_as_outlier) continue;
    ++aggregate.cases_included;
    const CostBreakdown breakdown = phase_costs(case_study, config);
    for (const auto& [phase, cost] : breakdown.phases) {
      if (!cost.is_bottleneck) continue;
      Acc& a = acc[phase];
      ++a.n;
      a.share_sum += cost.share.value_or(0.0);
      a.dollars_sum += cost.dollars;
    }
  }

  for (Phase phase : phases_in_order()) {
    PhaseBottleneckStats stats;
    auto it = acc.find(phase);
    if (it != acc.end() && it->second.n > 0) {
      stats.n = it->second.n;
      stats.mean_share = it->second.share_sum / it->second.n;
      stats.mean_dollars = it->second.dollars_sum / it->second.n;
    }
    aggregate.phases[phase] = stats;
  }
  return aggregate;
}

}  // namespace chaineval
