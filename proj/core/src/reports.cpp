#include "chaineval/reports.hpp"

#include <algorithm>
#include <sstream>

#include "chaineval/errors.hpp"

namespace chaineval {

CoverageGapReport coverage_gaps(const RateTable& rate_by_phase,
                                const CoverageGapConfig& config) {
  CoverageGapReport report;
  report.config = config;

  for (Phase phase : phases_in_order()) {
    PhaseCoverage coverage;
    const RateCell* cell = rate_by_phase.cell(to_string(phase));
    if (cell != nullptr) {
      coverage.evaluation_count = cell->total;
      coverage.measured_capability = cell->rate;
    }
    const bool under_covered =
        coverage.evaluation_count < config.min_evals_per_phase;
    const bool high_capability = coverage.measured_capability &&
                                 *coverage.measured_capability >=
                                     config.alert_rate;
    coverage.gap_flag = under_covered || high_capability;
    report.phases[phase] = coverage;

    std::ostringstream line;
    line << to_string(phase) << ": ";
    if (under_covered) {
      line << "under-covered (" << coverage.evaluation_count
           << " evaluations, floor " << config.min_evals_per_phase << ")";
    } else if (high_capability) {
      line << "measured capability at or above alert rate";
    } else {
      line << "covered";
    }
    report.narrative_lines.push_back(line.str());
  }
  return report;
}

EmulationPlan emulation_plan(const AttackChainCatalog& catalog,
                             const Heatmap& heatmap,
                             const std::string& archetype_id, int top_k) {
  const Archetype* archetype = catalog.find_archetype(archetype_id);
  if (archetype == nullptr) {
    throw ValidationError("unknown archetype '" + archetype_id + "'");
  }
  if (top_k < 1) {
    throw ValidationError("top_k must be >= 1");
  }

  EmulationPlan plan;
  plan.archetype_id = archetype_id;
  plan.top_k = top_k;
  plan.generated_from =
      "catalog:" + catalog.version + ";heatmap:" + heatmap.fingerprint();

  // Strongest measured reduction for a technique in a phase, across every
  // archetype that lists it; a technique's evidence is not limited to the
  // archetype being planned.
  const auto reduction_for = [&](Phase phase, const std::string& ttp_id) {
    double best = 0.0;
    for (const Archetype& other : catalog.archetypes) {
      if (!other.ttp_ids.count(ttp_id)) continue;
      best = std::max(best, heatmap.cell(phase, other.id).value_or(0.0));
    }
    return best;
  };

  for (Phase phase : phases_in_order()) {
    const auto prevalence = normalized_prevalence(catalog, phase);

    std::vector<PlanStep> candidates;
    for (const std::string& ttp_id : archetype->ttp_ids) {
      const Ttp* ttp = catalog.find_ttp(ttp_id);
      if (ttp == nullptr || !ttp->phases.count(phase)) continue;
      PlanStep step;
      step.phase = phase;
      step.ttp_id = ttp_id;
      auto w = prevalence.find(ttp_id);
      step.rationale.prevalence_weight =
          w != prevalence.end() ? w->second : 0.0;
      step.rationale.cost_reduction = reduction_for(phase, ttp_id);
      step.rationale.combined_rank_score =
          step.rationale.prevalence_weight * step.rationale.cost_reduction;
      candidates.push_back(std::move(step));
    }
    if (candidates.empty()) continue;  // phases with no TTPs are omitted

    // Combined score first; prevalence breaks ties so an all-zero heatmap
    // degrades to prevalence order; ttp id keeps the order total.
    std::sort(candidates.begin(), candidates.end(),
              [](const PlanStep& a, const PlanStep& b) {
                if (a.rationale.combined_rank_score !=
                    b.rationale.combined_rank_score) {
                  return a.rationale.combined_rank_score >
                         b.rationale.combined_rank_score;
                }
                if (a.rationale.prevalence_weight !=
                    b.rationale.prevalence_weight) {
                  return a.rationale.prevalence_weight >
                         b.rationale.prevalence_weight;
                }
                return a.ttp_id < b.ttp_id;
              });
    if (static_cast<int>(candidates.size()) > top_k) {
      candidates.resize(top_k);
    }
    plan.steps.insert(plan.steps.end(), candidates.begin(), candidates.end());
  }
  return plan;
}

DefenseComparison compare_defenses(const RateTable& baseline,
                                   const RateTable& defended) {
  if (baseline.mode != defended.mode) {
    throw ValidationError("baseline and defended tables use different modes");
  }
  if (baseline.dimension != "phase" || defended.dimension != "phase") {
    throw ValidationError("defense comparison requires phase tables");
  }

  DefenseComparison comparison;
  comparison.mode = baseline.mode;

  for (Phase phase : phases_in_order()) {
    PhaseDelta delta;
    const RateCell* base = baseline.cell(to_string(phase));
    const RateCell* def = defended.cell(to_string(phase));
    if (base != nullptr) delta.baseline_rate = base->rate;
    if (def != nullptr) delta.defended_rate = def->rate;
    if (delta.baseline_rate && delta.defended_rate) {
      delta.imposed_delta = *delta.baseline_rate - *delta.defended_rate;
    }
    comparison.phases[phase] = delta;
  }
  if (baseline.overall.rate && defended.overall.rate) {
    comparison.overall_delta = *baseline.overall.rate - *defended.overall.rate;
  }
  return comparison;
}

}  // namespace chaineval
