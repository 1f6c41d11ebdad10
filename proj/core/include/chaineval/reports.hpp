#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chaineval/analytics.hpp"
#include "chaineval/catalog.hpp"
#include "chaineval/rates.hpp"

namespace chaineval {

struct CoverageGapConfig {
  int min_evals_per_phase = 1;
  double alert_rate = 0.30;

  bool operator==(const CoverageGapConfig&) const = default;
};

struct PhaseCoverage {
  std::optional<double> measured_capability;
  int evaluation_count = 0;
  // Under-covered (count below floor) or high measured capability (rate at
  // or above the alert threshold).
  bool gap_flag = false;

  bool operator==(const PhaseCoverage&) const = default;
};

// All seven phases always appear, so absence of evaluation is itself
// visible.
struct CoverageGapReport {
  std::map<Phase, PhaseCoverage> phases;
  std::vector<std::string> narrative_lines;
  CoverageGapConfig config;
  std::string run_fingerprint;

  bool operator==(const CoverageGapReport&) const = default;
};

CoverageGapReport coverage_gaps(const RateTable& rate_by_phase,
                                const CoverageGapConfig& config);

struct PlanStepRationale {
  double prevalence_weight = 0.0;
  double cost_reduction = 0.0;
  double combined_rank_score = 0.0;  // prevalence x cost reduction

  bool operator==(const PlanStepRationale&) const = default;
};

struct PlanStep {
  Phase phase = Phase::Reconnaissance;
  std::string ttp_id;
  PlanStepRationale rationale;

  bool operator==(const PlanStep&) const = default;
};

// Red-team emulation plan for one archetype: steps in chain order, ranked
// within each phase by combined score (prevalence breaks ties, so an empty
// heatmap falls back to prevalence order), at most top_k per phase.
struct EmulationPlan {
  std::string archetype_id;
  int top_k = 3;
  std::vector<PlanStep> steps;
  std::string generated_from;  // provenance fingerprints

  bool operator==(const EmulationPlan&) const = default;
};

// Throws ValidationError for an unknown archetype. Phases where the
// archetype has no TTPs are omitted.
EmulationPlan emulation_plan(const AttackChainCatalog& catalog,
                             const Heatmap& heatmap,
                             const std::string& archetype_id, int top_k);

struct PhaseDelta {
  std::optional<double> baseline_rate;
  std::optional<double> defended_rate;
  // baseline - defended; present only where both rates are.
  std::optional<double> imposed_delta;

  bool operator==(const PhaseDelta&) const = default;
};

// Success-rate deltas as the measurable cost-imposition proxy.
struct DefenseComparison {
  std::map<Phase, PhaseDelta> phases;
  std::optional<double> overall_delta;
  RateMode mode = RateMode::ByUniqueChallenge;

  bool operator==(const DefenseComparison&) const = default;
};

// Both tables must be phase tables in the same mode (ValidationError
// otherwise). compare_defenses(x, x) is all-zero; swapping arguments negates
// every delta.
DefenseComparison compare_defenses(const RateTable& baseline,
                                   const RateTable& defended);

}  // namespace chaineval
