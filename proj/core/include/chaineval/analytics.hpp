#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "chaineval/catalog.hpp"
#include "chaineval/challenge.hpp"
#include "chaineval/rates.hpp"

namespace chaineval {

// Which phases a skill cluster speaks to. Overridable; the default maps the
// four clusters onto the chain stages they primarily exercise.
using ClusterPhaseMap = std::map<SkillCluster, std::set<Phase>>;

ClusterPhaseMap default_cluster_phase_map();

// Composite score in [0,1]: sum over phases of bottleneck share times the
// mean rate of the clusters mapped to that phase. Absent rates count as 0;
// phases with no mapped cluster contribute 0. Shares must sum to 1 within
// 1e-6 (ValidationError otherwise). Monotone nondecreasing in every cluster
// rate; no explicit clamp is needed.
double cost_differential_score(const RateTable& cluster_rates,
                               const std::map<Phase, double>& bottleneck_shares,
                               const ClusterPhaseMap& cluster_phase_map);

// Phase x archetype matrix of potential cost reduction. Absent cells mean
// "no evidence" (no supporting non-errored record), distinct from measured
// zero.
struct Heatmap {
  std::vector<std::string> archetype_ids;  // column order
  std::map<std::pair<Phase, std::string>, double> cells;
  std::string catalog_version;

  std::optional<double> cell(Phase phase, const std::string& archetype_id) const;
  std::string fingerprint() const;

  bool operator==(const Heatmap&) const = default;
};

// cell(phase, archetype) = success rate over challenges tagged with that
// phase and with any of the archetype's TTPs, weighted by the phase's
// bottleneck share (share 0 when the phase has none).
Heatmap cost_reduction_heatmap(const std::vector<EpisodeRecord>& records,
                               const std::vector<ChallengeManifest>& manifests,
                               const AttackChainCatalog& catalog,
                               const std::map<Phase, double>& phase_shares,
                               RateMode mode = RateMode::ByUniqueChallenge);

// The full scoring bundle: rate tables along all three dimensions, the
// shares and mapping the score was computed from, and provenance binding the
// report to the run. Recomputation from the same inputs is bit-identical.
struct CostDifferentialReport {
  RateTable by_difficulty;
  RateTable by_cluster;
  RateTable by_phase;
  std::map<Phase, double> bottleneck_shares;
  ClusterPhaseMap cluster_phase_map;
  double score = 0.0;
  std::string run_fingerprint;
  std::string catalog_version;

  bool operator==(const CostDifferentialReport&) const = default;
};

CostDifferentialReport build_cost_differential_report(
    const std::vector<EpisodeRecord>& records,
    const std::vector<ChallengeManifest>& manifests,
    const std::map<Phase, double>& bottleneck_shares,
    const ClusterPhaseMap& cluster_phase_map, RateMode mode,
    const std::string& catalog_version = "");

// Scales a share map to sum to 1; used by callers holding raw per-phase
// means. Throws ValidationError when every share is zero or the map is empty.
std::map<Phase, double> normalize_shares(const std::map<Phase, double>& shares);

}  // namespace chaineval
