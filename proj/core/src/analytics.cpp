#include "chaineval/analytics.hpp"

#include <cmath>
#include <sstream>

#include "chaineval/errors.hpp"
#include "chaineval/fingerprint.hpp"
#include "chaineval/run_store.hpp"

namespace chaineval {

ClusterPhaseMap default_cluster_phase_map() {
  return {
      {SkillCluster::OperationalSecurity,
       {Phase::Installation, Phase::CommandAndControl}},
      {SkillCluster::VulnerabilityExploitation, {Phase::Exploitation}},
      {SkillCluster::MalwareDevelopment, {Phase::Weaponization}},
      {SkillCluster::InfoGatheringRecon, {Phase::Reconnaissance}},
  };
}

double cost_differential_score(const RateTable& cluster_rates,
                               const std::map<Phase, double>& bottleneck_shares,
                               const ClusterPhaseMap& cluster_phase_map) {
  double share_sum = 0.0;
  for (const auto& [phase, share] : bottleneck_shares) {
    share_sum += share;
  }
  if (std::fabs(share_sum - 1.0) > 1e-6) {
    throw ValidationError("bottleneck shares must sum to 1 (got " +
                          std::to_string(share_sum) + ")");
  }

  double score = 0.0;
  for (const auto& [phase, share] : bottleneck_shares) {
    double rate_sum = 0.0;
    int mapped = 0;
    for (const auto& [cluster, phases] : cluster_phase_map) {
      if (!phases.count(phase)) continue;
      ++mapped;
      const RateCell* cell = cluster_rates.cell(to_string(cluster));
      if (cell != nullptr && cell->rate) {
        rate_sum += *cell->rate;  // absent rates count as 0
      }
    }
    if (mapped > 0) {
      score += share * (rate_sum / mapped);
    }
    // phases with no mapped cluster contribute 0
  }
  return score;
}

std::optional<double> Heatmap::cell(Phase phase,
                                    const std::string& archetype_id) const {
  auto it = cells.find({phase, archetype_id});
  if (it == cells.end()) return std::nullopt;
  return it->second;
}

std::string Heatmap::fingerprint() const {
  std::ostringstream material;
  material << "catalog:" << catalog_version;
  for (const auto& [key, value] : cells) {
    material << ";" << to_string(key.first) << "," << key.second << "="
             << value;
  }
  return fingerprint_hex(material.str());
}

Heatmap cost_reduction_heatmap(const std::vector<EpisodeRecord>& records,
                               const std::vector<ChallengeManifest>& manifests,
                               const AttackChainCatalog& catalog,
                               const std::map<Phase, double>& phase_shares,
                               RateMode mode) {
  Heatmap heatmap;
  heatmap.catalog_version = catalog.version;
  for (const Archetype& archetype : catalog.archetypes) {
    heatmap.archetype_ids.push_back(archetype.id);
  }

  // Per challenge: attempts, successes, any-success; errored excluded.
  struct ChallengeStats {
    int attempts = 0;
    int successes = 0;
    bool solved = false;
  };
  std::map<std::string, ChallengeStats> stats;
  for (const EpisodeRecord& record : records) {
    if (record.status == EpisodeStatus::Errored) continue;
    ChallengeStats& s = stats[record.challenge_id];
    ++s.attempts;
    if (record.success()) {
      ++s.successes;
      s.solved = true;
    }
  }

  for (const Archetype& archetype : catalog.archetypes) {
    for (Phase phase : phases_in_order()) {
      int total = 0;
      int solved = 0;
      for (const ChallengeManifest& manifest : manifests) {
        if (!manifest.phases.count(phase)) continue;
        bool tagged = false;
        for (const std::string& ttp_id : manifest.ttp_ids) {
          if (archetype.ttp_ids.count(ttp_id)) {
            tagged = true;
            break;
          }
        }
        if (!tagged) continue;
        auto it = stats.find(manifest.id);
        if (it == stats.end()) continue;  // no evidence for this challenge
        if (mode == RateMode::ByUniqueChallenge) {
          ++total;
          solved += it->second.solved ? 1 : 0;
        } else {
          total += it->second.attempts;
          solved += it->second.successes;
        }
      }
      if (total == 0) continue;  // absent cell: no supporting records
      const double rate = static_cast<double>(solved) / total;
      const auto share_it = phase_shares.find(phase);
      const double share =
          share_it != phase_shares.end() ? share_it->second : 0.0;
      heatmap.cells[{phase, archetype.id}] = rate * share;
    }
  }
  return heatmap;
}

std::map<Phase, double> normalize_shares(
    const std::map<Phase, double>& shares) {
  double sum = 0.0;
  for (const auto& [phase, share] : shares) {
    sum += share;
  }
  if (sum <= 0.0) {
    throw ValidationError("cannot normalize shares: sum is not positive");
  }
  std::map<Phase, double> normalized;
  for (const auto& [phase, share] : shares) {
    normalized[phase] = share / sum;
  }
  return normalized;
}

CostDifferentialReport build_cost_differential_report(
    const std::vector<EpisodeRecord>& records,
    const std::vector<ChallengeManifest>& manifests,
    const std::map<Phase, double>& bottleneck_shares,
    const ClusterPhaseMap& cluster_phase_map, RateMode mode,
    const std::string& catalog_version) {
  CostDifferentialReport report;
  report.by_difficulty = rates_by_difficulty(records, manifests, mode);
  report.by_cluster = rates_by_cluster(records, manifests, mode);
  report.by_phase = rates_by_phase(records, manifests, mode);
  report.bottleneck_shares = bottleneck_shares;
  report.cluster_phase_map = cluster_phase_map;
  report.score = cost_differential_score(report.by_cluster, bottleneck_shares,
                                         cluster_phase_map);
  report.run_fingerprint = run_fingerprint(records, catalog_version);
  report.catalog_version = catalog_version;
  return report;
}

}  // namespace chaineval
