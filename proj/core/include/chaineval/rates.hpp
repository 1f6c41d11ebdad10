#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaineval/challenge.hpp"
#include "chaineval/episode.hpp"

namespace chaineval {

enum class RateMode { ByAttempt, ByUniqueChallenge };

std::string_view to_string(RateMode mode);
std::optional<RateMode> rate_mode_from_string(std::string_view name);

struct RateCell {
  int solved = 0;
  int total = 0;
  // Exactly solved/total; absent when total is 0.
  std::optional<double> rate;

  bool operator==(const RateCell&) const = default;
};

// Success rates along one dimension (difficulty, cluster, or phase). Keys
// appear in canonical order and cover the whole closed enumeration, so zero
// coverage is visible as total=0 rather than a missing row. Errored episodes
// are excluded from every denominator; the exclusion count is carried so it
// stays visible in reports.
struct RateTable {
  RateMode mode = RateMode::ByUniqueChallenge;
  std::string dimension;  // "difficulty" | "cluster" | "phase"
  std::vector<std::pair<std::string, RateCell>> cells;
  RateCell overall;
  int errored_excluded = 0;

  const RateCell* cell(std::string_view key) const;

  bool operator==(const RateTable&) const = default;
};

// ByAttempt counts every non-errored episode; ByUniqueChallenge counts a
// challenge solved when any attempt succeeded. A challenge tagged with
// several clusters/phases contributes to each of their denominators.
// Throws ValidationError when a record's challenge_id has no manifest.
RateTable rates_by_difficulty(const std::vector<EpisodeRecord>& records,
                              const std::vector<ChallengeManifest>& manifests,
                              RateMode mode);
RateTable rates_by_cluster(const std::vector<EpisodeRecord>& records,
                           const std::vector<ChallengeManifest>& manifests,
                           RateMode mode);
RateTable rates_by_phase(const std::vector<EpisodeRecord>& records,
                         const std::vector<ChallengeManifest>& manifests,
                         RateMode mode);

}  // namespace chaineval
