#include "chaineval/rates.hpp"

#include <functional>
#include <map>

#include "chaineval/errors.hpp"

namespace chaineval {

namespace {

struct Tally {
  int solved = 0;
  int total = 0;
};

RateCell to_cell(const Tally& tally) {
  RateCell cell;
  cell.solved = tally.solved;
  cell.total = tally.total;
  if (tally.total > 0) {
    cell.rate = static_cast<double>(tally.solved) / tally.total;
  }
  return cell;
}

using KeyFn =
    std::function<std::vector<std::string>(const ChallengeManifest&)>;

RateTable build_table(const std::vector<EpisodeRecord>& records,
                      const std::vector<ChallengeManifest>& manifests,
                      RateMode mode, std::string dimension,
                      const std::vector<std::string>& all_keys,
                      const KeyFn& keys_of) {
  std::map<std::string, const ChallengeManifest*> by_id;
  for (const ChallengeManifest& manifest : manifests) {
    by_id[manifest.id] = &manifest;
  }

  RateTable table;
  table.mode = mode;
  table.dimension = std::move(dimension);

  std::map<std::string, Tally> tallies;
  for (const std::string& key : all_keys) {
    tallies[key];  // the whole closed enumeration is always visible
  }
  Tally overall;

  if (mode == RateMode::ByAttempt) {
    for (const EpisodeRecord& record : records) {
      auto it = by_id.find(record.challenge_id);
      if (it == by_id.end()) {
        throw ValidationError("record references unknown challenge_id '" +
                              record.challenge_id + "'");
      }
      if (record.status == EpisodeStatus::Errored) {
        ++table.errored_excluded;
        continue;
      }
      const bool solved = record.success();
      for (const std::string& key : keys_of(*it->second)) {
        Tally& tally = tallies[key];
        ++tally.total;
        tally.solved += solved ? 1 : 0;
      }
      ++overall.total;
      overall.solved += solved ? 1 : 0;
    }
  } else {
    // A challenge counts once; solved when any attempt succeeded. Challenges
    // whose attempts all errored stay out of the denominator.
    struct PerChallenge {
      bool counted = false;
      bool solved = false;
    };
    std::map<std::string, PerChallenge> per_challenge;
    for (const EpisodeRecord& record : records) {
      auto it = by_id.find(record.challenge_id);
      if (it == by_id.end()) {
        throw ValidationError("record references unknown challenge_id '" +
                              record.challenge_id + "'");
      }
      if (record.status == EpisodeStatus::Errored) {
        ++table.errored_excluded;
        continue;
      }
      PerChallenge& pc = per_challenge[record.challenge_id];
      pc.counted = true;
      pc.solved = pc.solved || record.success();
    }
    for (const auto& [challenge_id, pc] : per_challenge) {
      if (!pc.counted) continue;
      for (const std::string& key : keys_of(*by_id.at(challenge_id))) {
        Tally& tally = tallies[key];
        ++tally.total;
        tally.solved += pc.solved ? 1 : 0;
      }
      ++overall.total;
      overall.solved += pc.solved ? 1 : 0;
    }
  }

  for (const std::string& key : all_keys) {
    table.cells.emplace_back(key, to_cell(tallies[key]));
  }
  table.overall = to_cell(overall);
  return table;
}

}  // namespace

std::string_view to_string(RateMode mode) {
  return mode == RateMode::ByAttempt ? "by_attempt" : "by_unique_challenge";
}

std::optional<RateMode> rate_mode_from_string(std::string_view name) {
  if (name == "by_attempt") return RateMode::ByAttempt;
  if (name == "by_unique_challenge") return RateMode::ByUniqueChallenge;
  return std::nullopt;
}

const RateCell* RateTable::cell(std::string_view key) const {
  for (const auto& [name, cell] : cells) {
    if (name == key) return &cell;
  }
  return nullptr;
}

RateTable rates_by_difficulty(const std::vector<EpisodeRecord>& records,
                              const std::vector<ChallengeManifest>& manifests,
                              RateMode mode) {
  std::vector<std::string> keys;
  for (Difficulty d : difficulties_in_order()) {
    keys.emplace_back(to_string(d));
  }
  return build_table(records, manifests, mode, "difficulty", keys,
                     [](const ChallengeManifest& m) {
                       return std::vector<std::string>{
                           std::string(to_string(m.difficulty))};
                     });
}

RateTable rates_by_cluster(const std::vector<EpisodeRecord>& records,
                           const std::vector<ChallengeManifest>& manifests,
                           RateMode mode) {
  std::vector<std::string> keys;
  for (SkillCluster c : skill_clusters_in_order()) {
    keys.emplace_back(to_string(c));
  }
  return build_table(records, manifests, mode, "cluster", keys,
                     [](const ChallengeManifest& m) {
                       std::vector<std::string> out;
                       for (SkillCluster c : skill_clusters_in_order()) {
                         if (m.clusters.count(c)) {
                           out.emplace_back(to_string(c));
                         }
                       }
                       return out;
                     });
}

RateTable rates_by_phase(const std::vector<EpisodeRecord>& records,
                         const std::vector<ChallengeManifest>& manifests,
                         RateMode mode) {
  std::vector<std::string> keys;
  for (Phase p : phases_in_order()) {
    keys.emplace_back(to_string(p));
  }
  return build_table(records, manifests, mode, "phase", keys,
                     [](const ChallengeManifest& m) {
                       std::vector<std::string> out;
                       for (Phase p : phases_in_order()) {
                         if (m.phases.count(p)) {
                           out.emplace_back(to_string(p));
                         }
                       }
                       return out;
                     });
}

}  // namespace chaineval
