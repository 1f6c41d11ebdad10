#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chaineval/catalog.hpp"
#include "chaineval/phase.hpp"

namespace chaineval {

enum class Difficulty { Strawman = 0, Easy, Medium, Hard };

enum class ChallengeType { VulnDetectExploit, Evasion, NetworkAttackSim };

enum class SkillCluster {
  OperationalSecurity,
  VulnerabilityExploitation,
  MalwareDevelopment,
  InfoGatheringRecon,
};

std::string_view to_string(Difficulty d);
std::string_view to_string(ChallengeType t);
std::string_view to_string(SkillCluster c);
std::optional<Difficulty> difficulty_from_string(std::string_view name);
std::optional<ChallengeType> challenge_type_from_string(std::string_view name);
std::optional<SkillCluster> skill_cluster_from_string(std::string_view name);

const std::array<Difficulty, 4>& difficulties_in_order();
const std::array<SkillCluster, 4>& skill_clusters_in_order();

enum class FlagMatchMode {
  Substring,        // literal containment
  AnchoredPattern,  // value is a regex that must match one whole line
};

struct FlagSpec {
  std::string value;  // nonempty; never surfaced in the goal prompt
  FlagMatchMode match_mode = FlagMatchMode::Substring;
  bool case_sensitive = true;

  bool operator==(const FlagSpec&) const = default;
};

// True iff `text` contains the flag under the spec's match mode and case
// rules. Pure; case folding is ASCII-only.
bool check_flag(const FlagSpec& flag, std::string_view text);

enum class SandboxKind { InProcessMock, Container };

std::string_view to_string(SandboxKind k);
std::optional<SandboxKind> sandbox_kind_from_string(std::string_view name);

struct EnvironmentSpec {
  SandboxKind kind = SandboxKind::InProcessMock;
  // Container image reference, or fixture path relative to the manifest dir.
  std::string image_or_script;
  std::vector<std::string> setup;
  std::vector<std::string> teardown;
  bool network_isolated = true;
  int time_limit_secs = 10;  // per command, > 0

  bool operator==(const EnvironmentSpec&) const = default;
};

struct ChallengeManifest {
  std::string id;
  std::string title;
  Difficulty difficulty = Difficulty::Strawman;
  ChallengeType challenge_type = ChallengeType::VulnDetectExploit;
  std::set<SkillCluster> clusters;  // nonempty
  std::set<Phase> phases;           // nonempty
  std::set<std::string> ttp_ids;
  std::string goal_prompt;  // must not contain flag.value
  EnvironmentSpec environment;
  FlagSpec flag;
  // Absent means "use the runtime default" (30 unless configured otherwise).
  std::optional<int> max_interactions;

  // Where this manifest was loaded from; empty for in-memory manifests.
  std::filesystem::path source_path;

  bool operator==(const ChallengeManifest&) const = default;

  int max_interactions_or(int fallback) const {
    return max_interactions.value_or(fallback);
  }
  // Directory holding the manifest's fixtures; parent of source_path.
  std::filesystem::path base_dir() const;
};

// Invariant violations for a single manifest, empty when clean.
std::vector<std::string> validate_manifest(const ChallengeManifest& manifest);

// Loads one manifest file. Throws IoError / ParseError / ValidationError.
ChallengeManifest load_manifest(const std::filesystem::path& path);

// Loads every manifest under `dir` (direct *.json files plus the documented
// <id>/manifest.json layout), validates each, checks ids are unique across
// files, and resolves ttp_ids against `catalog` when one is given. Per-file
// failures are collected and reported together in one ValidationError.
// Result is sorted by id, so loading the same files in any order yields the
// same list.
std::vector<ChallengeManifest> load_registry(
    const std::filesystem::path& dir,
    const AttackChainCatalog* catalog = nullptr);

// Canonical JSON text of a manifest; input to config fingerprints.
std::string to_canonical_json(const ChallengeManifest& manifest);

}  // namespace chaineval
