#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chaineval/phase.hpp"

namespace chaineval {

// A catalogued adversary technique, ATT&CK-style key. A technique may span
// several phases, which is why prevalence is keyed by (ttp, phase) pair.
struct Ttp {
  std::string id;
  std::string name;
  std::set<Phase> phases;  // nonempty
  std::string description;

  bool operator==(const Ttp&) const = default;
};

// Observed weight of one technique within one phase. Weights are either raw
// instance counts or already-normalized frequencies; consumers normalize.
struct PrevalenceRecord {
  std::string ttp_id;
  Phase phase = Phase::Reconnaissance;
  double weight = 0.0;  // >= 0

  bool operator==(const PrevalenceRecord&) const = default;
};

// Why an archetype is in the basket.
enum class SelectionTag { Prevalence, Severity, AiUplift };

std::string_view to_string(SelectionTag tag);
std::optional<SelectionTag> selection_tag_from_string(std::string_view name);

struct BottleneckAnnotation {
  Phase phase = Phase::Reconnaissance;
  std::string label;
  std::string uplift_notes;

  bool operator==(const BottleneckAnnotation&) const = default;
};

// A representative attack-chain pattern with its per-phase bottleneck
// annotations and the techniques it leans on.
struct Archetype {
  std::string id;
  std::string name;
  std::vector<BottleneckAnnotation> bottlenecks;
  std::set<std::string> ttp_ids;
  std::set<SelectionTag> selection_tags;

  bool operator==(const Archetype&) const = default;
};

// The curated basket: techniques, their observed prevalence per phase, and
// archetypes. Immutable after load; safe to share across readers.
struct AttackChainCatalog {
  std::string version;
  std::vector<Ttp> ttps;
  std::vector<PrevalenceRecord> prevalence;
  std::vector<Archetype> archetypes;

  bool operator==(const AttackChainCatalog&) const = default;

  const Ttp* find_ttp(std::string_view id) const;
  const Archetype* find_archetype(std::string_view id) const;
};

// Loads and fully validates a catalog file. Throws IoError when the file is
// missing/unreadable, ParseError on malformed JSON, ValidationError with the
// complete list of invariant violations otherwise.
AttackChainCatalog load_catalog(const std::filesystem::path& path);

// Writes the catalog in the documented JSON format. load_catalog(save_catalog(c))
// reproduces the catalog field-for-field.
void save_catalog(const AttackChainCatalog& catalog,
                  const std::filesystem::path& path);

// All invariant violations, empty when the catalog is clean. load_catalog
// runs this internally; exposed for the CLI and for mutation tests.
std::vector<std::string> validate_catalog(const AttackChainCatalog& catalog);

// Weights for one phase scaled to sum to 1. Empty map when the phase has no
// records or only zero weights (partially populated catalogs stay usable).
std::map<std::string, double> normalized_prevalence(
    const AttackChainCatalog& catalog, Phase phase);

}  // namespace chaineval
