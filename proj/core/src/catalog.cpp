#include "chaineval/catalog.hpp"

#include <algorithm>
#include <set>

#include "chaineval/errors.hpp"
#include "json_util.hpp"

namespace chaineval {

namespace {

using nlohmann::json;

Phase require_phase(const json& value, const std::string& where,
                    std::vector<std::string>& findings) {
  if (!value.is_string()) {
    findings.push_back(where + ": phase must be a string");
    return Phase::Reconnaissance;
  }
  auto phase = phase_from_string(value.get<std::string>());
  if (!phase) {
    findings.push_back(where + ": unknown phase name '" +
                       value.get<std::string>() + "'");
    return Phase::Reconnaissance;
  }
  return *phase;
}

std::string require_string(const json& obj, const char* key,
                           const std::string& where,
                           std::vector<std::string>& findings) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    findings.push_back(where + ": missing string field '" + key + "'");
    return {};
  }
  return obj[key].get<std::string>();
}

json phase_set_to_json(const std::set<Phase>& phases) {
  json arr = json::array();
  for (Phase p : phases_in_order()) {
    if (phases.count(p)) {
      arr.push_back(std::string(to_string(p)));
    }
  }
  return arr;
}

}  // namespace

std::string_view to_string(SelectionTag tag) {
  switch (tag) {
    case SelectionTag::Prevalence:
      return "prevalence";
    case SelectionTag::Severity:
      return "severity";
    case SelectionTag::AiUplift:
      return "ai_uplift";
  }
  return "unknown";
}

std::optional<SelectionTag> selection_tag_from_string(std::string_view name) {
  if (name == "prevalence") return SelectionTag::Prevalence;
  if (name == "severity") return SelectionTag::Severity;
  if (name == "ai_uplift") return SelectionTag::AiUplift;
  return std::nullopt;
}

const Ttp* AttackChainCatalog::find_ttp(std::string_view id) const {
  for (const Ttp& ttp : ttps) {
    if (ttp.id == id) return &ttp;
  }
  return nullptr;
}

const Archetype* AttackChainCatalog::find_archetype(std::string_view id) const {
  for (const Archetype& archetype : archetypes) {
    if (archetype.id == id) return &archetype;
  }
  return nullptr;
}

std::vector<std::string> validate_catalog(const AttackChainCatalog& catalog) {
  std::vector<std::string> findings;

  std::set<std::string> ttp_ids;
  for (const Ttp& ttp : catalog.ttps) {
    if (ttp.id.empty()) {
      findings.push_back("ttp '" + ttp.name + "': empty id");
    }
    if (!ttp_ids.insert(ttp.id).second) {
      findings.push_back("duplicate ttp id '" + ttp.id + "'");
    }
    if (ttp.phases.empty()) {
      findings.push_back("ttp '" + ttp.id + "': phases must be nonempty");
    }
  }

  std::set<std::pair<std::string, Phase>> prevalence_keys;
  for (std::size_t i = 0; i < catalog.prevalence.size(); ++i) {
    const PrevalenceRecord& rec = catalog.prevalence[i];
    const std::string where = "prevalence[" + std::to_string(i) + "]";
    const Ttp* ttp = catalog.find_ttp(rec.ttp_id);
    if (ttp == nullptr) {
      findings.push_back(where + ": unknown ttp_id '" + rec.ttp_id + "'");
    } else if (!ttp->phases.count(rec.phase)) {
      findings.push_back(where + ": ttp '" + rec.ttp_id +
                         "' does not declare phase '" +
                         std::string(to_string(rec.phase)) + "'");
    }
    if (rec.weight < 0.0) {
      findings.push_back(where + ": weight must be >= 0");
    }
    if (!prevalence_keys.insert({rec.ttp_id, rec.phase}).second) {
      findings.push_back(where + ": duplicate (ttp_id, phase) pair ('" +
                         rec.ttp_id + "', '" +
                         std::string(to_string(rec.phase)) + "')");
    }
  }

  std::set<std::string> archetype_ids;
  for (const Archetype& archetype : catalog.archetypes) {
    const std::string where = "archetype '" + archetype.id + "'";
    if (archetype.id.empty()) {
      findings.push_back("archetype '" + archetype.name + "': empty id");
    }
    if (!archetype_ids.insert(archetype.id).second) {
      findings.push_back("duplicate archetype id '" + archetype.id + "'");
    }
    for (const std::string& ttp_id : archetype.ttp_ids) {
      if (catalog.find_ttp(ttp_id) == nullptr) {
        findings.push_back(where + ": unknown ttp_id '" + ttp_id + "'");
      }
    }
  }

  return findings;
}

AttackChainCatalog load_catalog(const std::filesystem::path& path) {
  const json doc = detail::parse_json_file(path);
  std::vector<std::string> findings;
  if (!doc.is_object()) {
    throw ValidationError(path.string() + ": catalog must be a JSON object");
  }

  AttackChainCatalog catalog;
  catalog.version = doc.value("version", "");

  for (const json& item : doc.value("ttps", json::array())) {
    Ttp ttp;
    const std::string where = "ttp '" + item.value("id", "?") + "'";
    ttp.id = require_string(item, "id", where, findings);
    ttp.name = item.value("name", "");
    ttp.description = item.value("description", "");
    for (const json& phase : item.value("phases", json::array())) {
      ttp.phases.insert(require_phase(phase, where, findings));
    }
    catalog.ttps.push_back(std::move(ttp));
  }

  for (const json& item : doc.value("prevalence", json::array())) {
    PrevalenceRecord rec;
    const std::string where =
        "prevalence row for '" + item.value("ttp_id", "?") + "'";
    rec.ttp_id = require_string(item, "ttp_id", where, findings);
    if (item.contains("phase")) {
      rec.phase = require_phase(item["phase"], where, findings);
    } else {
      findings.push_back(where + ": missing phase");
    }
    if (!item.contains("weight") || !item["weight"].is_number()) {
      findings.push_back(where + ": missing numeric weight");
    } else {
      rec.weight = item["weight"].get<double>();
    }
    catalog.prevalence.push_back(std::move(rec));
  }

  for (const json& item : doc.value("archetypes", json::array())) {
    Archetype archetype;
    const std::string where = "archetype '" + item.value("id", "?") + "'";
    archetype.id = require_string(item, "id", where, findings);
    archetype.name = item.value("name", "");
    for (const json& b : item.value("bottlenecks", json::array())) {
      BottleneckAnnotation annotation;
      if (b.contains("phase")) {
        annotation.phase = require_phase(b["phase"], where, findings);
      } else {
        findings.push_back(where + ": bottleneck missing phase");
      }
      annotation.label = b.value("label", "");
      annotation.uplift_notes = b.value("uplift_notes", "");
      archetype.bottlenecks.push_back(std::move(annotation));
    }
    for (const json& ttp_id : item.value("ttp_ids", json::array())) {
      if (ttp_id.is_string()) {
        archetype.ttp_ids.insert(ttp_id.get<std::string>());
      } else {
        findings.push_back(where + ": ttp_ids entries must be strings");
      }
    }
    for (const json& tag : item.value("selection_tags", json::array())) {
      auto parsed = tag.is_string()
                        ? selection_tag_from_string(tag.get<std::string>())
                        : std::nullopt;
      if (!parsed) {
        findings.push_back(where + ": unknown selection tag " + tag.dump());
      } else {
        archetype.selection_tags.insert(*parsed);
      }
    }
    catalog.archetypes.push_back(std::move(archetype));
  }

  auto structural = validate_catalog(catalog);
  findings.insert(findings.end(), structural.begin(), structural.end());
  if (!findings.empty()) {
    throw ValidationError(std::move(findings));
  }
  return catalog;
}

void save_catalog(const AttackChainCatalog& catalog,
                  const std::filesystem::path& path) {
  json doc;
  doc["version"] = catalog.version;

  json ttps = json::array();
  for (const Ttp& ttp : catalog.ttps) {
    json item;
    item["id"] = ttp.id;
    item["name"] = ttp.name;
    item["phases"] = phase_set_to_json(ttp.phases);
    item["description"] = ttp.description;
    ttps.push_back(std::move(item));
  }
  doc["ttps"] = std::move(ttps);

  json prevalence = json::array();
  for (const PrevalenceRecord& rec : catalog.prevalence) {
    json item;
    item["ttp_id"] = rec.ttp_id;
    item["phase"] = std::string(to_string(rec.phase));
    item["weight"] = rec.weight;
    prevalence.push_back(std::move(item));
  }
  doc["prevalence"] = std::move(prevalence);

  json archetypes = json::array();
  for (const Archetype& archetype : catalog.archetypes) {
    json item;
    item["id"] = archetype.id;
    item["name"] = archetype.name;
    json bottlenecks = json::array();
    for (const BottleneckAnnotation& b : archetype.bottlenecks) {
      json annotation;
      annotation["phase"] = std::string(to_string(b.phase));
      annotation["label"] = b.label;
      annotation["uplift_notes"] = b.uplift_notes;
      bottlenecks.push_back(std::move(annotation));
    }
    item["bottlenecks"] = std::move(bottlenecks);
    item["ttp_ids"] = json(archetype.ttp_ids);
    json tags = json::array();
    for (SelectionTag tag : archetype.selection_tags) {
      tags.push_back(std::string(to_string(tag)));
    }
    item["selection_tags"] = std::move(tags);
    archetypes.push_back(std::move(item));
  }
  doc["archetypes"] = std::move(archetypes);

  detail::write_file(path, doc.dump(2) + "\n");
}

std::map<std::string, double> normalized_prevalence(
    const AttackChainCatalog& catalog, Phase phase) {
  std::map<std::string, double> weights;
  double total = 0.0;
  for (const PrevalenceRecord& rec : catalog.prevalence) {
    if (rec.phase != phase) continue;
    weights[rec.ttp_id] = rec.weight;
    total += rec.weight;
  }
  if (total <= 0.0) {
    return {};  // all-zero stays usable, never a division by zero
  }
  for (auto& [ttp_id, weight] : weights) {
    weight /= total;
  }
  return weights;
}

}  // namespace chaineval
