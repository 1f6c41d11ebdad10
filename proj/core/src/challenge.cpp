#include "chaineval/challenge.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <sstream>

#include "chaineval/errors.hpp"
#include "json_util.hpp"

namespace chaineval {

namespace {

using nlohmann::json;

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

bool contains(std::string_view haystack, std::string_view needle) {
  return haystack.find(needle) != std::string_view::npos;
}

// Pattern mode: the value is a regex that must match one complete line.
bool match_anchored_pattern(const FlagSpec& flag, std::string_view text) {
  auto syntax = std::regex::ECMAScript;
  if (!flag.case_sensitive) {
    syntax |= std::regex::icase;
  }
  std::regex pattern;
  try {
    pattern = std::regex(flag.value, syntax);
  } catch (const std::regex_error&) {
    return false;  // an unusable pattern matches nothing
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string_view line = (end == std::string_view::npos)
                                ? text.substr(start)
                                : text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (std::regex_match(line.begin(), line.end(), pattern)) {
      return true;
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return false;
}

}  // namespace

std::string_view to_string(Difficulty d) {
  switch (d) {
    case Difficulty::Strawman:
      return "strawman";
    case Difficulty::Easy:
      return "easy";
    case Difficulty::Medium:
      return "medium";
    case Difficulty::Hard:
      return "hard";
  }
  return "unknown";
}

std::string_view to_string(ChallengeType t) {
  switch (t) {
    case ChallengeType::VulnDetectExploit:
      return "vuln_detect_exploit";
    case ChallengeType::Evasion:
      return "evasion";
    case ChallengeType::NetworkAttackSim:
      return "network_attack_sim";
  }
  return "unknown";
}

std::string_view to_string(SkillCluster c) {
  switch (c) {
    case SkillCluster::OperationalSecurity:
      return "operational_security";
    case SkillCluster::VulnerabilityExploitation:
      return "vulnerability_exploitation";
    case SkillCluster::MalwareDevelopment:
      return "malware_development";
    case SkillCluster::InfoGatheringRecon:
      return "info_gathering_recon";
  }
  return "unknown";
}

std::string_view to_string(SandboxKind k) {
  switch (k) {
    case SandboxKind::InProcessMock:
      return "in_process_mock";
    case SandboxKind::Container:
      return "container";
  }
  return "unknown";
}

const std::array<Difficulty, 4>& difficulties_in_order() {
  static const std::array<Difficulty, 4> order = {
      Difficulty::Strawman, Difficulty::Easy, Difficulty::Medium,
      Difficulty::Hard};
  return order;
}

const std::array<SkillCluster, 4>& skill_clusters_in_order() {
  static const std::array<SkillCluster, 4> order = {
      SkillCluster::OperationalSecurity,
      SkillCluster::VulnerabilityExploitation,
      SkillCluster::MalwareDevelopment, SkillCluster::InfoGatheringRecon};
  return order;
}

std::optional<Difficulty> difficulty_from_string(std::string_view name) {
  for (Difficulty d : difficulties_in_order()) {
    if (to_string(d) == name) return d;
  }
  return std::nullopt;
}

std::optional<ChallengeType> challenge_type_from_string(std::string_view name) {
  for (ChallengeType t :
       {ChallengeType::VulnDetectExploit, ChallengeType::Evasion,
        ChallengeType::NetworkAttackSim}) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

std::optional<SkillCluster> skill_cluster_from_string(std::string_view name) {
  for (SkillCluster c : skill_clusters_in_order()) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::optional<SandboxKind> sandbox_kind_from_string(std::string_view name) {
  if (name == "in_process_mock") return SandboxKind::InProcessMock;
  if (name == "container") return SandboxKind::Container;
  return std::nullopt;
}

bool check_flag(const FlagSpec& flag, std::string_view text) {
  if (flag.value.empty() || text.empty()) {
    return false;
  }
  if (flag.match_mode == FlagMatchMode::AnchoredPattern) {
    return match_anchored_pattern(flag, text);
  }
  if (flag.case_sensitive) {
    return contains(text, flag.value);
  }
  return contains(ascii_lower(text), ascii_lower(flag.value));
}

std::filesystem::path ChallengeManifest::base_dir() const {
  return source_path.empty() ? std::filesystem::path{}
                             : source_path.parent_path();
}

std::vector<std::string> validate_manifest(const ChallengeManifest& m) {
  std::vector<std::string> findings;
  const std::string where = "challenge '" + m.id + "'";
  if (m.id.empty()) {
    findings.push_back("challenge with empty id");
  }
  if (m.clusters.empty()) {
    findings.push_back(where + ": clusters must be nonempty");
  }
  if (m.phases.empty()) {
    findings.push_back(where + ": phases must be nonempty");
  }
  if (m.flag.value.empty()) {
    findings.push_back(where + ": flag value must be nonempty");
  }
  if (!m.flag.value.empty() &&
      m.goal_prompt.find(m.flag.value) != std::string::npos) {
    findings.push_back(where + ": goal_prompt leaks the flag value");
  }
  if (m.max_interactions && *m.max_interactions < 1) {
    findings.push_back(where + ": max_interactions must be >= 1");
  }
  if (m.environment.time_limit_secs <= 0) {
    findings.push_back(where + ": environment.time_limit_secs must be > 0");
  }
  if (m.environment.image_or_script.empty()) {
    findings.push_back(where + ": environment.image_or_script must be set");
  }
  return findings;
}

namespace {

ChallengeManifest manifest_from_json(const json& doc,
                                     const std::filesystem::path& path) {
  std::vector<std::string> findings;
  const std::string origin = path.empty() ? "manifest" : path.string();
  if (!doc.is_object()) {
    throw ValidationError(origin + ": manifest must be a JSON object");
  }

  ChallengeManifest m;
  m.source_path = path;
  m.id = doc.value("id", "");
  m.title = doc.value("title", "");

  const std::string where =
      "challenge '" + (m.id.empty() ? origin : m.id) + "'";

  if (auto d = difficulty_from_string(doc.value("difficulty", ""))) {
    m.difficulty = *d;
  } else {
    findings.push_back(where + ": unknown difficulty '" +
                       doc.value("difficulty", "") + "'");
  }
  if (auto t = challenge_type_from_string(doc.value("challenge_type", ""))) {
    m.challenge_type = *t;
  } else {
    findings.push_back(where + ": unknown challenge_type '" +
                       doc.value("challenge_type", "") + "'");
  }
  for (const json& c : doc.value("clusters", json::array())) {
    auto cluster = c.is_string()
                       ? skill_cluster_from_string(c.get<std::string>())
                       : std::nullopt;
    if (cluster) {
      m.clusters.insert(*cluster);
    } else {
      findings.push_back(where + ": unknown cluster " + c.dump());
    }
  }
  for (const json& p : doc.value("phases", json::array())) {
    auto phase =
        p.is_string() ? phase_from_string(p.get<std::string>()) : std::nullopt;
    if (phase) {
      m.phases.insert(*phase);
    } else {
      findings.push_back(where + ": unknown phase " + p.dump());
    }
  }
  for (const json& t : doc.value("ttp_ids", json::array())) {
    if (t.is_string()) {
      m.ttp_ids.insert(t.get<std::string>());
    } else {
      findings.push_back(where + ": ttp_ids entries must be strings");
    }
  }
  m.goal_prompt = doc.value("goal_prompt", "");

  const json env = doc.value("environment", json::object());
  if (auto kind = sandbox_kind_from_string(env.value("kind", ""))) {
    m.environment.kind = *kind;
  } else {
    findings.push_back(where + ": unknown environment.kind '" +
                       env.value("kind", "") + "'");
  }
  m.environment.image_or_script = env.value("image_or_script", "");
  for (const json& cmd : env.value("setup", json::array())) {
    if (cmd.is_string()) m.environment.setup.push_back(cmd.get<std::string>());
  }
  for (const json& cmd : env.value("teardown", json::array())) {
    if (cmd.is_string())
      m.environment.teardown.push_back(cmd.get<std::string>());
  }
  m.environment.network_isolated = env.value("network_isolated", true);
  m.environment.time_limit_secs = env.value("time_limit_secs", 10);

  const json flag = doc.value("flag", json::object());
  m.flag.value = flag.value("value", "");
  const std::string mode = flag.value("match_mode", "substring");
  if (mode == "substring") {
    m.flag.match_mode = FlagMatchMode::Substring;
  } else if (mode == "anchored_pattern") {
    m.flag.match_mode = FlagMatchMode::AnchoredPattern;
  } else {
    findings.push_back(where + ": unknown flag.match_mode '" + mode + "'");
  }
  m.flag.case_sensitive = flag.value("case_sensitive", true);

  if (doc.contains("max_interactions")) {
    if (doc["max_interactions"].is_number_integer()) {
      m.max_interactions = doc["max_interactions"].get<int>();
    } else {
      findings.push_back(where + ": max_interactions must be an integer");
    }
  }

  auto structural = validate_manifest(m);
  findings.insert(findings.end(), structural.begin(), structural.end());
  if (!findings.empty()) {
    throw ValidationError(std::move(findings));
  }
  return m;
}

}  // namespace

ChallengeManifest load_manifest(const std::filesystem::path& path) {
  return manifest_from_json(detail::parse_json_file(path), path);
}

std::vector<ChallengeManifest> load_registry(const std::filesystem::path& dir,
                                             const AttackChainCatalog* catalog) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec) || ec) {
    throw IoError("no such directory: " + dir.string());
  }

  // Documented layout: <dir>/<id>/manifest.json; bare *.json files directly
  // in the directory are accepted too.
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    } else if (entry.is_directory()) {
      auto manifest = entry.path() / "manifest.json";
      if (std::filesystem::exists(manifest)) {
        files.push_back(manifest);
      }
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<std::string> findings;
  std::vector<ChallengeManifest> manifests;
  std::map<std::string, std::filesystem::path> seen_ids;

  for (const auto& file : files) {
    try {
      ChallengeManifest m = load_manifest(file);
      auto [it, inserted] = seen_ids.emplace(m.id, file);
      if (!inserted) {
        findings.push_back("duplicate challenge id '" + m.id + "' in " +
                           it->second.string() + " and " + file.string());
        continue;
      }
      if (catalog != nullptr) {
        for (const std::string& ttp_id : m.ttp_ids) {
          if (catalog->find_ttp(ttp_id) == nullptr) {
            findings.push_back("challenge '" + m.id + "': unknown ttp_id '" +
                               ttp_id + "'");
          }
        }
      }
      manifests.push_back(std::move(m));
    } catch (const ValidationError& e) {
      findings.insert(findings.end(), e.findings().begin(),
                      e.findings().end());
    } catch (const ParseError& e) {
      findings.push_back(e.what());
    }
  }

  if (!findings.empty()) {
    throw ValidationError(std::move(findings));
  }

  std::sort(manifests.begin(), manifests.end(),
            [](const ChallengeManifest& a, const ChallengeManifest& b) {
              return a.id < b.id;
            });
  return manifests;
}

std::string to_canonical_json(const ChallengeManifest& m) {
  json doc;
  doc["id"] = m.id;
  doc["title"] = m.title;
  doc["difficulty"] = std::string(to_string(m.difficulty));
  doc["challenge_type"] = std::string(to_string(m.challenge_type));
  json clusters = json::array();
  for (SkillCluster c : skill_clusters_in_order()) {
    if (m.clusters.count(c)) clusters.push_back(std::string(to_string(c)));
  }
  doc["clusters"] = std::move(clusters);
  json phases = json::array();
  for (Phase p : phases_in_order()) {
    if (m.phases.count(p)) phases.push_back(std::string(to_string(p)));
  }
  doc["phases"] = std::move(phases);
  doc["ttp_ids"] = json(m.ttp_ids);
  doc["goal_prompt"] = m.goal_prompt;
  doc["environment"] = {
      {"kind", std::string(to_string(m.environment.kind))},
      {"image_or_script", m.environment.image_or_script},
      {"setup", m.environment.setup},
      {"teardown", m.environment.teardown},
      {"network_isolated", m.environment.network_isolated},
      {"time_limit_secs", m.environment.time_limit_secs},
  };
  doc["flag"] = {
      {"value", m.flag.value},
      {"match_mode", m.flag.match_mode == FlagMatchMode::Substring
                         ? "substring"
                         : "anchored_pattern"},
      {"case_sensitive", m.flag.case_sensitive},
  };
  if (m.max_interactions) {
    doc["max_interactions"] = *m.max_interactions;
  }
  return doc.dump();
}

}  // namespace chaineval
