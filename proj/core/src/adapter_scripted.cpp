#include <utility>

#include "chaineval/adapter.hpp"
#include "chaineval/errors.hpp"
#include "json_util.hpp"

namespace chaineval {

namespace {

using nlohmann::json;

std::vector<ModelTurn> turns_from_json(const json& arr,
                                       const std::string& where) {
  if (!arr.is_array()) {
    throw ValidationError(where + ": turn list must be a JSON array");
  }
  std::vector<ModelTurn> turns;
  for (const json& item : arr) {
    ModelTurn turn;
    turn.commentary = item.value("commentary", "");
    if (item.contains("command")) {
      turn.command = item["command"].get<std::string>();
    }
    turns.push_back(std::move(turn));
  }
  return turns;
}

json turns_to_json(const std::vector<ModelTurn>& turns) {
  json arr = json::array();
  for (const ModelTurn& turn : turns) {
    json item;
    item["commentary"] = turn.commentary;
    if (turn.command) item["command"] = *turn.command;
    arr.push_back(std::move(item));
  }
  return arr;
}

}  // namespace

ScriptedAdapter ScriptedAdapter::from_file(const std::filesystem::path& path) {
  const json doc = detail::parse_json_file(path);
  if (!doc.is_object()) {
    throw ValidationError(path.string() + ": script must be a JSON object");
  }
  std::map<std::string, std::vector<ModelTurn>> per_challenge;
  const json challenge_scripts = doc.value("challenges", json::object());
  for (const auto& [challenge_id, turns] : challenge_scripts.items()) {
    per_challenge[challenge_id] =
        turns_from_json(turns, path.string() + " -> " + challenge_id);
  }
  std::vector<ModelTurn> fallback;
  if (doc.contains("default")) {
    fallback = turns_from_json(doc["default"], path.string() + " -> default");
  }
  return ScriptedAdapter(doc.value("id", "scripted"), std::move(per_challenge),
                         std::move(fallback));
}

ScriptedAdapter::ScriptedAdapter(std::string id, std::vector<ModelTurn> turns)
    : id_(std::move(id)), fallback_(std::move(turns)) {}

ScriptedAdapter::ScriptedAdapter(
    std::string id, std::map<std::string, std::vector<ModelTurn>> per_challenge,
    std::vector<ModelTurn> fallback)
    : id_(std::move(id)),
      per_challenge_(std::move(per_challenge)),
      fallback_(std::move(fallback)) {}

const std::vector<ModelTurn>& ScriptedAdapter::script_for(
    const std::string& challenge_id) const {
  auto it = per_challenge_.find(challenge_id);
  return it != per_challenge_.end() ? it->second : fallback_;
}

ModelTurn ScriptedAdapter::next_action(const Transcript& history,
                                       const GoalContext& goal) {
  const std::vector<ModelTurn>& script = script_for(goal.challenge_id);
  const std::size_t index = history.size();
  if (index < script.size()) {
    return script[index];
  }
  // Exhausted scripts idle until the interaction limit ends the episode.
  return ModelTurn{"(script exhausted; no further actions)", std::nullopt};
}

std::string ScriptedAdapter::config_fingerprint_material() const {
  json doc;
  doc["kind"] = "scripted";
  doc["id"] = id_;
  doc["default"] = turns_to_json(fallback_);
  json challenges = json::object();
  for (const auto& [challenge_id, turns] : per_challenge_) {
    challenges[challenge_id] = turns_to_json(turns);
  }
  doc["challenges"] = std::move(challenges);
  return doc.dump();
}

}  // namespace chaineval
