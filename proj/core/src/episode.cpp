#include "chaineval/episode.hpp"

#include "chaineval/errors.hpp"
#include "json_util.hpp"

namespace chaineval {

namespace {

using nlohmann::json;

json turn_to_json(const InteractionRecord& ir) {
  json item;
  item["turn"] = ir.turn_index;
  item["commentary"] = ir.model_turn.commentary;
  if (ir.model_turn.command) {
    item["command"] = *ir.model_turn.command;
  }
  if (ir.command_result) {
    const CommandResult& r = *ir.command_result;
    item["result"] = {
        {"stdout", r.stdout_text},   {"stderr", r.stderr_text},
        {"exit_code", r.exit_code},  {"duration_secs", r.duration_secs},
        {"timed_out", r.timed_out},
    };
  }
  if (ir.flag_hit_location) {
    item["flag_hit_location"] = std::string(to_string(*ir.flag_hit_location));
  }
  return item;
}

InteractionRecord turn_from_json(const json& item) {
  InteractionRecord ir;
  ir.turn_index = item.value("turn", 0);
  ir.model_turn.commentary = item.value("commentary", "");
  if (item.contains("command")) {
    ir.model_turn.command = item["command"].get<std::string>();
  }
  if (item.contains("result")) {
    const json& r = item["result"];
    CommandResult res;
    res.stdout_text = r.value("stdout", "");
    res.stderr_text = r.value("stderr", "");
    res.exit_code = r.value("exit_code", 0);
    res.duration_secs = r.value("duration_secs", 0.0);
    res.timed_out = r.value("timed_out", false);
    ir.command_result = std::move(res);
  }
  if (item.contains("flag_hit_location")) {
    ir.flag_hit_location = flag_hit_location_from_string(
        item["flag_hit_location"].get<std::string>());
  }
  return ir;
}

}  // namespace

std::string_view to_string(FlagHitLocation loc) {
  switch (loc) {
    case FlagHitLocation::ModelText:
      return "model_text";
    case FlagHitLocation::Command:
      return "command";
    case FlagHitLocation::CommandOutput:
      return "command_output";
  }
  return "unknown";
}

std::optional<FlagHitLocation> flag_hit_location_from_string(
    std::string_view name) {
  if (name == "model_text") return FlagHitLocation::ModelText;
  if (name == "command") return FlagHitLocation::Command;
  if (name == "command_output") return FlagHitLocation::CommandOutput;
  return std::nullopt;
}

std::string_view to_string(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::Succeeded:
      return "succeeded";
    case EpisodeStatus::Failed:
      return "failed";
    case EpisodeStatus::Errored:
      return "errored";
  }
  return "unknown";
}

std::optional<EpisodeStatus> episode_status_from_string(std::string_view name) {
  if (name == "succeeded") return EpisodeStatus::Succeeded;
  if (name == "failed") return EpisodeStatus::Failed;
  if (name == "errored") return EpisodeStatus::Errored;
  return std::nullopt;
}

std::string to_json_line(const EpisodeRecord& record) {
  json doc;
  doc["schema_version"] = record.schema_version;
  doc["challenge_id"] = record.challenge_id;
  doc["adapter_id"] = record.adapter_id;
  doc["attempt"] = record.attempt;
  doc["status"] = std::string(to_string(record.status));
  doc["success"] = record.success();
  if (!record.error.empty()) {
    doc["error"] = record.error;
  }
  doc["interactions_used"] = record.interactions_used;
  doc["wall_clock_secs"] = record.wall_clock_secs;
  if (record.flag_hit_location) {
    doc["flag_hit_location"] =
        std::string(to_string(*record.flag_hit_location));
  }
  json metrics;
  if (record.metrics.time_to_completion_secs) {
    metrics["time_to_completion_secs"] = *record.metrics.time_to_completion_secs;
  }
  metrics["prompt_size_chars"] = record.metrics.prompt_size_chars;
  metrics["targets_attempted"] = record.metrics.targets_attempted;
  metrics["targets_succeeded"] = record.metrics.targets_succeeded;
  doc["metrics"] = std::move(metrics);
  json transcript = json::array();
  for (const InteractionRecord& ir : record.transcript) {
    transcript.push_back(turn_to_json(ir));
  }
  doc["transcript"] = std::move(transcript);
  doc["started_at"] = record.started_at;
  doc["config_fingerprint"] = record.config_fingerprint;
  return doc.dump();
}

EpisodeRecord episode_from_json_line(const std::string& line) {
  const json doc = detail::parse_json_text(line, "episode record");
  EpisodeRecord record;
  record.schema_version = doc.value("schema_version", 0);
  if (record.schema_version != 1) {
    throw ValidationError("unsupported episode schema_version " +
                          std::to_string(record.schema_version));
  }
  record.challenge_id = doc.value("challenge_id", "");
  record.adapter_id = doc.value("adapter_id", "");
  record.attempt = doc.value("attempt", 1);
  auto status = episode_status_from_string(doc.value("status", ""));
  if (!status) {
    throw ValidationError("episode record with unknown status '" +
                          doc.value("status", "") + "'");
  }
  record.status = *status;
  record.error = doc.value("error", "");
  record.interactions_used = doc.value("interactions_used", 0);
  record.wall_clock_secs = doc.value("wall_clock_secs", 0.0);
  if (doc.contains("flag_hit_location")) {
    record.flag_hit_location = flag_hit_location_from_string(
        doc["flag_hit_location"].get<std::string>());
  }
  const json metrics = doc.value("metrics", json::object());
  if (metrics.contains("time_to_completion_secs")) {
    record.metrics.time_to_completion_secs =
        metrics["time_to_completion_secs"].get<double>();
  }
  record.metrics.prompt_size_chars = metrics.value("prompt_size_chars", 0);
  record.metrics.targets_attempted = metrics.value("targets_attempted", 0);
  record.metrics.targets_succeeded = metrics.value("targets_succeeded", 0);
  for (const json& item : doc.value("transcript", json::array())) {
    record.transcript.push_back(turn_from_json(item));
  }
  record.started_at = doc.value("started_at", "");
  record.config_fingerprint = doc.value("config_fingerprint", "");
  return record;
}

EpisodeRecord strip_timing(EpisodeRecord record) {
  record.wall_clock_secs = 0.0;
  record.started_at.clear();
  if (record.metrics.time_to_completion_secs) {
    record.metrics.time_to_completion_secs = 0.0;
  }
  for (InteractionRecord& ir : record.transcript) {
    if (ir.command_result) {
      ir.command_result->duration_secs = 0.0;
    }
  }
  return record;
}

}  // namespace chaineval
