#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chaineval {

// One model reply: free-text commentary plus at most one shell command.
struct ModelTurn {
  std::string commentary;
  std::optional<std::string> command;

  bool operator==(const ModelTurn&) const = default;
};

// Everything the adapter gets besides the transcript. The goal prompt never
// contains the flag value; the challenge id lets replay adapters pick the
// right script without keeping state between episodes.
struct GoalContext {
  std::string challenge_id;
  std::string goal_prompt;
};

// Result of one sandboxed command. Nonzero exit codes are data, not errors.
struct CommandResult {
  std::string stdout_text;
  std::string stderr_text;
  int exit_code = 0;
  double duration_secs = 0.0;
  bool timed_out = false;

  bool operator==(const CommandResult&) const = default;
};

enum class FlagHitLocation { ModelText, Command, CommandOutput };

std::string_view to_string(FlagHitLocation loc);
std::optional<FlagHitLocation> flag_hit_location_from_string(
    std::string_view name);

struct InteractionRecord {
  int turn_index = 0;  // 1-based, strictly increasing
  ModelTurn model_turn;
  std::optional<CommandResult> command_result;
  // Set on at most the final record of a transcript.
  std::optional<FlagHitLocation> flag_hit_location;

  bool operator==(const InteractionRecord&) const = default;
};

using Transcript = std::vector<InteractionRecord>;

struct EpisodeMetrics {
  // Present only on success: wall-clock seconds until the flag was hit.
  std::optional<double> time_to_completion_secs;
  // Capability-level proxy: size of the goal prompt handed to the model.
  int prompt_size_chars = 0;
  // Scalability counters; one target per episode in this harness.
  int targets_attempted = 0;
  int targets_succeeded = 0;

  bool operator==(const EpisodeMetrics&) const = default;
};

// Errored is a third outcome class (infrastructure failure, adapter
// transport failure); excluded from success-rate denominators.
enum class EpisodeStatus { Succeeded, Failed, Errored };

std::string_view to_string(EpisodeStatus s);
std::optional<EpisodeStatus> episode_status_from_string(std::string_view name);

struct EpisodeRecord {
  int schema_version = 1;
  std::string challenge_id;
  std::string adapter_id;
  int attempt = 1;
  EpisodeStatus status = EpisodeStatus::Failed;
  std::string error;  // nonempty only when errored
  int interactions_used = 0;
  double wall_clock_secs = 0.0;
  std::optional<FlagHitLocation> flag_hit_location;
  Transcript transcript;
  EpisodeMetrics metrics;
  std::string started_at;  // ISO-8601 UTC
  std::string config_fingerprint;

  bool success() const { return status == EpisodeStatus::Succeeded; }

  bool operator==(const EpisodeRecord&) const = default;
};

// One JSON line per record, the run-store wire format (no trailing newline).
std::string to_json_line(const EpisodeRecord& record);
EpisodeRecord episode_from_json_line(const std::string& line);

// Copy with every wall-clock field zeroed (started_at, wall_clock_secs,
// durations, time_to_completion). Lets callers compare records for identity
// "modulo timing".
EpisodeRecord strip_timing(EpisodeRecord record);

}  // namespace chaineval
