#include "chaineval/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <sstream>
#include <thread>

#include "chaineval/errors.hpp"
#include "chaineval/fingerprint.hpp"
#include "json_util.hpp"

namespace chaineval {

namespace {

std::string episode_fingerprint(const ChallengeManifest& manifest,
                                const ModelAdapter& adapter) {
  return fingerprint_hex(to_canonical_json(manifest) + "\n" +
                         adapter.config_fingerprint_material());
}

std::optional<FlagHitLocation> check_turn(const FlagSpec& flag,
                                          const ModelTurn& turn) {
  if (check_flag(flag, turn.commentary)) {
    return FlagHitLocation::ModelText;
  }
  if (turn.command && check_flag(flag, *turn.command)) {
    return FlagHitLocation::Command;
  }
  return std::nullopt;
}

}  // namespace

EpisodeRecord run_episode(const ChallengeManifest& manifest,
                          ModelAdapter& adapter, SandboxExecutor& sandbox,
                          const RunOptions& options, int attempt) {
  EpisodeRecord record;
  record.challenge_id = manifest.id;
  record.adapter_id = adapter.id();
  record.attempt = attempt;
  record.started_at = detail::now_iso8601_utc();
  record.config_fingerprint = episode_fingerprint(manifest, adapter);
  record.metrics.prompt_size_chars =
      static_cast<int>(manifest.goal_prompt.size());
  record.metrics.targets_attempted = 1;

  const auto start = std::chrono::steady_clock::now();
  const auto finish = [&](EpisodeStatus status) {
    record.status = status;
    record.wall_clock_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (status == EpisodeStatus::Succeeded) {
      record.metrics.time_to_completion_secs = record.wall_clock_secs;
      record.metrics.targets_succeeded = 1;
    }
    sandbox.teardown();
    return record;
  };

  // The prompt reaching the adapter must never leak the flag; manifests are
  // validated on load, this guards in-memory construction paths.
  if (check_flag(manifest.flag, manifest.goal_prompt)) {
    record.error = "goal_prompt leaks the flag value";
    return finish(EpisodeStatus::Errored);
  }

  try {
    sandbox.setup();
  } catch (const std::exception& e) {
    record.error = std::string("sandbox setup failed: ") + e.what();
    return finish(EpisodeStatus::Errored);
  }

  const GoalContext goal{manifest.id, manifest.goal_prompt};
  const int limit =
      manifest.max_interactions_or(options.default_max_interactions);

  for (int turn_index = 1; turn_index <= limit; ++turn_index) {
    ModelTurn turn;
    bool obtained = false;
    for (int transport_try = 0;
         transport_try <= options.adapter_retries && !obtained;
         ++transport_try) {
      try {
        turn = adapter.next_action(record.transcript, goal);
        obtained = true;
      } catch (const AdapterTransportError& e) {
        record.error = e.what();
      }
    }
    if (!obtained) {
      return finish(EpisodeStatus::Errored);
    }
    record.error.clear();

    InteractionRecord ir;
    ir.turn_index = turn_index;
    ir.model_turn = turn;

    // Check order: model text, then the command string, then its output.
    // First hit wins; a hit before execution means the command never runs.
    std::optional<FlagHitLocation> hit = check_turn(manifest.flag, turn);
    if (!hit && turn.command) {
      CommandResult result =
          sandbox.execute(*turn.command, manifest.environment.time_limit_secs);
      if (check_flag(manifest.flag,
                     result.stdout_text + result.stderr_text)) {
        hit = FlagHitLocation::CommandOutput;
      }
      ir.command_result = std::move(result);
    }
    ir.flag_hit_location = hit;
    record.transcript.push_back(std::move(ir));
    record.interactions_used = turn_index;

    if (hit) {
      record.flag_hit_location = hit;
      return finish(EpisodeStatus::Succeeded);
    }
  }

  return finish(EpisodeStatus::Failed);
}

SuiteResult run_suite(const std::vector<ChallengeManifest>& manifests,
                      ModelAdapter& adapter, const SandboxFactory& make_sandbox,
                      const RunOptions& options, RunStoreWriter* store) {
  struct Task {
    const ChallengeManifest* manifest;
    int attempt;
  };
  std::vector<Task> tasks;
  const int attempts = std::max(1, options.attempts_per_challenge);
  for (const ChallengeManifest& manifest : manifests) {
    for (int attempt = 1; attempt <= attempts; ++attempt) {
      tasks.push_back({&manifest, attempt});
    }
  }

  std::vector<EpisodeRecord> records(tasks.size());
  std::atomic<std::size_t> next_task{0};
  std::mutex store_mutex;

  const auto worker = [&]() {
    for (;;) {
      const std::size_t index = next_task.fetch_add(1);
      if (index >= tasks.size()) return;
      const Task& task = tasks[index];
      EpisodeRecord record;
      try {
        auto sandbox = make_sandbox(*task.manifest);
        record = run_episode(*task.manifest, adapter, *sandbox, options,
                             task.attempt);
      } catch (const std::exception& e) {
        // Episode failures never abort the suite.
        record.challenge_id = task.manifest->id;
        record.adapter_id = adapter.id();
        record.attempt = task.attempt;
        record.status = EpisodeStatus::Errored;
        record.error = e.what();
        record.started_at = detail::now_iso8601_utc();
      }
      if (store != nullptr) {
        std::lock_guard<std::mutex> lock(store_mutex);
        store->append(record);
      }
      records[index] = std::move(record);
    }
  };

  int parallelism = std::max(1, options.parallelism);
  if (!adapter.supports_concurrent_episodes()) {
    parallelism = 1;  // adapter declared single-episode capacity
  }
  parallelism = static_cast<int>(
      std::min<std::size_t>(parallelism, std::max<std::size_t>(tasks.size(), 1)));

  if (parallelism == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(parallelism);
    for (int i = 0; i < parallelism; ++i) {
      pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }

  SuiteResult result;
  result.records = std::move(records);
  std::sort(result.records.begin(), result.records.end(),
            [](const EpisodeRecord& a, const EpisodeRecord& b) {
              return std::tie(a.challenge_id, a.attempt) <
                     std::tie(b.challenge_id, b.attempt);
            });
  for (const EpisodeRecord& record : result.records) {
    if (record.status == EpisodeStatus::Errored) {
      ++result.errored;
    }
  }
  return result;
}

std::string replay_transcript(const EpisodeRecord& record) {
  std::ostringstream out;
  out << "=== episode " << record.challenge_id
      << " adapter=" << record.adapter_id << " attempt=" << record.attempt
      << " status=" << to_string(record.status) << " ===\n";
  if (!record.error.empty()) {
    out << "error: " << record.error << "\n";
  }

  const auto indent_block = [&](const char* tag, const std::string& text) {
    if (text.empty()) return;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      out << "  " << tag << " | " << line << "\n";
    }
  };

  for (const InteractionRecord& ir : record.transcript) {
    out << "turn " << ir.turn_index << ":\n";
    indent_block("model", ir.model_turn.commentary);
    if (ir.model_turn.command) {
      out << "  cmd   > " << *ir.model_turn.command << "\n";
    }
    if (ir.command_result) {
      const CommandResult& r = *ir.command_result;
      out << "  exit " << r.exit_code << (r.timed_out ? " (timed out)" : "")
          << "\n";
      indent_block("out  ", r.stdout_text);
      indent_block("err  ", r.stderr_text);
    }
    if (ir.flag_hit_location) {
      out << "  ** flag hit: " << to_string(*ir.flag_hit_location) << " **\n";
    }
  }

  if (record.status == EpisodeStatus::Failed) {
    out << "-- interaction limit reached (" << record.interactions_used
        << ") --\n";
  }
  return out.str();
}

}  // namespace chaineval
