#pragma once

#include <string>
#include <vector>

#include "chaineval/adapter.hpp"
#include "chaineval/challenge.hpp"
#include "chaineval/episode.hpp"
#include "chaineval/run_store.hpp"
#include "chaineval/sandbox.hpp"

namespace chaineval {

struct RunOptions {
  // Applied to manifests that do not pin their own limit.
  int default_max_interactions = 30;
  // Re-attempts after the first adapter transport failure.
  int adapter_retries = 1;
  int parallelism = 1;
  int attempts_per_challenge = 1;
};

// One full controller loop: per interaction, obtain a model turn, check the
// flag against the commentary, then the command string, then the executed
// command's output; stop at the first hit or after the interaction limit.
// Teardown always runs. Setup or transport failures yield an errored record
// rather than an exception.
EpisodeRecord run_episode(const ChallengeManifest& manifest,
                          ModelAdapter& adapter, SandboxExecutor& sandbox,
                          const RunOptions& options = {}, int attempt = 1);

struct SuiteResult {
  // Sorted by (challenge_id, attempt) regardless of execution interleaving.
  std::vector<EpisodeRecord> records;
  int errored = 0;
};

// attempts_per_challenge episodes per manifest, up to `parallelism` episodes
// in flight (one, when the adapter declares single-episode capacity).
// Records are appended to `store` as episodes complete; individual episode
// errors never abort the suite.
SuiteResult run_suite(const std::vector<ChallengeManifest>& manifests,
                      ModelAdapter& adapter, const SandboxFactory& make_sandbox,
                      const RunOptions& options = {},
                      RunStoreWriter* store = nullptr);

// Human-readable transcript dump, turn by turn, marking the flag-hit turn
// and the limit-reached case. Pure rendering.
std::string replay_transcript(const EpisodeRecord& record);

}  // namespace chaineval
