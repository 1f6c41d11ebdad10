#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "chaineval/episode.hpp"

namespace chaineval {

// The adapter could not reach or understand the model endpoint. The harness
// retries a configurable number of times, then marks the episode errored.
class AdapterTransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Behavioral contract for the model side of the loop. Adapters are stateless
// between episodes: everything they need is in the transcript and goal.
class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;

  virtual std::string id() const = 0;

  virtual ModelTurn next_action(const Transcript& history,
                                const GoalContext& goal) = 0;

  // False declares single-episode capacity; the suite runner then keeps at
  // most one episode in flight.
  virtual bool supports_concurrent_episodes() const { return true; }

  // Stable description of the adapter's configuration, hashed into each
  // episode's config fingerprint.
  virtual std::string config_fingerprint_material() const = 0;
};

// Deterministic replay adapter: emits a fixed sequence of turns, selected
// per challenge id when the script provides per-challenge sequences. Once a
// script is exhausted it keeps emitting command-less commentary, so episodes
// run to the interaction limit.
class ScriptedAdapter final : public ModelAdapter {
 public:
  // File format: {"id": ..., "default": [turn...],
  //               "challenges": {"<challenge_id>": [turn...]}}
  // where turn = {"commentary": str, "command": str?}.
  static ScriptedAdapter from_file(const std::filesystem::path& path);

  ScriptedAdapter(std::string id, std::vector<ModelTurn> turns);
  ScriptedAdapter(std::string id,
                  std::map<std::string, std::vector<ModelTurn>> per_challenge,
                  std::vector<ModelTurn> fallback = {});

  std::string id() const override { return id_; }
  ModelTurn next_action(const Transcript& history,
                        const GoalContext& goal) override;
  std::string config_fingerprint_material() const override;

 private:
  const std::vector<ModelTurn>& script_for(const std::string& challenge_id) const;

  std::string id_;
  std::map<std::string, std::vector<ModelTurn>> per_challenge_;
  std::vector<ModelTurn> fallback_;
};

struct HttpAdapterConfig {
  std::string base_url;  // e.g. "http://127.0.0.1:8080"
  std::string path = "/v1/chat/completions";
  std::string model;
  // Environment variable holding the bearer token; the value is read at
  // request time and never logged.
  std::string token_env = "CHAINEVAL_API_TOKEN";
  // Extra request fields (sampling settings etc.) merged into the payload
  // verbatim; the harness does not own sampling defaults.
  std::string extra_params_json = "{}";
  std::string system_prompt;  // empty selects the built-in instructions
  int retries = 1;            // re-attempts after the first transport failure
  int timeout_secs = 120;
};

// Generic chat-completion client. Sends the goal plus transcript as a
// message history; expects the reply's first fenced code block to hold the
// single shell command (a reply without one is a commentary-only turn).
class HttpAdapter final : public ModelAdapter {
 public:
  explicit HttpAdapter(HttpAdapterConfig config);

  std::string id() const override;
  ModelTurn next_action(const Transcript& history,
                        const GoalContext& goal) override;
  std::string config_fingerprint_material() const override;

  const HttpAdapterConfig& config() const { return config_; }

 private:
  HttpAdapterConfig config_;
};

// First fenced code block of a chat reply, if any; language tags like
// ```shell are skipped. Exposed for tests.
std::optional<std::string> extract_fenced_command(const std::string& reply);

}  // namespace chaineval
