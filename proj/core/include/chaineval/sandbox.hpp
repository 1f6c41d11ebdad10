#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "chaineval/challenge.hpp"
#include "chaineval/episode.hpp"

namespace chaineval {

// Setup could not bring the environment up. Episodes hitting this are marked
// errored, not failed.
class SandboxSetupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One sandbox instance serves one episode. execute() never throws for
// nonzero exit codes; stdout/stderr are captured bit-exactly up to the
// configured truncation length.
class SandboxExecutor {
 public:
  virtual ~SandboxExecutor() = default;

  // Runs the environment's setup commands. Throws SandboxSetupError when any
  // of them fails.
  virtual void setup() = 0;

  virtual CommandResult execute(const std::string& command,
                                int time_limit_secs) = 0;

  // Best-effort; must be safe to call after a failed setup.
  virtual void teardown() noexcept = 0;
};

struct SandboxLimits {
  // Per-stream capture cap. Long outputs are a real-world condition, but
  // unbounded capture risks runaway transcripts.
  std::size_t output_truncate_bytes = 64 * 1024;
};

// Table-driven sandbox: a fixture file maps exact command strings to canned
// results; unknown commands get the fixture's default response. Exists so
// the full harness + scoring path runs with no container runtime installed.
class MockSandbox final : public SandboxExecutor {
 public:
  MockSandbox(std::filesystem::path fixture_path, EnvironmentSpec env,
              SandboxLimits limits = {});

  void setup() override;
  CommandResult execute(const std::string& command,
                        int time_limit_secs) override;
  void teardown() noexcept override;

 private:
  CommandResult lookup(const std::string& command) const;
  void ensure_loaded();

  std::filesystem::path fixture_path_;
  EnvironmentSpec env_;
  SandboxLimits limits_;
  std::vector<std::pair<std::string, CommandResult>> responses_;
  CommandResult default_response_;
  bool loaded_ = false;
};

struct ContainerRuntimeConfig {
  // OCI-compatible runtime binary; anything with docker-style run/exec/rm.
  std::string runtime_binary = "docker";
};

// Shells out to an OCI-compatible runtime: `run -d` a per-episode container
// at setup, `exec` one command per interaction, `rm -f` at teardown.
// Honors EnvironmentSpec.network_isolated via `--network none`.
class ContainerSandbox final : public SandboxExecutor {
 public:
  ContainerSandbox(ContainerRuntimeConfig runtime, EnvironmentSpec env,
                   std::string container_name, SandboxLimits limits = {});

  void setup() override;
  CommandResult execute(const std::string& command,
                        int time_limit_secs) override;
  void teardown() noexcept override;

  const std::string& container_name() const { return container_name_; }

 private:
  CommandResult run_runtime(const std::vector<std::string>& args,
                            int time_limit_secs);

  ContainerRuntimeConfig runtime_;
  EnvironmentSpec env_;
  std::string container_name_;
  SandboxLimits limits_;
  bool started_ = false;
};

// Builds a fresh sandbox for one episode of the given challenge.
using SandboxFactory =
    std::function<std::unique_ptr<SandboxExecutor>(const ChallengeManifest&)>;

// Resolves EnvironmentSpec.image_or_script relative to the manifest's
// directory and returns a MockSandbox.
SandboxFactory mock_sandbox_factory(SandboxLimits limits = {});

// Container names are derived from the challenge id plus a per-call nonce.
SandboxFactory container_sandbox_factory(ContainerRuntimeConfig runtime,
                                         SandboxLimits limits = {});

}  // namespace chaineval
