// Shared helpers for the test suites.
#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "chaineval/adapter.hpp"
#include "chaineval/catalog.hpp"
#include "chaineval/challenge.hpp"
#include "chaineval/sandbox.hpp"

namespace testutil {

namespace fs = std::filesystem;

// Unique scratch directory, removed on destruction.
struct TempDir {
  fs::path path;

  TempDir() {
    static std::atomic<std::uint64_t> counter{0};
    path = fs::temp_directory_path() /
           ("chaineval-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter.fetch_add(1)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  fs::path file(const std::string& name) const { return path / name; }
};

inline void write_text(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Small valid catalog used as a mutation baseline.
inline chaineval::AttackChainCatalog small_catalog() {
  using namespace chaineval;
  AttackChainCatalog c;
  c.version = "test-1";
  c.ttps = {
      {"T0001", "Scanning", {Phase::Reconnaissance}, "probe"},
      {"T0002", "Payload Dev", {Phase::Weaponization}, "build"},
      {"T0003", "Web Exploit", {Phase::Exploitation}, "exploit"},
      {"T0004",
       "Shell Use",
       {Phase::Exploitation, Phase::Installation},
       "shell"},
  };
  c.prevalence = {
      {"T0001", Phase::Reconnaissance, 3.0},
      {"T0002", Phase::Weaponization, 2.0},
      {"T0003", Phase::Exploitation, 1.0},
      {"T0004", Phase::Exploitation, 1.0},
  };
  c.archetypes = {
      {"alpha",
       "Alpha",
       {{Phase::Reconnaissance, "finding targets", "automation"}},
       {"T0001", "T0003"},
       {SelectionTag::Prevalence}},
      {"beta",
       "Beta",
       {{Phase::Weaponization, "building payloads", "generation"}},
       {"T0002", "T0004"},
       {SelectionTag::AiUplift}},
  };
  return c;
}

// In-memory manifest; no files needed unless the mock factory is used.
inline chaineval::ChallengeManifest make_manifest(
    const std::string& id, const std::string& flag = "FLAG{t}",
    chaineval::Difficulty difficulty = chaineval::Difficulty::Easy) {
  using namespace chaineval;
  ChallengeManifest m;
  m.id = id;
  m.title = "test challenge " + id;
  m.difficulty = difficulty;
  m.challenge_type = ChallengeType::VulnDetectExploit;
  m.clusters = {SkillCluster::VulnerabilityExploitation};
  m.phases = {Phase::Exploitation};
  m.goal_prompt = "retrieve the hidden value";
  m.environment.kind = SandboxKind::InProcessMock;
  m.environment.image_or_script = "fixtures/responses.json";
  m.flag.value = flag;
  return m;
}

// Table-driven sandbox living entirely in memory.
class TableSandbox final : public chaineval::SandboxExecutor {
 public:
  std::map<std::string, chaineval::CommandResult> table;
  chaineval::CommandResult fallback{"", "not found\n", 127, 0.0, false};
  bool fail_setup = false;
  int setup_calls = 0;
  int teardown_calls = 0;

  void setup() override {
    ++setup_calls;
    if (fail_setup) {
      throw chaineval::SandboxSetupError("induced setup failure");
    }
  }
  chaineval::CommandResult execute(const std::string& command,
                                   int /*limit*/) override {
    auto it = table.find(command);
    return it != table.end() ? it->second : fallback;
  }
  void teardown() noexcept override { ++teardown_calls; }
};

// Adapter driven by a callable; handy for failure injection.
class FnAdapter final : public chaineval::ModelAdapter {
 public:
  using Fn = std::function<chaineval::ModelTurn(
      const chaineval::Transcript&, const chaineval::GoalContext&)>;

  explicit FnAdapter(Fn fn, std::string id = "fn", bool concurrent = true)
      : fn_(std::move(fn)), id_(std::move(id)), concurrent_(concurrent) {}

  std::string id() const override { return id_; }
  chaineval::ModelTurn next_action(const chaineval::Transcript& history,
                                   const chaineval::GoalContext& goal) override {
    return fn_(history, goal);
  }
  bool supports_concurrent_episodes() const override { return concurrent_; }
  std::string config_fingerprint_material() const override {
    return "fn:" + id_;
  }

 private:
  Fn fn_;
  std::string id_;
  bool concurrent_;
};

inline std::string source_dir() {
#ifdef CHAINEVAL_SOURCE_DIR
  return CHAINEVAL_SOURCE_DIR;
#else
  return ".";
#endif
}

}  // namespace testutil
