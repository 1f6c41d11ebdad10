#include <utility>

#include "chaineval/errors.hpp"
#include "chaineval/sandbox.hpp"
#include "json_util.hpp"

namespace chaineval {

namespace {

using nlohmann::json;

CommandResult result_from_fixture(const json& entry, std::size_t cap) {
  CommandResult r;
  r.stdout_text = entry.value("stdout", "");
  r.stderr_text = entry.value("stderr", "");
  r.timed_out = entry.value("timed_out", false);
  r.exit_code = entry.value("exit_code", r.timed_out ? 124 : 0);
  r.duration_secs = entry.value("duration_secs", 0.0);
  if (r.stdout_text.size() > cap) r.stdout_text.resize(cap);
  if (r.stderr_text.size() > cap) r.stderr_text.resize(cap);
  return r;
}

}  // namespace

MockSandbox::MockSandbox(std::filesystem::path fixture_path,
                         EnvironmentSpec env, SandboxLimits limits)
    : fixture_path_(std::move(fixture_path)),
      env_(std::move(env)),
      limits_(limits) {
  default_response_.stderr_text = "sh: command not found\n";
  default_response_.exit_code = 127;
}

void MockSandbox::ensure_loaded() {
  if (loaded_) return;
  json doc;
  try {
    doc = detail::parse_json_file(fixture_path_);
  } catch (const std::exception& e) {
    throw SandboxSetupError(std::string("mock fixture unavailable: ") +
                            e.what());
  }
  if (doc.contains("default")) {
    default_response_ =
        result_from_fixture(doc["default"], limits_.output_truncate_bytes);
  }
  for (const json& entry : doc.value("responses", json::array())) {
    responses_.emplace_back(
        entry.value("command", ""),
        result_from_fixture(entry, limits_.output_truncate_bytes));
  }
  loaded_ = true;
}

void MockSandbox::setup() {
  ensure_loaded();
  for (const std::string& cmd : env_.setup) {
    CommandResult r = lookup(cmd);
    if (r.exit_code != 0) {
      throw SandboxSetupError("setup command failed (" +
                              std::to_string(r.exit_code) + "): " + cmd);
    }
  }
}

CommandResult MockSandbox::lookup(const std::string& command) const {
  for (const auto& [cmd, result] : responses_) {
    if (cmd == command) return result;
  }
  return default_response_;
}

CommandResult MockSandbox::execute(const std::string& command,
                                   int /*time_limit_secs*/) {
  return lookup(command);
}

void MockSandbox::teardown() noexcept {
  // Table-driven teardown commands carry no state; nothing to undo.
}

SandboxFactory mock_sandbox_factory(SandboxLimits limits) {
  return [limits](const ChallengeManifest& manifest) {
    std::filesystem::path fixture = manifest.environment.image_or_script;
    if (fixture.is_relative() && !manifest.base_dir().empty()) {
      fixture = manifest.base_dir() / fixture;
    }
    return std::make_unique<MockSandbox>(fixture, manifest.environment,
                                         limits);
  };
}

}  // namespace chaineval
