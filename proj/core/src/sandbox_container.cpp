#include <unistd.h>

#include <atomic>
#include <memory>
#include <utility>

#include "chaineval/sandbox.hpp"
#include "subprocess.hpp"

namespace chaineval {

namespace {

CommandResult to_command_result(detail::ProcessResult p) {
  CommandResult r;
  r.stdout_text = std::move(p.stdout_text);
  r.stderr_text = std::move(p.stderr_text);
  r.exit_code = p.exit_code;
  r.duration_secs = p.duration_secs;
  r.timed_out = p.timed_out;
  return r;
}

}  // namespace

ContainerSandbox::ContainerSandbox(ContainerRuntimeConfig runtime,
                                   EnvironmentSpec env,
                                   std::string container_name,
                                   SandboxLimits limits)
    : runtime_(std::move(runtime)),
      env_(std::move(env)),
      container_name_(std::move(container_name)),
      limits_(limits) {}

CommandResult ContainerSandbox::run_runtime(
    const std::vector<std::string>& args, int time_limit_secs) {
  std::vector<std::string> argv;
  argv.reserve(args.size() + 1);
  argv.push_back(runtime_.runtime_binary);
  argv.insert(argv.end(), args.begin(), args.end());
  return to_command_result(detail::run_process(
      argv, time_limit_secs, limits_.output_truncate_bytes));
}

void ContainerSandbox::setup() {
  std::vector<std::string> run_args = {"run", "-d", "--name", container_name_};
  if (env_.network_isolated) {
    run_args.push_back("--network");
    run_args.push_back("none");
  }
  run_args.push_back(env_.image_or_script);
  run_args.push_back("sleep");
  run_args.push_back("infinity");

  CommandResult started = run_runtime(run_args, 60);
  if (started.exit_code != 0) {
    throw SandboxSetupError("container start failed (" +
                            std::to_string(started.exit_code) +
                            "): " + started.stderr_text);
  }
  started_ = true;

  for (const std::string& cmd : env_.setup) {
    CommandResult r = execute(cmd, env_.time_limit_secs);
    if (r.exit_code != 0) {
      throw SandboxSetupError("setup command failed (" +
                              std::to_string(r.exit_code) + "): " + cmd);
    }
  }
}

CommandResult ContainerSandbox::execute(const std::string& command,
                                        int time_limit_secs) {
  return run_runtime({"exec", container_name_, "/bin/sh", "-c", command},
                     time_limit_secs);
}

void ContainerSandbox::teardown() noexcept {
  if (!started_) return;
  try {
    for (const std::string& cmd : env_.teardown) {
      execute(cmd, env_.time_limit_secs);  // best effort, exit codes ignored
    }
    run_runtime({"rm", "-f", container_name_}, 60);
  } catch (...) {
  }
  started_ = false;
}

SandboxFactory container_sandbox_factory(ContainerRuntimeConfig runtime,
                                         SandboxLimits limits) {
  // Monotonic nonce keeps names unique across concurrent episodes in one
  // process.
  auto counter = std::make_shared<std::atomic<std::uint64_t>>(0);
  return [runtime, limits, counter](const ChallengeManifest& manifest) {
    const std::uint64_t nonce = counter->fetch_add(1);
    std::string name = "chaineval-" + manifest.id + "-" +
                       std::to_string(::getpid()) + "-" +
                       std::to_string(nonce);
    return std::make_unique<ContainerSandbox>(runtime, manifest.environment,
                                              std::move(name), limits);
  };
}

}  // namespace chaineval
