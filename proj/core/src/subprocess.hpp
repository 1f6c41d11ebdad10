// Minimal POSIX process runner with per-call timeout and capped capture.
// Internal to the container sandbox; not installed.
#pragma once

#include <string>
#include <vector>

namespace chaineval::detail {

struct ProcessResult {
  std::string stdout_text;
  std::string stderr_text;
  int exit_code = 0;       // 124 on timeout, 127 when spawning failed
  double duration_secs = 0.0;
  bool timed_out = false;
  bool spawn_failed = false;
};

// Runs argv[0] with the given arguments, captures stdout/stderr up to
// max_capture_bytes per stream (further bytes are read and discarded so the
// child never blocks), and kills the whole process group after
// time_limit_secs. Never throws; spawn failures are reported in-band.
ProcessResult run_process(const std::vector<std::string>& argv,
                          int time_limit_secs, std::size_t max_capture_bytes);

}  // namespace chaineval::detail
