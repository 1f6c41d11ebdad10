#include "subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

namespace chaineval::detail {

namespace {

void append_capped(std::string& sink, const char* data, ssize_t len,
                   std::size_t cap) {
  if (sink.size() >= cap || len <= 0) return;
  const std::size_t room = cap - sink.size();
  sink.append(data, std::min<std::size_t>(room, static_cast<std::size_t>(len)));
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv,
                          int time_limit_secs,
                          std::size_t max_capture_bytes) {
  ProcessResult result;
  if (argv.empty()) {
    result.spawn_failed = true;
    result.exit_code = 127;
    result.stderr_text = "empty argv";
    return result;
  }

  int out_pipe[2] = {-1, -1};
  int err_pipe[2] = {-1, -1};
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
    result.spawn_failed = true;
    result.exit_code = 127;
    result.stderr_text = std::strerror(errno);
    return result;
  }

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0) {
    result.spawn_failed = true;
    result.exit_code = 127;
    result.stderr_text = std::strerror(errno);
    for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) {
      close(fd);
    }
    return result;
  }

  if (pid == 0) {
    // Child: own process group so a timeout kill reaps grandchildren too.
    setpgid(0, 0);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) {
      close(fd);
    }
    std::vector<char*> c_argv;
    c_argv.reserve(argv.size() + 1);
    for (const std::string& arg : argv) {
      c_argv.push_back(const_cast<char*>(arg.c_str()));
    }
    c_argv.push_back(nullptr);
    execvp(c_argv[0], c_argv.data());
    _exit(127);
  }

  close(out_pipe[1]);
  close(err_pipe[1]);

  const auto deadline =
      start + std::chrono::seconds(time_limit_secs > 0 ? time_limit_secs : 1);
  bool out_open = true;
  bool err_open = true;
  char buf[4096];

  while (out_open || err_open) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      result.timed_out = true;
      kill(-pid, SIGKILL);
      break;
    }
    const int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count());

    struct pollfd fds[2];
    nfds_t nfds = 0;
    if (out_open) fds[nfds++] = {out_pipe[0], POLLIN, 0};
    if (err_open) fds[nfds++] = {err_pipe[0], POLLIN, 0};

    const int rc = poll(fds, nfds, std::min(wait_ms, 250));
    if (rc < 0 && errno != EINTR) break;
    if (rc <= 0) continue;

    for (nfds_t i = 0; i < nfds; ++i) {
      if (!(fds[i].revents & (POLLIN | POLLHUP))) continue;
      const bool is_out = fds[i].fd == out_pipe[0];
      const ssize_t n = read(fds[i].fd, buf, sizeof(buf));
      if (n > 0) {
        append_capped(is_out ? result.stdout_text : result.stderr_text, buf, n,
                      max_capture_bytes);
      } else {
        if (is_out) {
          out_open = false;
        } else {
          err_open = false;
        }
      }
    }
  }

  // Drain whatever arrived between the kill and pipe closure.
  for (auto [fd, is_out] :
       {std::pair{out_pipe[0], true}, std::pair{err_pipe[0], false}}) {
    fcntl(fd, F_SETFL, O_NONBLOCK);
    ssize_t n;
    while ((n = read(fd, buf, sizeof(buf))) > 0) {
      append_capped(is_out ? result.stdout_text : result.stderr_text, buf, n,
                    max_capture_bytes);
    }
    close(fd);
  }

  int status = 0;
  waitpid(pid, &status, 0);
  result.duration_secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (result.timed_out) {
    result.exit_code = 124;
  } else if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
    result.spawn_failed = result.exit_code == 127;
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

}  // namespace chaineval::detail
