// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "edaflow/error.hpp"

namespace edaflow::exec {

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& cwd,
                          const std::map<std::string, std::string>& env,
                          std::chrono::milliseconds timeout) {
  if (argv.empty()) raise(ErrCode::BackendUnavailable, "empty command line");

  int fds[2];
  if (pipe(fds) != 0) raise(ErrCode::ExecutorFailure, "pipe() failed");

  std::vector<std::string> env_strings;
  env_strings.reserve(env.size());
  for (const auto& [k, v] : env) env_strings.push_back(k + "=" + v);

  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    raise(ErrCode::ExecutorFailure, "fork() failed");
  }

  if (pid == 0) {
    setpgid(0, 0);  // own process group, so timeout can kill the whole tree
    close(fds[0]);
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    close(fds[1]);
    if (chdir(cwd.c_str()) != 0) _exit(127);

    std::vector<char*> cargv;
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    std::vector<char*> cenv;
    for (const auto& e : env_strings) cenv.push_back(const_cast<char*>(e.c_str()));
    cenv.push_back(nullptr);
    execve(cargv[0], cargv.data(), cenv.data());
    _exit(127);
  }

  close(fds[1]);
  ProcessResult result;
  auto deadline = std::chrono::steady_clock::now() + timeout;
  char buf[4096];
  bool open = true;
  while (open) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      result.timed_out = true;
      kill(-pid, SIGKILL);
    }
    struct pollfd pfd{fds[0], POLLIN, 0};
    int pr = poll(&pfd, 1, result.timed_out ? 100 : static_cast<int>(std::min<long long>(
                                                        left.count(), 1000)));
    if (pr > 0) {
      ssize_t n = read(fds[0], buf, sizeof(buf));
      if (n > 0)
        result.output.append(buf, static_cast<size_t>(n));
      else
        open = false;  // EOF or error: child side closed
    } else if (pr == 0 && result.timed_out) {
      open = false;  // killed, stop draining
    }
  }
  close(fds[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  if (result.timed_out)
    result.exit_code = -1;
  else if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status))
    result.exit_code = 128 + WTERMSIG(status);
  return result;
}

}  // namespace edaflow::exec
