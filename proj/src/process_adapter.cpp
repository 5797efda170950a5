/*
 * Copyright 2026 The QASE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <errno.h>
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>
#include <mutex>
#include <thread>

#include "qase/adapter.hpp"
#include "qase/error.hpp"

namespace qase {
namespace {

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

[[noreturn]] void child_fail(int report_fd) {
  const int err = errno;
  [[maybe_unused]] ssize_t n = ::write(report_fd, &err, sizeof(err));
  ::_exit(127);
}

}  // namespace

std::vector<std::string> split_command_line(const std::string& command_line) {
  std::vector<std::string> words;
  std::string current;
  bool in_word = false;
  char quote = 0;
  for (char c : command_line) {
    if (quote != 0) {
      if (c == quote) {
        quote = 0;
      } else {
        current.push_back(c);
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
      in_word = true;
    } else if (c == ' ' || c == '\t') {
      if (in_word) words.push_back(std::move(current));
      current.clear();
      in_word = false;
    } else {
      current.push_back(c);
      in_word = true;
    }
  }
  if (in_word) words.push_back(std::move(current));
  return words;
}

std::unique_ptr<ProcessAdapter> ProcessAdapter::spawn(const std::string& command, const std::vector<std::string>& args,
                                                      const std::filesystem::path& working_dir, Options options) {
  ignore_sigpipe_once();
  int to_child[2];
  int from_child[2];
  int report[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) throw ProtocolError("pipe: " + std::string(std::strerror(errno)));
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw ProtocolError("pipe: " + std::string(std::strerror(errno)));
  }
  if (::pipe2(report, O_CLOEXEC) != 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    throw ProtocolError("pipe: " + std::string(std::strerror(errno)));
  }

  std::vector<std::string> argv_storage;
  argv_storage.push_back(command);
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  argv.push_back(nullptr);
  const std::string dir = working_dir.string();

  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1], report[0], report[1]}) ::close(fd);
    throw ProtocolError("fork: " + std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    // Only async-signal-safe calls from here to exec.
    ::signal(SIGPIPE, SIG_DFL);
    if (::dup2(to_child[0], STDIN_FILENO) < 0) child_fail(report[1]);
    if (::dup2(from_child[1], STDOUT_FILENO) < 0) child_fail(report[1]);
    if (!dir.empty() && ::chdir(dir.c_str()) != 0) child_fail(report[1]);
    ::execvp(argv[0], argv.data());
    child_fail(report[1]);
  }

  ::close(to_child[0]);
  ::close(from_child[1]);
  ::close(report[1]);

  std::unique_ptr<ProcessAdapter> adapter(new ProcessAdapter());
  adapter->pid_ = pid;
  adapter->to_child_ = to_child[1];
  adapter->from_child_ = from_child[0];
  adapter->options_ = options;
  adapter->description_ = command;
  for (const auto& a : args) adapter->description_ += " " + a;

  int child_errno = 0;
  ssize_t n;
  do {
    n = ::read(report[0], &child_errno, sizeof(child_errno));
  } while (n < 0 && errno == EINTR);
  ::close(report[0]);
  if (n == sizeof(child_errno)) {
    adapter->try_reap(std::chrono::milliseconds(1000));
    adapter->exited_ = true;
    throw ProtocolError("cannot spawn " + command + ": " + std::strerror(child_errno));
  }

  std::optional<std::string> first;
  try {
    first = adapter->read_line(options.handshake_timeout);
  } catch (const ProtocolError&) {
    adapter->kill_and_reap();
    throw ProtocolError("adapter " + command + " exited before the handshake");
  }
  if (!first) {
    adapter->kill_and_reap();
    throw ProtocolError("adapter " + command + ": handshake timeout");
  }
  try {
    check_handshake(*first);
  } catch (const ProtocolError&) {
    adapter->kill_and_reap();
    throw;
  }
  return adapter;
}

ProcessAdapter::~ProcessAdapter() { shutdown(); }

std::optional<std::string> ProcessAdapter::read_line(std::chrono::milliseconds timeout) {
  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + timeout;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      return line;
    }
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now());
    if (remaining.count() <= 0) return std::nullopt;
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError("poll: " + std::string(std::strerror(errno)));
    }
    if (ready == 0) return std::nullopt;
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw ProtocolError("read from adapter: " + std::string(std::strerror(errno)));
    }
    if (n == 0) {
      try_reap(std::chrono::milliseconds(200));
      throw ProtocolError("adapter exited" +
                          (exit_status_ ? " (status " + std::to_string(*exit_status_) + ")" : std::string()));
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void ProcessAdapter::write_line(const std::string& line) {
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError("adapter exited (write failed: " + std::string(std::strerror(errno)) + ")");
    }
    off += static_cast<std::size_t>(n);
  }
}

InferenceResponse ProcessAdapter::infer(const InferenceRequest& request) {
  std::lock_guard lock(mutex_);
  if (!running()) throw ProtocolError("adapter is not running");
  write_line(encode_request(request));
  const std::optional<std::string> line = read_line(options_.request_timeout);
  if (!line) {
    kill_and_reap();
    throw ProtocolError("request " + request.request_id + " timed out after " +
                        std::to_string(options_.request_timeout.count()) + " ms");
  }
  InferenceResponse response = decode_response(*line);
  if (response.request_id != request.request_id) {
    throw ProtocolError("response for " + response.request_id + " while waiting for " + request.request_id);
  }
  return response;
}

bool ProcessAdapter::try_reap(std::chrono::milliseconds wait) {
  if (exited_ || pid_ <= 0) return true;
  const auto deadline = std::chrono::steady_clock::now() + wait;
  for (;;) {
    int status = 0;
    const pid_t r = ::waitpid(pid_, &status, WNOHANG);
    if (r == pid_) {
      exited_ = true;
      exit_status_ = status;
      return true;
    }
    if (r < 0 && errno != EINTR) {
      exited_ = true;
      return true;
    }
    if (std::chrono::steady_clock::now() >= deadline) return false;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
}

void ProcessAdapter::kill_and_reap() {
  if (!exited_ && pid_ > 0) {
    ::kill(pid_, SIGKILL);
    try_reap(std::chrono::milliseconds(5000));
  }
  close_fd(to_child_);
  close_fd(from_child_);
}

void ProcessAdapter::shutdown() {
  std::lock_guard lock(mutex_);
  if (!exited_ && to_child_ >= 0) {
    try {
      write_line(shutdown_line());
    } catch (const ProtocolError&) {
    }
  }
  close_fd(to_child_);
  if (!try_reap(options_.shutdown_grace)) kill_and_reap();
  close_fd(from_child_);
}

}  // namespace qase
