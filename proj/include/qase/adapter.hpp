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

#pragma once

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qase/manifest.hpp"
#include "qase/protocol.hpp"
#include "qase/resources.hpp"

namespace qase {

// A model reachable for inference. One request is in flight at a time.
class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;

  // Model-level failures come back as a response with `error` set; transport
  // failures (timeout, child exit, malformed line) throw ProtocolError.
  virtual InferenceResponse infer(const InferenceRequest& request) = 0;

  // Operating-system process serving the model, when there is one.
  virtual std::optional<pid_t> pid() const { return std::nullopt; }

  // Stand-in resource series for adapters without a process of their own.
  virtual std::optional<ResourceSeries> simulated_resources() const { return std::nullopt; }

  // Called with every dataset before its requests are sent. Out-of-process
  // adapters ignore it; the stub uses it to know ground truth.
  virtual void bind_dataset(const Manifest&) {}

  virtual std::string describe() const = 0;
  virtual void shutdown() {}
};

using AdapterFactory = std::function<std::unique_ptr<ModelAdapter>()>;

// Child process speaking the adapter wire protocol (see protocol.hpp).
class ProcessAdapter final : public ModelAdapter {
 public:
  struct Options {
    std::chrono::milliseconds handshake_timeout{10'000};
    std::chrono::milliseconds request_timeout{30'000};
    std::chrono::milliseconds shutdown_grace{2'000};
  };

  ~ProcessAdapter() override;
  ProcessAdapter(const ProcessAdapter&) = delete;
  ProcessAdapter& operator=(const ProcessAdapter&) = delete;

  // Starts `command` with `args` in `working_dir` (empty: inherit) and waits
  // for the handshake. Throws ProtocolError on spawn failure, handshake
  // timeout, or a wrong first line; the child is killed in the latter cases.
  static std::unique_ptr<ProcessAdapter> spawn(const std::string& command, const std::vector<std::string>& args,
                                               const std::filesystem::path& working_dir, Options options);
  static std::unique_ptr<ProcessAdapter> spawn(const std::string& command, const std::vector<std::string>& args,
                                               const std::filesystem::path& working_dir = {}) {
    return spawn(command, args, working_dir, Options{});
  }

  InferenceResponse infer(const InferenceRequest& request) override;
  std::optional<pid_t> pid() const override { return pid_; }
  std::string describe() const override { return description_; }

  // Sends the shutdown command and reaps the child, killing it after the
  // grace period. Idempotent.
  void shutdown() override;

  bool running() const { return pid_ > 0 && !exited_; }
  // Exit status from waitpid once the child has been reaped.
  std::optional<int> exit_status() const { return exit_status_; }

 private:
  ProcessAdapter() = default;

  // Returns the next line, or nullopt on timeout. Throws ProtocolError on EOF.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);
  void write_line(const std::string& line);
  void kill_and_reap();
  bool try_reap(std::chrono::milliseconds wait);

  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  bool exited_ = false;
  std::optional<int> exit_status_;
  std::string buffer_;
  std::string description_;
  Options options_;
  std::mutex mutex_;
};

// Splits an adapter command line on whitespace; single and double quotes
// group words.
std::vector<std::string> split_command_line(const std::string& command_line);

// Deterministic in-process model used by tests and the demo. For each bound
// dataset and group it answers correctly for exactly round(accuracy * n)
// entries, chosen by a permutation seeded from (seed, group), so the correct
// set at a lower accuracy is a subset of the one at a higher accuracy.
struct StubConfig {
  enum class Evidence { kFull, kNone, kMismatch };

  double default_accuracy = 0.95;
  std::map<std::string, double> group_accuracy;
  // Keyed by level ("blur_maximal") or transform kind ("blur"); level wins.
  std::map<std::string, double> transform_accuracy;
  Evidence evidence = Evidence::kFull;
  double cpu_percent = 12.0;
  std::int64_t rss_bytes = std::int64_t{96} << 20;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const StubConfig& c);
StubConfig stub_config_from_json(const nlohmann::json& j);

class StubAdapter final : public ModelAdapter {
 public:
  explicit StubAdapter(StubConfig config) : config_(std::move(config)) {}

  InferenceResponse infer(const InferenceRequest& request) override;
  std::optional<ResourceSeries> simulated_resources() const override;
  void bind_dataset(const Manifest& manifest) override;
  std::string describe() const override { return "stub"; }

  const StubConfig& config() const { return config_; }

 private:
  struct Truth {
    std::string label;
    bool correct = true;
  };

  StubConfig config_;
  std::map<std::string, Truth> truth_;  // by normalized absolute input path
  std::int64_t served_ = 0;
};

// Absolute, lexically normalized form used to key inputs.
std::string normalized_input_path(const std::filesystem::path& p);

}  // namespace qase
