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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "qase/metrics.hpp"

namespace qase {

struct ResourceSample {
  double timestamp_ms = 0.0;  // since monitoring started
  double cpu_percent = 0.0;   // all threads; may exceed 100 on several cores
  std::int64_t rss_bytes = 0;
};

struct ResourceSeries {
  std::vector<ResourceSample> samples;
  int sample_interval_ms = 100;
  // The process disappeared before monitoring was stopped.
  bool truncated = false;

  bool empty() const { return samples.empty(); }
  double cpu_max_percent() const;
  double cpu_mean_percent() const;
  std::int64_t memory_peak_bytes() const;

  // cpu.max_percent, cpu.mean_percent, memory.peak_bytes,
  // resource.sample_count. Only the count is emitted for an empty series.
  MetricSet metrics() const;
};

// Point-in-time process accounting from /proc.
struct ProcessStat {
  double cpu_seconds = 0.0;  // user + system
  std::int64_t rss_bytes = 0;
  bool alive = false;        // false for zombies and vanished processes
};
std::optional<ProcessStat> read_process_stat(pid_t pid);

// Samples a process on a background thread until stop() or process exit.
// cpu_percent of each sample is the CPU time consumed since the previous
// reading divided by the wall time elapsed, times 100.
class ResourceMonitor {
 public:
  ResourceMonitor() = default;
  ~ResourceMonitor();
  ResourceMonitor(const ResourceMonitor&) = delete;
  ResourceMonitor& operator=(const ResourceMonitor&) = delete;

  // Test hook run after every sample, on the sampling thread.
  void set_sample_hook(std::function<void()> hook) { hook_ = std::move(hook); }

  void start(pid_t pid, int interval_ms = 100);
  ResourceSeries stop();

 private:
  void run(pid_t pid);

  std::function<void()> hook_;
  std::thread thread_;
  std::mutex mutex_;
  std::condition_variable cv_;
  bool stop_requested_ = false;
  ResourceSeries series_;
};

// Blocks, sampling `pid` until it exits.
ResourceSeries monitor_resources(pid_t pid, int interval_ms = 100);

// Recursive sum of regular-file sizes; symlinks are not followed. Throws
// Error if the path is missing or unreadable.
std::int64_t disk_usage(const std::filesystem::path& path);

}  // namespace qase
