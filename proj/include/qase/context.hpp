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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "qase/binding.hpp"
#include "qase/protocol.hpp"

namespace qase {

struct ContextStream {
  std::vector<InferenceRequest> requests;
  std::int64_t injected_count = 0;  // input_failure.injected_count
  std::optional<double> arrival_rate_hz;
};

// Replicates the scenario context on a request stream. With an input failure
// probability p, each request independently has its input replaced by a
// truncated copy written under `scratch_dir`; draws come from `seed` only.
// Pacing is applied at dispatch time by Pacer.
ContextStream apply_context(const ContextSpec& spec, std::vector<InferenceRequest> requests, std::uint64_t seed,
                            const std::filesystem::path& scratch_dir);

// Fixed-cadence dispatch: each wait() returns no sooner than one period
// after the previous one returned. A late dispatch is not made up for by
// shortening the next gap.
class Pacer {
 public:
  explicit Pacer(std::optional<double> rate_hz) : rate_hz_(rate_hz) {}
  void wait();

 private:
  std::optional<double> rate_hz_;
  std::optional<std::chrono::steady_clock::time_point> last_;
};

}  // namespace qase
