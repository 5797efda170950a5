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

#include "qase/context.hpp"

#include <random>
#include <thread>

#include "qase/error.hpp"
#include "qase/image.hpp"
#include "qase/manifest.hpp"

namespace qase {

ContextStream apply_context(const ContextSpec& spec, std::vector<InferenceRequest> requests, std::uint64_t seed,
                            const std::filesystem::path& scratch_dir) {
  ContextStream out;
  out.arrival_rate_hz = spec.arrival_rate_hz;
  const double p = spec.input_failure_prob.value_or(0.0);
  if (p > 0.0) {
    std::mt19937_64 rng(seed);
    for (auto& r : requests) {
      if (unit_interval(rng()) >= p) continue;
      const std::filesystem::path corrupt = scratch_dir / (r.request_id + ".corrupt.ppm");
      try {
        write_truncated_copy(r.input_path, corrupt);
      } catch (const ImageError&) {
        // Source already unreadable; the scratch path stays missing.
      }
      r.input_path = corrupt.string();
      r.inline_input.reset();
      ++out.injected_count;
    }
  }
  out.requests = std::move(requests);
  return out;
}

void Pacer::wait() {
  using clock = std::chrono::steady_clock;
  if (rate_hz_ && last_) {
    const auto period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(1.0 / *rate_hz_));
    std::this_thread::sleep_until(*last_ + period);
  }
  last_ = clock::now();
}

}  // namespace qase
