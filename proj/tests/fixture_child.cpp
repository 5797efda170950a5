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

// Test fixture with known resource behaviour and a scriptable adapter.
//
//   busy <seconds>             spin one core
//   alloc <mib> <seconds>      allocate and touch memory, then hold it
//   exit                       return immediately
//   adapter <behaviour> [arg]  speak the adapter protocol on stdin/stdout
//
// Adapter behaviours: echo, evidence, garbage, wrong-version, silent, die,
// malformed, wrong-id, slow <ms>, alloc <mib>.

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "qase/error.hpp"
#include "qase/image.hpp"
#include "qase/protocol.hpp"

namespace {

volatile std::uint64_t sink = 0;

void spin(double seconds) {
  const auto end = std::chrono::steady_clock::now() + std::chrono::duration<double>(seconds);
  while (std::chrono::steady_clock::now() < end) {
    for (int i = 0; i < 100000; ++i) sink = sink + i;
  }
}

std::vector<char> touch(std::size_t mib) {
  std::vector<char> block(mib << 20);
  for (std::size_t i = 0; i < block.size(); i += 4096) block[i] = static_cast<char>(i);
  return block;
}

void say(const std::string& line) { std::cout << line << "\n" << std::flush; }

int adapter(const std::string& behaviour, const std::string& arg) {
  if (behaviour == "garbage") {
    say("hello there");
    std::this_thread::sleep_for(std::chrono::seconds(30));
    return 0;
  }
  if (behaviour == "silent") {
    std::this_thread::sleep_for(std::chrono::seconds(30));
    return 0;
  }
  std::vector<char> held;
  if (behaviour == "alloc") held = touch(std::stoul(arg));
  say(behaviour == "wrong-version" ? R"({"protocol":"qase-adapter/0"})" : qase::handshake_line());

  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.find("\"cmd\"") != std::string::npos) return 0;
    if (behaviour == "die") std::_Exit(3);
    if (behaviour == "malformed") {
      say("{\"request_id\": ");
      continue;
    }
    qase::InferenceRequest req;
    try {
      req = qase::decode_request(line);
    } catch (const qase::Error& e) {
      say(qase::encode_response({"", std::nullopt, std::nullopt, std::string("bad request: ") + e.what()}));
      continue;
    }
    if (behaviour == "slow") std::this_thread::sleep_for(std::chrono::milliseconds(std::stoi(arg)));
    qase::InferenceResponse resp;
    resp.request_id = behaviour == "wrong-id" ? req.request_id + "x" : req.request_id;
    try {
      const qase::Image img = qase::load_ppm(req.input_path);
      resp.label = "rose";
      if (req.want_evidence && behaviour == "evidence") {
        qase::Evidence ev;
        ev.height = img.height();
        ev.width = img.width();
        ev.values.assign(static_cast<std::size_t>(ev.height) * ev.width, 1.0 / (ev.height * ev.width));
        resp.evidence = ev;
      }
    } catch (const qase::Error& e) {
      resp.error = e.what();
    }
    say(qase::encode_response(resp));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    std::cerr << "usage: qase_fixture_child busy|alloc|exit|adapter ...\n";
    return 2;
  }
  const std::string& mode = args[0];
  if (mode == "busy") {
    spin(args.size() > 1 ? std::stod(args[1]) : 2.0);
    return 0;
  }
  if (mode == "alloc") {
    const auto block = touch(args.size() > 1 ? std::stoul(args[1]) : 256);
    std::this_thread::sleep_for(std::chrono::duration<double>(args.size() > 2 ? std::stod(args[2]) : 2.0));
    return block.empty() ? 1 : 0;
  }
  if (mode == "exit") return 0;
  if (mode == "adapter") return adapter(args.size() > 1 ? args[1] : "echo", args.size() > 2 ? args[2] : "");
  std::cerr << "unknown mode " << mode << "\n";
  return 2;
}
