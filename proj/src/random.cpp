/*
 * Copyright 2026 The soci Authors.
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

#include "soci/random.hpp"

#include <sys/random.h>

#include <cerrno>
#include <cstring>
#include <random>
#include <string>

#include "soci/errors.hpp"

namespace soci {
namespace {

class OsEngine final : public RandomSource::Engine {
 public:
  void fill(std::span<std::uint8_t> out) override {
    std::size_t done = 0;
    while (done < out.size()) {
      ssize_t n = ::getrandom(out.data() + done, out.size() - done, 0);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw Error(std::string("getrandom failed: ") + std::strerror(errno));
      }
      done += static_cast<std::size_t>(n);
    }
  }
};

class SeededEngine final : public RandomSource::Engine {
 public:
  explicit SeededEngine(std::uint64_t seed) : gen_(seed) {}
  void fill(std::span<std::uint8_t> out) override {
    std::size_t i = 0;
    while (i < out.size()) {
      std::uint64_t w = gen_();
      for (int k = 0; k < 8 && i < out.size(); ++k, ++i) {
        out[i] = static_cast<std::uint8_t>(w >> (8 * k));
      }
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace

RandomSource::RandomSource() : engine_(std::make_unique<OsEngine>()) {}

RandomSource::RandomSource(std::unique_ptr<Engine> engine, bool deterministic)
    : engine_(std::move(engine)), deterministic_(deterministic) {}

RandomSource::~RandomSource() = default;

RandomSource RandomSource::deterministic(std::uint64_t seed) {
  return RandomSource(std::make_unique<SeededEngine>(seed), true);
}

std::uint64_t RandomSource::next_u64() {
  std::uint8_t buf[8];
  fill(buf);
  std::uint64_t v = 0;
  for (std::uint8_t b : buf) v = (v << 8) | b;
  return v;
}

bool RandomSource::next_bit() {
  std::uint8_t b;
  fill(std::span<std::uint8_t>(&b, 1));
  return (b & 1u) != 0;
}

}  // namespace soci
