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

#ifndef SOCI_RANDOM_HPP
#define SOCI_RANDOM_HPP

#include <cstdint>
#include <memory>
#include <span>

namespace soci {

// Source of random bytes. The default is the operating system CSPRNG; a
// seeded deterministic engine exists for reproducible tests and must be
// requested explicitly.
//
// Not safe for concurrent use: give each thread or session its own source.
class RandomSource {
 public:
  class Engine {
   public:
    virtual ~Engine() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;
  };

  // OS-backed (getrandom(2)).
  RandomSource();
  static RandomSource system() { return RandomSource(); }
  // Deterministic, for tests and reproducible benchmarks only.
  static RandomSource deterministic(std::uint64_t seed);

  RandomSource(RandomSource&&) noexcept = default;
  RandomSource& operator=(RandomSource&&) noexcept = default;
  RandomSource(const RandomSource&) = delete;
  RandomSource& operator=(const RandomSource&) = delete;
  ~RandomSource();

  void fill(std::span<std::uint8_t> out) { engine_->fill(out); }
  std::uint64_t next_u64();
  bool next_bit();
  bool is_deterministic() const { return deterministic_; }

 private:
  RandomSource(std::unique_ptr<Engine> engine, bool deterministic);

  std::unique_ptr<Engine> engine_;
  bool deterministic_ = false;
};

}  // namespace soci

#endif  // SOCI_RANDOM_HPP
