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

#ifndef SOCI_TESTS_TEST_SUPPORT_HPP
#define SOCI_TESTS_TEST_SUPPORT_HPP

#include <memory>
#include <thread>
#include <utility>

#include "soci/fastpai.hpp"
#include "soci/modmath.hpp"
#include "soci/protocols.hpp"
#include "soci/random.hpp"
#include "soci/threshold.hpp"
#include "soci/transport.hpp"

namespace soci::testing {

// Small keys keep the unit suite fast; the acceptance binary uses full sizes.
struct SmallKeys {
  SecurityParams params;
  KeyPair kp;
  PartialKey s0;
  PartialKey s1;
};

inline const SmallKeys& small_keys() {
  static const SmallKeys keys = [] {
    RandomSource rs = RandomSource::deterministic(20260101);
    SmallKeys k;
    k.params = SecurityParams::for_modulus(512);
    k.kp = keygen(k.params, rs);
    auto [a, b] = split_key(k.kp.sk, k.kp.pk, SplitParams{k.params.sigma, 0}, rs);
    k.s0 = a;
    k.s1 = b;
    return k;
  }();
  return keys;
}

// Independent modular exponentiation by repeated squaring on plain integers.
inline BigNat naive_pow(BigNat base, BigNat exp, const BigNat& mod) {
  BigNat acc = 1;
  base %= mod;
  while (exp > 0) {
    if (exp % 2 == 1) acc = (acc * base) % mod;
    base = (base * base) % mod;
    exp /= 2;
  }
  return acc % mod;
}

// S0 and S1 contexts joined by an in-memory pair with S1 serving on a thread.
class LocalPair {
 public:
  explicit LocalPair(std::size_t range_l = 32, std::uint64_t seed = 7) {
    const SmallKeys& k = small_keys();
    ctx0 = make_s0_context(k.kp.pk, k.s0, k.params, range_l,
                           RandomSource::deterministic(seed));
    ctx1 = make_s1_context(k.kp.pk, k.s1, k.params, range_l,
                           RandomSource::deterministic(seed + 1));
    auto [a, b] = pair_inmemory();
    client = std::move(a);
    server = std::move(b);
    worker = std::thread([this] { summary = serve(*ctx1, *server); });
    mux = std::make_unique<SessionMux>(*client);
  }
  ~LocalPair() { stop(); }
  void stop() {
    if (worker.joinable()) {
      client->close();
      worker.join();
    }
  }

  std::unique_ptr<PartyContext> ctx0, ctx1;
  std::unique_ptr<Channel> client, server;
  std::unique_ptr<SessionMux> mux;
  std::thread worker;
  ServeSummary summary;
};

}  // namespace soci::testing

#endif  // SOCI_TESTS_TEST_SUPPORT_HPP
