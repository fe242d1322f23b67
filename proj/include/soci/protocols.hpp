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

#ifndef SOCI_PROTOCOLS_HPP
#define SOCI_PROTOCOLS_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "soci/fastpai.hpp"
#include "soci/offline.hpp"
#include "soci/random.hpp"
#include "soci/threshold.hpp"
#include "soci/transport.hpp"

namespace soci {

enum class Role { kS0, kS1 };

// Statistical margin between the mask width sigma and the operand range l.
inline constexpr std::size_t kMaskMarginBits = 40;

// Everything one server needs to run its side of the protocols. S0 holds
// share 1 and TupleS0; S1 holds share 2, TupleS1 and the encryption table.
// Key material is immutable; `mu` serialises tuple draws and use of `rs`,
// so one context may back several concurrent sessions.
struct PartyContext {
  Role role = Role::kS0;
  PublicKey pk;
  PartialKey partial;
  std::optional<TupleS0> tuple_s0;
  std::optional<TupleS1> tuple_s1;
  std::shared_ptr<const PrecompTable> table;
  std::size_t range_l = 32;
  BigNat L_const;  // 2^(sigma+2)
  RandomSource rs;
  std::mutex mu;
  // Test hook: pin the comparison coin instead of drawing it.
  std::optional<int> pi_override;
};

// Builds the offline material (tuple, and for S1 the table unless one is
// supplied) and checks the context invariants. Throws InvalidArgument when
// range_l > sigma - 40 or the share index does not match the role.
std::unique_ptr<PartyContext> make_s0_context(const PublicKey& pk,
                                              PartialKey share,
                                              const SecurityParams& params,
                                              std::size_t range_l,
                                              RandomSource rs);
std::unique_ptr<PartyContext> make_s1_context(
    const PublicKey& pk, PartialKey share, const SecurityParams& params,
    std::size_t range_l, RandomSource rs,
    std::shared_ptr<const PrecompTable> table = nullptr);

enum class Direction { kToS1, kToS0 };

struct TranscriptEntry {
  Direction direction;
  std::uint8_t msg_type;
  std::size_t ciphertexts;
  std::size_t ciphertext_bytes;  // magnitudes only
  std::size_t frame_bytes;
};

struct ProtocolTranscript {
  std::string protocol;
  std::vector<TranscriptEntry> messages;

  std::size_t ciphertexts() const;
  std::size_t ciphertext_bytes() const;
  std::size_t frame_bytes() const;
  std::size_t ciphertexts(Direction d) const;
};

// S0 side. Each call opens a fresh session on `link`; the transcript, when
// given, receives every message of the run. Remote ERROR frames surface as
// RemoteError, channel loss as TransportError.
Ciphertext smul(PartyContext& ctx0, SessionMux& link, const Ciphertext& cx,
                const Ciphertext& cy, ProtocolTranscript* transcript = nullptr);
// Encrypts 0 when x >= y and 1 otherwise.
Ciphertext scmp(PartyContext& ctx0, SessionMux& link, const Ciphertext& cx,
                const Ciphertext& cy, ProtocolTranscript* transcript = nullptr);
// (sign bit, magnitude).
std::pair<Ciphertext, Ciphertext> ssba(PartyContext& ctx0, SessionMux& link,
                                       const Ciphertext& cx,
                                       ProtocolTranscript* transcript = nullptr);
// (quotient, remainder) for x in [0, 2^l], y in (0, 2^l]. y = 0 cannot be
// detected under encryption and yields garbage.
std::pair<Ciphertext, Ciphertext> sdiv(PartyContext& ctx0, SessionMux& link,
                                       const Ciphertext& cx,
                                       const Ciphertext& cy, std::size_t l,
                                       ProtocolTranscript* transcript = nullptr);

// S1 responder steps. Stateless apart from tuple draws.
Ciphertext smul_serve_step(PartyContext& ctx1, const Ciphertext& C,
                           const PartialDecryption& C1);
Ciphertext scmp_serve_step(PartyContext& ctx1, const Ciphertext& D,
                           const PartialDecryption& D1);

// Splits t = L*a + b (b < L) and returns a*b mod N. Throws ProtocolError when
// a >= L, which only happens if a mask wrapped below zero.
BigNat unpack_masked_product(const BigNat& t, const BigNat& L, const BigNat& N);

struct ServeSummary {
  std::uint64_t requests = 0;
  std::uint64_t errors = 0;
  ChannelStats stats;
};

// S1 event loop: answers requests until the channel ends. Bad requests get
// an ERROR frame for their session; the loop keeps going.
ServeSummary serve(PartyContext& ctx1, Channel& ch);

namespace oracle {
BigInt mul(const BigInt& x, const BigInt& y);
int cmp(const BigInt& x, const BigInt& y);                 // 0 iff x >= y
std::pair<int, BigInt> ssba(const BigInt& x);             // (sign, |x|)
std::pair<BigInt, BigInt> divmod(const BigInt& x, const BigInt& y);
}  // namespace oracle

// Expected ciphertexts on the wire per run.
std::size_t expected_ciphertexts_smul();
std::size_t expected_ciphertexts_scmp();
std::size_t expected_ciphertexts_ssba();
std::size_t expected_ciphertexts_sdiv(std::size_t l);

}  // namespace soci

#endif  // SOCI_PROTOCOLS_HPP
