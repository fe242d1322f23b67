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

#ifndef SOCI_FASTPAI_HPP
#define SOCI_FASTPAI_HPP

#include <cstddef>
#include <optional>

#include "soci/modmath.hpp"
#include "soci/random.hpp"

namespace soci {

// Bit-length profile of a key. Defaults are the 112-bit profile.
struct SecurityParams {
  int kappa = 112;
  std::size_t n_len = 2048;      // bits of N
  std::size_t l_len = 448;       // bits of alpha and of encryption randomness
  std::size_t sigma = 128;       // bits of statistical masks and of sk1
  std::size_t table_block = 5;   // fixed-base table block width b
  std::size_t table_len = 448;   // fixed-base table exponent width

  // Profile for a modulus size: 1024 -> l=320, 2048 -> l=448, 3072 -> l=512.
  // Other sizes (test keys) use l = n/4 rounded to even, at least 16.
  static SecurityParams for_modulus(std::size_t n_len);

  // Throws InvalidArgument when an invariant is broken.
  void validate() const;
};

// The structured factorisation behind N: P = 2 p p' + 1, Q = 2 q q' + 1.
struct FactorWitness {
  BigNat P, Q, p, q, p_dash, q_dash;

  BigNat N() const { return P * Q; }
};

// Builds P and Q from the four factors. Returns nullopt when the factors
// are not pairwise coprime or when P or Q is not a probable prime.
std::optional<FactorWitness> assemble_witness(const BigNat& p, const BigNat& q,
                                              const BigNat& p_dash,
                                              const BigNat& q_dash);

inline constexpr long kNgenIterationCap = 1'000'000;

// Throws GenerationFailure after kNgenIterationCap rejected candidates.
FactorWitness ngen(const SecurityParams& params, RandomSource& rs);

struct PublicKey {
  BigNat N;
  BigNat h;
  BigNat h_pow_N;    // h^N mod N^2
  BigNat N_squared;
  BigNat half_N;     // floor(N/2)
  std::size_t r_bits = 0;  // width of the encryption randomness

  // Fills the cached fields. Throws InvalidArgument unless 1 < h < N, N odd.
  static PublicKey make(BigNat N, BigNat h, std::size_t r_bits);

  bool operator==(const PublicKey& o) const { return N == o.N && h == o.h; }
};

struct PrivateKey {
  BigNat alpha;
  BigNat N;
};

struct KeyPair {
  PublicKey pk;
  PrivateKey sk;
};

// alpha = p q, beta = p' q', h = -y^(2 beta) mod N for a random unit y.
KeyPair keygen_from_witness(const FactorWitness& w, std::size_t r_bits,
                            RandomSource& rs);
KeyPair keygen(const SecurityParams& params, RandomSource& rs);

struct Ciphertext {
  BigNat value;

  bool operator==(const Ciphertext& o) const { return value == o.value; }
};

// Signed integers live in Z_N with negatives mapped to N - |x|. Requires
// 4|x| < N; throws EncodeRange otherwise.
BigNat encode(const BigInt& x, const BigNat& N);
// Inverse of encode: m <= floor(N/2) is non-negative, larger m is m - N.
BigInt decode(const BigNat& m, const BigNat& N);

// (1+N)^m * (h^r mod N)^N mod N^2 with fresh r of pk.r_bits bits.
Ciphertext enc(const PublicKey& pk, const BigNat& m, RandomSource& rs);
// The same expression with caller-supplied r.
Ciphertext enc_direct_with_r(const PublicKey& pk, const BigNat& m,
                             const BigNat& r);
// (1 + m N) * (h^N mod N^2)^r mod N^2; equal to enc_direct_with_r.
Ciphertext enc_with_r(const PublicKey& pk, const BigNat& m, const BigNat& r);

// Throws MalformedCiphertext when N does not divide (c^(2 alpha) mod N^2) - 1.
BigNat dec(const PrivateKey& sk, const Ciphertext& c);

Ciphertext hom_add(const PublicKey& pk, const Ciphertext& a,
                   const Ciphertext& b);
// c^k mod N^2, 0 <= k < N.
Ciphertext hom_scal(const PublicKey& pk, const Ciphertext& c, const BigNat& k);
// c^k for signed k; negative k goes through the inverse of c modulo N^2,
// which encrypts -m.
Ciphertext hom_scal_signed(const PublicKey& pk, const Ciphertext& c,
                           const BigInt& k);
Ciphertext hom_neg(const PublicKey& pk, const Ciphertext& c);
Ciphertext hom_sub(const PublicKey& pk, const Ciphertext& a,
                   const Ciphertext& b);

// 0 < c < N^2.
bool in_ciphertext_range(const PublicKey& pk, const BigNat& value);

}  // namespace soci

#endif  // SOCI_FASTPAI_HPP
