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

#ifndef SOCI_THRESHOLD_HPP
#define SOCI_THRESHOLD_HPP

#include <cstddef>
#include <utility>

#include "soci/fastpai.hpp"
#include "soci/modmath.hpp"
#include "soci/random.hpp"

namespace soci {

// One of the two additive shares of the doubled private key 2*alpha.
// A generated pair satisfies share1 + share2 = 0 (mod 2 alpha) and
// share1 + share2 = 1 (mod N).
struct PartialKey {
  int index = 0;  // 1 or 2
  BigNat share;
  BigNat N;
};

struct PartialDecryption {
  int index = 0;
  BigNat value;  // c^share mod N^2
};

struct SplitParams {
  std::size_t sigma = 128;  // bit-length of share 1
  unsigned long eta = 0;    // share 2 is lifted by eta * 2 alpha * N
};

// share1 is a uniform sigma-bit value (top bit set);
// share2 = ((2 alpha)^-1 mod N) * 2 alpha - share1 + eta * 2 alpha * N.
std::pair<PartialKey, PartialKey> split_key(const PrivateKey& sk,
                                            const PublicKey& pk,
                                            const SplitParams& sp,
                                            RandomSource& rs);

PartialDecryption pdec(const PartialKey& key, const Ciphertext& c);

// ((M1 * M2 mod N^2) - 1) / N mod N. Symmetric in its arguments.
// Throws InvalidArgument for equal or unknown indices and
// ThresholdDecryptionFailure when N does not divide M1*M2 - 1.
BigNat tdec(const PublicKey& pk, const PartialDecryption& m1,
            const PartialDecryption& m2);

}  // namespace soci

#endif  // SOCI_THRESHOLD_HPP
