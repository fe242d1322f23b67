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

#include "soci/threshold.hpp"

#include <string>

#include "soci/errors.hpp"

namespace soci {

std::pair<PartialKey, PartialKey> split_key(const PrivateKey& sk,
                                            const PublicKey& pk,
                                            const SplitParams& sp,
                                            RandomSource& rs) {
  if (sp.sigma < 1) throw InvalidArgument("split_key: sigma must be >= 1");
  const BigNat two_alpha = 2 * sk.alpha;
  const BigNat base = mod_inv(two_alpha, pk.N) * two_alpha;
  const BigNat lift = BigNat(sp.eta) * two_alpha * pk.N;
  for (;;) {
    BigNat s1 = sample_bits(rs, sp.sigma);
    mpz_setbit(s1.get_mpz_t(), sp.sigma - 1);
    BigNat s2 = base - s1 + lift;
    if (s2 < 0) continue;
    return {PartialKey{1, std::move(s1), pk.N},
            PartialKey{2, std::move(s2), pk.N}};
  }
}

PartialDecryption pdec(const PartialKey& key, const Ciphertext& c) {
  return PartialDecryption{key.index,
                           mod_pow(c.value, key.share, key.N * key.N)};
}

BigNat tdec(const PublicKey& pk, const PartialDecryption& m1,
            const PartialDecryption& m2) {
  auto valid = [](int i) { return i == 1 || i == 2; };
  if (!valid(m1.index) || !valid(m2.index)) {
    throw InvalidArgument("tdec: share index must be 1 or 2");
  }
  if (m1.index == m2.index) {
    throw InvalidArgument("tdec: both partial decryptions use share " +
                          std::to_string(m1.index));
  }
  BigNat u = (m1.value * m2.value) % pk.N_squared - 1;
  if (u < 0 || !mpz_divisible_p(u.get_mpz_t(), pk.N.get_mpz_t())) {
    throw ThresholdDecryptionFailure(
        "tdec: recombined value is not 1 mod N (mismatched shares or corrupt "
        "ciphertext)");
  }
  return (u / pk.N) % pk.N;
}

}  // namespace soci
