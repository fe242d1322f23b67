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

#ifndef SOCI_KERNELS_HPP
#define SOCI_KERNELS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "soci/fastpai.hpp"
#include "soci/modmath.hpp"
#include "soci/offline.hpp"
#include "soci/threshold.hpp"

// Data-parallel kernels. Each OpenMP kernel has a *_serial twin that runs
// the same arithmetic in one thread; tests assert both agree bit-for-bit
// and bench/ compares their throughput.
namespace soci::kernels {

// Row-major table of ceil(width/block) rows by 2^block columns:
// out[i * 2^block + j] = base^(j * 2^(i*block)) mod modulus.
std::vector<BigNat> fixed_base_table(const BigNat& base, const BigNat& modulus,
                                     std::size_t block, std::size_t width);
std::vector<BigNat> fixed_base_table_serial(const BigNat& base,
                                            const BigNat& modulus,
                                            std::size_t block,
                                            std::size_t width);

// Table-accelerated encryption of msgs[i] under pinned randomness rs[i].
std::vector<Ciphertext> enc_batch(const PublicKey& pk, const PrecompTable& t,
                                  std::span<const BigNat> msgs,
                                  std::span<const BigNat> rs);
std::vector<Ciphertext> enc_batch_serial(const PublicKey& pk,
                                         const PrecompTable& t,
                                         std::span<const BigNat> msgs,
                                         std::span<const BigNat> rs);

std::vector<BigNat> dec_batch(const PrivateKey& sk,
                              std::span<const Ciphertext> cts);
std::vector<BigNat> dec_batch_serial(const PrivateKey& sk,
                                     std::span<const Ciphertext> cts);

std::vector<PartialDecryption> pdec_batch(const PartialKey& key,
                                          std::span<const Ciphertext> cts);
std::vector<PartialDecryption> pdec_batch_serial(
    const PartialKey& key, std::span<const Ciphertext> cts);

int max_threads();

}  // namespace soci::kernels

#endif  // SOCI_KERNELS_HPP
