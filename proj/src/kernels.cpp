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

#include "soci/kernels.hpp"

#include <omp.h>

#include <exception>
#include <mutex>

#include "soci/errors.hpp"

namespace soci::kernels {
namespace {

// Runs f(i) for i in [0, n) across OpenMP threads. The first exception
// thrown by any iteration is rethrown on the calling thread.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  std::exception_ptr failure;
  std::mutex failure_mu;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

template <typename F>
void serial_for(std::size_t n, F&& f) {
  for (std::size_t i = 0; i < n; ++i) f(i);
}

std::size_t table_rows(std::size_t block, std::size_t width) {
  if (block < 1 || block > 16) {
    throw InvalidArgument("fixed-base table: block must be in [1,16]");
  }
  if (width < 1) throw InvalidArgument("fixed-base table: width must be >= 1");
  return (width + block - 1) / block;
}

// base^(2^(i*block)) for each row i. Inherently sequential.
std::vector<BigNat> row_bases(const BigNat& base, const BigNat& modulus,
                              std::size_t block, std::size_t rows) {
  std::vector<BigNat> out(rows);
  out[0] = base % modulus;
  for (std::size_t i = 1; i < rows; ++i) {
    BigNat v = out[i - 1];
    for (std::size_t s = 0; s < block; ++s) v = (v * v) % modulus;
    out[i] = std::move(v);
  }
  return out;
}

template <typename Loop>
std::vector<BigNat> fill_table(const BigNat& base, const BigNat& modulus,
                               std::size_t block, std::size_t width,
                               Loop&& loop) {
  if (modulus <= 1) throw InvalidArgument("fixed-base table: modulus <= 1");
  const std::size_t rows = table_rows(block, width);
  const std::size_t cols = std::size_t{1} << block;
  const std::vector<BigNat> bases = row_bases(base, modulus, block, rows);
  std::vector<BigNat> out(rows * cols);
  loop(rows, [&](std::size_t i) {
    BigNat* row = &out[i * cols];
    row[0] = 1;
    for (std::size_t j = 1; j < cols; ++j) row[j] = (row[j - 1] * bases[i]) % modulus;
  });
  return out;
}

void check_same_length(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidArgument("enc_batch: messages and randomness differ in length");
}

}  // namespace

std::vector<BigNat> fixed_base_table(const BigNat& base, const BigNat& modulus,
                                     std::size_t block, std::size_t width) {
  return fill_table(base, modulus, block, width,
                    [](std::size_t n, auto&& f) { parallel_for(n, f); });
}

std::vector<BigNat> fixed_base_table_serial(const BigNat& base,
                                            const BigNat& modulus,
                                            std::size_t block,
                                            std::size_t width) {
  return fill_table(base, modulus, block, width,
                    [](std::size_t n, auto&& f) { serial_for(n, f); });
}

std::vector<Ciphertext> enc_batch(const PublicKey& pk, const PrecompTable& t,
                                  std::span<const BigNat> msgs,
                                  std::span<const BigNat> rs) {
  check_same_length(msgs.size(), rs.size());
  std::vector<Ciphertext> out(msgs.size());
  parallel_for(msgs.size(), [&](std::size_t i) {
    out[i] = enc_fast_with_r(pk, t, msgs[i], rs[i]);
  });
  return out;
}

std::vector<Ciphertext> enc_batch_serial(const PublicKey& pk,
                                         const PrecompTable& t,
                                         std::span<const BigNat> msgs,
                                         std::span<const BigNat> rs) {
  check_same_length(msgs.size(), rs.size());
  std::vector<Ciphertext> out(msgs.size());
  serial_for(msgs.size(), [&](std::size_t i) {
    out[i] = enc_fast_with_r(pk, t, msgs[i], rs[i]);
  });
  return out;
}

std::vector<BigNat> dec_batch(const PrivateKey& sk,
                              std::span<const Ciphertext> cts) {
  std::vector<BigNat> out(cts.size());
  parallel_for(cts.size(), [&](std::size_t i) { out[i] = dec(sk, cts[i]); });
  return out;
}

std::vector<BigNat> dec_batch_serial(const PrivateKey& sk,
                                     std::span<const Ciphertext> cts) {
  std::vector<BigNat> out(cts.size());
  serial_for(cts.size(), [&](std::size_t i) { out[i] = dec(sk, cts[i]); });
  return out;
}

std::vector<PartialDecryption> pdec_batch(const PartialKey& key,
                                          std::span<const Ciphertext> cts) {
  std::vector<PartialDecryption> out(cts.size());
  parallel_for(cts.size(), [&](std::size_t i) { out[i] = pdec(key, cts[i]); });
  return out;
}

std::vector<PartialDecryption> pdec_batch_serial(
    const PartialKey& key, std::span<const Ciphertext> cts) {
  std::vector<PartialDecryption> out(cts.size());
  serial_for(cts.size(), [&](std::size_t i) { out[i] = pdec(key, cts[i]); });
  return out;
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace soci::kernels
