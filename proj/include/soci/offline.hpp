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

#ifndef SOCI_OFFLINE_HPP
#define SOCI_OFFLINE_HPP

#include <cstddef>
#include <filesystem>
#include <vector>

#include "soci/fastpai.hpp"
#include "soci/modmath.hpp"
#include "soci/random.hpp"

namespace soci {

// Pre-encrypted masks and constants held by S0. Ciphertext slots are
// rerandomised (multiplied by enc_zero) every time they are handed out, so
// a slot never leaves the tuple twice with the same bytes.
//
// Mutable: one draw at a time.
struct TupleS0 {
  BigNat r1, r2;  // sigma-bit multiplication masks
  Ciphertext enc_r1, enc_r2, enc_neg_r1r2;
  BigNat r3;      // in [1, 2^sigma)
  BigNat r4;      // floor(N/2) - r3 < r4 <= floor(N/2)
  Ciphertext enc_r3_plus_r4, enc_r4;
  Ciphertext enc_zero, enc_one;
};

struct TupleS1 {
  Ciphertext enc_zero, enc_one;
};

struct MulMasks {
  BigNat r1, r2;
  Ciphertext enc_r1, enc_r2, enc_neg_r1r2;
};

// The comparison masks r3, r4 relabelled as r1, r2.
struct CmpMasks {
  BigNat r1, r2;
  Ciphertext enc_r1_plus_r2, enc_r2;
};

struct ZeroOne {
  Ciphertext enc_zero, enc_one;
};

TupleS0 build_tuple_s0(const PublicKey& pk, const SecurityParams& params,
                       RandomSource& rs);
TupleS1 build_tuple_s1(const PublicKey& pk, RandomSource& rs);

// c * enc_zero mod N^2.
Ciphertext refresh(const PublicKey& pk, const Ciphertext& c,
                   const Ciphertext& enc_zero);

MulMasks draw_mul_masks(TupleS0& t, const PublicKey& pk);
CmpMasks draw_cmp_masks(TupleS0& t, const PublicKey& pk);
ZeroOne draw_zero_one(TupleS0& t, const PublicKey& pk);
Ciphertext draw_one(TupleS0& t, const PublicKey& pk);
ZeroOne draw_zero_one(TupleS1& t, const PublicKey& pk);

// Fixed-base exponentiation table: entry(i, j) = base^(j * 2^(i*block))
// mod modulus, for ceil(width/block) rows and 2^block columns.
// Immutable once built.
class PrecompTable {
 public:
  // Rows are filled in parallel (OpenMP).
  static PrecompTable build(const BigNat& base, const BigNat& modulus,
                            std::size_t block, std::size_t width);
  // Single-threaded reference build; produces an identical table.
  static PrecompTable build_serial(const BigNat& base, const BigNat& modulus,
                                   std::size_t block, std::size_t width);

  const BigNat& entry(std::size_t row, std::size_t col) const {
    return entries_[row * cols() + col];
  }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return std::size_t{1} << block_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t block() const { return block_; }
  std::size_t width() const { return width_; }
  const BigNat& base() const { return base_; }
  const BigNat& modulus() const { return modulus_; }

  // base^x mod modulus using one table entry per block of x. Throws
  // WidthError when x has more than width() bits.
  BigNat pow(const BigNat& x) const;

  // Binary cache file; layout in docs/FORMATS.md.
  void save(const std::filesystem::path& path) const;
  // Throws Error if the file is corrupt, of another version, or built for a
  // different modulus.
  static PrecompTable load(const std::filesystem::path& path,
                           const BigNat& modulus);

  bool operator==(const PrecompTable& o) const {
    return block_ == o.block_ && width_ == o.width_ && modulus_ == o.modulus_ &&
           entries_ == o.entries_;
  }

 private:
  PrecompTable(BigNat base, BigNat modulus, std::size_t block,
               std::size_t width, std::vector<BigNat> entries);

  BigNat base_;
  BigNat modulus_;
  std::size_t block_ = 0;
  std::size_t width_ = 0;
  std::size_t rows_ = 0;
  std::vector<BigNat> entries_;
};

// Table over h^N mod N^2 for encryption randomness.
PrecompTable build_table(const PublicKey& pk, std::size_t block,
                         std::size_t width);
BigNat fixed_base_pow(const PrecompTable& t, const BigNat& x);

// Encryption with (h^N)^r taken from the table. Bit-identical to
// enc_with_r for the same r.
Ciphertext enc_fast(const PublicKey& pk, const PrecompTable& t,
                    const BigNat& m, RandomSource& rs);
Ciphertext enc_fast_with_r(const PublicKey& pk, const PrecompTable& t,
                           const BigNat& m, const BigNat& r);

}  // namespace soci

#endif  // SOCI_OFFLINE_HPP
