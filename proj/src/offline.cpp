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

#include "soci/offline.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <string>
#include <utility>

#include "soci/errors.hpp"
#include "soci/kernels.hpp"
#include "soci/wire.hpp"

namespace soci {
namespace {

constexpr char kTableMagic[4] = {'S', 'P', 'C', 'T'};
constexpr std::uint8_t kTableVersion = 1;

Ciphertext fresh(const PublicKey& pk, const BigNat& m, RandomSource& rs) {
  return enc_with_r(pk, m, sample_bits(rs, pk.r_bits));
}

// Returns the slot's current value and rerandomises the slot.
Ciphertext take(Ciphertext& slot, const PublicKey& pk, const Ciphertext& zero) {
  Ciphertext out = slot;
  slot = refresh(pk, slot, zero);
  return out;
}

}  // namespace

TupleS0 build_tuple_s0(const PublicKey& pk, const SecurityParams& params,
                       RandomSource& rs) {
  TupleS0 t;
  t.r1 = sample_bits(rs, params.sigma);
  t.r2 = sample_bits(rs, params.sigma);
  do {
    t.r3 = sample_bits(rs, params.sigma);
  } while (t.r3 == 0);
  // r4 = floor(N/2) - u with u uniform in [0, r3 - 1].
  t.r4 = pk.half_N - sample_below(rs, t.r3);

  const BigNat neg_r1r2 = (pk.N - (t.r1 * t.r2) % pk.N) % pk.N;
  t.enc_r1 = fresh(pk, t.r1, rs);
  t.enc_r2 = fresh(pk, t.r2, rs);
  t.enc_neg_r1r2 = fresh(pk, neg_r1r2, rs);
  t.enc_r3_plus_r4 = fresh(pk, (t.r3 + t.r4) % pk.N, rs);
  t.enc_r4 = fresh(pk, t.r4, rs);
  t.enc_zero = fresh(pk, 0, rs);
  t.enc_one = fresh(pk, 1, rs);
  return t;
}

TupleS1 build_tuple_s1(const PublicKey& pk, RandomSource& rs) {
  return TupleS1{fresh(pk, 0, rs), fresh(pk, 1, rs)};
}

Ciphertext refresh(const PublicKey& pk, const Ciphertext& c,
                   const Ciphertext& enc_zero) {
  return hom_add(pk, c, enc_zero);
}

MulMasks draw_mul_masks(TupleS0& t, const PublicKey& pk) {
  MulMasks m{t.r1, t.r2, {}, {}, {}};
  m.enc_r1 = take(t.enc_r1, pk, t.enc_zero);
  m.enc_r2 = take(t.enc_r2, pk, t.enc_zero);
  m.enc_neg_r1r2 = take(t.enc_neg_r1r2, pk, t.enc_zero);
  return m;
}

CmpMasks draw_cmp_masks(TupleS0& t, const PublicKey& pk) {
  CmpMasks m{t.r3, t.r4, {}, {}};
  m.enc_r1_plus_r2 = take(t.enc_r3_plus_r4, pk, t.enc_zero);
  m.enc_r2 = take(t.enc_r4, pk, t.enc_zero);
  return m;
}

ZeroOne draw_zero_one(TupleS0& t, const PublicKey& pk) {
  ZeroOne z;
  z.enc_one = take(t.enc_one, pk, t.enc_zero);
  z.enc_zero = take(t.enc_zero, pk, t.enc_zero);
  return z;
}

Ciphertext draw_one(TupleS0& t, const PublicKey& pk) {
  return take(t.enc_one, pk, t.enc_zero);
}

ZeroOne draw_zero_one(TupleS1& t, const PublicKey& pk) {
  ZeroOne z;
  z.enc_one = take(t.enc_one, pk, t.enc_zero);
  z.enc_zero = take(t.enc_zero, pk, t.enc_zero);
  return z;
}

PrecompTable::PrecompTable(BigNat base, BigNat modulus, std::size_t block,
                           std::size_t width, std::vector<BigNat> entries)
    : base_(std::move(base)),
      modulus_(std::move(modulus)),
      block_(block),
      width_(width),
      rows_((width + block - 1) / block),
      entries_(std::move(entries)) {}

PrecompTable PrecompTable::build(const BigNat& base, const BigNat& modulus,
                                 std::size_t block, std::size_t width) {
  auto entries = kernels::fixed_base_table(base, modulus, block, width);
  return PrecompTable(base % modulus, modulus, block, width, std::move(entries));
}

PrecompTable PrecompTable::build_serial(const BigNat& base,
                                        const BigNat& modulus,
                                        std::size_t block, std::size_t width) {
  auto entries = kernels::fixed_base_table_serial(base, modulus, block, width);
  return PrecompTable(base % modulus, modulus, block, width, std::move(entries));
}

BigNat PrecompTable::pow(const BigNat& x) const {
  if (x < 0) throw InvalidArgument("fixed_base_pow: negative exponent");
  if (bit_length(x) > width_) {
    throw WidthError("fixed_base_pow: exponent has " +
                     std::to_string(bit_length(x)) + " bits, table covers " +
                     std::to_string(width_));
  }
  BigNat acc = 1;
  const mpz_srcptr xp = x.get_mpz_t();
  for (std::size_t i = 0; i < rows_; ++i) {
    std::size_t digit = 0;
    const std::size_t lo = i * block_;
    for (std::size_t k = block_; k-- > 0;) {
      digit = (digit << 1) | static_cast<std::size_t>(mpz_tstbit(xp, lo + k));
    }
    if (digit != 0) acc = (acc * entry(i, digit)) % modulus_;
  }
  return acc;
}

void PrecompTable::save(const std::filesystem::path& path) const {
  wire::Bytes out(std::begin(kTableMagic), std::end(kTableMagic));
  out.push_back(kTableVersion);
  out.push_back(static_cast<std::uint8_t>(block_));
  wire::put_u32(out, static_cast<std::uint32_t>(width_));
  const wire::Digest mod_digest = wire::sha256(to_bytes(modulus_));
  out.insert(out.end(), mod_digest.begin(), mod_digest.end());
  for (const BigNat& e : entries_) wire::put_bigint(out, e);
  const wire::Digest check = wire::sha256(out);
  out.insert(out.end(), check.begin(), check.end());

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open table cache for writing: " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw Error("failed writing table cache: " + path.string());
}

PrecompTable PrecompTable::load(const std::filesystem::path& path,
                                const BigNat& modulus) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open table cache: " + path.string());
  wire::Bytes in((std::istreambuf_iterator<char>(f)),
                 std::istreambuf_iterator<char>());
  constexpr std::size_t kHeader = 4 + 1 + 1 + 4 + 32;
  if (in.size() < kHeader + 32) throw Error("table cache truncated");
  if (!std::equal(std::begin(kTableMagic), std::end(kTableMagic), in.begin())) {
    throw Error("table cache: bad magic");
  }
  if (in[4] != kTableVersion) {
    throw Error("table cache: unsupported version " + std::to_string(in[4]));
  }
  std::span<const std::uint8_t> body(in.data(), in.size() - 32);
  const wire::Digest check = wire::sha256(body);
  if (!std::equal(check.begin(), check.end(), in.end() - 32)) {
    throw Error("table cache: checksum mismatch");
  }
  const std::size_t block = in[5];
  const std::size_t width = wire::get_u32(in, 6);
  const wire::Digest mod_digest = wire::sha256(to_bytes(modulus));
  if (!std::equal(mod_digest.begin(), mod_digest.end(), in.begin() + 10)) {
    throw Error("table cache: built for a different modulus");
  }
  if (block < 1 || block > 16 || width < 1) {
    throw Error("table cache: bad dimensions");
  }
  const std::size_t count = ((width + block - 1) / block) << block;
  std::vector<BigNat> entries;
  entries.reserve(count);
  std::size_t offset = kHeader;
  for (std::size_t i = 0; i < count; ++i) {
    entries.push_back(wire::get_bigint(body, offset));
  }
  if (offset != body.size()) throw Error("table cache: trailing bytes");
  BigNat base = count > 1 ? entries[1] : BigNat(1);
  return PrecompTable(std::move(base), modulus, block, width,
                      std::move(entries));
}

PrecompTable build_table(const PublicKey& pk, std::size_t block,
                         std::size_t width) {
  return PrecompTable::build(pk.h_pow_N, pk.N_squared, block, width);
}

BigNat fixed_base_pow(const PrecompTable& t, const BigNat& x) {
  return t.pow(x);
}

Ciphertext enc_fast_with_r(const PublicKey& pk, const PrecompTable& t,
                           const BigNat& m, const BigNat& r) {
  if (m < 0 || m >= pk.N) throw InvalidArgument("enc: message outside [0, N)");
  if (t.modulus() != pk.N_squared || t.base() != pk.h_pow_N) {
    throw InvalidArgument("enc_fast: table was not built for this public key");
  }
  BigNat g_m = (1 + m * pk.N) % pk.N_squared;
  return Ciphertext{(g_m * t.pow(r)) % pk.N_squared};
}

Ciphertext enc_fast(const PublicKey& pk, const PrecompTable& t,
                    const BigNat& m, RandomSource& rs) {
  return enc_fast_with_r(pk, t, m, sample_bits(rs, pk.r_bits));
}

}  // namespace soci
