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

#include <gtest/gtest.h>

#include "soci/errors.hpp"
#include "soci/fastpai.hpp"
#include "test_support.hpp"

namespace soci {
namespace {

using testing::naive_pow;
using testing::small_keys;

FactorWitness toy_witness() {
  auto w = assemble_witness(3, 5, 7, 13);
  EXPECT_TRUE(w.has_value());
  return *w;
}

TEST(NGen, ToyWitnessByHand) {
  FactorWitness w = toy_witness();
  EXPECT_EQ(w.P, 2 * 3 * 7 + 1);
  EXPECT_EQ(w.Q, 2 * 5 * 13 + 1);
  EXPECT_EQ(w.N(), 5633);
}

TEST(NGen, RejectsCompositeQ) {
  // Q = 2*5*11 + 1 = 111 = 3 * 37.
  EXPECT_FALSE(assemble_witness(3, 5, 7, 11).has_value());
}

TEST(NGen, RejectsSharedFactors) {
  // P = 2*3*3+1 = 19 and Q = 2*5*7+1 = 71 are prime but p == p'.
  EXPECT_FALSE(assemble_witness(3, 5, 3, 7).has_value());
}

TEST(NGen, StructuralBoundsAt1024) {
  RandomSource rs = RandomSource::deterministic(11);
  SecurityParams params = SecurityParams::for_modulus(1024);
  FactorWitness w = ngen(params, rs);
  std::size_t n = bit_length(w.N());
  EXPECT_TRUE(n == 1024 || n == 1023) << n;
  EXPECT_EQ(bit_length(w.p), params.l_len / 2);
  EXPECT_EQ(bit_length(w.q), params.l_len / 2);
  EXPECT_EQ(w.P, 2 * w.p * w.p_dash + 1);
  EXPECT_EQ(w.Q, 2 * w.q * w.q_dash + 1);
  EXPECT_TRUE(is_probable_prime(w.P));
  EXPECT_TRUE(is_probable_prime(w.Q));
  const BigNat parts[] = {w.p, w.q, w.p_dash, w.q_dash};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) EXPECT_EQ(gcd(parts[i], parts[j]), 1);
  }
}

TEST(SecurityParams, ProfilesAndValidation) {
  SecurityParams p = SecurityParams::for_modulus(2048);
  EXPECT_EQ(p.kappa, 112u);
  EXPECT_EQ(p.l_len, 448u);
  EXPECT_EQ(p.sigma, 128u);
  EXPECT_EQ(p.table_block, 5u);
  EXPECT_EQ(p.table_len, 448u);
  EXPECT_NO_THROW(p.validate());
  p.table_block = 17;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = SecurityParams::for_modulus(2048);
  p.l_len = 447;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = SecurityParams::for_modulus(2048);
  p.sigma = 64;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(KeyGen, ToyKeyAlphaBeta) {
  FactorWitness w = toy_witness();
  BigNat alpha = w.p * w.q;
  EXPECT_EQ(alpha, 15);
  BigNat num = (w.P - 1) * (w.Q - 1);
  EXPECT_EQ(num % (4 * alpha), 0);
  EXPECT_EQ(num / (4 * alpha), 91);
  RandomSource rs = RandomSource::deterministic(12);
  KeyPair kp = keygen_from_witness(w, 8, rs);
  EXPECT_EQ(kp.sk.alpha, 15);
  EXPECT_EQ(kp.pk.N, 5633);
  EXPECT_EQ(kp.pk.N_squared, BigNat(5633) * 5633);
  EXPECT_EQ(kp.pk.h_pow_N, naive_pow(kp.pk.h, 5633, kp.pk.N_squared));
  for (BigNat m = 0; m < 60; ++m) EXPECT_EQ(dec(kp.sk, enc(kp.pk, m, rs)), m);
}

TEST(KeyGen, Invariants) {
  const auto& k = small_keys();
  EXPECT_EQ(gcd(BigNat(2 * k.kp.sk.alpha), k.kp.pk.N), 1);
  RandomSource rs = RandomSource::deterministic(13);
  EXPECT_EQ(dec(k.kp.sk, enc(k.kp.pk, 0, rs)), 0);
}

TEST(Encode, SignedMapping) {
  EXPECT_EQ(encode(5, 5633), 5);
  EXPECT_EQ(encode(-3, 5633), 5630);
  EXPECT_EQ(encode(0, 5633), 0);
  EXPECT_EQ(decode(5630, 5633), -3);
  EXPECT_EQ(decode(2816, 5633), 2816);
  EXPECT_EQ(decode(2817, 5633), 2817 - 5633);
  EXPECT_THROW(encode(1409, 5633), EncodeRange);
  EXPECT_THROW(encode(-1409, 5633), EncodeRange);
  EXPECT_THROW(decode(5633, 5633), InvalidArgument);
  const BigNat& N = small_keys().kp.pk.N;
  RandomSource rs = RandomSource::deterministic(14);
  const BigInt bound = BigInt(1) << 32;
  for (int i = 0; i < 200; ++i) {
    BigInt x = BigInt(sample_below(rs, 2 * bound + 1)) - bound;
    EXPECT_EQ(decode(encode(x, N), N), x);
  }
}

TEST(Enc, ToyKeyMatchesDirectFormula) {
  FactorWitness w = toy_witness();
  RandomSource rs = RandomSource::deterministic(15);
  KeyPair kp = keygen_from_witness(w, 8, rs);
  const BigNat N = kp.pk.N;
  const BigNat N2 = N * N;
  for (BigNat m : {BigNat(0), BigNat(1), BigNat(42), BigNat(5632)}) {
    for (BigNat r : {BigNat(0), BigNat(1), BigNat(77), BigNat(255)}) {
      BigNat g = 1;
      for (BigNat i = 0; i < m; ++i) g = (g * (1 + N)) % N2;
      BigNat hr = 1;
      for (BigNat i = 0; i < r; ++i) hr = (hr * kp.pk.h) % N;
      BigNat masked = 1;
      for (BigNat i = 0; i < N; ++i) masked = (masked * hr) % N2;
      BigNat expect = (g * masked) % N2;
      EXPECT_EQ(enc_direct_with_r(kp.pk, m, r).value, expect);
      EXPECT_EQ(enc_with_r(kp.pk, m, r).value, expect);
    }
  }
}

TEST(Dec, ToyKeyMatchesDecryptionFormula) {
  FactorWitness w = toy_witness();
  RandomSource rs = RandomSource::deterministic(16);
  KeyPair kp = keygen_from_witness(w, 8, rs);
  const BigNat N = 5633, N2 = N * N;
  BigNat inv30 = 0;
  for (BigNat t = 1; t < N; ++t) {
    if ((t * 30) % N == 1) {
      inv30 = t;
      break;
    }
  }
  for (int i = 0; i < 40; ++i) {
    Ciphertext c = enc(kp.pk, sample_below(rs, N), rs);
    BigNat u = 1;
    for (int j = 0; j < 30; ++j) u = (u * c.value) % N2;
    ASSERT_EQ((u - 1) % N, 0);
    BigNat expect = (((u - 1) / N) * inv30) % N;
    EXPECT_EQ(dec(kp.sk, c), expect);
  }
}

TEST(Enc, BothFormsAgreeAndRoundTrip) {
  const auto& k = small_keys();
  RandomSource rs = RandomSource::deterministic(17);
  for (int i = 0; i < 100; ++i) {
    BigNat m = sample_below(rs, k.kp.pk.N);
    BigNat r = sample_bits(rs, k.kp.pk.r_bits);
    EXPECT_EQ(enc_with_r(k.kp.pk, m, r), enc_direct_with_r(k.kp.pk, m, r));
    EXPECT_EQ(dec(k.kp.sk, enc(k.kp.pk, m, rs)), m);
  }
  BigNat m = 123;
  EXPECT_NE(enc(k.kp.pk, m, rs), enc(k.kp.pk, m, rs));
  EXPECT_EQ(dec(k.kp.sk, enc_with_r(k.kp.pk, 7, 12345)), 7);
  EXPECT_EQ(enc_with_r(k.kp.pk, 9, 0).value,
            (1 + 9 * k.kp.pk.N) % k.kp.pk.N_squared);
  EXPECT_EQ(enc_with_r(k.kp.pk, 0, 0).value, 1);
  EXPECT_THROW(enc(k.kp.pk, k.kp.pk.N, rs), InvalidArgument);
}

TEST(Dec, RejectsMalformedCiphertexts) {
  const auto& k = small_keys();
  EXPECT_THROW(dec(k.kp.sk, Ciphertext{k.kp.pk.N_squared}), MalformedCiphertext);
  EXPECT_THROW(dec(k.kp.sk, Ciphertext{2}), MalformedCiphertext);
}

TEST(Homomorphic, AddScaleSubtract) {
  const auto& k = small_keys();
  const PublicKey& pk = k.kp.pk;
  const PrivateKey& sk = k.kp.sk;
  RandomSource rs = RandomSource::deterministic(18);
  auto E = [&](const BigInt& v) { return enc(pk, encode(v, pk.N), rs); };
  auto D = [&](const Ciphertext& c) { return decode(dec(sk, c), pk.N); };
  EXPECT_EQ(D(hom_add(pk, E(2), E(3))), 5);
  Ciphertext c = E(77);
  EXPECT_EQ(D(hom_add(pk, c, enc_with_r(pk, 0, 0))), 77);
  EXPECT_EQ(D(hom_add(pk, E(-4), E(9))), 5);
  EXPECT_EQ(D(hom_scal(pk, E(3), 4)), 12);
  EXPECT_EQ(D(hom_scal(pk, c, 1)), 77);
  EXPECT_EQ(dec(sk, hom_scal(pk, E(3), pk.N - 1)), pk.N - 3);
  EXPECT_EQ(D(hom_scal_signed(pk, E(6), -7)), -42);
  EXPECT_EQ(D(hom_neg(pk, E(11))), -11);
  EXPECT_EQ(D(hom_sub(pk, E(3), E(5))), -2);
  EXPECT_EQ(D(hom_sub(pk, c, c)), 0);
  EXPECT_THROW(hom_scal(pk, c, pk.N), InvalidArgument);
  const BigInt bound = BigInt(1) << 40;
  for (int i = 0; i < 100; ++i) {
    BigInt a = BigInt(sample_below(rs, 2 * bound + 1)) - bound;
    BigInt b = BigInt(sample_below(rs, 2 * bound + 1)) - bound;
    EXPECT_EQ(D(hom_sub(pk, E(a), E(b))), a - b);
    EXPECT_EQ(D(hom_add(pk, E(a), E(b))), a + b);
  }
}

TEST(Homomorphic, SubtractionMatchesScalarForm) {
  const auto& k = small_keys();
  const PublicKey& pk = k.kp.pk;
  RandomSource rs = RandomSource::deterministic(19);
  Ciphertext a = enc(pk, 50, rs), b = enc(pk, 8, rs);
  EXPECT_EQ(dec(k.kp.sk, hom_sub(pk, a, b)),
            dec(k.kp.sk, hom_add(pk, a, hom_scal(pk, b, pk.N - 1))));
}

TEST(PublicKey, RangeCheck) {
  const PublicKey& pk = small_keys().kp.pk;
  EXPECT_TRUE(in_ciphertext_range(pk, 1));
  EXPECT_FALSE(in_ciphertext_range(pk, 0));
  EXPECT_FALSE(in_ciphertext_range(pk, pk.N_squared));
}

}  // namespace
}  // namespace soci
