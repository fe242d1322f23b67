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

#include "soci/fastpai.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "soci/errors.hpp"

namespace soci {
namespace {

bool coprime(const BigNat& a, const BigNat& b) {
  BigNat g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g == 1;
}

bool pairwise_coprime(const BigNat& p, const BigNat& q, const BigNat& pd,
                      const BigNat& qd) {
  return coprime(p, q) && coprime(p, pd) && coprime(p, qd) &&
         coprime(q, pd) && coprime(q, qd) && coprime(pd, qd);
}

// Draws (small, dash) until 2*small*dash + 1 is a prime of exactly
// `prime_bits` bits. Counts every candidate against `budget`.
std::pair<BigNat, BigNat> sample_structured_prime(RandomSource& rs,
                                                  std::size_t small_bits,
                                                  std::size_t dash_bits,
                                                  std::size_t prime_bits,
                                                  long& budget) {
  for (;;) {
    if (budget-- <= 0) {
      throw GenerationFailure("ngen: iteration cap reached");
    }
    BigNat small = sample_prime(rs, small_bits);
    BigNat dash = sample_odd(rs, dash_bits);
    BigNat P = 2 * small * dash + 1;
    if (bit_length(P) != prime_bits) continue;
    if (is_probable_prime(P)) return {std::move(small), std::move(dash)};
  }
}

}  // namespace

SecurityParams SecurityParams::for_modulus(std::size_t n_len) {
  SecurityParams p;
  p.n_len = n_len;
  switch (n_len) {
    case 1024:
      p.kappa = 80;
      p.l_len = 320;
      break;
    case 2048:
      p.kappa = 112;
      p.l_len = 448;
      break;
    case 3072:
      p.kappa = 128;
      p.l_len = 512;
      break;
    default:
      p.kappa = 0;
      p.l_len = std::max<std::size_t>(16, (n_len / 4) & ~std::size_t{1});
      break;
  }
  p.table_len = p.l_len;
  return p;
}

void SecurityParams::validate() const {
  auto fail = [](const std::string& what) {
    throw InvalidArgument("invalid security parameters: " + what);
  };
  if (n_len % 2 != 0) fail("n_len must be even");
  if (l_len % 2 != 0) fail("l_len must be even");
  if (l_len >= n_len) fail("l_len must be smaller than n_len");
  if (l_len / 2 < 8) fail("l_len must be at least 16");
  if ((n_len - l_len) / 2 < 3) fail("n_len - l_len too small");
  if (sigma < 128) fail("sigma must be at least 128");
  if (table_block < 1 || table_block > 16) fail("table_block must be in [1,16]");
  if (table_len < 1) fail("table_len must be positive");
}

std::optional<FactorWitness> assemble_witness(const BigNat& p, const BigNat& q,
                                              const BigNat& p_dash,
                                              const BigNat& q_dash) {
  if (!pairwise_coprime(p, q, p_dash, q_dash)) return std::nullopt;
  FactorWitness w{2 * p * p_dash + 1, 2 * q * q_dash + 1, p, q, p_dash, q_dash};
  if (!is_probable_prime(w.P) || !is_probable_prime(w.Q)) return std::nullopt;
  return w;
}

FactorWitness ngen(const SecurityParams& params, RandomSource& rs) {
  params.validate();
  const std::size_t small_bits = params.l_len / 2;
  const std::size_t dash_bits = (params.n_len - params.l_len) / 2 - 1;
  const std::size_t prime_bits = params.n_len / 2;
  long budget = kNgenIterationCap;
  for (;;) {
    auto [p, p_dash] =
        sample_structured_prime(rs, small_bits, dash_bits, prime_bits, budget);
    auto [q, q_dash] =
        sample_structured_prime(rs, small_bits, dash_bits, prime_bits, budget);
    if (!pairwise_coprime(p, q, p_dash, q_dash)) continue;
    return FactorWitness{2 * p * p_dash + 1, 2 * q * q_dash + 1, p, q, p_dash,
                         q_dash};
  }
}

PublicKey PublicKey::make(BigNat N, BigNat h, std::size_t r_bits) {
  if (N < 3 || mpz_even_p(N.get_mpz_t())) {
    throw InvalidArgument("public key: N must be odd and > 2");
  }
  if (h <= 1 || h >= N) throw InvalidArgument("public key: h out of range");
  PublicKey pk;
  pk.N_squared = N * N;
  pk.h_pow_N = mod_pow(h, N, pk.N_squared);
  pk.half_N = N / 2;
  pk.N = std::move(N);
  pk.h = std::move(h);
  pk.r_bits = r_bits;
  return pk;
}

KeyPair keygen_from_witness(const FactorWitness& w, std::size_t r_bits,
                            RandomSource& rs) {
  BigNat N = w.N();
  BigNat alpha = w.p * w.q;
  BigNat num = (w.P - 1) * (w.Q - 1);
  BigNat den = 4 * alpha;
  if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) {
    throw GenerationFailure("keygen: beta is not integral");
  }
  BigNat beta = num / den;
  BigNat y = sample_unit(rs, N);
  BigNat h = (N - mod_pow(y, 2 * beta, N)) % N;
  return KeyPair{PublicKey::make(N, std::move(h), r_bits),
                 PrivateKey{std::move(alpha), N}};
}

KeyPair keygen(const SecurityParams& params, RandomSource& rs) {
  FactorWitness w = ngen(params, rs);
  return keygen_from_witness(w, params.l_len, rs);
}

BigNat encode(const BigInt& x, const BigNat& N) {
  BigNat mag = abs(x);
  if (4 * mag >= N) {
    throw EncodeRange("encode: |" + x.get_str() + "| is outside N/4");
  }
  if (x >= 0) return x;
  return N - mag;
}

BigInt decode(const BigNat& m, const BigNat& N) {
  if (m < 0 || m >= N) throw InvalidArgument("decode: value outside [0, N)");
  if (m <= N / 2) return m;
  return m - N;
}

Ciphertext enc_direct_with_r(const PublicKey& pk, const BigNat& m,
                             const BigNat& r) {
  if (m < 0 || m >= pk.N) throw InvalidArgument("enc: message outside [0, N)");
  if (r < 0) throw InvalidArgument("enc: negative randomness");
  // (1+N)^m = 1 + mN mod N^2.
  BigNat g_m = (1 + m * pk.N) % pk.N_squared;
  BigNat rho = mod_pow(pk.h, r, pk.N);
  BigNat noise = mod_pow(rho, pk.N, pk.N_squared);
  return Ciphertext{(g_m * noise) % pk.N_squared};
}

Ciphertext enc(const PublicKey& pk, const BigNat& m, RandomSource& rs) {
  return enc_direct_with_r(pk, m, sample_bits(rs, pk.r_bits));
}

Ciphertext enc_with_r(const PublicKey& pk, const BigNat& m, const BigNat& r) {
  if (m < 0 || m >= pk.N) throw InvalidArgument("enc: message outside [0, N)");
  if (r < 0) throw InvalidArgument("enc: negative randomness");
  BigNat g_m = (1 + m * pk.N) % pk.N_squared;
  return Ciphertext{(g_m * mod_pow(pk.h_pow_N, r, pk.N_squared)) %
                    pk.N_squared};
}

BigNat dec(const PrivateKey& sk, const Ciphertext& c) {
  const BigNat n2 = sk.N * sk.N;
  if (c.value <= 0 || c.value >= n2) {
    throw MalformedCiphertext("dec: ciphertext outside (0, N^2)");
  }
  BigNat two_alpha = 2 * sk.alpha;
  BigNat u = mod_pow(c.value, two_alpha, n2) - 1;
  if (!mpz_divisible_p(u.get_mpz_t(), sk.N.get_mpz_t())) {
    throw MalformedCiphertext("dec: N does not divide c^(2 alpha) - 1");
  }
  BigNat l = (u / sk.N) % sk.N;
  return (l * mod_inv(two_alpha, sk.N)) % sk.N;
}

Ciphertext hom_add(const PublicKey& pk, const Ciphertext& a,
                   const Ciphertext& b) {
  return Ciphertext{(a.value * b.value) % pk.N_squared};
}

Ciphertext hom_scal(const PublicKey& pk, const Ciphertext& c, const BigNat& k) {
  if (k < 0 || k >= pk.N) throw InvalidArgument("hom_scal: k outside [0, N)");
  return Ciphertext{mod_pow(c.value, k, pk.N_squared)};
}

Ciphertext hom_neg(const PublicKey& pk, const Ciphertext& c) {
  return Ciphertext{mod_inv(c.value, pk.N_squared)};
}

Ciphertext hom_scal_signed(const PublicKey& pk, const Ciphertext& c,
                           const BigInt& k) {
  if (k >= 0) return Ciphertext{mod_pow(c.value, k, pk.N_squared)};
  return Ciphertext{mod_pow(hom_neg(pk, c).value, -k, pk.N_squared)};
}

Ciphertext hom_sub(const PublicKey& pk, const Ciphertext& a,
                   const Ciphertext& b) {
  return hom_add(pk, a, hom_neg(pk, b));
}

bool in_ciphertext_range(const PublicKey& pk, const BigNat& value) {
  return value > 0 && value < pk.N_squared;
}

}  // namespace soci
