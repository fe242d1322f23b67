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

#include "soci/modmath.hpp"

#include <array>
#include <string>

#include "soci/errors.hpp"

namespace soci {
namespace {

constexpr std::array<unsigned, 54> kSmallPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,
    47,  53,  59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107,
    109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181,
    191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251};

RandomSource& witness_source() {
  thread_local RandomSource rs;
  return rs;
}

bool miller_rabin_round(const BigNat& n, const BigNat& n_minus_1,
                        const BigNat& d, std::size_t s, const BigNat& a) {
  BigNat x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (std::size_t i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

}  // namespace

BigNat mod_pow(const BigNat& base, const BigNat& exp, const BigNat& modulus) {
  if (modulus <= 1) {
    throw InvalidArgument("mod_pow: modulus must be > 1, got " +
                          modulus.get_str());
  }
  if (exp < 0) throw InvalidArgument("mod_pow: negative exponent");
  BigNat out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           modulus.get_mpz_t());
  return out;
}

BigNat mod_inv(const BigNat& a, const BigNat& modulus) {
  if (modulus <= 1) throw InvalidArgument("mod_inv: modulus must be > 1");
  BigNat out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t()) == 0) {
    BigNat g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t());
    throw NotInvertible(g);
  }
  return out;
}

bool is_probable_prime(const BigNat& n, int rounds) {
  if (n < 2) throw InvalidArgument("is_probable_prime: n < 2");
  if (rounds < 1) throw InvalidArgument("is_probable_prime: rounds < 1");
  for (unsigned p : kSmallPrimes) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  // n > 251 and free of small factors from here on.
  BigNat n_minus_1 = n - 1;
  BigNat d = n_minus_1;
  std::size_t s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  BigNat span = n - 3;  // witnesses drawn from [2, n-2]
  RandomSource& rs = witness_source();
  for (int i = 0; i < rounds; ++i) {
    BigNat a = (i == 0) ? BigNat(2) : sample_below(rs, span) + 2;
    if (!miller_rabin_round(n, n_minus_1, d, s, a)) return false;
  }
  return true;
}

std::size_t bit_length(const BigNat& x) {
  if (x == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

BigNat sample_bits(RandomSource& rs, std::size_t k) {
  if (k == 0) return 0;
  std::vector<std::uint8_t> buf((k + 7) / 8);
  rs.fill(buf);
  unsigned excess = static_cast<unsigned>(buf.size() * 8 - k);
  buf[0] &= static_cast<std::uint8_t>(0xFFu >> excess);
  return from_bytes(buf);
}

BigNat sample_below(RandomSource& rs, const BigNat& bound) {
  if (bound <= 0) throw InvalidArgument("sample_below: bound must be > 0");
  std::size_t k = bit_length(bound);
  for (;;) {
    BigNat v = sample_bits(rs, k);
    if (v < bound) return v;
  }
}

BigNat sample_odd(RandomSource& rs, std::size_t k) {
  if (k < 2) throw InvalidArgument("sample_odd: k must be >= 2");
  BigNat v = sample_bits(rs, k);
  mpz_setbit(v.get_mpz_t(), k - 1);
  mpz_setbit(v.get_mpz_t(), 0);
  return v;
}

BigNat sample_prime(RandomSource& rs, std::size_t k) {
  if (k < 8) throw InvalidArgument("sample_prime: k must be >= 8");
  for (;;) {
    BigNat v = sample_odd(rs, k);
    if (is_probable_prime(v)) return v;
  }
}

BigNat sample_unit(RandomSource& rs, const BigNat& n) {
  if (n <= 1) throw InvalidArgument("sample_unit: modulus must be > 1");
  for (;;) {
    BigNat y = sample_below(rs, n);
    if (y == 0) continue;
    BigNat g;
    mpz_gcd(g.get_mpz_t(), y.get_mpz_t(), n.get_mpz_t());
    if (g == 1) return y;
  }
}

std::vector<std::uint8_t> to_bytes(const BigNat& x) {
  if (x < 0) throw InvalidArgument("to_bytes: negative value");
  if (x == 0) return {};
  std::vector<std::uint8_t> out((bit_length(x) + 7) / 8);
  std::size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, x.get_mpz_t());
  out.resize(written);
  return out;
}

BigNat from_bytes(std::span<const std::uint8_t> bytes) {
  BigNat out;
  if (!bytes.empty()) {
    mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return out;
}

}  // namespace soci
