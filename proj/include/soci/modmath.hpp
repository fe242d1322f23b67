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

#ifndef SOCI_MODMATH_HPP
#define SOCI_MODMATH_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "soci/random.hpp"

namespace soci {

// Non-negative arbitrary-precision integer. Residues, exponents and moduli
// are all BigNat; BigInt is used where a value is allowed to be negative.
using BigNat = mpz_class;
using BigInt = mpz_class;

inline constexpr int kMillerRabinRounds = 64;

// base^exp mod modulus. Throws InvalidArgument when modulus <= 1 or exp < 0.
BigNat mod_pow(const BigNat& base, const BigNat& exp, const BigNat& modulus);

// t with a*t = 1 (mod modulus), 0 < t < modulus. Throws NotInvertible.
BigNat mod_inv(const BigNat& a, const BigNat& modulus);

// Miller-Rabin with `rounds` random witnesses after small-prime trial
// division. Throws InvalidArgument for n < 2 or rounds < 1.
bool is_probable_prime(const BigNat& n, int rounds = kMillerRabinRounds);

// Number of significant bits; 0 for 0.
std::size_t bit_length(const BigNat& x);

// Uniform in [0, 2^k).
BigNat sample_bits(RandomSource& rs, std::size_t k);
// Uniform in [0, bound). bound must be positive.
BigNat sample_below(RandomSource& rs, const BigNat& bound);
// k-bit probable prime, top bit forced. k >= 8.
BigNat sample_prime(RandomSource& rs, std::size_t k);
// k-bit odd integer, top and bottom bits set. k >= 2.
BigNat sample_odd(RandomSource& rs, std::size_t k);
// Uniform element of the multiplicative group modulo n.
BigNat sample_unit(RandomSource& rs, const BigNat& n);

// Minimal big-endian magnitude; zero encodes as the empty string.
std::vector<std::uint8_t> to_bytes(const BigNat& x);
BigNat from_bytes(std::span<const std::uint8_t> bytes);

}  // namespace soci

#endif  // SOCI_MODMATH_HPP
