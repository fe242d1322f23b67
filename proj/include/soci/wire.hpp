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

#ifndef SOCI_WIRE_HPP
#define SOCI_WIRE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "soci/modmath.hpp"

namespace soci::wire {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

void put_u32(Bytes& out, std::uint32_t v);
void put_u64(Bytes& out, std::uint64_t v);
std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t offset);
std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t offset);

// WireBigInt: 4-byte big-endian length, then the minimal big-endian
// magnitude (zero has length 0).
void put_bigint(Bytes& out, const BigNat& v);
// Reads one WireBigInt at `offset` and advances it. Throws FrameDecodeError
// on truncation or a non-minimal encoding.
BigNat get_bigint(std::span<const std::uint8_t> in, std::size_t& offset);
// Encoded size of v: 4 + magnitude bytes.
std::size_t bigint_size(const BigNat& v);

Digest sha256(std::span<const std::uint8_t> data);

}  // namespace soci::wire

#endif  // SOCI_WIRE_HPP
