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

#include "soci/wire.hpp"

#include <openssl/evp.h>

#include "soci/errors.hpp"

namespace soci::wire {

void put_u32(Bytes& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_u64(Bytes& out, std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t offset) {
  if (offset + 4 > in.size()) throw FrameDecodeError("truncated u32", offset);
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) v = (v << 8) | in[offset + i];
  return v;
}

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t offset) {
  if (offset + 8 > in.size()) throw FrameDecodeError("truncated u64", offset);
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | in[offset + i];
  return v;
}

void put_bigint(Bytes& out, const BigNat& v) {
  Bytes mag = to_bytes(v);
  put_u32(out, static_cast<std::uint32_t>(mag.size()));
  out.insert(out.end(), mag.begin(), mag.end());
}

BigNat get_bigint(std::span<const std::uint8_t> in, std::size_t& offset) {
  std::uint32_t len = get_u32(in, offset);
  std::size_t start = offset + 4;
  if (len > in.size() - start) {
    throw FrameDecodeError("truncated integer magnitude", start);
  }
  if (len > 0 && in[start] == 0) {
    throw FrameDecodeError("non-minimal integer encoding", start);
  }
  BigNat v = from_bytes(in.subspan(start, len));
  offset = start + len;
  return v;
}

std::size_t bigint_size(const BigNat& v) { return 4 + (bit_length(v) + 7) / 8; }

Digest sha256(std::span<const std::uint8_t> data) {
  Digest d{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), d.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("sha256 failed");
  }
  return d;
}

}  // namespace soci::wire
