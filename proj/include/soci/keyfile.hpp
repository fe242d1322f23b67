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

#ifndef SOCI_KEYFILE_HPP
#define SOCI_KEYFILE_HPP

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "soci/fastpai.hpp"
#include "soci/threshold.hpp"
#include "soci/wire.hpp"

// Text key files: one `name=value` record per line. Integers under pk.*,
// sk.* and share.* are lowercase hex without prefix; params.* are decimal.
namespace soci::keyfile {

using Fields = std::vector<std::pair<std::string, std::string>>;

// Private files are created with mode 0600.
void write_fields(const std::filesystem::path& path, const Fields& fields,
                  bool private_file);
std::map<std::string, std::string> read_fields(const std::filesystem::path& path);

struct PublicBundle {
  SecurityParams params;
  PublicKey pk;
};
struct MasterBundle {
  SecurityParams params;
  PublicKey pk;
  PrivateKey sk;
};
struct ShareBundle {
  SecurityParams params;
  PublicKey pk;
  PartialKey share;
};

void save_public(const std::filesystem::path& path, const SecurityParams& params,
                 const PublicKey& pk);
void save_master(const std::filesystem::path& path, const SecurityParams& params,
                 const PublicKey& pk, const PrivateKey& sk);
void save_share(const std::filesystem::path& path, const SecurityParams& params,
                const PublicKey& pk, const PartialKey& share);

// Throw KeyFileError on missing or malformed fields.
PublicBundle load_public(const std::filesystem::path& path);
MasterBundle load_master(const std::filesystem::path& path);
ShareBundle load_share(const std::filesystem::path& path);

// SHA-256 over WireBigInt(N) || WireBigInt(h); sent in the TCP handshake.
wire::Digest public_key_digest(const PublicKey& pk);

}  // namespace soci::keyfile

#endif  // SOCI_KEYFILE_HPP
