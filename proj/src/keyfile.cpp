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

#include "soci/keyfile.hpp"

#include <sys/stat.h>

#include <fstream>
#include <sstream>

#include "soci/errors.hpp"

namespace soci::keyfile {
namespace {

std::string hex(const BigNat& v) { return v.get_str(16); }

Fields param_fields(const SecurityParams& p) {
  return {{"params.kappa", std::to_string(p.kappa)},
          {"params.n_len", std::to_string(p.n_len)},
          {"params.l_len", std::to_string(p.l_len)},
          {"params.sigma", std::to_string(p.sigma)},
          {"params.table_block", std::to_string(p.table_block)},
          {"params.table_len", std::to_string(p.table_len)}};
}

Fields public_fields(const SecurityParams& params, const PublicKey& pk) {
  Fields f = param_fields(params);
  f.emplace_back("pk.N", hex(pk.N));
  f.emplace_back("pk.h", hex(pk.h));
  return f;
}

const std::string& need(const std::map<std::string, std::string>& m,
                        const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw KeyFileError("key file is missing field " + key);
  return it->second;
}

BigNat need_hex(const std::map<std::string, std::string>& m,
                const std::string& key) {
  const std::string& s = need(m, key);
  if (s.empty() || s.find_first_not_of("0123456789abcdef") != std::string::npos) {
    throw KeyFileError("field " + key + " is not lowercase hex");
  }
  return BigNat(s, 16);
}

std::size_t need_dec(const std::map<std::string, std::string>& m,
                     const std::string& key) {
  const std::string& s = need(m, key);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw KeyFileError("field " + key + " is not a decimal integer");
  }
  return static_cast<std::size_t>(std::stoull(s));
}

PublicBundle parse_public(const std::map<std::string, std::string>& m) {
  PublicBundle b;
  b.params.kappa = static_cast<int>(need_dec(m, "params.kappa"));
  b.params.n_len = need_dec(m, "params.n_len");
  b.params.l_len = need_dec(m, "params.l_len");
  b.params.sigma = need_dec(m, "params.sigma");
  b.params.table_block = need_dec(m, "params.table_block");
  b.params.table_len = need_dec(m, "params.table_len");
  try {
    b.params.validate();
    b.pk = PublicKey::make(need_hex(m, "pk.N"), need_hex(m, "pk.h"),
                           b.params.l_len);
  } catch (const InvalidArgument& e) {
    throw KeyFileError(e.what());
  }
  return b;
}

}  // namespace

void write_fields(const std::filesystem::path& path, const Fields& fields,
                  bool private_file) {
  std::ostringstream body;
  for (const auto& [k, v] : fields) body << k << '=' << v << '\n';
  {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw KeyFileError("cannot write " + path.string());
    if (private_file) {
      std::filesystem::permissions(path, std::filesystem::perms::owner_read |
                                             std::filesystem::perms::owner_write,
                                   std::filesystem::perm_options::replace);
    }
    f << body.str();
    if (!f) throw KeyFileError("failed writing " + path.string());
  }
}

std::map<std::string, std::string> read_fields(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw KeyFileError("cannot read " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw KeyFileError(path.string() + ":" + std::to_string(lineno) +
                         ": expected name=value");
    }
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

void save_public(const std::filesystem::path& path, const SecurityParams& params,
                 const PublicKey& pk) {
  write_fields(path, public_fields(params, pk), false);
}

void save_master(const std::filesystem::path& path, const SecurityParams& params,
                 const PublicKey& pk, const PrivateKey& sk) {
  Fields f = public_fields(params, pk);
  f.emplace_back("sk.alpha", hex(sk.alpha));
  write_fields(path, f, true);
}

void save_share(const std::filesystem::path& path, const SecurityParams& params,
                const PublicKey& pk, const PartialKey& share) {
  Fields f = public_fields(params, pk);
  f.emplace_back("share.index", hex(share.index));
  f.emplace_back("share.value", hex(share.share));
  write_fields(path, f, true);
}

PublicBundle load_public(const std::filesystem::path& path) {
  return parse_public(read_fields(path));
}

MasterBundle load_master(const std::filesystem::path& path) {
  auto m = read_fields(path);
  PublicBundle pb = parse_public(m);
  return MasterBundle{pb.params, pb.pk, PrivateKey{need_hex(m, "sk.alpha"), pb.pk.N}};
}

ShareBundle load_share(const std::filesystem::path& path) {
  auto m = read_fields(path);
  PublicBundle pb = parse_public(m);
  BigNat index = need_hex(m, "share.index");
  if (index != 1 && index != 2) throw KeyFileError("share.index must be 1 or 2");
  return ShareBundle{pb.params, pb.pk,
                     PartialKey{static_cast<int>(index.get_si()),
                                need_hex(m, "share.value"), pb.pk.N}};
}

wire::Digest public_key_digest(const PublicKey& pk) {
  wire::Bytes b;
  wire::put_bigint(b, pk.N);
  wire::put_bigint(b, pk.h);
  return wire::sha256(b);
}

}  // namespace soci::keyfile
