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

#ifndef SOCI_CLI_HPP
#define SOCI_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "soci/modmath.hpp"
#include "soci/transport.hpp"

// Command implementations behind the `soci` tool. Each returns a process
// exit code and writes human output to `out`, diagnostics to `err`.
namespace soci::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitCrypto = 2,
  kExitTransport = 3,
};

inline constexpr const char* kAddrEnv = "SOCI_ADDR";
inline constexpr const char* kDefaultAddr = "127.0.0.1:7878";

// $SOCI_ADDR or the built-in default.
std::string default_address();

struct KeygenOptions {
  std::size_t bits = 2048;
  std::size_t sigma = 128;
  unsigned long eta = 0;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
};
int cmd_keygen(const KeygenOptions& o, std::ostream& out, std::ostream& err);

struct ServeOptions {
  std::filesystem::path keys = ".";
  std::string listen;
  std::size_t l = 32;
  std::optional<std::uint64_t> seed;
  // Called once the listener is bound; tests use it to learn the port and
  // to stop the server via TcpListener::close().
  std::function<void(TcpListener&)> on_ready;
};
int cmd_serve(const ServeOptions& o, std::ostream& out, std::ostream& err);

struct RunOptions {
  std::string op;  // smul | scmp | ssba | sdiv
  BigInt x = 0;
  BigInt y = 0;
  std::size_t l = 32;
  std::string connect;  // host:port; empty with local = true
  bool local = false;
  bool reveal = false;
  std::filesystem::path keys;  // empty with local: ephemeral keys
  std::size_t bits = 1024;     // ephemeral key size
  std::optional<std::uint64_t> seed;
};
int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err);

struct BenchOptions {
  std::string protocol = "smul";  // smul | scmp | ssba | sdiv | all
  std::size_t iters = 500;
  std::size_t bits = 2048;
  std::optional<std::size_t> l;   // default 32, or 10 for sdiv
  std::filesystem::path json_out;
  double bandwidth_mbps = 0.0;    // 0: no modelled transfer time
  std::optional<std::uint64_t> seed;
};
int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err);

struct SelftestOptions {
  std::filesystem::path keys;  // empty: generate a fresh key set
  std::size_t bits = 2048;
  std::size_t samples = 8;
  std::optional<std::uint64_t> seed;
};
int cmd_selftest(const SelftestOptions& o, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to the commands above.
int main_entry(int argc, char** argv);

}  // namespace soci::cli

#endif  // SOCI_CLI_HPP
