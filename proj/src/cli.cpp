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

#include "soci/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "soci/errors.hpp"
#include "soci/fastpai.hpp"
#include "soci/keyfile.hpp"
#include "soci/offline.hpp"
#include "soci/protocols.hpp"
#include "soci/threshold.hpp"

namespace soci::cli {
namespace {

namespace fs = std::filesystem;

RandomSource make_rs(const std::optional<std::uint64_t>& seed,
                     std::uint64_t stream) {
  if (seed) return RandomSource::deterministic(*seed * 0x9E3779B97F4A7C15ull + stream);
  return RandomSource::system();
}

// Maps library exceptions onto exit codes.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const TransportError& e) {
    err << "transport error: " << e.what() << '\n';
    return kExitTransport;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const EncodeRange& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitCrypto;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "io error: " << e.what() << '\n';
    return kExitCrypto;
  }
}

// S1 answering on an in-process channel for the lifetime of the object.
class LocalResponder {
 public:
  explicit LocalResponder(PartyContext& ctx1) {
    auto [a, b] = pair_inmemory();
    client_ = std::move(a);
    server_ = std::move(b);
    thread_ = std::thread([this, &ctx1] { serve(ctx1, *server_); });
  }
  ~LocalResponder() {
    client_->close();
    thread_.join();
  }
  Channel& channel() { return *client_; }

 private:
  std::unique_ptr<Channel> client_;
  std::unique_ptr<Channel> server_;
  std::thread thread_;
};

struct KeySet {
  SecurityParams params;
  PublicKey pk;
  std::optional<PrivateKey> sk;
  std::optional<PartialKey> s0;
  std::optional<PartialKey> s1;
};

KeySet fresh_keys(std::size_t bits, RandomSource& rs) {
  KeySet k;
  k.params = SecurityParams::for_modulus(bits);
  KeyPair kp = keygen(k.params, rs);
  auto [a, b] = split_key(kp.sk, kp.pk, SplitParams{k.params.sigma, 0}, rs);
  k.pk = kp.pk;
  k.sk = kp.sk;
  k.s0 = std::move(a);
  k.s1 = std::move(b);
  return k;
}

void print_stats(std::ostream& out, const ChannelStats& s) {
  out << "stats ciphertexts=" << (s.ciphertexts_sent + s.ciphertexts_received)
      << " ciphertexts_sent=" << s.ciphertexts_sent
      << " ciphertexts_received=" << s.ciphertexts_received
      << " ciphertext_bytes="
      << (s.ciphertext_bytes_sent + s.ciphertext_bytes_received)
      << " frames=" << (s.frames_sent + s.frames_received)
      << " bytes=" << (s.bytes_sent + s.bytes_received) << '\n';
}

BigInt pow2(std::size_t l) { return BigInt(1) << static_cast<mp_bitcnt_t>(l); }

void check_inputs(const std::string& op, const BigInt& x, const BigInt& y,
                  std::size_t l) {
  const BigInt bound = pow2(l);
  if (op == "sdiv") {
    if (x < 0 || x > bound) throw InvalidArgument("sdiv needs 0 <= x <= 2^l");
    if (y <= 0 || y > bound) throw InvalidArgument("sdiv needs 0 < y <= 2^l");
    return;
  }
  if (op != "smul" && op != "scmp" && op != "ssba") {
    throw InvalidArgument("unknown op '" + op + "'");
  }
  if (abs(x) > bound) throw InvalidArgument("x outside [-2^l, 2^l]");
  if (op != "ssba" && abs(y) > bound) throw InvalidArgument("y outside [-2^l, 2^l]");
}

std::vector<Ciphertext> dispatch(const std::string& op, PartyContext& ctx0,
                                 SessionMux& link, const Ciphertext& cx,
                                 const Ciphertext& cy, std::size_t l,
                                 ProtocolTranscript* tr) {
  if (op == "smul") return {smul(ctx0, link, cx, cy, tr)};
  if (op == "scmp") return {scmp(ctx0, link, cx, cy, tr)};
  if (op == "ssba") {
    auto [s, m] = ssba(ctx0, link, cx, tr);
    return {s, m};
  }
  if (op == "sdiv") {
    auto [q, e] = sdiv(ctx0, link, cx, cy, l, tr);
    return {q, e};
  }
  throw InvalidArgument("unknown op '" + op + "'");
}

std::vector<BigInt> reveal(const PrivateKey& sk, const PublicKey& pk,
                           const std::vector<Ciphertext>& cts) {
  std::vector<BigInt> out;
  for (const auto& c : cts) out.push_back(decode(dec(sk, c), pk.N));
  return out;
}

std::string format_result(const std::string& op, const std::vector<BigInt>& v) {
  std::ostringstream s;
  if (op == "smul") s << "product=" << v[0];
  if (op == "scmp") s << "mu=" << v[0];
  if (op == "ssba") s << "s=" << v[0] << " mag=" << v[1];
  if (op == "sdiv") s << "q=" << v[0] << " e=" << v[1];
  return s.str();
}

std::vector<BigInt> oracle_result(const std::string& op, const BigInt& x,
                                  const BigInt& y) {
  if (op == "smul") return {oracle::mul(x, y)};
  if (op == "scmp") return {BigInt(oracle::cmp(x, y))};
  if (op == "ssba") {
    auto [s, m] = oracle::ssba(x);
    return {BigInt(s), m};
  }
  auto [q, e] = oracle::divmod(x, y);
  return {q, e};
}

BigInt random_in(RandomSource& rs, const BigInt& lo, const BigInt& hi) {
  return lo + sample_below(rs, hi - lo + 1);
}

std::pair<BigInt, BigInt> random_operands(const std::string& op, std::size_t l,
                                          RandomSource& rs) {
  const BigInt b = pow2(l);
  if (op == "sdiv") return {random_in(rs, 0, b), random_in(rs, 1, b)};
  return {random_in(rs, -b, b), random_in(rs, -b, b)};
}

std::size_t expected_cts(const std::string& op, std::size_t l) {
  if (op == "smul") return expected_ciphertexts_smul();
  if (op == "scmp") return expected_ciphertexts_scmp();
  if (op == "ssba") return expected_ciphertexts_ssba();
  return expected_ciphertexts_sdiv(l);
}

std::atomic<TcpListener*> g_listener{nullptr};

extern "C" void on_stop_signal(int) {
  TcpListener* l = g_listener.load();
  if (l) l->close();
}

}  // namespace

std::string default_address() {
  const char* env = std::getenv(kAddrEnv);
  return (env && *env) ? std::string(env) : std::string(kDefaultAddr);
}

int cmd_keygen(const KeygenOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    SecurityParams params = SecurityParams::for_modulus(o.bits);
    params.sigma = o.sigma;
    params.validate();
    RandomSource rs = make_rs(o.seed, 1);
    KeyPair kp = keygen(params, rs);
    auto [s0, s1] = split_key(kp.sk, kp.pk, SplitParams{params.sigma, o.eta}, rs);
    fs::create_directories(o.out_dir);
    keyfile::save_public(o.out_dir / "public.key", params, kp.pk);
    keyfile::save_master(o.out_dir / "master.key", params, kp.pk, kp.sk);
    keyfile::save_share(o.out_dir / "s0.key", params, kp.pk, s0);
    keyfile::save_share(o.out_dir / "s1.key", params, kp.pk, s1);
    out << "wrote public.key master.key s0.key s1.key to " << o.out_dir.string()
        << " (N: " << bit_length(kp.pk.N) << " bits)\n";
    return kExitOk;
  });
}

int cmd_serve(const ServeOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    keyfile::ShareBundle keys = keyfile::load_share(o.keys / "s1.key");
    if (keys.share.index != 2) throw InvalidArgument("serve needs the S1 share");
    auto ctx1 = make_s1_context(keys.pk, keys.share, keys.params, o.l,
                                make_rs(o.seed, 2));
    const wire::Digest digest = keyfile::public_key_digest(keys.pk);
    const std::string addr = o.listen.empty() ? default_address() : o.listen;
    auto listener = listen_tcp(addr);
    out << "listening on port " << listener->port() << std::endl;

    TcpListener* previous = g_listener.exchange(listener.get());
    auto old_int = std::signal(SIGINT, on_stop_signal);
    auto old_term = std::signal(SIGTERM, on_stop_signal);
    if (o.on_ready) o.on_ready(*listener);

    std::mutex log_mu;
    std::mutex conn_mu;
    std::vector<std::shared_ptr<Channel>> conns;
    std::vector<std::thread> workers;
    std::uint64_t next_conn = 1;
    for (;;) {
      std::unique_ptr<Channel> accepted = listener->accept();
      if (!accepted) break;
      std::shared_ptr<Channel> ch(std::move(accepted));
      const std::uint64_t id = next_conn++;
      {
        std::lock_guard<std::mutex> lock(conn_mu);
        conns.push_back(ch);
      }
      workers.emplace_back([&, ch, id] {
        std::string reason;
        try {
          if (!server_hello(*ch, digest, &reason)) {
            std::lock_guard<std::mutex> lock(log_mu);
            err << "ERROR connection " << id << " handshake: " << reason << '\n';
            return;
          }
          ServeSummary s = serve(*ctx1, *ch);
          std::lock_guard<std::mutex> lock(log_mu);
          out << "connection " << id << " closed requests=" << s.requests
              << " errors=" << s.errors << ' ';
          print_stats(out, s.stats);
        } catch (const Error& e) {
          std::lock_guard<std::mutex> lock(log_mu);
          err << "ERROR connection " << id << ": " << e.what() << '\n';
        }
      });
    }
    {
      std::lock_guard<std::mutex> lock(conn_mu);
      for (auto& c : conns) c->close();
    }
    for (auto& w : workers) w.join();
    std::signal(SIGINT, old_int);
    std::signal(SIGTERM, old_term);
    g_listener.store(previous);
    out << "server stopped" << std::endl;
    return kExitOk;
  });
}

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.local == !o.connect.empty()) {
      throw InvalidArgument("give exactly one of --local or --connect");
    }
    check_inputs(o.op, o.x, o.y, o.l);
    RandomSource rs = make_rs(o.seed, 3);

    KeySet k;
    if (o.keys.empty()) {
      if (!o.local) throw InvalidArgument("--connect needs --keys");
      k = fresh_keys(o.bits, rs);
    } else {
      keyfile::ShareBundle b0 = keyfile::load_share(o.keys / "s0.key");
      k.params = b0.params;
      k.pk = b0.pk;
      k.s0 = b0.share;
      if (o.local) {
        keyfile::ShareBundle b1 = keyfile::load_share(o.keys / "s1.key");
        if (!(b1.pk == k.pk)) throw KeyFileError("s0.key and s1.key differ in pk");
        k.s1 = b1.share;
      }
      if (o.reveal) {
        keyfile::MasterBundle m = keyfile::load_master(o.keys / "master.key");
        if (!(m.pk == k.pk)) throw KeyFileError("master.key belongs to another pk");
        k.sk = m.sk;
      }
    }
    if (k.s0->index != 1) throw InvalidArgument("s0.key must hold share 1");
    if (o.reveal && !k.sk) throw InvalidArgument("--reveal needs master.key");

    const std::size_t ctx_l = o.op == "sdiv" ? std::min<std::size_t>(o.l, 32) : o.l;
    auto ctx0 = make_s0_context(k.pk, *k.s0, k.params, ctx_l, make_rs(o.seed, 4));
    const Ciphertext cx = enc(k.pk, encode(o.x, k.pk.N), rs);
    const Ciphertext cy = enc(k.pk, encode(o.y, k.pk.N), rs);

    std::vector<Ciphertext> result;
    ChannelStats stats;
    ProtocolTranscript tr;
    if (o.local) {
      auto ctx1 = make_s1_context(k.pk, *k.s1, k.params, ctx_l, make_rs(o.seed, 5));
      LocalResponder responder(*ctx1);
      SessionMux link(responder.channel());
      result = dispatch(o.op, *ctx0, link, cx, cy, o.l, &tr);
      stats = responder.channel().stats();
    } else {
      auto ch = connect_tcp(o.connect);
      client_hello(*ch, keyfile::public_key_digest(k.pk));
      const ChannelStats before = ch->stats();
      SessionMux link(*ch);
      result = dispatch(o.op, *ctx0, link, cx, cy, o.l, &tr);
      stats = ch->stats() - before;
      ch->close();
    }

    if (o.reveal) {
      out << format_result(o.op, reveal(*k.sk, k.pk, result)) << '\n';
    } else {
      for (std::size_t i = 0; i < result.size(); ++i) {
        out << "out" << i << '=' << result[i].value.get_str(16) << '\n';
      }
    }
    print_stats(out, stats);
    return kExitOk;
  });
}

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<std::string> ops;
    if (o.protocol == "all") {
      ops = {"smul", "scmp", "ssba", "sdiv"};
    } else if (o.protocol == "smul" || o.protocol == "scmp" ||
               o.protocol == "ssba" || o.protocol == "sdiv") {
      ops = {o.protocol};
    } else {
      throw InvalidArgument("unknown protocol '" + o.protocol + "'");
    }
    if (o.iters == 0) throw InvalidArgument("--iters must be positive");
    RandomSource rs = make_rs(o.seed, 6);
    KeySet k = fresh_keys(o.bits, rs);

    nlohmann::json reports = nlohmann::json::array();
    out << std::left << std::setw(6) << "proto" << std::right << std::setw(7)
        << "iters" << std::setw(5) << "l" << std::setw(12) << "median_ms"
        << std::setw(12) << "mean_ms" << std::setw(6) << "cts" << std::setw(10)
        << "bytes" << std::setw(10) << "KiB" << '\n';
    for (const std::string& op : ops) {
      const std::size_t l = o.l ? *o.l : (op == "sdiv" ? 10 : 32);
      const std::size_t ctx_l = std::min<std::size_t>(l, 32);
      auto ctx0 = make_s0_context(k.pk, *k.s0, k.params, ctx_l, make_rs(o.seed, 7));
      auto ctx1 = make_s1_context(k.pk, *k.s1, k.params, ctx_l, make_rs(o.seed, 8));
      LocalResponder responder(*ctx1);
      SessionMux link(responder.channel());

      std::vector<double> ms;
      ms.reserve(o.iters);
      ProtocolTranscript tr;
      for (std::size_t i = 0; i < o.iters; ++i) {
        auto [x, y] = random_operands(op, l, rs);
        const Ciphertext cx = enc(k.pk, encode(x, k.pk.N), rs);
        const Ciphertext cy = enc(k.pk, encode(y, k.pk.N), rs);
        auto t0 = std::chrono::steady_clock::now();
        std::vector<Ciphertext> res = dispatch(op, *ctx0, link, cx, cy, l, &tr);
        auto t1 = std::chrono::steady_clock::now();
        ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        if (reveal(*k.sk, k.pk, res) != oracle_result(op, x, y)) {
          throw ProtocolError(op + " result disagrees with the plaintext oracle");
        }
      }
      std::vector<double> sorted = ms;
      std::sort(sorted.begin(), sorted.end());
      const double median = sorted.size() % 2
                                ? sorted[sorted.size() / 2]
                                : 0.5 * (sorted[sorted.size() / 2 - 1] +
                                         sorted[sorted.size() / 2]);
      const double mean = std::accumulate(ms.begin(), ms.end(), 0.0) / ms.size();
      const double transfer_ms =
          o.bandwidth_mbps > 0
              ? tr.frame_bytes() * 8.0 / (o.bandwidth_mbps * 1e6) * 1e3
              : 0.0;
      const double kib = tr.ciphertext_bytes() / 1024.0;
      reports.push_back({{"protocol", op},
                         {"iterations", o.iters},
                         {"n_len", bit_length(k.pk.N)},
                         {"l", l},
                         {"median_ms", median},
                         {"mean_ms", mean},
                         {"ciphertexts", tr.ciphertexts()},
                         {"ciphertexts_expected", expected_cts(op, l)},
                         {"payload_bytes", tr.ciphertext_bytes()},
                         {"payload_kib", kib},
                         {"frame_bytes", tr.frame_bytes()},
                         {"bandwidth_mbps", o.bandwidth_mbps},
                         {"modeled_transfer_ms", transfer_ms},
                         {"running_time_ms", mean + transfer_ms}});
      out << std::left << std::setw(6) << op << std::right << std::setw(7)
          << o.iters << std::setw(5) << l << std::fixed << std::setprecision(3)
          << std::setw(12) << median << std::setw(12) << mean << std::setw(6)
          << tr.ciphertexts() << std::setw(10) << tr.ciphertext_bytes()
          << std::setw(10) << kib << '\n';
      out.unsetf(std::ios::fixed);
    }
    nlohmann::json doc = {{"schema_version", 1}, {"reports", reports}};
    if (!o.json_out.empty()) {
      std::ofstream f(o.json_out);
      if (!f) throw Error("cannot write " + o.json_out.string());
      f << doc.dump(2) << '\n';
    }
    return kExitOk;
  });
}

int cmd_selftest(const SelftestOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RandomSource rs = make_rs(o.seed, 9);
    int failures = 0;
    auto check = [&](const std::string& name, auto&& body) {
      std::string detail;
      bool ok = false;
      try {
        ok = body(detail);
      } catch (const std::exception& e) {
        detail = e.what();
      }
      out << (ok ? "ok   " : "FAIL ") << name;
      if (!ok && !detail.empty()) out << ": " << detail;
      out << '\n';
      if (!ok) ++failures;
      return ok;
    };

    KeySet k;
    bool loaded = check("load-keys", [&](std::string& d) {
      if (o.keys.empty()) {
        k = fresh_keys(o.bits, rs);
        return true;
      }
      keyfile::MasterBundle m = keyfile::load_master(o.keys / "master.key");
      keyfile::ShareBundle b0 = keyfile::load_share(o.keys / "s0.key");
      keyfile::ShareBundle b1 = keyfile::load_share(o.keys / "s1.key");
      k.params = m.params;
      k.pk = m.pk;
      k.sk = m.sk;
      k.s0 = b0.share;
      k.s1 = b1.share;
      if (!(b0.pk == m.pk) || !(b1.pk == m.pk)) {
        d = "key files carry different public keys";
        return false;
      }
      return true;
    });
    if (!loaded) return kExitCrypto;
    const PublicKey& pk = k.pk;
    const PrivateKey& sk = *k.sk;

    check("share-indices", [&](std::string& d) {
      d = "s0.key must hold share 1 and s1.key share 2";
      return k.s0->index == 1 && k.s1->index == 2;
    });
    check("share-congruence", [&](std::string& d) {
      const BigNat sum = k.s0->share + k.s1->share;
      const BigNat two_alpha = 2 * sk.alpha;
      d = "share1 + share2 must be 0 mod 2*alpha and 1 mod N";
      return sum % two_alpha == 0 && sum % pk.N == 1;
    });
    check("enc-dec-roundtrip", [&](std::string& d) {
      for (std::size_t i = 0; i < o.samples * 4; ++i) {
        BigNat m = sample_below(rs, pk.N);
        if (dec(sk, enc(pk, m, rs)) != m) {
          d = "mismatch for m=" + m.get_str(16);
          return false;
        }
      }
      return true;
    });
    check("fast-encryption", [&](std::string& d) {
      PrecompTable t = build_table(pk, k.params.table_block, pk.r_bits);
      for (std::size_t i = 0; i < o.samples; ++i) {
        BigNat m = sample_below(rs, pk.N);
        BigNat r = sample_bits(rs, pk.r_bits);
        if (!(enc_fast_with_r(pk, t, m, r) == enc_direct_with_r(pk, m, r))) {
          d = "table encryption differs from direct encryption";
          return false;
        }
      }
      return true;
    });
    check("threshold-recombination", [&](std::string& d) {
      for (std::size_t i = 0; i < o.samples * 2; ++i) {
        Ciphertext c = enc(pk, sample_below(rs, pk.N), rs);
        if (tdec(pk, pdec(*k.s0, c), pdec(*k.s1, c)) != dec(sk, c)) {
          d = "tdec disagrees with dec";
          return false;
        }
      }
      return true;
    });

    auto ctx0 = make_s0_context(pk, *k.s0, k.params, 32, make_rs(o.seed, 10));
    auto ctx1 = make_s1_context(pk, *k.s1, k.params, 32, make_rs(o.seed, 11));
    LocalResponder responder(*ctx1);
    SessionMux link(responder.channel());
    for (const std::string op : {"smul", "scmp", "ssba", "sdiv"}) {
      check(op + "-oracle", [&](std::string& d) {
        const std::size_t l = op == "sdiv" ? 10 : 32;
        for (std::size_t i = 0; i < o.samples; ++i) {
          auto [x, y] = random_operands(op, l, rs);
          const Ciphertext cx = enc(pk, encode(x, pk.N), rs);
          const Ciphertext cy = enc(pk, encode(y, pk.N), rs);
          ProtocolTranscript tr;
          auto got = reveal(sk, pk, dispatch(op, *ctx0, link, cx, cy, l, &tr));
          if (got != oracle_result(op, x, y)) {
            d = "x=" + x.get_str() + " y=" + y.get_str();
            return false;
          }
          if (tr.ciphertexts() != expected_cts(op, l)) {
            d = "ciphertext count " + std::to_string(tr.ciphertexts());
            return false;
          }
        }
        return true;
      });
    }
    if (failures) {
      err << failures << " check(s) failed\n";
      return kExitCrypto;
    }
    out << "all checks passed\n";
    return kExitOk;
  });
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Twin-server computation over FastPai ciphertexts"};
  app.require_subcommand(1);

  auto parse_int = [](const std::string& s) {
    BigInt v;
    if (s.empty() || v.set_str(s, 10) != 0) {
      throw CLI::ValidationError("not an integer: " + s);
    }
    return v;
  };

  KeygenOptions kg;
  std::optional<std::uint64_t> kg_seed;
  std::string kg_out = ".";
  auto* keygen_cmd = app.add_subcommand("keygen", "generate keys and server shares");
  keygen_cmd->add_option("--bits", kg.bits, "bit-length of N")->capture_default_str();
  keygen_cmd->add_option("--sigma", kg.sigma, "bit-length of share 1")->capture_default_str();
  keygen_cmd->add_option("--eta", kg.eta, "lift multiplier for share 2")->capture_default_str();
  keygen_cmd->add_option("--out", kg_out, "output directory")->capture_default_str();
  keygen_cmd->add_option("--seed", kg_seed, "deterministic RNG seed (testing only)");

  ServeOptions sv;
  std::string sv_keys = ".";
  std::string role = "s1";
  std::optional<std::uint64_t> sv_seed;
  auto* serve_cmd = app.add_subcommand("serve", "run the S1 responder");
  serve_cmd->add_option("--role", role, "server role")->check(CLI::IsMember({"s1"}));
  serve_cmd->add_option("--keys", sv_keys, "directory holding s1.key")->capture_default_str();
  serve_cmd->add_option("--listen", sv.listen, "host:port (default $SOCI_ADDR)");
  serve_cmd->add_option("--l", sv.l, "operand range in bits")->capture_default_str();
  serve_cmd->add_option("--seed", sv_seed, "deterministic RNG seed (testing only)");

  RunOptions rn;
  std::string rn_x = "0", rn_y = "0", rn_keys;
  std::optional<std::uint64_t> rn_seed;
  auto* run_cmd = app.add_subcommand("run", "run one protocol on encrypted operands");
  run_cmd->add_option("--op", rn.op, "smul|scmp|ssba|sdiv")
      ->required()
      ->check(CLI::IsMember({"smul", "scmp", "ssba", "sdiv"}));
  run_cmd->add_option("--x", rn_x, "first operand");
  run_cmd->add_option("--y", rn_y, "second operand");
  run_cmd->add_option("--l", rn.l, "operand range in bits")->capture_default_str();
  run_cmd->add_option("--connect", rn.connect, "S1 address host:port");
  run_cmd->add_flag("--local", rn.local, "run S1 in-process");
  run_cmd->add_flag("--reveal", rn.reveal, "decrypt outputs with master.key (testing)");
  run_cmd->add_option("--keys", rn_keys, "key directory");
  run_cmd->add_option("--bits", rn.bits, "ephemeral key size for --local without --keys")
      ->capture_default_str();
  run_cmd->add_option("--seed", rn_seed, "deterministic RNG seed (testing only)");

  BenchOptions bn;
  std::string bn_out;
  std::optional<std::size_t> bn_l;
  std::optional<std::uint64_t> bn_seed;
  auto* bench_cmd = app.add_subcommand("bench", "time protocols over an in-memory channel");
  bench_cmd->add_option("--protocol", bn.protocol, "smul|scmp|ssba|sdiv|all")
      ->check(CLI::IsMember({"smul", "scmp", "ssba", "sdiv", "all"}))
      ->capture_default_str();
  bench_cmd->add_option("--iters", bn.iters, "runs per protocol")->capture_default_str();
  bench_cmd->add_option("--bits", bn.bits, "bit-length of N")->capture_default_str();
  bench_cmd->add_option("--l", bn_l, "operand range (default 32, sdiv 10)");
  bench_cmd->add_option("--out", bn_out, "write JSON report here");
  bench_cmd->add_option("--bandwidth", bn.bandwidth_mbps, "model transfer time at this Mbps");
  bench_cmd->add_option("--seed", bn_seed, "deterministic RNG seed");

  SelftestOptions st;
  std::string st_keys;
  std::optional<std::uint64_t> st_seed;
  auto* selftest_cmd = app.add_subcommand("selftest", "run the invariant suite");
  selftest_cmd->add_option("--keys", st_keys, "check this key directory instead of fresh keys");
  selftest_cmd->add_option("--bits", st.bits, "bit-length of fresh keys")->capture_default_str();
  selftest_cmd->add_option("--samples", st.samples, "samples per check")->capture_default_str();
  selftest_cmd->add_option("--seed", st_seed, "deterministic RNG seed");

  try {
    app.parse(argc, argv);
    if (keygen_cmd->parsed()) {
      kg.out_dir = kg_out;
      kg.seed = kg_seed;
      return cmd_keygen(kg, std::cout, std::cerr);
    }
    if (serve_cmd->parsed()) {
      sv.keys = sv_keys;
      sv.seed = sv_seed;
      return cmd_serve(sv, std::cout, std::cerr);
    }
    if (run_cmd->parsed()) {
      rn.x = parse_int(rn_x);
      rn.y = parse_int(rn_y);
      rn.keys = rn_keys;
      rn.seed = rn_seed;
      return cmd_run(rn, std::cout, std::cerr);
    }
    if (bench_cmd->parsed()) {
      bn.json_out = bn_out;
      bn.l = bn_l;
      bn.seed = bn_seed;
      return cmd_bench(bn, std::cout, std::cerr);
    }
    if (selftest_cmd->parsed()) {
      st.keys = st_keys;
      st.seed = st_seed;
      return cmd_selftest(st, std::cout, std::cerr);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  return kExitUsage;
}

}  // namespace soci::cli
