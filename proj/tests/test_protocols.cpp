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

#include <thread>

#include "soci/errors.hpp"
#include "soci/keyfile.hpp"
#include "soci/protocols.hpp"
#include "test_support.hpp"

namespace soci {
namespace {

using testing::LocalPair;
using testing::small_keys;

class Protocols : public ::testing::Test {
 protected:
  Protocols() : rs_(RandomSource::deterministic(61)) {}

  const PublicKey& pk() const { return small_keys().kp.pk; }
  Ciphertext E(const BigInt& v) { return enc(pk(), encode(v, pk().N), rs_); }
  BigInt D(const Ciphertext& c) const {
    return decode(dec(small_keys().kp.sk, c), pk().N);
  }
  BigInt signed_below(std::size_t l) {
    const BigInt b = BigInt(1) << static_cast<mp_bitcnt_t>(l);
    return BigInt(sample_below(rs_, 2 * b + 1)) - b;
  }

  LocalPair pair_;
  RandomSource rs_;
};

TEST_F(Protocols, SmulExamplesAndOracle) {
  EXPECT_EQ(D(smul(*pair_.ctx0, *pair_.mux, E(6), E(7))), 42);
  EXPECT_EQ(D(smul(*pair_.ctx0, *pair_.mux, E(-4), E(9))), -36);
  for (int i = 0; i < 100; ++i) {
    BigInt x = signed_below(32), y = signed_below(32);
    ProtocolTranscript tr;
    ASSERT_EQ(D(smul(*pair_.ctx0, *pair_.mux, E(x), E(y), &tr)), oracle::mul(x, y));
    ASSERT_EQ(tr.ciphertexts(), 3u);
  }
}

TEST_F(Protocols, MaskSplittingSoundness) {
  const TupleS0& t = *pair_.ctx0->tuple_s0;
  const BigNat& L = pair_.ctx0->L_const;
  EXPECT_EQ(L, BigNat(1) << (small_keys().params.sigma + 2));
  for (int i = 0; i < 2000; ++i) {
    BigInt x = signed_below(32), y = signed_below(32);
    BigInt a = x + t.r1, b = y + t.r2;
    ASSERT_GT(a, 0);
    ASSERT_GE(b, 0);
    ASSERT_LT(b, L);
    ASSERT_LT(L * a + b, pk().N);
  }
}

TEST_F(Protocols, UnpackMaskedProduct) {
  const BigNat L = BigNat(1) << 130;
  const BigNat& N = pk().N;
  EXPECT_EQ(unpack_masked_product(0, L, N), 0);
  EXPECT_EQ(unpack_masked_product(L * 12345 + 678, L, N), BigNat(12345) * 678);
  EXPECT_THROW(unpack_masked_product(L * L, L, N), ProtocolError);
}

TEST_F(Protocols, ScmpBothBranches) {
  EXPECT_EQ(D(scmp(*pair_.ctx0, *pair_.mux, E(5), E(3))), 0);
  EXPECT_EQ(D(scmp(*pair_.ctx0, *pair_.mux, E(3), E(5))), 1);
  for (int pi : {0, 1}) {
    pair_.ctx0->pi_override = pi;
    EXPECT_EQ(D(scmp(*pair_.ctx0, *pair_.mux, E(7), E(7))), 0) << pi;
    EXPECT_EQ(D(scmp(*pair_.ctx0, *pair_.mux, E(-7), E(-6))), 1) << pi;
    for (int i = 0; i < 60; ++i) {
      BigInt x = signed_below(32), y = i % 10 == 0 ? x : signed_below(32);
      ProtocolTranscript tr;
      ASSERT_EQ(D(scmp(*pair_.ctx0, *pair_.mux, E(x), E(y), &tr)),
                oracle::cmp(x, y))
          << "pi=" << pi << " x=" << x << " y=" << y;
      ASSERT_EQ(tr.ciphertexts(), 3u);
    }
  }
}

TEST_F(Protocols, ScmpServeStepThresholds) {
  PartyContext& ctx1 = *pair_.ctx1;
  const auto& k = small_keys();
  Ciphertext d0 = enc(pk(), 0, rs_);
  Ciphertext dn = enc(pk(), pk().N - 1, rs_);
  Ciphertext r0 = scmp_serve_step(ctx1, d0, pdec(k.s0, d0));
  Ciphertext rn = scmp_serve_step(ctx1, dn, pdec(k.s0, dn));
  EXPECT_EQ(D(r0), 1);
  EXPECT_EQ(D(rn), 0);
  EXPECT_NE(r0, ctx1.tuple_s1->enc_one);
  EXPECT_NE(rn, ctx1.tuple_s1->enc_zero);
  Ciphertext half = enc(pk(), pk().N / 2, rs_);
  EXPECT_EQ(D(scmp_serve_step(ctx1, half, pdec(k.s0, half))), 1);
  Ciphertext above = enc(pk(), pk().N / 2 + 1, rs_);
  EXPECT_EQ(D(scmp_serve_step(ctx1, above, pdec(k.s0, above))), 0);
}

TEST_F(Protocols, SsbaExamplesAndOracle) {
  auto run = [&](const BigInt& x) {
    auto [s, m] = ssba(*pair_.ctx0, *pair_.mux, E(x));
    return std::pair<BigInt, BigInt>{D(s), D(m)};
  };
  EXPECT_EQ(run(9), (std::pair<BigInt, BigInt>{0, 9}));
  EXPECT_EQ(run(-9), (std::pair<BigInt, BigInt>{1, 9}));
  EXPECT_EQ(run(0), (std::pair<BigInt, BigInt>{0, 0}));
  for (int i = 0; i < 60; ++i) {
    BigInt x = signed_below(32);
    ProtocolTranscript tr;
    auto [s, m] = ssba(*pair_.ctx0, *pair_.mux, E(x), &tr);
    auto [os, om] = oracle::ssba(x);
    ASSERT_EQ(D(s), os);
    ASSERT_EQ(D(m), om);
    ASSERT_EQ(D(m), (1 - 2 * D(s)) * x);
    ASSERT_EQ(tr.ciphertexts(), 6u);
  }
}

TEST_F(Protocols, SdivExamplesAndOracle) {
  auto run = [&](const BigInt& x, const BigInt& y, ProtocolTranscript* tr) {
    auto [q, e] = sdiv(*pair_.ctx0, *pair_.mux, E(x), E(y), 10, tr);
    return std::pair<BigInt, BigInt>{D(q), D(e)};
  };
  EXPECT_EQ(run(17, 5, nullptr), (std::pair<BigInt, BigInt>{3, 2}));
  EXPECT_EQ(run(0, 1, nullptr), (std::pair<BigInt, BigInt>{0, 0}));
  EXPECT_EQ(run(1024, 1, nullptr), (std::pair<BigInt, BigInt>{1024, 0}));
  EXPECT_EQ(run(1023, 1024, nullptr), (std::pair<BigInt, BigInt>{0, 1023}));
  for (int i = 0; i < 25; ++i) {
    BigInt x = sample_below(rs_, 1025);
    BigInt y = BigInt(sample_below(rs_, 1024)) + 1;
    ProtocolTranscript tr;
    auto [q, e] = run(x, y, &tr);
    ASSERT_EQ(std::make_pair(q, e), oracle::divmod(x, y)) << x << "/" << y;
    ASSERT_EQ(q * y + e, x);
    ASSERT_GE(e, 0);
    ASSERT_LT(e, y);
    ASSERT_EQ(tr.ciphertexts(), 66u);
  }
  ProtocolTranscript tr3;
  auto [q, e] = sdiv(*pair_.ctx0, *pair_.mux, E(7), E(2), 3, &tr3);
  EXPECT_EQ(D(q), 3);
  EXPECT_EQ(D(e), 1);
  EXPECT_EQ(tr3.ciphertexts(), expected_ciphertexts_sdiv(3));
}

TEST_F(Protocols, TranscriptMatchesChannelStats) {
  const ChannelStats before = pair_.client->stats();
  ProtocolTranscript tr;
  smul(*pair_.ctx0, *pair_.mux, E(3), E(4), &tr);
  const ChannelStats d = pair_.client->stats() - before;
  EXPECT_EQ(d.ciphertexts_sent, 2u);
  EXPECT_EQ(d.ciphertexts_received, 1u);
  EXPECT_EQ(tr.ciphertexts(Direction::kToS1), 2u);
  EXPECT_EQ(tr.ciphertexts(Direction::kToS0), 1u);
  EXPECT_EQ(d.ciphertext_bytes_sent + d.ciphertext_bytes_received, tr.ciphertext_bytes());
  EXPECT_EQ(d.bytes_sent + d.bytes_received, tr.frame_bytes());
  const std::size_t width = (2 * bit_length(pk().N) + 7) / 8;
  EXPECT_LE(tr.ciphertext_bytes(), 3 * width);
  EXPECT_GE(tr.ciphertext_bytes() + 3 * 8, 3 * width);
  EXPECT_EQ(tr.protocol, "smul");
}

TEST_F(Protocols, ConcurrentSessionsOnOneLink) {
  std::vector<std::thread> ts;
  std::vector<BigInt> got(6);
  std::vector<Ciphertext> xs, ys;
  for (int i = 0; i < 6; ++i) {
    xs.push_back(E(i + 2));
    ys.push_back(E(10 * i - 3));
  }
  for (int i = 0; i < 6; ++i) {
    ts.emplace_back([&, i] {
      got[i] = D(smul(*pair_.ctx0, *pair_.mux, xs[i], ys[i]));
    });
  }
  for (auto& t : ts) t.join();
  for (int i = 0; i < 6; ++i) EXPECT_EQ(got[i], BigInt(i + 2) * (10 * i - 3));
}

TEST(ProtocolOracle, Examples) {
  EXPECT_EQ(oracle::cmp(3, 3), 0);
  EXPECT_EQ(oracle::cmp(2, 3), 1);
  EXPECT_EQ(oracle::ssba(-7), (std::pair<int, BigInt>{1, 7}));
  EXPECT_EQ(oracle::divmod(17, 5), (std::pair<BigInt, BigInt>{3, 2}));
  EXPECT_THROW(oracle::divmod(1, 0), InvalidArgument);
  EXPECT_EQ(expected_ciphertexts_smul(), 3u);
  EXPECT_EQ(expected_ciphertexts_scmp(), 3u);
  EXPECT_EQ(expected_ciphertexts_ssba(), 6u);
  EXPECT_EQ(expected_ciphertexts_sdiv(10), 66u);
}

TEST(ProtocolContext, Validation) {
  const auto& k = small_keys();
  RandomSource rs = RandomSource::deterministic(62);
  EXPECT_THROW(make_s0_context(k.kp.pk, k.s1, k.params, 32, RandomSource::deterministic(1)),
               InvalidArgument);
  EXPECT_THROW(make_s1_context(k.kp.pk, k.s0, k.params, 32, RandomSource::deterministic(1)),
               InvalidArgument);
  EXPECT_THROW(make_s0_context(k.kp.pk, k.s0, k.params, 89, RandomSource::deterministic(1)),
               InvalidArgument);
}

TEST(Serve, DispatchUnknownTypeAndMalformed) {
  const auto& k = small_keys();
  LocalPair p;
  RandomSource rs = RandomSource::deterministic(63);
  // Unknown message type: ERROR reply, connection survives.
  p.client->send(Frame{0x7F, 5, {}});
  auto r = p.client->recv();
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->type(), MsgType::kError);
  EXPECT_EQ(r->session_id, 5u);
  EXPECT_NE(error_reason(*r).find("0x7f"), std::string::npos);
  // Wrong ciphertext count.
  wire::Bytes one;
  wire::put_bigint(one, 5);
  p.client->send(Frame{0x01, 6, one});
  r = p.client->recv();
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->type(), MsgType::kError);
  // SMUL_REQ then SCMP_REQ on distinct sessions are both answered.
  const TupleS0& t = *p.ctx0->tuple_s0;
  Ciphertext C = enc(k.kp.pk, p.ctx0->L_const * (3 + t.r1) + (4 + t.r2), rs);
  wire::Bytes smul_payload, scmp_payload;
  wire::put_bigint(smul_payload, C.value);
  wire::put_bigint(smul_payload, pdec(k.s0, C).value);
  Ciphertext Dc = enc(k.kp.pk, 0, rs);
  wire::put_bigint(scmp_payload, Dc.value);
  wire::put_bigint(scmp_payload, pdec(k.s0, Dc).value);
  p.client->send(Frame{0x01, 7, smul_payload});
  p.client->send(Frame{0x03, 8, scmp_payload});
  auto a = p.client->recv();
  auto b = p.client->recv();
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->type(), MsgType::kSmulResp);
  EXPECT_EQ(a->session_id, 7u);
  EXPECT_EQ(b->type(), MsgType::kScmpResp);
  EXPECT_EQ(b->session_id, 8u);
  std::size_t off = 0;
  BigNat prod = wire::get_bigint(a->payload, off);
  EXPECT_EQ(dec(k.kp.sk, Ciphertext{prod}), (3 + t.r1) * (4 + t.r2) % k.kp.pk.N);
  p.stop();
  EXPECT_EQ(p.summary.requests, 4u);
  EXPECT_EQ(p.summary.errors, 2u);
}

TEST(Serve, RemoteErrorSurfacesOnS0) {
  const auto& k = small_keys();
  // S1 holding a share from a different split cannot recombine.
  RandomSource rs = RandomSource::deterministic(64);
  auto [a, b] = split_key(k.kp.sk, k.kp.pk, SplitParams{128, 0}, rs);
  auto ctx0 = make_s0_context(k.kp.pk, k.s0, k.params, 32, RandomSource::deterministic(2));
  auto ctx1 = make_s1_context(k.kp.pk, b, k.params, 32, RandomSource::deterministic(3));
  auto [c, s] = pair_inmemory();
  std::thread srv([&] { serve(*ctx1, *s); });
  SessionMux mux(*c);
  Ciphertext x = enc(k.kp.pk, 2, rs);
  EXPECT_THROW(smul(*ctx0, mux, x, x), RemoteError);
  c->close();
  srv.join();
}

TEST(Serve, CloseMidSessionIsTransportError) {
  const auto& k = small_keys();
  auto ctx0 = make_s0_context(k.kp.pk, k.s0, k.params, 32, RandomSource::deterministic(4));
  auto [c, s] = pair_inmemory();
  std::thread peer([&] {
    s->recv();
    s->close();
  });
  SessionMux mux(*c);
  RandomSource rs = RandomSource::deterministic(65);
  Ciphertext x = enc(k.kp.pk, 2, rs);
  EXPECT_THROW(smul(*ctx0, mux, x, x), TransportError);
  peer.join();
}

TEST(Transparency, LoopbackTcpMatchesInMemory) {
  const auto& k = small_keys();
  auto ctx0 = make_s0_context(k.kp.pk, k.s0, k.params, 32, RandomSource::deterministic(70));
  auto ctx1 = make_s1_context(k.kp.pk, k.s1, k.params, 32, RandomSource::deterministic(71));
  auto listener = listen_tcp("127.0.0.1:0");
  const wire::Digest digest = keyfile::public_key_digest(k.kp.pk);
  std::thread srv([&] {
    auto ch = listener->accept();
    if (server_hello(*ch, digest)) serve(*ctx1, *ch);
  });
  auto ch = connect_tcp("127.0.0.1:" + std::to_string(listener->port()));
  client_hello(*ch, digest);
  SessionMux mux(*ch);
  RandomSource rs = RandomSource::deterministic(72);
  auto E = [&](const BigInt& v) { return enc(k.kp.pk, encode(v, k.kp.pk.N), rs); };
  auto D = [&](const Ciphertext& c) { return decode(dec(k.kp.sk, c), k.kp.pk.N); };
  ProtocolTranscript tr;
  EXPECT_EQ(D(smul(*ctx0, mux, E(-12), E(11), &tr)), -132);
  EXPECT_EQ(tr.ciphertexts(), 3u);
  EXPECT_EQ(D(scmp(*ctx0, mux, E(4), E(9), &tr)), 1);
  EXPECT_EQ(tr.ciphertexts(), 3u);
  auto [sgn, mag] = ssba(*ctx0, mux, E(-31), &tr);
  EXPECT_EQ(D(sgn), 1);
  EXPECT_EQ(D(mag), 31);
  EXPECT_EQ(tr.ciphertexts(), 6u);
  auto [q, e] = sdiv(*ctx0, mux, E(1000), E(7), 10, &tr);
  EXPECT_EQ(D(q), 142);
  EXPECT_EQ(D(e), 6);
  EXPECT_EQ(tr.ciphertexts(), 66u);
  ch->close();
  srv.join();
}

}  // namespace
}  // namespace soci
