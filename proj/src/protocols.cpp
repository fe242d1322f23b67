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

#include "soci/protocols.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "soci/errors.hpp"

namespace soci {
namespace {

constexpr std::size_t kRequestCiphertexts = 2;
constexpr std::size_t kResponseCiphertexts = 1;

Bytes pack(std::initializer_list<const BigNat*> values) {
  Bytes out;
  for (const BigNat* v : values) wire::put_bigint(out, *v);
  return out;
}

std::vector<BigNat> unpack(const PublicKey& pk, const Bytes& payload,
                           std::size_t expected) {
  std::vector<BigNat> out;
  std::size_t offset = 0;
  try {
    while (offset < payload.size()) out.push_back(wire::get_bigint(payload, offset));
  } catch (const FrameDecodeError& e) {
    throw ProtocolError(std::string("malformed payload: ") + e.what());
  }
  if (out.size() != expected) {
    throw ProtocolError("expected " + std::to_string(expected) +
                        " ciphertexts, got " + std::to_string(out.size()));
  }
  for (const BigNat& v : out) {
    if (!in_ciphertext_range(pk, v)) {
      throw ProtocolError("ciphertext outside (0, N^2)");
    }
  }
  return out;
}

TranscriptEntry describe(Direction d, const Frame& f, std::size_t cts) {
  std::size_t bytes = 0;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < cts; ++i) {
    std::size_t before = offset;
    wire::get_bigint(f.payload, offset);
    bytes += offset - before - 4;
  }
  return TranscriptEntry{d, f.msg_type, cts, bytes,
                         kFrameHeaderSize + f.payload.size()};
}

// One logical session of S0 on a shared link.
class Session {
 public:
  Session(SessionMux& link, ProtocolTranscript* transcript, std::string name)
      : link_(link), id_(link.new_session_id()), transcript_(transcript) {
    if (transcript_) {
      transcript_->protocol = std::move(name);
      transcript_->messages.clear();
    }
  }

  BigNat exchange(const PublicKey& pk, MsgType req, MsgType resp,
                  const BigNat& a, const BigNat& b) {
    Frame out{static_cast<std::uint8_t>(req), id_, pack({&a, &b})};
    link_.send(out);
    record(Direction::kToS1, out, kRequestCiphertexts);
    Frame in = link_.recv(id_);
    if (in.type() == MsgType::kError) throw RemoteError(error_reason(in));
    if (in.type() != resp) {
      throw ProtocolError("unexpected reply type " + std::to_string(in.msg_type));
    }
    BigNat v = std::move(unpack(pk, in.payload, kResponseCiphertexts)[0]);
    record(Direction::kToS0, in, kResponseCiphertexts);
    ++rounds_;
    return v;
  }

  std::size_t rounds() const { return rounds_; }

 private:
  void record(Direction d, const Frame& f, std::size_t cts) {
    if (transcript_) transcript_->messages.push_back(describe(d, f, cts));
  }

  SessionMux& link_;
  std::uint64_t id_;
  ProtocolTranscript* transcript_;
  std::size_t rounds_ = 0;
};

void require_role(const PartyContext& ctx, Role role) {
  if (ctx.role != role) {
    throw InvalidArgument(role == Role::kS0 ? "operation requires an S0 context"
                                            : "operation requires an S1 context");
  }
}

Ciphertext smul_in(PartyContext& ctx0, Session& s, const Ciphertext& cx,
                   const Ciphertext& cy) {
  const PublicKey& pk = ctx0.pk;
  MulMasks masks;
  {
    std::lock_guard<std::mutex> lock(ctx0.mu);
    masks = draw_mul_masks(*ctx0.tuple_s0, pk);
  }
  const Ciphertext X = hom_add(pk, cx, masks.enc_r1);
  const Ciphertext Y = hom_add(pk, cy, masks.enc_r2);
  const Ciphertext C =
      hom_add(pk, Ciphertext{mod_pow(X.value, ctx0.L_const, pk.N_squared)}, Y);
  const PartialDecryption C1 = pdec(ctx0.partial, C);

  const Ciphertext masked_product{s.exchange(pk, MsgType::kSmulReq,
                                             MsgType::kSmulResp, C.value,
                                             C1.value)};

  Ciphertext out = hom_add(pk, masked_product,
                           hom_scal_signed(pk, cx, -masks.r2));
  out = hom_add(pk, out, hom_scal_signed(pk, cy, -masks.r1));
  return hom_add(pk, out, masks.enc_neg_r1r2);
}

Ciphertext scmp_in(PartyContext& ctx0, Session& s, const Ciphertext& cx,
                   const Ciphertext& cy) {
  const PublicKey& pk = ctx0.pk;
  CmpMasks masks;
  int pi;
  {
    std::lock_guard<std::mutex> lock(ctx0.mu);
    masks = draw_cmp_masks(*ctx0.tuple_s0, pk);
    pi = ctx0.pi_override ? *ctx0.pi_override : (ctx0.rs.next_bit() ? 1 : 0);
  }
  Ciphertext D;
  if (pi == 0) {
    // r1 (x - y) + r1 + r2
    Ciphertext diff = hom_sub(pk, cx, cy);
    D = hom_add(pk, Ciphertext{mod_pow(diff.value, masks.r1, pk.N_squared)},
                masks.enc_r1_plus_r2);
  } else {
    // r1 (y - x) + r2
    Ciphertext diff = hom_sub(pk, cy, cx);
    D = hom_add(pk, Ciphertext{mod_pow(diff.value, masks.r1, pk.N_squared)},
                masks.enc_r2);
  }
  const PartialDecryption D1 = pdec(ctx0.partial, D);
  const Ciphertext mu0{s.exchange(pk, MsgType::kScmpReq, MsgType::kScmpResp,
                                  D.value, D1.value)};
  if (pi == 0) return mu0;
  Ciphertext one;
  {
    std::lock_guard<std::mutex> lock(ctx0.mu);
    one = draw_one(*ctx0.tuple_s0, pk);
  }
  return hom_sub(pk, one, mu0);
}

PartialDecryption peer_share(const BigNat& value) {
  return PartialDecryption{1, value};
}

}  // namespace

std::size_t ProtocolTranscript::ciphertexts() const {
  std::size_t n = 0;
  for (const auto& m : messages) n += m.ciphertexts;
  return n;
}

std::size_t ProtocolTranscript::ciphertext_bytes() const {
  std::size_t n = 0;
  for (const auto& m : messages) n += m.ciphertext_bytes;
  return n;
}

std::size_t ProtocolTranscript::frame_bytes() const {
  std::size_t n = 0;
  for (const auto& m : messages) n += m.frame_bytes;
  return n;
}

std::size_t ProtocolTranscript::ciphertexts(Direction d) const {
  std::size_t n = 0;
  for (const auto& m : messages) {
    if (m.direction == d) n += m.ciphertexts;
  }
  return n;
}

std::unique_ptr<PartyContext> make_s0_context(const PublicKey& pk,
                                              PartialKey share,
                                              const SecurityParams& params,
                                              std::size_t range_l,
                                              RandomSource rs) {
  if (share.index != 1) throw InvalidArgument("S0 must hold share 1");
  if (range_l + kMaskMarginBits > params.sigma) {
    throw InvalidArgument("range l must be at most sigma - 40");
  }
  auto ctx = std::make_unique<PartyContext>();
  ctx->role = Role::kS0;
  ctx->pk = pk;
  ctx->partial = std::move(share);
  ctx->range_l = range_l;
  ctx->L_const = BigNat(1) << static_cast<mp_bitcnt_t>(params.sigma + 2);
  ctx->rs = std::move(rs);
  ctx->tuple_s0 = build_tuple_s0(pk, params, ctx->rs);
  return ctx;
}

std::unique_ptr<PartyContext> make_s1_context(
    const PublicKey& pk, PartialKey share, const SecurityParams& params,
    std::size_t range_l, RandomSource rs,
    std::shared_ptr<const PrecompTable> table) {
  if (share.index != 2) throw InvalidArgument("S1 must hold share 2");
  if (range_l + kMaskMarginBits > params.sigma) {
    throw InvalidArgument("range l must be at most sigma - 40");
  }
  auto ctx = std::make_unique<PartyContext>();
  ctx->role = Role::kS1;
  ctx->pk = pk;
  ctx->partial = std::move(share);
  ctx->range_l = range_l;
  ctx->L_const = BigNat(1) << static_cast<mp_bitcnt_t>(params.sigma + 2);
  ctx->rs = std::move(rs);
  ctx->tuple_s1 = build_tuple_s1(pk, ctx->rs);
  if (!table) {
    table = std::make_shared<const PrecompTable>(
        build_table(pk, params.table_block, std::max(params.table_len, pk.r_bits)));
  }
  if (table->modulus() != pk.N_squared || table->base() != pk.h_pow_N) {
    throw InvalidArgument("precomputation table does not match the public key");
  }
  ctx->table = std::move(table);
  return ctx;
}

Ciphertext smul(PartyContext& ctx0, SessionMux& link, const Ciphertext& cx,
                const Ciphertext& cy, ProtocolTranscript* transcript) {
  require_role(ctx0, Role::kS0);
  Session s(link, transcript, "smul");
  return smul_in(ctx0, s, cx, cy);
}

Ciphertext scmp(PartyContext& ctx0, SessionMux& link, const Ciphertext& cx,
                const Ciphertext& cy, ProtocolTranscript* transcript) {
  require_role(ctx0, Role::kS0);
  Session s(link, transcript, "scmp");
  return scmp_in(ctx0, s, cx, cy);
}

std::pair<Ciphertext, Ciphertext> ssba(PartyContext& ctx0, SessionMux& link,
                                       const Ciphertext& cx,
                                       ProtocolTranscript* transcript) {
  require_role(ctx0, Role::kS0);
  const PublicKey& pk = ctx0.pk;
  Session s(link, transcript, "ssba");
  ZeroOne k;
  {
    std::lock_guard<std::mutex> lock(ctx0.mu);
    k = draw_zero_one(*ctx0.tuple_s0, pk);
  }
  Ciphertext sign = scmp_in(ctx0, s, cx, k.enc_zero);
  // 1 - 2 s
  Ciphertext factor = hom_add(pk, k.enc_one, hom_scal_signed(pk, sign, -2));
  Ciphertext magnitude = smul_in(ctx0, s, factor, cx);
  return {std::move(sign), std::move(magnitude)};
}

std::pair<Ciphertext, Ciphertext> sdiv(PartyContext& ctx0, SessionMux& link,
                                       const Ciphertext& cx,
                                       const Ciphertext& cy, std::size_t l,
                                       ProtocolTranscript* transcript) {
  require_role(ctx0, Role::kS0);
  const PublicKey& pk = ctx0.pk;
  if (bit_length(pk.N) < 2 * l + 8) {
    throw InvalidArgument("sdiv: range l too large for the modulus");
  }
  Session s(link, transcript, "sdiv");
  ZeroOne k;
  {
    std::lock_guard<std::mutex> lock(ctx0.mu);
    k = draw_zero_one(*ctx0.tuple_s0, pk);
  }
  Ciphertext rem = cx;
  Ciphertext quot = k.enc_zero;
  for (std::size_t step = 0; step <= l; ++step) {
    const std::size_t i = l - step;
    const BigNat pow2 = BigNat(1) << static_cast<mp_bitcnt_t>(i);
    const Ciphertext c = hom_scal(pk, cy, pow2);           // 2^i y
    const Ciphertext mu = scmp_in(ctx0, s, rem, c);       // 0 iff rem >= 2^i y
    const Ciphertext keep = hom_sub(pk, k.enc_one, mu);   // 1 - mu
    quot = hom_add(pk, quot, hom_scal(pk, keep, pow2));
    const Ciphertext m = smul_in(ctx0, s, keep, c);
    rem = hom_sub(pk, rem, m);
  }
  if (s.rounds() != 2 * (l + 1)) {
    throw ProtocolError("sdiv: ran " + std::to_string(s.rounds()) +
                        " rounds, expected " + std::to_string(2 * (l + 1)));
  }
  return {std::move(quot), std::move(rem)};
}

BigNat unpack_masked_product(const BigNat& t, const BigNat& L,
                             const BigNat& N) {
  BigNat a, b;
  mpz_fdiv_qr(a.get_mpz_t(), b.get_mpz_t(), t.get_mpz_t(), L.get_mpz_t());
  if (a >= L) {
    throw ProtocolError("masked operand out of range (negative mask wrap)");
  }
  return (a * b) % N;
}

Ciphertext smul_serve_step(PartyContext& ctx1, const Ciphertext& C,
                           const PartialDecryption& C1) {
  require_role(ctx1, Role::kS1);
  const PartialDecryption C2 = pdec(ctx1.partial, C);
  const BigNat t = tdec(ctx1.pk, C1, C2);
  const BigNat product = unpack_masked_product(t, ctx1.L_const, ctx1.pk.N);
  BigNat r;
  {
    std::lock_guard<std::mutex> lock(ctx1.mu);
    r = sample_bits(ctx1.rs, ctx1.pk.r_bits);
  }
  return enc_fast_with_r(ctx1.pk, *ctx1.table, product, r);
}

Ciphertext scmp_serve_step(PartyContext& ctx1, const Ciphertext& D,
                           const PartialDecryption& D1) {
  require_role(ctx1, Role::kS1);
  const PartialDecryption D2 = pdec(ctx1.partial, D);
  const BigNat d = tdec(ctx1.pk, D1, D2);
  ZeroOne k;
  {
    std::lock_guard<std::mutex> lock(ctx1.mu);
    k = draw_zero_one(*ctx1.tuple_s1, ctx1.pk);
  }
  return 2 * d > ctx1.pk.N ? k.enc_zero : k.enc_one;
}

ServeSummary serve(PartyContext& ctx1, Channel& ch) {
  require_role(ctx1, Role::kS1);
  ServeSummary summary;
  for (;;) {
    std::optional<Frame> f;
    try {
      f = ch.recv();
    } catch (const ClosedChannel&) {
      break;
    } catch (const FrameDecodeError& e) {
      ++summary.errors;
      try {
        ch.send(error_frame(0, e.what()));
      } catch (const TransportError&) {
      }
      if (ch.closed()) break;
      continue;
    } catch (const Error&) {
      ++summary.errors;
      break;
    }
    if (!f) break;
    ++summary.requests;
    Frame reply;
    try {
      const MsgType t = f->type();
      if (t != MsgType::kSmulReq && t != MsgType::kScmpReq) {
        char hex[8];
        std::snprintf(hex, sizeof(hex), "0x%02x", f->msg_type);
        throw ProtocolError(std::string("unsupported msg_type ") + hex);
      }
      std::vector<BigNat> in = unpack(ctx1.pk, f->payload, kRequestCiphertexts);
      const Ciphertext c{std::move(in[0])};
      const PartialDecryption p = peer_share(in[1]);
      Ciphertext out = t == MsgType::kSmulReq ? smul_serve_step(ctx1, c, p)
                                              : scmp_serve_step(ctx1, c, p);
      reply = Frame{static_cast<std::uint8_t>(t == MsgType::kSmulReq
                                                  ? MsgType::kSmulResp
                                                  : MsgType::kScmpResp),
                    f->session_id, pack({&out.value})};
    } catch (const Error& e) {
      ++summary.errors;
      reply = error_frame(f->session_id, e.what());
    }
    try {
      ch.send(reply);
    } catch (const TransportError&) {
      break;
    }
  }
  summary.stats = ch.stats();
  return summary;
}

namespace oracle {

BigInt mul(const BigInt& x, const BigInt& y) { return x * y; }

int cmp(const BigInt& x, const BigInt& y) { return x >= y ? 0 : 1; }

std::pair<int, BigInt> ssba(const BigInt& x) {
  return x >= 0 ? std::pair<int, BigInt>{0, x} : std::pair<int, BigInt>{1, -x};
}

std::pair<BigInt, BigInt> divmod(const BigInt& x, const BigInt& y) {
  if (y == 0) throw InvalidArgument("oracle::divmod: division by zero");
  BigInt q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return {q, r};
}

}  // namespace oracle

std::size_t expected_ciphertexts_smul() { return 3; }
std::size_t expected_ciphertexts_scmp() { return 3; }
std::size_t expected_ciphertexts_ssba() { return 6; }
std::size_t expected_ciphertexts_sdiv(std::size_t l) { return 6 * (l + 1); }

}  // namespace soci
