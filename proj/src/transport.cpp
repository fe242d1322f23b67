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

#include "soci/transport.hpp"

#include <algorithm>
#include <exception>

#include "soci/errors.hpp"

namespace soci {
namespace {

struct CiphertextTally {
  std::uint64_t count = 0;
  std::uint64_t bytes = 0;
};

CiphertextTally tally(const Frame& f) {
  CiphertextTally t;
  if (!carries_ciphertexts(f.msg_type)) return t;
  std::size_t offset = 0;
  try {
    while (offset < f.payload.size()) {
      std::size_t before = offset;
      wire::get_bigint(f.payload, offset);
      ++t.count;
      t.bytes += offset - before - 4;
    }
  } catch (const FrameDecodeError&) {
    // Malformed payloads are rejected by the protocol layer; count what parsed.
  }
  return t;
}

class InMemoryChannel final : public Channel {
 public:
  struct Shared {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Bytes> inbox[2];
    bool closed[2] = {false, false};
  };

  InMemoryChannel(std::shared_ptr<Shared> shared, int side)
      : shared_(std::move(shared)), side_(side) {}
  ~InMemoryChannel() override { close(); }

  void close() override {
    std::lock_guard<std::mutex> lock(shared_->mu);
    shared_->closed[side_] = true;
    shared_->cv.notify_all();
  }

  bool closed() const override {
    std::lock_guard<std::mutex> lock(shared_->mu);
    return shared_->closed[side_];
  }

 protected:
  void send_bytes(Bytes frame_bytes) override {
    std::lock_guard<std::mutex> lock(shared_->mu);
    if (shared_->closed[side_]) throw ClosedChannel();
    if (shared_->closed[peer()]) throw TransportError("peer closed the channel");
    shared_->inbox[peer()].push_back(std::move(frame_bytes));
    shared_->cv.notify_all();
  }

  std::optional<Bytes> recv_bytes() override {
    std::unique_lock<std::mutex> lock(shared_->mu);
    shared_->cv.wait(lock, [&] {
      return !shared_->inbox[side_].empty() || shared_->closed[side_] ||
             shared_->closed[peer()];
    });
    if (shared_->closed[side_]) throw ClosedChannel();
    if (shared_->inbox[side_].empty()) return std::nullopt;
    Bytes out = std::move(shared_->inbox[side_].front());
    shared_->inbox[side_].pop_front();
    return out;
  }

 private:
  int peer() const { return 1 - side_; }

  std::shared_ptr<Shared> shared_;
  int side_;
};

}  // namespace

Bytes encode_frame(const Frame& f) {
  if (f.payload.size() > kMaxPayload) {
    throw InvalidArgument("frame payload exceeds 2^24 bytes");
  }
  Bytes out;
  out.reserve(kFrameHeaderSize + f.payload.size());
  out.push_back(kFrameMagic0);
  out.push_back(kFrameMagic1);
  out.push_back(kFrameVersion);
  out.push_back(f.msg_type);
  wire::put_u64(out, f.session_id);
  wire::put_u32(out, static_cast<std::uint32_t>(f.payload.size()));
  out.insert(out.end(), f.payload.begin(), f.payload.end());
  return out;
}

FrameHeader decode_frame_header(std::span<const std::uint8_t> header) {
  if (header.size() < kFrameHeaderSize) {
    throw FrameDecodeError("truncated frame header", header.size());
  }
  if (header[0] != kFrameMagic0) throw FrameDecodeError("bad magic", 0);
  if (header[1] != kFrameMagic1) throw FrameDecodeError("bad magic", 1);
  if (header[2] != kFrameVersion) {
    throw FrameDecodeError("unknown frame version", 2);
  }
  FrameHeader h;
  h.msg_type = header[3];
  h.session_id = wire::get_u64(header, 4);
  h.payload_len = wire::get_u32(header, 12);
  if (h.payload_len > kMaxPayload) {
    throw FrameDecodeError("payload length exceeds 2^24", 12);
  }
  return h;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  FrameHeader h = decode_frame_header(bytes);
  const std::size_t total = kFrameHeaderSize + h.payload_len;
  if (bytes.size() < total) {
    throw FrameDecodeError("truncated payload", bytes.size());
  }
  if (bytes.size() > total) throw FrameDecodeError("trailing bytes", total);
  Frame f;
  f.msg_type = h.msg_type;
  f.session_id = h.session_id;
  f.payload.assign(bytes.begin() + kFrameHeaderSize, bytes.end());
  return f;
}

bool carries_ciphertexts(std::uint8_t msg_type) {
  switch (static_cast<MsgType>(msg_type)) {
    case MsgType::kSmulReq:
    case MsgType::kSmulResp:
    case MsgType::kScmpReq:
    case MsgType::kScmpResp:
      return true;
    default:
      return false;
  }
}

Frame error_frame(std::uint64_t session_id, const std::string& reason) {
  return Frame{static_cast<std::uint8_t>(MsgType::kError), session_id,
               Bytes(reason.begin(), reason.end())};
}

std::string error_reason(const Frame& f) {
  return std::string(f.payload.begin(), f.payload.end());
}

ChannelStats ChannelStats::operator-(const ChannelStats& o) const {
  return ChannelStats{bytes_sent - o.bytes_sent,
                      bytes_received - o.bytes_received,
                      frames_sent - o.frames_sent,
                      frames_received - o.frames_received,
                      ciphertexts_sent - o.ciphertexts_sent,
                      ciphertexts_received - o.ciphertexts_received,
                      ciphertext_bytes_sent - o.ciphertext_bytes_sent,
                      ciphertext_bytes_received - o.ciphertext_bytes_received};
}

void Channel::send(const Frame& f) {
  if (closed()) throw ClosedChannel();
  Bytes bytes = encode_frame(f);
  const std::size_t n = bytes.size();
  send_bytes(std::move(bytes));
  CiphertextTally t = tally(f);
  counters_.bytes_sent += n;
  counters_.frames_sent += 1;
  counters_.cts_sent += t.count;
  counters_.ct_bytes_sent += t.bytes;
}

std::optional<Frame> Channel::recv() {
  std::optional<Bytes> bytes = recv_bytes();
  if (!bytes) return std::nullopt;
  Frame f = decode_frame(*bytes);
  CiphertextTally t = tally(f);
  counters_.bytes_received += bytes->size();
  counters_.frames_received += 1;
  counters_.cts_received += t.count;
  counters_.ct_bytes_received += t.bytes;
  return f;
}

ChannelStats Channel::stats() const {
  return ChannelStats{counters_.bytes_sent.load(),
                      counters_.bytes_received.load(),
                      counters_.frames_sent.load(),
                      counters_.frames_received.load(),
                      counters_.cts_sent.load(),
                      counters_.cts_received.load(),
                      counters_.ct_bytes_sent.load(),
                      counters_.ct_bytes_received.load()};
}

ChannelStats stats(const Channel& ch) { return ch.stats(); }

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> pair_inmemory() {
  auto shared = std::make_shared<InMemoryChannel::Shared>();
  return {std::make_unique<InMemoryChannel>(shared, 0),
          std::make_unique<InMemoryChannel>(shared, 1)};
}

Frame SessionMux::recv(std::uint64_t session_id) {
  std::unique_lock<std::mutex> lock(mu_);
  for (;;) {
    auto it = pending_.find(session_id);
    if (it != pending_.end() && !it->second.empty()) {
      Frame f = std::move(it->second.front());
      it->second.pop_front();
      return f;
    }
    if (connection_error_) return *connection_error_;
    if (ended_) throw ClosedChannel();
    if (reading_) {
      cv_.wait(lock);
      continue;
    }
    reading_ = true;
    lock.unlock();
    std::optional<Frame> f;
    std::exception_ptr failure;
    try {
      f = ch_.recv();
    } catch (...) {
      failure = std::current_exception();
    }
    lock.lock();
    reading_ = false;
    if (failure || !f) {
      ended_ = true;
      cv_.notify_all();
      if (failure) std::rethrow_exception(failure);
      continue;
    }
    if (f->session_id == 0 && f->type() == MsgType::kError) {
      connection_error_ = std::move(*f);
    } else {
      pending_[f->session_id].push_back(std::move(*f));
    }
    cv_.notify_all();
  }
}

void client_hello(Channel& ch, const wire::Digest& pk_digest) {
  Frame hello{static_cast<std::uint8_t>(MsgType::kHello), 0, {kHelloVersion}};
  hello.payload.insert(hello.payload.end(), pk_digest.begin(), pk_digest.end());
  ch.send(hello);
  std::optional<Frame> reply = ch.recv();
  if (!reply) throw TransportError("connection closed during handshake");
  if (reply->type() == MsgType::kError) throw RemoteError(error_reason(*reply));
  if (reply->type() != MsgType::kHello) {
    throw ProtocolError("unexpected frame during handshake");
  }
}

bool server_hello(Channel& ch, const wire::Digest& pk_digest,
                  std::string* reason) {
  auto reject = [&](const std::string& why) {
    if (reason) *reason = why;
    try {
      ch.send(error_frame(0, why));
    } catch (const TransportError&) {
    }
    ch.close();
    return false;
  };
  std::optional<Frame> hello;
  try {
    hello = ch.recv();
  } catch (const FrameDecodeError& e) {
    return reject(std::string("malformed handshake: ") + e.what());
  }
  if (!hello) {
    if (reason) *reason = "connection closed before handshake";
    return false;
  }
  if (hello->type() != MsgType::kHello) return reject("expected HELLO");
  if (hello->payload.size() != 1 + pk_digest.size() ||
      hello->payload[0] != kHelloVersion) {
    return reject("malformed HELLO");
  }
  if (!std::equal(pk_digest.begin(), pk_digest.end(),
                  hello->payload.begin() + 1)) {
    return reject("public key digest mismatch");
  }
  Frame ack{static_cast<std::uint8_t>(MsgType::kHello), 0, {kHelloVersion}};
  ack.payload.insert(ack.payload.end(), pk_digest.begin(), pk_digest.end());
  ch.send(ack);
  return true;
}

}  // namespace soci
