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

#ifndef SOCI_TRANSPORT_HPP
#define SOCI_TRANSPORT_HPP

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "soci/wire.hpp"

namespace soci {

using wire::Bytes;

enum class MsgType : std::uint8_t {
  kSmulReq = 0x01,
  kSmulResp = 0x02,
  kScmpReq = 0x03,
  kScmpResp = 0x04,
  kError = 0x0E,
  kHello = 0x0F,
};

inline constexpr std::uint8_t kFrameMagic0 = 0x53;
inline constexpr std::uint8_t kFrameMagic1 = 0x2B;
inline constexpr std::uint8_t kFrameVersion = 0x01;
inline constexpr std::size_t kFrameHeaderSize = 16;
inline constexpr std::size_t kMaxPayload = std::size_t{1} << 24;
inline constexpr std::uint8_t kHelloVersion = 0x01;

// magic(2) version(1) msg_type(1) session_id(8, BE) payload_len(4, BE) payload
struct Frame {
  std::uint8_t msg_type = 0;
  std::uint64_t session_id = 0;
  Bytes payload;

  MsgType type() const { return static_cast<MsgType>(msg_type); }
  bool operator==(const Frame&) const = default;
};

struct FrameHeader {
  std::uint8_t msg_type = 0;
  std::uint64_t session_id = 0;
  std::uint32_t payload_len = 0;
};

Bytes encode_frame(const Frame& f);
// Decodes exactly one frame occupying the whole buffer.
Frame decode_frame(std::span<const std::uint8_t> bytes);
// Validates magic and version of a 16-byte header.
FrameHeader decode_frame_header(std::span<const std::uint8_t> header);

// Request/response types carry WireBigInt ciphertexts; these are counted in
// ChannelStats.
bool carries_ciphertexts(std::uint8_t msg_type);

Frame error_frame(std::uint64_t session_id, const std::string& reason);
std::string error_reason(const Frame& f);

struct ChannelStats {
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;
  std::uint64_t frames_sent = 0;
  std::uint64_t frames_received = 0;
  std::uint64_t ciphertexts_sent = 0;
  std::uint64_t ciphertexts_received = 0;
  // Magnitude bytes of those ciphertexts, without WireBigInt length prefixes.
  std::uint64_t ciphertext_bytes_sent = 0;
  std::uint64_t ciphertext_bytes_received = 0;

  ChannelStats operator-(const ChannelStats& o) const;
};

// A framed, ordered, bidirectional message pipe. One reader and one writer
// may use an endpoint concurrently.
class Channel {
 public:
  virtual ~Channel() = default;

  // Throws ClosedChannel after close(), TransportError on I/O failure.
  void send(const Frame& f);
  // Next frame, or nullopt once the peer has closed and nothing is left.
  std::optional<Frame> recv();
  virtual void close() = 0;
  virtual bool closed() const = 0;

  ChannelStats stats() const;

 protected:
  virtual void send_bytes(Bytes frame_bytes) = 0;
  virtual std::optional<Bytes> recv_bytes() = 0;

 private:
  struct Counters {
    std::atomic<std::uint64_t> bytes_sent{0}, bytes_received{0};
    std::atomic<std::uint64_t> frames_sent{0}, frames_received{0};
    std::atomic<std::uint64_t> cts_sent{0}, cts_received{0};
    std::atomic<std::uint64_t> ct_bytes_sent{0}, ct_bytes_received{0};
  };
  Counters counters_;
};

ChannelStats stats(const Channel& ch);

// Two connected in-process endpoints.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> pair_inmemory();

// Splits one channel into logical sessions keyed by session_id. Frames for
// sessions other than the one being waited on are buffered until claimed.
class SessionMux {
 public:
  explicit SessionMux(Channel& ch) : ch_(ch) {}

  void send(const Frame& f) { ch_.send(f); }
  // Blocks until a frame for `session_id` arrives. A connection-level ERROR
  // (session 0) is delivered to every waiter. Throws ClosedChannel when the
  // channel ends first.
  Frame recv(std::uint64_t session_id);
  std::uint64_t new_session_id() { return next_id_.fetch_add(1); }
  Channel& channel() { return ch_; }

 private:
  Channel& ch_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::map<std::uint64_t, std::deque<Frame>> pending_;
  std::optional<Frame> connection_error_;
  bool reading_ = false;
  bool ended_ = false;
  std::atomic<std::uint64_t> next_id_{1};
};

// TCP endpoints. Addresses are "host:port".
class TcpListener {
 public:
  explicit TcpListener(const std::string& addr);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  // Blocks for the next connection; nullptr once the listener is closed.
  std::unique_ptr<Channel> accept();
  void close();
  std::uint16_t port() const { return port_; }

 private:
  std::atomic<int> fd_{-1};
  std::uint16_t port_ = 0;
};

std::unique_ptr<TcpListener> listen_tcp(const std::string& addr);
std::unique_ptr<Channel> connect_tcp(const std::string& addr);

// Mandatory on TCP: the client announces the SHA-256 digest of its public
// key; the server answers HELLO when it matches, or ERROR and closes.
void client_hello(Channel& ch, const wire::Digest& pk_digest);
bool server_hello(Channel& ch, const wire::Digest& pk_digest,
                  std::string* reason = nullptr);

}  // namespace soci

#endif  // SOCI_TRANSPORT_HPP
