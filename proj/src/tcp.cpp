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

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>

#include "soci/errors.hpp"
#include "soci/transport.hpp"

namespace soci {
namespace {

std::string errno_text(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

std::pair<std::string, std::string> split_addr(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos || colon + 1 == addr.size()) {
    throw InvalidArgument("address must be host:port, got '" + addr + "'");
  }
  std::string host = addr.substr(0, colon);
  if (host.empty()) host = "0.0.0.0";
  return {host, addr.substr(colon + 1)};
}

struct AddrInfo {
  addrinfo* head = nullptr;
  ~AddrInfo() {
    if (head) ::freeaddrinfo(head);
  }
};

AddrInfo resolve(const std::string& addr, bool passive) {
  auto [host, port] = split_addr(addr);
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  AddrInfo out;
  int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &out.head);
  if (rc != 0) {
    throw TransportError("cannot resolve " + addr + ": " + ::gai_strerror(rc));
  }
  return out;
}

class TcpChannel final : public Channel {
 public:
  explicit TcpChannel(int fd) : fd_(fd) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
  ~TcpChannel() override {
    close();
    ::close(fd_);
  }

  void close() override {
    bool expected = false;
    if (closed_.compare_exchange_strong(expected, true)) {
      ::shutdown(fd_, SHUT_RDWR);
    }
  }
  bool closed() const override { return closed_.load(); }

 protected:
  void send_bytes(Bytes frame_bytes) override {
    std::lock_guard<std::mutex> lock(send_mu_);
    if (closed_) throw ClosedChannel();
    std::size_t done = 0;
    while (done < frame_bytes.size()) {
      ssize_t n = ::send(fd_, frame_bytes.data() + done,
                         frame_bytes.size() - done, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError(errno_text("send"));
      }
      done += static_cast<std::size_t>(n);
    }
  }

  std::optional<Bytes> recv_bytes() override {
    std::lock_guard<std::mutex> lock(recv_mu_);
    if (closed_) throw ClosedChannel();
    Bytes buf(kFrameHeaderSize);
    if (!read_exact(buf.data(), kFrameHeaderSize, /*allow_eof=*/true)) {
      return std::nullopt;
    }
    if (wire::get_u32(buf, 12) > kMaxPayload) {
      close();
      throw ProtocolError("oversize frame from peer");
    }
    FrameHeader h;
    try {
      h = decode_frame_header(buf);
    } catch (const FrameDecodeError&) {
      close();
      throw;
    }
    buf.resize(kFrameHeaderSize + h.payload_len);
    if (h.payload_len > 0) {
      read_exact(buf.data() + kFrameHeaderSize, h.payload_len, false);
    }
    return buf;
  }

 private:
  // False on clean EOF before the first byte when allow_eof is set.
  bool read_exact(std::uint8_t* out, std::size_t n, bool allow_eof) {
    std::size_t done = 0;
    while (done < n) {
      ssize_t got = ::recv(fd_, out + done, n - done, 0);
      if (got < 0) {
        if (errno == EINTR) continue;
        if (closed_) throw ClosedChannel();
        throw TransportError(errno_text("recv"));
      }
      if (got == 0) {
        if (closed_) throw ClosedChannel();
        if (allow_eof && done == 0) return false;
        throw TransportError("connection reset mid-frame");
      }
      done += static_cast<std::size_t>(got);
    }
    return true;
  }

  int fd_;
  std::atomic<bool> closed_{false};
  std::mutex send_mu_;
  std::mutex recv_mu_;
};

}  // namespace

TcpListener::TcpListener(const std::string& addr) {
  AddrInfo ai = resolve(addr, true);
  int fd = ::socket(ai.head->ai_family, ai.head->ai_socktype,
                    ai.head->ai_protocol);
  if (fd < 0) throw TransportError(errno_text("socket"));
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(fd, ai.head->ai_addr, ai.head->ai_addrlen) != 0) {
    std::string msg = errno_text("bind " + addr);
    ::close(fd);
    throw TransportError(msg);
  }
  if (::listen(fd, 16) != 0) {
    std::string msg = errno_text("listen");
    ::close(fd);
    throw TransportError(msg);
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  fd_ = fd;
}

TcpListener::~TcpListener() {
  close();
  int fd = fd_.exchange(-1);
  if (fd >= 0) ::close(fd);
}

void TcpListener::close() {
  int fd = fd_.load();
  if (fd >= 0) ::shutdown(fd, SHUT_RDWR);
}

std::unique_ptr<Channel> TcpListener::accept() {
  for (;;) {
    int fd = fd_.load();
    if (fd < 0) return nullptr;
    int conn = ::accept(fd, nullptr, nullptr);
    if (conn >= 0) return std::make_unique<TcpChannel>(conn);
    if (errno == EINTR) continue;
    if (errno == EINVAL || errno == EBADF) return nullptr;  // shut down
    throw TransportError(errno_text("accept"));
  }
}

std::unique_ptr<TcpListener> listen_tcp(const std::string& addr) {
  return std::make_unique<TcpListener>(addr);
}

std::unique_ptr<Channel> connect_tcp(const std::string& addr) {
  AddrInfo ai = resolve(addr, false);
  int fd = ::socket(ai.head->ai_family, ai.head->ai_socktype,
                    ai.head->ai_protocol);
  if (fd < 0) throw TransportError(errno_text("socket"));
  if (::connect(fd, ai.head->ai_addr, ai.head->ai_addrlen) != 0) {
    std::string msg = errno_text("connect " + addr);
    ::close(fd);
    throw TransportError(msg);
  }
  return std::make_unique<TcpChannel>(fd);
}

}  // namespace soci
