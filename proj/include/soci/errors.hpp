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

#ifndef SOCI_ERRORS_HPP
#define SOCI_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace soci {

// Base of everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// mod_inv on a non-unit. Carries gcd(a, modulus).
class NotInvertible : public Error {
 public:
  explicit NotInvertible(mpz_class gcd)
      : Error("value is not invertible (gcd=" + gcd.get_str() + ")"),
        gcd_(std::move(gcd)) {}
  const mpz_class& gcd() const { return gcd_; }

 private:
  mpz_class gcd_;
};

class GenerationFailure : public Error {
 public:
  using Error::Error;
};

class EncodeRange : public Error {
 public:
  using Error::Error;
};

class MalformedCiphertext : public Error {
 public:
  using Error::Error;
};

class ThresholdDecryptionFailure : public Error {
 public:
  using Error::Error;
};

class WidthError : public Error {
 public:
  using Error::Error;
};

// Decoding a frame or a wire integer. `offset` is the byte position of the
// first offending byte.
class FrameDecodeError : public Error {
 public:
  FrameDecodeError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

class ClosedChannel : public TransportError {
 public:
  ClosedChannel() : TransportError("channel closed") {}
};

// Protocol-level failure: bad message sequence, remote ERROR frame, or an
// internal invariant violated during a run.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class RemoteError : public ProtocolError {
 public:
  explicit RemoteError(const std::string& reason)
      : ProtocolError("peer reported error: " + reason), reason_(reason) {}
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

class KeyFileError : public Error {
 public:
  using Error::Error;
};

}  // namespace soci

#endif  // SOCI_ERRORS_HPP
