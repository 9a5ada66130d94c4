// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpir/protocol.hpp"

namespace cpir::wire {

// Frame: length (4 bytes BE, = 1 + body length), tag (1 byte), body.
// All integers big-endian.

enum class Tag : std::uint8_t { kHello = 0x01, kQuery = 0x02, kAnswer = 0x03, kError = 0x7F };

inline constexpr std::uint8_t kProtocolVersion = 1;
inline constexpr std::size_t kMaxFrameLength = 64u << 20;

struct Frame {
  Tag tag = Tag::kError;
  std::vector<std::uint8_t> body;
};

std::vector<std::uint8_t> encode_frame(const Frame& f);

/// Parses one frame from the front of `bytes`. Returns nullopt if more bytes
/// are needed; throws kDecodeError on an unknown tag or bad length.
std::optional<Frame> decode_frame(std::span<const std::uint8_t> bytes, std::size_t& consumed);

struct Hello {
  std::uint8_t version = kProtocolVersion;
  std::uint16_t server_id = 0;  // 1-based
  friend bool operator==(const Hello&, const Hello&) = default;
};

std::vector<std::uint8_t> encode_hello(const Hello& h);
Hello decode_hello(std::span<const std::uint8_t> body);

/// Sum count (4B), then per sum: term count (2B), then per term the 1-based
/// record (2B) and 0-based position (4B). Throws kEncodeError on overflow.
std::vector<std::uint8_t> encode_query(const WireQuery& q);
WireQuery decode_query(std::span<const std::uint8_t> body);

/// Value count (4B), then each value as 8 bytes.
std::vector<std::uint8_t> encode_answer(const WireAnswer& a);
WireAnswer decode_answer(std::span<const std::uint8_t> body);

Frame error_frame(const std::string& message);

}  // namespace cpir::wire
