#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "incfl/messages.hpp"

namespace incfl {

// Wire format (little-endian throughout):
//   offset 0   version       u8   (currently 1)
//   offset 1   kind          u8   (0 = local, 1 = edge)
//   offset 2   dimension d   u32
//   offset 6   sample count  u64
//   offset 14  payload       d IEEE-754 binary64 values
// Total size: 14 + 8 d bytes. Round trips are bit exact.

inline constexpr std::uint8_t kCodecVersion = 1;
inline constexpr std::size_t kHeaderBytes = 14;

enum class MessageKind : std::uint8_t {
  Local = 0,
  Edge = 1,
};

struct DecodedMessage {
  MessageKind kind = MessageKind::Local;
  std::uint64_t count = 0;
  ModelParams params;
};

std::vector<std::uint8_t> encode_message(const LocalMessage& m);
std::vector<std::uint8_t> encode_message(const EdgeMessage& m);

// Rejects truncated buffers, unknown versions/kinds, length mismatches and
// non-finite payloads with MalformedMessageError.
DecodedMessage decode_message(std::span<const std::uint8_t> bytes);

}  // namespace incfl
