#include "incfl/codec.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "incfl/errors.hpp"

namespace incfl {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

std::vector<std::uint8_t> encode(MessageKind kind, std::uint64_t count,
                                 const ModelParams& params) {
  if (count == 0) throw InvalidInputError("encode_message: zero count");
  if (params.size() > std::numeric_limits<std::uint32_t>::max())
    throw InvalidInputError("encode_message: dimension too large for wire format");
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 8 * params.size());
  out.push_back(kCodecVersion);
  out.push_back(static_cast<std::uint8_t>(kind));
  put_u32(out, static_cast<std::uint32_t>(params.size()));
  put_u64(out, count);
  for (double v : params) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode_message(const LocalMessage& m) {
  return encode(MessageKind::Local, m.count, m.params);
}

std::vector<std::uint8_t> encode_message(const EdgeMessage& m) {
  return encode(MessageKind::Edge, m.count, m.params);
}

DecodedMessage decode_message(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes)
    throw MalformedMessageError("decode_message: buffer shorter than header");
  if (bytes[0] != kCodecVersion)
    throw MalformedMessageError("decode_message: unsupported version " +
                                std::to_string(bytes[0]));
  if (bytes[1] > 1)
    throw MalformedMessageError("decode_message: unknown message kind " +
                                std::to_string(bytes[1]));
  const std::uint32_t d = get_u32(bytes.data() + 2);
  const std::uint64_t count = get_u64(bytes.data() + 6);
  if (bytes.size() != kHeaderBytes + 8ull * d)
    throw MalformedMessageError("decode_message: payload length mismatch");
  if (count == 0) throw MalformedMessageError("decode_message: zero count");

  DecodedMessage msg;
  msg.kind = static_cast<MessageKind>(bytes[1]);
  msg.count = count;
  msg.params.resize(d);
  for (std::uint32_t i = 0; i < d; ++i) {
    msg.params[i] =
        std::bit_cast<double>(get_u64(bytes.data() + kHeaderBytes + 8ull * i));
    if (!std::isfinite(msg.params[i]))
      throw MalformedMessageError("decode_message: non-finite parameter");
  }
  return msg;
}

}  // namespace incfl
