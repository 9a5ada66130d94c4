// SPDX-License-Identifier: Apache-2.0

#include "cpir/wire.hpp"

#include <limits>

namespace cpir::wire {

namespace {

template <typename T>
void put(std::vector<std::uint8_t>& out, T v) {
  for (int shift = (sizeof(T) - 1) * 8; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (bytes_.size() - pos_ < sizeof(T)) fail(ErrorCode::kDecodeError, "truncated message");
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v = static_cast<T>((v << 8) | bytes_[pos_++]);
    return v;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  void expect_end() const {
    if (pos_ != bytes_.size()) fail(ErrorCode::kDecodeError, "trailing bytes in message");
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

bool known_tag(std::uint8_t t) { return t == 0x01 || t == 0x02 || t == 0x03 || t == 0x7F; }

}  // namespace

std::vector<std::uint8_t> encode_frame(const Frame& f) {
  if (f.body.size() + 1 > kMaxFrameLength) fail(ErrorCode::kEncodeError, "frame too large");
  std::vector<std::uint8_t> out;
  out.reserve(5 + f.body.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.body.size() + 1));
  out.push_back(static_cast<std::uint8_t>(f.tag));
  out.insert(out.end(), f.body.begin(), f.body.end());
  return out;
}

std::optional<Frame> decode_frame(std::span<const std::uint8_t> bytes, std::size_t& consumed) {
  consumed = 0;
  if (bytes.size() < 4) return std::nullopt;
  const std::uint32_t length = Reader(bytes.first(4)).get<std::uint32_t>();
  if (length < 1 || length > kMaxFrameLength) fail(ErrorCode::kDecodeError, "bad frame length");
  if (bytes.size() < 4 + static_cast<std::size_t>(length)) return std::nullopt;
  const std::uint8_t tag = bytes[4];
  if (!known_tag(tag)) fail(ErrorCode::kDecodeError, "unknown frame tag");
  Frame f{static_cast<Tag>(tag), std::vector<std::uint8_t>(bytes.begin() + 5, bytes.begin() + 4 + length)};
  consumed = 4 + static_cast<std::size_t>(length);
  return f;
}

std::vector<std::uint8_t> encode_hello(const Hello& h) {
  std::vector<std::uint8_t> out;
  out.push_back(h.version);
  put<std::uint16_t>(out, h.server_id);
  return out;
}

Hello decode_hello(std::span<const std::uint8_t> body) {
  Reader r(body);
  Hello h;
  h.version = r.get<std::uint8_t>();
  h.server_id = r.get<std::uint16_t>();
  r.expect_end();
  return h;
}

std::vector<std::uint8_t> encode_query(const WireQuery& q) {
  if (q.sums.size() > std::numeric_limits<std::uint32_t>::max()) fail(ErrorCode::kEncodeError, "too many sums");
  std::vector<std::uint8_t> out;
  put<std::uint32_t>(out, static_cast<std::uint32_t>(q.sums.size()));
  for (const auto& s : q.sums) {
    if (s.terms.size() > std::numeric_limits<std::uint16_t>::max()) fail(ErrorCode::kEncodeError, "too many terms");
    put<std::uint16_t>(out, static_cast<std::uint16_t>(s.terms.size()));
    for (const auto& t : s.terms) {
      if (t.record > std::numeric_limits<std::uint16_t>::max()) {
        fail(ErrorCode::kEncodeError, "record index does not fit in 16 bits");
      }
      put<std::uint16_t>(out, static_cast<std::uint16_t>(t.record));
      put<std::uint32_t>(out, t.position);
    }
  }
  return out;
}

WireQuery decode_query(std::span<const std::uint8_t> body) {
  Reader r(body);
  WireQuery q;
  const std::uint32_t sums = r.get<std::uint32_t>();
  // Each sum needs at least its 2-byte term count.
  if (sums > r.remaining() / 2) fail(ErrorCode::kDecodeError, "sum count exceeds message size");
  q.sums.resize(sums);
  for (auto& s : q.sums) {
    const std::uint16_t terms = r.get<std::uint16_t>();
    if (terms > r.remaining() / 6) fail(ErrorCode::kDecodeError, "term count exceeds message size");
    s.terms.resize(terms);
    for (auto& t : s.terms) {
      t.record = r.get<std::uint16_t>();
      t.position = r.get<std::uint32_t>();
    }
  }
  r.expect_end();
  return q;
}

std::vector<std::uint8_t> encode_answer(const WireAnswer& a) {
  if (a.values.size() > std::numeric_limits<std::uint32_t>::max()) fail(ErrorCode::kEncodeError, "too many values");
  std::vector<std::uint8_t> out;
  out.reserve(4 + 8 * a.values.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(a.values.size()));
  for (auto v : a.values) put<std::uint64_t>(out, v);
  return out;
}

WireAnswer decode_answer(std::span<const std::uint8_t> body) {
  Reader r(body);
  const std::uint32_t count = r.get<std::uint32_t>();
  if (count != r.remaining() / 8 || r.remaining() % 8 != 0) fail(ErrorCode::kDecodeError, "answer length mismatch");
  WireAnswer a;
  a.values.resize(count);
  for (auto& v : a.values) v = r.get<std::uint64_t>();
  return a;
}

Frame error_frame(const std::string& message) {
  return {Tag::kError, std::vector<std::uint8_t>(message.begin(), message.end())};
}

}  // namespace cpir::wire
