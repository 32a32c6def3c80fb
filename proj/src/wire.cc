// Copyright 2026 The BEVGlue Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bevglue/wire.h"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace bevglue {
namespace {

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  void U16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v));
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  void U32(std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) {
      out_.push_back(static_cast<std::uint8_t>(v >> s));
    }
  }
  void F32(double v) { U32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }

 private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::size_t remaining() const { return in_.size() - pos_; }

  std::uint16_t U16() {
    Need(2);
    const auto v = static_cast<std::uint16_t>(in_[pos_] | (in_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t U32() {
    Need(4);
    std::uint32_t v = 0;
    for (int k = 3; k >= 0; --k) v = (v << 8) | in_[pos_ + k];
    pos_ += 4;
    return v;
  }
  double F32() { return static_cast<double>(std::bit_cast<float>(U32())); }

  std::span<const std::uint8_t> Bytes(std::size_t n) {
    Need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void Need(std::size_t n) const {
    if (remaining() < n) {
      throw DecodeError(DecodeError::Kind::kTruncated, "decode: truncated input");
    }
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

float ToWire(double v) { return static_cast<float>(v); }

}  // namespace

std::vector<std::uint8_t> Encode(const AlignmentMessage& msg) {
  if (msg.boxes.size() > kMaxBoxes) {
    throw EncodeError("encode: " + std::to_string(msg.boxes.size()) +
                      " boxes exceed the 16-bit count");
  }
  std::vector<std::uint8_t> out;
  out.reserve(EncodedSize(msg.boxes.size()));
  Writer w(out);
  w.U32(kWireMagic);
  w.U32(msg.sender_id);
  w.U32(msg.timestep);
  w.U16(static_cast<std::uint16_t>(msg.boxes.size()));
  for (const TrackedBox& b : msg.boxes) {
    ValidateBox(b);
    w.F32(b.x);
    w.F32(b.y);
    w.F32(b.l);
    w.F32(b.w);
    w.F32(b.yaw);
    w.U32(b.track_id);
  }
  return out;
}

AlignmentMessage Decode(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (r.U32() != kWireMagic) {
    throw DecodeError(DecodeError::Kind::kBadMagic, "decode: bad magic");
  }
  AlignmentMessage msg;
  msg.sender_id = r.U32();
  msg.timestep = r.U32();
  const std::size_t count = r.U16();
  if (r.remaining() < count * kBoxBytes) {
    throw DecodeError(DecodeError::Kind::kTruncated, "decode: truncated boxes");
  }
  msg.boxes.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    TrackedBox b;
    b.x = r.F32();
    b.y = r.F32();
    b.l = r.F32();
    b.w = r.F32();
    b.yaw = r.F32();
    b.track_id = r.U32();
    if (!std::isfinite(b.x) || !std::isfinite(b.y) || !std::isfinite(b.yaw) ||
        !(b.l > 0.0) || !(b.w > 0.0) || !std::isfinite(b.l) ||
        !std::isfinite(b.w)) {
      throw DecodeError(DecodeError::Kind::kInvalidField,
                        "decode: invalid box " + std::to_string(k));
    }
    msg.boxes.push_back(b);
  }
  if (r.remaining() != 0) {
    throw DecodeError(DecodeError::Kind::kTrailingBytes,
                      "decode: " + std::to_string(r.remaining()) +
                          " trailing bytes");
  }
  return msg;
}

AlignmentMessage QuantizeForWire(const AlignmentMessage& msg) {
  AlignmentMessage out = msg;
  for (TrackedBox& b : out.boxes) {
    b.x = ToWire(b.x);
    b.y = ToWire(b.y);
    b.l = ToWire(b.l);
    b.w = ToWire(b.w);
    b.yaw = ToWire(b.yaw);
  }
  return out;
}

BandwidthReport MakeBandwidthReport(std::uint64_t total_bytes) {
  BandwidthReport r;
  r.total_bytes = total_bytes;
  r.log2_bytes = total_bytes == 0
                     ? -std::numeric_limits<double>::infinity()
                     : std::log2(static_cast<double>(total_bytes));
  return r;
}

BandwidthReport MakeBandwidthReport(std::span<const AlignmentMessage> messages) {
  std::uint64_t total = 0;
  for (const AlignmentMessage& m : messages) total += EncodedSize(m.boxes.size());
  return MakeBandwidthReport(total);
}

std::vector<std::uint8_t> EncodeReplayLog(
    std::span<const AlignmentMessage> messages) {
  std::vector<std::uint8_t> out;
  Writer w(out);
  for (const AlignmentMessage& m : messages) {
    const std::vector<std::uint8_t> body = Encode(m);
    w.U32(static_cast<std::uint32_t>(body.size()));
    out.insert(out.end(), body.begin(), body.end());
  }
  return out;
}

std::vector<AlignmentMessage> DecodeReplayLog(
    std::span<const std::uint8_t> bytes) {
  std::vector<AlignmentMessage> out;
  Reader r(bytes);
  while (r.remaining() > 0) {
    const std::uint32_t len = r.U32();
    out.push_back(Decode(r.Bytes(len)));
  }
  return out;
}

void WriteReplayLog(const std::filesystem::path& path,
                    std::span<const AlignmentMessage> messages) {
  const std::vector<std::uint8_t> bytes = EncodeReplayLog(messages);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<AlignmentMessage> ReadReplayLog(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                        std::istreambuf_iterator<char>());
  return DecodeReplayLog(bytes);
}

}  // namespace bevglue
