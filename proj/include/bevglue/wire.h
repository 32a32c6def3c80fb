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

#ifndef BEVGLUE_WIRE_H_
#define BEVGLUE_WIRE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "bevglue/object_graph.h"

namespace bevglue {

// Boxes one agent shares with its collaborators for a single frame.
//
// Layout (little-endian):
//   u32 magic 0x42474C55 | u32 sender_id | u32 timestep | u16 count
//   count x { f32 x | f32 y | f32 l | f32 w | f32 yaw | u32 track_id }
struct AlignmentMessage {
  std::uint32_t sender_id = 0;
  std::uint32_t timestep = 0;
  std::vector<TrackedBox> boxes;

  bool operator==(const AlignmentMessage&) const = default;
};

inline constexpr std::uint32_t kWireMagic = 0x42474C55;
inline constexpr std::size_t kHeaderBytes = 14;
inline constexpr std::size_t kBoxBytes = 24;
inline constexpr std::size_t kMaxBoxes = 65535;

class EncodeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class DecodeError : public std::runtime_error {
 public:
  enum class Kind { kBadMagic, kTruncated, kTrailingBytes, kInvalidField };

  DecodeError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

constexpr std::size_t EncodedSize(std::size_t num_boxes) {
  return kHeaderBytes + kBoxBytes * num_boxes;
}

std::vector<std::uint8_t> Encode(const AlignmentMessage& msg);

AlignmentMessage Decode(std::span<const std::uint8_t> bytes);

// Rounds every floating field through its 32-bit wire representation, i.e.
// Decode(Encode(msg)) without the byte detour.
AlignmentMessage QuantizeForWire(const AlignmentMessage& msg);

struct BandwidthReport {
  std::uint64_t total_bytes = 0;
  double log2_bytes = 0.0;  // -infinity when total_bytes == 0
};

BandwidthReport MakeBandwidthReport(std::span<const AlignmentMessage> messages);
BandwidthReport MakeBandwidthReport(std::uint64_t total_bytes);

// Replay log: concatenation of { u32 length | encoded message }.
std::vector<std::uint8_t> EncodeReplayLog(
    std::span<const AlignmentMessage> messages);
std::vector<AlignmentMessage> DecodeReplayLog(
    std::span<const std::uint8_t> bytes);

void WriteReplayLog(const std::filesystem::path& path,
                    std::span<const AlignmentMessage> messages);
std::vector<AlignmentMessage> ReadReplayLog(const std::filesystem::path& path);

}  // namespace bevglue

#endif  // BEVGLUE_WIRE_H_
