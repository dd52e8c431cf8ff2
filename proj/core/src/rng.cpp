// Copyright 2026 The sdnlw Authors.
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

#include "sdnlw/rng.hpp"

#include <cmath>
#include <numbers>

#include "sdnlw/error.hpp"

namespace sdnlw {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

std::uint32_t zigzag(int n) {
  return n >= 0 ? 2u * static_cast<std::uint32_t>(n) : 2u * static_cast<std::uint32_t>(-n) - 1u;
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index, StreamPurpose purpose)
    : master_seed_(master_seed), stream_index_(stream_index), purpose_(purpose) {
  const std::uint64_t k =
      splitmix64(master_seed ^ (static_cast<std::uint64_t>(purpose) * 0xA24BAED4963EE407ull));
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

RngStream RngStream::with_purpose(StreamPurpose purpose) const {
  RngStream out(master_seed_, stream_index_, purpose);
  out.offset_ = offset_;
  return out;
}

RngStream RngStream::advanced(std::uint64_t steps) const {
  RngStream out = *this;
  out.offset_ += steps;
  return out;
}

PhiloxCounter RngStream::block(std::uint32_t slot, std::uint64_t step) const {
  const std::uint64_t t = step + offset_;
  if (t > 0xFFFFFFFFull) throw ValidationError("RngStream: step index exceeds 2^32 - 1");
  return philox4x32_10({slot, static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(stream_index_),
                        static_cast<std::uint32_t>(stream_index_ >> 32)},
                       key_);
}

std::array<double, 2> RngStream::uniforms(std::uint32_t slot, std::uint64_t step) const {
  const PhiloxCounter r = block(slot, step);
  constexpr double kScale = 0x1.0p-53;
  const std::uint64_t x = (static_cast<std::uint64_t>(r[1]) << 32) | r[0];
  const std::uint64_t y = (static_cast<std::uint64_t>(r[3]) << 32) | r[2];
  return {(static_cast<double>(x >> 11) + 0.5) * kScale, (static_cast<double>(y >> 11) + 0.5) * kScale};
}

NormalPair RngStream::normals(std::uint32_t slot, std::uint64_t step) const {
  const auto [u1, u2] = uniforms(slot, step);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

std::uint32_t mode_slot(int n1, int n2, int component) {
  const std::uint64_t a = zigzag(n1);
  const std::uint64_t b = zigzag(n2);
  const std::uint64_t pair = (a + b) * (a + b + 1) / 2 + b;
  const std::uint64_t slot = 2 * pair + static_cast<std::uint64_t>(component);
  if (slot > 0xFFFFFFFFull) throw ValidationError("mode_slot: mode index too large");
  return static_cast<std::uint32_t>(slot);
}

}  // namespace sdnlw
