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

#ifndef SDNLW_RNG_HPP
#define SDNLW_RNG_HPP

#include <array>
#include <cstdint>

namespace sdnlw {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al. counter-based generator).
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

std::uint64_t splitmix64(std::uint64_t x);

/// Separates the random numbers used for different roles so that, e.g.,
/// initial data and forcing never share a block.
enum class StreamPurpose : std::uint32_t {
  initial_data = 1,
  noise = 2,
  lab = 3,
};

/// Pair of standard normals.
struct NormalPair {
  double a;
  double b;
};

/// Stateless view of one random stream.  Every variate is addressed by
/// (slot, step): the block at that address is a pure function of
/// (master_seed, stream_index, purpose, slot, step + offset), so draws
/// never depend on evaluation order or on which worker evaluates them.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index,
            StreamPurpose purpose = StreamPurpose::initial_data);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }
  StreamPurpose purpose() const { return purpose_; }
  std::uint64_t offset() const { return offset_; }

  RngStream with_purpose(StreamPurpose purpose) const;
  /// The stream seen from step k onwards: advanced(k).block(slot, j) equals
  /// block(slot, j + k).
  RngStream advanced(std::uint64_t steps) const;

  PhiloxCounter block(std::uint32_t slot, std::uint64_t step = 0) const;
  /// Two uniforms in (0, 1) with 53 random bits each.
  std::array<double, 2> uniforms(std::uint32_t slot, std::uint64_t step = 0) const;
  /// Box-Muller transform of uniforms(slot, step).
  NormalPair normals(std::uint32_t slot, std::uint64_t step = 0) const;

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  StreamPurpose purpose_;
  std::uint64_t offset_ = 0;
  PhiloxKey key_;
};

/// Slot of Fourier mode (n1, n2), component c in {0, 1}.  Independent of any
/// cutoff, so samples at different cutoffs are nested.
std::uint32_t mode_slot(int n1, int n2, int component);

}  // namespace sdnlw

#endif  // SDNLW_RNG_HPP
