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

#ifndef SDNLW_SNAPSHOT_HPP
#define SDNLW_SNAPSHOT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdnlw/spectral.hpp"

namespace sdnlw {

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct SnapshotHeader {
  std::uint32_t version = kSnapshotVersion;
  std::uint32_t cutoff = 0;
  double s = 0.0;
};

/// Field record: "SDNL", u32 version, u32 N, f64 s, then (2N+1)^2
/// coefficients as little-endian (re, im) f64 pairs, row-major over
/// n1 = -N..N then n2 = -N..N.
void write_field(std::ostream& out, const SpectralField& f, double s);
/// Phase-state record: one header followed by the u block and the v block.
void write_state(std::ostream& out, const PhaseState& x, double s);

/// Throws ValidationError on a bad magic, an unknown version, truncation or
/// coefficients that are not Hermitian to 1e-12 (relative).
SpectralField read_field(std::istream& in, SnapshotHeader* header = nullptr);
PhaseState read_state(std::istream& in, SnapshotHeader* header = nullptr);

/// Reads consecutive phase-state records until end of stream.
std::vector<PhaseState> read_states(std::istream& in);

void save_state(const std::string& path, const PhaseState& x, double s);
PhaseState load_state(const std::string& path, SnapshotHeader* header = nullptr);
void save_field(const std::string& path, const SpectralField& f, double s);
SpectralField load_field(const std::string& path, SnapshotHeader* header = nullptr);

}  // namespace sdnlw

#endif  // SDNLW_SNAPSHOT_HPP
