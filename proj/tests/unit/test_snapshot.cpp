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

#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <string>

#include "oracles/oracles.hpp"
#include "sdnlw/error.hpp"
#include "sdnlw/snapshot.hpp"

namespace sdnlw {
namespace {

bool same(const SpectralField& a, const SpectralField& b) {
  return a.cutoff() == b.cutoff() && std::ranges::equal(a.coefficients(), b.coefficients());
}

TEST(Snapshot, ByteLayout) {
  std::ostringstream out;
  write_field(out, SpectralField::constant(0, 1.5), 1.0);
  const std::string bytes = out.str();
  ASSERT_EQ(bytes.size(), 4u + 4u + 4u + 8u + 16u);
  EXPECT_EQ(bytes.substr(0, 4), "SDNL");
  const unsigned char expected[] = {1, 0, 0, 0,  0, 0, 0, 0,  0, 0, 0, 0,    0, 0, 0xf0, 0x3f,
                                    0, 0, 0, 0,  0, 0, 0xf8, 0x3f, 0, 0, 0, 0, 0, 0, 0,    0};
  EXPECT_EQ(std::memcmp(bytes.data() + 4, expected, sizeof(expected)), 0);
}

TEST(Snapshot, FieldRoundTrip) {
  const SpectralField f = oracle::random_field(7, 3);
  std::stringstream io;
  write_field(io, f, 0.75);
  SnapshotHeader h;
  const SpectralField g = read_field(io, &h);
  EXPECT_TRUE(same(f, g));
  EXPECT_EQ(h.cutoff, 7u);
  EXPECT_EQ(h.s, 0.75);
  EXPECT_EQ(h.version, kSnapshotVersion);
}

TEST(Snapshot, StateStreamRoundTrip) {
  std::stringstream io;
  std::vector<PhaseState> xs;
  for (unsigned i = 0; i < 3; ++i) {
    xs.emplace_back(oracle::random_field(4, i), oracle::random_field(4, 10 + i));
    write_state(io, xs.back(), 1.0);
  }
  const std::vector<PhaseState> ys = read_states(io);
  ASSERT_EQ(ys.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_TRUE(same(xs[i].u, ys[i].u));
    EXPECT_TRUE(same(xs[i].v, ys[i].v));
  }
}

TEST(Snapshot, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "sdnlw_snapshot_test";
  std::filesystem::create_directories(dir);
  const PhaseState x(oracle::random_field(5, 1), oracle::random_field(5, 2));
  save_state((dir / "x.bin").string(), x, 1.25);
  SnapshotHeader h;
  const PhaseState y = load_state((dir / "x.bin").string(), &h);
  EXPECT_TRUE(same(x.u, y.u));
  EXPECT_TRUE(same(x.v, y.v));
  EXPECT_EQ(h.s, 1.25);
  save_field((dir / "f.bin").string(), x.u, 2.0);
  EXPECT_TRUE(same(load_field((dir / "f.bin").string()), x.u));
  EXPECT_THROW(load_state((dir / "missing.bin").string()), Error);
  std::filesystem::remove_all(dir);
}

TEST(Snapshot, RejectsCorruptInput) {
  std::ostringstream out;
  write_field(out, oracle::random_field(3, 4), 1.0);
  const std::string good = out.str();

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  std::istringstream a(bad_magic);
  EXPECT_THROW(read_field(a), ValidationError);

  std::string bad_version = good;
  bad_version[4] = 9;
  std::istringstream b(bad_version);
  EXPECT_THROW(read_field(b), ValidationError);

  std::istringstream c(good.substr(0, good.size() - 5));
  EXPECT_THROW(read_field(c), ValidationError);

  // Break Hermitian symmetry: overwrite the real part of the first coefficient.
  std::string skew = good;
  const double junk = 123.0;
  std::memcpy(skew.data() + 20, &junk, sizeof(junk));
  std::istringstream d(skew);
  EXPECT_THROW(read_field(d), ValidationError);

  std::string nan = good;
  const double q = std::numeric_limits<double>::quiet_NaN();
  std::memcpy(nan.data() + 20, &q, sizeof(q));
  std::istringstream e(nan);
  EXPECT_THROW(read_field(e), ValidationError);
}

}  // namespace
}  // namespace sdnlw
