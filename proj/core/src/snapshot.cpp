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

#include "sdnlw/snapshot.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "sdnlw/error.hpp"

namespace sdnlw {

namespace {

constexpr char kMagic[4] = {'S', 'D', 'N', 'L'};

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b, 4);
}

void put_f64(std::ostream& out, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
  out.write(b, 8);
}

void read_exact(std::istream& in, char* buf, std::size_t n) {
  in.read(buf, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw ValidationError("snapshot: truncated record");
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  read_exact(in, reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  read_exact(in, reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

void write_header(std::ostream& out, int cutoff, double s) {
  out.write(kMagic, 4);
  put_u32(out, kSnapshotVersion);
  put_u32(out, static_cast<std::uint32_t>(cutoff));
  put_f64(out, s);
}

SnapshotHeader read_header(std::istream& in) {
  char magic[4];
  read_exact(in, magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw ValidationError("snapshot: bad magic bytes");
  SnapshotHeader h;
  h.version = get_u32(in);
  if (h.version != kSnapshotVersion) {
    throw ValidationError("snapshot: unsupported format version " + std::to_string(h.version));
  }
  h.cutoff = get_u32(in);
  if (h.cutoff > 1u << 14) throw ValidationError("snapshot: implausible cutoff");
  h.s = get_f64(in);
  return h;
}

void write_block(std::ostream& out, const SpectralField& f) {
  for (const Complex& c : f.coefficients()) {
    put_f64(out, c.real());
    put_f64(out, c.imag());
  }
}

SpectralField read_block(std::istream& in, int cutoff) {
  SpectralField f(cutoff);
  for (Complex& c : f.coefficients()) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    c = Complex(re, im);
  }
  double scale = 0.0;
  for (const Complex& c : f.coefficients()) scale = std::max(scale, std::abs(c));
  if (!f.all_finite()) throw ValidationError("snapshot: non-finite coefficient");
  if (f.hermitian_defect() > 1e-12 * std::max(scale, 1.0)) {
    throw ValidationError("snapshot: coefficients are not Hermitian symmetric");
  }
  return f;
}

}  // namespace

void write_field(std::ostream& out, const SpectralField& f, double s) {
  write_header(out, f.cutoff(), s);
  write_block(out, f);
}

void write_state(std::ostream& out, const PhaseState& x, double s) {
  write_header(out, x.cutoff(), s);
  write_block(out, x.u);
  write_block(out, x.v);
}

SpectralField read_field(std::istream& in, SnapshotHeader* header) {
  const SnapshotHeader h = read_header(in);
  if (header != nullptr) *header = h;
  return read_block(in, static_cast<int>(h.cutoff));
}

PhaseState read_state(std::istream& in, SnapshotHeader* header) {
  const SnapshotHeader h = read_header(in);
  if (header != nullptr) *header = h;
  SpectralField u = read_block(in, static_cast<int>(h.cutoff));
  SpectralField v = read_block(in, static_cast<int>(h.cutoff));
  return {std::move(u), std::move(v)};
}

std::vector<PhaseState> read_states(std::istream& in) {
  std::vector<PhaseState> out;
  while (in.peek() != std::char_traits<char>::eof()) out.push_back(read_state(in));
  return out;
}

void save_state(const std::string& path, const PhaseState& x, double s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  write_state(out, x, s);
}

PhaseState load_state(const std::string& path, SnapshotHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return read_state(in, header);
}

void save_field(const std::string& path, const SpectralField& f, double s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  write_field(out, f, s);
}

SpectralField load_field(const std::string& path, SnapshotHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return read_field(in, header);
}

}  // namespace sdnlw
