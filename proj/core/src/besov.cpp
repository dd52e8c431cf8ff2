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

#include "sdnlw/besov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdnlw/error.hpp"

namespace sdnlw {

namespace {

constexpr double kPlateau = 1.25;
constexpr double kEdge = 1.6;

// C^infinity step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double block_lp(const SpectralField& block, double p, int eval_grid) {
  if (p == 2.0) return std::sqrt(inner_product(block, block));
  return lp_norm(block, p, eval_grid);
}

int default_grid(int cutoff) { return fft_length_at_least(2 * (4 * cutoff + 2)); }

}  // namespace

double lp_bump(double r) { return smooth_step((kEdge - std::abs(r)) / (kEdge - kPlateau)); }

double dyadic_symbol(int N, double r) {
  if (N == 1) return lp_bump(r);
  const double n = static_cast<double>(N);
  return lp_bump(r / n) - lp_bump(2.0 * r / n);
}

std::vector<int> dyadic_blocks(int cutoff) {
  const double rmax = std::sqrt(2.0) * cutoff;
  std::vector<int> out{1};
  // Block N reaches |n| < 8N/5; stop once the previous block's plateau
  // (|n| <= 5N/4 after telescoping) covers every stored mode.
  while (kPlateau * out.back() < rmax) out.push_back(2 * out.back());
  return out;
}

SpectralField lp_block(const SpectralField& f, int N) {
  if (!is_power_of_two(N)) throw ValidationError("lp_block: N must be a power of two");
  return apply_multiplier(f, RadialMultiplier("P_" + std::to_string(N), [N](double n2) {
                            return dyadic_symbol(N, std::sqrt(n2));
                          }));
}

double besov_norm(const SpectralField& f, double alpha, double p, double q, int eval_grid) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw ValidationError("besov_norm: p and q must lie in [1, inf]");
  if (eval_grid == 0) eval_grid = default_grid(f.cutoff());
  double acc = 0.0;
  for (int N : dyadic_blocks(f.cutoff())) {
    const SpectralField block = lp_block(f, N);
    if (block.is_zero()) continue;
    const double term = std::pow(static_cast<double>(N), alpha) * block_lp(block, p, eval_grid);
    if (std::isinf(q)) {
      acc = std::max(acc, term);
    } else {
      acc += std::pow(term, q);
    }
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

double holder_norm(const SpectralField& f, double alpha, int eval_grid) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return besov_norm(f, alpha, inf, inf, eval_grid);
}

double holder_norm(const PhaseState& x, double alpha, int eval_grid) {
  return holder_norm(x.u, alpha, eval_grid) + holder_norm(x.v, alpha - 1.0, eval_grid);
}

ParaproductKind parse_paraproduct_kind(const std::string& name) {
  if (name == "lo-hi" || name == "lo_hi") return ParaproductKind::lo_hi;
  if (name == "resonant") return ParaproductKind::resonant;
  if (name == "hi-lo" || name == "hi_lo") return ParaproductKind::hi_lo;
  throw ValidationError("unknown paraproduct kind '" + name + "'");
}

SpectralField paraproduct(const SpectralField& f, const SpectralField& g, ParaproductKind kind,
                          int out_cutoff) {
  if (f.cutoff() != g.cutoff()) throw ShapeError("paraproduct: factors have mismatched cutoffs");
  if (out_cutoff < 0) out_cutoff = 2 * f.cutoff();
  const std::vector<int> sizes = dyadic_blocks(f.cutoff());
  std::vector<SpectralField> fb, gb;
  for (int N : sizes) {
    fb.push_back(lp_block(f, N));
    gb.push_back(lp_block(g, N));
  }
  auto selected = [kind](int n, int m) {
    switch (kind) {
      case ParaproductKind::lo_hi:
        return 2 * n < m;
      case ParaproductKind::hi_lo:
        return 2 * m < n;
      case ParaproductKind::resonant:
        return !(2 * n < m) && !(2 * m < n);
    }
    return false;
  };
  SpectralField out(out_cutoff);
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    if (gb[j].is_zero()) continue;
    // Sum the f blocks that pair with this g block, then multiply once.
    SpectralField partner(f.cutoff());
    bool any = false;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (!selected(sizes[i], sizes[j]) || fb[i].is_zero()) continue;
      partner += fb[i];
      any = true;
    }
    if (any) out += product({partner, gb[j]}, out_cutoff);
  }
  return out;
}

SpectralField commutator_residual(const SpectralField& u, double s) {
  const int out = 3 * u.cutoff();
  const SpectralField su = apply_multiplier(u, RadialMultiplier::bracket_power(s));
  SpectralField res = apply_multiplier(product({u, u, u}, out), RadialMultiplier::bracket_power(s));
  res -= 3.0 * product({u, u, su}, out);
  return res;
}

}  // namespace sdnlw
