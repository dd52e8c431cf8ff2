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

#ifndef SDNLW_BESOV_HPP
#define SDNLW_BESOV_HPP

#include <string>
#include <vector>

#include "sdnlw/spectral.hpp"

namespace sdnlw {

/// Smooth even bump: 1 on [-5/4, 5/4], 0 outside (-8/5, 8/5).
double lp_bump(double r);

/// Symbol of the dyadic block P_N at |n| = r.  N = 1 is the base block
/// phi(r); N = 2^j >= 2 gives phi(r/N) - phi(2r/N).  The blocks telescope,
/// so they sum to 1 at every r.
double dyadic_symbol(int N, double r);

/// Dyadic sizes 1, 2, 4, ... whose blocks can be nonzero on |n|_inf <= cutoff.
std::vector<int> dyadic_blocks(int cutoff);

/// P_N f.  Throws ValidationError unless N is a power of two.
SpectralField lp_block(const SpectralField& f, int N);

/// || N^alpha ||P_N f||_{L^p} ||_{l^q}.  p = 2 uses Parseval; other p use an
/// eval_grid x eval_grid grid (0 selects 2 (4 N_f + 2), a lower bound for
/// p = infinity).  p, q in [1, infinity].
double besov_norm(const SpectralField& f, double alpha, double p, double q, int eval_grid = 0);

/// C^alpha = B^alpha_{inf,inf}.
double holder_norm(const SpectralField& f, double alpha, int eval_grid = 0);
/// C^alpha(u) + C^{alpha-1}(v).
double holder_norm(const PhaseState& x, double alpha, int eval_grid = 0);

enum class ParaproductKind { lo_hi, resonant, hi_lo };

ParaproductKind parse_paraproduct_kind(const std::string& name);

/// Bony piece of f g: sum over block pairs (P_N f)(P_M g) with N < M/2
/// (lo_hi), M/2 <= N <= 2M (resonant) or M < N/2 (hi_lo).  Output cutoff
/// defaults to the full product band; the three pieces sum to the product.
SpectralField paraproduct(const SpectralField& f, const SpectralField& g, ParaproductKind kind,
                          int out_cutoff = -1);

/// <nabla>^s(u^3) - 3 u^2 <nabla>^s u, exact at cutoff 3N.
SpectralField commutator_residual(const SpectralField& u, double s);

}  // namespace sdnlw

#endif  // SDNLW_BESOV_HPP
