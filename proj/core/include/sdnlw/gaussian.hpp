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

#ifndef SDNLW_GAUSSIAN_HPP
#define SDNLW_GAUSSIAN_HPP

#include <utility>

#include "sdnlw/rng.hpp"
#include "sdnlw/spectral.hpp"

namespace sdnlw {

/// The truncated Gaussian measure mu_{s,N}: independent modes with
/// u(n) of variance <n>^{-2s-2} and v(n) of variance <n>^{-2s}.
struct MeasureSpec {
  double s = 1.0;
  int N = 0;

  /// Throws ValidationError unless s > 0 and N >= 0.
  void validate() const;
  double u_std(int norm_sq) const;
  double v_std(int norm_sq) const;
};

/// Field with independent modes of standard deviation std_of(|n|^2),
/// Hermitian-mirrored from the half lattice, zero mode real.  The draws for
/// mode n come from slot mode_slot(n, component), step 0.
template <typename StdFn>
SpectralField sample_gaussian_field(int cutoff, const RngStream& rng, int component, StdFn std_of);

PhaseState sample_mu(const MeasureSpec& spec, const RngStream& rng);

/// (Pi_{<=M} x, Pi_{>M} x); requires -1 <= M <= N.
std::pair<PhaseState, PhaseState> split_low_high(const PhaseState& x, int M);

/// Position sample with variance <n>^{-2 s_plus_one}.  For s_plus_one = s + 1
/// this is bitwise the u component of sample_mu on the same stream.
SpectralField sample_mu_position(double s_plus_one, int N, const RngStream& rng);

// ---------------------------------------------------------------------------

template <typename StdFn>
SpectralField sample_gaussian_field(int cutoff, const RngStream& rng, int component, StdFn std_of) {
  SpectralField f(cutoff);
  for (int n1 = -cutoff; n1 <= cutoff; ++n1) {
    for (int n2 = 0; n2 <= cutoff; ++n2) {
      const ModeIndex n{n1, n2};
      if (!n.in_half_lattice()) continue;
      const double sd = std_of(n.norm_sq());
      const NormalPair z = rng.normals(mode_slot(n1, n2, component));
      if (n1 == 0 && n2 == 0) {
        f.at(0, 0) = sd * z.a;
      } else {
        constexpr double kInvSqrt2 = 0.70710678118654752440;
        f.set_pair(n1, n2, Complex(sd * kInvSqrt2 * z.a, sd * kInvSqrt2 * z.b));
      }
    }
  }
  return f;
}

}  // namespace sdnlw

#endif  // SDNLW_GAUSSIAN_HPP
