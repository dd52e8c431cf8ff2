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

#ifndef SDNLW_FUNCTIONALS_HPP
#define SDNLW_FUNCTIONALS_HPP

#include "sdnlw/spectral.hpp"

namespace sdnlw {

/// sigma_N = sum_{|n|_inf <= N} <n>^{-2}.
double sigma(int N);

/// Q_{s,N}(u) = (<nabla>^s Pi_{<=N} u)^2 - sigma_N, cutoff 2N.
SpectralField q_renorm(const SpectralField& u, double s, int N);

/// H_N = 1/2 int u^2 + |grad u|^2 + v^2 + 1/4 int u^4 on Pi_{<=N} x.
double hamiltonian(const PhaseState& x, int N);

/// R_{s,N}(u) = 3/2 int Q_{s,N}(u) (Pi u)^2 + 1/4 int (Pi u)^4.
double r_potential(const SpectralField& u, double s, int N);

/// G_s(Pi u, Pi v) = 1/2 ||Pi u||_{H^{1+s}}^2 + 1/2 ||Pi v||_{H^s}^2.
double gaussian_energy(const PhaseState& x, double s, int N);

/// 1/2 int (<nabla> m(nabla) Pi u)^2 + (m(nabla) Pi v)^2 + 3/2 int Q (Pi u)^2.
double modified_energy(const PhaseState& x, double s, int N);

struct FunctionalReport {
  double s = 0.0;
  int N = 0;
  double sigma_N = 0.0;
  double H = 0.0;
  double R = 0.0;
  double G = 0.0;
  /// Modified energy (calligraphic E).
  double E_mod = 0.0;
  /// E = G + R.
  double E = 0.0;
  /// {H, E_mod}.
  double bracket = 0.0;
};

/// Evaluates every functional at x.  E is formed as G + R and compared with
/// E_mod + H; a relative mismatch above 1e-10 throws ConsistencyError.
FunctionalReport energy(const PhaseState& x, double s, int N);

/// (d_u H, d_v H) = (<nabla>^2 u + Pi(u^3), v) on Pi_{<=N} x; cutoff N.
PhaseState grad_hamiltonian(const PhaseState& x, int N);
/// Gradient of E_mod; cutoff N.
PhaseState grad_modified_energy(const PhaseState& x, double s, int N);
/// Gradient of E = E_mod + H; cutoff N.
PhaseState grad_energy(const PhaseState& x, double s, int N);
/// d_u R_{s,N}, cutoff N.
SpectralField grad_r(const SpectralField& u, double s, int N);

/// {F, G} = <d_u F, d_v G> - <d_v F, d_u G> from the two gradients.  With
/// this orientation dG/dt = -{H, G} along u' = d_v H, v' = -d_u H.
double poisson_bracket(const PhaseState& grad_f, const PhaseState& grad_g);

/// The three evaluations of {H, E_mod} compared by bracket_HE.
struct BracketForms {
  /// -<v, 3<nabla>^s[X u^2] - <nabla>^{2s}(u^3) + u^3 + 3 Q u>, X = <nabla>^s u.
  double direct = 0.0;
  /// -<<nabla>^s v, W(u)>.
  double w_form = 0.0;
  /// poisson_bracket(grad_hamiltonian, grad_modified_energy).
  double gradients = 0.0;
  /// Cauchy-Schwarz size of the pairing, the scale for the comparisons.
  double scale = 0.0;
};

BracketForms bracket_forms(const PhaseState& x, double s, int N);

/// {H, E_mod}(Pi x), so that d/dt E_{s,N} = -bracket_HE along the undamped
/// noise-free truncated flow.  Throws ConsistencyError when the three
/// forms differ by more than 1e-10 relative to their scale.
double bracket_HE(const PhaseState& x, double s, int N);

/// W(u) = 3[X u^2] - <nabla>^s(u^3) + <nabla>^{-s}(u^3) + 3<nabla>^{-s}(Q u)
/// on u = Pi_{<=N} u, cutoff 3N.  The <nabla>^{-s}(u^3) term carries the
/// pairing of d_v E_mod = (<nabla>^{2s} - 1) v with the cubic force.
SpectralField w_field(const SpectralField& u, double s, int N);

}  // namespace sdnlw

#endif  // SDNLW_FUNCTIONALS_HPP
