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

#include "sdnlw/functionals.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sdnlw/error.hpp"

namespace sdnlw {

namespace {

SpectralField low(const SpectralField& u, int N) { return u.resized(std::min(N, u.cutoff())).resized(N); }

double weighted_sq_sum(const SpectralField& f, const RadialMultiplier& weight) {
  const int cut = f.cutoff();
  double sum = 0.0;
  for (int n1 = -cut; n1 <= cut; ++n1) {
    for (int n2 = -cut; n2 <= cut; ++n2) {
      const double a2 = std::norm(f.at(n1, n2));
      if (a2 != 0.0) sum += weight(n1 * n1 + n2 * n2) * a2;
    }
  }
  return sum;
}

// Cubic building blocks of u = Pi_{<=N} u and X = <nabla>^s u on one
// alias-free grid: X u^2, X^2 u and u^3, each truncated to out_cutoff.
struct Cubics {
  SpectralField xuu;
  SpectralField xxu;
  SpectralField uuu;
};

Cubics cubic_terms(const SpectralField& u, const SpectralField& x, int out_cutoff) {
  const int N = u.cutoff();
  const int len = dealiasing_length(3 * N, out_cutoff);
  const std::vector<double> gu = synthesize(u, len);
  const std::vector<double> gx = synthesize(x, len);
  std::vector<double> a(gu.size()), b(gu.size()), c(gu.size());
  for (std::size_t i = 0; i < gu.size(); ++i) {
    const double uu = gu[i] * gu[i];
    a[i] = gx[i] * uu;
    b[i] = gx[i] * gx[i] * gu[i];
    c[i] = uu * gu[i];
  }
  return {analyze(a, len, out_cutoff), analyze(b, len, out_cutoff), analyze(c, len, out_cutoff)};
}

}  // namespace

double sigma(int N) {
  if (N < 0) throw ValidationError("sigma: N must be >= 0");
  // Sum over shells |n|_inf = k, smallest terms first within a shell.
  double total = 1.0;
  for (int k = 1; k <= N; ++k) {
    double shell = 0.0;
    // The shell has 8k points: 4 axis points, 4 corners, and 8 per interior j.
    for (int j = 1; j < k; ++j) shell += 8.0 / (1.0 + k * k + j * j);
    shell += 4.0 / (1.0 + 2.0 * k * k);
    shell += 4.0 / (1.0 + k * k);
    total += shell;
  }
  return total;
}

SpectralField q_renorm(const SpectralField& u, double s, int N) {
  const SpectralField x = apply_multiplier(low(u, N), RadialMultiplier::bracket_power(s));
  SpectralField q = product({x, x}, 2 * N);
  q.at(0, 0) -= sigma(N);
  return q;
}

double hamiltonian(const PhaseState& x, int N) {
  const SpectralField u = low(x.u, N);
  const SpectralField v = low(x.v, N);
  const double quad = 0.5 * weighted_sq_sum(u, RadialMultiplier::bracket_power(2.0)) +
                      0.5 * inner_product(v, v);
  return quad + 0.25 * mean_of_product({u, u, u, u});
}

double r_potential(const SpectralField& u_in, double s, int N) {
  const SpectralField u = low(u_in, N);
  const SpectralField q = q_renorm(u, s, N);
  const SpectralField u2 = product({u, u}, 2 * N);
  return 1.5 * inner_product(q, u2) + 0.25 * inner_product(u2, u2);
}

double gaussian_energy(const PhaseState& x, double s, int N) {
  return 0.5 * weighted_sq_sum(low(x.u, N), RadialMultiplier::bracket_power(2.0 * s + 2.0)) +
         0.5 * weighted_sq_sum(low(x.v, N), RadialMultiplier::bracket_power(2.0 * s));
}

double modified_energy(const PhaseState& x, double s, int N) {
  const SpectralField u = low(x.u, N);
  const SpectralField v = low(x.v, N);
  const RadialMultiplier m = RadialMultiplier::energy_weight(s);
  const SpectralField mu = apply_multiplier(u, m * RadialMultiplier::bracket_power(1.0));
  const SpectralField mv = apply_multiplier(v, m);
  const SpectralField q = q_renorm(u, s, N);
  const SpectralField u2 = product({u, u}, 2 * N);
  return 0.5 * inner_product(mu, mu) + 0.5 * inner_product(mv, mv) + 1.5 * inner_product(q, u2);
}

FunctionalReport energy(const PhaseState& x, double s, int N) {
  FunctionalReport rep;
  rep.s = s;
  rep.N = N;
  rep.sigma_N = sigma(N);
  rep.H = hamiltonian(x, N);
  rep.R = r_potential(x.u, s, N);
  rep.G = gaussian_energy(x, s, N);
  rep.E_mod = modified_energy(x, s, N);
  rep.E = rep.G + rep.R;
  const double via_mod = rep.E_mod + rep.H;
  const SpectralField u = low(x.u, N);
  const SpectralField q = q_renorm(u, s, N);
  const SpectralField u2 = product({u, u}, 2 * N);
  const double scale = rep.G + rep.H + 1.5 * std::abs(inner_product(q, u2));
  if (std::abs(rep.E - via_mod) > 1e-10 * std::max(scale, 1e-300)) {
    throw ConsistencyError("energy: G + R = " + std::to_string(rep.E) + " but E_mod + H = " +
                           std::to_string(via_mod));
  }
  rep.bracket = bracket_HE(x, s, N);
  return rep;
}

PhaseState grad_hamiltonian(const PhaseState& x, int N) {
  const SpectralField u = low(x.u, N);
  SpectralField gu = apply_multiplier(u, RadialMultiplier::bracket_power(2.0));
  gu += product({u, u, u}, N);
  return {std::move(gu), low(x.v, N)};
}

SpectralField grad_r(const SpectralField& u_in, double s, int N) {
  const SpectralField u = low(u_in, N);
  const SpectralField x = apply_multiplier(u, RadialMultiplier::bracket_power(s));
  const Cubics c = cubic_terms(u, x, N);
  SpectralField g = apply_multiplier(c.xuu, RadialMultiplier::bracket_power(s));
  g += c.xxu;
  g *= 3.0;
  g.add_scaled(u, -3.0 * sigma(N));
  g += c.uuu;
  return g;
}

PhaseState grad_energy(const PhaseState& x, double s, int N) {
  SpectralField gu = apply_multiplier(low(x.u, N), RadialMultiplier::bracket_power(2.0 * s + 2.0));
  gu += grad_r(x.u, s, N);
  return {std::move(gu), apply_multiplier(low(x.v, N), RadialMultiplier::bracket_power(2.0 * s))};
}

PhaseState grad_modified_energy(const PhaseState& x, double s, int N) {
  return grad_energy(x, s, N) - grad_hamiltonian(x, N);
}

double poisson_bracket(const PhaseState& grad_f, const PhaseState& grad_g) {
  return inner_product(grad_f.u, grad_g.v) - inner_product(grad_f.v, grad_g.u);
}

SpectralField w_field(const SpectralField& u_in, double s, int N) {
  const SpectralField u = low(u_in, N);
  const SpectralField x = apply_multiplier(u, RadialMultiplier::bracket_power(s));
  const int out = 3 * N;
  const Cubics c = cubic_terms(u, x, out);
  const RadialMultiplier inv = RadialMultiplier::bracket_power(-s);
  // Q u = X^2 u - sigma u.
  SpectralField qu = c.xxu;
  qu.add_scaled(u.resized(out), -sigma(N));
  SpectralField w = 3.0 * c.xuu;
  w -= apply_multiplier(c.uuu, RadialMultiplier::bracket_power(s));
  w += apply_multiplier(c.uuu, inv);
  w += 3.0 * apply_multiplier(qu, inv);
  return w;
}

BracketForms bracket_forms(const PhaseState& state, double s, int N) {
  const SpectralField u = low(state.u, N);
  const SpectralField v = low(state.v, N);
  const SpectralField x = apply_multiplier(u, RadialMultiplier::bracket_power(s));
  const Cubics c = cubic_terms(u, x, N);

  // Terms of the rate paired against v, each truncated to N.
  const SpectralField t1 = 3.0 * apply_multiplier(c.xuu, RadialMultiplier::bracket_power(s));
  const SpectralField t2 = apply_multiplier(c.uuu, RadialMultiplier::bracket_power(2.0 * s));
  SpectralField t3 = 3.0 * c.xxu;
  t3.add_scaled(u, -3.0 * sigma(N));
  const SpectralField& t4 = c.uuu;

  BracketForms f;
  f.direct = -(inner_product(v, t1) - inner_product(v, t2) + inner_product(v, t4) + inner_product(v, t3));
  const double vn = std::sqrt(inner_product(v, v));
  f.scale = vn * (std::sqrt(inner_product(t1, t1)) + std::sqrt(inner_product(t2, t2)) +
                  std::sqrt(inner_product(t3, t3)) + std::sqrt(inner_product(t4, t4)));

  const SpectralField sv = apply_multiplier(v, RadialMultiplier::bracket_power(s));
  f.w_form = -inner_product(sv, w_field(u, s, N));

  f.gradients = poisson_bracket(grad_hamiltonian(state, N), grad_modified_energy(state, s, N));
  // The gradient route also pairs the <nabla>^{2s+2} u terms, which cancel
  // exactly in exact arithmetic but contribute rounding of their own size.
  const SpectralField big = apply_multiplier(u, RadialMultiplier::bracket_power(2.0 * s + 2.0));
  f.scale += vn * std::sqrt(inner_product(big, big));
  return f;
}

double bracket_HE(const PhaseState& x, double s, int N) {
  const BracketForms f = bracket_forms(x, s, N);
  const double tol = 1e-10 * std::max(f.scale, 1e-300);
  if (std::abs(f.direct - f.w_form) > tol || std::abs(f.direct - f.gradients) > tol) {
    throw ConsistencyError("bracket_HE: forms disagree (direct " + std::to_string(f.direct) + ", W " +
                           std::to_string(f.w_form) + ", gradients " + std::to_string(f.gradients) + ")");
  }
  return f.direct;
}

}  // namespace sdnlw
