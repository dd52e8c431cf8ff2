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

#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace sdnlw::oracle {

SpectralField direct_triple_convolution(const SpectralField& f, const SpectralField& g,
                                        const SpectralField& h, int out_cutoff) {
  SpectralField out(out_cutoff);
  const int nf = f.cutoff(), ng = g.cutoff(), nh = h.cutoff();
  for (int a1 = -nf; a1 <= nf; ++a1) {
    for (int a2 = -nf; a2 <= nf; ++a2) {
      const Complex ca = f.at(a1, a2);
      for (int b1 = -ng; b1 <= ng; ++b1) {
        for (int b2 = -ng; b2 <= ng; ++b2) {
          const Complex cab = ca * g.at(b1, b2);
          for (int c1 = -nh; c1 <= nh; ++c1) {
            const int k1 = a1 + b1 + c1;
            if (std::abs(k1) > out_cutoff) continue;
            for (int c2 = -nh; c2 <= nh; ++c2) {
              const int k2 = a2 + b2 + c2;
              if (std::abs(k2) > out_cutoff) continue;
              out.at(k1, k2) += cab * h.at(c1, c2);
            }
          }
        }
      }
    }
  }
  return out;
}

double evaluate(const SpectralField& f, double x1, double x2) {
  const int cut = f.cutoff();
  Complex sum{};
  for (int n1 = -cut; n1 <= cut; ++n1) {
    for (int n2 = -cut; n2 <= cut; ++n2) {
      sum += f.at(n1, n2) * std::polar(1.0, n1 * x1 + n2 * x2);
    }
  }
  return sum.real();
}

double quadrature_mean(const std::vector<const SpectralField*>& factors, int L) {
  double total = 0.0;
  const double step = 2.0 * std::numbers::pi / L;
  for (int j1 = 0; j1 < L; ++j1) {
    for (int j2 = 0; j2 < L; ++j2) {
      double p = 1.0;
      for (const SpectralField* f : factors) p *= evaluate(*f, j1 * step, j2 * step);
      total += p;
    }
  }
  return total / (static_cast<double>(L) * L);
}

namespace {

PhaseState rhs(const PhaseState& x, int N) {
  const SpectralField low = x.u.resized(N);
  const SpectralField cube = direct_triple_convolution(low, low, low, N).resized(x.cutoff());
  PhaseState d(x.cutoff());
  const int cut = x.cutoff();
  for (int n1 = -cut; n1 <= cut; ++n1) {
    for (int n2 = -cut; n2 <= cut; ++n2) {
      d.u.at(n1, n2) = x.v.at(n1, n2);
      d.v.at(n1, n2) = -(1.0 + n1 * n1 + n2 * n2) * x.u.at(n1, n2) - cube.at(n1, n2);
    }
  }
  return d;
}

std::array<double, 2> duffing_rhs(const std::array<double, 2>& y, bool cubic) {
  const double u = y[0], v = y[1];
  return {v, -v - u - (cubic ? u * u * u : 0.0)};
}

std::array<double, 2> duffing_rk4(std::array<double, 2> y, double t, int steps, bool cubic) {
  const double h = t / steps;
  for (int k = 0; k < steps; ++k) {
    const auto k1 = duffing_rhs(y, cubic);
    const auto k2 = duffing_rhs({y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]}, cubic);
    const auto k3 = duffing_rhs({y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]}, cubic);
    const auto k4 = duffing_rhs({y[0] + h * k3[0], y[1] + h * k3[1]}, cubic);
    y[0] += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    y[1] += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
  }
  return y;
}

}  // namespace

PhaseState rk4_undamped(const PhaseState& x0, int N, double dt, int steps) {
  PhaseState x = x0;
  for (int k = 0; k < steps; ++k) {
    const PhaseState k1 = rhs(x, N);
    const PhaseState k2 = rhs(x + (0.5 * dt) * k1, N);
    const PhaseState k3 = rhs(x + (0.5 * dt) * k2, N);
    const PhaseState k4 = rhs(x + dt * k3, N);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

std::array<double, 2> duffing(double u0, double v0, double t, bool cubic) {
  int steps = 64;
  auto coarse = duffing_rk4({u0, v0}, t, steps, cubic);
  for (;;) {
    steps *= 2;
    const auto fine = duffing_rk4({u0, v0}, t, steps, cubic);
    const double diff = std::hypot(fine[0] - coarse[0], fine[1] - coarse[1]);
    coarse = fine;
    if (diff < 1e-15 || steps > (1 << 20)) return fine;
  }
}

SpectralField random_field(int cutoff, unsigned seed, double decay, double scale) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  SpectralField f(cutoff);
  for (int n1 = -cutoff; n1 <= cutoff; ++n1) {
    for (int n2 = 0; n2 <= cutoff; ++n2) {
      const ModeIndex n{n1, n2};
      if (!n.in_half_lattice()) continue;
      const double amp = scale * std::pow(1.0 + n.norm_sq(), -0.5 * decay);
      if (n1 == 0 && n2 == 0) {
        f.at(0, 0) = amp * z(gen);
      } else {
        const double re = z(gen);
        const double im = z(gen);
        f.set_pair(n1, n2, amp * Complex(re, im));
      }
    }
  }
  return f;
}

}  // namespace sdnlw::oracle
