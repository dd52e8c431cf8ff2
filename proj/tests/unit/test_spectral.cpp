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

#include <cmath>
#include <limits>
#include <numbers>

#include "../oracles/oracles.hpp"
#include "sdnlw/error.hpp"
#include "sdnlw/gaussian.hpp"
#include "sdnlw/spectral.hpp"

namespace sdnlw {
namespace {

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  EXPECT_EQ(a.cutoff(), b.cutoff());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.coefficients()[i] - b.coefficients()[i]));
  }
  return worst;
}

double max_abs(const SpectralField& a) {
  double worst = 0.0;
  for (const auto& c : a.coefficients()) worst = std::max(worst, std::abs(c));
  return worst;
}

TEST(ModeIndex, Weights) {
  EXPECT_DOUBLE_EQ(bracket_sq(ModeIndex{1, 0}.norm_sq()), 2.0);
  EXPECT_DOUBLE_EQ(shifted_bracket_sq(0), 0.75);
  EXPECT_EQ((ModeIndex{-3, 2}.sup_norm()), 3);
  EXPECT_TRUE((ModeIndex{0, 0}.in_half_lattice()));
  EXPECT_TRUE((ModeIndex{2, 0}.in_half_lattice()));
  EXPECT_FALSE((ModeIndex{-2, 0}.in_half_lattice()));
  EXPECT_TRUE((ModeIndex{-2, 1}.in_half_lattice()));
}

TEST(SpectralField, LayoutAndSymmetry) {
  SpectralField f(2);
  EXPECT_EQ(f.size(), 25u);
  f.set_pair(1, -2, Complex(0.5, 0.25));
  EXPECT_EQ(f.at(-1, 2), Complex(0.5, -0.25));
  EXPECT_TRUE(f.is_hermitian());
  EXPECT_EQ(f.mode_at(f.index(1, -2)), (ModeIndex{1, -2}));
  f.at(2, 2) = Complex(1.0, 0.0);
  EXPECT_FALSE(f.is_hermitian());
  f.symmetrize();
  EXPECT_TRUE(f.is_hermitian());
  EXPECT_THROW(SpectralField(-1), ShapeError);
}

TEST(SpectralField, ResizePadsAndTruncates) {
  const SpectralField f = oracle::random_field(3, 1);
  const SpectralField g = f.resized(5).resized(3);
  EXPECT_EQ(max_abs_diff(f, g), 0.0);
  const SpectralField h = f.resized(1);
  EXPECT_EQ(h.at(1, -1), f.at(1, -1));
}

TEST(ApplyMultiplier, Examples) {
  const SpectralField c = SpectralField::cosine(3, {1, 0});
  const SpectralField b = apply_multiplier(c, RadialMultiplier::bracket_power(2.0));
  EXPECT_DOUBLE_EQ(b.at(1, 0).real(), 1.0);
  EXPECT_DOUBLE_EQ(b.at(-1, 0).real(), 1.0);

  const SpectralField f = oracle::random_field(4, 2);
  EXPECT_EQ(max_abs_diff(apply_multiplier(f, RadialMultiplier::identity()), f), 0.0);

  const SpectralField one = SpectralField::constant(4, 1.0);
  EXPECT_TRUE(apply_multiplier(one, RadialMultiplier::energy_weight(0.7)).is_zero());
  EXPECT_TRUE(apply_multiplier(f, RadialMultiplier::bracket_power(1.3)).is_hermitian());
}

TEST(ApplyMultiplier, NonFiniteSymbolThrows) {
  const RadialMultiplier bad("bad", [](double n2) { return n2 == 2.0 ? std::nan("") : 1.0; });
  const SpectralField f = SpectralField::cosine(2, {1, 1});
  EXPECT_THROW(apply_multiplier(f, bad), InvalidMultiplierError);
  // An unoccupied mode may carry any symbol value.
  EXPECT_NO_THROW(apply_multiplier(SpectralField::cosine(2, {1, 0}), bad));
}

TEST(ProjectSquare, Examples) {
  EXPECT_TRUE(project_square(SpectralField::cosine(4, {3, 0}), 2).is_zero());
  const SpectralField f = oracle::random_field(4, 3);
  EXPECT_TRUE(project_square(f, -1).is_zero());
  const SpectralField g = SpectralField::cosine(4, {1, 1}) + SpectralField::cosine(4, {3, 0});
  const SpectralField p = project_square(g, 2);
  EXPECT_EQ(max_abs_diff(p, SpectralField::cosine(4, {1, 1})), 0.0);
}

TEST(ProjectSquare, IdempotentAndCommutes) {
  const SpectralField f = oracle::random_field(6, 4);
  const SpectralField p = project_square(f, 3);
  EXPECT_EQ(max_abs_diff(project_square(p, 3), p), 0.0);
  EXPECT_EQ(max_abs_diff(project_square(project_square(f, 2), 4), project_square(f, 2)), 0.0);
  const RadialMultiplier m = RadialMultiplier::bracket_power(-0.8);
  EXPECT_EQ(max_abs_diff(project_square(apply_multiplier(f, m), 3), apply_multiplier(p, m)), 0.0);
  EXPECT_EQ(max_abs_diff(project_square(f, 3) + project_above(f, 3), f), 0.0);
}

TEST(Transforms, SynthesizeMatchesPointEvaluation) {
  const SpectralField f = oracle::random_field(3, 5);
  const int L = 9;
  const std::vector<double> g = synthesize(f, L);
  for (int j1 = 0; j1 < L; ++j1) {
    for (int j2 = 0; j2 < L; ++j2) {
      const double x1 = 2.0 * std::numbers::pi * j1 / L, x2 = 2.0 * std::numbers::pi * j2 / L;
      EXPECT_NEAR(g[static_cast<std::size_t>(j1) * L + j2], oracle::evaluate(f, x1, x2), 1e-12);
    }
  }
  const SpectralField back = analyze(g, L, 3);
  EXPECT_LT(max_abs_diff(back, f), 1e-14);
  EXPECT_TRUE(back.is_hermitian());
  EXPECT_THROW(synthesize(f, 6), ShapeError);
}

TEST(Transforms, FftLengths) {
  EXPECT_EQ(fft_length_at_least(11), 12);
  EXPECT_EQ(fft_length_at_least(17), 18);
  EXPECT_EQ(fft_length_at_least(13), 14);
  EXPECT_EQ(fft_length_at_least(1025), 1029);
  EXPECT_GE(dealiasing_length(3 * 4, 4), 17);
}

TEST(DealiasedProduct, CosineCube) {
  for (int N : {1, 3, 6}) {
    const SpectralField c = SpectralField::cosine(N, {N, 0});
    const SpectralField cube = dealiased_product(c, c, c, N);
    EXPECT_LT(max_abs_diff(cube, SpectralField::cosine(N, {N, 0}, 0.75)), 1e-15) << "N = " << N;
  }
}

TEST(DealiasedProduct, Constant) {
  const SpectralField c = SpectralField::constant(3, 1.7);
  const SpectralField p = dealiased_product(c, c, c, 9);
  EXPECT_NEAR(p.at(0, 0).real(), 1.7 * 1.7 * 1.7, 1e-14);
  EXPECT_NEAR(max_abs(p - SpectralField::constant(9, 1.7 * 1.7 * 1.7)), 0.0, 1e-14);
}

TEST(DealiasedProduct, MatchesDirectConvolution) {
  for (int N = 1; N <= 6; ++N) {
    const SpectralField u = sample_mu_position(2.0, N, RngStream(11, N));
    const SpectralField w = oracle::random_field(N, 100 + N);
    for (int out : {N, 3 * N}) {
      const SpectralField fast = dealiased_product(u, w, u, out);
      const SpectralField slow = oracle::direct_triple_convolution(u, w, u, out);
      EXPECT_LE(max_abs_diff(fast, slow), 1e-10 * max_abs(slow)) << "N = " << N << " out = " << out;
      EXPECT_TRUE(fast.is_hermitian());
    }
  }
}

TEST(DealiasedProduct, ShapeErrors) {
  const SpectralField a(2), b(3);
  EXPECT_THROW(dealiased_product(a, b, a, 2), ShapeError);
  EXPECT_THROW(dealiased_product(a, a, a, 7), ShapeError);
}

TEST(InnerProduct, Examples) {
  const SpectralField c = SpectralField::cosine(2, {1, 0});
  EXPECT_DOUBLE_EQ(inner_product(c, c), 0.5);
  EXPECT_EQ(inner_product(c, SpectralField::cosine(2, {0, 2})), 0.0);
}

TEST(InnerProduct, MatchesQuadrature) {
  for (unsigned seed = 0; seed < 4; ++seed) {
    const int N = 3;
    const SpectralField f = oracle::random_field(N, 20 + seed, 1.0, 0.1);
    const SpectralField g = oracle::random_field(N, 40 + seed, 1.0, 0.1);
    const double exact = inner_product(f, g);
    const double quad = oracle::quadrature_mean({&f, &g}, 4 * N + 2);
    EXPECT_NEAR(exact, quad, 1e-12 * std::abs(exact) + 1e-16);
    EXPECT_NEAR(mean_of_product({f, g}), exact, 1e-15);
  }
}

TEST(SobolevNorm, Examples) {
  EXPECT_DOUBLE_EQ(sobolev_norm(SpectralField::constant(3, 1.0), 2.5), 1.0);
  EXPECT_NEAR(sobolev_norm(SpectralField::cosine(3, {1, 0}), 1.0), 1.0, 1e-15);
  const SpectralField f = oracle::random_field(5, 7);
  EXPECT_NEAR(sobolev_norm(f, 0.7), sobolev_norm(apply_multiplier(f, RadialMultiplier::bracket_power(0.7)), 0.0),
              1e-13);
  EXPECT_NEAR(inner_product(f, f), std::pow(sobolev_norm(f, 0.0), 2), 1e-12 * inner_product(f, f));
}

TEST(LpNorm, Examples) {
  EXPECT_NEAR(lp_norm(SpectralField::constant(2, -1.5), 3.0), 1.5, 1e-14);
  EXPECT_NEAR(lp_norm(SpectralField::constant(2, -1.5), std::numeric_limits<double>::infinity()), 1.5, 1e-14);
  const SpectralField c = SpectralField::cosine(1, {1, 0});
  EXPECT_NEAR(lp_norm(c, std::numeric_limits<double>::infinity()), 1.0, 1e-15);
  EXPECT_NEAR(lp_norm(c, 4.0, 8), std::pow(3.0 / 8.0, 0.25), 1e-14);
  // Default grid 2N + 2 = 4 samples cos at 1, 0, -1, 0.
  EXPECT_NEAR(lp_norm(c, 4.0), std::pow(0.5, 0.25), 1e-14);
  EXPECT_NEAR(lp_norm(c, 2.0), std::sqrt(0.5), 1e-15);
  EXPECT_THROW(lp_norm(c, 0.5), ValidationError);
  EXPECT_THROW(lp_norm(c, 2.0, 3), ValidationError);
}

}  // namespace
}  // namespace sdnlw
