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

#include "sdnlw/gaussian.hpp"

#include <cmath>
#include <string>

#include "sdnlw/error.hpp"

namespace sdnlw {

void MeasureSpec::validate() const {
  if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("MeasureSpec: s must be positive, got " + std::to_string(s));
  if (N < 0) throw ValidationError("MeasureSpec: N must be nonnegative");
}

double MeasureSpec::u_std(int norm_sq) const { return std::pow(bracket_sq(norm_sq), -0.5 * (s + 1.0)); }

double MeasureSpec::v_std(int norm_sq) const { return std::pow(bracket_sq(norm_sq), -0.5 * s); }

PhaseState sample_mu(const MeasureSpec& spec, const RngStream& rng) {
  spec.validate();
  return {sample_gaussian_field(spec.N, rng, 0, [&](int r2) { return spec.u_std(r2); }),
          sample_gaussian_field(spec.N, rng, 1, [&](int r2) { return spec.v_std(r2); })};
}

std::pair<PhaseState, PhaseState> split_low_high(const PhaseState& x, int M) {
  if (M < -1 || M > x.cutoff()) {
    throw ValidationError("split_low_high: M must lie in [-1, N]");
  }
  PhaseState low = project_square(x, M);
  PhaseState high = x - low;
  return {std::move(low), std::move(high)};
}

SpectralField sample_mu_position(double s_plus_one, int N, const RngStream& rng) {
  if (N < 0) throw ValidationError("sample_mu_position: N must be nonnegative");
  return sample_gaussian_field(N, rng, 0,
                               [&](int r2) { return std::pow(bracket_sq(r2), -0.5 * s_plus_one); });
}

}  // namespace sdnlw
