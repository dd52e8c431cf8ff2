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

#ifndef SDNLW_DYNAMICS_HPP
#define SDNLW_DYNAMICS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdnlw/rng.hpp"
#include "sdnlw/spectral.hpp"

namespace sdnlw {

/// Real 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 transpose() const { return {a, c, b, d}; }
  /// Largest singular value.
  double operator_norm() const;
};

/// S_n(t) for the damped operator d_t^2 + d_t + <nabla>^2:
/// e^{-t/2} [[cos wt + sin wt/(2w), sin wt/w], [-(w + 1/(4w)) sin wt, cos wt - sin wt/(2w)]],
/// w = [[n]].
Mat2 damped_propagator(double norm_sq, double t);
/// Undamped test mode: [[cos wt, sin wt/w], [-w sin wt, cos wt]], w = <n>.
Mat2 undamped_propagator(double norm_sq, double t);

/// Per-|n|^2 propagator matrices for one time t.
class PropagatorCache {
 public:
  PropagatorCache(int cutoff, double t, bool damped = true);

  int cutoff() const { return cutoff_; }
  double t() const { return t_; }
  const Mat2& matrix(int norm_sq) const { return mats_.at(static_cast<std::size_t>(norm_sq)); }
  /// Applies S(t) mode by mode; x may have any cutoff <= cutoff().
  void apply(PhaseState& x) const;

 private:
  int cutoff_;
  double t_;
  std::vector<Mat2> mats_;
};

/// Exact covariance Q_n(delta) = Sigma_n - S_n(delta) Sigma_n S_n(delta)^T of
/// one forcing increment, Sigma_n = diag(<n>^{-2s-2}, <n>^{-2s}), with its
/// lower Cholesky factor.
class NoiseKernel {
 public:
  /// Throws KernelFactorizationError when some Q_n is not PSD to round-off.
  NoiseKernel(double s, int cutoff, double delta);

  double s() const { return s_; }
  int cutoff() const { return cutoff_; }
  double delta() const { return delta_; }
  const Mat2& covariance(int norm_sq) const { return cov_.at(static_cast<std::size_t>(norm_sq)); }
  /// Lower triangular L with L L^T = covariance (b = 0).
  const Mat2& factor(int norm_sq) const { return chol_.at(static_cast<std::size_t>(norm_sq)); }

 private:
  double s_;
  int cutoff_;
  double delta_;
  std::vector<Mat2> cov_;
  std::vector<Mat2> chol_;
};

/// Lower Cholesky factor of a symmetric 2x2 PSD matrix; small negative
/// pivots from cancellation (relative to `scale`) are treated as zero.
/// Throws KernelFactorizationError(n1, n2) otherwise.
Mat2 cholesky_psd(const Mat2& q, double scale, int n1 = 0, int n2 = 0);

PhaseState propagate_linear(const PhaseState& x, double t);

/// Forcing increment with covariance Q_n(delta), drawn from block `step` of `rng`
/// at the kernel's cutoff.  Slots are shared with the Gaussian sampler's
/// layout, so increments at different cutoffs are nested.
PhaseState noise_increment(const NoiseKernel& kernel, const RngStream& rng, std::uint64_t step = 0);

enum class Splitting { lie, strang };

Splitting parse_splitting(const std::string& name);
std::string to_string(Splitting s);

struct FlowConfig {
  double s = 1.0;
  int N = 8;
  /// Cutoff of the stored state; modes N < |n|_inf <= storage_cutoff follow
  /// the linear flow.  -1 means N.
  int storage_cutoff = -1;
  double dt = 1e-2;
  double T = 0.0;
  Splitting splitting = Splitting::strang;
  bool cubic = true;
  bool noise = true;
  /// false selects the undamped, noise-free Hamiltonian test flow.
  bool damped = true;

  void validate() const;
  int store_cutoff() const { return storage_cutoff < 0 ? N : storage_cutoff; }
  /// Number of steps: T / dt rounded to the nearest integer.
  std::uint64_t steps() const;
  /// steps() * dt, the horizon actually simulated.
  double horizon() const;
};

using Observer = std::function<void(std::uint64_t step, double t, const PhaseState& x)>;

/// Truncated flow Phi^N with caches built once per configuration.
class TruncatedFlow {
 public:
  explicit TruncatedFlow(FlowConfig cfg);

  const FlowConfig& config() const { return cfg_; }

  /// Pi_{<=N}((Pi_{<=N} u)^3) at the storage cutoff (zero when the cubic
  /// term is off).
  SpectralField force(const SpectralField& u) const;

  /// One step with index k (noise block k of `noise`).
  PhaseState step(const PhaseState& x, const RngStream& noise, std::uint64_t k) const;

  /// Runs config().steps() steps.  The observer sees step 0, every
  /// `observe_every`-th step (0 disables) and the last step.  Throws
  /// BlowUpError at the first non-finite state.
  PhaseState evolve(const PhaseState& x0, const RngStream& noise, const Observer& observer = {},
                    std::uint64_t observe_every = 0) const;

 private:
  PhaseState step_with_force(const PhaseState& x, const RngStream& noise, std::uint64_t k,
                             const SpectralField& f0, SpectralField* f1) const;

  FlowConfig cfg_;
  PropagatorCache prop_;
  std::optional<NoiseKernel> kernel_;
};

PhaseState step_truncated(const PhaseState& x, const FlowConfig& cfg, const RngStream& rng,
                          std::uint64_t k = 0);

PhaseState evolve(const PhaseState& x0, const FlowConfig& cfg, const RngStream& rng,
                  const Observer& observer = {}, std::uint64_t observe_every = 0);

struct RemainderTrajectory {
  std::vector<double> times;
  /// w_N(t) = Pi_{<=N} Phi^N_t(x0) - Phi^lin_t(Pi_{<=N} x0, Pi_{<=N} xi), cutoff N.
  std::vector<PhaseState> w;
};

/// Co-evolves the nonlinear and linear flows on one noise stream.
RemainderTrajectory remainder_w(const PhaseState& x0, const FlowConfig& cfg, const RngStream& rng,
                                std::uint64_t observe_every = 1);

/// (||u||_{H^alpha}^2 + ||v||_{H^{alpha-1}}^2)^{1/2}.
double phase_sobolev_norm(const PhaseState& x, double alpha);

/// ||<nabla>^alpha u||_{L^p} + ||<nabla>^{alpha-1} v||_{L^p}, grid quadrature.
double phase_wap_norm(const PhaseState& x, double alpha, double p, int grid_len = 0);

/// max_{t in grid} e^{t/8} ||S(t) x||_{W^{alpha, 2/alpha}}; a lower bound for
/// the sup over all t >= 0.  The grid must start at 0 and increase.
double decaying_norm_X(const PhaseState& x, double alpha, std::span<const double> t_grid);

/// max_n || D_n S_n(t) D_n^{-1} || e^{t/2} with D_n = diag(<n>, 1): the
/// constant C in ||S(t) x||_{H^alpha} <= C e^{-t/2} ||x||_{H^alpha}.
double propagator_decay_constant(int cutoff, double t);

}  // namespace sdnlw

#endif  // SDNLW_DYNAMICS_HPP
