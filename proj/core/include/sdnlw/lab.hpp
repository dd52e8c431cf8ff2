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

#ifndef SDNLW_LAB_HPP
#define SDNLW_LAB_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "sdnlw/spectral.hpp"
#include "sdnlw/stats.hpp"

namespace sdnlw {

/// Parameters shared by the Monte Carlo experiments.
struct LabConfig {
  double s = 1.0;
  int N = 8;
  double dt = 0.05;
  double T = 1.0;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 1;
  int threads = 1;

  void validate() const;
  /// s, N, dt, T, seed as report metadata.
  std::map<std::string, double> metadata() const;
};

// ---------------------------------------------------------------------------
// Observables

/// Bounded cylinder function of the lowest modes (|n|_inf <= 1), with
/// coordinates measured in units of their mu_s standard deviation and
/// clipped smoothly at 5 of them.
struct Observable {
  std::string name;
  std::function<double(const PhaseState&)> eval;
};

/// One of: one, u0, uv0, ind_v0, uv10, uv_low.
Observable make_observable(const std::string& name, double s);
std::vector<std::string> observable_names();

/// 5 tanh(x / 5).
double soft_clip(double x);

/// The 9 real coordinates of the modes |n|_inf <= 1 (zero mode, then
/// real and imaginary parts over the half lattice), standardized under mu_s.
std::vector<double> low_coordinates(const SpectralField& f, double std_scale_exponent);

// ---------------------------------------------------------------------------
// Linear invariance

struct ModeStatistic {
  ModeIndex n;
  /// var_u, var_v, cross_re, cross_im, drift_u, drift_v.
  std::string statistic;
  double estimate = 0.0;
  double target = 0.0;
  double stderr_ = 0.0;
  double z = 0.0;
};

struct InvarianceResult {
  std::vector<ModeStatistic> stats;
  double horizon = 0.0;
  std::uint64_t count = 0;
  /// Fraction of |z| <= 3 among the variance statistics.
  double variance_within = 0.0;
  /// Fraction of |z| <= 3 among the cross-covariance statistics.
  double cross_within = 0.0;
  double cross_max_abs_z = 0.0;
  /// Fraction of |z| <= 3 among the paired t = 0 vs t = T second moments.
  double drift_within = 0.0;
  double max_abs_z = 0.0;
  /// Bonferroni critical |z| at level 1e-3 over all statistics.
  double bonferroni_z = 0.0;
};

/// Draws x0 ~ mu_{s,N}, runs the linear stochastic flow to T and compares
/// per-mode second moments with diag(<n>^{-2s-2}, <n>^{-2s}).
InvarianceResult linear_invariance_test(const LabConfig& cfg);

// ---------------------------------------------------------------------------
// Partition function

/// Z_{s,N} = E_mu[e^{-R_{s,N}}].  extras: log_Z, log_Z_se, mean_R,
/// jensen_bound = e^{-mean R}, jensen_ok.  zero_potential forces R = 0.
EstimatorReport partition_estimate(const LabConfig& cfg, bool zero_potential = false);

// ---------------------------------------------------------------------------
// Boue-Dupuis drift optimization

enum class BdFunctional { r_potential, quadratic };

struct BdConfig {
  LabConfig lab;
  int ascent_steps = 200;
  double step_size = 0.5;
  /// Objective values above this abort with OptimizerDivergedError.
  double ceiling = 1e8;
  BdFunctional functional = BdFunctional::r_potential;
};

struct BdResult {
  /// Average optimized inner value: the right side estimate.
  EstimatorReport rhs;
  /// partition_estimate on the same Gaussian samples (empty for quadratic).
  EstimatorReport lhs;
  /// Quadratic functional only: max |optimized - closed form| over samples.
  double closed_form_max_error = 0.0;
  /// rhs.mean >= log_Z - 2 sqrt(se_rhs^2 + se_logZ^2).
  bool inequality_holds = false;
};

/// Inner objective -F(Y + theta) - 1/2 ||theta||_{H^{1+s}}^2 for one sample.
double bd_objective(const SpectralField& y, const SpectralField& theta, double s, int N, BdFunctional f);

/// Preconditioned gradient ascent with Armijo backtracking from theta = 0;
/// returns the final objective value and writes the maximizer.
double bd_maximize(const SpectralField& y, const BdConfig& cfg, SpectralField* theta_out = nullptr);

/// Closed-form sup for the quadratic functional: -1/2 sum |y|^2 w/(1+w),
/// w = <n>^{2+2s}.
double bd_quadratic_closed_form(const SpectralField& y, double s);

BdResult bd_bound(const BdConfig& cfg);

// ---------------------------------------------------------------------------
// Short-time density derivative

struct DensityConfig {
  LabConfig lab;  // lab.T is the horizon t; the half horizon is t/2
  std::vector<std::string> observables{"one", "uv0", "uv10"};
  /// false disables the cubic term; the prediction is then <v, d_u R>.
  bool nonlinear = true;
  /// Minimum ESS as a fraction of the sample count.
  double ess_floor = 0.01;
};

struct DensityObservableResult {
  std::string observable;
  double D_t = 0.0;
  double D_half = 0.0;
  /// Richardson value 2 D(t/2) - D(t).
  double D = 0.0;
  double D_se = 0.0;
  double B = 0.0;
  double B_se = 0.0;
  double diff = 0.0;
  double diff_se = 0.0;
  double richardson_gap = 0.0;
  /// diff_se + |D(t) - D(t/2)|.
  double combined = 0.0;
  bool within = false;
};

struct DensityResult {
  std::vector<DensityObservableResult> observables;
  double ess = 0.0;
  std::uint64_t count = 0;
  double horizon = 0.0;
};

/// (E_nu[F(Phi_t)] - E_nu[F]) / t against -E_nu[F {H, E_mod}], nu sampled
/// by e^{-R} weights on mu_{s,N}.  Throws DegenerateWeightsError when the
/// ESS falls below the floor.
DensityResult density_derivative_check(const DensityConfig& cfg);

// ---------------------------------------------------------------------------
// K_R diagnostics

struct KRadiusCheck {
  double R = 0.0;
  double alpha = 0.0;
  std::vector<int> M;
  std::vector<double> per_M;
  double value = 0.0;
  bool member = false;
};

/// sup over M in M_grid of ||Pi_{<=M} x0||_{C^alpha x C^{alpha-1}} +
/// ||Q_{s,M}(u0)||_{H^{alpha-s}}.  Requires alpha < s.
KRadiusCheck kr_membership(const PhaseState& x0, double s, double alpha, double R, const std::vector<int>& M_grid);

/// kr_membership values over a mu_{s,N} ensemble; extras hold quantiles
/// q10, q50, q90, q99, max and the fraction of samples with value <= R.
EstimatorReport kr_scan(const LabConfig& cfg, double alpha, const std::vector<int>& M_grid,
                        double R = std::numeric_limits<double>::infinity());

// ---------------------------------------------------------------------------
// Quasi-invariance scan

struct QIConfig {
  LabConfig lab;
  bool nonlinear = true;
  double significance = 1e-3;
};

struct QIStatistic {
  /// "mu" (unweighted) or "nu" (e^{-R} weighted).
  std::string ensemble;
  /// Low coordinate label, e.g. u[1,0].re.
  std::string coordinate;
  double ks = 0.0;
  double ks_critical = 0.0;
  double mean_z = 0.0;
  double variance_ratio = 0.0;
};

struct QIResult {
  std::vector<QIStatistic> stats;
  double ess = 0.0;
  std::uint64_t count = 0;
  double horizon = 0.0;
  bool all_finite = false;
  double max_ks = 0.0;
  double max_ks_over_critical = 0.0;
  double max_variance_ratio_dev = 1.0;  // max of max(r, 1/r)
};

QIResult quasi_invariance_scan(const QIConfig& cfg);

// ---------------------------------------------------------------------------
// Sweeps

/// sup over observation times of ||Pi_{<=N} Psi_t||_{C^alpha x C^{alpha-1}}
/// for the stochastic convolution from zero data.  extras: median, m1, m2,
/// m4 (p-th moments), max.
EstimatorReport stochastic_convolution_sup(const LabConfig& cfg, double alpha, std::uint64_t observe_every);

/// For u ~ mu_{s+1}: MC mean of ||Q_{s,2M}(u) - Q_{s,M}(u)||_{H^{-sigma}}
/// for every M, plus the fitted log-log slope in extras["slope"] of the
/// last report.
std::vector<EstimatorReport> q_convergence(const LabConfig& cfg, double sigma_exp, const std::vector<int>& M_list);

/// ||<nabla>^s(u^3) - 3u^2 <nabla>^s u||_{L^2} / ||u||_{C^{s-eps}}^3 for
/// u ~ mu_{s+1, N}; one report per N with extras max and median.
std::vector<EstimatorReport> commutator_sweep(const LabConfig& cfg, double eps, const std::vector<int>& N_list,
                                              int eval_grid = 0);

struct BracketTrial {
  double fd_rate = 0.0;
  double bracket = 0.0;
  double rel_error = 0.0;
};

/// Central difference of E_{s,N} along the undamped noise-free flow
/// (time-symmetric Strang steps of size dt) against -bracket_HE.
std::vector<BracketTrial> bracket_flow_check(double s, int N, double dt, int trials, std::uint64_t seed);

}  // namespace sdnlw

#endif  // SDNLW_LAB_HPP
