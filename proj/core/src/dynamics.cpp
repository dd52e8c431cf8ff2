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

#include "sdnlw/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdnlw/error.hpp"

namespace sdnlw {

namespace {

std::size_t max_norm_sq(int cutoff) { return 2 * static_cast<std::size_t>(cutoff) * cutoff; }

void apply_mode_matrices(PhaseState& x, const std::vector<Mat2>& mats) {
  const int cut = x.cutoff();
  for (int n1 = -cut; n1 <= cut; ++n1) {
    for (int n2 = -cut; n2 <= cut; ++n2) {
      const Mat2& m = mats[static_cast<std::size_t>(n1 * n1 + n2 * n2)];
      Complex& u = x.u.at(n1, n2);
      Complex& v = x.v.at(n1, n2);
      const Complex u_new = m.a * u + m.b * v;
      const Complex v_new = m.c * u + m.d * v;
      u = u_new;
      v = v_new;
    }
  }
}

}  // namespace

double Mat2::operator_norm() const {
  // sigma_max^2 is the top eigenvalue of M^T M.
  const double p = a * a + c * c;
  const double q = a * b + c * d;
  const double r = b * b + d * d;
  const double mean = 0.5 * (p + r);
  const double disc = std::sqrt(0.25 * (p - r) * (p - r) + q * q);
  return std::sqrt(mean + disc);
}

Mat2 damped_propagator(double norm_sq, double t) {
  const double w = std::sqrt(shifted_bracket_sq(norm_sq));
  const double decay = std::exp(-0.5 * t);
  const double cs = std::cos(w * t);
  const double sn = std::sin(w * t);
  return {decay * (cs + sn / (2.0 * w)), decay * sn / w, -decay * (w + 1.0 / (4.0 * w)) * sn,
          decay * (cs - sn / (2.0 * w))};
}

Mat2 undamped_propagator(double norm_sq, double t) {
  const double w = std::sqrt(bracket_sq(norm_sq));
  const double cs = std::cos(w * t);
  const double sn = std::sin(w * t);
  return {cs, sn / w, -w * sn, cs};
}

PropagatorCache::PropagatorCache(int cutoff, double t, bool damped) : cutoff_(cutoff), t_(t) {
  if (cutoff < 0) throw ValidationError("PropagatorCache: negative cutoff");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("PropagatorCache: t must be finite and >= 0");
  mats_.resize(max_norm_sq(cutoff) + 1);
  for (std::size_t r2 = 0; r2 < mats_.size(); ++r2) {
    const double n2 = static_cast<double>(r2);
    mats_[r2] = damped ? damped_propagator(n2, t) : undamped_propagator(n2, t);
  }
}

void PropagatorCache::apply(PhaseState& x) const {
  if (x.cutoff() > cutoff_) throw ShapeError("PropagatorCache::apply: state cutoff exceeds cache cutoff");
  apply_mode_matrices(x, mats_);
}

Mat2 cholesky_psd(const Mat2& q, double scale, int n1, int n2) {
  const double tol = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  auto fail = [&](const std::string& what) {
    throw KernelFactorizationError(n1, n2,
                                   "noise covariance not PSD at mode (" + std::to_string(n1) + "," +
                                       std::to_string(n2) + "): " + what);
  };
  if (!std::isfinite(q.a) || !std::isfinite(q.b) || !std::isfinite(q.d)) fail("non-finite entry");
  if (q.a < -tol || q.d < -tol) fail("negative diagonal");
  const double q00 = std::max(q.a, 0.0);
  const double q11 = std::max(q.d, 0.0);
  const double off = 0.5 * (q.b + q.c);
  if (off * off > q00 * q11 + tol * scale) fail("negative determinant");
  Mat2 l;
  if (q00 > 0.0) {
    l.a = std::sqrt(q00);
    l.c = off / l.a;
    l.d = std::sqrt(std::max(q11 - l.c * l.c, 0.0));
  } else {
    l.d = std::sqrt(q11);
  }
  return l;
}

NoiseKernel::NoiseKernel(double s, int cutoff, double delta) : s_(s), cutoff_(cutoff), delta_(delta) {
  if (cutoff < 0) throw ValidationError("NoiseKernel: negative cutoff");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ValidationError("NoiseKernel: delta must be >= 0");
  const std::size_t count = max_norm_sq(cutoff) + 1;
  cov_.resize(count);
  chol_.resize(count);
  for (int n1 = 0; n1 <= cutoff; ++n1) {
    for (int n2 = 0; n2 <= n1; ++n2) {
      const std::size_t r2 = static_cast<std::size_t>(n1 * n1 + n2 * n2);
      const double b2 = bracket_sq(static_cast<double>(r2));
      const Mat2 sigma{std::pow(b2, -s - 1.0), 0.0, 0.0, std::pow(b2, -s)};
      const Mat2 sm = damped_propagator(static_cast<double>(r2), delta);
      const Mat2 moved = sm * sigma * sm.transpose();
      Mat2 q{sigma.a - moved.a, -moved.b, -moved.c, sigma.d - moved.d};
      q.b = q.c = 0.5 * (q.b + q.c);
      cov_[r2] = q;
      chol_[r2] = cholesky_psd(q, std::max(sigma.a, sigma.d), n1, n2);
    }
  }
}

PhaseState propagate_linear(const PhaseState& x, double t) {
  if (!(t >= 0.0)) throw ValidationError("propagate_linear: t must be >= 0");
  PhaseState out = x;
  PropagatorCache(x.cutoff(), t).apply(out);
  return out;
}

PhaseState noise_increment(const NoiseKernel& kernel, const RngStream& rng, std::uint64_t step) {
  const int cut = kernel.cutoff();
  PhaseState eta(cut);
  if (kernel.delta() == 0.0) return eta;
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  for (int n1 = -cut; n1 <= cut; ++n1) {
    for (int n2 = 0; n2 <= cut; ++n2) {
      const ModeIndex n{n1, n2};
      if (!n.in_half_lattice()) continue;
      const Mat2& l = kernel.factor(n.norm_sq());
      const NormalPair z0 = rng.normals(mode_slot(n1, n2, 0), step);
      const NormalPair z1 = rng.normals(mode_slot(n1, n2, 1), step);
      if (n1 == 0 && n2 == 0) {
        eta.u.at(0, 0) = l.a * z0.a;
        eta.v.at(0, 0) = l.c * z0.a + l.d * z1.a;
      } else {
        const Complex w0(z0.a, z0.b);
        const Complex w1(z1.a, z1.b);
        eta.u.set_pair(n1, n2, kInvSqrt2 * (l.a * w0));
        eta.v.set_pair(n1, n2, kInvSqrt2 * (l.c * w0 + l.d * w1));
      }
    }
  }
  return eta;
}

Splitting parse_splitting(const std::string& name) {
  if (name == "strang") return Splitting::strang;
  if (name == "lie") return Splitting::lie;
  throw ValidationError("unknown splitting '" + name + "' (expected lie or strang)");
}

std::string to_string(Splitting s) { return s == Splitting::strang ? "strang" : "lie"; }

void FlowConfig::validate() const {
  if (N < 0) throw ValidationError("FlowConfig: N must be >= 0");
  if (storage_cutoff >= 0 && storage_cutoff < N) {
    throw ValidationError("FlowConfig: storage cutoff must be >= N");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("FlowConfig: dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ValidationError("FlowConfig: T must be >= 0");
  if (noise && !(s > 0.0)) throw ValidationError("FlowConfig: s must be positive");
  if (!damped && noise) throw ValidationError("FlowConfig: the undamped test flow is noise free");
  if (T / dt > 4.0e9) throw ValidationError("FlowConfig: too many steps");
}

std::uint64_t FlowConfig::steps() const { return static_cast<std::uint64_t>(std::llround(T / dt)); }

double FlowConfig::horizon() const { return static_cast<double>(steps()) * dt; }

TruncatedFlow::TruncatedFlow(FlowConfig cfg)
    : cfg_((cfg.validate(), cfg)), prop_(cfg.store_cutoff(), cfg.dt, cfg.damped) {
  if (cfg_.noise) kernel_.emplace(cfg_.s, cfg_.store_cutoff(), cfg_.dt);
}

SpectralField TruncatedFlow::force(const SpectralField& u) const {
  if (!cfg_.cubic) return SpectralField(u.cutoff());
  const SpectralField low = u.resized(std::min(cfg_.N, u.cutoff()));
  SpectralField cube = product({low, low, low}, cfg_.N);
  return cube.resized(u.cutoff());
}

PhaseState TruncatedFlow::step_with_force(const PhaseState& x, const RngStream& noise, std::uint64_t k,
                                          const SpectralField& f0, SpectralField* f1) const {
  PhaseState y = x;
  const double h = cfg_.dt;
  if (cfg_.splitting == Splitting::strang && cfg_.cubic) y.v.add_scaled(f0, -0.5 * h);
  prop_.apply(y);
  if (kernel_) y += noise_increment(*kernel_, noise, k);
  SpectralField f_end = force(y.u);
  if (cfg_.cubic) y.v.add_scaled(f_end, cfg_.splitting == Splitting::strang ? -0.5 * h : -h);
  if (f1 != nullptr) *f1 = std::move(f_end);
  return y;
}

PhaseState TruncatedFlow::step(const PhaseState& x, const RngStream& noise, std::uint64_t k) const {
  if (x.cutoff() != cfg_.store_cutoff()) {
    throw ShapeError("TruncatedFlow::step: state cutoff " + std::to_string(x.cutoff()) +
                     " differs from storage cutoff " + std::to_string(cfg_.store_cutoff()));
  }
  const SpectralField f0 = cfg_.splitting == Splitting::strang ? force(x.u) : SpectralField(x.cutoff());
  PhaseState y = step_with_force(x, noise, k, f0, nullptr);
  if (!y.all_finite()) throw BlowUpError(k, "non-finite state at step " + std::to_string(k));
  return y;
}

PhaseState TruncatedFlow::evolve(const PhaseState& x0, const RngStream& noise, const Observer& observer,
                                 std::uint64_t observe_every) const {
  if (x0.cutoff() != cfg_.store_cutoff()) {
    throw ShapeError("TruncatedFlow::evolve: initial state cutoff differs from storage cutoff");
  }
  const std::uint64_t steps = cfg_.steps();
  PhaseState x = x0;
  if (observer) observer(0, 0.0, x);
  SpectralField f = cfg_.splitting == Splitting::strang ? force(x.u) : SpectralField(x.cutoff());
  for (std::uint64_t k = 0; k < steps; ++k) {
    SpectralField f_next;
    x = step_with_force(x, noise, k, f, &f_next);
    f = std::move(f_next);
    if (!x.all_finite()) throw BlowUpError(k, "non-finite state at step " + std::to_string(k));
    const std::uint64_t done = k + 1;
    if (observer && ((observe_every > 0 && done % observe_every == 0) || done == steps)) {
      observer(done, static_cast<double>(done) * cfg_.dt, x);
    }
  }
  return x;
}

PhaseState step_truncated(const PhaseState& x, const FlowConfig& cfg, const RngStream& rng, std::uint64_t k) {
  return TruncatedFlow(cfg).step(x, rng, k);
}

PhaseState evolve(const PhaseState& x0, const FlowConfig& cfg, const RngStream& rng, const Observer& observer,
                  std::uint64_t observe_every) {
  return TruncatedFlow(cfg).evolve(x0, rng, observer, observe_every);
}

RemainderTrajectory remainder_w(const PhaseState& x0, const FlowConfig& cfg, const RngStream& rng,
                                std::uint64_t observe_every) {
  const TruncatedFlow full(cfg);
  FlowConfig lin_cfg = cfg;
  lin_cfg.cubic = false;
  lin_cfg.storage_cutoff = cfg.N;
  const TruncatedFlow lin(lin_cfg);

  RemainderTrajectory out;
  const std::uint64_t steps = cfg.steps();
  PhaseState x = x0;
  PhaseState y = project_square(x0, cfg.N).resized(cfg.N);
  if (x.cutoff() != cfg.store_cutoff()) {
    throw ShapeError("remainder_w: initial state cutoff differs from storage cutoff");
  }
  auto record = [&](std::uint64_t k) {
    out.times.push_back(static_cast<double>(k) * cfg.dt);
    out.w.push_back(x.resized(cfg.N) - y);
  };
  record(0);
  for (std::uint64_t k = 0; k < steps; ++k) {
    x = full.step(x, rng, k);
    y = lin.step(y, rng, k);
    const std::uint64_t done = k + 1;
    if ((observe_every > 0 && done % observe_every == 0) || done == steps) record(done);
  }
  return out;
}

double phase_sobolev_norm(const PhaseState& x, double alpha) {
  return std::hypot(sobolev_norm(x.u, alpha), sobolev_norm(x.v, alpha - 1.0));
}

double phase_wap_norm(const PhaseState& x, double alpha, double p, int grid_len) {
  if (grid_len == 0) grid_len = fft_length_at_least(4 * x.cutoff() + 2);
  return lp_norm(apply_multiplier(x.u, RadialMultiplier::bracket_power(alpha)), p, grid_len) +
         lp_norm(apply_multiplier(x.v, RadialMultiplier::bracket_power(alpha - 1.0)), p, grid_len);
}

double decaying_norm_X(const PhaseState& x, double alpha, std::span<const double> t_grid) {
  if (t_grid.empty() || t_grid.front() != 0.0) {
    throw ValidationError("decaying_norm_X: time grid must start at 0");
  }
  if (!(alpha > 0.0)) throw ValidationError("decaying_norm_X: alpha must be positive");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw ValidationError("decaying_norm_X: time grid must increase");
  }
  double best = 0.0;
  for (double t : t_grid) {
    const PhaseState y = propagate_linear(x, t);
    best = std::max(best, std::exp(t / 8.0) * phase_wap_norm(y, alpha, 2.0 / alpha));
  }
  return best;
}

double propagator_decay_constant(int cutoff, double t) {
  double worst = 0.0;
  for (std::size_t r2 = 0; r2 <= max_norm_sq(cutoff); ++r2) {
    const double n2 = static_cast<double>(r2);
    const double w = std::sqrt(bracket_sq(n2));
    Mat2 m = damped_propagator(n2, t);
    m.b *= w;
    m.c /= w;
    worst = std::max(worst, m.operator_norm());
  }
  return worst * std::exp(0.5 * t);
}

}  // namespace sdnlw
