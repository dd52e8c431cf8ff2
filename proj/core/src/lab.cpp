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

#include "sdnlw/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sdnlw/besov.hpp"
#include "sdnlw/dynamics.hpp"
#include "sdnlw/error.hpp"
#include "sdnlw/functionals.hpp"
#include "sdnlw/gaussian.hpp"

namespace sdnlw {

namespace {

constexpr std::uint64_t kChunk = 256;

const std::vector<ModeIndex>& low_half_modes() {
  static const std::vector<ModeIndex> modes{{1, 0}, {-1, 1}, {0, 1}, {1, 1}};
  return modes;
}

std::vector<ModeIndex> half_lattice(int N) {
  std::vector<ModeIndex> out;
  for (int n1 = -N; n1 <= N; ++n1) {
    for (int n2 = 0; n2 <= N; ++n2) {
      const ModeIndex n{n1, n2};
      if (n.in_half_lattice()) out.push_back(n);
    }
  }
  return out;
}

RngStream initial_stream(const LabConfig& cfg, std::uint64_t i) {
  return {cfg.seed, i, StreamPurpose::initial_data};
}

RngStream noise_stream(const LabConfig& cfg, std::uint64_t i) { return {cfg.seed, i, StreamPurpose::noise}; }

// Pairwise reduction of per-chunk partial sums, column by column.
std::vector<double> reduce_chunks(const std::vector<std::vector<double>>& partials, std::size_t width) {
  std::vector<double> out(width, 0.0);
  std::vector<double> column(partials.size());
  for (std::size_t k = 0; k < width; ++k) {
    for (std::size_t c = 0; c < partials.size(); ++c) column[c] = partials[c][k];
    out[k] = pairwise_sum(column);
  }
  return out;
}

FlowConfig flow_from(const LabConfig& cfg, bool cubic) {
  FlowConfig f;
  f.s = cfg.s;
  f.N = cfg.N;
  f.dt = cfg.dt;
  f.T = cfg.T;
  f.cubic = cubic;
  f.noise = true;
  return f;
}

double weighted_variance(std::span<const double> w, std::span<const double> x) {
  double mean = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mean += w[i] * x[i];
  double var = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) var += w[i] * (x[i] - mean) * (x[i] - mean);
  return var;
}

}  // namespace

void LabConfig::validate() const {
  if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("s must be positive");
  if (N < 0) throw ValidationError("N must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ValidationError("T must be >= 0");
  if (samples == 0) throw ValidationError("samples must be positive");
  if (threads < 1) throw ValidationError("threads must be >= 1");
}

std::map<std::string, double> LabConfig::metadata() const {
  return {{"s", s}, {"N", N}, {"dt", dt}, {"T", T}, {"seed", static_cast<double>(seed)}};
}

// ---------------------------------------------------------------------------

double soft_clip(double x) { return 5.0 * std::tanh(x / 5.0); }

std::vector<double> low_coordinates(const SpectralField& f, double exponent) {
  std::vector<double> c;
  c.reserve(9);
  c.push_back(f.get(0, 0).real());
  for (const ModeIndex& n : low_half_modes()) {
    const double sd = std::pow(bracket_sq(n.norm_sq()), -0.5 * exponent) * std::sqrt(0.5);
    const Complex z = f.get(n.n1, n.n2);
    c.push_back(z.real() / sd);
    c.push_back(z.imag() / sd);
  }
  return c;
}

std::vector<std::string> observable_names() { return {"one", "u0", "uv0", "ind_v0", "uv10", "uv_low"}; }

Observable make_observable(const std::string& name, double s) {
  auto u_coords = [s](const PhaseState& x) { return low_coordinates(x.u, s + 1.0); };
  auto v_coords = [s](const PhaseState& x) { return low_coordinates(x.v, s); };
  if (name == "one") return {name, [](const PhaseState&) { return 1.0; }};
  if (name == "u0") return {name, [=](const PhaseState& x) { return soft_clip(u_coords(x)[0]); }};
  if (name == "uv0") {
    return {name, [=](const PhaseState& x) { return soft_clip(u_coords(x)[0]) * soft_clip(v_coords(x)[0]); }};
  }
  if (name == "ind_v0") {
    return {name, [=](const PhaseState& x) { return 1.0 / (1.0 + std::exp(-4.0 * v_coords(x)[0])); }};
  }
  if (name == "uv10") {
    return {name, [=](const PhaseState& x) { return soft_clip(u_coords(x)[1]) * soft_clip(v_coords(x)[1]); }};
  }
  if (name == "uv_low") {
    return {name, [=](const PhaseState& x) {
              const auto a = u_coords(x);
              const auto b = v_coords(x);
              double sum = 0.0;
              for (std::size_t k = 0; k < a.size(); ++k) sum += soft_clip(a[k]) * soft_clip(b[k]);
              return sum / static_cast<double>(a.size());
            }};
  }
  throw ValidationError("unknown observable '" + name + "'");
}

// ---------------------------------------------------------------------------

InvarianceResult linear_invariance_test(const LabConfig& cfg) {
  cfg.validate();
  const MeasureSpec spec{cfg.s, cfg.N};
  const TruncatedFlow flow(flow_from(cfg, false));
  const std::vector<ModeIndex> modes = half_lattice(cfg.N);
  constexpr std::size_t kStats = 6;
  const std::size_t width = modes.size() * kStats * 2;
  const std::uint64_t chunks = (cfg.samples + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partials(chunks);

  parallel_for(chunks, cfg.threads, [&](std::uint64_t c) {
    std::vector<double> acc(width, 0.0);
    const std::uint64_t end = std::min(cfg.samples, (c + 1) * kChunk);
    for (std::uint64_t i = c * kChunk; i < end; ++i) {
      const PhaseState x0 = sample_mu(spec, initial_stream(cfg, i));
      const PhaseState xt = flow.evolve(x0, noise_stream(cfg, i));
      for (std::size_t j = 0; j < modes.size(); ++j) {
        const ModeIndex& n = modes[j];
        const Complex u0 = x0.u.at(n.n1, n.n2), v0 = x0.v.at(n.n1, n.n2);
        const Complex ut = xt.u.at(n.n1, n.n2), vt = xt.v.at(n.n1, n.n2);
        const Complex cross = ut * std::conj(vt);
        const double vals[kStats] = {std::norm(ut),  std::norm(vt),  cross.real(), cross.imag(),
                                     std::norm(ut) - std::norm(u0), std::norm(vt) - std::norm(v0)};
        double* a = &acc[j * kStats * 2];
        for (std::size_t k = 0; k < kStats; ++k) {
          a[2 * k] += vals[k];
          a[2 * k + 1] += vals[k] * vals[k];
        }
      }
    }
    partials[c] = std::move(acc);
  });
  const std::vector<double> tot = reduce_chunks(partials, width);

  InvarianceResult res;
  res.count = cfg.samples;
  res.horizon = flow.config().horizon();
  const double n = static_cast<double>(cfg.samples);
  static const char* names[kStats] = {"var_u", "var_v", "cross_re", "cross_im", "drift_u", "drift_v"};
  std::size_t var_in = 0, var_all = 0, cross_in = 0, cross_all = 0, drift_in = 0, drift_all = 0;
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const ModeIndex& m = modes[j];
    const double b2 = bracket_sq(m.norm_sq());
    const double targets[kStats] = {std::pow(b2, -cfg.s - 1.0), std::pow(b2, -cfg.s), 0.0, 0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < kStats; ++k) {
      if (k == 3 && m.n1 == 0 && m.n2 == 0) continue;  // imaginary part of a real mode
      const double sum = tot[j * kStats * 2 + 2 * k];
      const double sum2 = tot[j * kStats * 2 + 2 * k + 1];
      ModeStatistic st;
      st.n = m;
      st.statistic = names[k];
      st.estimate = sum / n;
      st.target = targets[k];
      const double var = std::max(0.0, (sum2 - n * st.estimate * st.estimate) / (n - 1.0));
      st.stderr_ = std::sqrt(var / n);
      st.z = st.stderr_ > 0.0 ? (st.estimate - st.target) / st.stderr_ : 0.0;
      const bool in = std::abs(st.z) <= 3.0;
      if (k < 2) {
        ++var_all;
        var_in += in;
      } else if (k < 4) {
        ++cross_all;
        cross_in += in;
        res.cross_max_abs_z = std::max(res.cross_max_abs_z, std::abs(st.z));
      } else {
        ++drift_all;
        drift_in += in;
      }
      res.max_abs_z = std::max(res.max_abs_z, std::abs(st.z));
      res.stats.push_back(st);
    }
  }
  res.variance_within = static_cast<double>(var_in) / static_cast<double>(var_all);
  res.cross_within = static_cast<double>(cross_in) / static_cast<double>(cross_all);
  res.drift_within = static_cast<double>(drift_in) / static_cast<double>(drift_all);
  res.bonferroni_z = normal_two_sided_quantile(1e-3 / static_cast<double>(res.stats.size()));
  return res;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> potential_samples(const LabConfig& cfg, bool zero_potential) {
  std::vector<double> r(cfg.samples, 0.0);
  if (zero_potential) return r;
  parallel_for(cfg.samples, cfg.threads, [&](std::uint64_t i) {
    const SpectralField u = sample_mu_position(cfg.s + 1.0, cfg.N, initial_stream(cfg, i));
    r[i] = r_potential(u, cfg.s, cfg.N);
  });
  return r;
}

}  // namespace

EstimatorReport partition_estimate(const LabConfig& cfg, bool zero_potential) {
  cfg.validate();
  const std::vector<double> r = potential_samples(cfg, zero_potential);
  std::vector<double> e(r.size()), neg(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    e[i] = std::exp(-r[i]);
    neg[i] = -r[i];
  }
  const MeanStderr z = mean_stderr(e);
  const MeanStderr mr = mean_stderr(r);
  EstimatorReport rep;
  rep.name = "partition";
  rep.mean = z.mean;
  rep.stderr_ = z.stderr_;
  rep.count = z.count;
  rep.ess = normalize_log_weights(neg).ess;
  rep.metadata = cfg.metadata();
  rep.extras["log_Z"] = std::log(z.mean);
  rep.extras["log_Z_se"] = z.stderr_ / z.mean;
  rep.extras["mean_R"] = mr.mean;
  rep.extras["mean_R_se"] = mr.stderr_;
  const double jensen = std::exp(-mr.mean);
  rep.extras["jensen_bound"] = jensen;
  rep.extras["jensen_ok"] = z.mean >= jensen - 2.0 * z.stderr_ ? 1.0 : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

double drift_penalty(const SpectralField& theta, double s) {
  const int cut = theta.cutoff();
  double sum = 0.0;
  for (int n1 = -cut; n1 <= cut; ++n1) {
    for (int n2 = -cut; n2 <= cut; ++n2) {
      sum += std::pow(bracket_sq(n1 * n1 + n2 * n2), 1.0 + s) * std::norm(theta.at(n1, n2));
    }
  }
  return 0.5 * sum;
}

SpectralField functional_gradient(const SpectralField& u, double s, int N, BdFunctional f) {
  if (f == BdFunctional::quadratic) return u;
  return grad_r(u, s, N);
}

}  // namespace

double bd_objective(const SpectralField& y, const SpectralField& theta, double s, int N, BdFunctional f) {
  const SpectralField u = y + theta;
  const double F = f == BdFunctional::quadratic ? 0.5 * inner_product(u, u) : r_potential(u, s, N);
  return -F - drift_penalty(theta, s);
}

double bd_maximize(const SpectralField& y_in, const BdConfig& cfg, SpectralField* theta_out) {
  const double s = cfg.lab.s;
  const int N = cfg.lab.N;
  const SpectralField y = y_in.resized(N);
  const RadialMultiplier weight = RadialMultiplier::bracket_power(2.0 + 2.0 * s);
  const RadialMultiplier precond = RadialMultiplier::bracket_power(-(2.0 + 2.0 * s));
  SpectralField theta(N);
  double value = bd_objective(y, theta, s, N, cfg.functional);
  for (int it = 0; it < cfg.ascent_steps; ++it) {
    const SpectralField g = functional_gradient(y + theta, s, N, cfg.functional);
    // Gradient of the objective and its preconditioned version.
    SpectralField grad = -1.0 * g;
    grad -= apply_multiplier(theta, weight);
    const SpectralField dir = apply_multiplier(grad, precond);
    const double slope = inner_product(grad, dir);
    if (!(slope > 0.0)) break;
    double eta = cfg.step_size;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving) {
      SpectralField trial = theta;
      trial.add_scaled(dir, eta);
      const double v = bd_objective(y, trial, s, N, cfg.functional);
      if (!std::isfinite(v) || v > cfg.ceiling) {
        throw OptimizerDivergedError("bd ascent objective " + std::to_string(v) + " exceeds ceiling " +
                                     std::to_string(cfg.ceiling));
      }
      if (v >= value + 1e-4 * eta * slope) {
        theta = std::move(trial);
        value = v;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
  }
  if (theta_out != nullptr) *theta_out = theta;
  return value;
}

double bd_quadratic_closed_form(const SpectralField& y, double s) {
  const int cut = y.cutoff();
  double sum = 0.0;
  for (int n1 = -cut; n1 <= cut; ++n1) {
    for (int n2 = -cut; n2 <= cut; ++n2) {
      const double w = std::pow(bracket_sq(n1 * n1 + n2 * n2), 1.0 + s);
      sum += std::norm(y.at(n1, n2)) * w / (1.0 + w);
    }
  }
  return -0.5 * sum;
}

BdResult bd_bound(const BdConfig& cfg) {
  cfg.lab.validate();
  if (cfg.ascent_steps < 0) throw ValidationError("ascent_steps must be >= 0");
  if (!(cfg.step_size > 0.0)) throw ValidationError("step_size must be positive");
  const LabConfig& lab = cfg.lab;
  std::vector<double> values(lab.samples), errors(lab.samples, 0.0);
  parallel_for(lab.samples, lab.threads, [&](std::uint64_t i) {
    const SpectralField y = sample_mu_position(lab.s + 1.0, lab.N, initial_stream(lab, i));
    values[i] = bd_maximize(y, cfg);
    if (cfg.functional == BdFunctional::quadratic) {
      errors[i] = std::abs(values[i] - bd_quadratic_closed_form(y, lab.s));
    }
  });
  BdResult res;
  const MeanStderr m = mean_stderr(values);
  res.rhs.name = "bd_rhs";
  res.rhs.mean = m.mean;
  res.rhs.stderr_ = m.stderr_;
  res.rhs.count = m.count;
  res.rhs.ess = static_cast<double>(m.count);
  res.rhs.metadata = lab.metadata();
  res.rhs.extras["ascent_steps"] = cfg.ascent_steps;
  res.rhs.extras["step_size"] = cfg.step_size;
  res.closed_form_max_error = *std::max_element(errors.begin(), errors.end());
  if (cfg.functional == BdFunctional::quadratic) {
    res.rhs.extras["closed_form_max_error"] = res.closed_form_max_error;
    res.inequality_holds = true;
    return res;
  }
  res.lhs = partition_estimate(lab);
  res.lhs.name = "bd_lhs_partition";
  const double log_z = res.lhs.extras.at("log_Z");
  const double se = std::hypot(m.stderr_, res.lhs.extras.at("log_Z_se"));
  res.inequality_holds = m.mean >= log_z - 2.0 * se;
  res.rhs.extras["log_Z"] = log_z;
  res.rhs.extras["combined_se"] = se;
  res.rhs.extras["inequality_holds"] = res.inequality_holds ? 1.0 : 0.0;
  return res;
}

// ---------------------------------------------------------------------------

DensityResult density_derivative_check(const DensityConfig& cfg) {
  const LabConfig& lab = cfg.lab;
  lab.validate();
  FlowConfig fc = flow_from(lab, cfg.nonlinear);
  const std::uint64_t steps = fc.steps();
  if (steps == 0 || steps % 2 != 0) {
    throw ValidationError("density check needs an even, positive number of steps (T/dt)");
  }
  const TruncatedFlow flow(fc);
  const double t = fc.horizon();
  std::vector<Observable> obs;
  for (const auto& name : cfg.observables) obs.push_back(make_observable(name, lab.s));
  const std::size_t k = obs.size();
  const MeasureSpec spec{lab.s, lab.N};

  std::vector<double> logw(lab.samples), brk(lab.samples), f0(lab.samples * k), fh(lab.samples * k),
      ft(lab.samples * k);
  parallel_for(lab.samples, lab.threads, [&](std::uint64_t i) {
    const PhaseState x0 = sample_mu(spec, initial_stream(lab, i));
    logw[i] = -r_potential(x0.u, lab.s, lab.N);
    brk[i] = cfg.nonlinear ? bracket_HE(x0, lab.s, lab.N) : -inner_product(x0.v, grad_r(x0.u, lab.s, lab.N));
    PhaseState half;
    const PhaseState end = flow.evolve(
        x0, noise_stream(lab, i),
        [&](std::uint64_t step, double, const PhaseState& x) {
          if (step == steps / 2) half = x;
        },
        steps / 2);
    for (std::size_t j = 0; j < k; ++j) {
      f0[i * k + j] = obs[j].eval(x0);
      fh[i * k + j] = obs[j].eval(half);
      ft[i * k + j] = obs[j].eval(end);
    }
  });

  const Weights w = normalize_log_weights(logw);
  if (w.ess < cfg.ess_floor * static_cast<double>(lab.samples)) {
    throw DegenerateWeightsError("effective sample size " + std::to_string(w.ess) + " below floor");
  }
  DensityResult res;
  res.ess = w.ess;
  res.count = lab.samples;
  res.horizon = t;
  std::vector<double> dt_v(lab.samples), dh_v(lab.samples), dr_v(lab.samples), b_v(lab.samples),
      diff_v(lab.samples);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::uint64_t i = 0; i < lab.samples; ++i) {
      dt_v[i] = (ft[i * k + j] - f0[i * k + j]) / t;
      dh_v[i] = (fh[i * k + j] - f0[i * k + j]) / (0.5 * t);
      dr_v[i] = 2.0 * dh_v[i] - dt_v[i];
      b_v[i] = -f0[i * k + j] * brk[i];
      diff_v[i] = dr_v[i] - b_v[i];
    }
    DensityObservableResult r;
    r.observable = obs[j].name;
    r.D_t = weighted_mean(w.w, dt_v).mean;
    r.D_half = weighted_mean(w.w, dh_v).mean;
    const MeanStderr d = weighted_mean(w.w, dr_v);
    const MeanStderr b = weighted_mean(w.w, b_v);
    const MeanStderr df = weighted_mean(w.w, diff_v);
    r.D = d.mean;
    r.D_se = d.stderr_;
    r.B = b.mean;
    r.B_se = b.stderr_;
    r.diff = df.mean;
    r.diff_se = df.stderr_;
    r.richardson_gap = std::abs(r.D_t - r.D_half);
    r.combined = r.diff_se + r.richardson_gap;
    r.within = std::abs(r.diff) <= 3.0 * r.combined;
    res.observables.push_back(r);
  }
  return res;
}

// ---------------------------------------------------------------------------

KRadiusCheck kr_membership(const PhaseState& x0, double s, double alpha, double R, const std::vector<int>& M_grid) {
  if (!(alpha < s)) throw ValidationError("kr_membership: alpha must be < s");
  if (M_grid.empty()) throw ValidationError("kr_membership: empty M grid");
  KRadiusCheck out;
  out.R = R;
  out.alpha = alpha;
  for (int M : M_grid) {
    if (M < 0 || M > x0.cutoff()) throw ValidationError("kr_membership: M outside [0, cutoff]");
    const PhaseState low = x0.resized(M);
    const double value =
        holder_norm(low, alpha) + sobolev_norm(q_renorm(x0.u, s, M), alpha - s);
    out.M.push_back(M);
    out.per_M.push_back(value);
    out.value = std::max(out.value, value);
  }
  out.member = out.value <= R;
  return out;
}

EstimatorReport kr_scan(const LabConfig& cfg, double alpha, const std::vector<int>& M_grid, double R) {
  cfg.validate();
  const MeasureSpec spec{cfg.s, cfg.N};
  std::vector<double> values(cfg.samples);
  parallel_for(cfg.samples, cfg.threads, [&](std::uint64_t i) {
    const PhaseState x0 = sample_mu(spec, initial_stream(cfg, i));
    values[i] = kr_membership(x0, cfg.s, alpha, std::numeric_limits<double>::infinity(), M_grid).value;
  });
  const MeanStderr m = mean_stderr(values);
  EstimatorReport rep;
  rep.name = "kr_value";
  rep.mean = m.mean;
  rep.stderr_ = m.stderr_;
  rep.count = m.count;
  rep.ess = static_cast<double>(m.count);
  rep.metadata = cfg.metadata();
  rep.metadata["alpha"] = alpha;
  for (double q : {0.1, 0.5, 0.9, 0.99}) {
    rep.extras["q" + std::to_string(static_cast<int>(std::lround(q * 100)))] = quantile(values, q);
  }
  rep.extras["max"] = *std::max_element(values.begin(), values.end());
  const auto members = std::count_if(values.begin(), values.end(), [R](double v) { return v <= R; });
  rep.extras["member_fraction"] = static_cast<double>(members) / static_cast<double>(values.size());
  return rep;
}

// ---------------------------------------------------------------------------

QIResult quasi_invariance_scan(const QIConfig& cfg) {
  const LabConfig& lab = cfg.lab;
  lab.validate();
  const TruncatedFlow flow(flow_from(lab, cfg.nonlinear));
  const MeasureSpec spec{lab.s, lab.N};
  constexpr std::size_t kCoords = 18;
  std::vector<double> logw(lab.samples), c0(lab.samples * kCoords), ct(lab.samples * kCoords);
  parallel_for(lab.samples, lab.threads, [&](std::uint64_t i) {
    const PhaseState x0 = sample_mu(spec, initial_stream(lab, i));
    logw[i] = -r_potential(x0.u, lab.s, lab.N);
    const PhaseState xt = flow.evolve(x0, noise_stream(lab, i));
    auto fill = [&](const PhaseState& x, double* dst) {
      const auto a = low_coordinates(x.u, lab.s + 1.0);
      const auto b = low_coordinates(x.v, lab.s);
      std::copy(a.begin(), a.end(), dst);
      std::copy(b.begin(), b.end(), dst + 9);
    };
    fill(x0, &c0[i * kCoords]);
    fill(xt, &ct[i * kCoords]);
  });

  QIResult res;
  res.count = lab.samples;
  res.horizon = flow.config().horizon();
  const Weights nu = normalize_log_weights(logw);
  res.ess = nu.ess;
  const std::vector<double> mu(lab.samples, 1.0 / static_cast<double>(lab.samples));
  static const char* labels[9] = {"[0,0].re", "[1,0].re", "[1,0].im", "[-1,1].re", "[-1,1].im",
                                  "[0,1].re", "[0,1].im", "[1,1].re", "[1,1].im"};
  const double tests = 2.0 * kCoords;
  res.all_finite = true;
  std::vector<double> a(lab.samples), b(lab.samples), d(lab.samples);
  for (int e = 0; e < 2; ++e) {
    const std::vector<double>& w = e == 0 ? mu : nu.w;
    const double n_eff = e == 0 ? static_cast<double>(lab.samples) : nu.ess;
    for (std::size_t k = 0; k < kCoords; ++k) {
      for (std::uint64_t i = 0; i < lab.samples; ++i) {
        a[i] = c0[i * kCoords + k];
        b[i] = ct[i * kCoords + k];
        d[i] = b[i] - a[i];
      }
      QIStatistic st;
      st.ensemble = e == 0 ? "mu" : "nu";
      st.coordinate = std::string(k < 9 ? "u" : "v") + labels[k % 9];
      st.ks = ks_distance(a, w, b, w);
      st.ks_critical = ks_critical(cfg.significance / tests, n_eff, n_eff);
      const MeanStderr md = weighted_mean(w, d);
      st.mean_z = md.stderr_ > 0.0 ? md.mean / md.stderr_ : 0.0;
      st.variance_ratio = weighted_variance(w, b) / weighted_variance(w, a);
      res.all_finite = res.all_finite && std::isfinite(st.ks) && std::isfinite(st.mean_z) &&
                       std::isfinite(st.variance_ratio);
      res.max_ks = std::max(res.max_ks, st.ks);
      res.max_ks_over_critical = std::max(res.max_ks_over_critical, st.ks / st.ks_critical);
      res.max_variance_ratio_dev =
          std::max(res.max_variance_ratio_dev, std::max(st.variance_ratio, 1.0 / st.variance_ratio));
      res.stats.push_back(st);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------

EstimatorReport stochastic_convolution_sup(const LabConfig& cfg, double alpha, std::uint64_t observe_every) {
  cfg.validate();
  const TruncatedFlow flow(flow_from(cfg, false));
  std::vector<double> sup(cfg.samples, 0.0);
  parallel_for(cfg.samples, cfg.threads, [&](std::uint64_t i) {
    double best = 0.0;
    flow.evolve(
        PhaseState(cfg.N), noise_stream(cfg, i),
        [&](std::uint64_t step, double, const PhaseState& x) {
          if (step > 0) best = std::max(best, holder_norm(x, alpha));
        },
        observe_every);
    sup[i] = best;
  });
  const MeanStderr m = mean_stderr(sup);
  EstimatorReport rep;
  rep.name = "stochastic_convolution_sup";
  rep.mean = m.mean;
  rep.stderr_ = m.stderr_;
  rep.count = m.count;
  rep.ess = static_cast<double>(m.count);
  rep.metadata = cfg.metadata();
  rep.metadata["alpha"] = alpha;
  rep.extras["median"] = quantile(sup, 0.5);
  for (int p : {1, 2, 4}) {
    double acc = 0.0;
    for (double x : sup) acc += std::pow(x, p);
    rep.extras["m" + std::to_string(p)] = acc / static_cast<double>(sup.size());
  }
  rep.extras["max"] = *std::max_element(sup.begin(), sup.end());
  return rep;
}

std::vector<EstimatorReport> q_convergence(const LabConfig& cfg, double sigma_exp, const std::vector<int>& M_list) {
  cfg.validate();
  if (M_list.size() < 2) throw ValidationError("q_convergence: need at least two values of M");
  const int m_max = *std::max_element(M_list.begin(), M_list.end());
  const std::size_t k = M_list.size();
  std::vector<double> vals(cfg.samples * k);
  parallel_for(cfg.samples, cfg.threads, [&](std::uint64_t i) {
    const SpectralField u = sample_mu_position(cfg.s + 1.0, 2 * m_max, initial_stream(cfg, i));
    for (std::size_t j = 0; j < k; ++j) {
      const int M = M_list[j];
      SpectralField d = q_renorm(u, cfg.s, 2 * M);
      d -= q_renorm(u, cfg.s, M);
      vals[i * k + j] = sobolev_norm(d, -sigma_exp);
    }
  });
  std::vector<EstimatorReport> out;
  std::vector<double> lx, ly, col(cfg.samples);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::uint64_t i = 0; i < cfg.samples; ++i) col[i] = vals[i * k + j];
    const MeanStderr m = mean_stderr(col);
    EstimatorReport rep;
    rep.name = "q_increment";
    rep.mean = m.mean;
    rep.stderr_ = m.stderr_;
    rep.count = m.count;
    rep.ess = static_cast<double>(m.count);
    rep.metadata = cfg.metadata();
    rep.metadata["M"] = M_list[j];
    rep.metadata["sigma"] = sigma_exp;
    out.push_back(rep);
    lx.push_back(std::log(static_cast<double>(M_list[j])));
    ly.push_back(std::log(m.mean));
  }
  const double slope = regression_slope(lx, ly);
  for (auto& rep : out) rep.extras["slope"] = slope;
  return out;
}

std::vector<EstimatorReport> commutator_sweep(const LabConfig& cfg, double eps, const std::vector<int>& N_list,
                                              int eval_grid) {
  cfg.validate();
  std::vector<EstimatorReport> out;
  for (int N : N_list) {
    std::vector<double> ratio(cfg.samples);
    parallel_for(cfg.samples, cfg.threads, [&](std::uint64_t i) {
      const SpectralField u = sample_mu_position(cfg.s + 1.0, N, initial_stream(cfg, i));
      const SpectralField res = commutator_residual(u, cfg.s);
      const double h = holder_norm(u, cfg.s - eps, eval_grid);
      ratio[i] = std::sqrt(inner_product(res, res)) / (h * h * h);
    });
    const MeanStderr m = mean_stderr(ratio);
    EstimatorReport rep;
    rep.name = "commutator_ratio";
    rep.mean = m.mean;
    rep.stderr_ = m.stderr_;
    rep.count = m.count;
    rep.ess = static_cast<double>(m.count);
    rep.metadata = cfg.metadata();
    rep.metadata["N"] = N;
    rep.metadata["eps"] = eps;
    rep.extras["max"] = *std::max_element(ratio.begin(), ratio.end());
    rep.extras["median"] = quantile(ratio, 0.5);
    out.push_back(rep);
  }
  return out;
}

std::vector<BracketTrial> bracket_flow_check(double s, int N, double dt, int trials, std::uint64_t seed) {
  if (trials < 1) throw ValidationError("bracket_flow_check: trials must be >= 1");
  FlowConfig fc;
  fc.s = s;
  fc.N = N;
  fc.dt = dt;
  fc.T = dt;
  fc.noise = false;
  fc.damped = false;
  const TruncatedFlow flow(fc);
  const RngStream unused(seed, 0, StreamPurpose::noise);
  auto energy_E = [&](const PhaseState& x) { return gaussian_energy(x, s, N) + r_potential(x.u, s, N); };
  std::vector<BracketTrial> out;
  for (int j = 0; j < trials; ++j) {
    const PhaseState x = sample_mu({s, N}, RngStream(seed, static_cast<std::uint64_t>(j), StreamPurpose::lab));
    const PhaseState fwd = flow.step(x, unused, 0);
    // Time reversal: x(-dt) = flip(Phi_dt(flip x)) with flip(u, v) = (u, -v).
    const PhaseState flipped(x.u, -1.0 * x.v);
    const PhaseState back = flow.step(flipped, unused, 0);
    BracketTrial t;
    t.fd_rate = (energy_E(fwd) - energy_E(back)) / (2.0 * dt);
    t.bracket = bracket_HE(x, s, N);
    t.rel_error = std::abs(t.fd_rate + t.bracket) / std::max(std::abs(t.bracket), 1e-300);
    out.push_back(t);
  }
  return out;
}

}  // namespace sdnlw
