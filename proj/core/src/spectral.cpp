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

#include "sdnlw/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "sdnlw/error.hpp"

namespace sdnlw {

namespace {

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

// Plans are shared by all threads.  Execution goes through the new-array
// interface on per-thread buffers, which is thread safe; only planning is
// serialized.  Every buffer comes from fftw_malloc so the alignment matches
// the one seen by the planner.
struct PlanPair {
  fftw_plan to_grid = nullptr;    // c2r
  fftw_plan from_grid = nullptr;  // r2c
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [len, plans] : plans_) {
      fftw_destroy_plan(plans.to_grid);
      fftw_destroy_plan(plans.from_grid);
    }
  }

  PlanPair get(int len) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(len);
    if (it != plans_.end()) return it->second;
    const std::size_t n_real = static_cast<std::size_t>(len) * len;
    const std::size_t n_half = static_cast<std::size_t>(len) * (len / 2 + 1);
    std::unique_ptr<double, FftwDeleter> real(fftw_alloc_real(n_real));
    std::unique_ptr<fftw_complex, FftwDeleter> half(fftw_alloc_complex(n_half));
    PlanPair plans;
    plans.to_grid = fftw_plan_dft_c2r_2d(len, len, half.get(), real.get(), FFTW_ESTIMATE);
    plans.from_grid = fftw_plan_dft_r2c_2d(len, len, real.get(), half.get(), FFTW_ESTIMATE);
    plans_.emplace(len, plans);
    return plans;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

struct Workspace {
  int len = 0;
  std::unique_ptr<double, FftwDeleter> real;
  std::unique_ptr<fftw_complex, FftwDeleter> half;
  PlanPair plans;
};

Workspace& workspace(int len) {
  thread_local std::unordered_map<int, Workspace> spaces;
  auto& ws = spaces[len];
  if (ws.len != len) {
    ws.len = len;
    ws.real.reset(fftw_alloc_real(static_cast<std::size_t>(len) * len));
    ws.half.reset(fftw_alloc_complex(static_cast<std::size_t>(len) * (len / 2 + 1)));
    ws.plans = plan_cache().get(len);
  }
  return ws;
}

int wrap(int n, int len) {
  const int r = n % len;
  return r < 0 ? r + len : r;
}

// Loads the n2 >= 0 half of f into the c2r input buffer and runs the
// transform; the grid ends up in ws.real.
void synthesize_into(const SpectralField& f, Workspace& ws) {
  const int len = ws.len;
  const int half_len = len / 2 + 1;
  const int cut = f.cutoff();
  fftw_complex* half = ws.half.get();
  std::fill_n(&half[0][0], static_cast<std::size_t>(len) * half_len * 2, 0.0);
  for (int n1 = -cut; n1 <= cut; ++n1) {
    const std::size_t row = static_cast<std::size_t>(wrap(n1, len)) * half_len;
    for (int n2 = 0; n2 <= cut; ++n2) {
      const Complex c = f.at(n1, n2);
      half[row + n2][0] = c.real();
      half[row + n2][1] = c.imag();
    }
  }
  fftw_execute_dft_c2r(ws.plans.to_grid, half, ws.real.get());
}

// Expects the grid in ws.real; destroys it.
SpectralField analyze_from(Workspace& ws, int out_cutoff) {
  const int len = ws.len;
  const int half_len = len / 2 + 1;
  fftw_execute_dft_r2c(ws.plans.from_grid, ws.real.get(), ws.half.get());
  const fftw_complex* half = ws.half.get();
  const double scale = 1.0 / (static_cast<double>(len) * len);
  SpectralField out(out_cutoff);
  for (int n1 = -out_cutoff; n1 <= out_cutoff; ++n1) {
    const std::size_t row = static_cast<std::size_t>(wrap(n1, len)) * half_len;
    for (int n2 = 1; n2 <= out_cutoff; ++n2) {
      const Complex c(half[row + n2][0] * scale, half[row + n2][1] * scale);
      out.at(n1, n2) = c;
      out.at(-n1, -n2) = std::conj(c);
    }
  }
  // n2 = 0 column: take n1 >= 0 and mirror so the result is exactly Hermitian.
  for (int n1 = 1; n1 <= out_cutoff; ++n1) {
    const std::size_t row = static_cast<std::size_t>(n1) * half_len;
    const Complex c(half[row][0] * scale, half[row][1] * scale);
    out.at(n1, 0) = c;
    out.at(-n1, 0) = std::conj(c);
  }
  out.at(0, 0) = Complex(half[0][0] * scale, 0.0);
  return out;
}

void require_grid(int cutoff, int len, const char* what) {
  if (len < 2 * cutoff + 1) {
    throw ShapeError(std::string(what) + ": grid length " + std::to_string(len) +
                     " too small for cutoff " + std::to_string(cutoff));
  }
}

}  // namespace

int ModeIndex::sup_norm() const { return std::max(std::abs(n1), std::abs(n2)); }

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 0) throw ShapeError("SpectralField: negative cutoff");
  coeff_.assign(static_cast<std::size_t>(side()) * side(), Complex{});
}

SpectralField SpectralField::constant(int cutoff, double value) {
  SpectralField f(cutoff);
  f.at(0, 0) = value;
  return f;
}

SpectralField SpectralField::cosine(int cutoff, ModeIndex k, double amplitude) {
  SpectralField f(cutoff);
  if (k.n1 == 0 && k.n2 == 0) {
    f.at(0, 0) = amplitude;
  } else {
    f.set_pair(k.n1, k.n2, 0.5 * amplitude);
  }
  return f;
}

ModeIndex SpectralField::mode_at(std::size_t index) const {
  const int s = side();
  return {static_cast<int>(index / s) - cutoff_, static_cast<int>(index % s) - cutoff_};
}

bool SpectralField::contains(int n1, int n2) const {
  return std::abs(n1) <= cutoff_ && std::abs(n2) <= cutoff_;
}

Complex SpectralField::get(int n1, int n2) const {
  return contains(n1, n2) ? at(n1, n2) : Complex{};
}

void SpectralField::set_pair(int n1, int n2, Complex value) {
  if (n1 == 0 && n2 == 0) {
    at(0, 0) = value.real();
    return;
  }
  at(n1, n2) = value;
  at(-n1, -n2) = std::conj(value);
}

SpectralField SpectralField::resized(int new_cutoff) const {
  SpectralField out(new_cutoff);
  const int m = std::min(cutoff_, new_cutoff);
  for (int n1 = -m; n1 <= m; ++n1) {
    for (int n2 = -m; n2 <= m; ++n2) out.at(n1, n2) = at(n1, n2);
  }
  return out;
}

double SpectralField::hermitian_defect() const {
  double worst = 0.0;
  for (int n1 = -cutoff_; n1 <= cutoff_; ++n1) {
    for (int n2 = -cutoff_; n2 <= cutoff_; ++n2) {
      worst = std::max(worst, std::abs(at(-n1, -n2) - std::conj(at(n1, n2))));
    }
  }
  return worst;
}

void SpectralField::symmetrize() {
  for (int n1 = -cutoff_; n1 <= cutoff_; ++n1) {
    for (int n2 = -cutoff_; n2 <= cutoff_; ++n2) {
      if (!ModeIndex{n1, n2}.in_half_lattice()) continue;
      const Complex c = 0.5 * (at(n1, n2) + std::conj(at(-n1, -n2)));
      set_pair(n1, n2, c);
    }
  }
}

bool SpectralField::all_finite() const {
  return std::all_of(coeff_.begin(), coeff_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

bool SpectralField::is_zero() const {
  return std::all_of(coeff_.begin(), coeff_.end(), [](const Complex& c) { return c == Complex{}; });
}

SpectralField& SpectralField::operator+=(const SpectralField& other) { return add_scaled(other, 1.0); }
SpectralField& SpectralField::operator-=(const SpectralField& other) { return add_scaled(other, -1.0); }

SpectralField& SpectralField::operator*=(double scale) {
  for (auto& c : coeff_) c *= scale;
  return *this;
}

SpectralField& SpectralField::add_scaled(const SpectralField& other, double scale) {
  if (other.cutoff_ > cutoff_) {
    throw ShapeError("SpectralField::add_scaled: operand has larger cutoff");
  }
  if (other.cutoff_ == cutoff_) {
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += scale * other.coeff_[i];
    return *this;
  }
  const int m = other.cutoff_;
  for (int n1 = -m; n1 <= m; ++n1) {
    for (int n2 = -m; n2 <= m; ++n2) at(n1, n2) += scale * other.at(n1, n2);
  }
  return *this;
}

// ---------------------------------------------------------------------------
// PhaseState

PhaseState::PhaseState(SpectralField u_in, SpectralField v_in) : u(std::move(u_in)), v(std::move(v_in)) {
  if (u.cutoff() != v.cutoff()) throw ShapeError("PhaseState: components have different cutoffs");
}

PhaseState& PhaseState::operator+=(const PhaseState& o) {
  u += o.u;
  v += o.v;
  return *this;
}

PhaseState& PhaseState::operator-=(const PhaseState& o) {
  u -= o.u;
  v -= o.v;
  return *this;
}

PhaseState& PhaseState::operator*=(double k) {
  u *= k;
  v *= k;
  return *this;
}

PhaseState& PhaseState::add_scaled(const PhaseState& o, double k) {
  u.add_scaled(o.u, k);
  v.add_scaled(o.v, k);
  return *this;
}

// ---------------------------------------------------------------------------
// Multipliers

RadialMultiplier RadialMultiplier::identity() {
  return {"1", [](double) { return 1.0; }};
}

RadialMultiplier RadialMultiplier::bracket_power(double alpha) {
  return {"<nabla>^" + std::to_string(alpha),
          [alpha](double n2) { return std::pow(bracket_sq(n2), 0.5 * alpha); }};
}

RadialMultiplier RadialMultiplier::shifted_power(double beta) {
  return {"[[nabla]]^" + std::to_string(beta),
          [beta](double n2) { return std::pow(shifted_bracket_sq(n2), 0.5 * beta); }};
}

RadialMultiplier RadialMultiplier::energy_weight(double s) {
  return {"m(nabla),s=" + std::to_string(s), [s](double n2) {
            if (n2 == 0.0) return 0.0;
            return std::sqrt(std::pow(bracket_sq(n2), s) - 1.0);
          }};
}

RadialMultiplier RadialMultiplier::operator*(const RadialMultiplier& other) const {
  return {name_ + "*" + other.name_,
          [a = symbol_, b = other.symbol_](double n2) { return a(n2) * b(n2); }};
}

SpectralField apply_multiplier(const SpectralField& f, const RadialMultiplier& m) {
  const int cut = f.cutoff();
  // One symbol evaluation per distinct |n|^2.
  std::vector<double> symbol(static_cast<std::size_t>(2 * cut * cut + 1),
                             std::numeric_limits<double>::quiet_NaN());
  std::vector<bool> known(symbol.size(), false);
  SpectralField out(cut);
  for (int n1 = -cut; n1 <= cut; ++n1) {
    for (int n2 = -cut; n2 <= cut; ++n2) {
      const Complex c = f.at(n1, n2);
      if (c == Complex{}) continue;
      const int r2 = n1 * n1 + n2 * n2;
      if (!known[r2]) {
        symbol[r2] = m(static_cast<double>(r2));
        known[r2] = true;
      }
      if (!std::isfinite(symbol[r2])) {
        throw InvalidMultiplierError("multiplier " + m.name() + " is not finite at mode (" +
                                     std::to_string(n1) + "," + std::to_string(n2) + ")");
      }
      out.at(n1, n2) = symbol[r2] * c;
    }
  }
  return out;
}

PhaseState apply_multiplier(const PhaseState& x, const RadialMultiplier& mu, const RadialMultiplier& mv) {
  return {apply_multiplier(x.u, mu), apply_multiplier(x.v, mv)};
}

SpectralField project_square(const SpectralField& f, int M) {
  SpectralField out(f.cutoff());
  const int m = std::min(M, f.cutoff());
  for (int n1 = -m; n1 <= m; ++n1) {
    for (int n2 = -m; n2 <= m; ++n2) out.at(n1, n2) = f.at(n1, n2);
  }
  return out;
}

PhaseState project_square(const PhaseState& x, int M) {
  return {project_square(x.u, M), project_square(x.v, M)};
}

SpectralField project_above(const SpectralField& f, int M) {
  return f - project_square(f, M);
}

PhaseState project_above(const PhaseState& x, int M) {
  return {project_above(x.u, M), project_above(x.v, M)};
}

// ---------------------------------------------------------------------------
// Transforms and products

int fft_length_at_least(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

int dealiasing_length(int sum_of_cutoffs, int out_cutoff) {
  return fft_length_at_least(std::max(sum_of_cutoffs + out_cutoff + 1, 2 * out_cutoff + 1));
}

std::vector<double> synthesize(const SpectralField& f, int grid_len) {
  require_grid(f.cutoff(), grid_len, "synthesize");
  Workspace& ws = workspace(grid_len);
  synthesize_into(f, ws);
  const std::size_t n = static_cast<std::size_t>(grid_len) * grid_len;
  return {ws.real.get(), ws.real.get() + n};
}

SpectralField analyze(std::span<const double> grid, int grid_len, int out_cutoff) {
  require_grid(out_cutoff, grid_len, "analyze");
  const std::size_t n = static_cast<std::size_t>(grid_len) * grid_len;
  if (grid.size() != n) throw ShapeError("analyze: grid size does not match grid length");
  Workspace& ws = workspace(grid_len);
  std::copy(grid.begin(), grid.end(), ws.real.get());
  return analyze_from(ws, out_cutoff);
}

SpectralField product(std::span<const FieldRef> factors, int out_cutoff) {
  if (factors.empty()) return SpectralField::constant(out_cutoff, 1.0);
  int sum = 0;
  for (const auto& f : factors) sum += f.get().cutoff();
  const int len = dealiasing_length(sum, out_cutoff);
  const std::size_t n = static_cast<std::size_t>(len) * len;

  // Synthesize each distinct factor once; repeated factors (u^3) are raised
  // to their multiplicity pointwise.
  std::vector<std::pair<const SpectralField*, int>> distinct;
  for (const auto& f : factors) {
    auto it = std::find_if(distinct.begin(), distinct.end(),
                           [&](const auto& d) { return d.first == &f.get(); });
    if (it == distinct.end()) {
      distinct.emplace_back(&f.get(), 1);
    } else {
      ++it->second;
    }
  }
  Workspace& ws = workspace(len);
  std::vector<double> acc;
  for (const auto& [field, mult] : distinct) {
    synthesize_into(*field, ws);
    const double* g = ws.real.get();
    if (acc.empty()) {
      acc.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        double p = g[i];
        for (int k = 1; k < mult; ++k) p *= g[i];
        acc[i] = p;
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        double p = g[i];
        for (int k = 1; k < mult; ++k) p *= g[i];
        acc[i] *= p;
      }
    }
  }
  std::copy(acc.begin(), acc.end(), ws.real.get());
  return analyze_from(ws, out_cutoff);
}

SpectralField product(std::initializer_list<FieldRef> factors, int out_cutoff) {
  return product(std::span<const FieldRef>(factors.begin(), factors.size()), out_cutoff);
}

double mean_of_product(std::initializer_list<FieldRef> factors) {
  return product(factors, 0).at(0, 0).real();
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g, const SpectralField& h,
                                int out_cutoff) {
  const int cut = f.cutoff();
  if (g.cutoff() != cut || h.cutoff() != cut) {
    throw ShapeError("dealiased_product: factors have mismatched cutoffs");
  }
  if (out_cutoff < 0 || out_cutoff > 3 * cut) {
    throw ShapeError("dealiased_product: out_cutoff must lie in [0, 3N]");
  }
  return product({f, g, h}, out_cutoff);
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  const int m = std::min(f.cutoff(), g.cutoff());
  double sum = 0.0;
  for (int n1 = -m; n1 <= m; ++n1) {
    for (int n2 = -m; n2 <= m; ++n2) {
      const Complex a = f.at(n1, n2);
      const Complex b = g.at(n1, n2);
      sum += a.real() * b.real() + a.imag() * b.imag();
    }
  }
  return sum;
}

double inner_product(const PhaseState& x, const PhaseState& y) {
  return inner_product(x.u, y.u) + inner_product(x.v, y.v);
}

double sobolev_norm(const SpectralField& f, double alpha) {
  const int cut = f.cutoff();
  double sum = 0.0;
  for (int n1 = -cut; n1 <= cut; ++n1) {
    for (int n2 = -cut; n2 <= cut; ++n2) {
      const double a2 = std::norm(f.at(n1, n2));
      if (a2 == 0.0) continue;
      sum += std::pow(bracket_sq(n1 * n1 + n2 * n2), alpha) * a2;
    }
  }
  return std::sqrt(sum);
}

double lp_norm(const SpectralField& f, double p, int grid_len) {
  if (!(p >= 1.0)) throw ValidationError("lp_norm: p must be >= 1");
  const int minimum = 2 * f.cutoff() + 2;
  if (grid_len == 0) grid_len = minimum;
  if (grid_len < minimum) throw ValidationError("lp_norm: grid length below 2N + 2");
  const std::vector<double> g = synthesize(f, grid_len);
  if (std::isinf(p)) {
    double worst = 0.0;
    for (double x : g) worst = std::max(worst, std::abs(x));
    return worst;
  }
  double sum = 0.0;
  for (double x : g) sum += std::pow(std::abs(x), p);
  return std::pow(sum / static_cast<double>(g.size()), 1.0 / p);
}

}  // namespace sdnlw
