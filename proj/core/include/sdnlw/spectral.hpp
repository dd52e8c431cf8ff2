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

#ifndef SDNLW_SPECTRAL_HPP
#define SDNLW_SPECTRAL_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace sdnlw {

using Complex = std::complex<double>;

/// Lattice point n = (n1, n2) of Z^2.
struct ModeIndex {
  int n1 = 0;
  int n2 = 0;

  int norm_sq() const { return n1 * n1 + n2 * n2; }
  int sup_norm() const;
  /// Member of the half lattice (Z x Z_+) u (Z_+ x {0}) u {0}; every
  /// nonzero mode has exactly one of n, -n in it.
  bool in_half_lattice() const {
    return n2 > 0 || (n2 == 0 && n1 >= 0);
  }
  ModeIndex operator-() const { return {-n1, -n2}; }
  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

/// <n>^2 = 1 + |n|^2.
inline double bracket_sq(double norm_sq) { return 1.0 + norm_sq; }
/// [[n]]^2 = 3/4 + |n|^2, the frequency of the damped oscillator at mode n.
inline double shifted_bracket_sq(double norm_sq) { return 0.75 + norm_sq; }

/// Real field on the normalized torus stored as its Fourier coefficients
/// c(n), |n|_inf <= N, in the basis e^{i n.x}.  The full (2N+1)^2 grid is
/// kept, with c(-n) = conj(c(n)); row-major over n1 = -N..N, then n2.
class SpectralField {
 public:
  SpectralField() : SpectralField(0) {}
  explicit SpectralField(int cutoff);

  static SpectralField constant(int cutoff, double value);
  /// cos(k.x) with the given cutoff.
  static SpectralField cosine(int cutoff, ModeIndex k, double amplitude = 1.0);

  int cutoff() const { return cutoff_; }
  int side() const { return 2 * cutoff_ + 1; }
  std::size_t size() const { return coeff_.size(); }

  std::size_t index(int n1, int n2) const {
    return static_cast<std::size_t>(n1 + cutoff_) * static_cast<std::size_t>(side()) +
           static_cast<std::size_t>(n2 + cutoff_);
  }
  ModeIndex mode_at(std::size_t index) const;
  bool contains(int n1, int n2) const;

  Complex& at(int n1, int n2) { return coeff_[index(n1, n2)]; }
  const Complex& at(int n1, int n2) const { return coeff_[index(n1, n2)]; }
  /// Coefficient or zero when (n1, n2) lies outside the stored square.
  Complex get(int n1, int n2) const;
  /// Sets c(n) and c(-n) = conj(value) together.
  void set_pair(int n1, int n2, Complex value);

  std::span<Complex> coefficients() { return coeff_; }
  std::span<const Complex> coefficients() const { return coeff_; }

  /// Same field stored at another cutoff (zero padding or truncation).
  SpectralField resized(int new_cutoff) const;

  /// max_n |c(-n) - conj(c(n))|.
  double hermitian_defect() const;
  bool is_hermitian(double tol = 0.0) const { return hermitian_defect() <= tol; }
  /// Replaces c(n) by (c(n) + conj(c(-n)))/2; c(0) becomes real.
  void symmetrize();
  bool all_finite() const;
  bool is_zero() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale);
  /// this += scale * other (other may have a smaller cutoff).
  SpectralField& add_scaled(const SpectralField& other, double scale);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double k, SpectralField a) { return a *= k; }
  friend SpectralField operator*(SpectralField a, double k) { return a *= k; }

 private:
  int cutoff_;
  std::vector<Complex> coeff_;
};

/// The vector (u, v) = (u, d_t u).
struct PhaseState {
  SpectralField u;
  SpectralField v;

  PhaseState() = default;
  explicit PhaseState(int cutoff) : u(cutoff), v(cutoff) {}
  PhaseState(SpectralField u_in, SpectralField v_in);

  int cutoff() const { return u.cutoff(); }
  PhaseState resized(int new_cutoff) const { return {u.resized(new_cutoff), v.resized(new_cutoff)}; }
  bool all_finite() const { return u.all_finite() && v.all_finite(); }

  PhaseState& operator+=(const PhaseState& o);
  PhaseState& operator-=(const PhaseState& o);
  PhaseState& operator*=(double k);
  PhaseState& add_scaled(const PhaseState& o, double k);
  friend PhaseState operator+(PhaseState a, const PhaseState& b) { return a += b; }
  friend PhaseState operator-(PhaseState a, const PhaseState& b) { return a -= b; }
  friend PhaseState operator*(double k, PhaseState a) { return a *= k; }
};

/// Fourier multiplier with a real symbol depending on |n|^2 only.
class RadialMultiplier {
 public:
  using Symbol = std::function<double(double norm_sq)>;

  RadialMultiplier(std::string name, Symbol symbol)
      : name_(std::move(name)), symbol_(std::move(symbol)) {}

  static RadialMultiplier identity();
  /// <nabla>^alpha.
  static RadialMultiplier bracket_power(double alpha);
  /// [[nabla]]^beta = (3/4 - Laplacian)^{beta/2}.
  static RadialMultiplier shifted_power(double beta);
  /// m(nabla) = (<nabla>^{2s} - 1)^{1/2}; vanishes on the zero mode.
  static RadialMultiplier energy_weight(double s);

  double operator()(double norm_sq) const { return symbol_(norm_sq); }
  const std::string& name() const { return name_; }

  /// Symbol product, i.e. composition of the two operators.
  RadialMultiplier operator*(const RadialMultiplier& other) const;

 private:
  std::string name_;
  Symbol symbol_;
};

/// c(n) -> m(|n|^2) c(n).  Throws InvalidMultiplierError when the symbol is
/// not finite at a mode carrying a nonzero coefficient.
SpectralField apply_multiplier(const SpectralField& f, const RadialMultiplier& m);
PhaseState apply_multiplier(const PhaseState& x, const RadialMultiplier& mu,
                            const RadialMultiplier& mv);

/// Sharp projection onto |n|_inf <= M; keeps the storage cutoff.  M = -1
/// gives the zero field.
SpectralField project_square(const SpectralField& f, int M);
PhaseState project_square(const PhaseState& x, int M);
/// Complement Id - project_square(., M).
SpectralField project_above(const SpectralField& f, int M);
PhaseState project_above(const PhaseState& x, int M);

/// Smallest length >= n whose prime factors are all in {2, 3, 5, 7}.
int fft_length_at_least(int n);

/// Grid length for exact (alias-free) products: sum(cutoffs) + out_cutoff + 1,
/// rounded up to an FFT-friendly length.
int dealiasing_length(int sum_of_cutoffs, int out_cutoff);

/// Values f(x_j) on the L x L grid x_j = 2 pi j / L, row-major in (j1, j2).
/// Requires L >= 2N + 1.
std::vector<double> synthesize(const SpectralField& f, int grid_len);
/// Fourier coefficients |n|_inf <= out_cutoff of the trigonometric
/// interpolant of grid values; exact when the sampled field is band limited
/// to a square of half width < L - out_cutoff.
SpectralField analyze(std::span<const double> grid, int grid_len, int out_cutoff);

using FieldRef = std::reference_wrapper<const SpectralField>;

/// Exact Fourier coefficients, |n|_inf <= out_cutoff, of the pointwise
/// product of the factors (any number, any cutoffs).
SpectralField product(std::initializer_list<FieldRef> factors, int out_cutoff);
SpectralField product(std::span<const FieldRef> factors, int out_cutoff);

/// Integral (normalized measure) of the product of the factors, exact.
double mean_of_product(std::initializer_list<FieldRef> factors);

/// f g h restricted to |n|_inf <= out_cutoff.  All inputs must share one
/// cutoff N and out_cutoff <= 3N (ShapeError otherwise).
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g,
                                const SpectralField& h, int out_cutoff);

/// sum_n c_f(n) conj(c_g(n)), the normalized L^2 pairing.  Modes outside
/// the smaller square contribute nothing.
double inner_product(const SpectralField& f, const SpectralField& g);
/// <u1, u2> + <v1, v2>.
double inner_product(const PhaseState& x, const PhaseState& y);

/// (sum_n <n>^{2 alpha} |c(n)|^2)^{1/2}.
double sobolev_norm(const SpectralField& f, double alpha);

/// Normalized L^p norm on an L x L grid; p = infinity gives the grid max.
/// grid_len = 0 selects 2N + 2.  Throws ValidationError for p < 1 or
/// grid_len < 2N + 2.
double lp_norm(const SpectralField& f, double p, int grid_len = 0);

}  // namespace sdnlw

#endif  // SDNLW_SPECTRAL_HPP
