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

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "commands.hpp"
#include "sdnlw/besov.hpp"
#include "sdnlw/dynamics.hpp"
#include "sdnlw/error.hpp"
#include "sdnlw/functionals.hpp"
#include "sdnlw/gaussian.hpp"
#include "sdnlw/lab.hpp"
#include "sdnlw/rng.hpp"
#include "sdnlw/snapshot.hpp"

namespace sdnlw::cli {
namespace {

struct Check {
  std::string name;
  bool quick;
  std::function<double()> measure;  // returns the error
  double tolerance;
};

PhaseState random_state(double s, int N, std::uint64_t i) {
  return sample_mu({s, N}, RngStream(20260, i, StreamPurpose::lab));
}

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double worst = 0.0;
  const int n = std::max(a.cutoff(), b.cutoff());
  const SpectralField x = a.resized(n), y = b.resized(n);
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x.coefficients()[i] - y.coefficients()[i]));
  return worst;
}

double mat_diff(const Mat2& a, const Mat2& b) {
  return std::max({std::abs(a.a - b.a), std::abs(a.b - b.b), std::abs(a.c - b.c), std::abs(a.d - b.d)});
}

std::vector<Check> checks() {
  std::vector<Check> out;
  out.push_back({"philox_known_answer", true, [] {
                   const PhiloxCounter c = philox4x32_10({0, 0, 0, 0}, {0, 0});
                   return c == PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u} ? 0.0 : 1.0;
                 }, 0.0});
  out.push_back({"propagator_identity_at_zero", true, [] {
                   double worst = 0.0;
                   for (int k = 0; k <= 50; ++k) {
                     worst = std::max(worst, mat_diff(damped_propagator(k, 0.0), Mat2::identity()));
                   }
                   return worst;
                 }, 0.0});
  out.push_back({"propagator_semigroup", true, [] {
                   double worst = 0.0;
                   for (int k : {0, 1, 5, 50, 800}) {
                     const Mat2 ab = damped_propagator(k, 0.3) * damped_propagator(k, 0.45);
                     worst = std::max(worst, mat_diff(ab, damped_propagator(k, 0.75)));
                   }
                   return worst;
                 }, 1e-12});
  out.push_back({"sigma_small_cutoffs", true, [] {
                   return std::max(std::abs(sigma(0) - 1.0), std::abs(sigma(1) - 13.0 / 3.0));
                 }, 1e-15});
  out.push_back({"hamiltonian_self_bracket", true, [] {
                   double worst = 0.0;
                   for (std::uint64_t i = 0; i < 5; ++i) {
                     const PhaseState x = random_state(1.0, 8, i);
                     const PhaseState g = grad_hamiltonian(x, 8);
                     worst = std::max(worst, std::abs(poisson_bracket(g, g)));
                   }
                   return worst;
                 }, 1e-12});
  out.push_back({"energy_two_routes", true, [] {
                   for (std::uint64_t i = 0; i < 5; ++i) energy(random_state(1.0, 8, i), 1.0, 8);
                   return 0.0;
                 }, 0.0});
  out.push_back({"paraproduct_sum", true, [] {
                   const PhaseState x = random_state(0.5, 12, 7), y = random_state(0.5, 12, 8);
                   SpectralField sum = paraproduct(x.u, y.u, ParaproductKind::lo_hi);
                   sum += paraproduct(x.u, y.u, ParaproductKind::resonant);
                   sum += paraproduct(x.u, y.u, ParaproductKind::hi_lo);
                   return max_abs_diff(sum, product({x.u, y.u}, 24));
                 }, 1e-10});
  out.push_back({"snapshot_round_trip", true, [] {
                   const PhaseState x = random_state(1.0, 6, 3);
                   std::stringstream buf;
                   write_state(buf, x, 1.0);
                   const PhaseState y = read_state(buf);
                   return std::max(max_abs_diff(x.u, y.u), max_abs_diff(x.v, y.v));
                 }, 0.0});
  out.push_back({"sigma_log_slope", false, [] {
                   std::vector<double> x, y;
                   for (int N = 16; N <= 512; N *= 2) {
                     x.push_back(std::log(N));
                     y.push_back(sigma(N));
                   }
                   return std::abs(regression_slope(x, y) / (2.0 * std::numbers::pi) - 1.0);
                 }, 0.02});
  out.push_back({"energy_gradient", false, [] {
                   const double s = 1.0, h = 1e-5;
                   const int N = 8;
                   double worst = 0.0;
                   for (std::uint64_t i = 0; i < 10; ++i) {
                     const PhaseState x = random_state(s, N, 100 + i);
                     const PhaseState dir = random_state(s, N, 200 + i);
                     PhaseState xp = x, xm = x;
                     xp.add_scaled(dir, h);
                     xm.add_scaled(dir, -h);
                     const auto E = [&](const PhaseState& z) { return energy(z, s, N).E; };
                     const double fd = (E(xp) - E(xm)) / (2.0 * h);
                     const double an = inner_product(grad_energy(x, s, N), dir);
                     worst = std::max(worst, std::abs(fd - an) / std::max(std::abs(an), 1e-300));
                   }
                   return worst;
                 }, 1e-6});
  out.push_back({"bracket_against_flow", false, [] {
                   double worst = 0.0;
                   for (const auto& t : bracket_flow_check(1.0, 8, 1e-4, 5, 11)) worst = std::max(worst, t.rel_error);
                   return worst;
                 }, 1e-4});
  return out;
}

}  // namespace

int run_selftest(bool quick, OutputDir& dir, std::ostream& out) {
  int failures = 0;
  std::vector<Json> lines;
  for (const auto& c : checks()) {
    if (quick && !c.quick) continue;
    double err = 0.0;
    std::string note;
    try {
      err = c.measure();
    } catch (const Error& e) {
      err = std::numeric_limits<double>::infinity();
      note = e.what();
    }
    const bool pass = std::isfinite(err) && err <= c.tolerance;
    if (!pass) ++failures;
    out << (pass ? "PASS " : "FAIL ") << c.name << "  error " << format_real(err) << " (tolerance "
        << format_real(c.tolerance) << ")" << (note.empty() ? "" : "  " + note) << "\n";
    Json j;
    j["check"] = c.name;
    j["pass"] = pass;
    j["error"] = std::isfinite(err) ? Json(err) : Json(nullptr);
    j["tolerance"] = c.tolerance;
    lines.push_back(j);
  }
  dir.write_jsonl("selftest.jsonl", lines);
  out << (failures == 0 ? "selftest passed" : std::to_string(failures) + " check(s) failed") << "\n";
  return failures;
}

}  // namespace sdnlw::cli
