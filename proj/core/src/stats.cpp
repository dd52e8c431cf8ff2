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

#include "sdnlw/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "sdnlw/error.hpp"

namespace sdnlw {

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 16) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

MeanStderr mean_stderr(std::span<const double> x) {
  MeanStderr r;
  r.count = x.size();
  if (x.empty()) return r;
  r.mean = pairwise_sum(x) / static_cast<double>(x.size());
  if (x.size() > 1) {
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - r.mean) * (x[i] - r.mean);
    const double var = pairwise_sum(sq) / static_cast<double>(x.size() - 1);
    r.stderr_ = std::sqrt(var / static_cast<double>(x.size()));
  }
  return r;
}

Weights normalize_log_weights(std::span<const double> log_w) {
  if (log_w.empty()) throw DegenerateWeightsError("no importance weights");
  double top = -std::numeric_limits<double>::infinity();
  for (double l : log_w) {
    if (std::isnan(l) || l == std::numeric_limits<double>::infinity()) {
      throw DegenerateWeightsError("non-finite log weight");
    }
    top = std::max(top, l);
  }
  if (!std::isfinite(top)) throw DegenerateWeightsError("all importance weights vanish");
  Weights out;
  out.w.resize(log_w.size());
  for (std::size_t i = 0; i < log_w.size(); ++i) out.w[i] = std::exp(log_w[i] - top);
  const double total = pairwise_sum(out.w);
  for (double& w : out.w) w /= total;
  std::vector<double> sq(out.w.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = out.w[i] * out.w[i];
  out.ess = 1.0 / pairwise_sum(sq);
  out.log_sum = top + std::log(total);
  return out;
}

MeanStderr weighted_mean(std::span<const double> w, std::span<const double> f) {
  if (w.size() != f.size()) throw ShapeError("weighted_mean: size mismatch");
  MeanStderr r;
  r.count = f.size();
  if (f.empty()) return r;
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) terms[i] = w[i] * f[i];
  r.mean = pairwise_sum(terms);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = w[i] * (f[i] - r.mean);
    terms[i] = d * d;
  }
  r.stderr_ = std::sqrt(pairwise_sum(terms));
  return r;
}

double regression_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("regression_slope: need >= 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

double ks_distance(std::span<const double> a, std::span<const double> wa, std::span<const double> b,
                   std::span<const double> wb) {
  auto sorted = [](std::span<const double> x, std::span<const double> w) {
    std::vector<std::pair<double, double>> v(x.size());
    const double uniform = 1.0 / static_cast<double>(x.size());
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      v[i] = {x[i], w.empty() ? uniform : w[i]};
      total += v[i].second;
    }
    for (auto& p : v) p.second /= total;
    std::sort(v.begin(), v.end());
    return v;
  };
  if (a.empty() || b.empty()) throw ValidationError("ks_distance: empty sample");
  const auto sa = sorted(a, wa);
  const auto sb = sorted(b, wb);
  double fa = 0.0, fb = 0.0, worst = 0.0;
  std::size_t i = 0, j = 0;
  while (i < sa.size() || j < sb.size()) {
    const double x = (j == sb.size() || (i < sa.size() && sa[i].first <= sb[j].first)) ? sa[i].first
                                                                                        : sb[j].first;
    while (i < sa.size() && sa[i].first == x) fa += sa[i++].second;
    while (j < sb.size() && sb[j].first == x) fb += sb[j++].second;
    worst = std::max(worst, std::abs(fa - fb));
  }
  return worst;
}

double ks_critical(double alpha, double n, double m) {
  const double c = std::sqrt(-0.5 * std::log(0.5 * alpha));
  return c * std::sqrt((n + m) / (n * m));
}

double normal_two_sided_quantile(double alpha) {
  return boost::math::quantile(boost::math::complement(boost::math::normal(), 0.5 * alpha));
}

double quantile(std::vector<double> x, double q) {
  if (x.empty()) throw ValidationError("quantile: empty sample");
  std::sort(x.begin(), x.end());
  const double pos = q * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return x[lo] + frac * (x[hi] - x[lo]);
}

void parallel_for(std::uint64_t count, int threads, const std::function<void(std::uint64_t)>& body) {
  if (count == 0) return;
  const auto hw = static_cast<std::uint64_t>(std::max(1, threads));
  const std::uint64_t workers = std::min(hw, count);
  constexpr std::uint64_t kChunk = 16;
  std::atomic<std::uint64_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::uint64_t first_index = std::numeric_limits<std::uint64_t>::max();

  auto worker = [&] {
    for (;;) {
      const std::uint64_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const std::uint64_t end = std::min(count, begin + kChunk);
      for (std::uint64_t i = begin; i < end; ++i) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(err_mutex);
          if (i < first_index) {
            first_index = i;
            first_error = std::current_exception();
          }
        }
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sdnlw
