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

#ifndef SDNLW_STATS_HPP
#define SDNLW_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sdnlw {

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> x);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t count = 0;
};

/// Sample mean and standard error (n - 1 variance).
MeanStderr mean_stderr(std::span<const double> x);

/// Self-normalized importance weights from log weights (log-sum-exp).
struct Weights {
  std::vector<double> w;  // normalized, sums to 1
  double log_sum = 0.0;   // log sum_i exp(log_w_i)
  double ess = 0.0;       // (sum w)^2 / sum w^2
};

Weights normalize_log_weights(std::span<const double> log_w);

/// Weighted mean of f and its delta-method standard error
/// (sum_i w_i^2 (f_i - mean)^2)^{1/2} for normalized w.
MeanStderr weighted_mean(std::span<const double> w, std::span<const double> f);

/// Least-squares slope of y against x.
double regression_slope(std::span<const double> x, std::span<const double> y);

/// Two-sample Kolmogorov-Smirnov distance between weighted samples
/// (weights normalized internally; empty weights mean uniform).
double ks_distance(std::span<const double> a, std::span<const double> wa, std::span<const double> b,
                   std::span<const double> wb);

/// Asymptotic two-sample KS critical value c(alpha) sqrt((n + m) / (n m)).
double ks_critical(double alpha, double n, double m);

/// Two-sided normal quantile: z with P(|Z| > z) = alpha.
double normal_two_sided_quantile(double alpha);

double quantile(std::vector<double> x, double q);

struct EstimatorReport {
  std::string name;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t count = 0;
  double ess = 0.0;
  std::map<std::string, double> metadata;
  std::map<std::string, double> extras;
};

/// Runs body(i) for i in [0, count) on `threads` workers.  Work is handed
/// out in fixed chunks.  Every index runs even after a failure; the
/// exception of the lowest failing index is rethrown at the end, so the
/// reported error does not depend on the thread count.
void parallel_for(std::uint64_t count, int threads, const std::function<void(std::uint64_t)>& body);

}  // namespace sdnlw

#endif  // SDNLW_STATS_HPP
