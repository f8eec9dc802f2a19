// Copyright 2026 The knng Authors
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

#ifndef KNNG_HARNESS_HPP_
#define KNNG_HARNESS_HPP_

// Seeded Monte Carlo experiment runner.  Every trial derives its own seed
// from (master seed, sweep index, trial index), so results are identical
// across reruns and across any worker count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "knng/enumeration.hpp"
#include "knng/estimators.hpp"
#include "knng/graph.hpp"
#include "knng/rng.hpp"
#include "knng/sampler.hpp"
#include "knng/weight_model.hpp"

namespace knng {

struct ExperimentConfig {
  int n = 0;
  int k = 0;
  // One of gaussian, poisson, bernoulli, smallworld.
  std::string model;
  // One of mle, greedy, threshold, spectral.
  std::string estimator;
  // Sweep points: (value, second).  The second component carries the noise
  // parameter for two-parameter families and is NaN for single sweeps.
  std::vector<std::pair<double, double>> sweep;
  // Fixed Gaussian noise mean shared by every sweep point.
  double noise = 0.0;
  int trials = 0;
  uint64_t master_seed = 0;
  std::string out;  // optional summary CSV path

  void validate() const {
    if (n < 1 || k < 1) throw std::invalid_argument("config: bad n or k");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (sweep.empty()) throw std::invalid_argument("config: sweep is empty");
    if (model != "gaussian" && model != "poisson" && model != "bernoulli" &&
        model != "smallworld")
      throw std::invalid_argument("config: unknown model " + model);
    if (estimator != "mle" && estimator != "greedy" &&
        estimator != "threshold" && estimator != "spectral")
      throw std::invalid_argument("config: unknown estimator " + estimator);
    if (estimator == "threshold" && (model != "gaussian" || noise != 0.0))
      throw std::invalid_argument(
          "config: threshold needs the gaussian model with zero noise");
    if (estimator == "greedy" && model != "smallworld" &&
        model != "bernoulli")
      throw std::invalid_argument(
          "config: greedy needs binary weights (smallworld or bernoulli)");
    if (estimator == "mle" && n > 11)
      throw std::invalid_argument("config: mle is exhaustive, needs n <= 11");
    for (const auto& [value, second] : sweep) {
      const bool pair_family = model == "poisson" || model == "bernoulli";
      if (pair_family && std::isnan(second))
        throw std::invalid_argument(
            "config: " + model + " sweep entries need [signal, noise] pairs");
      (void)value;
    }
  }

  double sweep_value(std::size_t i) const { return sweep.at(i).first; }

  ModelPair model_at(std::size_t i) const {
    const auto& [value, second] = sweep.at(i);
    if (model == "gaussian") return ModelPair::gaussian(value, noise);
    if (model == "poisson") return ModelPair::poisson(value, second);
    if (model == "bernoulli") return ModelPair::bernoulli(value, second);
    return smallworld_model({n, k, value});
  }
};

struct TrialRecord {
  std::size_t sweep_index = 0;
  double sweep_value = 0;
  int trial = 0;
  uint64_t seed = 0;
  std::string status;
  bool exact_match = false;
  std::size_t hamming = 0;
  double misclassified_fraction = 0;
  double wall_time_ms = 0;
};

struct SweepSummary {
  double sweep_value = 0;
  int trials = 0;
  double exact_rate = 0;
  double exact_ci_lo = 0;
  double exact_ci_hi = 0;
  double mean_misclassified_fraction = 0;
  double mean_wall_time_ms = 0;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;  // sorted by (sweep index, trial)
  std::vector<SweepSummary> summary;
};

// 95% Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(int successes, int trials) {
  if (trials < 1) throw std::invalid_argument("wilson_interval: no trials");
  constexpr double z = 1.959963984540054;
  const double nt = trials;
  const double phat = successes / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (phat + z2 / (2 * nt)) / denom;
  const double half =
      z * std::sqrt(phat * (1 - phat) / nt + z2 / (4 * nt * nt)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace detail {

inline RecoveryResult run_estimator(const ExperimentConfig& cfg,
                                    const Instance& inst) {
  if (cfg.estimator == "mle") return mle_bruteforce(inst);
  if (cfg.estimator == "greedy") return greedy_smallworld(inst, 0);
  if (cfg.estimator == "threshold") return threshold_estimator(inst);
  return spectral_ordering(inst);
}

}  // namespace detail

inline TrialRecord run_trial(const ExperimentConfig& cfg,
                             std::size_t sweep_index, int trial) {
  TrialRecord rec;
  rec.sweep_index = sweep_index;
  rec.sweep_value = cfg.sweep_value(sweep_index);
  rec.trial = trial;
  rec.seed = mix64(cfg.master_seed, static_cast<uint64_t>(sweep_index),
                   static_cast<uint64_t>(trial));
  const Instance inst = sample_instance(cfg.n, cfg.k, cfg.model_at(sweep_index),
                                        std::nullopt, rec.seed);
  const auto t0 = std::chrono::steady_clock::now();
  const RecoveryResult res = detail::run_estimator(cfg, inst);
  const auto t1 = std::chrono::steady_clock::now();
  rec.wall_time_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();

  const std::size_t kn = static_cast<std::size_t>(cfg.n) * cfg.k;
  rec.status = recovery_status_name(res.status);
  // An errored trial scores like an empty estimate: every true edge missed.
  rec.hamming = res.ok() ? (*res.estimate ^ inst.x_star.edges).count() : kn;
  rec.exact_match = res.ok() && rec.hamming == 0;
  rec.misclassified_fraction =
      static_cast<double>(rec.hamming) / static_cast<double>(2 * kn);
  return rec;
}

inline std::vector<SweepSummary> summarize(
    const ExperimentConfig& cfg, const std::vector<TrialRecord>& records) {
  std::vector<SweepSummary> out;
  for (std::size_t s = 0; s < cfg.sweep.size(); ++s) {
    SweepSummary sum;
    sum.sweep_value = cfg.sweep_value(s);
    int successes = 0;
    double frac = 0, wall = 0;
    for (const TrialRecord& rec : records) {
      if (rec.sweep_index != s) continue;
      ++sum.trials;
      successes += rec.exact_match ? 1 : 0;
      frac += rec.misclassified_fraction;
      wall += rec.wall_time_ms;
    }
    if (sum.trials == 0) continue;  // empty sweep point: row omitted
    sum.exact_rate = static_cast<double>(successes) / sum.trials;
    const auto [lo, hi] = wilson_interval(successes, sum.trials);
    sum.exact_ci_lo = lo;
    sum.exact_ci_hi = hi;
    sum.mean_misclassified_fraction = frac / sum.trials;
    sum.mean_wall_time_ms = wall / sum.trials;
    out.push_back(sum);
  }
  return out;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       int threads = 1) {
  cfg.validate();
  if (threads < 1) threads = 1;
  const std::size_t total = cfg.sweep.size() * cfg.trials;
  std::vector<TrialRecord> records(total);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      const std::size_t sweep_index = job / cfg.trials;
      const int trial = static_cast<int>(job % cfg.trials);
      records[job] = run_trial(cfg, sweep_index, trial);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  ExperimentResult result;
  result.records = std::move(records);
  result.summary = summarize(cfg, result.records);
  return result;
}

namespace detail {

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace detail

inline constexpr const char* kSummaryCsvHeader =
    "sweep_value,trials,exact_rate,exact_ci_lo,exact_ci_hi,"
    "mean_misclassified_fraction,mean_wall_time_ms";

inline void write_summary_csv(std::ostream& out,
                              const std::vector<SweepSummary>& summary) {
  out << kSummaryCsvHeader << "\n";
  for (const SweepSummary& s : summary) {
    out << detail::format_double(s.sweep_value) << "," << s.trials << ","
        << detail::format_double(s.exact_rate) << ","
        << detail::format_double(s.exact_ci_lo) << ","
        << detail::format_double(s.exact_ci_hi) << ","
        << detail::format_double(s.mean_misclassified_fraction) << ","
        << detail::format_double(s.mean_wall_time_ms) << "\n";
  }
}

inline constexpr const char* kTrialCsvHeader =
    "sweep_value,trial,seed,status,exact_match,hamming,"
    "misclassified_fraction,wall_time_ms";

inline void write_trial_csv(std::ostream& out,
                            const std::vector<TrialRecord>& records) {
  out << kTrialCsvHeader << "\n";
  for (const TrialRecord& r : records) {
    out << detail::format_double(r.sweep_value) << "," << r.trial << ","
        << r.seed << "," << r.status << "," << (r.exact_match ? 1 : 0) << ","
        << r.hamming << "," << detail::format_double(r.misclassified_fraction)
        << "," << detail::format_double(r.wall_time_ms) << "\n";
  }
}

}  // namespace knng

#endif  // KNNG_HARNESS_HPP_
