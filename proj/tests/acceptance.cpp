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

// Release gate: nine numbered checks, one pass/fail line each.  Run with a
// criterion number (1-9) to execute a single check, or with no arguments
// to run the full set.  Exit code is nonzero when any executed check
// fails.  Every tolerance and budget is pinned here on purpose; a failing
// line is a finding, not a knob to turn.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "knng/enumeration.hpp"
#include "knng/estimators.hpp"
#include "knng/graph.hpp"
#include "knng/harness.hpp"
#include "knng/io.hpp"
#include "knng/jacobi.hpp"
#include "knng/sampler.hpp"
#include "knng/weight_model.hpp"
#include "numeric_oracles.hpp"

namespace knng {
namespace {

// Pinned tolerances.
constexpr double kDivergenceRelTol = 1e-8;
constexpr double kRenyiMgfIdentityTol = 1e-10;
constexpr double kRateSumTol = 1e-6;
constexpr double kEigenvalueTol = 1e-9;
constexpr double kMleHighRate = 0.99;
constexpr double kMleChanceRate = 0.05;
constexpr double kGreedyHighRate = 0.9;
constexpr double kThresholdGoodFraction = 0.05;
constexpr double kThresholdSeparationFactor = 3.0;

// Pinned runtime budgets, seconds.
constexpr double kBudget[10] = {0, 5, 30, 120, 60, 300, 120, 60, 30, 120};

bool rel_close(double expected, double actual, double tol) {
  return std::abs(expected - actual) <=
         tol * std::max(1.0, std::abs(expected));
}

std::vector<ModelPair> randomized_pairs(Family family, int count,
                                        uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ModelPair> out;
  while (static_cast<int>(out.size()) < count) {
    switch (family) {
      case Family::gaussian: {
        const double a = -3 + 6 * unit(rng);
        const double b = -3 + 6 * unit(rng);
        if (std::abs(a - b) < 0.1) continue;
        out.push_back(ModelPair::gaussian(a, b));
        break;
      }
      case Family::poisson: {
        const double a = 0.2 + 19.8 * unit(rng);
        const double b = 0.2 + 19.8 * unit(rng);
        if (std::abs(a - b) < 0.05) continue;
        out.push_back(ModelPair::poisson(a, b));
        break;
      }
      case Family::bernoulli: {
        double p = 0.05 + 0.9 * unit(rng);
        double q = 0.05 + 0.9 * unit(rng);
        if (p < q) std::swap(p, q);
        if (p - q < 0.02) continue;
        out.push_back(ModelPair::bernoulli(p, q));
        break;
      }
    }
  }
  return out;
}

// Criterion 1: closed-form divergences against quadrature/series oracles,
// the half-point identity, and the rate-sum minimum.
bool criterion_1(std::ostringstream& detail) {
  const double lambdas[] = {-0.5, 0.25, 0.5, 0.75, 1.5};
  double worst_rel = 0, worst_identity = 0, worst_rate_sum = 0;
  for (Family family :
       {Family::gaussian, Family::poisson, Family::bernoulli}) {
    const auto pairs =
        randomized_pairs(family, 30, 900 + static_cast<int>(family));
    for (const ModelPair& m : pairs) {
      const double alpha = renyi_half(m);
      struct Check {
        double expected, actual;
      };
      const Check checks[] = {
          {test_oracle::oracle_renyi_half(m), alpha},
          {test_oracle::oracle_kl(m), kl(m)},
      };
      for (const Check& c : checks) {
        const double rel = std::abs(c.expected - c.actual) /
                           std::max(1.0, std::abs(c.expected));
        worst_rel = std::max(worst_rel, rel);
        if (!rel_close(c.expected, c.actual, kDivergenceRelTol)) {
          detail << "divergence mismatch (" << family_name(family)
                 << "): expected " << c.expected << " got " << c.actual;
          return false;
        }
      }
      for (double lam : lambdas) {
        const double expected = test_oracle::oracle_log_mgf_q(m, lam);
        const double actual = log_mgf_q(m, lam);
        worst_rel = std::max(worst_rel,
                             std::abs(expected - actual) /
                                 std::max(1.0, std::abs(expected)));
        if (!rel_close(expected, actual, kDivergenceRelTol)) {
          detail << "log-mgf mismatch (" << family_name(family) << ", lambda "
                 << lam << "): expected " << expected << " got " << actual;
          return false;
        }
      }
      const double identity_gap = std::abs(alpha + 2 * log_mgf_q(m, 0.5)) /
                                  std::max(1.0, std::abs(alpha));
      worst_identity = std::max(worst_identity, identity_gap);
      if (identity_gap > kRenyiMgfIdentityTol) {
        detail << "half-point identity gap " << identity_gap;
        return false;
      }
      const double min_sum = test_oracle::min_rate_sum(m);
      const double rate_gap =
          std::abs(min_sum - alpha) / std::max(1.0, std::abs(alpha));
      worst_rate_sum = std::max(worst_rate_sum, rate_gap);
      if (rate_gap > kRateSumTol) {
        detail << "rate-sum minimum gap " << rate_gap << " ("
               << family_name(family) << ")";
        return false;
      }
    }
  }
  detail << "90 pairs; worst rel err " << worst_rel << ", identity gap "
         << worst_identity << ", rate-sum gap " << worst_rate_sum;
  return true;
}

// Criterion 2: exact enumeration counts and the stratum partition.
bool criterion_2(std::ostringstream& detail) {
  const std::size_t twelve = enumerate_knn_graph_keys(5, 1).size();
  const std::size_t fifteen = enumerate_knn_graph_keys(6, 2).size();
  if (twelve != 12 || fifteen != 15) {
    detail << "counts: got " << twelve << " and " << fifteen;
    return false;
  }
  struct Shape {
    int n, k;
  };
  for (Shape s : {Shape{7, 1}, Shape{8, 2}, Shape{9, 2}}) {
    const auto keys = enumerate_knn_graph_keys(s.n, s.k);
    const KnnGraph x_star =
        knn_from_permutation(Permutation::identity(s.n), s.k);
    const StratificationReport rep = stratify(x_star, keys);
    std::size_t sum = 0;
    for (const auto& [delta, count] : rep.counts) sum += count;
    if (sum != keys.size() || rep.total != keys.size() ||
        rep.counts.at(0) != 1) {
      detail << "partition broken at n=" << s.n << " k=" << s.k;
      return false;
    }
  }
  detail << "counts 12/15 and partitions at (7,1),(8,2),(9,2)";
  return true;
}

// Criterion 3: the full counting-bound suite, exhaustively.
bool criterion_3(std::ostringstream& detail) {
  struct Shape {
    int n, k;
  };
  for (Shape s : {Shape{8, 2}, Shape{9, 2}}) {
    const auto keys = enumerate_knn_graph_keys(s.n, s.k);
    const KnnGraph x_star =
        knn_from_permutation(Permutation::identity(s.n), s.k);
    const StratificationReport strat = stratify(x_star, keys);
    const LemmaReport reports[] = {
        verify_simple_bound(strat),
        verify_nearby_lemma(x_star, keys),
        verify_balance(x_star, keys),
        verify_red_set_bounds(x_star, keys),
    };
    for (const LemmaReport& rep : reports) {
      if (!rep.pass()) {
        detail << rep.lemma << " violated at n=" << s.n << " k=" << s.k
               << ": " << rep.violations.front();
        return false;
      }
    }
    if (strat.counts.count(1) != 0) {
      detail << "stratum 1 nonempty at n=" << s.n;
      return false;
    }
    if (strat.counts.at(2) < static_cast<std::size_t>(s.n)) {
      detail << "stratum 2 too small at n=" << s.n;
      return false;
    }
  }
  detail << "all bounds hold exhaustively at (8,2) and (9,2)";
  return true;
}

// Criterion 4: exhaustive search equals an independent re-scoring oracle.
bool criterion_4(std::ostringstream& detail) {
  const std::vector<EdgeSet> keys = enumerate_knn_graph_keys(8, 2);
  const std::vector<ModelPair> models = {
      ModelPair::gaussian(1.2, 0.3),
      ModelPair::poisson(6.0, 2.0),
      ModelPair::bernoulli(0.8, 0.25),
  };
  for (const ModelPair& m : models) {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      const Instance inst =
          sample_instance(8, 2, m, std::nullopt, 5000 + seed);
      const RecoveryResult res = mle_bruteforce(inst);

      const EdgeSet* best = nullptr;
      if (m.family() == Family::bernoulli) {
        std::size_t best_m = 0;
        for (const EdgeSet& key : keys) {
          std::size_t matches = 0;
          key.for_each_bit([&](std::size_t e) {
            if (inst.weights.at_edge(e) == 1.0) ++matches;
          });
          if (best == nullptr || matches > best_m) {
            best = &key;
            best_m = matches;
          }
        }
      } else {
        double best_score = 0;
        for (const EdgeSet& key : keys) {
          const double s = llr_inner_product(m, inst.weights, key);
          if (best == nullptr || s > best_score) {
            best = &key;
            best_score = s;
          }
        }
      }
      if (!(*res.estimate == *best)) {
        detail << "oracle argmax mismatch (" << family_name(m.family())
               << ", seed " << seed << ")";
        return false;
      }
      // Weight mass and log likelihood ratio rank candidates identically.
      const EdgeSet* mass_best = nullptr;
      double mass = 0;
      for (const EdgeSet& key : keys) {
        const double s = weight_inner_product(inst.weights, key);
        if (mass_best == nullptr || s > mass) {
          mass_best = &key;
          mass = s;
        }
      }
      if (!(*mass_best == *res.estimate)) {
        detail << "weight-mass argmax diverges ("
               << family_name(m.family()) << ", seed " << seed << ")";
        return false;
      }
    }
  }
  detail << "60 seeded instances agree with the re-scoring oracle";
  return true;
}

// Criterion 5: exhaustive-search phase behavior across the signal sweep.
bool criterion_5(std::ostringstream& detail) {
  ExperimentConfig cfg;
  cfg.n = 8;
  cfg.k = 2;
  cfg.model = "gaussian";
  cfg.estimator = "mle";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  cfg.sweep = {{0, nan}, {1, nan}, {2, nan}, {4, nan}, {10, nan}};
  cfg.trials = 100;
  cfg.master_seed = 20260816;
  const ExperimentResult res = run_experiment(cfg);
  const auto& sums = res.summary;
  detail << "rates:";
  for (const SweepSummary& s : sums)
    detail << " " << s.sweep_value << "->" << s.exact_rate;
  if (sums.back().exact_rate < kMleHighRate) {
    detail << "; strong-signal rate below " << kMleHighRate;
    return false;
  }
  if (sums.front().exact_rate > kMleChanceRate) {
    detail << "; no-signal rate above " << kMleChanceRate;
    return false;
  }
  for (std::size_t i = 0; i + 1 < sums.size(); ++i) {
    const bool decreased = sums[i + 1].exact_rate < sums[i].exact_rate;
    const bool ci_disjoint = sums[i + 1].exact_ci_hi < sums[i].exact_ci_lo;
    if (decreased && ci_disjoint) {
      detail << "; rate drops beyond CI overlap after sweep value "
             << sums[i].sweep_value;
      return false;
    }
  }
  return true;
}

// Criterion 6: greedy recovery across small-world rewiring levels.
bool criterion_6(std::ostringstream& detail) {
  const int n = 2000;
  ExperimentConfig cfg;
  cfg.n = n;
  cfg.k = 2;
  cfg.model = "smallworld";
  cfg.estimator = "greedy";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double eps_above = std::pow(n, -0.6);
  const double eps_below = std::pow(n, -0.3);
  cfg.sweep = {{eps_above, nan}, {eps_below, nan}, {0.0, nan}};
  cfg.trials = 50;
  cfg.master_seed = 606;
  const ExperimentResult res = run_experiment(cfg);
  const SweepSummary& above = res.summary[0];
  const SweepSummary& below = res.summary[1];
  const SweepSummary& clean = res.summary[2];
  detail << "rate " << above.exact_rate << " at eps=n^-0.6, "
         << below.exact_rate << " at eps=n^-0.3, " << clean.exact_rate
         << " at eps=0";
  bool ok = true;
  if (above.exact_rate < kGreedyHighRate) {
    detail << "; sparse-rewiring rate below " << kGreedyHighRate;
    ok = false;
  }
  // Separation: the sparse-regime interval must sit strictly above.
  if (!(above.exact_ci_lo > below.exact_ci_hi)) {
    detail << "; confidence intervals not separated";
    ok = false;
  }
  if (clean.exact_rate != 1.0) {
    detail << "; clean ring not always recovered";
    ok = false;
  }
  return ok;
}

// Criterion 7: thresholding error fractions in the two signal regimes.
bool criterion_7(std::ostringstream& detail) {
  const int n = 10000;
  const double logn = std::log(static_cast<double>(n));
  ExperimentConfig cfg;
  cfg.n = n;
  cfg.k = 1;
  cfg.model = "gaussian";
  cfg.estimator = "threshold";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  cfg.sweep = {{std::sqrt(2.56 * logn), nan}, {std::sqrt(1.0 * logn), nan}};
  cfg.trials = 20;
  cfg.master_seed = 707;
  const ExperimentResult res = run_experiment(cfg);
  const double good = res.summary[0].mean_misclassified_fraction;
  const double weak = res.summary[1].mean_misclassified_fraction;
  detail << "mean misclassified fraction " << good
         << " at signal^2 = 2.56 log n, " << weak << " at 1.0 log n";
  bool ok = true;
  if (good > kThresholdGoodFraction) {
    detail << "; above-threshold fraction exceeds " << kThresholdGoodFraction;
    ok = false;
  }
  if (weak < kThresholdSeparationFactor * good) {
    detail << "; separation below factor " << kThresholdSeparationFactor;
    ok = false;
  }
  return ok;
}

// Criterion 8: spectral recovery from noiseless adjacency weights.
bool criterion_8(std::ostringstream& detail) {
  const int n = 64, k = 4;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const Permutation sigma = random_ring_ordering(n, 8000 + seed);
    const KnnGraph x = knn_from_permutation(sigma, k);
    std::vector<double> w(edge_count(n), 0.0);
    x.edges.for_each_bit([&](std::size_t e) { w[e] = 1.0; });
    const Instance inst{x, WeightMatrix(n, std::move(w)),
                        ModelPair::gaussian(1.0, 0.0), seed};
    const RecoveryResult res = spectral_ordering(inst);
    if (!res.ok() || !(*res.estimate == x.edges)) {
      detail << "noiseless recovery failed at seed " << seed;
      return false;
    }
  }
  const int n2 = 32, k2 = 3;
  std::vector<std::vector<double>> a(n2, std::vector<double>(n2, 0.0));
  const KnnGraph ring = knn_from_permutation(Permutation::identity(n2), k2);
  ring.edges.for_each_bit([&](std::size_t e) {
    auto [i, j] = edge_endpoints(e);
    a[i][j] = a[j][i] = 1.0;
  });
  const SymmetricEigen eig = jacobi_eigensystem(a);
  std::vector<double> expected;
  expected.push_back(2.0 * k2);
  const double pi = std::acos(-1.0);
  for (int j = 1; j < n2; ++j)
    expected.push_back(std::sin((2 * k2 + 1) * j * pi / n2) /
                           std::sin(j * pi / n2) -
                       1.0);
  std::sort(expected.rbegin(), expected.rend());
  double worst = 0;
  for (std::size_t i = 0; i < expected.size(); ++i)
    worst = std::max(worst, std::abs(expected[i] - eig.values[i]));
  if (worst > kEigenvalueTol) {
    detail << "eigenvalue deviation " << worst;
    return false;
  }
  detail << "10 hidden orderings recovered; eigenvalue deviation " << worst;
  return true;
}

// Criterion 9: byte-level determinism of instance JSON and experiment CSV.
bool criterion_9(std::ostringstream& detail) {
  const Instance a =
      sample_instance(100, 3, ModelPair::poisson(7.0, 2.0), std::nullopt, 99);
  const Instance b =
      sample_instance(100, 3, ModelPair::poisson(7.0, 2.0), std::nullopt, 99);
  if (instance_to_json(a).dump(2) != instance_to_json(b).dump(2)) {
    detail << "instance JSON differs between identical runs";
    return false;
  }

  ExperimentConfig cfg;
  cfg.n = 30;
  cfg.k = 2;
  cfg.model = "gaussian";
  cfg.estimator = "spectral";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  cfg.sweep = {{0.5, nan}, {3.0, nan}};
  cfg.trials = 8;
  cfg.master_seed = 909;

  auto render = [&](int threads) {
    const ExperimentResult res = run_experiment(cfg, threads);
    std::ostringstream summary, trials;
    write_summary_csv(summary, res.summary);
    write_trial_csv(trials, res.records);
    // Timing columns are excluded from the determinism contract.
    auto strip = [](const std::string& csv) {
      std::istringstream in(csv);
      std::ostringstream out;
      std::string line;
      while (std::getline(in, line))
        out << line.substr(0, line.rfind(',')) << "\n";
      return out.str();
    };
    return strip(summary.str()) + strip(trials.str());
  };
  const std::string serial_a = render(1);
  const std::string serial_b = render(1);
  const std::string wide = render(8);
  if (serial_a != serial_b) {
    detail << "experiment CSV differs between reruns";
    return false;
  }
  if (serial_a != wide) {
    detail << "experiment CSV differs between 1 and 8 workers";
    return false;
  }
  detail << "instance JSON and experiment CSV byte-stable";
  return true;
}

struct Criterion {
  int id;
  const char* summary;
  bool (*fn)(std::ostringstream&);
};

const Criterion kCriteria[] = {
    {1, "divergence closed forms match numeric oracles", criterion_1},
    {2, "enumeration counts and stratum partition are exact", criterion_2},
    {3, "counting bounds hold exhaustively at small n", criterion_3},
    {4, "exhaustive search matches the re-scoring oracle", criterion_4},
    {5, "exhaustive-search recovery rate tracks the signal", criterion_5},
    {6, "greedy recovers sparse small-world rewiring", criterion_6},
    {7, "thresholding separates the two signal regimes", criterion_7},
    {8, "spectral ordering is exact without noise", criterion_8},
    {9, "instances and experiments are byte-deterministic", criterion_9},
};

bool run_criterion(const Criterion& c) {
  std::ostringstream detail;
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = c.fn(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
    ok = false;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (ok && elapsed > kBudget[c.id]) {
    detail << "; over time budget";
    ok = false;
  }
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": "
            << c.summary << " (" << detail.str() << "; " << elapsed
            << "s of " << kBudget[c.id] << "s budget)" << std::endl;
  return ok;
}

}  // namespace
}  // namespace knng

int main(int argc, char** argv) {
  bool all_ok = true;
  if (argc > 1) {
    const int want = std::atoi(argv[1]);
    bool found = false;
    for (const auto& c : knng::kCriteria) {
      if (c.id != want) continue;
      found = true;
      all_ok = knng::run_criterion(c) && all_ok;
    }
    if (!found) {
      std::cerr << "unknown criterion " << argv[1] << " (valid: 1-9)\n";
      return 2;
    }
  } else {
    for (const auto& c : knng::kCriteria)
      all_ok = knng::run_criterion(c) && all_ok;
  }
  return all_ok ? 0 : 1;
}
