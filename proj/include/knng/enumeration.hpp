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

#ifndef KNNG_ENUMERATION_HPP_
#define KNNG_ENUMERATION_HPP_

// Exhaustive enumeration of ring neighborhood graphs at small n, plus the
// combinatorial checkers built on top of it: stratification by edit
// distance, per-vertex color balance of difference graphs, the nearby
// red-edge property, and counting bounds on strata and red-edge sets.
// All bounds are compared in log space to keep large products exact enough.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "knng/graph.hpp"

namespace knng {

inline constexpr unsigned long long kEnumerationBudget = 10'000'000ull;

inline unsigned long long canonical_ordering_count(int n) {
  unsigned long long f = 1;
  for (int i = 2; i < n; ++i) {
    f *= static_cast<unsigned long long>(i);
    if (f > 2 * kEnumerationBudget) return f / 2;
  }
  return f / 2;
}

// All distinct neighborhood graphs on n vertices at radius k, as sorted
// canonical keys.  Iterates orderings with sigma(0) = 0 and
// sigma(1) < sigma(n-1), which visits exactly one representative of every
// rotation/reflection class, then dedupes the resulting edge sets.
inline std::vector<EdgeSet> enumerate_knn_graph_keys(int n, int k) {
  check_ring_dims(n, k);
  if (canonical_ordering_count(n) > kEnumerationBudget)
    throw std::invalid_argument("enumerate_knn_graph_keys: budget exceeded");

  std::vector<int> rest(n - 1);
  std::iota(rest.begin(), rest.end(), 1);
  std::vector<EdgeSet> keys;
  std::vector<int> order(n);
  order[0] = 0;
  do {
    if (rest.front() > rest.back()) continue;
    std::copy(rest.begin(), rest.end(), order.begin() + 1);
    EdgeSet edges(edge_count(n));
    for (int p = 0; p < n; ++p)
      for (int d = 1; d <= k; ++d)
        edges.set(edge_index(order[p], order[(p + d) % n]));
    keys.push_back(std::move(edges));
  } while (std::next_permutation(rest.begin(), rest.end()));

  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

struct StratificationReport {
  int n = 0;
  int k = 0;
  EdgeSet x_star_key;
  std::map<int, std::size_t> counts;  // edit-distance stratum -> size
  std::size_t total = 0;
};

// Histogram of the population by red-edge count relative to x_star.
inline StratificationReport stratify(const KnnGraph& x_star,
                                     const std::vector<EdgeSet>& all_keys) {
  StratificationReport rep;
  rep.n = x_star.n;
  rep.k = x_star.k;
  rep.x_star_key = canonical_key(x_star);
  rep.total = all_keys.size();
  for (const EdgeSet& key : all_keys) {
    auto delta = static_cast<int>(set_difference(x_star.edges, key).count());
    ++rep.counts[delta];
  }
  return rep;
}

struct LemmaReport {
  std::string lemma;
  int n = 0;
  int k = 0;
  std::size_t checked = 0;
  std::vector<std::string> violations;
  std::string extremal_witness;

  bool pass() const { return violations.empty(); }
};

inline double log_binomial(int a, int b) {
  if (b < 0 || b > a) return -std::numeric_limits<double>::infinity();
  return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

// Stratum sizes against the crude per-stratum bound (4kn)^Delta.
inline LemmaReport verify_simple_bound(const StratificationReport& report) {
  LemmaReport rep;
  rep.lemma = "stratum_count_bound";
  rep.n = report.n;
  rep.k = report.k;
  const double log_base =
      std::log(4.0 * static_cast<double>(report.k) * report.n);
  double tightest = -std::numeric_limits<double>::infinity();
  int tightest_delta = -1;
  for (const auto& [delta, count] : report.counts) {
    ++rep.checked;
    if (delta == 0) continue;
    double log_count = std::log(static_cast<double>(count));
    double log_bound = delta * log_base;
    if (log_count > log_bound) {
      std::ostringstream os;
      os << "stratum " << delta << ": count " << count
         << " exceeds bound exp(" << log_bound << ")";
      rep.violations.push_back(os.str());
    }
    if (log_count - log_bound > tightest) {
      tightest = log_count - log_bound;
      tightest_delta = delta;
    }
  }
  if (tightest_delta >= 0) {
    std::ostringstream os;
    os << "tightest stratum " << tightest_delta << ": log(count)-log(bound) = "
       << tightest;
    rep.extremal_witness = os.str();
  }
  return rep;
}

// Every red edge of every candidate has a distinct red companion within
// ring distance 2k.  Requires k >= 2; single red edges exist at k = 1.
inline LemmaReport verify_nearby_lemma(const KnnGraph& x_star,
                                       const std::vector<EdgeSet>& all_keys) {
  if (x_star.k < 2)
    throw std::invalid_argument("verify_nearby_lemma: requires k >= 2");
  if (!x_star.generator)
    throw std::domain_error("verify_nearby_lemma: x_star needs an ordering");
  LemmaReport rep;
  rep.lemma = "nearby_red_edge";
  rep.n = x_star.n;
  rep.k = x_star.k;
  int worst_nearest = -1;
  const int radius = 2 * x_star.k;
  for (const EdgeSet& key : all_keys) {
    EdgeSet red = set_difference(x_star.edges, key);
    std::vector<std::size_t> red_edges;
    red.for_each_bit([&](std::size_t e) { red_edges.push_back(e); });
    for (std::size_t i = 0; i < red_edges.size(); ++i) {
      ++rep.checked;
      int nearest = std::numeric_limits<int>::max();
      for (std::size_t j = 0; j < red_edges.size(); ++j) {
        if (i == j) continue;
        nearest =
            std::min(nearest, edge_distance(x_star, red_edges[i], red_edges[j]));
      }
      if (red_edges.size() < 2 || nearest > radius) {
        std::ostringstream os;
        auto [a, b] = edge_endpoints(red_edges[i]);
        os << "red edge (" << a << "," << b << ") of a stratum-"
           << red_edges.size() << " candidate has no companion within "
           << radius;
        rep.violations.push_back(os.str());
      } else {
        worst_nearest = std::max(worst_nearest, nearest);
      }
    }
  }
  if (worst_nearest >= 0) {
    std::ostringstream os;
    os << "largest nearest-companion distance: " << worst_nearest
       << " (bound " << radius << ")";
    rep.extremal_witness = os.str();
  }
  return rep;
}

// Difference graphs are per-vertex balanced in the two colors, and the two
// color classes always have equal size.
inline LemmaReport verify_balance(const KnnGraph& x_star,
                                  const std::vector<EdgeSet>& all_keys) {
  LemmaReport rep;
  rep.lemma = "color_balance";
  rep.n = x_star.n;
  rep.k = x_star.k;
  int max_degree = 0;
  std::vector<int> red_deg(x_star.n), blue_deg(x_star.n);
  for (const EdgeSet& key : all_keys) {
    ++rep.checked;
    EdgeSet red = set_difference(x_star.edges, key);
    EdgeSet blue = set_difference(key, x_star.edges);
    if (red.count() != blue.count()) {
      rep.violations.push_back("color class sizes differ");
      continue;
    }
    std::fill(red_deg.begin(), red_deg.end(), 0);
    std::fill(blue_deg.begin(), blue_deg.end(), 0);
    red.for_each_bit([&](std::size_t e) {
      auto [a, b] = edge_endpoints(e);
      ++red_deg[a];
      ++red_deg[b];
    });
    blue.for_each_bit([&](std::size_t e) {
      auto [a, b] = edge_endpoints(e);
      ++blue_deg[a];
      ++blue_deg[b];
    });
    for (int v = 0; v < x_star.n; ++v) {
      if (red_deg[v] != blue_deg[v]) {
        std::ostringstream os;
        os << "vertex " << v << " has red degree " << red_deg[v]
           << " but blue degree " << blue_deg[v];
        rep.violations.push_back(os.str());
      }
      max_degree = std::max(max_degree, red_deg[v]);
    }
  }
  std::ostringstream os;
  os << "largest per-vertex color degree: " << max_degree;
  rep.extremal_witness = os.str();
  return rep;
}

struct RedSetCount {
  int delta = 0;
  std::size_t observed = 0;           // distinct red-edge sets in the stratum
  double log_bound = 0;               // cap on observed, log scale
  std::size_t max_multiplicity = 0;   // candidates sharing one red set
  double log_multiplicity_bound = 0;  // cap on the multiplicity, log scale
};

// Distinct red-edge sets within one stratum, plus how many candidates can
// share a single red set.  Caps: (96 k^2)^Delta * C(kn, floor(Delta/2)) for
// the number of sets, and 2 * (32 k^3)^(2 Delta) * Delta^(Delta/k) for the
// per-set multiplicity.
inline RedSetCount count_red_sets(const KnnGraph& x_star,
                                  const std::vector<EdgeSet>& all_keys,
                                  int delta) {
  const int n = x_star.n, k = x_star.k;
  std::unordered_map<EdgeSet, std::size_t, EdgeSetHash> groups;
  for (const EdgeSet& key : all_keys) {
    EdgeSet red = set_difference(x_star.edges, key);
    if (static_cast<int>(red.count()) != delta) continue;
    ++groups[red];
  }
  RedSetCount rc;
  rc.delta = delta;
  rc.observed = groups.size();
  for (const auto& [red, mult] : groups)
    rc.max_multiplicity = std::max(rc.max_multiplicity, mult);
  rc.log_bound = delta * std::log(96.0 * k * k) + log_binomial(k * n, delta / 2);
  rc.log_multiplicity_bound =
      std::log(2.0) + 2.0 * delta * std::log(32.0 * k * k * k) +
      (delta > 0 ? (static_cast<double>(delta) / k) * std::log(delta) : 0.0);
  return rc;
}

// Both red-set caps across every nonempty stratum.
inline LemmaReport verify_red_set_bounds(const KnnGraph& x_star,
                                         const std::vector<EdgeSet>& all_keys) {
  LemmaReport rep;
  rep.lemma = "red_set_bounds";
  rep.n = x_star.n;
  rep.k = x_star.k;
  StratificationReport strata = stratify(x_star, all_keys);
  double tightest = -std::numeric_limits<double>::infinity();
  int tightest_delta = -1;
  for (const auto& [delta, count] : strata.counts) {
    RedSetCount rc = count_red_sets(x_star, all_keys, delta);
    ++rep.checked;
    double log_obs = std::log(static_cast<double>(rc.observed));
    if (log_obs > rc.log_bound) {
      std::ostringstream os;
      os << "stratum " << delta << ": " << rc.observed
         << " red sets exceed bound exp(" << rc.log_bound << ")";
      rep.violations.push_back(os.str());
    }
    double log_mult = std::log(static_cast<double>(rc.max_multiplicity));
    if (log_mult > rc.log_multiplicity_bound) {
      std::ostringstream os;
      os << "stratum " << delta << ": multiplicity " << rc.max_multiplicity
         << " exceeds bound exp(" << rc.log_multiplicity_bound << ")";
      rep.violations.push_back(os.str());
    }
    if (delta > 0 && log_obs - rc.log_bound > tightest) {
      tightest = log_obs - rc.log_bound;
      tightest_delta = delta;
    }
  }
  if (tightest_delta >= 0) {
    std::ostringstream os;
    os << "tightest stratum " << tightest_delta
       << ": log(red sets)-log(bound) = " << tightest;
    rep.extremal_witness = os.str();
  }
  return rep;
}

}  // namespace knng

#endif  // KNNG_ENUMERATION_HPP_
