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

#ifndef KNNG_SAMPLER_HPP_
#define KNNG_SAMPLER_HPP_

// Instance generation: draw a hidden ring ordering, plant its neighborhood
// graph, then attach one weight per vertex pair (signal law on planted
// edges, noise law elsewhere).  Each edge consumes its own RNG stream keyed
// by the flat edge index, so instances are reproducible byte for byte and
// independent of traversal order.

#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "knng/graph.hpp"
#include "knng/rng.hpp"
#include "knng/weight_model.hpp"

namespace knng {

// Stream id reserved for the hidden ordering; edge streams use flat edge
// indices, all far below this constant.
inline constexpr uint64_t kOrderingStream = 0xFFFFFFFF00000001ull;

// Symmetric weight matrix without a diagonal, stored flat by edge index.
class WeightMatrix {
 public:
  WeightMatrix(int n, std::vector<double> w) : n_(n), w_(std::move(w)) {
    if (w_.size() != edge_count(n_))
      throw std::invalid_argument("WeightMatrix: size does not match n");
  }

  int n() const { return n_; }
  double at(int i, int j) const { return w_[edge_index(i, j)]; }
  double at_edge(std::size_t e) const { return w_[e]; }
  const std::vector<double>& flat() const { return w_; }

 private:
  int n_;
  std::vector<double> w_;
};

struct Instance {
  KnnGraph x_star;
  WeightMatrix weights;
  ModelPair model;
  uint64_t seed;
};

// Uniform hidden ordering by Fisher-Yates on a dedicated stream.
inline Permutation random_ring_ordering(int n, uint64_t seed) {
  CounterRng rng(seed, kOrderingStream);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    auto j = static_cast<int>(rng.next_below(static_cast<uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  return Permutation(std::move(order));
}

inline double sample_weight(CounterRng& rng, Family family, double param) {
  switch (family) {
    case Family::gaussian:
      return rng.next_normal() + param;
    case Family::poisson:
      return static_cast<double>(rng.next_poisson(param));
    case Family::bernoulli:
      return rng.next_bernoulli(param) ? 1.0 : 0.0;
  }
  throw std::logic_error("sample_weight: bad family");
}

inline Instance sample_instance(int n, int k, const ModelPair& model,
                                std::optional<Permutation> sigma, uint64_t seed) {
  check_ring_dims(n, k);
  Permutation ordering =
      sigma ? std::move(*sigma) : random_ring_ordering(n, seed);
  if (ordering.size() != n)
    throw std::invalid_argument("sample_instance: ordering size mismatch");
  KnnGraph hidden = knn_from_permutation(ordering, k);

  std::vector<double> w(edge_count(n));
  for (std::size_t e = 0; e < w.size(); ++e) {
    CounterRng rng(seed, e);
    bool planted = hidden.edges.test(e);
    w[e] = sample_weight(rng, model.family(),
                         planted ? model.signal() : model.noise());
  }
  return Instance{std::move(hidden), WeightMatrix(n, std::move(w)), model, seed};
}

// Rewired-ring observation: Bernoulli weights under the calibrated
// small-world pair, so the weight matrix doubles as an adjacency indicator.
inline Instance sample_smallworld(const SmallWorldParams& sw, uint64_t seed) {
  return sample_instance(sw.n, sw.k, smallworld_model(sw), std::nullopt, seed);
}

// Adjacency view of 0/1 weights, for estimators that consume a plain graph.
inline EdgeSet binary_weights_to_edges(const WeightMatrix& w) {
  EdgeSet edges(w.flat().size());
  for (std::size_t e = 0; e < w.flat().size(); ++e) {
    double v = w.at_edge(e);
    if (v == 1.0)
      edges.set(e);
    else if (v != 0.0)
      throw std::invalid_argument("binary_weights_to_edges: weight not 0/1");
  }
  return edges;
}

}  // namespace knng

#endif  // KNNG_SAMPLER_HPP_
