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

#ifndef KNNG_GRAPH_HPP_
#define KNNG_GRAPH_HPP_

// Core data structures for k-nearest-neighbor ring graphs: flat edge
// indexing, bitset edge sets, latent vertex orderings, and the red/blue
// difference graph between two such graphs.

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace knng {

// ---------------------------------------------------------------------------
// Flat edge indexing over unordered pairs {i,j}, 0 <= i < j < n.
// index(i,j) = j*(j-1)/2 + i, a bijection onto [0, n*(n-1)/2).

inline std::size_t edge_count(int n) {
  if (n < 0) throw std::invalid_argument("edge_count: negative n");
  return static_cast<std::size_t>(n) * (n - 1) / 2;
}

inline std::size_t edge_index(int i, int j) {
  if (i == j) throw std::invalid_argument("edge_index: self loop");
  if (i > j) std::swap(i, j);
  if (i < 0) throw std::invalid_argument("edge_index: negative vertex");
  return static_cast<std::size_t>(j) * (j - 1) / 2 + i;
}

inline std::pair<int, int> edge_endpoints(std::size_t index) {
  // Invert index = j*(j-1)/2 + i.  Start from the real root and fix up any
  // off-by-one from floating point.
  auto j = static_cast<std::size_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(index))) / 2.0);
  while (j * (j - 1) / 2 > index) --j;
  while ((j + 1) * j / 2 <= index) ++j;
  std::size_t i = index - j * (j - 1) / 2;
  return {static_cast<int>(i), static_cast<int>(j)};
}

// ---------------------------------------------------------------------------
// EdgeSet: fixed-size bitset keyed by flat edge index.  Supports O(E/64)
// set algebra; the block vector doubles as a canonical, totally ordered key
// for a graph's edge set.

class EdgeSet {
 public:
  EdgeSet() : nbits_(0) {}
  explicit EdgeSet(std::size_t bit_count)
      : nbits_(bit_count), blocks_((bit_count + 63) / 64, 0) {}

  std::size_t bit_count() const { return nbits_; }

  bool test(std::size_t i) const {
    check_index(i);
    return (blocks_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i) {
    check_index(i);
    blocks_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  void reset(std::size_t i) {
    check_index(i);
    blocks_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto b : blocks_) c += static_cast<std::size_t>(std::popcount(b));
    return c;
  }
  bool empty() const {
    for (auto b : blocks_) if (b) return false;
    return true;
  }

  EdgeSet& operator&=(const EdgeSet& o) {
    check_compat(o);
    for (std::size_t t = 0; t < blocks_.size(); ++t) blocks_[t] &= o.blocks_[t];
    return *this;
  }
  EdgeSet& operator|=(const EdgeSet& o) {
    check_compat(o);
    for (std::size_t t = 0; t < blocks_.size(); ++t) blocks_[t] |= o.blocks_[t];
    return *this;
  }
  EdgeSet& operator^=(const EdgeSet& o) {
    check_compat(o);
    for (std::size_t t = 0; t < blocks_.size(); ++t) blocks_[t] ^= o.blocks_[t];
    return *this;
  }
  friend EdgeSet operator&(EdgeSet a, const EdgeSet& b) { return a &= b; }
  friend EdgeSet operator|(EdgeSet a, const EdgeSet& b) { return a |= b; }
  friend EdgeSet operator^(EdgeSet a, const EdgeSet& b) { return a ^= b; }

  // a \ b.  Safe without tail masking: our high bits are already zero.
  friend EdgeSet set_difference(EdgeSet a, const EdgeSet& b) {
    a.check_compat(b);
    for (std::size_t t = 0; t < a.blocks_.size(); ++t) a.blocks_[t] &= ~b.blocks_[t];
    return a;
  }

  bool operator==(const EdgeSet& o) const = default;
  auto operator<=>(const EdgeSet& o) const {
    if (auto c = nbits_ <=> o.nbits_; c != 0) return c;
    return blocks_ <=> o.blocks_;
  }

  template <typename Fn>
  void for_each_bit(Fn&& fn) const {
    for (std::size_t t = 0; t < blocks_.size(); ++t) {
      std::uint64_t b = blocks_[t];
      while (b) {
        unsigned bit = std::countr_zero(b);
        fn((t << 6) + bit);
        b &= b - 1;
      }
    }
  }

  std::size_t hash() const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (auto b : blocks_) {
      h ^= b;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }

  const std::vector<std::uint64_t>& blocks() const { return blocks_; }

 private:
  void check_index(std::size_t i) const {
    if (i >= nbits_) throw std::out_of_range("EdgeSet: bit index out of range");
  }
  void check_compat(const EdgeSet& o) const {
    if (nbits_ != o.nbits_)
      throw std::invalid_argument("EdgeSet: size mismatch");
  }

  std::size_t nbits_;
  std::vector<std::uint64_t> blocks_;
};

struct EdgeSetHash {
  std::size_t operator()(const EdgeSet& s) const { return s.hash(); }
};

// ---------------------------------------------------------------------------
// Permutation: a vertex ordering around the latent ring.  order[p] is the
// vertex at ring position p; position_of is the inverse map.

class Permutation {
 public:
  explicit Permutation(std::vector<int> order) : order_(std::move(order)) {
    const int n = static_cast<int>(order_.size());
    if (n == 0) throw std::invalid_argument("Permutation: empty");
    inv_.assign(n, -1);
    for (int p = 0; p < n; ++p) {
      int v = order_[p];
      if (v < 0 || v >= n || inv_[v] != -1)
        throw std::invalid_argument("Permutation: not a bijection on 0..n-1");
      inv_[v] = p;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> o(n);
    for (int p = 0; p < n; ++p) o[p] = p;
    return Permutation(std::move(o));
  }

  int size() const { return static_cast<int>(order_.size()); }
  int at(int pos) const { return order_.at(pos); }
  int position_of(int vertex) const { return inv_.at(vertex); }
  const std::vector<int>& order() const { return order_; }

  Permutation rotated(int shift) const {
    const int n = size();
    shift = ((shift % n) + n) % n;
    std::vector<int> o(n);
    for (int p = 0; p < n; ++p) o[p] = order_[(p + shift) % n];
    return Permutation(std::move(o));
  }
  Permutation reversed() const {
    std::vector<int> o(order_.rbegin(), order_.rend());
    return Permutation(std::move(o));
  }

  bool operator==(const Permutation& o) const { return order_ == o.order_; }

 private:
  std::vector<int> order_;
  std::vector<int> inv_;
};

// Distance between two ring positions on an n-cycle.
inline int cycle_position_distance(int n, int pa, int pb) {
  int d = pa - pb;
  if (d < 0) d = -d;
  d %= n;
  return std::min(d, n - d);
}

// Ring distance between two vertices under an ordering.  Zero iff u == v.
inline int cycle_distance(const Permutation& sigma, int u, int v) {
  if (u == v) return 0;
  return cycle_position_distance(sigma.size(), sigma.position_of(u),
                                 sigma.position_of(v));
}

// ---------------------------------------------------------------------------
// KnnGraph: the graph whose edges join every pair of vertices at ring
// distance <= k under some ordering.  2k-regular with k*n edges.  The
// generating ordering is retained when known; graphs reconstructed from an
// edge set alone leave it empty.

struct KnnGraph {
  int n = 0;
  int k = 0;
  EdgeSet edges;
  std::optional<Permutation> generator;

  bool has_edge(int i, int j) const { return edges.test(edge_index(i, j)); }

  int degree(int v) const {
    int d = 0;
    for (int u = 0; u < n; ++u)
      if (u != v && has_edge(u, v)) ++d;
    return d;
  }

  std::vector<int> neighbors(int v) const {
    std::vector<int> r;
    for (int u = 0; u < n; ++u)
      if (u != v && has_edge(u, v)) r.push_back(u);
    return r;
  }

  int cycle_distance(int u, int v) const {
    if (!generator)
      throw std::domain_error("KnnGraph: no generating ordering attached");
    return knng::cycle_distance(*generator, u, v);
  }
};

inline void check_ring_dims(int n, int k) {
  if (k < 1) throw std::invalid_argument("ring graph: k must be >= 1");
  if (n < 2 * k + 2)
    throw std::invalid_argument("ring graph: need n >= 2k+2");
}

inline KnnGraph knn_from_permutation(const Permutation& sigma, int k) {
  const int n = sigma.size();
  check_ring_dims(n, k);
  KnnGraph g;
  g.n = n;
  g.k = k;
  g.edges = EdgeSet(edge_count(n));
  for (int p = 0; p < n; ++p)
    for (int d = 1; d <= k; ++d)
      g.edges.set(edge_index(sigma.at(p), sigma.at((p + d) % n)));
  g.generator = sigma;
  return g;
}

// Rebuild a graph value from a bare edge set (no ordering attached).
inline KnnGraph knn_from_edge_set(int n, int k, EdgeSet edges) {
  check_ring_dims(n, k);
  if (edges.bit_count() != edge_count(n))
    throw std::invalid_argument("knn_from_edge_set: edge set size mismatch");
  KnnGraph g;
  g.n = n;
  g.k = k;
  g.edges = std::move(edges);
  return g;
}

// The edge set itself is the canonical key: two orderings produce the same
// graph exactly when their edge sets coincide, and EdgeSet is totally
// ordered, so keys can be deduplicated and tie-broken deterministically.
inline const EdgeSet& canonical_key(const KnnGraph& g) { return g.edges; }

inline void check_same_universe(const KnnGraph& a, const KnnGraph& b) {
  if (a.n != b.n || a.k != b.k)
    throw std::invalid_argument("graphs have mismatched n or k");
}

inline std::size_t hamming_distance(const KnnGraph& a, const KnnGraph& b) {
  check_same_universe(a, b);
  return (a.edges ^ b.edges).count();
}

// ---------------------------------------------------------------------------
// DifferenceGraph: comparing a candidate x against the truth x_star.
// red  = edges of x_star missing from x,
// blue = edges of x absent from x_star.
// Both graphs are 2k-regular, so red and blue degrees balance at every
// vertex and |red| = |blue| = delta; the edit distance is 2*delta.

struct DifferenceGraph {
  EdgeSet red;
  EdgeSet blue;
  std::size_t delta = 0;
};

inline DifferenceGraph difference_graph(const KnnGraph& x,
                                        const KnnGraph& x_star) {
  check_same_universe(x, x_star);
  DifferenceGraph d;
  d.red = set_difference(x_star.edges, x.edges);
  d.blue = set_difference(x.edges, x_star.edges);
  d.delta = d.red.count();
  return d;
}

// Distance between two edges of x_star: the smallest ring distance among
// the four endpoint pairings (0 when they share an endpoint).
inline int edge_distance(const KnnGraph& x_star, std::size_t e, std::size_t f) {
  if (!x_star.generator)
    throw std::domain_error("edge_distance: no generating ordering attached");
  if (!x_star.edges.test(e) || !x_star.edges.test(f))
    throw std::invalid_argument("edge_distance: edge not in graph");
  auto [a, b] = edge_endpoints(e);
  auto [c, d] = edge_endpoints(f);
  const Permutation& sigma = *x_star.generator;
  int best = cycle_distance(sigma, a, c);
  best = std::min(best, cycle_distance(sigma, a, d));
  best = std::min(best, cycle_distance(sigma, b, c));
  best = std::min(best, cycle_distance(sigma, b, d));
  return best;
}

// Swap the vertices at ring positions pos and pos+1 (mod n) of the
// generating ordering and rebuild.  The result differs from x_star in
// exactly two red and two blue edges when n is large enough that the
// swapped windows do not collapse.
inline KnnGraph adjacent_swap_graph(const KnnGraph& x_star, int pos) {
  if (!x_star.generator)
    throw std::domain_error("adjacent_swap_graph: no generating ordering");
  const int n = x_star.n;
  if (pos < 0 || pos >= n)
    throw std::invalid_argument("adjacent_swap_graph: position out of range");
  std::vector<int> o = x_star.generator->order();
  std::swap(o[pos], o[(pos + 1) % n]);
  return knn_from_permutation(Permutation(std::move(o)), x_star.k);
}

// ---------------------------------------------------------------------------
// Size of the common neighborhood of two vertices at ring distance d.  Each
// neighborhood is a width-(2k+1) window on the n-cycle; the windows overlap
// on the near side and, when n - d <= 2k, also wrap around and overlap on
// the far side.  The 2*[d<=k] term removes the two window centers, which are
// not neighbors of themselves.
inline int neighbor_intersection_closed_form(int n, int k, int d) {
  check_ring_dims(n, k);
  if (d < 1 || d > n / 2)
    throw std::invalid_argument("neighbor_intersection_closed_form: bad distance");
  int near = std::max(0, 2 * k + 1 - d);
  int far = std::max(0, 2 * k + 1 - (n - d));
  return near + far - (d <= k ? 2 : 0);
}

inline int neighbor_intersection_size(const KnnGraph& x, int j1, int j2) {
  if (j1 == j2)
    throw std::invalid_argument("neighbor_intersection_size: equal vertices");
  int direct = 0;
  for (int u = 0; u < x.n; ++u)
    if (u != j1 && u != j2 && x.has_edge(u, j1) && x.has_edge(u, j2)) ++direct;
  if (x.generator) {
    int d = x.cycle_distance(j1, j2);
    if (direct != neighbor_intersection_closed_form(x.n, x.k, d))
      throw std::logic_error(
          "neighbor_intersection_size: closed form disagrees with direct count");
  }
  return direct;
}

}  // namespace knng

#endif  // KNNG_GRAPH_HPP_
