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

#ifndef KNNG_RNG_HPP_
#define KNNG_RNG_HPP_

// Counter-style pseudo-random generator built on the splitmix64 update.
// Every consumer derives its own stream from a (seed, stream) pair, so
// sampled objects are reproducible byte for byte regardless of evaluation
// order or thread count.

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace knng {

inline constexpr uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;

// Bijective avalanche mixer (the splitmix64 output stage).
inline uint64_t avalanche64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// Order-sensitive combiner for deriving child seeds.
inline uint64_t mix64(uint64_t a, uint64_t b) {
  return avalanche64(a + kGoldenGamma * (b + 1));
}

inline uint64_t mix64(uint64_t a, uint64_t b, uint64_t c) {
  return mix64(mix64(a, b), c);
}

class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream) : state_(mix64(seed, stream)) {}

  uint64_t next_u64() {
    state_ += kGoldenGamma;
    return avalanche64(state_);
  }

  // Uniform on 2^53 dyadic midpoints of (0,1); never returns 0 or 1, so it
  // is safe to push through inverse CDFs.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  // Unbiased uniform draw from {0, ..., bound-1} by rejection.
  uint64_t next_below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: zero bound");
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

  // Standard normal via Acklam's rational approximation of the inverse CDF
  // (relative error below 1.2e-9, far inside sampling noise).  One uniform
  // per draw keeps the stream layout simple and the hot path branch-light.
  double next_normal() {
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;
    const double p = next_unit();
    if (p < plow) {
      double q = std::sqrt(-2 * std::log(p));
      return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
             ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p > 1 - plow) {
      double q = std::sqrt(-2 * std::log(1 - p));
      return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
             ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  }

  // Poisson by CDF inversion; restricted to the moderate rates used here.
  int next_poisson(double rate) {
    if (!(rate > 0.0) || rate > 30.0)
      throw std::invalid_argument("next_poisson: rate must lie in (0, 30]");
    const double u = next_unit();
    double pmf = std::exp(-rate), cdf = pmf;
    int w = 0;
    while (u > cdf && w < 400) {
      ++w;
      pmf *= rate / w;
      cdf += pmf;
    }
    return w;
  }

 private:
  uint64_t state_;
};

}  // namespace knng

#endif  // KNNG_RNG_HPP_
