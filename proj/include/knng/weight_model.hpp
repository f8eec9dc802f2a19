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

#ifndef KNNG_WEIGHT_MODEL_HPP_
#define KNNG_WEIGHT_MODEL_HPP_

// Edge-weight models: a signal distribution P on planted edges and a noise
// distribution Q elsewhere, restricted to three one-parameter families
// (unit-variance Gaussian by mean, Poisson by rate, Bernoulli by success
// probability).  Provides log-likelihood ratios, the order-1/2 Renyi
// divergence, KL divergences, tilted log-moment-generating functions and
// their Legendre transforms, plus the small-world rewiring parametrization.
// All logarithms are natural.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "knng/graph.hpp"

namespace knng {

enum class Family { gaussian, poisson, bernoulli };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::poisson: return "poisson";
    case Family::bernoulli: return "bernoulli";
  }
  throw std::logic_error("family_name: bad enum");
}

// Bernoulli probabilities are kept strictly inside (0,1) so that
// likelihood ratios and divergences stay finite.
inline constexpr double kProbClamp = 1e-12;

struct DistributionSpec {
  Family family;
  double param;  // gaussian: mean; poisson: rate; bernoulli: success prob
};

class ModelPair {
 public:
  ModelPair(DistributionSpec p, DistributionSpec q) : p_(p), q_(q) {
    if (p_.family != q_.family)
      throw std::invalid_argument("ModelPair: families differ");
    switch (p_.family) {
      case Family::gaussian:
        if (!std::isfinite(p_.param) || !std::isfinite(q_.param))
          throw std::invalid_argument("ModelPair: non-finite mean");
        break;
      case Family::poisson:
        if (!(p_.param > 0) || !(q_.param > 0))
          throw std::invalid_argument("ModelPair: Poisson rate must be > 0");
        break;
      case Family::bernoulli:
        if (!(p_.param > 0 && p_.param < 1) || !(q_.param > 0 && q_.param < 1))
          throw std::invalid_argument("ModelPair: Bernoulli prob outside (0,1)");
        p_.param = std::clamp(p_.param, kProbClamp, 1 - kProbClamp);
        q_.param = std::clamp(q_.param, kProbClamp, 1 - kProbClamp);
        if (p_.param < q_.param)
          throw std::invalid_argument("ModelPair: Bernoulli needs p >= q");
        break;
    }
  }

  static ModelPair gaussian(double mu, double nu) {
    return ModelPair({Family::gaussian, mu}, {Family::gaussian, nu});
  }
  static ModelPair poisson(double mu, double nu) {
    return ModelPair({Family::poisson, mu}, {Family::poisson, nu});
  }
  static ModelPair bernoulli(double p, double q) {
    return ModelPair({Family::bernoulli, p}, {Family::bernoulli, q});
  }

  Family family() const { return p_.family; }
  double signal() const { return p_.param; }
  double noise() const { return q_.param; }
  bool degenerate() const { return p_.param == q_.param; }
  ModelPair swapped() const {
    if (family() == Family::bernoulli && q_.param < p_.param)
      throw std::invalid_argument("ModelPair: swap would violate p >= q");
    return ModelPair(q_, p_);
  }

 private:
  DistributionSpec p_, q_;
};

// log dP/dQ evaluated at an observed weight.
inline double llr(const ModelPair& m, double w) {
  const double a = m.signal(), b = m.noise();
  switch (m.family()) {
    case Family::gaussian:
      return (a - b) * w + (b * b - a * a) / 2;
    case Family::poisson: {
      if (!(w >= 0) || w != std::floor(w))
        throw std::domain_error("llr: Poisson weight must be a nonnegative integer");
      return w * std::log(a / b) + b - a;
    }
    case Family::bernoulli: {
      if (w == 1.0) return std::log(a / b);
      if (w == 0.0) return std::log((1 - a) / (1 - b));
      throw std::domain_error("llr: Bernoulli weight must be 0 or 1");
    }
  }
  throw std::logic_error("llr: bad family");
}

// Order-1/2 Renyi divergence, -2*log integral sqrt(dP dQ).
inline double renyi_half(const ModelPair& m) {
  const double a = m.signal(), b = m.noise();
  switch (m.family()) {
    case Family::gaussian:
      return (a - b) * (a - b) / 4;
    case Family::poisson: {
      double s = std::sqrt(a) - std::sqrt(b);
      return s * s;
    }
    case Family::bernoulli:
      return -2 * std::log(std::sqrt(a * b) + std::sqrt((1 - a) * (1 - b)));
  }
  throw std::logic_error("renyi_half: bad family");
}

// D(P || Q).
inline double kl(const ModelPair& m) {
  const double a = m.signal(), b = m.noise();
  switch (m.family()) {
    case Family::gaussian:
      return (a - b) * (a - b) / 2;
    case Family::poisson:
      return a * std::log(a / b) + b - a;
    case Family::bernoulli:
      return a * std::log(a / b) + (1 - a) * std::log((1 - a) / (1 - b));
  }
  throw std::logic_error("kl: bad family");
}

// D(Q || P).
inline double kl_reverse(const ModelPair& m) {
  const double a = m.signal(), b = m.noise();
  switch (m.family()) {
    case Family::gaussian:
      return (a - b) * (a - b) / 2;
    case Family::poisson:
      return b * std::log(b / a) + a - b;
    case Family::bernoulli:
      return b * std::log(b / a) + (1 - b) * std::log((1 - b) / (1 - a));
  }
  throw std::logic_error("kl_reverse: bad family");
}

namespace detail {
inline double log_sum_exp2(double x, double y) {
  double m = std::max(x, y);
  return m + std::log(std::exp(x - m) + std::exp(y - m));
}
}  // namespace detail

// Tilted log-MGF under the noise measure: log integral dP^l dQ^(1-l).
// Zero at l = 0 and l = 1; equals -renyi_half/2 at l = 1/2.
inline double log_mgf_q(const ModelPair& m, double lambda) {
  const double a = m.signal(), b = m.noise();
  switch (m.family()) {
    case Family::gaussian:
      return lambda * (lambda - 1) * (a - b) * (a - b) / 2;
    case Family::poisson:
      return std::exp(lambda * std::log(a) + (1 - lambda) * std::log(b)) -
             lambda * a - (1 - lambda) * b;
    case Family::bernoulli:
      return detail::log_sum_exp2(
          lambda * std::log(a) + (1 - lambda) * std::log(b),
          lambda * std::log(1 - a) + (1 - lambda) * std::log(1 - b));
  }
  throw std::logic_error("log_mgf_q: bad family");
}

// Tilted log-MGF under the signal measure; shift identity with the above.
inline double log_mgf_p(const ModelPair& m, double lambda) {
  return log_mgf_q(m, lambda + 1);
}

namespace detail {

inline constexpr double kLegendreLo = -10.0;
inline constexpr double kLegendreHi = 11.0;
inline constexpr double kLegendreTol = 1e-10;

// Golden-section maximization of a concave function on [lo, hi].
template <typename Fn>
std::pair<double, double> golden_max(Fn&& f, double lo, double hi, double tol) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
  }
  double mid = (a + b) / 2;
  return {mid, f(mid)};
}

inline void check_rate_domain(const ModelPair& m, double& tau) {
  const double lo = -kl_reverse(m), hi = kl(m);
  const double slack = 1e-9 * (1 + std::abs(lo) + std::abs(hi));
  if (tau < lo - slack || tau > hi + slack)
    throw std::domain_error("rate function: tau outside [-D(Q||P), D(P||Q)]");
  tau = std::clamp(tau, lo, hi);
}

}  // namespace detail

// Legendre transform sup_l (l*tau - log_mgf_q(l)): the large-deviation
// exponent for the sum of noise-edge log-likelihood ratios reaching tau.
// Defined for tau in [-D(Q||P), D(P||Q)].
inline double rate_q(const ModelPair& m, double tau) {
  detail::check_rate_domain(m, tau);
  if (m.degenerate()) return 0.0;
  if (m.family() == Family::gaussian) {
    // Closed form: the supremum sits at l = tau/s + 1/2, s = (mu-nu)^2.
    const double s = (m.signal() - m.noise()) * (m.signal() - m.noise());
    const double t = tau + s / 2;
    return t * t / (2 * s);
  }
  auto objective = [&](double l) { return l * tau - log_mgf_q(m, l); };
  auto [arg, val] = detail::golden_max(objective, detail::kLegendreLo,
                                       detail::kLegendreHi, detail::kLegendreTol);
  // The supremum must be interior; on the admissible tau range it sits in
  // [0, 1], far from the search boundary.
  if (arg < detail::kLegendreLo + 1e-6 || arg > detail::kLegendreHi - 1e-6)
    throw std::runtime_error("rate_q: supremum not interior");
  return std::max(0.0, val);
}

// Companion exponent under the signal measure; differs by exactly tau.
inline double rate_p(const ModelPair& m, double tau) {
  detail::check_rate_domain(m, tau);
  return rate_q(m, tau) - tau;
}

// Rewiring model: each planted edge survives independently and every
// missing pair appears independently, calibrated so the expected number of
// edges stays at n*k.
struct SmallWorldParams {
  int n;
  int k;
  double eps;
};

inline ModelPair smallworld_model(const SmallWorldParams& sw) {
  check_ring_dims(sw.n, sw.k);
  if (!(sw.eps >= 0.0 && sw.eps <= 1.0))
    throw std::invalid_argument("smallworld_model: eps must lie in [0,1]");
  const double q = 2.0 * sw.eps * sw.k / (sw.n - 1);
  const double p = 1.0 - sw.eps + q;
  return ModelPair::bernoulli(std::clamp(p, kProbClamp, 1 - kProbClamp),
                              std::clamp(q, kProbClamp, 1 - kProbClamp));
}

// Signal-strength ratios governing the two recovery regimes: exact recovery
// needs 2*renyi_half/log n > 1, almost-exact needs k*D(P||Q)/log n > 1.
struct ThresholdRatios {
  double exact_ratio;
  double almost_exact_ratio;
};

inline ThresholdRatios threshold_ratios(int n, int k, const ModelPair& m) {
  check_ring_dims(n, k);
  return {2 * renyi_half(m) / std::log(static_cast<double>(n)),
          k * kl(m) / std::log(static_cast<double>(n))};
}

}  // namespace knng

#endif  // KNNG_WEIGHT_MODEL_HPP_
