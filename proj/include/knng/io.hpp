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

#ifndef KNNG_IO_HPP_
#define KNNG_IO_HPP_

// JSON serialization for instances, recovery results, and enumeration
// reports, plus the output-directory override used by the command line
// tool.  Weights are stored as a flat array in edge-index order.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "knng/enumeration.hpp"
#include "knng/estimators.hpp"
#include "knng/graph.hpp"
#include "knng/harness.hpp"
#include "knng/sampler.hpp"
#include "knng/weight_model.hpp"

namespace knng {

inline constexpr const char* kOutDirEnvVar = "KNNG_OUT_DIR";

// Relative output paths land inside $KNNG_OUT_DIR when it is set.
inline std::filesystem::path resolve_out_path(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return p;
  const char* base = std::getenv(kOutDirEnvVar);
  if (base == nullptr || *base == '\0') return p;
  return std::filesystem::path(base) / p;
}

inline Family family_from_name(const std::string& name) {
  if (name == "gaussian") return Family::gaussian;
  if (name == "poisson") return Family::poisson;
  if (name == "bernoulli") return Family::bernoulli;
  throw std::invalid_argument("unknown family: " + name);
}

inline nlohmann::json model_to_json(const ModelPair& m) {
  return nlohmann::json{{"family", family_name(m.family())},
                        {"signal", m.signal()},
                        {"noise", m.noise()}};
}

inline ModelPair model_from_json(const nlohmann::json& j) {
  const Family f = family_from_name(j.at("family").get<std::string>());
  const double a = j.at("signal").get<double>();
  const double b = j.at("noise").get<double>();
  switch (f) {
    case Family::gaussian:
      return ModelPair::gaussian(a, b);
    case Family::poisson:
      return ModelPair::poisson(a, b);
    case Family::bernoulli:
      return ModelPair::bernoulli(a, b);
  }
  throw std::logic_error("model_from_json: bad family");
}

inline nlohmann::json instance_to_json(const Instance& inst) {
  if (!inst.x_star.generator.has_value())
    throw std::invalid_argument("instance_to_json: missing hidden ordering");
  nlohmann::json j;
  j["n"] = inst.x_star.n;
  j["k"] = inst.x_star.k;
  j["model"] = model_to_json(inst.model);
  j["seed"] = inst.seed;
  j["sigma"] = inst.x_star.generator->order();
  j["weights"] = inst.weights.flat();
  return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const int k = j.at("k").get<int>();
  const ModelPair model = model_from_json(j.at("model"));
  const uint64_t seed = j.at("seed").get<uint64_t>();
  Permutation sigma(j.at("sigma").get<std::vector<int>>());
  auto weights = j.at("weights").get<std::vector<double>>();
  if (sigma.size() != n)
    throw std::invalid_argument("instance_from_json: sigma size mismatch");
  return Instance{knn_from_permutation(sigma, k),
                  WeightMatrix(n, std::move(weights)), model, seed};
}

// Recovery summary against the known truth, the `recover` output format.
inline nlohmann::json result_to_json(const std::string& estimator,
                                     const RecoveryResult& res,
                                     const Instance& inst,
                                     double wall_time_ms) {
  const std::size_t kn =
      static_cast<std::size_t>(inst.x_star.n) * inst.x_star.k;
  // An errored run scores like an empty estimate: all true edges missed.
  std::size_t hamming = kn;
  if (res.ok()) hamming = (*res.estimate ^ inst.x_star.edges).count();
  nlohmann::json j;
  j["estimator"] = estimator;
  j["status"] = recovery_status_name(res.status);
  j["hamming_distance_to_truth"] = hamming;
  j["exact_match"] = res.ok() && hamming == 0;
  j["wall_time_ms"] = wall_time_ms;
  if (res.objective) j["objective"] = *res.objective;
  return j;
}

inline nlohmann::json lemma_report_to_json(const LemmaReport& rep) {
  nlohmann::json j;
  j["lemma"] = rep.lemma;
  j["n"] = rep.n;
  j["k"] = rep.k;
  j["checked"] = rep.checked;
  j["violations"] = rep.violations;
  j["pass"] = rep.pass();
  j["extremal_witness"] = rep.extremal_witness;
  return j;
}

inline nlohmann::json stratification_to_json(const StratificationReport& rep) {
  nlohmann::json strata = nlohmann::json::object();
  for (const auto& [delta, count] : rep.counts)
    strata[std::to_string(delta)] = count;
  nlohmann::json j;
  j["n"] = rep.n;
  j["k"] = rep.k;
  j["graph_count"] = rep.total;
  j["strata"] = strata;
  return j;
}

// Experiment config document.  Sweep entries are single numbers for
// gaussian and smallworld sweeps, [signal, noise] pairs otherwise.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.n = j.at("n").get<int>();
  cfg.k = j.at("k").get<int>();
  cfg.model = j.at("model").get<std::string>();
  cfg.estimator = j.at("estimator").get<std::string>();
  cfg.trials = j.at("trials").get<int>();
  cfg.master_seed = j.at("master_seed").get<uint64_t>();
  cfg.noise = j.value("noise", 0.0);
  cfg.out = j.value("out", std::string());
  for (const nlohmann::json& entry : j.at("sweep")) {
    if (entry.is_array()) {
      if (entry.size() != 2)
        throw std::invalid_argument("config sweep pair needs two entries");
      cfg.sweep.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    } else {
      cfg.sweep.emplace_back(entry.get<double>(),
                             std::numeric_limits<double>::quiet_NaN());
    }
  }
  cfg.validate();
  return cfg;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json sweep = nlohmann::json::array();
  for (const auto& [value, second] : cfg.sweep) {
    if (std::isnan(second))
      sweep.push_back(value);
    else
      sweep.push_back(nlohmann::json::array({value, second}));
  }
  nlohmann::json j;
  j["n"] = cfg.n;
  j["k"] = cfg.k;
  j["model"] = cfg.model;
  j["estimator"] = cfg.estimator;
  j["sweep"] = sweep;
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["noise"] = cfg.noise;
  if (!cfg.out.empty()) j["out"] = cfg.out;
  return j;
}

inline void write_json_file(const std::filesystem::path& path,
                            const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  out << j.dump(2) << "\n";
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for read: " + path.string());
  return nlohmann::json::parse(in);
}

}  // namespace knng

#endif  // KNNG_IO_HPP_
