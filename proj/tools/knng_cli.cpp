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

// Command line front end: instance generation, recovery, divergence
// calculations, exhaustive small-n verification, and seeded experiments.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "knng/estimators.hpp"
#include "knng/harness.hpp"
#include "knng/io.hpp"
#include "knng/sampler.hpp"
#include "knng/weight_model.hpp"

namespace {

struct GenerateArgs {
  int n = 0;
  int k = 0;
  std::string family;
  double signal = 0;
  double noise = 0;
  double eps = 0;
  uint64_t seed = 0;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  knng::ModelPair model = a.family == "smallworld"
                              ? knng::smallworld_model({a.n, a.k, a.eps})
                              : [&] {
                                  switch (knng::family_from_name(a.family)) {
                                    case knng::Family::gaussian:
                                      return knng::ModelPair::gaussian(
                                          a.signal, a.noise);
                                    case knng::Family::poisson:
                                      return knng::ModelPair::poisson(a.signal,
                                                                      a.noise);
                                    default:
                                      return knng::ModelPair::bernoulli(
                                          a.signal, a.noise);
                                  }
                                }();
  const knng::Instance inst =
      knng::sample_instance(a.n, a.k, model, std::nullopt, a.seed);
  const auto path = knng::resolve_out_path(a.out);
  knng::write_json_file(path, knng::instance_to_json(inst));
  std::cout << path.string() << "\n";
  return 0;
}

struct RecoverArgs {
  std::string in;
  std::string estimator;
  int start = 0;
  double eps_n = -1;  // negative means default
  std::string out;
};

int run_recover(const RecoverArgs& a) {
  const knng::Instance inst =
      knng::instance_from_json(knng::read_json_file(a.in));
  const auto t0 = std::chrono::steady_clock::now();
  knng::RecoveryResult res;
  if (a.estimator == "mle") {
    res = knng::mle_bruteforce(inst);
  } else if (a.estimator == "greedy") {
    res = knng::greedy_smallworld(inst, a.start);
  } else if (a.estimator == "threshold") {
    res = knng::threshold_estimator(
        inst, a.eps_n < 0 ? std::nullopt : std::optional<double>(a.eps_n));
  } else {
    res = knng::spectral_ordering(inst);
  }
  const auto t1 = std::chrono::steady_clock::now();
  const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  const nlohmann::json j = knng::result_to_json(a.estimator, res, inst, ms);
  if (!a.out.empty()) knng::write_json_file(knng::resolve_out_path(a.out), j);
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct DivergenceArgs {
  std::string family;
  double signal = 0;
  double noise = 0;
  int n = 0;
  int k = 0;
};

int run_divergence(const DivergenceArgs& a) {
  knng::ModelPair m = [&] {
    switch (knng::family_from_name(a.family)) {
      case knng::Family::gaussian:
        return knng::ModelPair::gaussian(a.signal, a.noise);
      case knng::Family::poisson:
        return knng::ModelPair::poisson(a.signal, a.noise);
      default:
        return knng::ModelPair::bernoulli(a.signal, a.noise);
    }
  }();
  nlohmann::json j;
  j["model"] = knng::model_to_json(m);
  j["renyi_half"] = knng::renyi_half(m);
  j["kl_signal_noise"] = knng::kl(m);
  j["kl_noise_signal"] = knng::kl_reverse(m);
  if (a.n > 0) {
    const knng::ThresholdRatios r = knng::threshold_ratios(a.n, a.k, m);
    j["n"] = a.n;
    j["k"] = a.k;
    j["exact_ratio"] = r.exact_ratio;
    j["almost_exact_ratio"] = r.almost_exact_ratio;
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct EnumerateArgs {
  int n = 0;
  int k = 0;
  std::string lemma = "all";
  std::string out;
};

int run_enumerate(const EnumerateArgs& a) {
  const std::vector<knng::EdgeSet> keys =
      knng::enumerate_knn_graph_keys(a.n, a.k);
  const knng::KnnGraph x_star =
      knng::knn_from_permutation(knng::Permutation::identity(a.n), a.k);
  const knng::StratificationReport strat = knng::stratify(x_star, keys);

  nlohmann::json j = knng::stratification_to_json(strat);
  nlohmann::json lemmas = nlohmann::json::array();
  bool violated = false;
  auto add = [&](const knng::LemmaReport& rep) {
    lemmas.push_back(knng::lemma_report_to_json(rep));
    violated = violated || !rep.pass();
  };
  if (a.lemma == "all" || a.lemma == "balance")
    add(knng::verify_balance(x_star, keys));
  if ((a.lemma == "all" && a.k >= 2) || a.lemma == "nearby")
    add(knng::verify_nearby_lemma(x_star, keys));
  if (a.lemma == "all" || a.lemma == "bounds") {
    add(knng::verify_simple_bound(strat));
    add(knng::verify_red_set_bounds(x_star, keys));
  }
  j["lemmas"] = lemmas;
  j["pass"] = !violated;
  if (!a.out.empty()) knng::write_json_file(knng::resolve_out_path(a.out), j);
  std::cout << j.dump(2) << "\n";
  return violated ? 1 : 0;
}

struct ExperimentArgs {
  std::string config;
  int threads = 1;
  std::string out;
  std::string records;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  knng::ExperimentConfig cfg =
      knng::config_from_json(knng::read_json_file(a.config));
  if (!a.out.empty()) cfg.out = a.out;
  const knng::ExperimentResult res = knng::run_experiment(cfg, a.threads);
  if (!cfg.out.empty()) {
    std::ofstream out(knng::resolve_out_path(cfg.out));
    if (!out) throw std::runtime_error("cannot open " + cfg.out);
    knng::write_summary_csv(out, res.summary);
  }
  if (!a.records.empty()) {
    std::ofstream out(knng::resolve_out_path(a.records));
    if (!out) throw std::runtime_error("cannot open " + a.records);
    knng::write_trial_csv(out, res.records);
  }
  knng::write_summary_csv(std::cout, res.summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hidden ring graph toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand(
      "generate", "Sample a weighted instance and write it as JSON");
  generate->add_option("--n", gen.n, "vertex count")->required();
  generate->add_option("--k", gen.k, "neighbors per side")->required();
  generate
      ->add_option("--family", gen.family,
                   "gaussian|poisson|bernoulli|smallworld")
      ->required()
      ->check(CLI::IsMember(
          {"gaussian", "poisson", "bernoulli", "smallworld"}));
  generate->add_option("--signal", gen.signal, "edge weight parameter");
  generate->add_option("--noise", gen.noise, "non-edge weight parameter");
  generate->add_option("--eps", gen.eps, "smallworld rewiring probability");
  generate->add_option("--seed", gen.seed, "instance seed")->required();
  generate->add_option("--out", gen.out, "output JSON path")->required();

  RecoverArgs rec;
  CLI::App* recover = app.add_subcommand(
      "recover", "Run an estimator on an instance JSON file");
  recover->add_option("--in", rec.in, "instance JSON path")->required();
  recover->add_option("--estimator", rec.estimator, "recovery procedure")
      ->required()
      ->check(CLI::IsMember({"mle", "greedy", "threshold", "spectral"}));
  recover->add_option("--start", rec.start, "greedy start vertex");
  recover->add_option("--eps-n", rec.eps_n, "threshold slack override");
  recover->add_option("--out", rec.out, "result JSON path");

  DivergenceArgs div;
  CLI::App* divergence = app.add_subcommand(
      "divergence", "Print divergences and recovery threshold ratios");
  divergence->add_option("--family", div.family, "gaussian|poisson|bernoulli")
      ->required()
      ->check(CLI::IsMember({"gaussian", "poisson", "bernoulli"}));
  divergence->add_option("--signal", div.signal, "edge weight parameter")
      ->required();
  divergence->add_option("--noise", div.noise, "non-edge weight parameter")
      ->required();
  divergence->add_option("--n", div.n, "vertex count for threshold ratios");
  divergence->add_option("--k", div.k, "neighbors per side");

  EnumerateArgs enu;
  CLI::App* enumerate = app.add_subcommand(
      "enumerate", "Exhaustively verify counting bounds at small n");
  enumerate->add_option("--n", enu.n, "vertex count")->required();
  enumerate->add_option("--k", enu.k, "neighbors per side")->required();
  enumerate->add_option("--lemma", enu.lemma, "which checks to run")
      ->check(CLI::IsMember({"all", "balance", "nearby", "bounds"}));
  enumerate->add_option("--out", enu.out, "report JSON path");

  ExperimentArgs exp;
  CLI::App* experiment = app.add_subcommand(
      "experiment", "Run a seeded Monte Carlo sweep from a JSON config");
  experiment->add_option("--config", exp.config, "config JSON path")
      ->required();
  experiment->add_option("--threads", exp.threads, "worker count");
  experiment->add_option("--out", exp.out, "summary CSV path override");
  experiment->add_option("--records", exp.records, "per-trial CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return run_generate(gen);
    if (recover->parsed()) return run_recover(rec);
    if (divergence->parsed()) return run_divergence(div);
    if (enumerate->parsed()) return run_enumerate(enu);
    if (experiment->parsed()) return run_experiment_cmd(exp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
