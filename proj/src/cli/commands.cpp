#include "nam/cli/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <unordered_map>

#include <CLI11.hpp>

#include "nam/cli/csv_io.hpp"
#include "nam/cli/orchestrator.hpp"
#include "nam/errors.hpp"
#include "nam/evaluation.hpp"

namespace nam::cli {

using nlohmann::json;

namespace {

std::string in_dir(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir + ": " + ec.message());
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  out.flush();
  if (!out) throw IoError(path + ": write failed");
}

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const NormalWishartPrior& prior) {
  return {{"mean", std::vector<double>(prior.mean.data(), prior.mean.data() + prior.mean.size())},
          {"lambda", prior.lambda},
          {"nu", prior.nu},
          {"scale", to_json(prior.scale.matrix())}};
}

const char* init_name(InitStrategy init) {
  return init == InitStrategy::PerturbedPrior ? "perturbed" : "random";
}

Hyperparameters build_hyper(const FitOptions& o, Index q, Index p) {
  Hyperparameters h = Hyperparameters::defaults(q, p, o.K, o.L, o.variant);
  h.x_prior = NormalWishartPrior::make(Eigen::VectorXd::Zero(q), o.lambda_x,
                                       o.nu_x.value_or(static_cast<double>(q) + 5.0),
                                       SpdMatrix::identity(q));
  h.y_prior = NormalWishartPrior::make(Eigen::VectorXd::Zero(p), o.lambda_y,
                                       o.nu_y.value_or(static_cast<double>(p) + 5.0),
                                       SpdMatrix::identity(p));
  h.a_alpha = o.a_alpha;
  h.b_alpha = o.b_alpha;
  h.a_beta = o.a_beta;
  h.b_beta = o.b_beta;
  h.validate();
  return h;
}

const char* status_name(const RestartOutcome& o) {
  if (!o.fit) return o.numerical_fault ? "numerical_fault" : "error";
  return o.fit->status == FitStatus::Converged ? "converged" : "max_iterations";
}

}  // namespace

void cmd_simulate(const SimulateOptions& options) {
  auto [data, truth] = simulate(options.scenario);
  ensure_dir(options.out_dir);
  write_dataset(data, in_dir(options.out_dir, "x.csv"), in_dir(options.out_dir, "y.csv"));
  write_group_labels(in_dir(options.out_dir, "truth_s.csv"), data.group_ids, truth.s_true);
  write_obs_labels(in_dir(options.out_dir, "truth_m.csv"), data.group_ids, truth.m_true);
}

json cmd_fit(const FitOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const NestedDataset data = read_dataset(options.x_path, options.y_path);
  const Hyperparameters hyper = build_hyper(options, data.q(), data.p());
  options.cavi.validate();
  if (options.restarts < 1) throw DomainError("restarts must be at least 1");
  RestartPlan plan;
  plan.restarts = options.restarts;
  plan.parallelism = resolve_parallelism(options.threads, options.restarts);
  plan.master_seed = options.master_seed;
  const double read_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const auto outcomes = run_restarts(data, hyper, options.cavi, plan);
  const std::optional<int> selected = select_restart(outcomes);

  json manifest;
  manifest["config"] = {
      {"x_path", options.x_path},
      {"y_path", options.y_path},
      {"variant", hyper.variant == Variant::NAM ? "nam" : "cam"},
      {"K", hyper.K},
      {"L", hyper.L},
      {"x_prior", to_json(hyper.x_prior)},
      {"y_prior", to_json(hyper.y_prior)},
      {"a_alpha", hyper.a_alpha},
      {"b_alpha", hyper.b_alpha},
      {"a_beta", hyper.a_beta},
      {"b_beta", hyper.b_beta},
      {"tol", options.cavi.tol},
      {"relative_tol", options.cavi.relative_tol},
      {"max_iter", options.cavi.max_iter},
      {"init", init_name(options.cavi.init)},
      {"restarts", plan.restarts},
      {"master_seed", plan.master_seed},
      {"seed_scheme", "splitmix64(master_seed + r)"},
  };
  manifest["data"] = {{"groups", data.groups()},
                      {"observations", data.total_obs()},
                      {"q", data.q()},
                      {"p", data.p()}};

  json restarts = json::array();
  std::vector<double> restart_seconds;
  for (const auto& o : outcomes) {
    json r = {{"index", o.index}, {"seed", o.seed}, {"status", status_name(o)}};
    if (o.fit) {
      r["final_elbo"] = o.fit->elbo_trace.back();
      r["iterations"] = o.fit->iterations;
      r["converged"] = o.fit->converged;
      r["n_gc"] = o.fit->n_gc;
      r["n_oc"] = o.fit->n_oc;
      r["max_gc_index"] = o.fit->final_max_gc_index;
      r["max_oc_index"] = o.fit->final_max_oc_index;
    } else {
      r["final_elbo"] = nullptr;
      r["error"] = o.error;
    }
    restarts.push_back(std::move(r));
    restart_seconds.push_back(o.seconds);
  }
  manifest["restarts"] = std::move(restarts);

  json warnings = json::array();
  const std::string out_dir = options.out_dir;
  ensure_dir(out_dir);
  if (selected) {
    const FitResult& best = *outcomes[*selected].fit;
    manifest["selected_restart"] = *selected;
    manifest["selected"] = {{"final_elbo", best.elbo_trace.back()},
                            {"iterations", best.iterations},
                            {"converged", best.converged},
                            {"n_gc", best.n_gc},
                            {"n_oc", best.n_oc}};
    const bool gc_edge = best.final_max_gc_index >= hyper.K;
    const bool oc_edge = best.final_max_oc_index >= hyper.L;
    manifest["truncation"] = {{"max_gc_index", best.final_max_gc_index},
                              {"max_oc_index", best.final_max_oc_index},
                              {"max_gc_index_any_sweep", best.max_gc_index},
                              {"max_oc_index_any_sweep", best.max_oc_index},
                              {"K", hyper.K},
                              {"L", hyper.L},
                              {"gc_boundary_occupied", gc_edge},
                              {"oc_boundary_occupied", oc_edge}};
    if (gc_edge) warnings.push_back("group-level truncation K is occupied; consider a larger K");
    if (oc_edge) {
      warnings.push_back("observation-level truncation L is occupied; consider a larger L");
    }
    if (!best.converged) warnings.push_back("selected restart hit max_iter before converging");

    write_group_labels(in_dir(out_dir, "s_hat.csv"), data.group_ids, best.s_hat);
    write_obs_labels(in_dir(out_dir, "m_hat.csv"), data.group_ids, best.m_hat);
    std::ofstream trace(in_dir(out_dir, "elbo_trace.csv"));
    trace << "iteration,elbo\n";
    for (std::size_t i = 0; i < best.elbo_trace.size(); ++i) {
      trace << i << ',' << format_double(best.elbo_trace[i]) << '\n';
    }
    trace.flush();
    if (!trace) throw IoError(in_dir(out_dir, "elbo_trace.csv") + ": write failed");
  } else {
    manifest["selected_restart"] = nullptr;
    warnings.push_back("every restart failed");
  }
  std::size_t failed = 0;
  for (const auto& o : outcomes) failed += !o.fit;
  if (failed > 0 && selected) {
    warnings.push_back(std::to_string(failed) + " restart(s) failed and were skipped");
  }
  manifest["warnings"] = warnings;
  manifest["timings"] = {
      {"read_seconds", read_seconds},
      {"restart_seconds", restart_seconds},
      {"parallelism", plan.parallelism},
      {"total_seconds",
       std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  write_json(in_dir(out_dir, "manifest.json"), manifest);

  for (const auto& w : warnings) std::cerr << "warning: " << w.get<std::string>() << '\n';
  if (!selected) {
    bool numerical = false;
    for (const auto& o : outcomes) numerical = numerical || o.numerical_fault;
    const std::string first = outcomes.front().error;
    if (numerical) throw NumericalFault("every restart failed: " + first);
    throw std::runtime_error("every restart failed: " + first);
  }
  return manifest;
}

json cmd_eval(const EvalOptions& options) {
  const GroupLabels s_hat = read_group_labels(options.s_hat);
  const GroupLabels s_true = read_group_labels(options.truth_s);
  const ObsLabels m_hat = read_obs_labels(options.m_hat);
  const ObsLabels m_true = read_obs_labels(options.truth_m);

  // Align the truth to the prediction's group order.
  std::unordered_map<std::string, std::size_t> truth_group;
  for (std::size_t j = 0; j < s_true.group_ids.size(); ++j) truth_group[s_true.group_ids[j]] = j;
  if (truth_group.size() != s_hat.group_ids.size()) {
    throw ParseError(options.s_hat + " and " + options.truth_s + " list different groups");
  }
  std::vector<int> s_true_aligned;
  for (const auto& id : s_hat.group_ids) {
    const auto it = truth_group.find(id);
    if (it == truth_group.end()) {
      throw ParseError(options.truth_s + ": group '" + id + "' missing");
    }
    s_true_aligned.push_back(s_true.labels[it->second]);
  }

  std::unordered_map<std::string, std::size_t> truth_obs;
  for (std::size_t j = 0; j < m_true.group_ids.size(); ++j) truth_obs[m_true.group_ids[j]] = j;
  if (truth_obs.size() != m_hat.group_ids.size()) {
    throw ParseError(options.m_hat + " and " + options.truth_m + " list different groups");
  }
  std::vector<std::vector<int>> m_true_aligned;
  for (std::size_t j = 0; j < m_hat.group_ids.size(); ++j) {
    const auto it = truth_obs.find(m_hat.group_ids[j]);
    if (it == truth_obs.end()) {
      throw ParseError(options.truth_m + ": group '" + m_hat.group_ids[j] + "' missing");
    }
    const auto& labels = m_true.labels[it->second];
    if (labels.size() != m_hat.labels[j].size()) {
      throw ParseError("group '" + m_hat.group_ids[j] + "' has " +
                       std::to_string(m_hat.labels[j].size()) + " predicted and " +
                       std::to_string(labels.size()) + " true observations");
    }
    m_true_aligned.push_back(labels);
  }

  std::vector<int> pooled_hat, pooled_true;
  for (std::size_t j = 0; j < m_hat.labels.size(); ++j) {
    pooled_hat.insert(pooled_hat.end(), m_hat.labels[j].begin(), m_hat.labels[j].end());
    pooled_true.insert(pooled_true.end(), m_true_aligned[j].begin(), m_true_aligned[j].end());
  }
  const OcAriSummary per_group = per_group_oc_ari(m_hat.labels, m_true_aligned);
  return {
      {"gc_ari", adjusted_rand_index(to_partition(s_hat.labels), to_partition(s_true_aligned))},
      {"oc_ari_per_group_mean", per_group.mean},
      {"oc_ari_per_group_sd", per_group.sd},
      {"oc_ari_overall", overall_oc_ari(m_hat.labels, m_true_aligned)},
      {"n_gc", count_clusters(to_partition(s_hat.labels))},
      {"n_gc_truth", count_clusters(to_partition(s_true_aligned))},
      {"n_oc", count_clusters(to_partition(pooled_hat))},
      {"n_oc_truth", count_clusters(to_partition(pooled_true))},
      {"groups", s_hat.labels.size()},
      {"observations", pooled_hat.size()},
  };
}

json cmd_prior(const PriorOptions& options) {
  const PriorSpec& s = options.spec;
  s.validate();
  const CoclusteringProbs co = coclustering_probs(s.alpha, s.beta);
  json out;
  out["spec"] = {{"alpha", s.alpha}, {"beta", s.beta}, {"hx", s.hx}, {"hy", s.hy}};
  out["closed_form"] = {{"mean", prior_mean(s)},
                        {"variance", prior_variance(s)},
                        {"group_coclustering", co.group},
                        {"obs_coclustering", co.observation},
                        {"correlation", prior_correlation(s)},
                        {"cam_correlation", cam_correlation(s.alpha, s.beta)}};
  if (options.mc_draws > 0) {
    const PriorMonteCarlo mc = monte_carlo_prior(s, options.mc_draws, options.seed,
                                                 options.truncation);
    auto est = [](const McEstimate& e) { return json{{"value", e.value}, {"se", e.se}}; };
    out["monte_carlo"] = {{"draws", mc.draws},
                          {"seed", options.seed},
                          {"truncation", options.truncation},
                          {"mean", est(mc.mean)},
                          {"variance", est(mc.variance)},
                          {"group_coclustering", est(mc.group_coclustering)},
                          {"obs_coclustering", est(mc.obs_coclustering)},
                          {"correlation", est(mc.correlation)}};
  }
  return out;
}

json cmd_bound(const TruncationSpec& spec) {
  return {{"alpha", spec.alpha}, {"beta", spec.beta}, {"K", spec.K},
          {"L", spec.L},         {"J", spec.J},       {"N", spec.N},
          {"bound", truncation_bound(spec)}};
}

int run(int argc, char** argv) {
  CLI::App app{"Nested atoms model: simulation, variational fitting and evaluation"};
  app.require_subcommand(1);

  SimulateOptions sim;
  std::string kernel = "gaussian";
  std::optional<double> alpha_sim, beta_sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic nested dataset");
  simulate_cmd->add_option("-J,--groups", sim.scenario.J, "Number of groups")->capture_default_str();
  simulate_cmd->add_option("-n,--obs", sim.scenario.n, "Observations per group")->capture_default_str();
  simulate_cmd->add_option("-p", sim.scenario.p, "Observation-level dimension")->capture_default_str();
  simulate_cmd->add_option("-q", sim.scenario.q, "Group-level dimension")->capture_default_str();
  simulate_cmd->add_option("--k-true", sim.scenario.K_true, "True group clusters")->capture_default_str();
  simulate_cmd->add_option("--l-true", sim.scenario.L_true, "True observation clusters")->capture_default_str();
  simulate_cmd->add_option("--alpha", alpha_sim, "Fixed alpha (default: Gamma(25, 1) draw)");
  simulate_cmd->add_option("--beta", beta_sim, "Fixed beta (default: Gamma(25, 1) draw)");
  simulate_cmd->add_option("--kernel", kernel, "Component kernel")
      ->check(CLI::IsMember({"gaussian", "t"}))
      ->capture_default_str();
  simulate_cmd->add_option("--df", sim.scenario.df, "Student-t degrees of freedom")->capture_default_str();
  simulate_cmd->add_option("--omit", sim.scenario.omit_r, "Group-level columns to drop")->capture_default_str();
  simulate_cmd->add_option("--seed", sim.scenario.seed, "Random seed")->capture_default_str();
  simulate_cmd->add_option("-o,--out-dir", sim.out_dir, "Output directory")->capture_default_str();

  FitOptions fit_opts;
  std::string variant = "nam";
  std::string init = "perturbed";
  auto* fit_cmd = app.add_subcommand("fit", "Fit the model with multiple restarts");
  fit_cmd->add_option("--x", fit_opts.x_path, "Group-level CSV")->capture_default_str();
  fit_cmd->add_option("--y", fit_opts.y_path, "Observation-level CSV")->capture_default_str();
  fit_cmd->add_option("-o,--out-dir", fit_opts.out_dir, "Output directory")->capture_default_str();
  fit_cmd->add_option("-K", fit_opts.K, "Group-level truncation")->capture_default_str();
  fit_cmd->add_option("-L", fit_opts.L, "Observation-level truncation")->capture_default_str();
  fit_cmd->add_option("--variant", variant, "nam, or cam to ignore x")
      ->check(CLI::IsMember({"nam", "cam"}))
      ->capture_default_str();
  fit_cmd->add_option("-R,--restarts", fit_opts.restarts, "Number of restarts")->capture_default_str();
  fit_cmd->add_option("-P,--threads", fit_opts.threads, "Concurrent restarts (0 = all cores)")
      ->capture_default_str();
  fit_cmd->add_option("--seed", fit_opts.master_seed, "Master seed")->capture_default_str();
  fit_cmd->add_option("--tol", fit_opts.cavi.tol, "ELBO convergence tolerance")->capture_default_str();
  fit_cmd->add_flag("--relative-tol", fit_opts.cavi.relative_tol, "Relative ELBO criterion");
  fit_cmd->add_option("--max-iter", fit_opts.cavi.max_iter, "Sweep limit per restart")
      ->capture_default_str();
  fit_cmd->add_option("--init", init, "Initialization strategy")
      ->check(CLI::IsMember({"perturbed", "random"}))
      ->capture_default_str();
  fit_cmd->add_option("--lambda-x", fit_opts.lambda_x, "NW precision scaling, x")->capture_default_str();
  fit_cmd->add_option("--lambda-y", fit_opts.lambda_y, "NW precision scaling, y")->capture_default_str();
  fit_cmd->add_option("--nu-x", fit_opts.nu_x, "Wishart degrees of freedom, x (default q + 5)");
  fit_cmd->add_option("--nu-y", fit_opts.nu_y, "Wishart degrees of freedom, y (default p + 5)");
  fit_cmd->add_option("--a-alpha", fit_opts.a_alpha, "Gamma shape of alpha")->capture_default_str();
  fit_cmd->add_option("--b-alpha", fit_opts.b_alpha, "Gamma rate of alpha")->capture_default_str();
  fit_cmd->add_option("--a-beta", fit_opts.a_beta, "Gamma shape of beta")->capture_default_str();
  fit_cmd->add_option("--b-beta", fit_opts.b_beta, "Gamma rate of beta")->capture_default_str();

  EvalOptions eval_opts;
  std::string eval_out;
  auto* eval_cmd = app.add_subcommand("eval", "Score assignments against ground truth");
  eval_cmd->add_option("--s-hat", eval_opts.s_hat, "Predicted group labels")->capture_default_str();
  eval_cmd->add_option("--m-hat", eval_opts.m_hat, "Predicted observation labels")->capture_default_str();
  eval_cmd->add_option("--truth-s", eval_opts.truth_s, "True group labels")->capture_default_str();
  eval_cmd->add_option("--truth-m", eval_opts.truth_m, "True observation labels")->capture_default_str();
  eval_cmd->add_option("--out", eval_out, "Also write the metrics JSON here");

  PriorOptions prior_opts;
  auto* prior_cmd = app.add_subcommand("prior", "Prior moments of the random measures");
  prior_cmd->add_option("--alpha", prior_opts.spec.alpha, "Group-level concentration")->capture_default_str();
  prior_cmd->add_option("--beta", prior_opts.spec.beta, "Observation-level concentration")->capture_default_str();
  prior_cmd->add_option("--hx", prior_opts.spec.hx, "Base mass of the set, x")->capture_default_str();
  prior_cmd->add_option("--hy", prior_opts.spec.hy, "Base mass of the set, y")->capture_default_str();
  prior_cmd->add_option("--mc", prior_opts.mc_draws, "Monte-Carlo draws (0 = none)")->capture_default_str();
  prior_cmd->add_option("--seed", prior_opts.seed, "Monte-Carlo seed")->capture_default_str();
  prior_cmd->add_option("--truncation", prior_opts.truncation, "Atoms per level")->capture_default_str();

  TruncationSpec bound_spec;
  auto* bound_cmd = app.add_subcommand("bound", "Truncation error bound");
  bound_cmd->add_option("--alpha", bound_spec.alpha, "Group-level concentration")->capture_default_str();
  bound_cmd->add_option("--beta", bound_spec.beta, "Observation-level concentration")->capture_default_str();
  bound_cmd->add_option("-K", bound_spec.K, "Group-level truncation")->capture_default_str();
  bound_cmd->add_option("-L", bound_spec.L, "Observation-level truncation")->capture_default_str();
  bound_cmd->add_option("-J", bound_spec.J, "Number of groups")->capture_default_str();
  bound_cmd->add_option("-N", bound_spec.N, "Total observations")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParseError;
  }

  try {
    if (*simulate_cmd) {
      sim.scenario.kernel = kernel == "t" ? Kernel::StudentT : Kernel::Gaussian;
      sim.scenario.alpha_sim = alpha_sim;
      sim.scenario.beta_sim = beta_sim;
      cmd_simulate(sim);
    } else if (*fit_cmd) {
      fit_opts.variant = variant == "cam" ? Variant::CAM : Variant::NAM;
      fit_opts.cavi.init =
          init == "random" ? InitStrategy::RandomResponsibility : InitStrategy::PerturbedPrior;
      const json manifest = cmd_fit(fit_opts);
      std::cout << json{{"selected_restart", manifest["selected_restart"]},
                        {"selected", manifest["selected"]}}
                       .dump(2)
                << '\n';
    } else if (*eval_cmd) {
      const json metrics = cmd_eval(eval_opts);
      if (!eval_out.empty()) write_json(eval_out, metrics);
      std::cout << metrics.dump(2) << '\n';
    } else if (*prior_cmd) {
      std::cout << cmd_prior(prior_opts).dump(2) << '\n';
    } else if (*bound_cmd) {
      std::cout << cmd_bound(bound_spec).dump(2) << '\n';
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParseError;
  } catch (const DomainError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const NumericalFault& e) {
    std::cerr << "numerical fault: " << e.what() << '\n';
    return kExitNumericalFault;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace nam::cli
