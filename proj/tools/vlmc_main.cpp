// Command-line front end. All model computation goes through the C API in
// vlmc.h; this file only parses arguments, shuttles files and prints tables.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vlmc.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

int status_exit_code(vlmc_status status) {
  switch (status) {
    case VLMC_OK:
      return kExitOk;
    case VLMC_ERR_INVALID_ARGUMENT:
    case VLMC_ERR_PARSE:
    case VLMC_ERR_VALIDATION:
    case VLMC_ERR_SUPPORT:
    case VLMC_ERR_IO:
      return kExitValidation;
    case VLMC_ERR_BOUND:
    case VLMC_ERR_NUMERIC:
      return kExitNumeric;
    default:
      return kExitInternal;
  }
}

[[noreturn]] void die(vlmc_status status) {
  std::cerr << "error: " << vlmc_last_error() << "\n";
  std::exit(status_exit_code(status));
}

void check(vlmc_status status) {
  if (status != VLMC_OK) die(status);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("VLMC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: VLMC_SEED is not a valid integer: " << env << "\n";
      std::exit(kExitValidation);
    }
  }
  return 0;
}

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

void write_manifest(const std::string& dir, const std::string& command,
                    const json& config) {
  json manifest;
  manifest["command"] = command;
  manifest["config"] = config;
  manifest["version"] = vlmc_version();
  std::ofstream out(out_path(dir, "manifest.json"));
  out << manifest.dump(2) << "\n";
  if (!out) {
    std::cerr << "error: cannot write manifest in " << dir << "\n";
    std::exit(kExitValidation);
  }
}

// Contexts travel through the API oldest-first; the debug rendering flips
// them to the internal root-to-leaf order.
std::string render_contexts(const std::string& contexts_json,
                            bool recent_first) {
  json parsed = json::parse(contexts_json);
  std::string out;
  for (const auto& entry : parsed) {
    std::string ctx = entry.get<std::string>();
    if (recent_first) std::reverse(ctx.begin(), ctx.end());
    if (!out.empty()) out += ' ';
    out += ctx;
  }
  return out;
}

struct DataArgs {
  std::string path;
  int alphabet_size = 0;
  int max_depth = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--data", path, "dataset file, one sequence per line")
        ->required();
    cmd->add_option("-m,--alphabet-size", alphabet_size,
                    "number of symbols in the alphabet")
        ->required();
    cmd->add_option("-L,--max-depth", max_depth,
                    "maximal context length considered")
        ->required();
  }

  vlmc_dataset* load() const {
    vlmc_dataset* ds = nullptr;
    check(vlmc_dataset_load(path.c_str(), alphabet_size, max_depth, &ds));
    return ds;
  }
};

int run_simulate(const std::string& model, const std::string& pct_path,
                 const std::string& allowed, int num_sequences,
                 std::int64_t length, std::int64_t burn_in,
                 std::optional<std::uint64_t> seed_flag,
                 const std::string& dir) {
  std::uint64_t seed = resolve_seed(seed_flag);

  vlmc_pct* pct = nullptr;
  if (!pct_path.empty()) {
    check(vlmc_pct_load(pct_path.c_str(),
                        allowed.empty() ? nullptr : allowed.c_str(), &pct));
  } else if (model == "model1") {
    check(vlmc_pct_model1(&pct));
  } else if (model == "model2") {
    check(vlmc_pct_model2(&pct));
  } else {
    std::cerr << "error: pass --model model1|model2 or --pct FILE\n";
    return kExitValidation;
  }

  vlmc_dataset* ds = nullptr;
  vlmc_status status =
      vlmc_simulate(pct, num_sequences, length, seed, burn_in, &ds);
  if (status != VLMC_OK) {
    vlmc_pct_free(pct);
    die(status);
  }
  std::string dataset_file = out_path(dir, "dataset.txt");
  status = vlmc_dataset_save(ds, dataset_file.c_str());
  if (status != VLMC_OK) die(status);

  json config{{"model", pct_path.empty() ? model : "custom"},
              {"pct", pct_path},
              {"allowed", allowed},
              {"I", num_sequences},
              {"T", length},
              {"burn_in", burn_in},
              {"seed", seed},
              {"depth", vlmc_pct_depth(pct)},
              {"alphabet_size", vlmc_pct_alphabet_size(pct)}};
  write_manifest(dir, "simulate", config);

  std::cout << "wrote " << dataset_file << " (" << num_sequences << " x "
            << length << " symbols, seed " << seed << ")\n";
  vlmc_dataset_free(ds);
  vlmc_pct_free(pct);
  return kExitOk;
}

int run_posterior(const DataArgs& data, std::int64_t iters,
                  std::int64_t burn_in, double alpha, int renewing,
                  int not_renewing, const std::string& allowed, int top,
                  bool dump_chain, const std::string& render,
                  std::optional<std::uint64_t> seed_flag,
                  const std::string& dir) {
  vlmc_mh_options options;
  vlmc_mh_options_init(&options);
  options.alpha = alpha;
  options.n_iter = iters;
  options.burn_in = burn_in;
  options.seed = resolve_seed(seed_flag);
  options.renewing_state = renewing;
  options.not_renewing_state = not_renewing;
  options.allowed_json_path = allowed.empty() ? nullptr : allowed.c_str();

  vlmc_dataset* ds = data.load();
  vlmc_posterior* posterior = nullptr;
  vlmc_status status = vlmc_posterior_run(ds, &options, &posterior);
  if (status != VLMC_OK) {
    vlmc_dataset_free(ds);
    die(status);
  }

  check(vlmc_posterior_write_json(posterior,
                                  out_path(dir, "posterior.json").c_str()));
  if (dump_chain) {
    check(vlmc_posterior_dump_chain(
        posterior, out_path(dir, "chain.csv").c_str(),
        out_path(dir, "chain_trees.json").c_str()));
  }

  json config{{"data", data.path},
              {"alphabet_size", data.alphabet_size},
              {"max_depth", data.max_depth},
              {"iters", iters},
              {"burn_in", burn_in},
              {"alpha", alpha},
              {"renewing", renewing},
              {"not_renewing", not_renewing},
              {"allowed", allowed},
              {"seed", options.seed},
              {"dump_chain", dump_chain}};
  write_manifest(dir, "posterior", config);

  bool recent_first = render == "recent-first";
  int shown = std::min(top, vlmc_posterior_num_trees(posterior));
  std::cout << "acceptance rate "
            << vlmc_posterior_acceptance_rate(posterior) << ", "
            << vlmc_posterior_num_trees(posterior)
            << " distinct trees visited\n";
  std::cout << "freq      contexts (" << render << ")\n";
  for (int rank = 0; rank < shown; ++rank) {
    double freq = 0.0;
    char* contexts = nullptr;
    check(vlmc_posterior_entry(posterior, rank, &freq, nullptr, &contexts));
    std::printf("%-9.5f %s\n", freq,
                render_contexts(contexts, recent_first).c_str());
    vlmc_string_free(contexts);
  }

  vlmc_posterior_free(posterior);
  vlmc_dataset_free(ds);
  return kExitOk;
}

int run_renewal(const DataArgs& data, int state, int training_size,
                std::int64_t iters, std::int64_t burn_in, double alpha,
                double trim, int trim_count, int jobs,
                const std::string& allowed,
                std::optional<std::uint64_t> seed_flag,
                const std::string& dir) {
  vlmc_renewal_options options;
  vlmc_renewal_options_init(&options);
  options.state = state;
  options.training_size = training_size;
  options.n_iter = iters;
  options.burn_in = burn_in;
  options.alpha = alpha;
  options.trim_fraction = trim;
  options.trim_count = trim_count;
  options.seed = resolve_seed(seed_flag);
  options.jobs = jobs;
  options.allowed_json_path = allowed.empty() ? nullptr : allowed.c_str();

  vlmc_dataset* ds = data.load();
  vlmc_report* report = nullptr;
  vlmc_status status = vlmc_renewal_run(ds, &options, &report);
  if (status != VLMC_OK) {
    vlmc_dataset_free(ds);
    die(status);
  }

  check(vlmc_report_write_json(report, out_path(dir, "report.json").c_str()));
  check(vlmc_report_write_pbf_csv(report, out_path(dir, "pbf.csv").c_str()));

  json config{{"data", data.path},
              {"alphabet_size", data.alphabet_size},
              {"max_depth", data.max_depth},
              {"state", state},
              {"v", training_size},
              {"iters", iters},
              {"burn_in", burn_in},
              {"alpha", alpha},
              {"trim", trim},
              {"trim_count", trim_count},
              {"jobs", jobs},
              {"allowed", allowed},
              {"seed", options.seed}};
  write_manifest(dir, "renewal", config);

  char* label = nullptr;
  check(vlmc_report_label(report, 0, 1, &label));
  std::printf("a  I   v  AIBF      GIBF      AIBF_trim GIBF_trim\n");
  std::printf("%-2d %-3d %-2d %-9.2f %-9.2f %-9.2f %-9.2f\n", state,
              vlmc_dataset_num_sequences(ds), training_size,
              vlmc_report_log10_aibf(report, 0),
              vlmc_report_log10_gibf(report, 0),
              vlmc_report_log10_aibf(report, 1),
              vlmc_report_log10_gibf(report, 1));
  std::printf("trimmed GIBF evidence: %s\n", label);
  vlmc_string_free(label);

  vlmc_report_free(report);
  vlmc_dataset_free(ds);
  return kExitOk;
}

int run_exact(const DataArgs& data, int state, double alpha,
              const std::string& allowed, int top, const std::string& render,
              const std::string& dir) {
  vlmc_exact_options options;
  vlmc_exact_options_init(&options);
  options.state = state;
  options.alpha = alpha;
  options.top_trees = top;
  options.allowed_json_path = allowed.empty() ? nullptr : allowed.c_str();

  double estimate = 0.0;
  vlmc_status bound = vlmc_exact_tree_count(data.alphabet_size, data.max_depth,
                                            &estimate, nullptr);
  if (bound != VLMC_OK) die(bound);

  vlmc_dataset* ds = data.load();
  vlmc_exact* exact = nullptr;
  vlmc_status status = vlmc_exact_run(ds, &options, &exact);
  if (status != VLMC_OK) {
    vlmc_dataset_free(ds);
    die(status);
  }

  check(vlmc_exact_write_json(exact, out_path(dir, "exact.json").c_str()));
  json config{{"data", data.path},
              {"alphabet_size", data.alphabet_size},
              {"max_depth", data.max_depth},
              {"state", state},
              {"alpha", alpha},
              {"allowed", allowed},
              {"top", top}};
  write_manifest(dir, "exact", config);

  std::cout << vlmc_exact_num_trees(exact)
            << " trees in the admissible space\n";
  std::cout << "log10 evidence (uniform prior): "
            << vlmc_exact_log10_evidence(exact) << "\n";
  if (state >= 0) {
    double bf = 0.0;
    check(vlmc_exact_log10_bf(exact, &bf));
    std::cout << "log10 BF(" << state << " renewing vs not): " << bf << "\n";
  }
  bool recent_first = render == "recent-first";
  int shown = vlmc_exact_num_top(exact);
  std::cout << "prob      contexts (" << render << ")\n";
  for (int rank = 0; rank < shown; ++rank) {
    double prob = 0.0;
    char* contexts = nullptr;
    check(vlmc_exact_top_entry(exact, rank, &prob, &contexts));
    std::printf("%-9.5f %s\n", prob,
                render_contexts(contexts, recent_first).c_str());
    vlmc_string_free(contexts);
  }

  vlmc_exact_free(exact);
  vlmc_dataset_free(ds);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Renewal-state evaluation for variable-length Markov chains"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "generate sequences from a probabilistic context tree");
  std::string model, pct_path, sim_allowed, sim_dir = ".";
  int sim_I = 1;
  std::int64_t sim_T = 1000, sim_burn_in = -1;
  std::optional<std::uint64_t> sim_seed;
  simulate->add_option("--model", model, "built-in model: model1 or model2");
  simulate->add_option("--pct", pct_path, "probabilistic context tree JSON");
  simulate->add_option("--allowed", sim_allowed,
                       "allowed-transition matrix JSON");
  simulate->add_option("--I", sim_I, "number of independent sequences")
      ->required();
  simulate->add_option("--T", sim_T, "length of each sequence")->required();
  simulate->add_option("--burn-in", sim_burn_in,
                       "pre-sample steps dropped (default max(1000, 10L))");
  simulate->add_option("--seed", sim_seed, "random seed (or VLMC_SEED)");
  simulate->add_option("-o,--out", sim_dir, "output directory");

  // posterior
  auto* posterior = app.add_subcommand(
      "posterior", "sample context trees from the marginal posterior");
  DataArgs posterior_data;
  posterior_data.attach(posterior);
  std::int64_t post_iters = 100000, post_burn_in = 0;
  double post_alpha = 0.001;
  int post_renewing = -1, post_not_renewing = -1, post_top = 10;
  std::string post_allowed, post_render = "oldest-first", post_dir = ".";
  bool post_dump = false;
  std::optional<std::uint64_t> post_seed;
  posterior->add_option("--iters", post_iters, "Metropolis-Hastings steps");
  posterior->add_option("--burn-in", post_burn_in,
                        "iterations dropped from the frequency table");
  posterior->add_option("--alpha", post_alpha, "Dirichlet hyperparameter");
  posterior->add_option("--renewing", post_renewing,
                        "restrict to trees where this state renews");
  posterior->add_option("--not-renewing", post_not_renewing,
                        "restrict to trees where this state does not renew");
  posterior->add_option("--allowed", post_allowed,
                        "allowed-transition matrix JSON");
  posterior->add_option("--top", post_top, "trees printed");
  posterior->add_flag("--dump-chain", post_dump,
                      "write chain.csv and chain_trees.json");
  posterior->add_option("--render", post_render,
                        "context rendering: oldest-first or recent-first")
      ->check(CLI::IsMember({"oldest-first", "recent-first"}));
  posterior->add_option("--seed", post_seed, "random seed (or VLMC_SEED)");
  posterior->add_option("-o,--out", post_dir, "output directory");

  // renewal
  auto* renewal = app.add_subcommand(
      "renewal", "intrinsic Bayes factors for a renewal-state hypothesis");
  DataArgs renewal_data;
  renewal_data.attach(renewal);
  int ren_state = 0, ren_v = 1, ren_trim_count = -1, ren_jobs = 1;
  std::int64_t ren_iters = 100000, ren_burn_in = 0;
  double ren_alpha = 0.001, ren_trim = 0.10;
  std::string ren_allowed, ren_dir = ".";
  std::optional<std::uint64_t> ren_seed;
  renewal->add_option("-a,--state", ren_state, "candidate renewal state")
      ->required();
  renewal->add_option("--v", ren_v, "sequences per training subset");
  renewal->add_option("--iters", ren_iters, "steps per chain");
  renewal->add_option("--burn-in", ren_burn_in,
                      "iterations dropped from each PBF average");
  renewal->add_option("--alpha", ren_alpha, "Dirichlet hyperparameter");
  renewal->add_option("--trim", ren_trim, "trimmed fraction of PBFs");
  renewal->add_option("--trim-count", ren_trim_count,
                      "records cut per tail (overrides --trim)");
  renewal->add_option("--jobs", ren_jobs, "worker threads over subsets");
  renewal->add_option("--allowed", ren_allowed,
                      "allowed-transition matrix JSON");
  renewal->add_option("--seed", ren_seed, "random seed (or VLMC_SEED)");
  renewal->add_option("-o,--out", ren_dir, "output directory");

  // exact
  auto* exact = app.add_subcommand(
      "exact", "exact evidence, posterior and Bayes factor by enumeration");
  DataArgs exact_data;
  exact_data.attach(exact);
  int ex_state = -1, ex_top = 10;
  double ex_alpha = 0.001;
  std::string ex_allowed, ex_render = "oldest-first", ex_dir = ".";
  exact->add_option("-a,--state", ex_state,
                    "candidate renewal state for the Bayes factor");
  exact->add_option("--alpha", ex_alpha, "Dirichlet hyperparameter");
  exact->add_option("--allowed", ex_allowed,
                    "allowed-transition matrix JSON");
  exact->add_option("--top", ex_top, "posterior trees reported");
  exact->add_option("--render", ex_render,
                    "context rendering: oldest-first or recent-first")
      ->check(CLI::IsMember({"oldest-first", "recent-first"}));
  exact->add_option("-o,--out", ex_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (simulate->parsed()) {
    return run_simulate(model, pct_path, sim_allowed, sim_I, sim_T,
                        sim_burn_in, sim_seed, sim_dir);
  }
  if (posterior->parsed()) {
    return run_posterior(posterior_data, post_iters, post_burn_in, post_alpha,
                         post_renewing, post_not_renewing, post_allowed,
                         post_top, post_dump, post_render, post_seed,
                         post_dir);
  }
  if (renewal->parsed()) {
    return run_renewal(renewal_data, ren_state, ren_v, ren_iters, ren_burn_in,
                       ren_alpha, ren_trim, ren_trim_count, ren_jobs,
                       ren_allowed, ren_seed, ren_dir);
  }
  if (exact->parsed()) {
    return run_exact(exact_data, ex_state, ex_alpha, ex_allowed, ex_top,
                     ex_render, ex_dir);
  }
  return kExitValidation;
}
