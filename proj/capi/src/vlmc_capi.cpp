#include "vlmc.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "vlmc/count_trie.hpp"
#include "vlmc/dataset.hpp"
#include "vlmc/error.hpp"
#include "vlmc/inference.hpp"
#include "vlmc/intrinsic.hpp"
#include "vlmc/json_io.hpp"
#include "vlmc/math.hpp"
#include "vlmc/prior.hpp"
#include "vlmc/simulate.hpp"
#include "vlmc/tree.hpp"

struct vlmc_dataset {
  vlmc::Dataset impl;
};
struct vlmc_tree {
  vlmc::ContextTree impl;
};
struct vlmc_pct {
  vlmc::ProbabilisticContextTree impl;
};
struct vlmc_posterior {
  vlmc::ChainRecord chain;
  vlmc::PosteriorReport report;
};
struct vlmc_report {
  vlmc::RenewalReport impl;
};
struct vlmc_exact {
  vlmc::Json report;
  int64_t support_size = 0;
  double log10_evidence = 0.0;
  bool has_bf = false;
  double log10_bf = 0.0;
  std::vector<std::pair<vlmc::ContextTree, double>> top;
};

namespace {

thread_local std::string g_last_error;

vlmc_status code_to_status(vlmc::ErrorCode code) {
  using vlmc::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return VLMC_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return VLMC_ERR_PARSE;
    case ErrorCode::Validation: return VLMC_ERR_VALIDATION;
    case ErrorCode::Support: return VLMC_ERR_SUPPORT;
    case ErrorCode::Bound: return VLMC_ERR_BOUND;
    case ErrorCode::Numeric: return VLMC_ERR_NUMERIC;
    case ErrorCode::Io: return VLMC_ERR_IO;
    case ErrorCode::Internal: return VLMC_ERR_INTERNAL;
  }
  return VLMC_ERR_INTERNAL;
}

template <typename Fn>
vlmc_status guarded(Fn&& fn) {
  try {
    fn();
    return VLMC_OK;
  } catch (const vlmc::Error& e) {
    g_last_error = e.what();
    return code_to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return VLMC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return VLMC_ERR_INTERNAL;
  }
}

vlmc_status fail_argument(const char* message) {
  g_last_error = message;
  return VLMC_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) {
    std::memcpy(out, s.c_str(), s.size() + 1);
  }
  return out;
}

std::string contexts_as_json(const vlmc::ContextTree& tree) {
  vlmc::Json arr = vlmc::Json::array();
  for (const vlmc::Context& ctx : tree.contexts()) {
    arr.push_back(vlmc::render_context(ctx));
  }
  return arr.dump();
}

std::optional<vlmc::AllowedMatrix> load_optional_matrix(const char* path) {
  if (path == nullptr || *path == '\0') return std::nullopt;
  return vlmc::load_allowed_matrix(path);
}

// Shared by posterior/renewal/exact: the hyperparameters carry the matrix,
// and datasets are checked against it up front.
vlmc::DirichletHyper make_hyper(const vlmc::Dataset& ds, double alpha,
                                const char* allowed_path) {
  std::optional<vlmc::AllowedMatrix> allowed =
      load_optional_matrix(allowed_path);
  if (!allowed) return vlmc::DirichletHyper(ds.alphabet_size(), alpha);
  if (auto offending = vlmc::find_prohibited_pair(ds, *allowed)) {
    vlmc::fail(vlmc::ErrorCode::Validation,
               "dataset violates the allowed-transition matrix: " + *offending);
  }
  return vlmc::DirichletHyper(ds.alphabet_size(), alpha, *std::move(allowed));
}

}  // namespace

extern "C" {

const char* vlmc_version(void) { return "0.1.0"; }

const char* vlmc_last_error(void) { return g_last_error.c_str(); }

void vlmc_string_free(char* s) { std::free(s); }

/* ---- datasets -------------------------------------------------------- */

vlmc_status vlmc_dataset_load(const char* path, int alphabet_size,
                              int depth_bound, vlmc_dataset** out) {
  if (path == nullptr || out == nullptr) return fail_argument("null argument");
  return guarded([&] {
    *out = new vlmc_dataset{
        vlmc::load_dataset(path, alphabet_size, depth_bound)};
  });
}

vlmc_status vlmc_dataset_save(const vlmc_dataset* ds, const char* path) {
  if (ds == nullptr || path == nullptr) return fail_argument("null argument");
  return guarded([&] { vlmc::save_dataset(ds->impl, path); });
}

int vlmc_dataset_num_sequences(const vlmc_dataset* ds) {
  return ds == nullptr ? -1 : ds->impl.num_sequences();
}

int vlmc_dataset_alphabet_size(const vlmc_dataset* ds) {
  return ds == nullptr ? -1 : ds->impl.alphabet_size();
}

int vlmc_dataset_depth_bound(const vlmc_dataset* ds) {
  return ds == nullptr ? -1 : ds->impl.depth_bound();
}

vlmc_status vlmc_dataset_sequence_length(const vlmc_dataset* ds, int index,
                                         int64_t* out) {
  if (ds == nullptr || out == nullptr) return fail_argument("null argument");
  return guarded([&] {
    if (index < 0 || index >= ds->impl.num_sequences()) {
      vlmc::fail(vlmc::ErrorCode::InvalidArgument,
                 "sequence index out of range");
    }
    *out = static_cast<int64_t>(ds->impl.sequence(index).size());
  });
}

vlmc_status vlmc_dataset_total_transitions(const vlmc_dataset* ds,
                                           int64_t* out) {
  if (ds == nullptr || out == nullptr) return fail_argument("null argument");
  *out = ds->impl.total_transitions();
  return VLMC_OK;
}

vlmc_status vlmc_dataset_check_allowed(const vlmc_dataset* ds,
                                       const char* allowed_json_path) {
  if (ds == nullptr || allowed_json_path == nullptr) {
    return fail_argument("null argument");
  }
  return guarded([&] {
    vlmc::AllowedMatrix allowed = vlmc::load_allowed_matrix(allowed_json_path);
    if (auto offending = vlmc::find_prohibited_pair(ds->impl, allowed)) {
      vlmc::fail(vlmc::ErrorCode::Validation, *offending);
    }
  });
}

void vlmc_dataset_free(vlmc_dataset* ds) { delete ds; }

/* ---- context trees ---------------------------------------------------- */

vlmc_status vlmc_tree_parse(const char* json_text, vlmc_tree** out) {
  if (json_text == nullptr || out == nullptr) {
    return fail_argument("null argument");
  }
  return guarded([&] {
    vlmc::Json j = vlmc::Json::parse(json_text, nullptr, false);
    if (j.is_discarded()) {
      vlmc::fail(vlmc::ErrorCode::Parse, "invalid JSON text");
    }
    *out = new vlmc_tree{vlmc::tree_from_json(j)};
  });
}

vlmc_status vlmc_tree_load(const char* path, vlmc_tree** out) {
  if (path == nullptr || out == nullptr) return fail_argument("null argument");
  return guarded([&] {
    *out = new vlmc_tree{vlmc::tree_from_json(vlmc::load_json_file(path))};
  });
}

vlmc_status vlmc_tree_to_json(const vlmc_tree* tree, char** out) {
  if (tree == nullptr || out == nullptr) return fail_argument("null argument");
  return guarded([&] {
    *out = copy_string(vlmc::tree_to_json(tree->impl).dump());
  });
}

int vlmc_tree_num_contexts(const vlmc_tree* tree) {
  return tree == nullptr ? -1 : tree->impl.size();
}

int vlmc_tree_depth(const vlmc_tree* tree) {
  return tree == nullptr ? -1 : tree->impl.depth();
}

vlmc_status vlmc_tree_is_renewing(const vlmc_tree* tree, int state, int* out) {
  if (tree == nullptr || out == nullptr) return fail_argument("null argument");
  return guarded([&] {
    if (state < 0 || state >= tree->impl.alphabet_size()) {
      vlmc::fail(vlmc::ErrorCode::InvalidArgument, "state outside alphabet");
    }
    *out = vlmc::is_renewing(tree->impl, state) ? 1 : 0;
  });
}

void vlmc_tree_free(vlmc_tree* tree) { delete tree; }

/* ---- simulation -------------------------------------------------------- */

vlmc_status vlmc_pct_model1(vlmc_pct** out) {
  if (out == nullptr) return fail_argument("null argument");
  return guarded([&] { *out = new vlmc_pct{vlmc::model1()}; });
}

vlmc_status vlmc_pct_model2(vlmc_pct** out) {
  if (out == nullptr) return fail_argument("null argument");
  return guarded([&] { *out = new vlmc_pct{vlmc::model2()}; });
}

vlmc_status vlmc_pct_load(const char* pct_path, const char* allowed_json_path,
                          vlmc_pct** out) {
  if (pct_path == nullptr || out == nullptr) {
    return fail_argument("null argument");
  }
  return guarded([&] {
    std::optional<std::string> allowed;
    if (allowed_json_path != nullptr && *allowed_json_path != '\0') {
      allowed = allowed_json_path;
    }
    *out = new vlmc_pct{vlmc::load_pct(pct_path, allowed)};
  });
}

vlmc_status vlmc_pct_to_json(const vlmc_pct* pct, char** out) {
  if (pct == nullptr || out == nullptr) return fail_argument("null argument");
  return guarded([&] {
    *out = copy_string(vlmc::pct_to_json(pct->impl).dump());
  });
}

int vlmc_pct_depth(const vlmc_pct* pct) {
  return pct == nullptr ? -1 : pct->impl.depth();
}

int vlmc_pct_alphabet_size(const vlmc_pct* pct) {
  return pct == nullptr ? -1 : pct->impl.alphabet_size();
}

void vlmc_pct_free(vlmc_pct* pct) { delete pct; }

vlmc_status vlmc_simulate(const vlmc_pct* pct, int num_sequences,
                          int64_t length, uint64_t seed, int64_t burn_in,
                          vlmc_dataset** out) {
  if (pct == nullptr || out == nullptr) return fail_argument("null argument");
  return guarded([&] {
    *out = new vlmc_dataset{
        vlmc::simulate(pct->impl, num_sequences, length, seed, burn_in)};
  });
}

/* ---- posterior sampling ------------------------------------------------ */

void vlmc_mh_options_init(vlmc_mh_options* options) {
  if (options == nullptr) return;
  options->alpha = 0.001;
  options->n_iter = 100000;
  options->burn_in = 0;
  options->seed = 0;
  options->renewing_state = -1;
  options->not_renewing_state = -1;
  options->allowed_json_path = nullptr;
}

vlmc_status vlmc_posterior_run(const vlmc_dataset* ds,
                               const vlmc_mh_options* options,
                               vlmc_posterior** out) {
  if (ds == nullptr || options == nullptr || out == nullptr) {
    return fail_argument("null argument");
  }
  return guarded([&] {
    vlmc::DirichletHyper hyper =
        make_hyper(ds->impl, options->alpha, options->allowed_json_path);
    vlmc::TreePrior prior(ds->impl.alphabet_size(), ds->impl.depth_bound());
    if (options->renewing_state >= 0) {
      prior.require_renewing(options->renewing_state);
    }
    if (options->not_renewing_state >= 0) {
      prior.require_not_renewing(options->not_renewing_state);
    }
    if (hyper.allowed_matrix()) {
      prior.require_no_prohibited_inner(*hyper.allowed_matrix());
    }
    prior.check_support();

    vlmc::CountTrie trie = vlmc::build_count_trie(ds->impl);
    vlmc::ChainRecord chain = vlmc::mh_run(trie, prior, hyper,
                                           options->n_iter, options->seed);
    vlmc::PosteriorReport report =
        vlmc::summarize_chain(chain, options->burn_in);
    *out = new vlmc_posterior{std::move(chain), std::move(report)};
  });
}

double vlmc_posterior_acceptance_rate(const vlmc_posterior* p) {
  return p == nullptr ? -1.0 : p->chain.acceptance_rate;
}

int vlmc_posterior_num_trees(const vlmc_posterior* p) {
  return p == nullptr ? -1 : static_cast<int>(p->report.entries.size());
}

vlmc_status vlmc_posterior_entry(const vlmc_posterior* p, int rank,
                                 double* frequency, int64_t* visits,
                                 char** contexts_json) {
  if (p == nullptr) return fail_argument("null argument");
  return guarded([&] {
    if (rank < 0 || rank >= static_cast<int>(p->report.entries.size())) {
      vlmc::fail(vlmc::ErrorCode::InvalidArgument, "rank out of range");
    }
    const vlmc::PosteriorEntry& entry =
        p->report.entries[static_cast<std::size_t>(rank)];
    if (frequency != nullptr) *frequency = entry.frequency;
    if (visits != nullptr) *visits = entry.visits;
    if (contexts_json != nullptr) {
      *contexts_json = copy_string(contexts_as_json(entry.tree));
    }
  });
}

vlmc_status vlmc_posterior_write_json(const vlmc_posterior* p,
                                      const char* path) {
  if (p == nullptr || path == nullptr) return fail_argument("null argument");
  return guarded([&] { vlmc::write_posterior_report_json(p->report, path); });
}

vlmc_status vlmc_posterior_dump_chain(const vlmc_posterior* p,
                                      const char* csv_path,
                                      const char* trees_json_path) {
  if (p == nullptr || csv_path == nullptr || trees_json_path == nullptr) {
    return fail_argument("null argument");
  }
  return guarded([&] {
    vlmc::write_chain_csv(p->chain, csv_path, trees_json_path);
  });
}

void vlmc_posterior_free(vlmc_posterior* p) { delete p; }

/* ---- renewal-state evaluation ------------------------------------------ */

void vlmc_renewal_options_init(vlmc_renewal_options* options) {
  if (options == nullptr) return;
  options->state = 0;
  options->training_size = 1;
  options->n_iter = 100000;
  options->burn_in = 0;
  options->alpha = 0.001;
  options->trim_fraction = 0.10;
  options->trim_count = -1;
  options->seed = 0;
  options->jobs = 1;
  options->allowed_json_path = nullptr;
}

vlmc_status vlmc_renewal_run(const vlmc_dataset* ds,
                             const vlmc_renewal_options* options,
                             vlmc_report** out) {
  if (ds == nullptr || options == nullptr || out == nullptr) {
    return fail_argument("null argument");
  }
  return guarded([&] {
    vlmc::DirichletHyper hyper =
        make_hyper(ds->impl, options->alpha, options->allowed_json_path);
    vlmc::RenewalOptions ropts;
    ropts.state = options->state;
    ropts.training_size = options->training_size;
    ropts.n_iter = options->n_iter;
    ropts.burn_in = options->burn_in;
    ropts.seed = options->seed;
    ropts.jobs = options->jobs;
    ropts.trim.fraction = options->trim_fraction;
    if (options->trim_count >= 0) ropts.trim.count = options->trim_count;
    *out = new vlmc_report{vlmc::run_renewal_test(ds->impl, hyper, ropts)};
  });
}

int vlmc_report_num_records(const vlmc_report* r) {
  return r == nullptr ? -1 : static_cast<int>(r->impl.records.size());
}

double vlmc_report_log10_aibf(const vlmc_report* r, int trimmed) {
  if (r == nullptr) return 0.0;
  return trimmed ? r->impl.aggregates.log10_aibf_trimmed
                 : r->impl.aggregates.log10_aibf;
}

double vlmc_report_log10_gibf(const vlmc_report* r, int trimmed) {
  if (r == nullptr) return 0.0;
  return trimmed ? r->impl.aggregates.log10_gibf_trimmed
                 : r->impl.aggregates.log10_gibf;
}

vlmc_status vlmc_report_record(const vlmc_report* r, int index,
                               double* log10_pbf, double* log10_num,
                               double* log10_den) {
  if (r == nullptr) return fail_argument("null argument");
  return guarded([&] {
    if (index < 0 || index >= static_cast<int>(r->impl.records.size())) {
      vlmc::fail(vlmc::ErrorCode::InvalidArgument, "record index out of range");
    }
    const vlmc::PbfRecord& record =
        r->impl.records[static_cast<std::size_t>(index)];
    if (log10_pbf != nullptr) *log10_pbf = record.log10_pbf;
    if (log10_num != nullptr) *log10_num = record.log10_num;
    if (log10_den != nullptr) *log10_den = record.log10_den;
  });
}

vlmc_status vlmc_report_label(const vlmc_report* r, int aibf, int trimmed,
                              char** out) {
  if (r == nullptr || out == nullptr) return fail_argument("null argument");
  return guarded([&] {
    const vlmc::KassRafteryLabel& label =
        aibf ? (trimmed ? r->impl.label_aibf_trimmed : r->impl.label_aibf)
             : (trimmed ? r->impl.label_gibf_trimmed : r->impl.label_gibf);
    *out = copy_string(label.text());
  });
}

vlmc_status vlmc_report_write_json(const vlmc_report* r, const char* path) {
  if (r == nullptr || path == nullptr) return fail_argument("null argument");
  return guarded([&] { vlmc::write_renewal_report_json(r->impl, path); });
}

vlmc_status vlmc_report_write_pbf_csv(const vlmc_report* r, const char* path) {
  if (r == nullptr || path == nullptr) return fail_argument("null argument");
  return guarded([&] { vlmc::write_pbf_csv(r->impl, path); });
}

void vlmc_report_free(vlmc_report* r) { delete r; }

/* ---- exact enumeration oracles ------------------------------------------ */

vlmc_status vlmc_exact_tree_count(int alphabet_size, int depth_bound,
                                  double* size_estimate, int64_t* exact_count) {
  return guarded([&] {
    double estimate = vlmc::tree_space_size(alphabet_size, depth_bound);
    if (size_estimate != nullptr) *size_estimate = estimate;
    if (estimate > vlmc::kEnumerationBound) {
      char text[64];
      std::snprintf(text, sizeof(text),
                    estimate >= 1e18 ? ">= %.2g" : "about %.4g", estimate);
      vlmc::fail(vlmc::ErrorCode::Bound,
                 "tree space too large to enumerate: " + std::string(text) +
                     " trees");
    }
    if (exact_count != nullptr) {
      *exact_count = static_cast<int64_t>(estimate);
    }
  });
}

void vlmc_exact_options_init(vlmc_exact_options* options) {
  if (options == nullptr) return;
  options->state = -1;
  options->alpha = 0.001;
  options->top_trees = 20;
  options->allowed_json_path = nullptr;
}

vlmc_status vlmc_exact_run(const vlmc_dataset* ds,
                           const vlmc_exact_options* options,
                           vlmc_exact** out) {
  if (ds == nullptr || options == nullptr || out == nullptr) {
    return fail_argument("null argument");
  }
  return guarded([&] {
    const int m = ds->impl.alphabet_size();
    const int depth_bound = ds->impl.depth_bound();
    vlmc::DirichletHyper hyper =
        make_hyper(ds->impl, options->alpha, options->allowed_json_path);
    vlmc::CountTrie trie = vlmc::build_count_trie(ds->impl);

    vlmc::TreePrior prior(m, depth_bound);
    if (hyper.allowed_matrix()) {
      prior.require_no_prohibited_inner(*hyper.allowed_matrix());
    }

    auto handle = std::make_unique<vlmc_exact>();
    vlmc::EvidenceSum evidence = vlmc::evidence_sum(trie, prior, hyper);
    handle->support_size = evidence.support_size;
    handle->log10_evidence =
        vlmc::ln_to_log10(evidence.log_weighted_q_sum - evidence.log_zeta);

    auto posterior = vlmc::exact_posterior(trie, prior, hyper);
    std::vector<std::pair<vlmc::ContextTree, double>> ranked(
        posterior.begin(), posterior.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    int keep = std::max(0, options->top_trees);
    if (static_cast<int>(ranked.size()) > keep) {
      ranked.erase(ranked.begin() + keep, ranked.end());
    }
    handle->top = std::move(ranked);

    vlmc::Json j;
    j["m"] = m;
    j["L"] = depth_bound;
    j["alpha"] = options->alpha;
    j["constrained"] = hyper.allowed_matrix().has_value();
    j["num_trees"] = evidence.support_size;
    j["log10_evidence"] = handle->log10_evidence;
    if (options->state >= 0) {
      handle->has_bf = true;
      handle->log10_bf = vlmc::exact_log10_bayes_factor(trie, options->state,
                                                        hyper, depth_bound);
      j["state"] = options->state;
      j["log10_bf"] = handle->log10_bf;
    }
    vlmc::Json top = vlmc::Json::array();
    for (const auto& [tree, prob] : handle->top) {
      vlmc::Json contexts = vlmc::Json::array();
      for (const vlmc::Context& ctx : tree.contexts()) {
        contexts.push_back(vlmc::render_context(ctx));
      }
      top.push_back(vlmc::Json{{"probability", prob},
                               {"contexts", std::move(contexts)}});
    }
    j["top_trees"] = std::move(top);
    handle->report = std::move(j);
    *out = handle.release();
  });
}

int64_t vlmc_exact_num_trees(const vlmc_exact* e) {
  return e == nullptr ? -1 : e->support_size;
}

double vlmc_exact_log10_evidence(const vlmc_exact* e) {
  return e == nullptr ? 0.0 : e->log10_evidence;
}

vlmc_status vlmc_exact_log10_bf(const vlmc_exact* e, double* out) {
  if (e == nullptr || out == nullptr) return fail_argument("null argument");
  if (!e->has_bf) {
    return fail_argument("exact run was configured without a state");
  }
  *out = e->log10_bf;
  return VLMC_OK;
}

int vlmc_exact_num_top(const vlmc_exact* e) {
  return e == nullptr ? -1 : static_cast<int>(e->top.size());
}

vlmc_status vlmc_exact_top_entry(const vlmc_exact* e, int rank,
                                 double* probability, char** contexts_json) {
  if (e == nullptr) return fail_argument("null argument");
  return guarded([&] {
    if (rank < 0 || rank >= static_cast<int>(e->top.size())) {
      vlmc::fail(vlmc::ErrorCode::InvalidArgument, "rank out of range");
    }
    const auto& [tree, prob] = e->top[static_cast<std::size_t>(rank)];
    if (probability != nullptr) *probability = prob;
    if (contexts_json != nullptr) {
      *contexts_json = copy_string(contexts_as_json(tree));
    }
  });
}

vlmc_status vlmc_exact_write_json(const vlmc_exact* e, const char* path) {
  if (e == nullptr || path == nullptr) return fail_argument("null argument");
  return guarded([&] { vlmc::write_json_file(e->report, path); });
}

void vlmc_exact_free(vlmc_exact* e) { delete e; }

}  // extern "C"
