/* C interface to the VLMC renewal-state toolkit.
 *
 * Every object is an opaque handle created by a vlmc_*_load/run function and
 * released with the matching vlmc_*_free. Functions returning vlmc_status
 * report failures through the status code; vlmc_last_error() returns a
 * human-readable message for the most recent failure on the calling thread.
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with vlmc_string_free.
 */

#ifndef VLMC_H
#define VLMC_H

#include <stdint.h>
#include <stddef.h>

#if defined(_WIN32)
#define VLMC_API __declspec(dllexport)
#else
#define VLMC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vlmc_status {
  VLMC_OK = 0,
  VLMC_ERR_INVALID_ARGUMENT = 1,
  VLMC_ERR_PARSE = 2,
  VLMC_ERR_VALIDATION = 3,
  VLMC_ERR_SUPPORT = 4,   /* empty prior support */
  VLMC_ERR_BOUND = 5,     /* enumeration bound exceeded */
  VLMC_ERR_NUMERIC = 6,
  VLMC_ERR_IO = 7,
  VLMC_ERR_INTERNAL = 8
} vlmc_status;

typedef struct vlmc_dataset vlmc_dataset;
typedef struct vlmc_tree vlmc_tree;
typedef struct vlmc_pct vlmc_pct;
typedef struct vlmc_posterior vlmc_posterior;
typedef struct vlmc_report vlmc_report;
typedef struct vlmc_exact vlmc_exact;

VLMC_API const char* vlmc_version(void);
VLMC_API const char* vlmc_last_error(void);
VLMC_API void vlmc_string_free(char* s);

/* ---- datasets -------------------------------------------------------- */

/* Text format: one sequence per line, whitespace-separated symbol ids. */
VLMC_API vlmc_status vlmc_dataset_load(const char* path, int alphabet_size,
                                       int depth_bound, vlmc_dataset** out);
VLMC_API vlmc_status vlmc_dataset_save(const vlmc_dataset* ds,
                                       const char* path);
VLMC_API int vlmc_dataset_num_sequences(const vlmc_dataset* ds);
VLMC_API int vlmc_dataset_alphabet_size(const vlmc_dataset* ds);
VLMC_API int vlmc_dataset_depth_bound(const vlmc_dataset* ds);
VLMC_API vlmc_status vlmc_dataset_sequence_length(const vlmc_dataset* ds,
                                                  int index, int64_t* out);
VLMC_API vlmc_status vlmc_dataset_total_transitions(const vlmc_dataset* ds,
                                                    int64_t* out);
/* Fails with VLMC_ERR_VALIDATION if any adjacent pair is prohibited. */
VLMC_API vlmc_status vlmc_dataset_check_allowed(const vlmc_dataset* ds,
                                                const char* allowed_json_path);
VLMC_API void vlmc_dataset_free(vlmc_dataset* ds);

/* ---- context trees ---------------------------------------------------- */

/* Tree JSON: {"L": int, "m": int, "contexts": ["oldest-first", ...]}. */
VLMC_API vlmc_status vlmc_tree_parse(const char* json_text, vlmc_tree** out);
VLMC_API vlmc_status vlmc_tree_load(const char* path, vlmc_tree** out);
VLMC_API vlmc_status vlmc_tree_to_json(const vlmc_tree* tree, char** out);
VLMC_API int vlmc_tree_num_contexts(const vlmc_tree* tree);
VLMC_API int vlmc_tree_depth(const vlmc_tree* tree);
/* Sets *out to 1 when `state` labels no inner node of the tree. */
VLMC_API vlmc_status vlmc_tree_is_renewing(const vlmc_tree* tree, int state,
                                           int* out);
VLMC_API void vlmc_tree_free(vlmc_tree* tree);

/* ---- simulation -------------------------------------------------------- */

VLMC_API vlmc_status vlmc_pct_model1(vlmc_pct** out);
VLMC_API vlmc_status vlmc_pct_model2(vlmc_pct** out);
/* PCT JSON: tree fields plus "p": {"<context>": [probabilities]}.
 * allowed_json_path may be NULL; when given, the matrix is attached and
 * prohibited transitions must carry zero probability. */
VLMC_API vlmc_status vlmc_pct_load(const char* pct_path,
                                   const char* allowed_json_path,
                                   vlmc_pct** out);
VLMC_API vlmc_status vlmc_pct_to_json(const vlmc_pct* pct, char** out);
VLMC_API int vlmc_pct_depth(const vlmc_pct* pct);
VLMC_API int vlmc_pct_alphabet_size(const vlmc_pct* pct);
VLMC_API void vlmc_pct_free(vlmc_pct* pct);

/* burn_in < 0 selects the default max(1000, 10 * depth). */
VLMC_API vlmc_status vlmc_simulate(const vlmc_pct* pct, int num_sequences,
                                   int64_t length, uint64_t seed,
                                   int64_t burn_in, vlmc_dataset** out);

/* ---- posterior sampling ------------------------------------------------ */

typedef struct vlmc_mh_options {
  double alpha;                  /* Dirichlet hyperparameter */
  int64_t n_iter;
  int64_t burn_in;               /* discarded for frequency tabulation */
  uint64_t seed;
  int renewing_state;            /* -1: unconstrained */
  int not_renewing_state;        /* -1: unconstrained */
  const char* allowed_json_path; /* NULL: unconstrained alphabet */
} vlmc_mh_options;

VLMC_API void vlmc_mh_options_init(vlmc_mh_options* options);

VLMC_API vlmc_status vlmc_posterior_run(const vlmc_dataset* ds,
                                        const vlmc_mh_options* options,
                                        vlmc_posterior** out);
VLMC_API double vlmc_posterior_acceptance_rate(const vlmc_posterior* p);
VLMC_API int vlmc_posterior_num_trees(const vlmc_posterior* p);
/* Entries are ordered by decreasing visit frequency. contexts_json (may be
 * NULL) receives a JSON array of oldest-first context strings. */
VLMC_API vlmc_status vlmc_posterior_entry(const vlmc_posterior* p, int rank,
                                          double* frequency, int64_t* visits,
                                          char** contexts_json);
VLMC_API vlmc_status vlmc_posterior_write_json(const vlmc_posterior* p,
                                               const char* path);
/* Per-iteration trajectory plus a tree-id dictionary. */
VLMC_API vlmc_status vlmc_posterior_dump_chain(const vlmc_posterior* p,
                                               const char* csv_path,
                                               const char* trees_json_path);
VLMC_API void vlmc_posterior_free(vlmc_posterior* p);

/* ---- renewal-state evaluation ------------------------------------------ */

typedef struct vlmc_renewal_options {
  int state;
  int training_size;             /* v: sequences per training subset */
  int64_t n_iter;
  int64_t burn_in;
  double alpha;
  double trim_fraction;          /* per run: floor(f/2 * N) cut per tail */
  int trim_count;                /* >= 0 overrides the fraction */
  uint64_t seed;
  int jobs;                      /* worker threads over subsets */
  const char* allowed_json_path;
} vlmc_renewal_options;

VLMC_API void vlmc_renewal_options_init(vlmc_renewal_options* options);

VLMC_API vlmc_status vlmc_renewal_run(const vlmc_dataset* ds,
                                      const vlmc_renewal_options* options,
                                      vlmc_report** out);
VLMC_API int vlmc_report_num_records(const vlmc_report* r);
VLMC_API double vlmc_report_log10_aibf(const vlmc_report* r, int trimmed);
VLMC_API double vlmc_report_log10_gibf(const vlmc_report* r, int trimmed);
VLMC_API vlmc_status vlmc_report_record(const vlmc_report* r, int index,
                                        double* log10_pbf, double* log10_num,
                                        double* log10_den);
/* Kass-Raftery wording for one aggregate; aibf != 0 selects the AIBF. */
VLMC_API vlmc_status vlmc_report_label(const vlmc_report* r, int aibf,
                                       int trimmed, char** out);
VLMC_API vlmc_status vlmc_report_write_json(const vlmc_report* r,
                                            const char* path);
VLMC_API vlmc_status vlmc_report_write_pbf_csv(const vlmc_report* r,
                                               const char* path);
VLMC_API void vlmc_report_free(vlmc_report* r);

/* ---- exact enumeration oracles ------------------------------------------ */

/* Number of context trees of depth <= depth_bound. Returns VLMC_ERR_BOUND
 * (with *size_estimate filled) when the space is too large to enumerate. */
VLMC_API vlmc_status vlmc_exact_tree_count(int alphabet_size, int depth_bound,
                                           double* size_estimate,
                                           int64_t* exact_count);

typedef struct vlmc_exact_options {
  int state;                     /* -1: skip the Bayes factor */
  double alpha;
  int top_trees;                 /* posterior entries kept in the report */
  const char* allowed_json_path;
} vlmc_exact_options;

VLMC_API void vlmc_exact_options_init(vlmc_exact_options* options);

VLMC_API vlmc_status vlmc_exact_run(const vlmc_dataset* ds,
                                    const vlmc_exact_options* options,
                                    vlmc_exact** out);
VLMC_API int64_t vlmc_exact_num_trees(const vlmc_exact* e);
VLMC_API double vlmc_exact_log10_evidence(const vlmc_exact* e);
/* Fails with VLMC_ERR_INVALID_ARGUMENT when no state was configured. */
VLMC_API vlmc_status vlmc_exact_log10_bf(const vlmc_exact* e, double* out);
VLMC_API int vlmc_exact_num_top(const vlmc_exact* e);
VLMC_API vlmc_status vlmc_exact_top_entry(const vlmc_exact* e, int rank,
                                          double* probability,
                                          char** contexts_json);
VLMC_API vlmc_status vlmc_exact_write_json(const vlmc_exact* e,
                                           const char* path);
VLMC_API void vlmc_exact_free(vlmc_exact* e);

#ifdef __cplusplus
}
#endif

#endif /* VLMC_H */
