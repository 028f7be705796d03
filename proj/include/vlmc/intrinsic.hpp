#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vlmc/dataset.hpp"
#include "vlmc/inference.hpp"

namespace vlmc {

// All v-element subsets of {0, ..., I-1}, lexicographic, each ascending.
struct SubsetPlan {
  int num_sequences = 0;
  int training_size = 0;
  std::vector<std::vector<int>> subsets;
};

SubsetPlan make_subset_plan(int num_sequences, int training_size);

// Monte Carlo partial Bayes factor for one training subset, log10 scale.
struct PbfRecord {
  std::vector<int> subset;  // training sequence indices, ascending, 0-based
  double log10_pbf = 0.0;   // log10_num - log10_den
  double log10_num = 0.0;   // log10 mean_t q(tau_a^(t), test)
  double log10_den = 0.0;   // log10 mean_t q(tau_abar^(t), test)
  std::uint64_t seed_renewing = 0;
  std::uint64_t seed_not_renewing = 0;
  double accept_rate_renewing = 0.0;
  double accept_rate_not_renewing = 0.0;
};

enum class EvidenceStrength { BareMention, Substantial, Strong, Decisive };

struct KassRafteryLabel {
  EvidenceStrength strength = EvidenceStrength::BareMention;
  int favored = 0;  // +1 renewal hypothesis, -1 complement, 0 exactly zero
  std::string text() const;
};

// Kass-Raftery evidence bands for a log10 Bayes factor; boundary values
// fall into the stronger class. Fails on non-finite input.
KassRafteryLabel kass_raftery_label(double log10_bf);

// How many records to drop from each tail of the ordered log10 PBFs:
// floor(fraction/2 * N), or exactly `count` when set.
struct TrimSpec {
  double fraction = 0.10;
  std::optional<int> count;

  int per_tail(std::size_t n_records) const;
};

struct Aggregates {
  double log10_aibf = 0.0;
  double log10_gibf = 0.0;
  double log10_aibf_trimmed = 0.0;
  double log10_gibf_trimmed = 0.0;
  int trimmed_per_tail = 0;
};

// Arithmetic and geometric intrinsic Bayes factors in log10 scale: the
// geometric average is the plain mean of the log10 PBFs, the arithmetic one
// is log-sum-exp of the linear-scale PBFs minus log the subset count.
Aggregates aggregate(const std::vector<PbfRecord>& records,
                     const TrimSpec& trim);

struct RenewalReport {
  Symbol state = 0;
  int training_size = 0;
  std::int64_t n_iter = 0;
  std::int64_t burn_in = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  bool constrained = false;  // an allowed matrix restricted the tree space
  std::vector<PbfRecord> records;  // subset-plan order
  Aggregates aggregates;
  TrimSpec trim;
  KassRafteryLabel label_aibf;
  KassRafteryLabel label_gibf;
  KassRafteryLabel label_aibf_trimmed;
  KassRafteryLabel label_gibf_trimmed;
};

struct RenewalOptions {
  Symbol state = 0;
  int training_size = 1;  // v
  std::int64_t n_iter = 100000;
  std::int64_t burn_in = 0;
  std::uint64_t seed = 0;
  TrimSpec trim;
  int jobs = 1;
};

// Two chains on the training counts (one per renewal hypothesis), seeds
// derived from seed_base and the subset identity, streaming the marginal
// likelihood of the held-out counts into running log-sum-exp accumulators.
PbfRecord pbf_hat(const Dataset& dataset, const std::vector<int>& subset,
                  Symbol state, const DirichletHyper& hyper,
                  std::int64_t n_iter, std::uint64_t seed_base,
                  std::int64_t burn_in = 0);

// Runs pbf_hat over the whole subset plan, fanned out over `jobs` threads,
// then aggregates. Output is bit-identical for any jobs value.
RenewalReport run_renewal_test(const Dataset& dataset,
                               const DirichletHyper& hyper,
                               const RenewalOptions& options);

}  // namespace vlmc
