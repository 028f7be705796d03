#include "vlmc/intrinsic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "vlmc/error.hpp"
#include "vlmc/math.hpp"
#include "vlmc/rng.hpp"

namespace vlmc {

SubsetPlan make_subset_plan(int num_sequences, int training_size) {
  if (num_sequences < 2) {
    fail(ErrorCode::InvalidArgument,
         "need at least two sequences to form training subsets");
  }
  if (training_size < 1 || training_size >= num_sequences) {
    fail(ErrorCode::InvalidArgument,
         "training size must satisfy 1 <= v < I; got v = " +
             std::to_string(training_size) +
             ", I = " + std::to_string(num_sequences));
  }
  SubsetPlan plan{num_sequences, training_size, {}};
  std::vector<int> current(static_cast<std::size_t>(training_size));
  for (int i = 0; i < training_size; ++i) current[static_cast<std::size_t>(i)] = i;
  while (true) {
    plan.subsets.push_back(current);
    // Advance to the next combination in lexicographic order.
    int pos = training_size - 1;
    while (pos >= 0 &&
           current[static_cast<std::size_t>(pos)] ==
               num_sequences - training_size + pos) {
      --pos;
    }
    if (pos < 0) break;
    ++current[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < training_size; ++j) {
      current[static_cast<std::size_t>(j)] =
          current[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return plan;
}

std::string KassRafteryLabel::text() const {
  std::string base;
  switch (strength) {
    case EvidenceStrength::BareMention: base = "bare mention"; break;
    case EvidenceStrength::Substantial: base = "substantial"; break;
    case EvidenceStrength::Strong: base = "strong"; break;
    case EvidenceStrength::Decisive: base = "decisive"; break;
  }
  if (favored > 0) return base + " (favors renewal)";
  if (favored < 0) return base + " (favors non-renewal)";
  return base;
}

KassRafteryLabel kass_raftery_label(double log10_bf) {
  if (!std::isfinite(log10_bf)) {
    fail(ErrorCode::Numeric, "Bayes factor label requires a finite value");
  }
  double magnitude = std::abs(log10_bf);
  KassRafteryLabel label;
  if (magnitude >= 2.0) {
    label.strength = EvidenceStrength::Decisive;
  } else if (magnitude >= 1.0) {
    label.strength = EvidenceStrength::Strong;
  } else if (magnitude >= 0.5) {
    label.strength = EvidenceStrength::Substantial;
  } else {
    label.strength = EvidenceStrength::BareMention;
  }
  label.favored = log10_bf > 0 ? 1 : (log10_bf < 0 ? -1 : 0);
  return label;
}

int TrimSpec::per_tail(std::size_t n_records) const {
  if (count) {
    if (*count < 0) {
      fail(ErrorCode::InvalidArgument, "trim count must be non-negative");
    }
    return *count;
  }
  if (fraction < 0.0 || fraction >= 0.5 || !std::isfinite(fraction)) {
    fail(ErrorCode::InvalidArgument,
         "trim fraction must lie in [0, 0.5), got " + std::to_string(fraction));
  }
  return static_cast<int>(
      std::floor(fraction / 2.0 * static_cast<double>(n_records)));
}

namespace {

struct MeanPair {
  double log10_aibf;
  double log10_gibf;
};

MeanPair average_pbfs(const std::vector<double>& log10_pbfs) {
  LogSumExp linear;
  double log10_sum = 0.0;
  for (double x : log10_pbfs) {
    linear.add(log10_to_ln(x));
    log10_sum += x;
  }
  return MeanPair{ln_to_log10(linear.log_mean()),
                  log10_sum / static_cast<double>(log10_pbfs.size())};
}

}  // namespace

Aggregates aggregate(const std::vector<PbfRecord>& records,
                     const TrimSpec& trim) {
  if (records.empty()) {
    fail(ErrorCode::InvalidArgument, "no PBF records to aggregate");
  }
  std::vector<double> values;
  values.reserve(records.size());
  for (const PbfRecord& r : records) values.push_back(r.log10_pbf);

  const int per_tail = trim.per_tail(values.size());
  if (2 * static_cast<std::size_t>(per_tail) >= values.size()) {
    fail(ErrorCode::Validation,
         "trimming " + std::to_string(per_tail) +
             " records per tail leaves nothing to aggregate out of " +
             std::to_string(values.size()));
  }

  Aggregates out;
  MeanPair untrimmed = average_pbfs(values);
  out.log10_aibf = untrimmed.log10_aibf;
  out.log10_gibf = untrimmed.log10_gibf;
  out.trimmed_per_tail = per_tail;

  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> surviving(sorted.begin() + per_tail,
                                sorted.end() - per_tail);
  MeanPair trimmed = average_pbfs(surviving);
  out.log10_aibf_trimmed = trimmed.log10_aibf;
  out.log10_gibf_trimmed = trimmed.log10_gibf;
  return out;
}

namespace {

std::uint64_t chain_seed(std::uint64_t seed_base,
                         const std::vector<int>& subset, bool renewing) {
  std::vector<std::uint64_t> words;
  words.reserve(subset.size() + 1);
  for (int i : subset) words.push_back(static_cast<std::uint64_t>(i));
  words.push_back(renewing ? 0x52454eULL : 0x4e4f54ULL);
  return seed_base ^ hash_words(words);
}

struct HalfPbf {
  double log10_mean;
  double accept_rate;
};

// One hypothesis side: sample trees from the training posterior and stream
// the held-out marginal likelihood.
HalfPbf run_half(const CountTrie& train, const CountTrie& test,
                 const TreePrior& prior, const DirichletHyper& hyper,
                 std::int64_t n_iter, std::int64_t burn_in,
                 std::uint64_t seed) {
  MhSampler sampler(train, prior, hyper, seed);
  LogQTracker test_q(test, hyper);
  test_q.reset(sampler.current());
  LogSumExp acc;
  std::int64_t n_accepted = 0;
  for (std::int64_t t = 0; t < n_iter; ++t) {
    MhSampler::Step s = sampler.step();
    if (s.accepted) {
      ++n_accepted;
      test_q.apply(s.move);
    }
    if (t >= burn_in) acc.add(test_q.value());
  }
  return HalfPbf{ln_to_log10(acc.log_mean()),
                 static_cast<double>(n_accepted) / static_cast<double>(n_iter)};
}

TreePrior hypothesis_prior_or_fail(const Dataset& dataset, Symbol state,
                                   bool renewing,
                                   const DirichletHyper& hyper) {
  TreePrior prior =
      renewal_hypothesis_prior(dataset.alphabet_size(), dataset.depth_bound(),
                               state, renewing, hyper.allowed_matrix());
  try {
    prior.check_support();
  } catch (const Error& e) {
    fail(ErrorCode::Support,
         std::string("hypothesis '") + std::to_string(state) +
             (renewing ? " is a renewal state" : " is not a renewal state") +
             "' has empty support: " + e.what());
  }
  return prior;
}

}  // namespace

PbfRecord pbf_hat(const Dataset& dataset, const std::vector<int>& subset,
                  Symbol state, const DirichletHyper& hyper,
                  std::int64_t n_iter, std::uint64_t seed_base,
                  std::int64_t burn_in) {
  if (subset.empty() ||
      static_cast<int>(subset.size()) >= dataset.num_sequences()) {
    fail(ErrorCode::InvalidArgument,
         "training subset must leave at least one test sequence");
  }
  if (n_iter < 1) {
    fail(ErrorCode::InvalidArgument, "n_iter must be positive");
  }
  if (burn_in < 0 || burn_in >= n_iter) {
    fail(ErrorCode::InvalidArgument, "burn-in must lie in [0, n_iter)");
  }

  Dataset train_data = dataset.subset(subset);
  Dataset test_data = dataset.complement(subset);
  CountTrie train = build_count_trie(train_data);
  CountTrie test = build_count_trie(test_data);

  TreePrior prior_renewing =
      hypothesis_prior_or_fail(dataset, state, true, hyper);
  TreePrior prior_not = hypothesis_prior_or_fail(dataset, state, false, hyper);

  PbfRecord record;
  record.subset = subset;
  record.seed_renewing = chain_seed(seed_base, subset, true);
  record.seed_not_renewing = chain_seed(seed_base, subset, false);

  HalfPbf num = run_half(train, test, prior_renewing, hyper, n_iter, burn_in,
                         record.seed_renewing);
  HalfPbf den = run_half(train, test, prior_not, hyper, n_iter, burn_in,
                         record.seed_not_renewing);
  record.log10_num = num.log10_mean;
  record.log10_den = den.log10_mean;
  record.log10_pbf = num.log10_mean - den.log10_mean;
  record.accept_rate_renewing = num.accept_rate;
  record.accept_rate_not_renewing = den.accept_rate;
  return record;
}

namespace {

std::string render_subset(const std::vector<int>& subset) {
  std::string out = "{";
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(subset[i] + 1);  // 1-based, as reported
  }
  return out + "}";
}

}  // namespace

RenewalReport run_renewal_test(const Dataset& dataset,
                               const DirichletHyper& hyper,
                               const RenewalOptions& options) {
  if (options.state < 0 || options.state >= dataset.alphabet_size()) {
    fail(ErrorCode::InvalidArgument, "state outside the alphabet");
  }
  SubsetPlan plan =
      make_subset_plan(dataset.num_sequences(), options.training_size);

  const std::size_t n_subsets = plan.subsets.size();
  std::vector<PbfRecord> records(n_subsets);
  std::vector<std::exception_ptr> failures(n_subsets);

  int jobs = std::max(1, options.jobs);
  jobs = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(jobs), n_subsets));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= n_subsets) return;
      try {
        records[i] =
            pbf_hat(dataset, plan.subsets[i], options.state, hyper,
                    options.n_iter, options.seed, options.burn_in);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (std::size_t i = 0; i < n_subsets; ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error& e) {
      fail(e.code(), "subset " + render_subset(plan.subsets[i]) +
                         " failed: " + e.what());
    } catch (const std::exception& e) {
      fail(ErrorCode::Internal, "subset " + render_subset(plan.subsets[i]) +
                                    " failed: " + e.what());
    }
  }

  RenewalReport report;
  report.state = options.state;
  report.training_size = options.training_size;
  report.n_iter = options.n_iter;
  report.burn_in = options.burn_in;
  report.seed = options.seed;
  report.alpha = hyper.base_alpha();
  report.constrained = hyper.allowed_matrix().has_value();
  report.records = std::move(records);
  report.trim = options.trim;
  report.aggregates = aggregate(report.records, options.trim);
  report.label_aibf = kass_raftery_label(report.aggregates.log10_aibf);
  report.label_gibf = kass_raftery_label(report.aggregates.log10_gibf);
  report.label_aibf_trimmed =
      kass_raftery_label(report.aggregates.log10_aibf_trimmed);
  report.label_gibf_trimmed =
      kass_raftery_label(report.aggregates.log10_gibf_trimmed);
  return report;
}

}  // namespace vlmc
