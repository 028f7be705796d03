#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "vlmc/count_trie.hpp"
#include "vlmc/prior.hpp"
#include "vlmc/rng.hpp"
#include "vlmc/tree.hpp"

namespace vlmc {

// Dirichlet hyperparameters alpha_{s,k} for the per-context transition
// probabilities; constant by default, optionally an arbitrary positive
// rule. With an allowed matrix attached, the distribution for a context is
// reduced to the symbols that may follow its most recent symbol; prohibited
// coordinates carry probability zero and enter no Gamma term.
class DirichletHyper {
public:
  using AlphaFn = std::function<double(const Context&, Symbol)>;

  explicit DirichletHyper(int alphabet_size, double alpha = 0.001);
  DirichletHyper(int alphabet_size, double alpha, AllowedMatrix allowed);

  DirichletHyper& set_alpha_rule(AlphaFn fn);

  int alphabet_size() const { return m_; }
  double base_alpha() const { return alpha_; }
  const std::optional<AllowedMatrix>& allowed_matrix() const {
    return allowed_;
  }

  double alpha(const Context& ctx, Symbol k) const {
    return alpha_fn_ ? alpha_fn_(ctx, k) : alpha_;
  }
  // Dirichlet coordinates for a context with this most recent symbol.
  const std::vector<Symbol>& support_for(Symbol most_recent) const {
    return allowed_ ? allowed_->allowed_next(most_recent) : full_support_;
  }

private:
  int m_;
  double alpha_;
  AlphaFn alpha_fn_;
  std::optional<AllowedMatrix> allowed_;
  std::vector<Symbol> full_support_;
};

// Contribution of one context to log q. Contexts with zero total count
// contribute exactly zero (their Gamma factors cancel).
double log_q_term(const Context& ctx, const CountTrie& trie,
                  const DirichletHyper& hyper);

// Dirichlet-multinomial marginal likelihood log q(tau, data): the sum of
// per-context terms
//   lgamma(sum_k a_k) - sum_k lgamma(a_k)
//   + sum_k lgamma(n_k + a_k) - lgamma(sum_k (n_k + a_k))
// over the allowed coordinates k of each context.
double log_q(const ContextTree& tree, const CountTrie& trie,
             const DirichletHyper& hyper);

// log h(tau) + log q(tau, data); fails with Error(Support) outside the
// prior support.
double log_posterior_unnorm(const ContextTree& tree, const CountTrie& trie,
                            const DirichletHyper& hyper,
                            const TreePrior& prior);

// Memoizes per-context log q contributions against one trie and maintains
// the running total for a tree evolving by grow/prune moves.
class LogQTracker {
public:
  LogQTracker(const CountTrie& trie, const DirichletHyper& hyper)
      : trie_(&trie), hyper_(&hyper) {}

  void reset(const ContextTree& tree);
  double delta(const Move& move);
  void apply(const Move& move) { value_ += delta(move); }
  double value() const { return value_; }
  double term(const Context& ctx);

private:
  const CountTrie* trie_;
  const DirichletHyper* hyper_;
  std::unordered_map<Context, double, ContextHash> terms_;
  double value_ = 0.0;
};

struct Proposal {
  Move move;
  ContextTree tree;
  double log_forward;   // log kappa(tau' | tau)
  double log_backward;  // log kappa(tau  | tau')
};

// Two-step kernel draw: pick grow or prune (1/2 each when both
// neighborhoods are non-empty, otherwise the non-empty one), then a uniform
// element of the chosen set. Fails with Error(Support) when both
// neighborhoods are empty, i.e. the support is this single tree.
Proposal propose(const ContextTree& tree, const TreePrior& prior,
                 SplitMix64& rng);

// Metropolis-Hastings trajectory over context trees. Trees are stored once
// and referenced by first-visit id.
struct ChainRecord {
  std::uint64_t seed = 0;
  std::int64_t n_iter = 0;
  std::vector<std::int32_t> tree_ids;    // tau^(1) .. tau^(n_iter)
  std::vector<double> log_q_values;      // log q(tau^(t), data)
  std::vector<std::uint8_t> accepted;    // proposal accepted at step t
  std::vector<ContextTree> trees;        // id -> tree
  double acceptance_rate = 0.0;

  const ContextTree& tree_at(std::int64_t t) const {
    return trees[static_cast<std::size_t>(
        tree_ids[static_cast<std::size_t>(t)])];
  }
  // Visit frequencies over iterations after `burn_in`, indexed by tree id.
  std::vector<double> frequencies(std::int64_t burn_in = 0) const;
};

// One Metropolis-Hastings chain, stepped explicitly so callers can stream
// per-iteration statistics without storing the trajectory.
class MhSampler {
public:
  MhSampler(const CountTrie& trie, const TreePrior& prior,
            const DirichletHyper& hyper, std::uint64_t seed,
            std::optional<ContextTree> init = std::nullopt);

  struct Step {
    bool accepted = false;
    Move move;  // meaningful only when accepted
  };
  Step step();

  const ContextTree& current() const { return current_; }
  double current_log_q() const { return train_.value(); }
  // True when the support is a single tree; the chain is then constant and
  // every step counts as a rejection.
  bool degenerate() const { return degenerate_; }

private:
  const CountTrie* trie_;
  const TreePrior* prior_;
  SplitMix64 rng_;
  LogQTracker train_;
  ContextTree current_;
  double current_log_weight_ = 0.0;
  bool degenerate_ = false;
};

// Runs the sampler for n_iter steps from `init` (defaults to the minimal
// tree of the prior). Identical inputs and seed give an identical record.
ChainRecord mh_run(const CountTrie& trie, const TreePrior& prior,
                   const DirichletHyper& hyper, std::int64_t n_iter,
                   std::uint64_t seed,
                   std::optional<ContextTree> init = std::nullopt);

// ---- Exact oracles by full enumeration (desk-scale spaces only) ----

struct EvidenceSum {
  double log_weighted_q_sum;  // ln sum_tau h(tau) q(tau, data)
  double log_zeta;            // ln sum_tau h(tau)
  std::int64_t support_size;
};

EvidenceSum evidence_sum(const CountTrie& trie, const TreePrior& prior,
                         const DirichletHyper& hyper);

// Posterior probabilities pi(tau | data) for every tree in the support;
// values sum to one.
std::unordered_map<ContextTree, double, TreeHash> exact_posterior(
    const CountTrie& trie, const TreePrior& prior, const DirichletHyper& hyper);

// log10 of the Bayes factor for "state is renewing" against its
// complement, both hypotheses restricted by the hyper's allowed matrix.
double exact_log10_bayes_factor(const CountTrie& trie, Symbol state,
                                const DirichletHyper& hyper, int depth_bound);

}  // namespace vlmc
