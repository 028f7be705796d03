#include "vlmc/inference.hpp"

#include <algorithm>
#include <cmath>

#include "vlmc/error.hpp"
#include "vlmc/math.hpp"

namespace vlmc {

DirichletHyper::DirichletHyper(int alphabet_size, double alpha)
    : m_(alphabet_size), alpha_(alpha) {
  if (m_ < 2) {
    fail(ErrorCode::InvalidArgument, "alphabet size must be at least 2");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    fail(ErrorCode::InvalidArgument, "alpha must be positive and finite");
  }
  for (Symbol s = 0; s < m_; ++s) full_support_.push_back(s);
}

DirichletHyper::DirichletHyper(int alphabet_size, double alpha,
                               AllowedMatrix allowed)
    : DirichletHyper(alphabet_size, alpha) {
  if (allowed.alphabet_size() != m_) {
    fail(ErrorCode::Validation,
         "allowed matrix alphabet size does not match the hyperparameters");
  }
  allowed_ = std::move(allowed);
}

DirichletHyper& DirichletHyper::set_alpha_rule(AlphaFn fn) {
  alpha_fn_ = std::move(fn);
  return *this;
}

double log_q_term(const Context& ctx, const CountTrie& trie,
                  const DirichletHyper& hyper) {
  const std::vector<Symbol>& support = hyper.support_for(ctx.most_recent());
  const CountVec counts = trie.counts(ctx);
  std::int64_t total = 0;
  for (Symbol k : support) total += counts[static_cast<std::size_t>(k)];
  if (total == 0) return 0.0;

  double alpha_sum = 0.0;
  double term = 0.0;
  for (Symbol k : support) {
    const double a = hyper.alpha(ctx, k);
    alpha_sum += a;
    term -= log_gamma(a);
    term += log_gamma(static_cast<double>(counts[static_cast<std::size_t>(k)]) + a);
  }
  term += log_gamma(alpha_sum);
  term -= log_gamma(static_cast<double>(total) + alpha_sum);
  if (!std::isfinite(term)) {
    fail(ErrorCode::Numeric,
         "non-finite marginal likelihood term for context " +
             render_context(ctx));
  }
  return term;
}

double log_q(const ContextTree& tree, const CountTrie& trie,
             const DirichletHyper& hyper) {
  if (tree.depth() > trie.depth()) {
    fail(ErrorCode::InvalidArgument,
         "tree depth exceeds the count trie depth");
  }
  double sum = 0.0;
  for (const Context& ctx : tree.contexts()) {
    sum += log_q_term(ctx, trie, hyper);
  }
  return sum;
}

double log_posterior_unnorm(const ContextTree& tree, const CountTrie& trie,
                            const DirichletHyper& hyper,
                            const TreePrior& prior) {
  return prior.log_weight(tree) + log_q(tree, trie, hyper);
}

double LogQTracker::term(const Context& ctx) {
  auto it = terms_.find(ctx);
  if (it != terms_.end()) return it->second;
  double value = log_q_term(ctx, *trie_, *hyper_);
  terms_.emplace(ctx, value);
  return value;
}

void LogQTracker::reset(const ContextTree& tree) {
  value_ = 0.0;
  for (const Context& ctx : tree.contexts()) value_ += term(ctx);
}

double LogQTracker::delta(const Move& move) {
  double children = 0.0;
  for (Symbol k = 0; k < hyper_->alphabet_size(); ++k) {
    children += term(move.pivot.child(k));
  }
  double pivot = term(move.pivot);
  return move.kind == Move::Kind::Grow ? children - pivot : pivot - children;
}

Proposal propose(const ContextTree& tree, const TreePrior& prior,
                 SplitMix64& rng) {
  std::vector<Move> grows = grow_moves(tree, prior);
  std::vector<Move> prunes = prune_moves(tree, prior);
  if (grows.empty() && prunes.empty()) {
    fail(ErrorCode::Support,
         "degenerate tree space: the support holds this single tree");
  }

  bool both = !grows.empty() && !prunes.empty();
  bool grow;
  if (both) {
    grow = rng.next_double() < 0.5;
  } else {
    grow = !grows.empty();
  }
  const std::vector<Move>& chosen = grow ? grows : prunes;
  const Move& move = chosen[static_cast<std::size_t>(
      rng.next_below(chosen.size()))];
  ContextTree proposal = apply_move(tree, move);

  double log_forward =
      -std::log(static_cast<double>(chosen.size())) - (both ? std::log(2.0) : 0.0);

  // Reverse direction: after a grow the chain returns by pruning, so the
  // reverse kernel weighs the prune neighborhood of the proposal (and vice
  // versa), halved only when the proposal also has the opposite move.
  std::size_t reverse_size = grow ? prune_moves(proposal, prior).size()
                                  : grow_moves(proposal, prior).size();
  std::size_t opposite_size = grow ? grow_moves(proposal, prior).size()
                                   : prune_moves(proposal, prior).size();
  if (reverse_size == 0) {
    fail(ErrorCode::Internal, "reverse neighborhood unexpectedly empty");
  }
  double log_backward = -std::log(static_cast<double>(reverse_size)) -
                        (opposite_size > 0 ? std::log(2.0) : 0.0);

  return Proposal{move, std::move(proposal), log_forward, log_backward};
}

MhSampler::MhSampler(const CountTrie& trie, const TreePrior& prior,
                     const DirichletHyper& hyper, std::uint64_t seed,
                     std::optional<ContextTree> init)
    : trie_(&trie),
      prior_(&prior),
      rng_(seed),
      train_(trie, hyper),
      current_(init ? *std::move(init) : minimal_tree(prior)) {
  if (!prior.in_support(current_)) {
    fail(ErrorCode::Support, "initial tree lies outside the prior support");
  }
  if (current_.depth() > trie.depth()) {
    fail(ErrorCode::InvalidArgument,
         "initial tree is deeper than the count trie");
  }
  train_.reset(current_);
  current_log_weight_ = prior.log_weight_on_support(current_);
  degenerate_ = grow_moves(current_, prior).empty() &&
                prune_moves(current_, prior).empty();
}

MhSampler::Step MhSampler::step() {
  if (degenerate_) return Step{};

  Proposal p = propose(current_, *prior_, rng_);
  double delta_log_q = train_.delta(p.move);
  double proposal_log_weight = prior_->has_custom_weight()
                                   ? prior_->log_weight_on_support(p.tree)
                                   : 0.0;
  double log_ratio = (proposal_log_weight - current_log_weight_) +
                     delta_log_q + (p.log_backward - p.log_forward);
  double accept_prob = std::exp(std::min(0.0, log_ratio));
  double u = rng_.next_double();
  if (u < accept_prob) {
    train_.apply(p.move);
    current_ = std::move(p.tree);
    current_log_weight_ = proposal_log_weight;
    return Step{true, p.move};
  }
  return Step{};
}

std::vector<double> ChainRecord::frequencies(std::int64_t burn_in) const {
  if (burn_in < 0 || burn_in >= n_iter) {
    fail(ErrorCode::InvalidArgument,
         "burn-in must lie in [0, n_iter), got " + std::to_string(burn_in));
  }
  std::vector<double> freq(trees.size(), 0.0);
  for (std::int64_t t = burn_in; t < n_iter; ++t) {
    freq[static_cast<std::size_t>(tree_ids[static_cast<std::size_t>(t)])] += 1.0;
  }
  const double norm = static_cast<double>(n_iter - burn_in);
  for (double& f : freq) f /= norm;
  return freq;
}

ChainRecord mh_run(const CountTrie& trie, const TreePrior& prior,
                   const DirichletHyper& hyper, std::int64_t n_iter,
                   std::uint64_t seed, std::optional<ContextTree> init) {
  if (n_iter < 1) {
    fail(ErrorCode::InvalidArgument, "n_iter must be positive");
  }
  MhSampler sampler(trie, prior, hyper, seed, std::move(init));

  ChainRecord record;
  record.seed = seed;
  record.n_iter = n_iter;
  record.tree_ids.reserve(static_cast<std::size_t>(n_iter));
  record.log_q_values.reserve(static_cast<std::size_t>(n_iter));
  record.accepted.reserve(static_cast<std::size_t>(n_iter));

  std::unordered_map<ContextTree, std::int32_t, TreeHash> ids;
  auto id_of = [&](const ContextTree& tree) {
    auto [it, inserted] =
        ids.emplace(tree, static_cast<std::int32_t>(record.trees.size()));
    if (inserted) record.trees.push_back(tree);
    return it->second;
  };

  std::int64_t n_accepted = 0;
  std::int32_t current_id = id_of(sampler.current());
  for (std::int64_t t = 0; t < n_iter; ++t) {
    MhSampler::Step s = sampler.step();
    if (s.accepted) {
      ++n_accepted;
      current_id = id_of(sampler.current());
    }
    record.tree_ids.push_back(current_id);
    record.log_q_values.push_back(sampler.current_log_q());
    record.accepted.push_back(s.accepted ? 1 : 0);
  }
  record.acceptance_rate =
      static_cast<double>(n_accepted) / static_cast<double>(n_iter);
  return record;
}

EvidenceSum evidence_sum(const CountTrie& trie, const TreePrior& prior,
                         const DirichletHyper& hyper) {
  // Two passes would need the trees materialized; a streaming LogSumExp
  // keeps enumeration single-pass. Per-context terms are memoized across
  // trees, which turns each tree into a handful of map lookups.
  LogQTracker tracker(trie, hyper);
  LogSumExp weighted;
  LogSumExp zeta;
  std::int64_t support_size = 0;
  enumerate_trees(prior, [&](const ContextTree& tree) {
    double log_h = prior.log_weight_on_support(tree);
    double lq = 0.0;
    for (const Context& ctx : tree.contexts()) lq += tracker.term(ctx);
    weighted.add(log_h + lq);
    zeta.add(log_h);
    ++support_size;
  });
  return EvidenceSum{weighted.value(), zeta.value(), support_size};
}

std::unordered_map<ContextTree, double, TreeHash> exact_posterior(
    const CountTrie& trie, const TreePrior& prior,
    const DirichletHyper& hyper) {
  LogQTracker tracker(trie, hyper);
  std::vector<ContextTree> trees;
  std::vector<double> logs;
  enumerate_trees(prior, [&](const ContextTree& tree) {
    double lq = 0.0;
    for (const Context& ctx : tree.contexts()) lq += tracker.term(ctx);
    trees.push_back(tree);
    logs.push_back(prior.log_weight_on_support(tree) + lq);
  });
  if (trees.empty()) {
    fail(ErrorCode::Support, "prior support is empty");
  }
  double max_log = *std::max_element(logs.begin(), logs.end());
  double scaled_total = 0.0;
  for (double l : logs) scaled_total += std::exp(l - max_log);

  std::unordered_map<ContextTree, double, TreeHash> posterior;
  posterior.reserve(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i) {
    posterior.emplace(std::move(trees[i]),
                      std::exp(logs[i] - max_log) / scaled_total);
  }
  return posterior;
}

double exact_log10_bayes_factor(const CountTrie& trie, Symbol state,
                                const DirichletHyper& hyper, int depth_bound) {
  if (state < 0 || state >= trie.alphabet_size()) {
    fail(ErrorCode::InvalidArgument, "state outside the alphabet");
  }
  TreePrior h_a = renewal_hypothesis_prior(trie.alphabet_size(), depth_bound,
                                           state, true, hyper.allowed_matrix());
  TreePrior h_bar = renewal_hypothesis_prior(
      trie.alphabet_size(), depth_bound, state, false, hyper.allowed_matrix());
  EvidenceSum num = evidence_sum(trie, h_a, hyper);
  EvidenceSum den = evidence_sum(trie, h_bar, hyper);
  if (num.support_size == 0) {
    fail(ErrorCode::Support, "renewing hypothesis has empty support");
  }
  if (den.support_size == 0) {
    fail(ErrorCode::Support, "non-renewing hypothesis has empty support");
  }
  double log_bf = (den.log_zeta - num.log_zeta) +
                  (num.log_weighted_q_sum - den.log_weighted_q_sum);
  return ln_to_log10(log_bf);
}

}  // namespace vlmc
