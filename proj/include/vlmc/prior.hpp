#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "vlmc/tree.hpp"

namespace vlmc {

// Prior over context trees proportional to h(tau): an indicator built from
// composable constraints times an optional bounded log-weight. h(tau) > 0
// exactly when every constraint holds.
class TreePrior {
public:
  using LogWeightFn = std::function<double(const ContextTree&)>;

  TreePrior(int alphabet_size, int depth_bound);

  TreePrior& require_renewing(Symbol state);
  TreePrior& require_not_renewing(Symbol state);
  TreePrior& require_no_prohibited_inner(AllowedMatrix allowed);
  TreePrior& set_log_weight(LogWeightFn fn);

  int alphabet_size() const { return m_; }
  int depth_bound() const { return depth_bound_; }
  const std::vector<Symbol>& renewing_states() const { return renewing_; }
  const std::vector<Symbol>& not_renewing_states() const {
    return not_renewing_;
  }
  const std::optional<AllowedMatrix>& allowed_matrix() const {
    return allowed_;
  }

  bool in_support(const ContextTree& tree) const;
  // log h(tau); fails with Error(Support) outside the support.
  double log_weight(const ContextTree& tree) const;
  // log-weight without the support check; the caller guarantees membership.
  double log_weight_on_support(const ContextTree& tree) const {
    return log_weight_fn_ ? log_weight_fn_(tree) : 0.0;
  }
  bool has_custom_weight() const { return static_cast<bool>(log_weight_fn_); }

  // Fails with Error(Support) when no tree of depth <= L satisfies the
  // constraints (e.g. contradictory renewal requirements, or a
  // not-renewing requirement with L = 1).
  void check_support() const;

private:
  int m_;
  int depth_bound_;
  std::vector<Symbol> renewing_;
  std::vector<Symbol> not_renewing_;
  std::optional<AllowedMatrix> allowed_;
  LogWeightFn log_weight_fn_;
};

// One edge of the neighborhood graph, identified by the context it pivots
// on: Grow replaces `pivot` by its m children, Prune collapses the complete
// sibling set below `pivot` back into it.
struct Move {
  enum class Kind { Grow, Prune };
  Kind kind;
  Context pivot;
};

ContextTree apply_move(const ContextTree& tree, const Move& move);

// Moves from `tree` whose result stays inside the prior support.
std::vector<Move> grow_moves(const ContextTree& tree, const TreePrior& prior);
std::vector<Move> prune_moves(const ContextTree& tree, const TreePrior& prior);

// The neighborhoods as tree sets (the grow operator and its mirror).
std::vector<ContextTree> grow_set(const ContextTree& tree,
                                  const TreePrior& prior);
std::vector<ContextTree> prune_set(const ContextTree& tree,
                                   const TreePrior& prior);

// Tree with the fewest contexts satisfying the prior, ties broken by the
// lexicographically smallest canonical form. Breadth-first search over grow
// operations from the depth-1 tree.
ContextTree minimal_tree(const TreePrior& prior);

// The indicator prior for one side of the renewal hypothesis: trees where
// `state` is (or is not) a renewal state, optionally restricted to trees
// free of prohibited inner transitions.
TreePrior renewal_hypothesis_prior(int alphabet_size, int depth_bound,
                                   Symbol state, bool renewing,
                                   const std::optional<AllowedMatrix>& allowed);

// Number of full trees of depth <= L (the g recursion minus the bare
// root), saturating at `cap`.
double tree_space_size(int alphabet_size, int depth_bound, double cap = 1e18);

inline constexpr double kEnumerationBound = 1e6;

// Streams every tree in the support exactly once (depth-first over
// leaf-or-expand decisions). Fails with Error(Bound) and the size estimate
// when the unconstrained space exceeds kEnumerationBound.
void enumerate_trees(const TreePrior& prior,
                     const std::function<void(const ContextTree&)>& yield);

std::vector<ContextTree> enumerate_trees(const TreePrior& prior);

}  // namespace vlmc
