#include "vlmc/prior.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <queue>
#include <set>
#include <string>

#include "vlmc/error.hpp"

namespace vlmc {

TreePrior::TreePrior(int alphabet_size, int depth_bound)
    : m_(alphabet_size), depth_bound_(depth_bound) {
  if (m_ < 2) {
    fail(ErrorCode::InvalidArgument, "alphabet size must be at least 2");
  }
  if (depth_bound_ < 1) {
    fail(ErrorCode::InvalidArgument, "depth bound must be positive");
  }
}

TreePrior& TreePrior::require_renewing(Symbol state) {
  if (state < 0 || state >= m_) {
    fail(ErrorCode::InvalidArgument,
         "renewal state " + std::to_string(state) + " outside alphabet");
  }
  renewing_.push_back(state);
  return *this;
}

TreePrior& TreePrior::require_not_renewing(Symbol state) {
  if (state < 0 || state >= m_) {
    fail(ErrorCode::InvalidArgument,
         "renewal state " + std::to_string(state) + " outside alphabet");
  }
  not_renewing_.push_back(state);
  return *this;
}

TreePrior& TreePrior::require_no_prohibited_inner(AllowedMatrix allowed) {
  if (allowed.alphabet_size() != m_) {
    fail(ErrorCode::Validation,
         "allowed matrix alphabet size does not match the prior");
  }
  allowed_ = std::move(allowed);
  return *this;
}

TreePrior& TreePrior::set_log_weight(LogWeightFn fn) {
  log_weight_fn_ = std::move(fn);
  return *this;
}

bool TreePrior::in_support(const ContextTree& tree) const {
  if (tree.alphabet_size() != m_ || tree.depth() > depth_bound_) return false;
  for (Symbol a : renewing_) {
    if (!is_renewing(tree, a)) return false;
  }
  for (Symbol a : not_renewing_) {
    if (is_renewing(tree, a)) return false;
  }
  if (allowed_ && has_prohibited_inner(tree, *allowed_)) return false;
  return true;
}

double TreePrior::log_weight(const ContextTree& tree) const {
  if (!in_support(tree)) {
    fail(ErrorCode::Support, "tree outside the prior support");
  }
  return log_weight_fn_ ? log_weight_fn_(tree) : 0.0;
}

void TreePrior::check_support() const {
  minimal_tree(*this);
}

namespace {

ContextTree depth_one_tree(int m, int depth_bound) {
  std::vector<Context> contexts;
  contexts.reserve(static_cast<std::size_t>(m));
  for (Symbol s = 0; s < m; ++s) contexts.push_back(Context{s});
  return make_tree(contexts, m, depth_bound);
}

}  // namespace

ContextTree apply_move(const ContextTree& tree, const Move& move) {
  std::vector<Context> contexts = tree.contexts();
  if (move.kind == Move::Kind::Grow) {
    auto it = std::find(contexts.begin(), contexts.end(), move.pivot);
    if (it == contexts.end()) {
      fail(ErrorCode::InvalidArgument, "grow pivot is not a context");
    }
    contexts.erase(it);
    for (Symbol k = 0; k < tree.alphabet_size(); ++k) {
      contexts.push_back(move.pivot.child(k));
    }
  } else {
    for (Symbol k = 0; k < tree.alphabet_size(); ++k) {
      Context child = move.pivot.child(k);
      auto it = std::find(contexts.begin(), contexts.end(), child);
      if (it == contexts.end()) {
        fail(ErrorCode::InvalidArgument, "prune pivot has a missing child");
      }
      contexts.erase(it);
    }
    contexts.push_back(move.pivot);
  }
  // The result of growing or pruning a valid full tree is always valid.
  return ContextTree::assume_valid(std::move(contexts), tree.alphabet_size());
}

std::vector<Move> grow_moves(const ContextTree& tree, const TreePrior& prior) {
  std::vector<Move> moves;
  for (const Context& ctx : tree.contexts()) {
    if (ctx.length() >= prior.depth_bound()) continue;
    Move move{Move::Kind::Grow, ctx};
    if (prior.in_support(apply_move(tree, move))) {
      moves.push_back(std::move(move));
    }
  }
  return moves;
}

std::vector<Move> prune_moves(const ContextTree& tree, const TreePrior& prior) {
  std::vector<Move> moves;
  // A prunable pivot is a context's parent whose m children are all leaves.
  std::set<Context> seen;
  for (const Context& ctx : tree.contexts()) {
    if (ctx.length() < 2) continue;
    Context parent = ctx.parent();
    if (!seen.insert(parent).second) continue;
    bool complete = true;
    for (Symbol k = 0; k < tree.alphabet_size() && complete; ++k) {
      complete = tree.contains(parent.child(k));
    }
    if (!complete) continue;
    Move move{Move::Kind::Prune, parent};
    if (prior.in_support(apply_move(tree, move))) {
      moves.push_back(std::move(move));
    }
  }
  return moves;
}

std::vector<ContextTree> grow_set(const ContextTree& tree,
                                  const TreePrior& prior) {
  std::vector<ContextTree> out;
  for (const Move& move : grow_moves(tree, prior)) {
    out.push_back(apply_move(tree, move));
  }
  return out;
}

std::vector<ContextTree> prune_set(const ContextTree& tree,
                                   const TreePrior& prior) {
  std::vector<ContextTree> out;
  for (const Move& move : prune_moves(tree, prior)) {
    out.push_back(apply_move(tree, move));
  }
  return out;
}

ContextTree minimal_tree(const TreePrior& prior) {
  // Contradictory renewal requirements have empty support at any depth.
  for (Symbol a : prior.renewing_states()) {
    const auto& nr = prior.not_renewing_states();
    if (std::find(nr.begin(), nr.end(), a) != nr.end()) {
      fail(ErrorCode::Support,
           "prior support is empty: state " + std::to_string(a) +
               " required both renewing and not renewing");
    }
  }

  ContextTree root = depth_one_tree(prior.alphabet_size(), prior.depth_bound());
  // The search only needs grow edges: every tree is reachable from the
  // depth-1 tree by grows, and BFS level order equals context count order.
  std::set<ContextTree> visited{root};
  std::vector<ContextTree> level{root};
  // Each unsatisfied not-renewing state needs one grow, so a hit (when one
  // exists) appears within that many levels.
  std::size_t max_levels = prior.not_renewing_states().size() + 1;
  constexpr std::size_t kExpansionCap = 200000;

  for (std::size_t depth = 0; depth < max_levels && !level.empty(); ++depth) {
    std::vector<const ContextTree*> hits;
    for (const ContextTree& tree : level) {
      if (prior.in_support(tree)) hits.push_back(&tree);
    }
    if (!hits.empty()) {
      return **std::min_element(
          hits.begin(), hits.end(),
          [](const ContextTree* a, const ContextTree* b) { return *a < *b; });
    }
    std::vector<ContextTree> next;
    for (const ContextTree& tree : level) {
      for (const Context& ctx : tree.contexts()) {
        if (ctx.length() >= prior.depth_bound()) continue;
        ContextTree grown = apply_move(tree, {Move::Kind::Grow, ctx});
        if (visited.insert(grown).second) {
          next.push_back(std::move(grown));
        }
      }
      if (visited.size() > kExpansionCap) {
        fail(ErrorCode::Support,
             "no tree satisfying the prior found within the search budget");
      }
    }
    level = std::move(next);
  }
  fail(ErrorCode::Support,
       "prior support is empty: no tree of depth <= " +
           std::to_string(prior.depth_bound()) + " satisfies the constraints");
}

TreePrior renewal_hypothesis_prior(int alphabet_size, int depth_bound,
                                   Symbol state, bool renewing,
                                   const std::optional<AllowedMatrix>& allowed) {
  TreePrior prior(alphabet_size, depth_bound);
  if (renewing) {
    prior.require_renewing(state);
  } else {
    prior.require_not_renewing(state);
  }
  if (allowed) prior.require_no_prohibited_inner(*allowed);
  return prior;
}

double tree_space_size(int alphabet_size, int depth_bound, double cap) {
  double g = 1.0;  // bare leaf
  for (int d = 1; d <= depth_bound; ++d) {
    double p = 1.0;
    for (int k = 0; k < alphabet_size; ++k) {
      p *= g;
      if (p > cap) return cap;
    }
    g = 1.0 + p;
    if (g > cap) return cap;
  }
  return g - 1.0;  // drop the bare-root tree
}

namespace {

// Depth-first over pending frontier nodes; each node either becomes a leaf
// (a context) or expands into its m children.
void enumerate_rec(std::vector<Context>& pending, std::vector<Context>& leaves,
                   int m, int depth_bound, const TreePrior& prior,
                   const std::function<void(const ContextTree&)>& yield) {
  if (pending.empty()) {
    ContextTree tree = make_tree(leaves, m, depth_bound);
    if (prior.in_support(tree)) yield(tree);
    return;
  }
  Context node = pending.back();
  pending.pop_back();

  leaves.push_back(node);
  enumerate_rec(pending, leaves, m, depth_bound, prior, yield);
  leaves.pop_back();

  if (node.length() < depth_bound) {
    for (Symbol k = 0; k < m; ++k) pending.push_back(node.child(k));
    enumerate_rec(pending, leaves, m, depth_bound, prior, yield);
    for (Symbol k = 0; k < m; ++k) pending.pop_back();
  }

  pending.push_back(std::move(node));
}

}  // namespace

void enumerate_trees(const TreePrior& prior,
                     const std::function<void(const ContextTree&)>& yield) {
  double size =
      tree_space_size(prior.alphabet_size(), prior.depth_bound());
  if (size > kEnumerationBound) {
    char estimate[64];
    std::snprintf(estimate, sizeof(estimate), size >= 1e18 ? ">= %.2g" : "about %.4g",
                  size);
    fail(ErrorCode::Bound, "tree space too large to enumerate: " +
                               std::string(estimate) + " trees (bound " +
                               std::to_string(static_cast<long long>(
                                   kEnumerationBound)) +
                               ")");
  }
  // The root must expand: the bare-root tree is excluded from the space.
  std::vector<Context> pending;
  for (Symbol k = prior.alphabet_size() - 1; k >= 0; --k) {
    pending.push_back(Context{k});
  }
  std::vector<Context> leaves;
  enumerate_rec(pending, leaves, prior.alphabet_size(), prior.depth_bound(),
                prior, yield);
}

std::vector<ContextTree> enumerate_trees(const TreePrior& prior) {
  std::vector<ContextTree> out;
  enumerate_trees(prior, [&out](const ContextTree& t) { out.push_back(t); });
  return out;
}

}  // namespace vlmc
