#include "vlmc/simulate.hpp"

#include <cmath>
#include <span>

#include "vlmc/error.hpp"
#include "vlmc/rng.hpp"

namespace vlmc {

ProbabilisticContextTree::ProbabilisticContextTree(
    ContextTree tree, ProbMap probabilities,
    std::optional<AllowedMatrix> allowed)
    : tree_(std::move(tree)), p_(std::move(probabilities)),
      allowed_(std::move(allowed)) {
  const int m = tree_.alphabet_size();
  if (allowed_ && allowed_->alphabet_size() != m) {
    fail(ErrorCode::Validation,
         "allowed matrix alphabet size does not match the tree");
  }
  for (const Context& ctx : tree_.contexts()) {
    auto it = p_.find(ctx);
    if (it == p_.end()) {
      fail(ErrorCode::Validation, "missing probability vector for context " +
                                      render_context(ctx));
    }
    const std::vector<double>& p = it->second;
    if (static_cast<int>(p.size()) != m) {
      fail(ErrorCode::Validation,
           "probability vector for context " + render_context(ctx) +
               " must have m entries");
    }
    double sum = 0.0;
    for (int k = 0; k < m; ++k) {
      double v = p[static_cast<std::size_t>(k)];
      if (!(v >= 0.0) || !std::isfinite(v)) {
        fail(ErrorCode::Validation,
             "negative or non-finite probability for context " +
                 render_context(ctx));
      }
      if (allowed_ && v > 0.0 && !allowed_->allowed(ctx.most_recent(), k)) {
        fail(ErrorCode::Validation,
             "context " + render_context(ctx) +
                 " assigns positive probability to the prohibited transition " +
                 std::to_string(ctx.most_recent()) + " -> " +
                 std::to_string(k));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      fail(ErrorCode::Validation,
           "probabilities for context " + render_context(ctx) +
               " sum to " + std::to_string(sum) + " instead of 1");
    }
  }
  if (p_.size() != tree_.contexts().size()) {
    fail(ErrorCode::Validation,
         "probability map has entries for unknown contexts");
  }
}

const std::vector<double>& ProbabilisticContextTree::probabilities(
    const Context& ctx) const {
  auto it = p_.find(ctx);
  if (it == p_.end()) {
    fail(ErrorCode::InvalidArgument,
         "no probability vector for context " + render_context(ctx));
  }
  return it->second;
}

namespace {

Symbol draw_categorical(const std::vector<double>& p, SplitMix64& rng) {
  double u = rng.next_double();
  double cumulative = 0.0;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    cumulative += p[k];
    if (u < cumulative) return static_cast<Symbol>(k);
  }
  return static_cast<Symbol>(p.size() - 1);
}

}  // namespace

Dataset simulate(const ProbabilisticContextTree& pct, int num_sequences,
                 std::int64_t length, std::uint64_t seed,
                 std::int64_t burn_in) {
  const int m = pct.alphabet_size();
  const int depth = pct.depth();
  if (num_sequences < 1) {
    fail(ErrorCode::InvalidArgument, "need at least one sequence");
  }
  if (length <= depth) {
    fail(ErrorCode::InvalidArgument,
         "sequence length must exceed the model depth " +
             std::to_string(depth));
  }
  if (burn_in < 0) {
    burn_in = std::max<std::int64_t>(1000, 10 * depth);
  }

  std::vector<Sequence> sequences;
  sequences.reserve(static_cast<std::size_t>(num_sequences));
  for (int i = 0; i < num_sequences; ++i) {
    SplitMix64 rng(seed ^ static_cast<std::uint64_t>(i));
    const std::int64_t total = depth + burn_in + length;
    Sequence buffer;
    buffer.reserve(static_cast<std::size_t>(total));
    for (int j = 0; j < depth; ++j) {
      buffer.push_back(static_cast<Symbol>(
          rng.next_below(static_cast<std::uint64_t>(m))));
    }
    for (std::int64_t t = depth; t < total; ++t) {
      const Context& ctx = suffix_map(
          pct.tree(), std::span<const Symbol>(buffer.data(),
                                              static_cast<std::size_t>(t)));
      buffer.push_back(draw_categorical(pct.probabilities(ctx), rng));
    }
    sequences.emplace_back(buffer.end() - length, buffer.end());
  }
  return Dataset(Alphabet(m), std::move(sequences), depth);
}

namespace {

Context from_recent_first(std::initializer_list<Symbol> recent_first) {
  return Context(std::vector<Symbol>(recent_first));
}

}  // namespace

ProbabilisticContextTree model1() {
  const std::vector<double> even{0.5, 0.5};
  const std::vector<double> uneven{1.0 / 6.0, 5.0 / 6.0};
  ProbabilisticContextTree::ProbMap p;
  std::vector<Context> contexts;
  auto add = [&](Context ctx, const std::vector<double>& prob) {
    p.emplace(ctx, prob);
    contexts.push_back(std::move(ctx));
  };
  // Contexts most-recent-first: a zero after j ones, j = 0..5, plus the
  // all-ones run. The distributions alternate with the run length.
  add(from_recent_first({0}), uneven);
  add(from_recent_first({1, 0}), even);
  add(from_recent_first({1, 1, 0}), uneven);
  add(from_recent_first({1, 1, 1, 0}), even);
  add(from_recent_first({1, 1, 1, 1, 0}), uneven);
  add(from_recent_first({1, 1, 1, 1, 1, 0}), even);
  add(from_recent_first({1, 1, 1, 1, 1, 1}), uneven);
  return ProbabilisticContextTree(make_tree(contexts, 2, 6), std::move(p));
}

ProbabilisticContextTree model2() {
  const std::vector<double> even{0.5, 0.5};
  const std::vector<double> uneven{1.0 / 6.0, 5.0 / 6.0};
  ProbabilisticContextTree::ProbMap p;
  std::vector<Context> contexts;
  auto add = [&](Context ctx, const std::vector<double>& prob) {
    p.emplace(ctx, prob);
    contexts.push_back(std::move(ctx));
  };
  add(from_recent_first({0}), uneven);
  add(from_recent_first({1, 0}), even);
  add(from_recent_first({1, 1, 0}), uneven);
  add(from_recent_first({1, 1, 1, 0}), even);
  // The branch grown below 01111: the context seen as "01111" in a sequence
  // splits on the symbol before the zero.
  add(from_recent_first({1, 1, 1, 1, 0, 0}), uneven);
  add(from_recent_first({1, 1, 1, 1, 0, 1}), {0.75, 0.25});
  add(from_recent_first({1, 1, 1, 1, 1, 0}), even);
  add(from_recent_first({1, 1, 1, 1, 1, 1}), uneven);
  return ProbabilisticContextTree(make_tree(contexts, 2, 6), std::move(p));
}

}  // namespace vlmc
