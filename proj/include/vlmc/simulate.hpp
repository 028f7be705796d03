#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "vlmc/dataset.hpp"
#include "vlmc/tree.hpp"

namespace vlmc {

// A context tree together with one next-symbol distribution per context.
// With an allowed matrix attached, prohibited transitions must carry
// probability zero.
class ProbabilisticContextTree {
public:
  using ProbMap =
      std::unordered_map<Context, std::vector<double>, ContextHash>;

  ProbabilisticContextTree(ContextTree tree, ProbMap probabilities,
                           std::optional<AllowedMatrix> allowed = std::nullopt);

  const ContextTree& tree() const { return tree_; }
  int alphabet_size() const { return tree_.alphabet_size(); }
  int depth() const { return tree_.depth(); }
  const std::vector<double>& probabilities(const Context& ctx) const;
  const std::optional<AllowedMatrix>& allowed_matrix() const {
    return allowed_;
  }

private:
  ContextTree tree_;
  ProbMap p_;
  std::optional<AllowedMatrix> allowed_;
};

// Generates `num_sequences` independent chains of length `length` each.
// A sequence starts from depth-bound-many uniform symbols, evolves for
// burn_in extra steps and keeps the last `length` symbols, so every kept
// symbol was drawn from the model. burn_in < 0 selects the default
// max(1000, 10 * depth). Per-sequence seeds derive from `seed` and the
// sequence index; a fixed seed reproduces the dataset exactly.
Dataset simulate(const ProbabilisticContextTree& pct, int num_sequences,
                 std::int64_t length, std::uint64_t seed,
                 std::int64_t burn_in = -1);

// The two binary reference models: a depth-6 chain where runs of ones are
// broken by a renewal zero, and its variant growing 01111 into 001111 and
// 101111, which destroys the renewal property of zero.
ProbabilisticContextTree model1();
ProbabilisticContextTree model2();

}  // namespace vlmc
