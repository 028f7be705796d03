#pragma once

#include <cstdint>
#include <vector>

#include "vlmc/dataset.hpp"
#include "vlmc/tree.hpp"

namespace vlmc {

using CountVec = std::vector<std::int64_t>;

// Transition counts n_{s,k} for every suffix s up to the depth bound,
// laid out as a trie over most-recent-first suffixes. Counting covers the
// positions t = L+1 .. T_i of every sequence, so the counts are the same
// regardless of which context tree they are later aggregated under.
// Immutable after construction; concurrent reads are safe.
class CountTrie {
public:
  int alphabet_size() const { return m_; }
  int depth() const { return depth_; }

  // n_{s,.} for the given suffix; all zeros when s never occurred.
  CountVec counts(const Context& suffix) const;
  std::int64_t total(const Context& suffix) const;
  const CountVec& root_counts() const { return nodes_[0].counts; }
  std::int64_t total_transitions() const;

private:
  friend CountTrie build_count_trie(const Dataset&);
  CountTrie(int m, int depth) : m_(m), depth_(depth) { nodes_.emplace_back(m); }

  struct Node {
    explicit Node(int m)
        : counts(static_cast<std::size_t>(m), 0),
          child(static_cast<std::size_t>(m), -1) {}
    CountVec counts;
    std::vector<std::int32_t> child;
  };

  const Node* find(const Context& suffix) const;

  int m_;
  int depth_;
  std::vector<Node> nodes_;
};

CountTrie build_count_trie(const Dataset& dataset);

// n_{s,.} for every context of the tree, aligned with tree.contexts().
// Unobserved contexts yield zero vectors.
std::vector<CountVec> counts_for_tree(const CountTrie& trie,
                                      const ContextTree& tree);

}  // namespace vlmc
