#include "vlmc/count_trie.hpp"

#include <numeric>

#include "vlmc/error.hpp"

namespace vlmc {

CountTrie build_count_trie(const Dataset& dataset) {
  CountTrie trie(dataset.alphabet_size(), dataset.depth_bound());
  const int L = dataset.depth_bound();
  for (const Sequence& seq : dataset.sequences()) {
    const auto T = static_cast<std::int64_t>(seq.size());
    for (std::int64_t t = L; t < T; ++t) {  // predicted position, 0-based
      const Symbol next = seq[static_cast<std::size_t>(t)];
      std::int32_t node = 0;
      trie.nodes_[0].counts[static_cast<std::size_t>(next)] += 1;
      for (int back = 1; back <= L; ++back) {
        const Symbol past = seq[static_cast<std::size_t>(t - back)];
        std::int32_t& slot =
            trie.nodes_[static_cast<std::size_t>(node)]
                .child[static_cast<std::size_t>(past)];
        if (slot < 0) {
          slot = static_cast<std::int32_t>(trie.nodes_.size());
          trie.nodes_.emplace_back(trie.m_);
        }
        node = slot;
        trie.nodes_[static_cast<std::size_t>(node)]
            .counts[static_cast<std::size_t>(next)] += 1;
      }
    }
  }
  return trie;
}

const CountTrie::Node* CountTrie::find(const Context& suffix) const {
  if (suffix.length() > depth_) {
    fail(ErrorCode::InvalidArgument,
         "suffix of length " + std::to_string(suffix.length()) +
             " exceeds the trie depth " + std::to_string(depth_));
  }
  std::int32_t node = 0;
  for (Symbol s : suffix.syms) {
    node = nodes_[static_cast<std::size_t>(node)].child[static_cast<std::size_t>(s)];
    if (node < 0) return nullptr;
  }
  return &nodes_[static_cast<std::size_t>(node)];
}

CountVec CountTrie::counts(const Context& suffix) const {
  const Node* node = find(suffix);
  if (node == nullptr) return CountVec(static_cast<std::size_t>(m_), 0);
  return node->counts;
}

std::int64_t CountTrie::total(const Context& suffix) const {
  const Node* node = find(suffix);
  if (node == nullptr) return 0;
  return std::accumulate(node->counts.begin(), node->counts.end(),
                         std::int64_t{0});
}

std::int64_t CountTrie::total_transitions() const {
  return std::accumulate(nodes_[0].counts.begin(), nodes_[0].counts.end(),
                         std::int64_t{0});
}

std::vector<CountVec> counts_for_tree(const CountTrie& trie,
                                      const ContextTree& tree) {
  if (tree.depth() > trie.depth()) {
    fail(ErrorCode::InvalidArgument,
         "tree depth " + std::to_string(tree.depth()) +
             " exceeds the trie depth " + std::to_string(trie.depth()));
  }
  std::vector<CountVec> out;
  out.reserve(tree.contexts().size());
  for (const Context& ctx : tree.contexts()) {
    out.push_back(trie.counts(ctx));
  }
  return out;
}

}  // namespace vlmc
