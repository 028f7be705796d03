#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vlmc/dataset.hpp"

namespace vlmc {

// A context is a non-empty suffix of the past, stored most-recent-first:
// syms[0] is the symbol at time t-1, syms[1] the one at t-2, and so on.
// Stored this way a context is a root-to-leaf path of the context trie and
// suffix lookup is a plain prefix descent. Human-facing renderings reverse
// the order (oldest symbol first), matching how suffixes read in a sequence.
struct Context {
  std::vector<Symbol> syms;

  Context() = default;
  explicit Context(std::vector<Symbol> s) : syms(std::move(s)) {}
  Context(std::initializer_list<Symbol> s) : syms(s) {}

  int length() const { return static_cast<int>(syms.size()); }
  Symbol most_recent() const { return syms.front(); }
  Symbol oldest() const { return syms.back(); }

  // The context for the branch grown one step deeper into the past.
  Context child(Symbol older) const;
  // Drops the oldest symbol; length must be >= 2.
  Context parent() const;

  auto operator<=>(const Context&) const = default;
};

// Oldest-first digit string, e.g. MRF (1,1,0) renders as "011".
std::string render_context(const Context& ctx);
// Most-recent-first rendering, for debugging trie layouts.
std::string render_context_recent_first(const Context& ctx);
// Inverse of render_context. Accepts digits 0-9 and letters a-z for
// alphabets larger than ten symbols.
Context parse_context(const std::string& oldest_first, int alphabet_size);

struct ContextHash {
  std::size_t operator()(const Context& ctx) const noexcept;
};

// A full irreducible suffix-free set of contexts in canonical form
// (sorted lexicographically on the most-recent-first representation).
// Instances are only created through validate_tree / make_tree, so a
// ContextTree value is always structurally valid.
class ContextTree {
public:
  const std::vector<Context>& contexts() const { return contexts_; }
  int size() const { return static_cast<int>(contexts_.size()); }
  int depth() const { return depth_; }
  int alphabet_size() const { return alphabet_size_; }

  bool contains(const Context& ctx) const;

  // Constructs without structural validation; the caller guarantees the set
  // is a valid full tree. Grow and prune results qualify, which keeps the
  // sampler's proposal loop free of per-candidate trie rebuilds.
  static ContextTree assume_valid(std::vector<Context> contexts,
                                  int alphabet_size);

  auto operator<=>(const ContextTree&) const = default;

private:
  friend struct TreeValidation;
  ContextTree(std::vector<Context> sorted, int m, int depth)
      : contexts_(std::move(sorted)), alphabet_size_(m), depth_(depth) {}

  std::vector<Context> contexts_;
  int alphabet_size_ = 0;
  int depth_ = 0;
};

struct TreeHash {
  std::size_t operator()(const ContextTree& tree) const noexcept;
};

struct TreeViolation {
  enum class Kind { Empty, SymbolRange, DepthExceeded, SuffixProperty, NotFull };
  Kind kind;
  std::string detail;
};

struct TreeValidation {
  std::optional<ContextTree> tree;
  std::vector<TreeViolation> violations;

  bool ok() const { return tree.has_value(); }

  static TreeValidation valid(std::vector<Context> sorted, int m, int depth) {
    return TreeValidation{ContextTree(std::move(sorted), m, depth), {}};
  }
};

// Checks the suffix property, fullness and the depth bound; returns the
// canonical tree or the list of violations, each naming the offending
// context (rendered oldest-first). Duplicate contexts collapse silently.
TreeValidation validate_tree(const std::vector<Context>& contexts,
                             int alphabet_size, int depth_bound);

// validate_tree that throws Error(Validation) listing every violation.
ContextTree make_tree(const std::vector<Context>& contexts, int alphabet_size,
                      int depth_bound);

// The unique context that is a suffix of the given past (read with its most
// recent symbol last). The past must be at least as long as the tree depth.
const Context& suffix_map(const ContextTree& tree,
                          std::span<const Symbol> past);

// True when `state` labels no inner node of the trie: in every context it
// may occur only as the oldest symbol.
bool is_renewing(const ContextTree& tree, Symbol state);

// Row `from`, column `to` say whether symbol `to` may follow `from`.
class AllowedMatrix {
public:
  AllowedMatrix(int alphabet_size, std::vector<std::vector<bool>> allowed);

  int alphabet_size() const { return m_; }
  bool allowed(Symbol from, Symbol to) const {
    return allowed_[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)];
  }
  // Symbols that may follow `from`, ascending.
  const std::vector<Symbol>& allowed_next(Symbol from) const {
    return next_[static_cast<std::size_t>(from)];
  }

private:
  int m_;
  std::vector<std::vector<bool>> allowed_;
  std::vector<std::vector<Symbol>> next_;
};

// True when some context carries a prohibited transition away from a
// non-leaf position. The transition whose older symbol is the context's
// oldest (the leaf of the trie) is tolerated: fullness forces such contexts
// to exist and their counts are always zero.
bool has_prohibited_inner(const ContextTree& tree, const AllowedMatrix& allowed);

// Monte Carlo datasets never contain prohibited pairs; user-supplied ones
// might. Returns a description of the first offending adjacent pair, if any.
std::optional<std::string> find_prohibited_pair(const Dataset& dataset,
                                                const AllowedMatrix& allowed);

}  // namespace vlmc
