#include "vlmc/tree.hpp"

#include <algorithm>
#include <map>

#include "vlmc/error.hpp"

namespace vlmc {

Context Context::child(Symbol older) const {
  Context c(*this);
  c.syms.push_back(older);
  return c;
}

Context Context::parent() const {
  Context c(*this);
  c.syms.pop_back();
  return c;
}

namespace {

char symbol_char(Symbol s) {
  if (s < 10) return static_cast<char>('0' + s);
  if (s < 36) return static_cast<char>('a' + (s - 10));
  fail(ErrorCode::InvalidArgument,
       "cannot render symbol " + std::to_string(s) +
           "; string contexts support alphabets up to 36 symbols");
}

Symbol symbol_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return 10 + (c - 'a');
  fail(ErrorCode::Parse,
       std::string("invalid symbol character '") + c + "' in context string");
}

}  // namespace

std::string render_context(const Context& ctx) {
  std::string out;
  out.reserve(ctx.syms.size());
  for (auto it = ctx.syms.rbegin(); it != ctx.syms.rend(); ++it) {
    out.push_back(symbol_char(*it));
  }
  return out;
}

std::string render_context_recent_first(const Context& ctx) {
  std::string out;
  out.reserve(ctx.syms.size());
  for (Symbol s : ctx.syms) out.push_back(symbol_char(s));
  return out;
}

Context parse_context(const std::string& oldest_first, int alphabet_size) {
  if (oldest_first.empty()) {
    fail(ErrorCode::Parse, "context string must not be empty");
  }
  Context ctx;
  ctx.syms.reserve(oldest_first.size());
  for (auto it = oldest_first.rbegin(); it != oldest_first.rend(); ++it) {
    Symbol s = symbol_value(*it);
    if (s >= alphabet_size) {
      fail(ErrorCode::Parse, "context '" + oldest_first + "' uses symbol " +
                                 std::to_string(s) +
                                 " outside alphabet of size " +
                                 std::to_string(alphabet_size));
    }
    ctx.syms.push_back(s);
  }
  return ctx;
}

std::size_t ContextHash::operator()(const Context& ctx) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (Symbol s : ctx.syms) {
    h ^= static_cast<std::size_t>(s) + 0x9e3779b97f4a7c15ULL;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::size_t TreeHash::operator()(const ContextTree& tree) const noexcept {
  std::size_t h = 0x84222325cbf29ce4ULL;
  ContextHash ch;
  for (const Context& ctx : tree.contexts()) {
    h ^= ch(ctx) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

bool ContextTree::contains(const Context& ctx) const {
  return std::binary_search(contexts_.begin(), contexts_.end(), ctx);
}

ContextTree ContextTree::assume_valid(std::vector<Context> contexts,
                                      int alphabet_size) {
  std::sort(contexts.begin(), contexts.end());
  int depth = 0;
  for (const Context& ctx : contexts) depth = std::max(depth, ctx.length());
  return ContextTree(std::move(contexts), alphabet_size, depth);
}

namespace {

// Trie over the most-recent-first representations. terminal marks a context.
struct ProbeNode {
  std::map<Symbol, int> children;
  bool terminal = false;
};

}  // namespace

TreeValidation validate_tree(const std::vector<Context>& contexts,
                             int alphabet_size, int depth_bound) {
  TreeValidation result;

  if (contexts.empty()) {
    result.violations.push_back(
        {TreeViolation::Kind::Empty, "context set is empty"});
    return result;
  }

  std::vector<Context> sorted(contexts);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  int depth = 0;
  for (const Context& ctx : sorted) {
    if (ctx.length() == 0) {
      result.violations.push_back(
          {TreeViolation::Kind::Empty, "empty context in set"});
      return result;
    }
    for (Symbol s : ctx.syms) {
      if (s < 0 || s >= alphabet_size) {
        result.violations.push_back(
            {TreeViolation::Kind::SymbolRange,
             "context " + render_context(ctx) + " uses symbol " +
                 std::to_string(s) + " outside alphabet of size " +
                 std::to_string(alphabet_size)});
      }
    }
    if (ctx.length() > depth_bound) {
      result.violations.push_back(
          {TreeViolation::Kind::DepthExceeded,
           "context " + render_context(ctx) + " has length " +
               std::to_string(ctx.length()) + " > depth bound " +
               std::to_string(depth_bound)});
    }
    depth = std::max(depth, ctx.length());
  }
  if (!result.violations.empty()) return result;

  std::vector<ProbeNode> nodes(1);
  for (const Context& ctx : sorted) {
    int node = 0;
    for (Symbol s : ctx.syms) {
      auto [it, inserted] = nodes[node].children.try_emplace(
          s, static_cast<int>(nodes.size()));
      if (inserted) nodes.emplace_back();
      node = it->second;
    }
    nodes[node].terminal = true;
  }

  // Suffix property: a context that is an ancestor of another context shows
  // up as a terminal node with children.
  for (const Context& ctx : sorted) {
    int node = 0;
    for (int j = 0; j < ctx.length(); ++j) {
      node = nodes[node].children.at(ctx.syms[j]);
      if (nodes[node].terminal && j + 1 < ctx.length()) {
        Context prefix(
            std::vector<Symbol>(ctx.syms.begin(), ctx.syms.begin() + j + 1));
        result.violations.push_back(
            {TreeViolation::Kind::SuffixProperty,
             "context " + render_context(prefix) + " is a proper suffix of " +
                 render_context(ctx)});
      }
    }
  }
  if (!result.violations.empty()) return result;

  // Fullness: every node that has children must have all m of them.
  std::vector<Symbol> path;
  auto walk = [&](auto&& self, int node) -> void {
    const ProbeNode& n = nodes[node];
    if (n.children.empty()) return;
    for (Symbol s = 0; s < alphabet_size; ++s) {
      auto it = n.children.find(s);
      if (it == n.children.end()) {
        Context missing(path);
        missing.syms.push_back(s);
        result.violations.push_back(
            {TreeViolation::Kind::NotFull,
             "no context with suffix " + render_context(missing) +
                 " (sibling set incomplete)"});
        continue;
      }
      path.push_back(s);
      self(self, it->second);
      path.pop_back();
    }
  };
  walk(walk, 0);
  if (!result.violations.empty()) return result;

  return TreeValidation::valid(std::move(sorted), alphabet_size, depth);
}

ContextTree make_tree(const std::vector<Context>& contexts, int alphabet_size,
                      int depth_bound) {
  TreeValidation v = validate_tree(contexts, alphabet_size, depth_bound);
  if (v.ok()) return *std::move(v.tree);
  std::string msg = "invalid context tree:";
  for (const TreeViolation& violation : v.violations) {
    msg += "\n  - " + violation.detail;
  }
  fail(ErrorCode::Validation, msg);
}

const Context& suffix_map(const ContextTree& tree,
                          std::span<const Symbol> past) {
  if (static_cast<int>(past.size()) < tree.depth()) {
    fail(ErrorCode::InvalidArgument,
         "past of length " + std::to_string(past.size()) +
             " is shorter than the tree depth " + std::to_string(tree.depth()));
  }
  // Contexts are sorted most-recent-first, so the match is found by binary
  // searching for the longest context that prefixes the reversed past.
  Context probe;
  probe.syms.reserve(tree.depth());
  for (int j = 0; j < tree.depth(); ++j) {
    probe.syms.push_back(past[past.size() - 1 - static_cast<std::size_t>(j)]);
  }
  auto it = std::upper_bound(tree.contexts().begin(), tree.contexts().end(),
                             probe);
  if (it != tree.contexts().begin()) {
    --it;
    const Context& candidate = *it;
    if (candidate.length() <= static_cast<int>(probe.syms.size()) &&
        std::equal(candidate.syms.begin(), candidate.syms.end(),
                   probe.syms.begin())) {
      return candidate;
    }
  }
  fail(ErrorCode::Internal,
       "no context matches the past; tree is not proper for this input");
}

bool is_renewing(const ContextTree& tree, Symbol state) {
  for (const Context& ctx : tree.contexts()) {
    for (int j = 0; j + 1 < ctx.length(); ++j) {
      if (ctx.syms[static_cast<std::size_t>(j)] == state) return false;
    }
  }
  return true;
}

AllowedMatrix::AllowedMatrix(int alphabet_size,
                             std::vector<std::vector<bool>> allowed)
    : m_(alphabet_size), allowed_(std::move(allowed)) {
  if (m_ < 2) {
    fail(ErrorCode::InvalidArgument, "alphabet size must be at least 2");
  }
  if (static_cast<int>(allowed_.size()) != m_) {
    fail(ErrorCode::Validation, "allowed matrix must have m rows");
  }
  next_.resize(static_cast<std::size_t>(m_));
  std::vector<bool> column_has_source(static_cast<std::size_t>(m_), false);
  for (int from = 0; from < m_; ++from) {
    const auto& row = allowed_[static_cast<std::size_t>(from)];
    if (static_cast<int>(row.size()) != m_) {
      fail(ErrorCode::Validation, "allowed matrix must have m columns per row");
    }
    for (int to = 0; to < m_; ++to) {
      if (row[static_cast<std::size_t>(to)]) {
        next_[static_cast<std::size_t>(from)].push_back(to);
        column_has_source[static_cast<std::size_t>(to)] = true;
      }
    }
    if (next_[static_cast<std::size_t>(from)].empty()) {
      fail(ErrorCode::Validation, "symbol " + std::to_string(from) +
                                      " has no allowed successor");
    }
  }
  for (int to = 0; to < m_; ++to) {
    if (!column_has_source[static_cast<std::size_t>(to)]) {
      fail(ErrorCode::Validation,
           "symbol " + std::to_string(to) + " has no allowed predecessor");
    }
  }
}

bool has_prohibited_inner(const ContextTree& tree,
                          const AllowedMatrix& allowed) {
  for (const Context& ctx : tree.contexts()) {
    // Pair i: time transition syms[i+1] -> syms[i]. The pair whose older
    // member is the oldest symbol (i == length-2) sits at the leaf and is
    // tolerated; anything shallower excludes the tree.
    for (int i = 0; i + 2 < ctx.length(); ++i) {
      Symbol newer = ctx.syms[static_cast<std::size_t>(i)];
      Symbol older = ctx.syms[static_cast<std::size_t>(i) + 1];
      if (!allowed.allowed(older, newer)) return true;
    }
  }
  return false;
}

std::optional<std::string> find_prohibited_pair(const Dataset& dataset,
                                                const AllowedMatrix& allowed) {
  if (dataset.alphabet_size() != allowed.alphabet_size()) {
    fail(ErrorCode::Validation,
         "allowed matrix alphabet size " +
             std::to_string(allowed.alphabet_size()) +
             " does not match dataset alphabet size " +
             std::to_string(dataset.alphabet_size()));
  }
  for (int i = 0; i < dataset.num_sequences(); ++i) {
    const Sequence& seq = dataset.sequence(i);
    for (std::size_t t = 1; t < seq.size(); ++t) {
      if (!allowed.allowed(seq[t - 1], seq[t])) {
        return "sequence " + std::to_string(i + 1) + ", position " +
               std::to_string(t + 1) + ": prohibited transition " +
               std::to_string(seq[t - 1]) + " -> " + std::to_string(seq[t]);
      }
    }
  }
  return std::nullopt;
}

}  // namespace vlmc
