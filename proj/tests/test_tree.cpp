#include <algorithm>
#include <doctest.h>

#include "vlmc/error.hpp"
#include "vlmc/tree.hpp"

using namespace vlmc;

namespace {

// Contexts written oldest-first, the way they read inside a sequence.
std::vector<Context> parse_all(const std::vector<std::string>& strings,
                               int m) {
  std::vector<Context> out;
  for (const std::string& s : strings) out.push_back(parse_context(s, m));
  return out;
}

std::vector<std::string> rendered(const ContextTree& tree) {
  std::vector<std::string> out;
  for (const Context& ctx : tree.contexts()) out.push_back(render_context(ctx));
  return out;
}

bool has_violation(const TreeValidation& v, TreeViolation::Kind kind) {
  return std::any_of(v.violations.begin(), v.violations.end(),
                     [kind](const TreeViolation& x) { return x.kind == kind; });
}

}  // namespace

TEST_CASE("context rendering is oldest-first, storage most-recent-first") {
  Context ctx = parse_context("01", 2);  // past ends ...0,1
  CHECK(ctx.syms == std::vector<Symbol>{1, 0});
  CHECK(ctx.most_recent() == 1);
  CHECK(ctx.oldest() == 0);
  CHECK(render_context(ctx) == "01");
  CHECK(render_context_recent_first(ctx) == "10");
  CHECK(ctx.child(1) == parse_context("101", 2));
  CHECK(ctx.child(1).parent() == ctx);
}

TEST_CASE("parse_context validates symbols") {
  CHECK_THROWS_AS(parse_context("", 2), Error);
  CHECK_THROWS_AS(parse_context("02", 2), Error);
  CHECK_THROWS_AS(parse_context("0!", 2), Error);
  CHECK(parse_context("0b3", 12).syms == std::vector<Symbol>{3, 11, 0});
}

TEST_CASE("a context together with its extension violates the suffix property") {
  TreeValidation v = validate_tree(parse_all({"0", "1", "11"}, 2), 2, 3);
  CHECK_FALSE(v.ok());
  CHECK(has_violation(v, TreeViolation::Kind::SuffixProperty));
}

TEST_CASE("missing siblings violate fullness") {
  // {0, 011, 111} read oldest-first: the node below the most recent 1..1
  // path lacks its 0-branch sibling structure.
  TreeValidation v = validate_tree(parse_all({"0", "011", "111"}, 2), 2, 3);
  CHECK_FALSE(v.ok());
  CHECK(has_violation(v, TreeViolation::Kind::NotFull));
}

TEST_CASE("full irreducible trees validate and canonicalize") {
  // The three reference trees, written oldest-first.
  for (const auto& strings :
       {std::vector<std::string>{"0", "001", "101", "011", "111"},
        std::vector<std::string>{"10", "00", "01", "11"},
        std::vector<std::string>{"0", "01", "011", "0111", "1111"}}) {
    TreeValidation v = validate_tree(parse_all(strings, 2), 2, 4);
    CHECK(v.ok());
  }
}

TEST_CASE("validation is idempotent on the canonical form") {
  std::vector<Context> contexts = parse_all({"111", "011", "001", "101", "0"}, 2);
  TreeValidation first = validate_tree(contexts, 2, 3);
  REQUIRE(first.ok());
  TreeValidation second = validate_tree(first.tree->contexts(), 2, 3);
  REQUIRE(second.ok());
  CHECK(*first.tree == *second.tree);
  CHECK(std::is_sorted(first.tree->contexts().begin(),
                       first.tree->contexts().end()));
}

TEST_CASE("empty sets and depth overruns are rejected") {
  TreeValidation empty = validate_tree({}, 2, 3);
  CHECK(has_violation(empty, TreeViolation::Kind::Empty));

  TreeValidation deep = validate_tree(parse_all({"0", "01", "011", "111"}, 2),
                                      2, 2);
  CHECK(has_violation(deep, TreeViolation::Kind::DepthExceeded));

  TreeValidation range = validate_tree({Context{5}, Context{0}}, 2, 3);
  CHECK(has_violation(range, TreeViolation::Kind::SymbolRange));
}

TEST_CASE("make_tree throws with every violation listed") {
  try {
    make_tree(parse_all({"0", "1", "11"}, 2), 2, 3);
    FAIL("expected validation failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Validation);
    CHECK(std::string(e.what()).find("suffix") != std::string::npos);
  }
}

TEST_CASE("suffix_map descends to the unique matching context") {
  // Tree with contexts (0), (1,0), (1,1) most-recent-first.
  ContextTree tree = make_tree({Context{0}, Context{1, 0}, Context{1, 1}}, 2, 2);

  std::vector<Symbol> past_a{1, 1, 1, 0};  // most recent 0
  CHECK(render_context(suffix_map(tree, past_a)) == "0");

  std::vector<Symbol> past_b{1, 1, 0, 1};  // most recent 1 after a 0
  CHECK(render_context(suffix_map(tree, past_b)) == "01");

  std::vector<Symbol> past_c{0, 0, 1, 1};
  CHECK(render_context(suffix_map(tree, past_c)) == "11");
}

TEST_CASE("suffix_map on the maximal tree returns the depth-L suffix") {
  ContextTree maximal = make_tree(
      {Context{0, 0}, Context{0, 1}, Context{1, 0}, Context{1, 1}}, 2, 2);
  std::vector<Symbol> past{1, 0, 0, 1};
  const Context& ctx = suffix_map(maximal, past);
  CHECK(ctx == Context{1, 0});  // last two symbols, most recent first
}

TEST_CASE("suffix_map requires enough past") {
  ContextTree tree = make_tree({Context{0}, Context{1, 0}, Context{1, 1}}, 2, 2);
  std::vector<Symbol> past{1};
  CHECK_THROWS_AS(suffix_map(tree, past), Error);
}

TEST_CASE("renewal predicate on the reference trees") {
  // Tree (I): zero only ever ends a run, so it is a renewal state.
  ContextTree tree1 = make_tree(
      {Context{0}, Context{1, 0}, Context{1, 1, 0}, Context{1, 1, 1, 0},
       Context{1, 1, 1, 1, 0}, Context{1, 1, 1, 1, 1}},
      2, 5);
  CHECK(is_renewing(tree1, 0));
  CHECK_FALSE(is_renewing(tree1, 1));

  // Tree (II): the deeper branches bury 0 inside contexts.
  ContextTree tree2 = make_tree(
      {Context{0}, Context{1, 0, 0}, Context{1, 0, 1}, Context{1, 1, 0},
       Context{1, 1, 1, 0, 0}, Context{1, 1, 1, 0, 1}, Context{1, 1, 1, 1, 0},
       Context{1, 1, 1, 1, 1}},
      2, 5);
  CHECK_FALSE(is_renewing(tree2, 0));
  CHECK_FALSE(is_renewing(tree2, 1));

  // Tree (III) over four symbols: only 1 is a renewal state.
  ContextTree tree3 = make_tree(
      {Context{0}, Context{1}, Context{2, 0, 0}, Context{2, 0, 1},
       Context{2, 0, 2}, Context{2, 0, 3}, Context{2, 1}, Context{2, 2},
       Context{2, 3}, Context{3, 0}, Context{3, 1}, Context{3, 2, 0},
       Context{3, 2, 1}, Context{3, 2, 2}, Context{3, 2, 3}, Context{3, 3}},
      4, 3);
  CHECK_FALSE(is_renewing(tree3, 0));
  CHECK(is_renewing(tree3, 1));
  CHECK_FALSE(is_renewing(tree3, 2));
  CHECK_FALSE(is_renewing(tree3, 3));
}

TEST_CASE("depth-1 trees have no inner nodes, so every state renews") {
  ContextTree tree = make_tree({Context{0}, Context{1}, Context{2}}, 3, 2);
  for (Symbol a = 0; a < 3; ++a) CHECK(is_renewing(tree, a));
}

namespace {

// The constrained-alphabet transition table used throughout: symbol 4 may
// only be followed by 2 or 3; 2 only by 0 or 1; 1 and 3 never repeat
// themselves via 1.
AllowedMatrix portuguese_matrix() {
  return AllowedMatrix(5, {{true, true, true, true, true},
                           {true, false, true, true, true},
                           {true, true, false, false, false},
                           {true, false, true, true, true},
                           {false, false, true, true, false}});
}

}  // namespace

TEST_CASE("allowed matrix rejects dead rows and columns") {
  CHECK_THROWS_AS(AllowedMatrix(2, {{false, false}, {true, true}}), Error);
  CHECK_THROWS_AS(AllowedMatrix(2, {{true, false}, {true, false}}), Error);
  AllowedMatrix ok = portuguese_matrix();
  CHECK(ok.allowed_next(4) == std::vector<Symbol>{2, 3});
  CHECK(ok.allowed_next(2) == std::vector<Symbol>{0, 1});
}

TEST_CASE("prohibited transitions strictly inside a context exclude the tree") {
  AllowedMatrix allowed = portuguese_matrix();

  // Tree grown below the suffix 44 (most recent symbol 4 preceded by 4):
  // the 4->4 transition no longer touches the leaf.
  std::vector<Context> contexts;
  for (Symbol s = 0; s < 4; ++s) contexts.push_back(Context{s});
  for (Symbol k = 0; k < 4; ++k) contexts.push_back(Context{4, k});
  for (Symbol k = 0; k < 5; ++k) contexts.push_back(Context{4, 4, k});
  ContextTree inner44 = make_tree(contexts, 5, 3);
  CHECK(has_prohibited_inner(inner44, allowed));
}

TEST_CASE("a prohibited transition at the leaf is tolerated") {
  AllowedMatrix allowed = portuguese_matrix();

  // Fullness forces the context (2,4,4) [reads 442 oldest-first] to exist
  // alongside (2,4,3); its 4->4 pair ends at the leaf and never occurs in
  // data, so the tree stays admissible.
  std::vector<Context> contexts;
  for (Symbol s = 0; s < 5; ++s) {
    if (s != 2) contexts.push_back(Context{s});
  }
  for (Symbol k = 0; k < 5; ++k) {
    if (k != 4) contexts.push_back(Context{2, k});
  }
  for (Symbol k = 0; k < 5; ++k) contexts.push_back(Context{2, 4, k});
  ContextTree leaf44 = make_tree(contexts, 5, 3);
  CHECK_FALSE(has_prohibited_inner(leaf44, allowed));

  // Depth-2 trees only carry leaf transitions.
  std::vector<Context> depth2;
  for (Symbol s = 0; s < 5; ++s) {
    if (s != 4) depth2.push_back(Context{s});
  }
  for (Symbol k = 0; k < 5; ++k) depth2.push_back(Context{4, k});
  CHECK_FALSE(has_prohibited_inner(make_tree(depth2, 5, 2), allowed));
}

TEST_CASE("an all-allowed matrix never excludes a tree") {
  AllowedMatrix all(3, {{true, true, true},
                        {true, true, true},
                        {true, true, true}});
  ContextTree tree = make_tree(
      {Context{0}, Context{1}, Context{2, 0}, Context{2, 1}, Context{2, 2}}, 3,
      2);
  CHECK_FALSE(has_prohibited_inner(tree, all));
}

TEST_CASE("find_prohibited_pair scans datasets") {
  AllowedMatrix allowed = portuguese_matrix();
  Dataset clean = parse_dataset("0 1 2 0 3 2 1 4 2\n", 5, 2);
  CHECK_FALSE(find_prohibited_pair(clean, allowed).has_value());

  Dataset dirty = parse_dataset("0 1 2 2 0\n", 5, 2);
  auto hit = find_prohibited_pair(dirty, allowed);
  REQUIRE(hit.has_value());
  CHECK(hit->find("2 -> 2") != std::string::npos);
}

TEST_CASE("tree hashing and rendering are stable") {
  ContextTree a = make_tree(parse_all({"0", "01", "11"}, 2), 2, 2);
  ContextTree b = make_tree({Context{1, 0}, Context{1, 1}, Context{0}}, 2, 2);
  CHECK(a == b);
  CHECK(TreeHash{}(a) == TreeHash{}(b));
  CHECK(rendered(a) == std::vector<std::string>{"0", "01", "11"});
}
