#include <cmath>
#include <map>

#include <doctest.h>

#include "oracles.hpp"
#include "vlmc/error.hpp"
#include "vlmc/inference.hpp"
#include "vlmc/math.hpp"
#include "vlmc/simulate.hpp"

using namespace vlmc;

TEST_CASE("log_q on the empty dataset is exactly zero") {
  Dataset empty = parse_dataset("", 2, 3);
  CountTrie trie = build_count_trie(empty);
  DirichletHyper hyper(2, 0.001);
  TreePrior prior(2, 3);
  for (const ContextTree& tree : enumerate_trees(prior)) {
    CHECK(log_q(tree, trie, hyper) == 0.0);
  }
}

TEST_CASE("log_q closed form for the alternating sequence") {
  // Counts per depth-1 context are (0,2) and (2,0); with alpha = 1 each
  // context contributes Gamma(2)Gamma(1)Gamma(3)/Gamma(1)^2/Gamma(4)
  // = 1/3, so log q = 2 ln(1/3).
  Dataset ds = parse_dataset("0 1 0 1 0 1\n", 2, 2);
  CountTrie trie = build_count_trie(ds);
  DirichletHyper hyper(2, 1.0);
  ContextTree tree = make_tree({Context{0}, Context{1}}, 2, 2);
  CHECK(log_q(tree, trie, hyper) ==
        doctest::Approx(-2.19722457733621938279).epsilon(1e-12));
}

TEST_CASE("log_q matches the rising-factorial oracle on random instances") {
  SplitMix64 rng(99);
  for (int rep = 0; rep < 60; ++rep) {
    int m = 2 + static_cast<int>(rng.next_below(3));
    int L = 1 + static_cast<int>(rng.next_below(3));
    // Counts stay small: at most ~20 transitions per sequence.
    Dataset ds = testing::random_dataset(rng, m, L, 2, 20);
    CountTrie trie = build_count_trie(ds);
    double alpha_choices[] = {0.001, 0.5, 1.0, 2.5};
    DirichletHyper hyper(m, alpha_choices[rng.next_below(4)]);
    TreePrior prior(m, L);
    ContextTree tree = testing::random_support_tree(prior, rng, 4);

    double got = log_q(tree, trie, hyper);
    double want = testing::oracle_log_q(tree, trie, hyper);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("log_q respects the reduced Dirichlet under an allowed matrix") {
  AllowedMatrix allowed(3, {{true, true, true},
                            {true, true, true},
                            {true, true, false}});
  // Data consistent with the matrix: 2 never follows 2.
  Dataset ds = parse_dataset("0 1 0 0 1 2 1 2 0 2 1 1\n", 3, 2);
  REQUIRE_FALSE(find_prohibited_pair(ds, allowed).has_value());
  CountTrie trie = build_count_trie(ds);
  DirichletHyper constrained(3, 0.5, allowed);
  TreePrior prior(3, 2);
  ContextTree tree = minimal_tree(prior);

  CHECK(log_q(tree, trie, constrained) ==
        doctest::Approx(testing::oracle_log_q(tree, trie, constrained))
            .epsilon(1e-9));

  // The term of a context that can never occur is exactly zero.
  ContextTree grown = apply_move(tree, {Move::Kind::Grow, Context{2}});
  // Context (2,2) reads "22" oldest-first; 2 -> 2 is prohibited, so its
  // counts vanish and it contributes nothing.
  CHECK(log_q_term(Context{2, 2}, trie, constrained) == 0.0);
  double by_parts = log_q(tree, trie, constrained) -
                    log_q_term(Context{2}, trie, constrained) +
                    log_q_term(Context{2, 0}, trie, constrained) +
                    log_q_term(Context{2, 1}, trie, constrained);
  CHECK(log_q(grown, trie, constrained) ==
        doctest::Approx(by_parts).epsilon(1e-12));
}

TEST_CASE("log_q is additive over contexts") {
  Dataset ds = parse_dataset("0 1 1 0 1 0 0 1 1 1\n", 2, 2);
  CountTrie trie = build_count_trie(ds);
  DirichletHyper hyper(2, 0.001);
  ContextTree tree =
      make_tree({Context{0}, Context{1, 0}, Context{1, 1}}, 2, 2);
  double total = 0.0;
  for (const Context& ctx : tree.contexts()) {
    total += log_q_term(ctx, trie, hyper);
  }
  CHECK(log_q(tree, trie, hyper) == doctest::Approx(total).epsilon(1e-14));
}

TEST_CASE("log_posterior_unnorm adds the prior weight") {
  Dataset ds = parse_dataset("0 1 0 1 1 0\n", 2, 2);
  CountTrie trie = build_count_trie(ds);
  DirichletHyper hyper(2, 0.001);

  TreePrior uniform(2, 2);
  ContextTree tree = minimal_tree(uniform);
  CHECK(log_posterior_unnorm(tree, trie, hyper, uniform) ==
        doctest::Approx(log_q(tree, trie, hyper)));

  TreePrior constrained(2, 2);
  constrained.require_renewing(0);
  ContextTree outside =
      make_tree({Context{0, 0}, Context{0, 1}, Context{1}}, 2, 2);
  CHECK_THROWS_AS(log_posterior_unnorm(outside, trie, hyper, constrained),
                  Error);

  // Shifting the log-weight by a constant shifts every value equally.
  TreePrior weighted(2, 2);
  weighted.set_log_weight([](const ContextTree&) { return 3.25; });
  CHECK(log_posterior_unnorm(tree, trie, hyper, weighted) ==
        doctest::Approx(log_q(tree, trie, hyper) + 3.25));
}

TEST_CASE("LogQTracker tracks grow and prune deltas") {
  Dataset ds = parse_dataset("0 1 1 0 1 0 0 1 1 1 0 0\n", 2, 3);
  CountTrie trie = build_count_trie(ds);
  DirichletHyper hyper(2, 0.001);
  TreePrior prior(2, 3);

  LogQTracker tracker(trie, hyper);
  ContextTree tree = minimal_tree(prior);
  tracker.reset(tree);
  CHECK(tracker.value() == doctest::Approx(log_q(tree, trie, hyper)));

  SplitMix64 rng(8);
  for (int step = 0; step < 30; ++step) {
    Proposal p = propose(tree, prior, rng);
    tracker.apply(p.move);
    tree = p.tree;
    CHECK(tracker.value() ==
          doctest::Approx(log_q(tree, trie, hyper)).epsilon(1e-10));
  }
}

TEST_CASE("kernel probabilities at boundary trees") {
  TreePrior prior(3, 2);
  SplitMix64 rng(4);

  // Minimal tree: only grows, three of them, no halving.
  ContextTree minimal = minimal_tree(prior);
  Proposal p = propose(minimal, prior, rng);
  CHECK(p.log_forward == doctest::Approx(-std::log(3.0)));
  CHECK(p.move.kind == Move::Kind::Grow);
  // From the grown tree both operators apply, so the reverse is halved.
  CHECK(p.log_backward == doctest::Approx(-std::log(2.0) - std::log(1.0)));

  // Maximal tree at depth 2 for m=2: only prunes.
  TreePrior prior2(2, 2);
  ContextTree maximal = make_tree(
      {Context{0, 0}, Context{0, 1}, Context{1, 0}, Context{1, 1}}, 2, 2);
  Proposal q = propose(maximal, prior2, rng);
  CHECK(q.move.kind == Move::Kind::Prune);
  CHECK(q.log_forward == doctest::Approx(-std::log(2.0)));
}

TEST_CASE("interior kernel frequencies match 1/6 and 1/4") {
  // Tree with three growable contexts and two complete sibling sets.
  TreePrior prior(2, 3);
  ContextTree tree = make_tree({Context{0, 0}, Context{0, 1}, Context{1, 0},
                                Context{1, 1, 0}, Context{1, 1, 1}},
                               2, 3);
  REQUIRE(grow_set(tree, prior).size() == 3);
  REQUIRE(prune_set(tree, prior).size() == 2);

  SplitMix64 rng(12345);
  std::map<ContextTree, int> hits;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    Proposal p = propose(tree, prior, rng);
    hits[p.tree] += 1;
    double expected = p.move.kind == Move::Kind::Grow ? 1.0 / 6.0 : 1.0 / 4.0;
    CHECK(p.log_forward == doctest::Approx(std::log(expected)));
  }
  CHECK(hits.size() == 5);
  for (const auto& [proposal, count] : hits) {
    double expected =
        proposal.size() > tree.size() ? n / 6.0 : n / 4.0;
    double sigma = std::sqrt(expected * (1.0 - expected / n));
    CHECK(std::abs(count - expected) < 3.0 * sigma);
  }
}

TEST_CASE("mh_run is deterministic and respects n_iter") {
  Dataset ds = parse_dataset("0 1 1 0 1 0 0 1 1 1 0 1 1 0\n", 2, 2);
  CountTrie trie = build_count_trie(ds);
  DirichletHyper hyper(2, 0.001);
  TreePrior prior(2, 2);

  ChainRecord a = mh_run(trie, prior, hyper, 5000, 42);
  ChainRecord b = mh_run(trie, prior, hyper, 5000, 42);
  CHECK(a.tree_ids == b.tree_ids);
  CHECK(a.log_q_values == b.log_q_values);
  CHECK(a.accepted == b.accepted);
  CHECK(a.acceptance_rate == b.acceptance_rate);
  CHECK(a.n_iter == 5000);
  CHECK(a.tree_ids.size() == 5000);

  ChainRecord c = mh_run(trie, prior, hyper, 5000, 43);
  CHECK(a.tree_ids != c.tree_ids);

  CHECK_THROWS_AS(mh_run(trie, prior, hyper, 0, 1), Error);
}

TEST_CASE("single-tree support yields a constant chain with zero acceptance") {
  Dataset ds = parse_dataset("0 1 0 1\n", 2, 1);
  CountTrie trie = build_count_trie(ds);
  DirichletHyper hyper(2, 0.001);
  TreePrior prior(2, 1);  // depth 1: the only tree is {0, 1}

  ChainRecord record = mh_run(trie, prior, hyper, 100, 7);
  CHECK(record.acceptance_rate == 0.0);
  CHECK(record.trees.size() == 1);
  for (std::int32_t id : record.tree_ids) CHECK(id == 0);
}

TEST_CASE("chain log_q values stay in sync with direct evaluation") {
  Dataset ds = parse_dataset("0 1 1 0 1 0 0 1 1 1 0 1\n", 2, 3);
  CountTrie trie = build_count_trie(ds);
  DirichletHyper hyper(2, 0.5);
  TreePrior prior(2, 3);
  ChainRecord record = mh_run(trie, prior, hyper, 2000, 11);
  for (std::int64_t t = 0; t < record.n_iter; t += 251) {
    CHECK(record.log_q_values[static_cast<std::size_t>(t)] ==
          doctest::Approx(log_q(record.tree_at(t), trie, hyper))
              .epsilon(1e-10));
  }
}

TEST_CASE("exact_posterior is uniform on the empty dataset") {
  Dataset empty = parse_dataset("", 2, 2);
  CountTrie trie = build_count_trie(empty);
  DirichletHyper hyper(2, 0.001);
  TreePrior prior(2, 2);
  auto posterior = exact_posterior(trie, prior, hyper);
  REQUIRE(posterior.size() == 4);
  for (const auto& [tree, p] : posterior) {
    CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("exact_posterior sums to one and ignores constant rescaling of h") {
  SplitMix64 rng(17);
  Dataset ds = testing::random_dataset(rng, 2, 3, 2, 50);
  CountTrie trie = build_count_trie(ds);
  DirichletHyper hyper(2, 0.001);

  TreePrior plain(2, 3);
  auto base = exact_posterior(trie, plain, hyper);
  double total = 0.0;
  for (const auto& [tree, p] : base) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  TreePrior scaled(2, 3);
  scaled.set_log_weight([](const ContextTree&) { return 12.0; });
  auto shifted = exact_posterior(trie, scaled, hyper);
  for (const auto& [tree, p] : base) {
    CHECK(shifted.at(tree) == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("exact_posterior concentrates on the generating depth-1 tree") {
  ProbabilisticContextTree::ProbMap p;
  p.emplace(Context{0}, std::vector<double>{0.9, 0.1});
  p.emplace(Context{1}, std::vector<double>{0.2, 0.8});
  ProbabilisticContextTree pct(make_tree({Context{0}, Context{1}}, 2, 1), p);
  Dataset ds = simulate(pct, 1, 5000, 2026);

  Dataset at_depth3(Alphabet(2), ds.sequences(), 3);
  CountTrie trie = build_count_trie(at_depth3);
  DirichletHyper hyper(2, 0.001);
  TreePrior prior(2, 3);
  auto posterior = exact_posterior(trie, prior, hyper);

  ContextTree mode = make_tree({Context{0}, Context{1}}, 2, 3);
  double best = 0.0;
  for (const auto& [tree, prob] : posterior) best = std::max(best, prob);
  CHECK(posterior.at(mode) == doctest::Approx(best));
  CHECK(posterior.at(mode) > 0.5);
}

TEST_CASE("exact Bayes factor is zero on empty data") {
  Dataset empty = parse_dataset("", 2, 2);
  CountTrie trie = build_count_trie(empty);
  DirichletHyper hyper(2, 0.001);
  CHECK(exact_log10_bayes_factor(trie, 0, hyper, 2) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("exact Bayes factor against a by-hand four-tree evaluation") {
  Dataset ds = parse_dataset("0 1 1 0 1 1 1 0 0 1\n", 2, 2);
  CountTrie trie = build_count_trie(ds);
  DirichletHyper hyper(2, 0.001);

  // The four trees of depth <= 2, classified by hand: the depth-1 tree and
  // the one grown below "1" keep 0 out of inner nodes.
  ContextTree t1 = make_tree({Context{0}, Context{1}}, 2, 2);
  ContextTree t2 = make_tree({Context{0}, Context{1, 0}, Context{1, 1}}, 2, 2);
  ContextTree t3 = make_tree({Context{0, 0}, Context{0, 1}, Context{1}}, 2, 2);
  ContextTree t4 = make_tree(
      {Context{0, 0}, Context{0, 1}, Context{1, 0}, Context{1, 1}}, 2, 2);

  auto lse2 = [](double a, double b) {
    double hi = std::max(a, b);
    return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
  };
  double num = lse2(testing::oracle_log_q(t1, trie, hyper),
                    testing::oracle_log_q(t2, trie, hyper));
  double den = lse2(testing::oracle_log_q(t3, trie, hyper),
                    testing::oracle_log_q(t4, trie, hyper));
  double expected = (std::log(2.0) - std::log(2.0) + num - den) / kLn10;

  CHECK(exact_log10_bayes_factor(trie, 0, hyper, 2) ==
        doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("evidence_sum reports support sizes") {
  Dataset empty = parse_dataset("", 2, 3);
  CountTrie trie = build_count_trie(empty);
  DirichletHyper hyper(2, 0.001);

  TreePrior renewing(2, 3);
  renewing.require_renewing(1);
  TreePrior not_renewing(2, 3);
  not_renewing.require_not_renewing(1);
  EvidenceSum a = evidence_sum(trie, renewing, hyper);
  EvidenceSum b = evidence_sum(trie, not_renewing, hyper);
  CHECK(a.support_size + b.support_size == 25);
  CHECK(std::exp(a.log_zeta) == doctest::Approx(a.support_size));
}

TEST_CASE("sampler frequencies approach the exact posterior") {
  // Small space: m=2, L=2 over a short alternating-ish sequence.
  Dataset ds = parse_dataset("0 1 0 0 1 0 1 1 0 1 0 0 1 0 1 0 1 1 1 0\n", 2, 2);
  CountTrie trie = build_count_trie(ds);
  DirichletHyper hyper(2, 0.001);
  TreePrior prior(2, 2);

  auto exact = exact_posterior(trie, prior, hyper);
  ChainRecord chain = mh_run(trie, prior, hyper, 50000, 321);
  std::vector<double> freq = chain.frequencies();

  double tv = 0.0;
  for (const auto& [tree, p] : exact) {
    double emp = 0.0;
    for (std::size_t id = 0; id < chain.trees.size(); ++id) {
      if (chain.trees[id] == tree) {
        emp = freq[id];
        break;
      }
    }
    tv += std::abs(emp - p);
  }
  CHECK(tv / 2.0 < 0.05);
}
