#include <doctest.h>

#include <cmath>
#include <set>

#include "test_util.hpp"
#include "treegram/dtree.hpp"
#include "treegram/ruleset.hpp"

using namespace treegram;

namespace {

NullDistribution uniform2() { return {{0.5, 0.5}}; }

// Hand-built one-split tree with the given leaf counts.
DecisionTree two_leaf_tree(const std::vector<long>& left,
                           const std::vector<long>& right,
                           std::vector<std::string> labels, int feature = 0) {
  DecisionTree tree;
  tree.label_order = std::move(labels);
  TreeNode root;
  root.feature = feature;
  root.kind = SplitKind::presence;
  root.left = 1;
  root.right = 2;
  root.counts.resize(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    root.counts[i] = left[i] + right[i];
  }
  TreeNode l;
  l.depth = 1;
  l.counts = left;
  for (std::size_t i = 1; i < left.size(); ++i) {
    if (left[i] > left[static_cast<std::size_t>(l.majority)]) {
      l.majority = static_cast<int>(i);
    }
  }
  TreeNode r = l;
  r.counts = right;
  r.majority = 0;
  for (std::size_t i = 1; i < right.size(); ++i) {
    if (right[i] > right[static_cast<std::size_t>(r.majority)]) {
      r.majority = static_cast<int>(i);
    }
  }
  tree.nodes = {root, l, r};
  return tree;
}

}  // namespace

TEST_CASE("chi-squared p-values match the pinned table values") {
  // statistic 0: p is exactly 1.
  CHECK(chi2_pvalue({30, 30}, uniform2()) == 1.0);
  CHECK(regularized_gamma_q(0.5, 0.0) == 1.0);

  // 95th percentile checkpoints for df 1 and 3.
  CHECK(regularized_gamma_q(0.5, 3.841 / 2.0) ==
        doctest::Approx(0.0500).epsilon(0.02));
  CHECK(std::fabs(regularized_gamma_q(0.5, 3.841 / 2.0) - 0.0500) < 1e-3);
  CHECK(std::fabs(regularized_gamma_q(1.5, 7.815 / 2.0) - 0.0500) < 1e-3);

  // Extreme leaf: statistic 60 at df 1.
  CHECK(chi2_pvalue({60, 0}, uniform2()) < 1e-13);
}

TEST_CASE("chi-squared agrees with the closed-form survival reference") {
  for (int df = 1; df <= 8; ++df) {
    for (double stat : {0.01, 0.1, 0.5, 1.0, 2.5, 3.841, 7.815, 12.0, 25.0,
                        60.0, 140.0}) {
      double mine =
          regularized_gamma_q(static_cast<double>(df) / 2.0, stat / 2.0);
      double reference = testutil::reference_chi2_sf(stat, df);
      CHECK(std::fabs(mine - reference) < 1e-10);
    }
  }
}

TEST_CASE("p-values are monotone non-increasing in the statistic") {
  Rng rng(424242);
  for (int df = 1; df <= 5; ++df) {
    std::set<double> stats;
    for (int i = 0; i < 200; ++i) {
      stats.insert(static_cast<double>(rng.below(1000000)) / 5000.0);
    }
    double prev = 2.0;
    double prev_stat = -1.0;
    for (double stat : stats) {
      double p = regularized_gamma_q(static_cast<double>(df) / 2.0, stat / 2.0);
      INFO("df=", df, " stat=", stat, " prev_stat=", prev_stat);
      CHECK(p <= prev);
      prev = p;
      prev_stat = stat;
    }
  }
}

TEST_CASE("degenerate chi-squared inputs give p = 1") {
  CHECK(chi2_pvalue({0, 0}, uniform2()) == 1.0);
  // Single positive-expectation label: zero degrees of freedom.
  CHECK(chi2_pvalue({5, 0}, {{1.0, 0.0}}) == 1.0);
}

TEST_CASE("null distribution is uniform for word order and case") {
  Corpus corpus = generate_synthetic(PlantedRule{}, 50, 3);
  Dataset wo = extract_word_order(corpus,
                                  find_relation({}, "adjective-noun"));
  NullDistribution null = null_distribution(wo, corpus);
  REQUIRE(null.expected.size() == 2);
  CHECK(null.expected[0] == 0.5);
  CHECK(null.expected[1] == 0.5);

  // Case with four observed values.
  Corpus cases = parse_conllu(std::string(
      "1\ta\ta\tNOUN\t_\tCase=Nom\t0\troot\t_\t_\n\n"
      "1\tb\tb\tNOUN\t_\tCase=Acc\t0\troot\t_\t_\n\n"
      "1\tc\tc\tNOUN\t_\tCase=Dat\t0\troot\t_\t_\n\n"
      "1\td\td\tNOUN\t_\tCase=Loc\t0\troot\t_\t_\n\n"));
  Dataset cm = extract_case(cases, "NOUN");
  NullDistribution cnull = null_distribution(cm, cases);
  REQUIRE(cnull.expected.size() == 4);
  for (double e : cnull.expected) CHECK(e == 0.25);

  Dataset empty;
  CHECK_THROWS_AS(null_distribution(empty, corpus), EmptyDataError);
}

TEST_CASE("agreement null pools the attribute marginal over both members") {
  Corpus corpus = parse_conllu(std::string(
      "1\tlibros\tlibro\tNOUN\t_\tNumber=Plur\t2\tsubj\t_\t_\n"
      "2\tgustan\tgustar\tVERB\t_\tNumber=Plur\t0\troot\t_\t_\n\n"
      "1\tcasa\tcasa\tNOUN\t_\tNumber=Sing\t2\tsubj\t_\t_\n"
      "2\tgustan\tgustar\tVERB\t_\tNumber=Plur\t0\troot\t_\t_\n\n"));
  Dataset ds = extract_agreement(corpus, "Number");
  REQUIRE(ds.instances.size() == 2);
  NullDistribution null = null_distribution(ds, corpus);
  // Pooled values: Plur x3, Sing x1 -> chance = 0.75^2 + 0.25^2 = 0.625.
  REQUIRE(ds.labels[0] == "agree");
  CHECK(null.expected[0] == doctest::Approx(0.625));
  CHECK(null.expected[1] == doctest::Approx(0.375));
}

TEST_CASE("agreement null is degenerate when one value exists") {
  Corpus corpus = parse_conllu(std::string(
      "1\tlibros\tlibro\tNOUN\t_\tNumber=Plur\t2\tsubj\t_\t_\n"
      "2\tgustan\tgustar\tVERB\t_\tNumber=Plur\t0\troot\t_\t_\n\n"));
  Dataset ds = extract_agreement(corpus, "Number");
  NullDistribution null = null_distribution(ds, corpus);
  CHECK(null.expected[0] == 1.0);
  CHECK(null.expected[1] == 0.0);
}

TEST_CASE("label_leaves applies the chi-squared threshold") {
  SUBCASE("a 3/2 leaf under the uniform null cannot decide") {
    DecisionTree tree = two_leaf_tree({3, 2}, {60, 0}, {"after", "before"});
    label_leaves(tree, uniform2(), 0.01);
    CHECK(!tree.nodes[1].significant);
    CHECK(std::fabs(tree.nodes[1].p_value - 0.6547) < 1e-3);
    CHECK(tree.nodes[2].significant);
    CHECK(tree.nodes[2].p_value < 1e-10);
  }
  SUBCASE("empty leaves cannot decide") {
    DecisionTree tree = two_leaf_tree({0, 0}, {10, 0}, {"after", "before"});
    label_leaves(tree, uniform2(), 0.01);
    CHECK(!tree.nodes[1].significant);
    CHECK(tree.nodes[1].p_value == 1.0);
  }
  SUBCASE("alpha 0 silences every leaf, alpha 1 silences none with signal") {
    DecisionTree tree = two_leaf_tree({9, 1}, {1, 9}, {"after", "before"});
    label_leaves(tree, uniform2(), 0.0);
    CHECK(!tree.nodes[1].significant);
    CHECK(!tree.nodes[2].significant);
    label_leaves(tree, uniform2(), 1.0);
    CHECK(tree.nodes[1].significant);  // statistic > 0 means p < 1
    CHECK(tree.nodes[2].significant);
  }
}

TEST_CASE("extract_rules renders one rule per leaf") {
  FeatureSpace space;
  int f = space.intern("dep-numtype-is-ord", "", FeatureKind::binary);
  DecisionTree tree = two_leaf_tree({50, 0}, {0, 50}, {"after", "before"}, f);
  label_leaves(tree, uniform2(), 0.01);
  std::vector<Rule> rules = extract_rules(tree, space);
  REQUIRE(rules.size() == 2);

  CHECK(rules[0].label == "after");
  REQUIRE(rules[0].conditions.size() == 1);
  CHECK(rules[0].conditions[0].render() == "NOT dep-numtype-is-ord");
  CHECK(rules[0].support == std::vector<long>{50, 0});

  CHECK(rules[1].label == "before");
  CHECK(rules[1].conditions[0].render() == "dep-numtype-is-ord");
  CHECK(rules[1].significant);
}

TEST_CASE("a single-leaf tree yields one rule with no conditions") {
  DecisionTree tree;
  tree.label_order = {"after", "before"};
  TreeNode leaf;
  leaf.counts = {4, 3};
  tree.nodes = {leaf};
  label_leaves(tree, uniform2(), 0.01);
  FeatureSpace space;
  auto rules = extract_rules(tree, space);
  REQUIRE(rules.size() == 1);
  CHECK(rules[0].conditions.empty());
  CHECK(rules[0].label == kCannotDecide);
}

TEST_CASE("numeric conditions render with their threshold") {
  FeatureSpace space;
  int f = space.intern("dep-dim3", "dep-word-is-like={ochenta,sesenta}",
                       FeatureKind::numeric);
  DecisionTree tree = two_leaf_tree({20, 0}, {0, 20}, {"after", "before"}, f);
  tree.nodes[0].kind = SplitKind::threshold;
  tree.nodes[0].threshold = 0.45;
  label_leaves(tree, uniform2(), 0.01);
  auto rules = extract_rules(tree, space);
  CHECK(rules[0].conditions[0].render() ==
        "dep-word-is-like={ochenta,sesenta} < 0.45");
  CHECK(rules[1].conditions[0].render() ==
        "dep-word-is-like={ochenta,sesenta} >= 0.45");
}

TEST_CASE("select_examples groups by lemma and keeps the shortest") {
  // Two sentences share the lemma pair (grande, casa); the shorter one must
  // represent the group. A third sentence brings a second group.
  Corpus corpus = parse_conllu(std::string(
      "1\tcasa\tcasa\tNOUN\t_\t_\t0\troot\t_\t_\n"
      "2\tgrande\tgrande\tADJ\t_\t_\t1\tmod\t_\t_\n"
      "3\thoy\thoy\tADV\t_\t_\t1\tmod\t_\t_\n"
      "4\tsolo\tsolo\tADV\t_\t_\t1\tmod\t_\t_\n"
      "5\tbien\tbien\tADV\t_\t_\t1\tmod\t_\t_\n\n"
      "1\tcasas\tcasa\tNOUN\t_\t_\t0\troot\t_\t_\n"
      "2\tgrandes\tgrande\tADJ\t_\t_\t1\tmod\t_\t_\n\n"
      "1\tflor\tflor\tNOUN\t_\t_\t0\troot\t_\t_\n"
      "2\troja\trojo\tADJ\t_\t_\t1\tmod\t_\t_\n\n"));
  Dataset ds = extract_word_order(corpus,
                                  find_relation({}, "adjective-noun"));
  REQUIRE(ds.instances.size() == 3);

  Rule rule;
  rule.label = "after";
  rule.significant = true;
  rule.support = {3, 0};
  select_examples(rule, {0, 1, 2}, ds, corpus, 7);

  REQUIRE(rule.positives.size() == 2);  // two lemma groups, both returned
  std::set<std::size_t> sentences;
  for (const ExampleRef& ref : rule.positives) sentences.insert(ref.sentence);
  CHECK(sentences.count(1));  // the 2-token (grande, casa) sentence
  CHECK(sentences.count(2));
  CHECK(!sentences.count(0));  // the 5-token duplicate lost to its group
  CHECK(rule.negatives.empty());

  Rule again;
  again.label = "after";
  again.significant = true;
  again.support = {3, 0};
  select_examples(again, {0, 1, 2}, ds, corpus, 7);
  CHECK(again.positives == rule.positives);
}

TEST_CASE("select_examples caps the number of groups at ten") {
  Corpus corpus = generate_synthetic(PlantedRule{}, 400, 31);
  Dataset ds = extract_word_order(corpus,
                                  find_relation({}, "adjective-noun"));
  std::vector<int> rows;
  for (std::size_t i = 0; i < ds.instances.size(); ++i) {
    if (ds.instances[i].label == "before") rows.push_back(static_cast<int>(i));
  }
  Rule rule;
  rule.label = "before";
  rule.significant = true;
  rule.support = {0, static_cast<long>(rows.size())};
  select_examples(rule, rows, ds, corpus, 123);
  CHECK(rule.positives.size() == 10);

  // No two positives share a lemmatized focus tuple.
  std::set<std::string> keys;
  for (const ExampleRef& ref : rule.positives) {
    const Sentence& s = corpus.sentences[ref.sentence];
    keys.insert(s.tok(ref.focus_a).lemma + "|" + s.tok(ref.focus_b).lemma);
  }
  CHECK(keys.size() == rule.positives.size());
}

TEST_CASE("attach_examples routes training rows to their rules") {
  Corpus corpus = generate_synthetic(PlantedRule{}, 200, 7);
  Dataset ds = extract_word_order(corpus,
                                  find_relation({}, "adjective-noun"));
  FeatureMatrix matrix =
      build_matrix(ds, corpus, FeatureFlags{true, false, false});
  TrainData data{&matrix.space, &matrix.rows, &matrix.labels, ds.labels};
  DecisionTree tree = grow(data, {TrainParams::Criterion::gini, 3, 1});
  label_leaves(tree, uniform2(), 0.01);
  auto rules = extract_rules(tree, matrix.space);
  attach_examples(rules, tree, matrix.rows, ds, corpus, 7);

  for (const Rule& rule : rules) {
    CHECK(!rule.positives.empty());
    CHECK(rule.positives.size() <= 10);
    for (const ExampleRef& ref : rule.positives) {
      // Re-vectorize the example and confirm it routes to this very leaf
      // and carries the rule's label.
      TaskInstance inst;
      inst.sentence = ref.sentence;
      inst.focus_a = ref.focus_a;
      inst.focus_b = ref.focus_b;
      Dataset probe;
      probe.task = ds.task;
      probe.labels = ds.labels;
      probe.instances = {inst};
      auto rows = vectorize(probe, corpus, matrix.space,
                            FeatureFlags{true, false, false});
      CHECK(tree.route(rows[0]) == rule.leaf);
    }
  }
}
