#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "treegram/dtree.hpp"
#include "treegram/eval.hpp"
#include "treegram/ruleset.hpp"

using namespace treegram;

namespace {

Dataset word_order_dataset(const std::vector<std::string>& labels) {
  Dataset ds;
  ds.task = TaskKind::word_order;
  ds.labels = {"after", "before"};
  for (const std::string& label : labels) {
    TaskInstance inst;
    inst.label = label;
    ds.instances.push_back(inst);
  }
  return ds;
}

// Three-leaf tree over two binary features with hand-set verdicts:
//   f0 present           -> leaf "before" (significant)
//   f0 absent, f1 present -> leaf "after"  (significant)
//   both absent          -> leaf cannot-decide
DecisionTree verdict_tree(bool left_significant = true) {
  DecisionTree tree;
  tree.label_order = {"after", "before"};
  TreeNode root;
  root.feature = 0;
  root.kind = SplitKind::presence;
  root.left = 1;
  root.right = 4;
  root.counts = {60, 60};

  TreeNode inner;
  inner.depth = 1;
  inner.feature = 1;
  inner.kind = SplitKind::presence;
  inner.left = 2;
  inner.right = 3;
  inner.counts = {60, 10};

  TreeNode undecided;
  undecided.depth = 2;
  undecided.counts = {5, 10};
  undecided.majority = 1;
  undecided.significant = false;
  undecided.p_value = 0.4;

  TreeNode after_leaf;
  after_leaf.depth = 2;
  after_leaf.counts = {55, 0};
  after_leaf.majority = 0;
  after_leaf.significant = left_significant;
  after_leaf.p_value = 1e-12;

  TreeNode before_leaf;
  before_leaf.depth = 1;
  before_leaf.counts = {0, 50};
  before_leaf.majority = 1;
  before_leaf.significant = true;
  before_leaf.p_value = 1e-12;

  tree.nodes = {root, inner, undecided, after_leaf, before_leaf};
  return tree;
}

FeatureVector with(std::initializer_list<int> features) {
  FeatureVector row;
  for (int f : features) row.push_back({f, 1.0});
  return row;
}

}  // namespace

TEST_CASE("frequency baseline picks the most frequent training label") {
  Dataset ds = word_order_dataset({"before", "before", "before", "before",
                                   "before", "before", "before", "after",
                                   "after", "after"});
  CHECK(frequency_baseline(ds) == "before");

  Dataset tie = word_order_dataset(
      {"before", "before", "after", "after"});
  CHECK(frequency_baseline(tie) == "after");  // lexicographic tie-break

  Dataset empty;
  empty.labels = {"after", "before"};
  CHECK_THROWS_AS(frequency_baseline(empty), EmptyDataError);
}

TEST_CASE("accuracy uses raw majority predictions, ignoring verdicts") {
  DecisionTree tree = verdict_tree();
  std::vector<FeatureVector> rows = {with({0}), with({1}), with({})};
  std::vector<int> labels = {1, 0, 1};  // before, after, before
  double acc = accuracy(tree, rows, labels);
  CHECK(acc == doctest::Approx(1.0));  // cannot-decide leaf still says before

  // Breaking all significance changes nothing for accuracy.
  DecisionTree muted = verdict_tree();
  for (TreeNode& node : muted.nodes) node.significant = false;
  CHECK(accuracy(muted, rows, labels) == doctest::Approx(acc));

  std::vector<FeatureVector> none;
  std::vector<int> no_labels;
  CHECK_THROWS_AS(accuracy(tree, none, no_labels), EmptyDataError);
}

TEST_CASE("unseen test labels never count as correct") {
  DecisionTree tree = verdict_tree();
  std::vector<FeatureVector> rows = {with({0})};
  std::vector<int> labels = {-1};
  CHECK(accuracy(tree, rows, labels) == 0.0);
}

TEST_CASE("depth-0 trees reproduce the frequency baseline exactly") {
  Rng rng(1001);
  for (int iter = 0; iter < 60; ++iter) {
    auto train = testutil::random_dataset(rng, 24, 4);
    auto test = testutil::random_dataset(rng, 24, 4);
    // Align label universes: reuse the train label order.
    for (int& l : test.labels) {
      l = l % static_cast<int>(train.label_order.size());
    }
    TrainData data = testutil::train_view(train);
    DecisionTree stump = grow(data, {TrainParams::Criterion::gini, 0, 1});

    Dataset train_ds;
    train_ds.task = TaskKind::word_order;
    train_ds.labels = train.label_order;
    for (int l : train.labels) {
      TaskInstance inst;
      inst.label = train.label_order[static_cast<std::size_t>(l)];
      train_ds.instances.push_back(inst);
    }
    Dataset test_ds;
    test_ds.labels = train.label_order;
    for (int l : test.labels) {
      TaskInstance inst;
      inst.label = train.label_order[static_cast<std::size_t>(l)];
      test_ds.instances.push_back(inst);
    }

    std::string baseline = frequency_baseline(train_ds);
    double base_acc = baseline_accuracy(baseline, test_ds);
    double tree_acc = accuracy(stump, test.rows, test.labels);
    CHECK(tree_acc == base_acc);
  }
}

TEST_CASE("prediction entropy counts significant verdicts only") {
  DecisionTree tree = verdict_tree();

  SUBCASE("an even before/after split is one bit") {
    std::vector<FeatureVector> rows;
    for (int i = 0; i < 50; ++i) rows.push_back(with({0}));
    for (int i = 0; i < 50; ++i) rows.push_back(with({1}));
    CHECK(prediction_entropy(tree, rows, TaskKind::word_order) ==
          doctest::Approx(1.0));
  }
  SUBCASE("a single predicted label has zero entropy") {
    std::vector<FeatureVector> rows(40, with({0}));
    CHECK(prediction_entropy(tree, rows, TaskKind::word_order) ==
          doctest::Approx(0.0));
  }
  SUBCASE("abstentions push entropy past one bit") {
    std::vector<FeatureVector> rows;
    for (int i = 0; i < 40; ++i) rows.push_back(with({0}));
    for (int i = 0; i < 40; ++i) rows.push_back(with({1}));
    for (int i = 0; i < 20; ++i) rows.push_back(with({}));
    double h = prediction_entropy(tree, rows, TaskKind::word_order);
    CHECK(std::fabs(h - 1.0575) < 1e-4);
    CHECK(std::fabs(h - 1.05754247590989) < 1e-9);
  }
  SUBCASE("entropy never exceeds the binary-plus-abstention bound") {
    Rng rng(555);
    for (int iter = 0; iter < 40; ++iter) {
      std::vector<FeatureVector> rows;
      int a = rng.range(0, 30);
      int b = rng.range(0, 30);
      int c = rng.range(1, 30);
      for (int i = 0; i < a; ++i) rows.push_back(with({0}));
      for (int i = 0; i < b; ++i) rows.push_back(with({1}));
      for (int i = 0; i < c; ++i) rows.push_back(with({}));
      double h = prediction_entropy(tree, rows, TaskKind::word_order);
      CHECK(h >= 0.0);
      CHECK(h <= 1.0615);
    }
  }
  SUBCASE("only word-order tasks have a prediction entropy") {
    std::vector<FeatureVector> rows = {with({0})};
    CHECK_THROWS_AS(prediction_entropy(tree, rows, TaskKind::agreement),
                    ConfigError);
  }
}

TEST_CASE("ARM compares threshold ground truth with leaf verdicts") {
  DecisionTree tree;
  tree.label_order = {"agree", "disagree"};
  TreeNode root;
  root.feature = 0;
  root.kind = SplitKind::presence;
  root.left = 1;
  root.right = 2;
  root.counts = {70, 30};
  TreeNode mixed;  // 50% agreement: not required under tau 0.9
  mixed.depth = 1;
  mixed.counts = {20, 20};
  mixed.majority = 0;
  mixed.significant = false;
  TreeNode all_agree;  // 100% agreement, significant agree verdict
  all_agree.depth = 1;
  all_agree.counts = {50, 0};
  all_agree.majority = 0;
  all_agree.significant = true;
  all_agree.p_value = 1e-11;
  tree.nodes = {root, mixed, all_agree};

  std::vector<FeatureVector> rows = {with({0}), with({})};
  // Leaf with 100% agreement: truth required, predicted required -> match.
  // Mixed leaf: truth not-required, predicted not-required -> match.
  CHECK(arm(tree, rows, 0.9, TaskKind::agreement) == doctest::Approx(1.0));

  // tau 0 marks everything required: the mixed leaf now mismatches.
  CHECK(arm(tree, rows, 0.0, TaskKind::agreement) == doctest::Approx(0.5));

  // tau just above 1 marks everything not-required: the agree leaf flips.
  CHECK(arm(tree, rows, 1.0000001, TaskKind::agreement) ==
        doctest::Approx(0.5));

  CHECK_THROWS_AS(arm(tree, rows, 0.9, TaskKind::word_order), ConfigError);
  std::vector<FeatureVector> none;
  CHECK_THROWS_AS(arm(tree, none, 0.9, TaskKind::agreement), EmptyDataError);
}

TEST_CASE("gain flips sign when model and baseline switch roles") {
  double model = 0.83;
  double base = 0.68;
  CHECK(model - base == doctest::Approx(-(base - model)));
}

TEST_CASE("cross_eval applies a trained model to sibling corpora") {
  Corpus train = generate_synthetic(PlantedRule{}, 300, 7);
  Corpus own_test = generate_synthetic(PlantedRule{}, 80, 8);
  Corpus sibling = generate_synthetic(PlantedRule{}, 80, 9);

  TaskQuery query = make_task_query(TaskKind::word_order, "adjective-noun", {});
  Dataset train_ds = extract_task(train, query);
  FeatureFlags flags{true, false, false};
  FeatureMatrix matrix = build_matrix(train_ds, train, flags);
  TrainData data{&matrix.space, &matrix.rows, &matrix.labels, train_ds.labels};
  DecisionTree tree = grow(data, {TrainParams::Criterion::gini, 3, 1});

  // A corpus with no adjectives at all: reported absent, not zero.
  Corpus none = parse_conllu(std::string(
      "1\tcasa\tcasa\tNOUN\t_\t_\t0\troot\t_\t_\n\n"));

  auto cells = cross_eval(tree, matrix.space, flags, query,
                          {&own_test, &sibling, &none}, {"own", "sib", "none"});
  REQUIRE(cells.size() == 3);
  CHECK(cells[0].accuracy.has_value());
  CHECK(*cells[0].accuracy == doctest::Approx(1.0));
  CHECK(*cells[1].accuracy == doctest::Approx(1.0));  // identical planting
  CHECK(!cells[2].accuracy.has_value());
  CHECK(cells[2].n_instances == 0);

  // Direct evaluation on the own test equals the cross-eval cell.
  Dataset own_ds = extract_task(own_test, query);
  auto own_rows = vectorize(own_ds, own_test, matrix.space, flags);
  auto own_labels = map_labels(own_ds, train_ds.labels);
  CHECK(*cells[0].accuracy ==
        doctest::Approx(accuracy(tree, own_rows, own_labels)));

  CHECK(cross_eval(tree, matrix.space, flags, query, {}, {}).empty());
}
