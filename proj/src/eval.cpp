#include "treegram/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "treegram/errors.hpp"

namespace treegram {

std::string frequency_baseline(const Dataset& train) {
  if (train.instances.empty()) {
    throw EmptyDataError("frequency baseline of an empty training set");
  }
  std::vector<long> counts(train.labels.size(), 0);
  for (const TaskInstance& inst : train.instances) {
    int idx = train.label_index(inst.label);
    if (idx >= 0) ++counts[static_cast<std::size_t>(idx)];
  }
  // First maximum wins; the label list is sorted, so ties resolve to the
  // lexicographically smallest label.
  std::size_t best = 0;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] > counts[best]) best = i;
  }
  return train.labels[best];
}

double accuracy(const DecisionTree& tree,
                const std::vector<FeatureVector>& rows,
                const std::vector<int>& labels) {
  if (rows.empty()) {
    throw EmptyDataError("accuracy over an empty test set");
  }
  long correct = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (tree.predict(rows[i]).label == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

double baseline_accuracy(const std::string& baseline_label,
                         const Dataset& test) {
  if (test.instances.empty()) {
    throw EmptyDataError("baseline accuracy over an empty test set");
  }
  long correct = 0;
  for (const TaskInstance& inst : test.instances) {
    if (inst.label == baseline_label) ++correct;
  }
  return static_cast<double>(correct) /
         static_cast<double>(test.instances.size());
}

double prediction_entropy(const DecisionTree& tree,
                          const std::vector<FeatureVector>& rows,
                          TaskKind task) {
  if (task != TaskKind::word_order) {
    throw ConfigError("prediction entropy is defined for word-order tasks");
  }
  if (rows.empty()) {
    throw EmptyDataError("prediction entropy over an empty test set");
  }
  // Significance-labeled predictions; cannot-decide ones count only in the
  // denominator.
  std::vector<long> counts(tree.label_order.size(), 0);
  for (const FeatureVector& row : rows) {
    const TreeNode& leaf = tree.nodes[static_cast<std::size_t>(tree.route(row))];
    if (leaf.significant) ++counts[static_cast<std::size_t>(leaf.majority)];
  }
  double h = 0.0;
  for (long c : counts) {
    if (c <= 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(rows.size());
    h -= p * std::log2(p);
  }
  return h;
}

double arm(const DecisionTree& tree, const std::vector<FeatureVector>& rows,
           double tau, TaskKind task) {
  if (task != TaskKind::agreement) {
    throw ConfigError("ARM is defined for agreement tasks");
  }
  if (rows.empty()) {
    throw EmptyDataError("ARM over an empty test set");
  }
  auto it = std::find(tree.label_order.begin(), tree.label_order.end(),
                      "agree");
  if (it == tree.label_order.end()) {
    throw ConfigError("agreement tree lacks an 'agree' label");
  }
  int agree = static_cast<int>(it - tree.label_order.begin());

  long matched = 0;
  for (const FeatureVector& row : rows) {
    const TreeNode& leaf = tree.nodes[static_cast<std::size_t>(tree.route(row))];
    long total = std::accumulate(leaf.counts.begin(), leaf.counts.end(), 0L);
    double agree_fraction =
        total > 0 ? static_cast<double>(
                        leaf.counts[static_cast<std::size_t>(agree)]) /
                        static_cast<double>(total)
                  : 0.0;
    bool truth_required = agree_fraction >= tau;
    bool predicted_required = leaf.significant && leaf.majority == agree;
    if (truth_required == predicted_required) ++matched;
  }
  return static_cast<double>(matched) / static_cast<double>(rows.size());
}

std::vector<CrossEvalCell> cross_eval(
    const DecisionTree& tree, const FeatureSpace& space,
    const FeatureFlags& flags, const TaskQuery& query,
    const std::vector<const Corpus*>& test_corpora,
    const std::vector<std::string>& treebank_ids,
    const SparseLexicon* lexicon, int max_children) {
  std::vector<CrossEvalCell> cells;
  for (std::size_t i = 0; i < test_corpora.size(); ++i) {
    CrossEvalCell cell;
    cell.treebank_id = i < treebank_ids.size() ? treebank_ids[i]
                                               : std::to_string(i);
    Dataset dataset = extract_task(*test_corpora[i], query);
    cell.n_instances = dataset.instances.size();
    if (!dataset.instances.empty()) {
      std::vector<FeatureVector> rows = vectorize(
          dataset, *test_corpora[i], space, flags, lexicon, max_children);
      std::vector<int> labels = map_labels(dataset, tree.label_order);
      cell.accuracy = accuracy(tree, rows, labels);
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

}  // namespace treegram
