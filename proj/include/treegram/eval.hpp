#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treegram/dtree.hpp"
#include "treegram/featurize.hpp"
#include "treegram/taskgen.hpp"

namespace treegram {

struct EvalReport {
  TaskKind task = TaskKind::word_order;
  std::string task_key;
  double model_accuracy = 0.0;
  double baseline_accuracy = 0.0;
  double gain = 0.0;  // model - baseline
  std::string baseline_label;
  std::optional<double> entropy;  // word order only
  std::optional<double> arm;      // agreement only
  std::size_t n_test = 0;
  TrainParams chosen;
  double valid_accuracy = 0.0;
};

// Most frequent training label; ties go to the lexicographically smallest.
std::string frequency_baseline(const Dataset& train);

// Fraction of rows whose majority-leaf prediction equals the label.
// Significance verdicts are not consulted. Labels of -1 (unseen in training)
// never match.
double accuracy(const DecisionTree& tree,
                const std::vector<FeatureVector>& rows,
                const std::vector<int>& labels);

double baseline_accuracy(const std::string& baseline_label,
                         const Dataset& test);

// Entropy (bits) of the significance-labeled prediction distribution over
// the real labels; cannot-decide predictions count in the denominator only.
// Word-order trees only.
double prediction_entropy(const DecisionTree& tree,
                          const std::vector<FeatureVector>& rows,
                          TaskKind task);

// Automated rule metric for agreement: ground truth calls a leaf
// required-agreement iff its training agree-fraction >= tau; the prediction
// is required iff the leaf's verdict is agree. Returns the match fraction.
double arm(const DecisionTree& tree, const std::vector<FeatureVector>& rows,
           double tau, TaskKind task);

struct CrossEvalCell {
  std::string treebank_id;
  std::optional<double> accuracy;  // absent when the treebank has no instances
  std::size_t n_instances = 0;
};

// Applies a trained tree + feature space directly to other treebanks' test
// corpora; each corpus is vectorized against the training space.
std::vector<CrossEvalCell> cross_eval(
    const DecisionTree& tree, const FeatureSpace& space,
    const FeatureFlags& flags, const TaskQuery& query,
    const std::vector<const Corpus*>& test_corpora,
    const std::vector<std::string>& treebank_ids,
    const SparseLexicon* lexicon = nullptr, int max_children = 3);

}  // namespace treegram
