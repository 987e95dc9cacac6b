#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treegram/featurize.hpp"

namespace treegram {

struct TrainParams {
  enum class Criterion { gini, entropy };

  Criterion criterion = Criterion::gini;
  int max_depth = 3;  // 0 grows a single-leaf tree (baseline-equivalence mode)
  int min_leaf = 1;

  bool operator==(const TrainParams&) const = default;
};

const char* criterion_name(TrainParams::Criterion c);
TrainParams::Criterion criterion_from_name(const std::string& name);

// The search grid: criterion {gini, entropy} x max-depth {3..10, 15, 20}.
std::vector<TrainParams> default_grid();

// gini = 1 - sum p^2; entropy = -sum p log2 p (in bits). Throws on an empty
// count vector.
double impurity(const std::vector<long>& counts,
                TrainParams::Criterion criterion);

// Training view over a vectorized dataset. Rows/labels are parallel.
struct TrainData {
  const FeatureSpace* space = nullptr;
  const std::vector<FeatureVector>* rows = nullptr;
  const std::vector<int>* labels = nullptr;
  std::vector<std::string> label_order;
};

enum class SplitKind { presence, threshold };

struct SplitChoice {
  int feature = -1;
  SplitKind kind = SplitKind::presence;
  double threshold = 0.0;  // meaningful for threshold splits only
  double decrease = 0.0;   // weighted impurity decrease
};

// Evaluates the presence/absence partition of every binary feature and
// midpoint thresholds of every numeric feature observed at the node. Returns
// the split with maximum impurity decrease, none when the best decrease is
// <= 0 or every candidate violates min_leaf. Ties break to the lowest
// feature id, then the lowest threshold.
std::optional<SplitChoice> best_split(const TrainData& data,
                                      const std::vector<int>& row_ids,
                                      TrainParams::Criterion criterion,
                                      int min_leaf);

struct TreeNode {
  // Split fields; feature == -1 marks a leaf.
  int feature = -1;
  SplitKind kind = SplitKind::presence;
  double threshold = 0.0;
  int left = -1;   // fail / below-threshold branch
  int right = -1;  // pass / at-or-above branch

  int depth = 0;
  std::vector<long> counts;  // per-label training counts
  int majority = 0;          // majority label index, ties to the lowest index

  // Filled by ruleset::label_leaves.
  double p_value = 1.0;
  bool significant = false;

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::vector<std::string> label_order;
  TrainParams params;

  struct Prediction {
    int leaf = 0;
    int label = 0;
    std::vector<double> distribution;
  };

  int route(const FeatureVector& vec) const;  // leaf node id
  // Absent binary features take the fail side; absent numeric features
  // compare as 0.
  Prediction predict(const FeatureVector& vec) const;
  std::vector<int> leaves() const;
  int depth() const;
};

// Greedy impurity-minimizing induction; deterministic. Throws EmptyDataError
// on an empty training set.
DecisionTree grow(const TrainData& data, const TrainParams& params);

struct GridResult {
  DecisionTree tree;
  TrainParams params;
  double valid_accuracy = 0.0;
};

// Trains one tree per configuration and keeps the best validation accuracy;
// ties prefer the smaller max_depth, then gini over entropy.
GridResult grid_search(const TrainData& train,
                       const std::vector<FeatureVector>& valid_rows,
                       const std::vector<int>& valid_labels,
                       const std::vector<TrainParams>& grid);

}  // namespace treegram
