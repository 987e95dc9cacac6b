#include "treegram/dtree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "treegram/errors.hpp"
#include "treegram/eval.hpp"

namespace treegram {

const char* criterion_name(TrainParams::Criterion c) {
  return c == TrainParams::Criterion::gini ? "gini" : "entropy";
}

TrainParams::Criterion criterion_from_name(const std::string& name) {
  if (name == "gini") return TrainParams::Criterion::gini;
  if (name == "entropy") return TrainParams::Criterion::entropy;
  throw ConfigError("unknown criterion '" + name + "'");
}

std::vector<TrainParams> default_grid() {
  std::vector<TrainParams> grid;
  for (int depth : {3, 4, 5, 6, 7, 8, 9, 10, 15, 20}) {
    for (auto criterion :
         {TrainParams::Criterion::gini, TrainParams::Criterion::entropy}) {
      grid.push_back({criterion, depth, 1});
    }
  }
  return grid;
}

double impurity(const std::vector<long>& counts,
                TrainParams::Criterion criterion) {
  long total = std::accumulate(counts.begin(), counts.end(), 0L);
  if (total <= 0) {
    throw std::invalid_argument("impurity of an empty node");
  }
  double result = 0.0;
  if (criterion == TrainParams::Criterion::gini) {
    for (long c : counts) {
      double p = static_cast<double>(c) / static_cast<double>(total);
      result += p * p;
    }
    return 1.0 - result;
  }
  for (long c : counts) {
    if (c <= 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(total);
    result -= p * std::log2(p);
  }
  return result;
}

namespace {

long total_of(const std::vector<long>& counts) {
  return std::accumulate(counts.begin(), counts.end(), 0L);
}

bool pure(const std::vector<long>& counts) {
  int nonzero = 0;
  for (long c : counts) {
    if (c > 0) ++nonzero;
  }
  return nonzero <= 1;
}

int argmax_lowest(const std::vector<long>& counts) {
  int best = 0;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] > counts[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

// Distinct observed values of one numeric column at a node, ascending, with
// per-label counts. Rows lacking the feature observe value 0.
struct ValueGroup {
  double value = 0.0;
  std::vector<long> counts;
};

std::vector<ValueGroup> value_groups(
    std::vector<std::pair<double, int>>& postings,
    const std::vector<long>& parent, long n_rows, std::size_t n_labels) {
  std::sort(postings.begin(), postings.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<ValueGroup> groups;
  std::vector<long> seen(n_labels, 0);
  for (const auto& [value, label] : postings) {
    if (groups.empty() || groups.back().value != value) {
      groups.push_back({value, std::vector<long>(n_labels, 0)});
    }
    ++groups.back().counts[static_cast<std::size_t>(label)];
    ++seen[static_cast<std::size_t>(label)];
  }
  long zeros = n_rows - static_cast<long>(postings.size());
  if (zeros > 0) {
    ValueGroup zero_group{0.0, std::vector<long>(n_labels, 0)};
    for (std::size_t i = 0; i < n_labels; ++i) {
      zero_group.counts[i] = parent[i] - seen[i];
    }
    if (!groups.empty() && groups.front().value == 0.0) {
      for (std::size_t i = 0; i < n_labels; ++i) {
        groups.front().counts[i] += zero_group.counts[i];
      }
    } else {
      groups.insert(groups.begin(), std::move(zero_group));
    }
  }
  return groups;
}

}  // namespace

std::optional<SplitChoice> best_split(const TrainData& data,
                                      const std::vector<int>& row_ids,
                                      TrainParams::Criterion criterion,
                                      int min_leaf) {
  if (row_ids.empty()) {
    throw EmptyDataError("best_split over zero rows");
  }
  const auto& rows = *data.rows;
  const auto& labels = *data.labels;
  const std::size_t n_labels = data.label_order.size();
  const long n = static_cast<long>(row_ids.size());

  std::vector<long> parent(n_labels, 0);
  for (int r : row_ids) {
    ++parent[static_cast<std::size_t>(labels[static_cast<std::size_t>(r)])];
  }
  const double parent_imp = impurity(parent, criterion);

  // Column view of the rows at this node: feature -> (value, label).
  std::map<int, std::vector<std::pair<double, int>>> columns;
  for (int r : row_ids) {
    int label = labels[static_cast<std::size_t>(r)];
    for (const FeatureValue& fv : rows[static_cast<std::size_t>(r)]) {
      columns[fv.feature].emplace_back(fv.value, label);
    }
  }

  std::optional<SplitChoice> best;
  auto consider = [&](int feature, SplitKind kind, double threshold,
                      const std::vector<long>& left,
                      const std::vector<long>& right) {
    long nl = total_of(left);
    long nr = total_of(right);
    if (nl < min_leaf || nr < min_leaf) return;
    // Symmetric form: swapping the two sides yields the bit-identical
    // decrease, so complementary candidates tie exactly.
    double weighted =
        (static_cast<double>(nl) / static_cast<double>(n)) *
            impurity(left, criterion) +
        (static_cast<double>(nr) / static_cast<double>(n)) *
            impurity(right, criterion);
    double decrease = parent_imp - weighted;
    // Strictly-greater keeps the first maximizer: features ascend, then
    // thresholds ascend, which is exactly the documented tie-break.
    if (!best || decrease > best->decrease) {
      best = SplitChoice{feature, kind, threshold, decrease};
    }
  };

  for (auto& [feature, postings] : columns) {
    if (data.space->kind_of(feature) == FeatureKind::binary) {
      std::vector<long> right(n_labels, 0);
      for (const auto& [value, label] : postings) {
        if (value != 0.0) ++right[static_cast<std::size_t>(label)];
      }
      std::vector<long> left(n_labels, 0);
      for (std::size_t i = 0; i < n_labels; ++i) {
        left[i] = parent[i] - right[i];
      }
      consider(feature, SplitKind::presence, 0.0, left, right);
    } else {
      std::vector<ValueGroup> groups =
          value_groups(postings, parent, n, n_labels);
      std::vector<long> left(n_labels, 0);
      std::vector<long> right = parent;
      for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
        for (std::size_t i = 0; i < n_labels; ++i) {
          left[i] += groups[g].counts[i];
          right[i] -= groups[g].counts[i];
        }
        double threshold = (groups[g].value + groups[g + 1].value) / 2.0;
        // A midpoint that rounds down onto the left value would route that
        // value right; skip such degenerate adjacent-double candidates.
        if (threshold > groups[g].value) {
          consider(feature, SplitKind::threshold, threshold, left, right);
        }
      }
    }
  }

  if (best && best->decrease > 0.0) return best;
  return std::nullopt;
}

namespace {

bool goes_right(const TreeNode& node, const FeatureVector& vec) {
  if (node.kind == SplitKind::presence) return has_feature(vec, node.feature);
  return value_of(vec, node.feature) >= node.threshold;
}

int build_node(DecisionTree& tree, const TrainData& data,
               const TrainParams& params, const std::vector<int>& row_ids,
               int depth) {
  const auto& labels = *data.labels;
  const std::size_t n_labels = data.label_order.size();
  std::vector<long> counts(n_labels, 0);
  for (int r : row_ids) {
    ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(r)])];
  }

  int id = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  tree.nodes[static_cast<std::size_t>(id)].depth = depth;
  tree.nodes[static_cast<std::size_t>(id)].counts = counts;
  tree.nodes[static_cast<std::size_t>(id)].majority = argmax_lowest(counts);

  if (depth >= params.max_depth || pure(counts)) return id;
  std::optional<SplitChoice> split =
      best_split(data, row_ids, params.criterion, params.min_leaf);
  if (!split) return id;

  TreeNode probe;
  probe.feature = split->feature;
  probe.kind = split->kind;
  probe.threshold = split->threshold;
  std::vector<int> left_rows;
  std::vector<int> right_rows;
  for (int r : row_ids) {
    if (goes_right(probe, (*data.rows)[static_cast<std::size_t>(r)])) {
      right_rows.push_back(r);
    } else {
      left_rows.push_back(r);
    }
  }

  int left = build_node(tree, data, params, left_rows, depth + 1);
  int right = build_node(tree, data, params, right_rows, depth + 1);
  TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
  node.feature = split->feature;
  node.kind = split->kind;
  node.threshold = split->threshold;
  node.left = left;
  node.right = right;
  return id;
}

}  // namespace

int DecisionTree::route(const FeatureVector& vec) const {
  int cur = 0;
  while (!nodes[static_cast<std::size_t>(cur)].is_leaf()) {
    const TreeNode& node = nodes[static_cast<std::size_t>(cur)];
    cur = goes_right(node, vec) ? node.right : node.left;
  }
  return cur;
}

DecisionTree::Prediction DecisionTree::predict(const FeatureVector& vec) const {
  Prediction pred;
  pred.leaf = route(vec);
  const TreeNode& leaf = nodes[static_cast<std::size_t>(pred.leaf)];
  pred.label = leaf.majority;
  long total = total_of(leaf.counts);
  pred.distribution.resize(leaf.counts.size(), 0.0);
  if (total > 0) {
    for (std::size_t i = 0; i < leaf.counts.size(); ++i) {
      pred.distribution[i] =
          static_cast<double>(leaf.counts[i]) / static_cast<double>(total);
    }
  }
  return pred;
}

std::vector<int> DecisionTree::leaves() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) out.push_back(static_cast<int>(i));
  }
  return out;
}

int DecisionTree::depth() const {
  int deepest = 0;
  for (const TreeNode& node : nodes) deepest = std::max(deepest, node.depth);
  return deepest;
}

DecisionTree grow(const TrainData& data, const TrainParams& params) {
  if (data.rows == nullptr || data.rows->empty()) {
    throw EmptyDataError("empty training set");
  }
  if (params.max_depth < 0 || params.min_leaf < 1) {
    throw ConfigError("invalid training parameters");
  }
  DecisionTree tree;
  tree.label_order = data.label_order;
  tree.params = params;
  std::vector<int> all(data.rows->size());
  std::iota(all.begin(), all.end(), 0);
  build_node(tree, data, params, all, 0);
  return tree;
}

GridResult grid_search(const TrainData& train,
                       const std::vector<FeatureVector>& valid_rows,
                       const std::vector<int>& valid_labels,
                       const std::vector<TrainParams>& grid) {
  if (grid.empty()) {
    throw ConfigError("empty hyperparameter grid");
  }
  if (valid_rows.empty()) {
    throw EmptyDataError("empty validation set");
  }
  std::optional<GridResult> best;
  for (const TrainParams& params : grid) {
    DecisionTree tree = grow(train, params);
    double acc = accuracy(tree, valid_rows, valid_labels);
    bool better = false;
    if (!best || acc > best->valid_accuracy) {
      better = true;
    } else if (acc == best->valid_accuracy) {
      if (params.max_depth < best->params.max_depth) {
        better = true;
      } else if (params.max_depth == best->params.max_depth &&
                 params.criterion == TrainParams::Criterion::gini &&
                 best->params.criterion == TrainParams::Criterion::entropy) {
        better = true;
      }
    }
    if (better) best = GridResult{std::move(tree), params, acc};
  }
  return *best;
}

}  // namespace treegram
