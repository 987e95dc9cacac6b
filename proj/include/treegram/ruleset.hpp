#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treegram/dtree.hpp"
#include "treegram/featurize.hpp"
#include "treegram/taskgen.hpp"
#include "treegram/treebank.hpp"

namespace treegram {

inline constexpr const char* kCannotDecide = "cannot-decide";

// Upper regularized incomplete gamma Q(s, x): series expansion for
// x < s + 1, continued fraction otherwise. Absolute error <= 1e-10.
double regularized_gamma_q(double s, double x);

// Expected label probabilities under the null hypothesis, aligned with the
// dataset's label order.
struct NullDistribution {
  std::vector<double> expected;
};

// Pearson statistic over labels with positive expectation, upper-tail
// p-value with df = (#positive-expectation labels) - 1. Zero total or zero
// df yields p = 1.
double chi2_pvalue(const std::vector<long>& observed,
                   const NullDistribution& null);

// word order: uniform over before/after. case: uniform over observed values.
// agreement: chance-agreement probability sum_v q(v)^2 where q pools the
// attribute values of both members of every training pair.
NullDistribution null_distribution(const Dataset& train, const Corpus& corpus);

// Assigns each leaf its majority label iff the leaf's chi-squared p-value
// against the null is below alpha; otherwise cannot-decide.
void label_leaves(DecisionTree& tree, const NullDistribution& null,
                  double alpha);

struct RuleCondition {
  std::string feature;  // display name
  SplitKind kind = SplitKind::presence;
  bool passed = true;  // branch taken: asserted / >= threshold
  double threshold = 0.0;

  std::string render() const;
  bool operator==(const RuleCondition&) const = default;
};

struct ExampleRef {
  std::size_t sentence = 0;
  int focus_a = 0;
  int focus_b = 0;  // 0 when the instance has a single focus token

  bool operator==(const ExampleRef&) const = default;
};

struct Rule {
  std::vector<RuleCondition> conditions;  // root-to-leaf path predicates
  std::string label;                      // predicted label or cannot-decide
  bool significant = false;
  double p_value = 1.0;
  std::vector<long> support;  // leaf counts per label order
  std::vector<ExampleRef> positives;
  std::vector<ExampleRef> negatives;
  int leaf = -1;  // node id within the source tree

  bool operator==(const Rule&) const = default;
};

// One rule per leaf, in leaf id order; cannot-decide leaves are included
// and flagged so reports can de-emphasize them.
std::vector<Rule> extract_rules(const DecisionTree& tree,
                                const FeatureSpace& space);

// Picks illustrative examples for one rule from the training instances
// routed to its leaf: group by lemmatized focus tuple, keep the shortest
// sentence per group, shuffle groups with the seed, take the first cap.
// Positives match the rule's reference label, negatives do not.
void select_examples(Rule& rule, const std::vector<int>& leaf_row_ids,
                     const Dataset& train, const Corpus& corpus,
                     std::uint64_t seed, std::size_t cap = 10);

// Routes every training row and runs select_examples for each rule.
void attach_examples(std::vector<Rule>& rules, const DecisionTree& tree,
                     const std::vector<FeatureVector>& train_rows,
                     const Dataset& train, const Corpus& corpus,
                     std::uint64_t seed, std::size_t cap = 10);

}  // namespace treegram
