#include "treegram/ruleset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "treegram/errors.hpp"
#include "treegram/rng.hpp"

namespace treegram {

namespace {

// Series expansion of the lower regularized incomplete gamma P(s, x),
// convergent and fast for x < s + 1.
double gamma_p_series(double s, double x) {
  double ap = s;
  double sum = 1.0 / s;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Continued fraction for Q(s, x), modified Lentz, stable for x >= s + 1.
double gamma_q_cf(double s, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

}  // namespace

double regularized_gamma_q(double s, double x) {
  if (!(s > 0.0) || x < 0.0) {
    throw std::invalid_argument("regularized_gamma_q needs s > 0, x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (x < s + 1.0) {
    double q = 1.0 - gamma_p_series(s, x);
    return std::clamp(q, 0.0, 1.0);
  }
  return std::clamp(gamma_q_cf(s, x), 0.0, 1.0);
}

double chi2_pvalue(const std::vector<long>& observed,
                   const NullDistribution& null) {
  if (observed.size() != null.expected.size()) {
    throw std::invalid_argument("observed/expected label count mismatch");
  }
  long n = std::accumulate(observed.begin(), observed.end(), 0L);
  if (n == 0) return 1.0;  // degenerate leaf
  double stat = 0.0;
  int support = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (null.expected[i] <= 0.0) continue;  // zero-expectation labels excluded
    ++support;
    double expected = static_cast<double>(n) * null.expected[i];
    double diff = static_cast<double>(observed[i]) - expected;
    stat += diff * diff / expected;
  }
  int df = support - 1;
  if (df <= 0) return 1.0;
  return regularized_gamma_q(static_cast<double>(df) / 2.0, stat / 2.0);
}

NullDistribution null_distribution(const Dataset& train,
                                   const Corpus& corpus) {
  if (train.instances.empty()) {
    throw EmptyDataError("null distribution of an empty training set");
  }
  NullDistribution null;
  switch (train.task) {
    case TaskKind::word_order:
    case TaskKind::case_marking: {
      // Either order (either observed case value) is equally available.
      double uniform = 1.0 / static_cast<double>(train.labels.size());
      null.expected.assign(train.labels.size(), uniform);
      return null;
    }
    case TaskKind::agreement: {
      // Chance agreement of two values drawn from the pooled marginal of
      // the attribute over both members of every training pair.
      std::map<std::string, long> marginal;
      long total = 0;
      for (const TaskInstance& inst : train.instances) {
        const Sentence& sentence = corpus.sentences[inst.sentence];
        for (int id : {inst.focus_a, inst.focus_b}) {
          if (id == 0) continue;
          auto it = sentence.tok(id).morph.find(train.task_key);
          if (it == sentence.tok(id).morph.end()) continue;
          ++marginal[it->second];
          ++total;
        }
      }
      double chance = 0.0;
      for (const auto& [value, count] : marginal) {
        double q = static_cast<double>(count) / static_cast<double>(total);
        chance += q * q;
      }
      null.expected.resize(train.labels.size(), 0.0);
      for (std::size_t i = 0; i < train.labels.size(); ++i) {
        null.expected[i] = train.labels[i] == "agree" ? chance : 1.0 - chance;
      }
      return null;
    }
  }
  throw std::invalid_argument("unknown task");
}

void label_leaves(DecisionTree& tree, const NullDistribution& null,
                  double alpha) {
  if (null.expected.size() != tree.label_order.size()) {
    throw std::invalid_argument("null distribution does not match tree labels");
  }
  for (TreeNode& node : tree.nodes) {
    if (!node.is_leaf()) continue;
    node.p_value = chi2_pvalue(node.counts, null);
    node.significant = node.p_value < alpha;
  }
}

std::string RuleCondition::render() const {
  if (kind == SplitKind::presence) {
    return passed ? feature : "NOT " + feature;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", threshold);
  return feature + (passed ? " >= " : " < ") + buf;
}

namespace {

void walk_rules(const DecisionTree& tree, const FeatureSpace& space, int node_id,
                std::vector<RuleCondition>& path, std::vector<Rule>& out) {
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_id)];
  if (node.is_leaf()) {
    Rule rule;
    rule.conditions = path;
    rule.significant = node.significant;
    rule.label = node.significant
                     ? tree.label_order[static_cast<std::size_t>(node.majority)]
                     : kCannotDecide;
    rule.p_value = node.p_value;
    rule.support = node.counts;
    rule.leaf = node_id;
    out.push_back(std::move(rule));
    return;
  }
  RuleCondition cond;
  cond.feature = space.display_of(node.feature);
  cond.kind = node.kind;
  cond.threshold = node.threshold;

  cond.passed = false;
  path.push_back(cond);
  walk_rules(tree, space, node.left, path, out);
  path.back().passed = true;
  walk_rules(tree, space, node.right, path, out);
  path.pop_back();
}

std::string lemma_or_form(const Token& tok) {
  return tok.lemma.empty() ? tok.form : tok.lemma;
}

std::string group_key(const TaskInstance& inst, const Corpus& corpus) {
  const Sentence& sentence = corpus.sentences[inst.sentence];
  std::string key = lemma_or_form(sentence.tok(inst.focus_a));
  if (inst.focus_b != 0) {
    key += '\x1f';
    key += lemma_or_form(sentence.tok(inst.focus_b));
  }
  return key;
}

// Shortest sentence per lemmatized focus tuple, groups shuffled with the
// seed, first cap taken.
std::vector<ExampleRef> pick_group_examples(const std::vector<int>& row_ids,
                                            const Dataset& train,
                                            const Corpus& corpus, Rng& rng,
                                            std::size_t cap) {
  struct GroupBest {
    int length = 0;
    int row = 0;
  };
  std::unordered_map<std::string, GroupBest> groups;
  std::vector<std::string> keys;  // in first-appearance order
  for (int row : row_ids) {
    const TaskInstance& inst = train.instances[static_cast<std::size_t>(row)];
    int length = corpus.sentences[inst.sentence].size();
    std::string key = group_key(inst, corpus);
    auto it = groups.find(key);
    if (it == groups.end()) {
      groups[key] = {length, row};
      keys.push_back(std::move(key));
    } else if (length < it->second.length) {
      it->second.length = length;
      it->second.row = row;
    }
  }
  std::vector<int> reps;
  reps.reserve(keys.size());
  for (const std::string& key : keys) reps.push_back(groups[key].row);
  rng.shuffle(reps);
  if (reps.size() > cap) reps.resize(cap);

  std::vector<ExampleRef> out;
  out.reserve(reps.size());
  for (int row : reps) {
    const TaskInstance& inst = train.instances[static_cast<std::size_t>(row)];
    out.push_back({inst.sentence, inst.focus_a, inst.focus_b});
  }
  return out;
}

}  // namespace

std::vector<Rule> extract_rules(const DecisionTree& tree,
                                const FeatureSpace& space) {
  std::vector<Rule> rules;
  std::vector<RuleCondition> path;
  walk_rules(tree, space, 0, path, rules);
  return rules;
}

void select_examples(Rule& rule, const std::vector<int>& leaf_row_ids,
                     const Dataset& train, const Corpus& corpus,
                     std::uint64_t seed, std::size_t cap) {
  // Cannot-decide rules still show the leaf's majority behaviour.
  std::string reference = rule.label;
  if (reference == kCannotDecide) {
    std::size_t majority = 0;
    for (std::size_t i = 1; i < rule.support.size(); ++i) {
      if (rule.support[i] > rule.support[majority]) majority = i;
    }
    reference = majority < train.labels.size() ? train.labels[majority] : "";
  }
  std::vector<int> positives;
  std::vector<int> negatives;
  for (int row : leaf_row_ids) {
    const TaskInstance& inst = train.instances[static_cast<std::size_t>(row)];
    (inst.label == reference ? positives : negatives).push_back(row);
  }
  Rng rng(seed);
  rule.positives = pick_group_examples(positives, train, corpus, rng, cap);
  rule.negatives = pick_group_examples(negatives, train, corpus, rng, cap);
}

void attach_examples(std::vector<Rule>& rules, const DecisionTree& tree,
                     const std::vector<FeatureVector>& train_rows,
                     const Dataset& train, const Corpus& corpus,
                     std::uint64_t seed, std::size_t cap) {
  std::unordered_map<int, std::vector<int>> by_leaf;
  for (std::size_t i = 0; i < train_rows.size(); ++i) {
    by_leaf[tree.route(train_rows[i])].push_back(static_cast<int>(i));
  }
  for (Rule& rule : rules) {
    select_examples(rule, by_leaf[rule.leaf], train, corpus, seed, cap);
  }
}

}  // namespace treegram
