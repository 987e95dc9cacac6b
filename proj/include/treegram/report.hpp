#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treegram/dtree.hpp"
#include "treegram/eval.hpp"
#include "treegram/ruleset.hpp"

namespace treegram {

struct RunMeta {
  TaskKind task = TaskKind::word_order;
  std::string task_key;
  std::string language;
  std::string treebank_id;
  FeatureFlags features;
  double alpha = 0.01;
  double tau = 0.9;
  std::uint64_t seed = 0;
  TrainParams params;  // chosen by the grid search
};

// All emitters are pure functions of their inputs; identical inputs produce
// byte-identical documents.

// Stable-ordered JSON document with rules, per-rule examples (sentence text
// plus focus token ids), the eval block, and run metadata.
std::string emit_json(const std::vector<Rule>& rules, const EvalReport& eval,
                      const RunMeta& meta,
                      const std::vector<std::string>& label_order,
                      const Corpus& train_corpus);

// CommonMark document; focus words are marked bold (dependent) and
// underlined (head) inside example sentences.
std::string emit_markdown(const std::vector<Rule>& rules,
                          const EvalReport& eval, const RunMeta& meta,
                          const std::vector<std::string>& label_order,
                          const Corpus& train_corpus);

// Self-contained static HTML5 (inline styles, no external fetches).
std::string emit_html(const std::vector<Rule>& rules, const EvalReport& eval,
                      const RunMeta& meta,
                      const std::vector<std::string>& label_order,
                      const Corpus& train_corpus);

// Inverse of emit_json over the rule list (conditions, labels, p-values,
// support, example references).
std::vector<Rule> rules_from_json(const std::string& bytes);

// Tree document keyed by feature names, not ids, so trees survive feature
// space rebuilds.
std::string tree_to_json(const DecisionTree& tree, const FeatureSpace& space);
DecisionTree tree_from_json(const std::string& bytes,
                            const FeatureSpace& space);

// Standalone eval document (also embedded in the rules JSON).
std::string eval_to_json(const EvalReport& eval, const RunMeta& meta);

}  // namespace treegram
