#pragma once

#include <string>
#include <vector>

#include "treegram/treebank.hpp"

namespace treegram {

enum class TaskKind { word_order, case_marking, agreement };

const char* task_name(TaskKind t);
TaskKind task_from_name(const std::string& name);  // throws ConfigError

// Which dependency pairs form one word-order question, and which member's
// position defines "before". SUD label strings are configuration, not fixed.
struct RelationSpec {
  enum class Orientation { dep, head };
  enum class DeprelMatch { exact, contains };

  std::string name;       // e.g. "adjective-noun"
  std::string wals_code;  // e.g. "87A"
  std::vector<std::string> dep_upos;   // empty = any
  std::string deprel;                  // empty = any
  DeprelMatch deprel_match = DeprelMatch::exact;
  std::vector<std::string> head_upos;  // empty = any
  Orientation orientation = Orientation::dep;

  bool matches_dep(const Token& t) const;
  bool matches_head(const Token& t) const;
};

// The five WALS word-order relations with SUD-flavoured defaults.
std::vector<RelationSpec> default_relations();

// Finds a relation by name in the given list, falling back to defaults;
// throws ConfigError when unknown.
RelationSpec find_relation(const std::vector<RelationSpec>& overrides,
                           const std::string& name);

// One classification example. focus_a is the dependent member (or the sole
// focus token for case marking); focus_b is the head member, 0 when absent.
struct TaskInstance {
  std::size_t sentence = 0;  // index into the corpus
  int focus_a = 0;
  int focus_b = 0;
  std::string label;
};

struct Dataset {
  TaskKind task = TaskKind::word_order;
  std::string task_key;  // relation name / POS tag / morphological attribute
  std::vector<TaskInstance> instances;
  std::vector<std::string> labels;  // lexicographically sorted label set

  int label_index(const std::string& label) const;  // -1 when unknown
};

// One instance per (dependent, head) pair matching the spec; label "before"
// iff the oriented member precedes the other.
Dataset extract_word_order(const Corpus& corpus, const RelationSpec& spec);

// One instance per token with the given UPOS and a Case attribute; the label
// is the case value. Unmarked tokens are skipped.
Dataset extract_case(const Corpus& corpus, const std::string& pos);

// One instance per (head, dependent) pair where both members carry the
// attribute; label "agree" iff the values are equal. The attribute must be
// one of Gender, Person, Number.
Dataset extract_agreement(const Corpus& corpus, const std::string& attribute);

// A task plus its key, resolved to something extract_task can run on any
// corpus (used by extract and cross-eval).
struct TaskQuery {
  TaskKind task = TaskKind::word_order;
  std::string key;
  RelationSpec relation;  // filled for word_order
};

TaskQuery make_task_query(TaskKind task, const std::string& key,
                          const std::vector<RelationSpec>& relation_overrides);
Dataset extract_task(const Corpus& corpus, const TaskQuery& query);

}  // namespace treegram
