#include "treegram/taskgen.hpp"

#include <algorithm>
#include <set>

#include "treegram/errors.hpp"

namespace treegram {

namespace {

const std::set<std::string> kAgreementAttributes = {"Gender", "Person",
                                                    "Number"};

bool upos_in(const std::vector<std::string>& allowed, const std::string& upos) {
  if (allowed.empty()) return true;
  return std::find(allowed.begin(), allowed.end(), upos) != allowed.end();
}

std::vector<std::string> sorted_labels(const std::vector<TaskInstance>& insts,
                                       std::vector<std::string> configured) {
  std::set<std::string> seen(configured.begin(), configured.end());
  for (const TaskInstance& inst : insts) seen.insert(inst.label);
  return {seen.begin(), seen.end()};
}

}  // namespace

const char* task_name(TaskKind t) {
  switch (t) {
    case TaskKind::word_order: return "word-order";
    case TaskKind::case_marking: return "case";
    case TaskKind::agreement: return "agreement";
  }
  return "word-order";
}

TaskKind task_from_name(const std::string& name) {
  if (name == "word-order" || name == "word_order") return TaskKind::word_order;
  if (name == "case") return TaskKind::case_marking;
  if (name == "agreement") return TaskKind::agreement;
  throw ConfigError("unknown task '" + name +
                    "' (expected word-order, case, or agreement)");
}

bool RelationSpec::matches_dep(const Token& t) const {
  if (!upos_in(dep_upos, t.upos)) return false;
  if (deprel.empty()) return true;
  if (deprel_match == DeprelMatch::contains) {
    return t.deprel.find(deprel) != std::string::npos;
  }
  return t.deprel == deprel;
}

bool RelationSpec::matches_head(const Token& t) const {
  return upos_in(head_upos, t.upos);
}

std::vector<RelationSpec> default_relations() {
  // SUD deprel strings are treebank conventions, so every field here can be
  // overridden from the configuration file.
  std::vector<RelationSpec> specs;
  specs.push_back({"adjective-noun",
                   "87A",
                   {"ADJ"},
                   "mod",
                   RelationSpec::DeprelMatch::contains,
                   {"NOUN"},
                   RelationSpec::Orientation::dep});
  specs.push_back({"subject-verb",
                   "82A",
                   {},
                   "subj",
                   RelationSpec::DeprelMatch::exact,
                   {"VERB", "AUX"},
                   RelationSpec::Orientation::dep});
  specs.push_back({"object-verb",
                   "83A",
                   {},
                   "comp:obj",
                   RelationSpec::DeprelMatch::exact,
                   {"VERB"},
                   RelationSpec::Orientation::dep});
  specs.push_back({"adposition-noun",
                   "85A",
                   {"NOUN"},
                   "",
                   RelationSpec::DeprelMatch::exact,
                   {"ADP"},
                   RelationSpec::Orientation::head});
  specs.push_back({"numeral-noun",
                   "89A",
                   {"NUM"},
                   "",
                   RelationSpec::DeprelMatch::exact,
                   {"NOUN"},
                   RelationSpec::Orientation::dep});
  return specs;
}

RelationSpec find_relation(const std::vector<RelationSpec>& overrides,
                           const std::string& name) {
  for (const RelationSpec& spec : overrides) {
    if (spec.name == name) return spec;
  }
  for (const RelationSpec& spec : default_relations()) {
    if (spec.name == name) return spec;
  }
  throw ConfigError("unknown word-order relation '" + name + "'");
}

int Dataset::label_index(const std::string& label) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) return -1;
  return static_cast<int>(it - labels.begin());
}

Dataset extract_word_order(const Corpus& corpus, const RelationSpec& spec) {
  Dataset ds;
  ds.task = TaskKind::word_order;
  ds.task_key = spec.name;
  for (std::size_t si = 0; si < corpus.sentences.size(); ++si) {
    const Sentence& sentence = corpus.sentences[si];
    for (const Token& tok : sentence.tokens) {
      if (tok.head == 0) continue;
      const Token& head = sentence.tok(tok.head);
      if (!spec.matches_dep(tok) || !spec.matches_head(head)) continue;
      int oriented =
          spec.orientation == RelationSpec::Orientation::dep ? tok.id : head.id;
      int other = oriented == tok.id ? head.id : tok.id;
      TaskInstance inst;
      inst.sentence = si;
      inst.focus_a = tok.id;
      inst.focus_b = head.id;
      inst.label = oriented < other ? "before" : "after";
      ds.instances.push_back(inst);
    }
  }
  ds.labels = sorted_labels(ds.instances, {"after", "before"});
  return ds;
}

Dataset extract_case(const Corpus& corpus, const std::string& pos) {
  Dataset ds;
  ds.task = TaskKind::case_marking;
  ds.task_key = pos;
  for (std::size_t si = 0; si < corpus.sentences.size(); ++si) {
    const Sentence& sentence = corpus.sentences[si];
    for (const Token& tok : sentence.tokens) {
      if (tok.upos != pos) continue;
      auto it = tok.morph.find("Case");
      if (it == tok.morph.end()) continue;  // unmarked words are skipped
      TaskInstance inst;
      inst.sentence = si;
      inst.focus_a = tok.id;
      inst.focus_b = 0;
      inst.label = it->second;
      ds.instances.push_back(inst);
    }
  }
  ds.labels = sorted_labels(ds.instances, {});
  return ds;
}

Dataset extract_agreement(const Corpus& corpus, const std::string& attribute) {
  if (!kAgreementAttributes.count(attribute)) {
    throw ConfigError("unsupported agreement attribute '" + attribute +
                      "' (expected Gender, Person, or Number)");
  }
  Dataset ds;
  ds.task = TaskKind::agreement;
  ds.task_key = attribute;
  for (std::size_t si = 0; si < corpus.sentences.size(); ++si) {
    const Sentence& sentence = corpus.sentences[si];
    for (const Token& tok : sentence.tokens) {
      if (tok.head == 0) continue;
      const Token& head = sentence.tok(tok.head);
      auto dep_it = tok.morph.find(attribute);
      auto head_it = head.morph.find(attribute);
      // Only pairs where both members mark the attribute count.
      if (dep_it == tok.morph.end() || head_it == head.morph.end()) continue;
      TaskInstance inst;
      inst.sentence = si;
      inst.focus_a = tok.id;
      inst.focus_b = head.id;
      inst.label = dep_it->second == head_it->second ? "agree" : "disagree";
      ds.instances.push_back(inst);
    }
  }
  ds.labels = sorted_labels(ds.instances, {"agree", "disagree"});
  return ds;
}

TaskQuery make_task_query(TaskKind task, const std::string& key,
                          const std::vector<RelationSpec>& relation_overrides) {
  TaskQuery query;
  query.task = task;
  query.key = key;
  if (task == TaskKind::word_order) {
    query.relation = find_relation(relation_overrides, key);
  } else if (task == TaskKind::agreement &&
             !kAgreementAttributes.count(key)) {
    throw ConfigError("unsupported agreement attribute '" + key + "'");
  }
  return query;
}

Dataset extract_task(const Corpus& corpus, const TaskQuery& query) {
  switch (query.task) {
    case TaskKind::word_order:
      return extract_word_order(corpus, query.relation);
    case TaskKind::case_marking:
      return extract_case(corpus, query.key);
    case TaskKind::agreement:
      return extract_agreement(corpus, query.key);
  }
  throw ConfigError("unknown task");
}

}  // namespace treegram
