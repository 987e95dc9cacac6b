#include "treegram/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "treegram/errors.hpp"

namespace treegram {

namespace {

std::string lower_ascii(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

void add_children(FocusSet& focus, std::set<int>& used,
                  const Sentence& sentence, int parent,
                  const std::string& prefix, int max_children) {
  const Token& parent_tok = sentence.tok(parent);
  std::vector<int> kids;
  for (int kid : sentence.children(parent)) {
    if (!used.count(kid)) kids.push_back(kid);
  }
  std::stable_sort(kids.begin(), kids.end(), [&](int a, int b) {
    int da = std::abs(a - parent_tok.id);
    int db = std::abs(b - parent_tok.id);
    if (da != db) return da < db;
    return a < b;
  });
  if (static_cast<int>(kids.size()) > max_children) {
    kids.resize(static_cast<std::size_t>(max_children));
  }
  for (std::size_t i = 0; i < kids.size(); ++i) {
    focus.roles.emplace_back(prefix + "-child-" + std::to_string(i + 1),
                             kids[i]);
    used.insert(kids[i]);
  }
}

}  // namespace

int FocusSet::token_of(const std::string& role) const {
  for (const auto& [name, id] : roles) {
    if (name == role) return id;
  }
  return 0;
}

FocusSet collect_focus(const Sentence& sentence, const TaskInstance& instance,
                       int max_children) {
  FocusSet focus;
  std::set<int> used;
  focus.roles.emplace_back("dep", instance.focus_a);
  used.insert(instance.focus_a);
  int top = instance.focus_a;
  if (instance.focus_b != 0) {
    focus.roles.emplace_back("head", instance.focus_b);
    used.insert(instance.focus_b);
    top = instance.focus_b;
  }
  // The syntactic head above the focus unit; absent when the unit sits at
  // the root.
  int up = sentence.tok(top).head;
  if (up != 0 && !used.count(up)) {
    focus.roles.emplace_back("dep-head", up);
    used.insert(up);
  }
  add_children(focus, used, sentence, instance.focus_a, "dep", max_children);
  if (instance.focus_b != 0) {
    add_children(focus, used, sentence, instance.focus_b, "head",
                 max_children);
  }
  return focus;
}

std::vector<RawFeature> syntactic_features(const FocusSet& focus,
                                           const Sentence& sentence) {
  std::vector<RawFeature> out;
  for (const auto& [role, id] : focus.roles) {
    const Token& tok = sentence.tok(id);
    if (!tok.upos.empty()) {
      out.push_back({role + "-is-" + lower_ascii(tok.upos), "",
                     FeatureKind::binary, 1.0});
    }
    for (const auto& [attr, value] : tok.morph) {
      out.push_back(
          {role + "-" + lower_ascii(attr) + "-is-" + lower_ascii(value), "",
           FeatureKind::binary, 1.0});
    }
    if (!tok.deprel.empty()) {
      out.push_back({role + "-deprel-is-" + lower_ascii(tok.deprel), "",
                     FeatureKind::binary, 1.0});
    }
  }
  return out;
}

std::vector<RawFeature> lexical_features(const FocusSet& focus,
                                         const Sentence& sentence) {
  std::vector<RawFeature> out;
  for (const auto& [role, id] : focus.roles) {
    const Token& tok = sentence.tok(id);
    if (tok.lemma.empty()) continue;
    out.push_back(
        {role + "-lemma-is-" + tok.lemma, "", FeatureKind::binary, 1.0});
  }
  return out;
}

SparseLexicon::SparseLexicon(
    std::unordered_map<std::string, std::vector<double>> vectors,
    std::size_t top_k)
    : vectors_(std::move(vectors)) {
  if (vectors_.empty()) return;
  width_ = vectors_.begin()->second.size();
  for (std::size_t d = 0; d < width_; ++d) {
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& [word, vec] : vectors_) {
      if (vec[d] > 0.0) ranked.emplace_back(vec[d], word);
    }
    if (ranked.empty()) continue;  // all-zero dimensions carry no features
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    retained_.push_back(d);
    std::vector<std::string> top;
    for (std::size_t i = 0; i < ranked.size() && i < top_k; ++i) {
      top.push_back(ranked[i].second);
    }
    labels_[d] = std::move(top);
  }
}

const std::vector<double>* SparseLexicon::vector_of(
    const std::string& word) const {
  auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : &it->second;
}

const std::vector<std::string>& SparseLexicon::dim_words(
    std::size_t dim) const {
  static const std::vector<std::string> kEmpty;
  auto it = labels_.find(dim);
  return it == labels_.end() ? kEmpty : it->second;
}

std::string SparseLexicon::dim_label(std::size_t dim) const {
  std::string out = "{";
  const auto& words = dim_words(dim);
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ',';
    out += words[i];
  }
  out += '}';
  return out;
}

SparseLexicon parse_sparse_lexicon(std::istream& in, std::size_t top_k) {
  std::unordered_map<std::string, std::vector<double>> vectors;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string word;
    row >> word;
    std::vector<double> values;
    std::string item;
    while (row >> item) {
      char* end = nullptr;
      double v = std::strtod(item.c_str(), &end);
      if (end == item.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw ParseError(line_no, "non-numeric value '" + item + "'");
      }
      if (v < 0.0) {
        throw ParseError(line_no, "negative value " + item);
      }
      values.push_back(v);
    }
    if (values.empty()) {
      throw ParseError(line_no, "row has no vector values");
    }
    if (width == 0) {
      width = values.size();
    } else if (values.size() != width) {
      throw ParseError(line_no, "expected " + std::to_string(width) +
                                    " values, got " +
                                    std::to_string(values.size()));
    }
    vectors[word] = std::move(values);
  }
  return SparseLexicon(std::move(vectors), top_k);
}

SparseLexicon load_sparse_lexicon(const std::string& path,
                                  std::size_t top_k) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open lexicon file: " + path);
  }
  return parse_sparse_lexicon(in, top_k);
}

std::vector<RawFeature> semantic_features(const FocusSet& focus,
                                          const Sentence& sentence,
                                          const SparseLexicon& lexicon) {
  std::vector<RawFeature> out;
  for (const auto& [role, id] : focus.roles) {
    const Token& tok = sentence.tok(id);
    const std::vector<double>* vec = lexicon.vector_of(tok.form);
    if (!vec) continue;
    for (std::size_t d : lexicon.retained_dims()) {
      double value = (*vec)[d];
      if (value <= 0.0) continue;
      out.push_back({role + "-dim" + std::to_string(d),
                     role + "-word-is-like=" + lexicon.dim_label(d),
                     FeatureKind::numeric, value});
    }
  }
  return out;
}

int FeatureSpace::intern(const std::string& name, const std::string& display,
                         FeatureKind kind) {
  auto it = name_to_id_.find(name);
  if (it != name_to_id_.end()) return it->second;
  int id = static_cast<int>(names_.size());
  name_to_id_.emplace(name, id);
  names_.push_back(name);
  displays_.push_back(display.empty() ? name : display);
  kinds_.push_back(kind);
  return id;
}

int FeatureSpace::id_of(const std::string& name) const {
  auto it = name_to_id_.find(name);
  return it == name_to_id_.end() ? -1 : it->second;
}

double value_of(const FeatureVector& vec, int feature) {
  auto it = std::lower_bound(
      vec.begin(), vec.end(), feature,
      [](const FeatureValue& fv, int f) { return fv.feature < f; });
  if (it == vec.end() || it->feature != feature) return 0.0;
  return it->value;
}

bool has_feature(const FeatureVector& vec, int feature) {
  return value_of(vec, feature) != 0.0;
}

namespace {

std::vector<RawFeature> raw_features(const Sentence& sentence,
                                     const TaskInstance& instance,
                                     const FeatureFlags& flags,
                                     const SparseLexicon* lexicon,
                                     int max_children) {
  FocusSet focus = collect_focus(sentence, instance, max_children);
  std::vector<RawFeature> raw;
  if (flags.syntactic) {
    auto f = syntactic_features(focus, sentence);
    raw.insert(raw.end(), f.begin(), f.end());
  }
  if (flags.lexical) {
    auto f = lexical_features(focus, sentence);
    raw.insert(raw.end(), f.begin(), f.end());
  }
  if (flags.semantic && lexicon) {
    auto f = semantic_features(focus, sentence, *lexicon);
    raw.insert(raw.end(), f.begin(), f.end());
  }
  return raw;
}

void check_flags(const FeatureFlags& flags, const SparseLexicon* lexicon) {
  if (!flags.any()) {
    throw ConfigError("no feature families selected");
  }
  if (flags.semantic && lexicon == nullptr) {
    throw ConfigError("semantic features require a sparse lexicon");
  }
}

void sort_row(FeatureVector& row) {
  std::sort(row.begin(), row.end(),
            [](const FeatureValue& a, const FeatureValue& b) {
              return a.feature < b.feature;
            });
}

}  // namespace

FeatureMatrix build_matrix(const Dataset& train, const Corpus& corpus,
                           const FeatureFlags& flags,
                           const SparseLexicon* lexicon, int max_children) {
  check_flags(flags, lexicon);
  if (train.instances.empty()) {
    throw EmptyDataError("no instances");
  }
  FeatureMatrix matrix;
  for (const TaskInstance& inst : train.instances) {
    const Sentence& sentence = corpus.sentences[inst.sentence];
    FeatureVector row;
    for (const RawFeature& f :
         raw_features(sentence, inst, flags, lexicon, max_children)) {
      int id = matrix.space.intern(f.name, f.display, f.kind);
      row.push_back({id, f.value});
    }
    sort_row(row);
    matrix.rows.push_back(std::move(row));
    matrix.labels.push_back(train.label_index(inst.label));
  }
  return matrix;
}

std::vector<FeatureVector> vectorize(const Dataset& dataset,
                                     const Corpus& corpus,
                                     const FeatureSpace& space,
                                     const FeatureFlags& flags,
                                     const SparseLexicon* lexicon,
                                     int max_children) {
  check_flags(flags, lexicon);
  std::vector<FeatureVector> rows;
  rows.reserve(dataset.instances.size());
  for (const TaskInstance& inst : dataset.instances) {
    const Sentence& sentence = corpus.sentences[inst.sentence];
    FeatureVector row;
    for (const RawFeature& f :
         raw_features(sentence, inst, flags, lexicon, max_children)) {
      int id = space.id_of(f.name);
      if (id < 0) continue;  // unseen in training, dropped
      row.push_back({id, f.value});
    }
    sort_row(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<int> map_labels(const Dataset& dataset,
                            const std::vector<std::string>& label_order) {
  std::vector<int> out;
  out.reserve(dataset.instances.size());
  for (const TaskInstance& inst : dataset.instances) {
    auto it =
        std::find(label_order.begin(), label_order.end(), inst.label);
    out.push_back(it == label_order.end()
                      ? -1
                      : static_cast<int>(it - label_order.begin()));
  }
  return out;
}

}  // namespace treegram
