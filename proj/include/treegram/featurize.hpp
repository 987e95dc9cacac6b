#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treegram/taskgen.hpp"
#include "treegram/treebank.hpp"

namespace treegram {

// Focus words of one instance: the relation token(s), the syntactic head
// above them, and their closest dependents. Each token appears under at most
// one role.
struct FocusSet {
  std::vector<std::pair<std::string, int>> roles;  // role name -> token id

  int token_of(const std::string& role) const;  // 0 when the role is absent
};

// Roles emitted: "dep", "head" (pair tasks), "dep-head" (syntactic head of
// the unit's top member, absent at the root), "dep-child-i"/"head-child-i"
// for up to max_children dependents per member, closest first.
FocusSet collect_focus(const Sentence& sentence, const TaskInstance& instance,
                       int max_children = 3);

enum class FeatureKind { binary, numeric };

struct RawFeature {
  std::string name;
  std::string display;  // empty = same as name
  FeatureKind kind = FeatureKind::binary;
  double value = 1.0;
};

// POS, every morphological attribute and the dependency relation, per role.
std::vector<RawFeature> syntactic_features(const FocusSet& focus,
                                           const Sentence& sentence);

// Lemma per role. Lemma payloads keep their original casing and script.
std::vector<RawFeature> lexical_features(const FocusSet& focus,
                                         const Sentence& sentence);

// word -> non-negative vector; per-dimension labels are the top-k words of
// that dimension. Dimensions that are zero everywhere carry no features.
class SparseLexicon {
 public:
  SparseLexicon() = default;
  SparseLexicon(std::unordered_map<std::string, std::vector<double>> vectors,
                std::size_t top_k);

  std::size_t width() const { return width_; }
  bool empty() const { return vectors_.empty(); }
  const std::vector<double>* vector_of(const std::string& word) const;
  const std::vector<std::size_t>& retained_dims() const { return retained_; }
  // Top-k words of one dimension, highest value first, ties lexicographic.
  const std::vector<std::string>& dim_words(std::size_t dim) const;
  std::string dim_label(std::size_t dim) const;  // "{hotel,restaurante}"

 private:
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::size_t width_ = 0;
  std::vector<std::size_t> retained_;  // dims whose max value > 0
  std::unordered_map<std::size_t, std::vector<std::string>> labels_;
};

// Rows are "word v1 v2 ... vD", space-separated, non-negative. Throws
// ParseError with the line number on wrong arity or negative values.
SparseLexicon parse_sparse_lexicon(std::istream& in, std::size_t top_k = 5);
SparseLexicon load_sparse_lexicon(const std::string& path,
                                  std::size_t top_k = 5);

// One numeric feature per (role, retained dimension) with a positive value
// for the role's word form; displayed as "<role>-word-is-like={...}".
std::vector<RawFeature> semantic_features(const FocusSet& focus,
                                          const Sentence& sentence,
                                          const SparseLexicon& lexicon);

struct FeatureFlags {
  bool syntactic = false;
  bool lexical = false;
  bool semantic = false;

  bool any() const { return syntactic || lexical || semantic; }
};

// Bidirectional mapping between feature names and dense ids, plus the
// human-readable rendering used in rules. Built once from training data,
// read-only afterwards.
class FeatureSpace {
 public:
  int intern(const std::string& name, const std::string& display,
             FeatureKind kind);
  int id_of(const std::string& name) const;  // -1 when unknown
  const std::string& name_of(int id) const { return names_[static_cast<std::size_t>(id)]; }
  const std::string& display_of(int id) const { return displays_[static_cast<std::size_t>(id)]; }
  FeatureKind kind_of(int id) const { return kinds_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, int> name_to_id_;
  std::vector<std::string> names_;
  std::vector<std::string> displays_;
  std::vector<FeatureKind> kinds_;
};

struct FeatureValue {
  int feature = 0;
  double value = 0.0;

  bool operator==(const FeatureValue&) const = default;
};

// Sparse, sorted by feature id. Binary features carry value 1; absent means 0.
using FeatureVector = std::vector<FeatureValue>;

double value_of(const FeatureVector& vec, int feature);
bool has_feature(const FeatureVector& vec, int feature);

struct FeatureMatrix {
  FeatureSpace space;
  std::vector<FeatureVector> rows;  // aligned with the dataset's instances
  std::vector<int> labels;          // label indices into the dataset's order
};

// Builds the feature space from a training dataset and vectorizes it.
// Throws EmptyDataError on an empty dataset and ConfigError when no feature
// family is selected or the semantic family lacks a lexicon.
FeatureMatrix build_matrix(const Dataset& train, const Corpus& corpus,
                           const FeatureFlags& flags,
                           const SparseLexicon* lexicon = nullptr,
                           int max_children = 3);

// Vectorizes held-out data against a frozen space; unseen names are dropped.
std::vector<FeatureVector> vectorize(const Dataset& dataset,
                                     const Corpus& corpus,
                                     const FeatureSpace& space,
                                     const FeatureFlags& flags,
                                     const SparseLexicon* lexicon = nullptr,
                                     int max_children = 3);

// Labels of a dataset mapped into a reference label order (-1 = unseen).
std::vector<int> map_labels(const Dataset& dataset,
                            const std::vector<std::string>& label_order);

}  // namespace treegram
