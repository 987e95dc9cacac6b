#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "treegram/errors.hpp"

namespace treegram {

// One syntactic word from a CoNLL-U row. Empty strings stand for fields the
// treebank left unspecified ("_").
struct Token {
  int id = 0;  // 1-based position within the sentence
  std::string form;
  std::string lemma;
  std::string upos;
  std::map<std::string, std::string> morph;  // e.g. Case=Nom, NumType=Ord
  int head = 0;                              // 0 = syntactic root
  std::string deprel;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;  // ids are exactly 1..tokens.size()
  std::string text;           // from "# text = ..." comments, may be empty

  const Token& tok(int id) const { return tokens[static_cast<std::size_t>(id - 1)]; }
  int size() const { return static_cast<int>(tokens.size()); }

  // Dependents of the token with the given id (or of the root for id 0),
  // in surface order.
  std::vector<int> children(int id) const;
};

enum class Split { train, valid, test };

const char* split_name(Split s);

struct Corpus {
  std::vector<Sentence> sentences;
  std::string language;
  std::string treebank_id;
  Split split = Split::train;
};

// Parses CoNLL-U text. Multiword-token ranges ("1-2") and empty nodes ("1.1")
// are dropped; only basic syntactic-word rows are kept. Enhanced-dependency
// and misc columns are ignored. Throws ParseError with the offending line on
// malformed rows (wrong column count, non-integer ids, head out of range,
// id gaps, rootless sentences).
Corpus parse_conllu(std::istream& in);
Corpus parse_conllu(const std::string& text);

// Reads one file; throws std::runtime_error naming the path when unreadable.
Corpus parse_conllu_file(const std::string& path);

void serialize_conllu(const Corpus& corpus, std::ostream& out);
std::string to_conllu(const Corpus& corpus);

// Loads the three split files and tags the corpora train/valid/test.
std::array<Corpus, 3> load_split(const std::string& train_path,
                                 const std::string& valid_path,
                                 const std::string& test_path);

// Deterministic contiguous split of one corpus by the given fractions.
std::array<Corpus, 3> split_corpus(const Corpus& corpus,
                                   const std::array<double, 3>& fractions);

// Description of a planted word-order regularity: within the named relation,
// the dependent precedes its head iff it carries attribute=value, with the
// stated orders forced on each side.
struct PlantedRule {
  std::string relation = "adjective-noun";  // adjective-noun | subject-verb
  std::string attribute = "NumType";
  std::string value = "Ord";
  std::string order_if_value = "before";
  std::string order_otherwise = "after";
};

// Builds a corpus where every sentence contains exactly one pair of the
// planted relation and its order follows the rule exactly. Pure function of
// (rule, n_sentences, seed).
Corpus generate_synthetic(const PlantedRule& rule, std::size_t n_sentences,
                          std::uint64_t seed);

}  // namespace treegram
