#include "treegram/treebank.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>

#include "treegram/rng.hpp"

namespace treegram {

namespace {

std::optional<int> parse_int(const std::string& s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  int value = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

std::string field(const std::string& raw) {
  return raw == "_" ? std::string() : raw;
}

std::map<std::string, std::string> parse_feats(const std::string& raw,
                                               std::size_t line_no) {
  std::map<std::string, std::string> morph;
  if (raw.empty() || raw == "_") return morph;
  std::size_t start = 0;
  while (start <= raw.size()) {
    std::size_t bar = raw.find('|', start);
    std::string item = raw.substr(
        start, bar == std::string::npos ? std::string::npos : bar - start);
    std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw ParseError(line_no, "malformed morphological feature '" + item +
                                    "' (expected Attr=Val)");
    }
    morph[item.substr(0, eq)] = item.substr(eq + 1);
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return morph;
}

struct PendingSentence {
  Sentence sentence;
  std::vector<std::size_t> token_lines;
  std::size_t first_line = 0;

  bool empty() const { return sentence.tokens.empty(); }
};

void finalize(PendingSentence& pending, Corpus& corpus) {
  if (pending.empty()) {
    pending = PendingSentence{};
    return;
  }
  const int n = pending.sentence.size();
  bool has_root = false;
  for (int i = 0; i < n; ++i) {
    const Token& tok = pending.sentence.tokens[static_cast<std::size_t>(i)];
    const std::size_t line = pending.token_lines[static_cast<std::size_t>(i)];
    if (tok.head > n) {
      throw ParseError(line, "head " + std::to_string(tok.head) +
                                 " out of range in a " + std::to_string(n) +
                                 "-token sentence");
    }
    if (tok.head == tok.id) {
      throw ParseError(line, "token is its own head");
    }
    has_root = has_root || tok.head == 0;
  }
  if (!has_root) {
    throw ParseError(pending.first_line, "sentence has no root token");
  }
  corpus.sentences.push_back(std::move(pending.sentence));
  pending = PendingSentence{};
}

}  // namespace

std::vector<int> Sentence::children(int id) const {
  std::vector<int> out;
  for (const Token& tok : tokens) {
    if (tok.head == id && tok.id != id) out.push_back(tok.id);
  }
  return out;
}

const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
  }
  return "train";
}

Corpus parse_conllu(std::istream& in) {
  Corpus corpus;
  PendingSentence pending;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      finalize(pending, corpus);
      continue;
    }
    if (line[0] == '#') {
      std::size_t eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        key.erase(0, key.find_first_not_of(' '));
        key.erase(key.find_last_not_of(' ') + 1);
        if (key == "text") {
          std::string value = line.substr(eq + 1);
          value.erase(0, value.find_first_not_of(' '));
          pending.sentence.text = value;
        }
      }
      continue;
    }
    std::vector<std::string> cols = split_tabs(line);
    if (cols.size() != 10) {
      throw ParseError(line_no, "expected 10 tab-separated columns, got " +
                                    std::to_string(cols.size()));
    }
    // Multiword-token ranges ("1-2") and empty nodes ("1.1") carry no
    // syntactic-word annotation; only basic rows are kept.
    if (cols[0].find('-') != std::string::npos) continue;
    if (cols[0].find('.') != std::string::npos) continue;

    Token tok;
    std::optional<int> id = parse_int(cols[0]);
    if (!id || *id < 1) {
      throw ParseError(line_no, "non-integer token id '" + cols[0] + "'");
    }
    tok.id = *id;
    if (pending.empty()) pending.first_line = line_no;
    if (tok.id != pending.sentence.size() + 1) {
      throw ParseError(line_no, "token ids must be consecutive from 1, got " +
                                    cols[0]);
    }
    tok.form = field(cols[1]);
    tok.lemma = field(cols[2]);
    tok.upos = field(cols[3]);
    tok.morph = parse_feats(cols[5], line_no);
    std::optional<int> head = parse_int(cols[6]);
    if (!head) {
      throw ParseError(line_no, "non-integer head '" + cols[6] + "'");
    }
    tok.head = *head;
    tok.deprel = field(cols[7]);
    pending.sentence.tokens.push_back(std::move(tok));
    pending.token_lines.push_back(line_no);
  }
  finalize(pending, corpus);
  return corpus;
}

Corpus parse_conllu(const std::string& text) {
  std::istringstream in(text);
  return parse_conllu(in);
}

Corpus parse_conllu_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open treebank file: " + path);
  }
  return parse_conllu(in);
}

void serialize_conllu(const Corpus& corpus, std::ostream& out) {
  for (const Sentence& sentence : corpus.sentences) {
    if (!sentence.text.empty()) {
      out << "# text = " << sentence.text << "\n";
    }
    for (const Token& tok : sentence.tokens) {
      out << tok.id << '\t' << (tok.form.empty() ? "_" : tok.form) << '\t'
          << (tok.lemma.empty() ? "_" : tok.lemma) << '\t'
          << (tok.upos.empty() ? "_" : tok.upos) << '\t' << '_' << '\t';
      if (tok.morph.empty()) {
        out << '_';
      } else {
        bool first = true;
        for (const auto& [attr, value] : tok.morph) {
          if (!first) out << '|';
          out << attr << '=' << value;
          first = false;
        }
      }
      out << '\t' << tok.head << '\t'
          << (tok.deprel.empty() ? "_" : tok.deprel) << '\t' << '_' << '\t'
          << '_' << "\n";
    }
    out << "\n";
  }
}

std::string to_conllu(const Corpus& corpus) {
  std::ostringstream out;
  serialize_conllu(corpus, out);
  return out.str();
}

std::array<Corpus, 3> load_split(const std::string& train_path,
                                 const std::string& valid_path,
                                 const std::string& test_path) {
  std::array<Corpus, 3> corpora{parse_conllu_file(train_path),
                                parse_conllu_file(valid_path),
                                parse_conllu_file(test_path)};
  corpora[0].split = Split::train;
  corpora[1].split = Split::valid;
  corpora[2].split = Split::test;
  return corpora;
}

std::array<Corpus, 3> split_corpus(const Corpus& corpus,
                                   const std::array<double, 3>& fractions) {
  const std::size_t n = corpus.sentences.size();
  std::size_t n_train = static_cast<std::size_t>(
      static_cast<double>(n) * fractions[0]);
  std::size_t n_valid = static_cast<std::size_t>(
      static_cast<double>(n) * fractions[1]);
  n_train = std::min(n_train, n);
  n_valid = std::min(n_valid, n - n_train);

  std::array<Corpus, 3> out;
  for (auto& part : out) {
    part.language = corpus.language;
    part.treebank_id = corpus.treebank_id;
  }
  out[0].split = Split::train;
  out[1].split = Split::valid;
  out[2].split = Split::test;
  out[0].sentences.assign(corpus.sentences.begin(),
                          corpus.sentences.begin() + static_cast<long>(n_train));
  out[1].sentences.assign(
      corpus.sentences.begin() + static_cast<long>(n_train),
      corpus.sentences.begin() + static_cast<long>(n_train + n_valid));
  out[2].sentences.assign(
      corpus.sentences.begin() + static_cast<long>(n_train + n_valid),
      corpus.sentences.end());
  return out;
}

namespace {

const std::vector<std::string> kMarkedAdjLemmas = {
    "primero", "segundo", "tercero", "cuarto",
    "quinto",  "sexto",   "octavo",  "noveno"};
const std::vector<std::string> kPlainAdjLemmas = {
    "grande", "nuevo",    "pequeño", "rojo",  "blanco",
    "solemne", "numeroso", "bueno",  "fuerte", "claro"};
const std::vector<std::string> kNounLemmas = {
    "libro", "casa",  "unión", "lengua", "hora", "grabación",
    "ciudad", "perro", "flor",  "mesa",   "niña", "país"};
const std::vector<std::string> kVerbLemmas = {"comprar", "ver", "tener",
                                              "leer", "abrir"};
const std::vector<std::string> kAdvLemmas = {"muy", "hoy", "bien"};
const std::vector<std::string> kMarkedNounLemmas = {
    "quién", "qué", "cuál", "dónde", "algo", "nadie"};

Token make_token(std::string form, std::string lemma, std::string upos,
                 std::string deprel) {
  Token tok;
  tok.form = std::move(form);
  tok.lemma = std::move(lemma);
  tok.upos = std::move(upos);
  tok.deprel = std::move(deprel);
  return tok;
}

// One sentence around a single (dependent, head) pair of the planted
// relation; pair order is forced by the rule, everything else is noise.
Sentence plant_sentence(const PlantedRule& rule, bool subject_verb, Rng& rng) {
  bool marked = rng.chance(0.5);
  const std::string& order =
      marked ? rule.order_if_value : rule.order_otherwise;
  bool dep_first = order == "before";

  Token dep;
  Token head;
  if (subject_verb) {
    const std::string& lemma =
        marked ? rng.pick(kMarkedNounLemmas) : rng.pick(kNounLemmas);
    dep = make_token(lemma, lemma, "NOUN", "subj");
    const std::string& verb = rng.pick(kVerbLemmas);
    head = make_token(verb, verb, "VERB", "root");
  } else {
    const std::string& lemma =
        marked ? rng.pick(kMarkedAdjLemmas) : rng.pick(kPlainAdjLemmas);
    dep = make_token(lemma, lemma, "ADJ", "mod");
    const std::string& noun = rng.pick(kNounLemmas);
    bool plural = rng.chance(0.5);
    head = make_token(plural ? noun + "s" : noun, noun, "NOUN", "root");
    head.morph["Number"] = plural ? "Plur" : "Sing";
    dep.morph["Gender"] = rng.chance(0.5) ? "Masc" : "Fem";
  }
  if (marked) dep.morph[rule.attribute] = rule.value;

  // Layout: the pair block, then an optional verb clause above the head
  // noun, then an optional adverb under the verb.
  int layout = subject_verb ? rng.range(0, 1) : rng.range(0, 2);
  std::vector<Token> tokens;
  tokens.push_back(dep_first ? dep : head);
  tokens.push_back(dep_first ? head : dep);
  int dep_pos = dep_first ? 1 : 2;
  int head_pos = dep_first ? 2 : 1;

  int verb_pos = 0;
  if (!subject_verb && layout >= 1) {
    const std::string& verb = rng.pick(kVerbLemmas);
    tokens.push_back(make_token(verb, verb, "VERB", "root"));
    verb_pos = static_cast<int>(tokens.size());
  }
  if (layout >= 2 || (subject_verb && layout >= 1)) {
    const std::string& adv = rng.pick(kAdvLemmas);
    tokens.push_back(make_token(adv, adv, "ADV", "mod"));
  }

  Sentence sentence;
  sentence.tokens = std::move(tokens);
  for (int i = 0; i < sentence.size(); ++i) {
    sentence.tokens[static_cast<std::size_t>(i)].id = i + 1;
  }
  Token& dep_tok = sentence.tokens[static_cast<std::size_t>(dep_pos - 1)];
  Token& head_tok = sentence.tokens[static_cast<std::size_t>(head_pos - 1)];
  dep_tok.head = head_pos;
  if (subject_verb) {
    head_tok.head = 0;
    if (sentence.size() > 2) sentence.tokens.back().head = head_pos;
  } else if (verb_pos > 0) {
    head_tok.head = verb_pos;
    head_tok.deprel = "subj";
    if (sentence.size() > 3) sentence.tokens.back().head = verb_pos;
  } else {
    head_tok.head = 0;
  }

  std::string text;
  for (const Token& tok : sentence.tokens) {
    if (!text.empty()) text += ' ';
    text += tok.form;
  }
  sentence.text = std::move(text);
  return sentence;
}

}  // namespace

Corpus generate_synthetic(const PlantedRule& rule, std::size_t n_sentences,
                          std::uint64_t seed) {
  bool subject_verb = rule.relation == "subject-verb";
  if (!subject_verb && rule.relation != "adjective-noun") {
    throw ConfigError("unsupported planted relation: " + rule.relation);
  }
  if ((rule.order_if_value != "before" && rule.order_if_value != "after") ||
      (rule.order_otherwise != "before" && rule.order_otherwise != "after")) {
    throw ConfigError("planted orders must be 'before' or 'after'");
  }
  if (rule.attribute.empty() || rule.value.empty()) {
    throw ConfigError("planted rule needs a controlling attribute and value");
  }

  Rng rng(seed);
  Corpus corpus;
  corpus.language = "und";
  corpus.treebank_id = "synthetic";
  corpus.sentences.reserve(n_sentences);
  for (std::size_t i = 0; i < n_sentences; ++i) {
    corpus.sentences.push_back(plant_sentence(rule, subject_verb, rng));
  }
  return corpus;
}

}  // namespace treegram
