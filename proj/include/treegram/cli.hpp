#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treegram/dtree.hpp"
#include "treegram/featurize.hpp"
#include "treegram/taskgen.hpp"
#include "treegram/treebank.hpp"

namespace treegram::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitEmptyData = 3;

struct TreebankConfig {
  std::string id = "treebank";
  std::string language = "und";
  // Either explicit split files...
  std::string train;
  std::string valid;
  std::string test;
  // ...or one file split deterministically by these fractions.
  std::string path;
  std::array<double, 3> split_ratios{0.8, 0.1, 0.1};
};

struct ExtractConfig {
  TreebankConfig treebank;
  TaskKind task = TaskKind::word_order;
  std::string key;  // defaulted per task when empty
  FeatureFlags features{true, false, false};
  std::string lexicon_path;
  std::size_t lexicon_top_k = 5;
  std::vector<TrainParams> grid;  // empty = full default grid
  int min_leaf = 1;
  double alpha = 0.01;
  double tau = 0.9;
  std::uint64_t seed = 0;
  std::size_t examples_per_rule = 10;
  int max_focus_children = 3;
  std::vector<RelationSpec> relations;  // overrides for word-order keys
  std::string output_dir = "out";
  std::string format = "all";  // json | md | html | all
};

struct CrossEvalConfig {
  std::vector<TreebankConfig> treebanks;  // test-only entries allowed
  TaskKind task = TaskKind::word_order;
  std::string key;
  FeatureFlags features{true, false, false};
  std::string lexicon_path;
  std::size_t lexicon_top_k = 5;
  std::vector<TrainParams> grid;
  int min_leaf = 1;
  std::uint64_t seed = 0;
  int max_focus_children = 3;
  std::vector<RelationSpec> relations;
  std::string output_path;  // defaults to <output_dir>/cross_eval.json
  std::string output_dir = "out";
};

struct SynthConfig {
  PlantedRule rule;
  std::size_t n_sentences = 100;
  std::uint64_t seed = 0;
  std::string out;
  std::string language = "und";
  std::string treebank_id = "synthetic";
};

// Flag-level overrides applied on top of a config file.
struct Overrides {
  std::optional<std::string> task;
  std::optional<std::string> key;
  std::optional<std::string> features;  // comma list: syn,lex,sem
  std::optional<std::string> lexicon;
  std::optional<double> alpha;
  std::optional<double> tau;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

// Throw ConfigError on unreadable files, bad JSON, or invalid values.
ExtractConfig load_extract_config(const std::string& path);
CrossEvalConfig load_cross_eval_config(const std::string& path);
void apply_overrides(ExtractConfig& config, const Overrides& overrides);
void apply_overrides(CrossEvalConfig& config, const Overrides& overrides);

// Each command catches its own errors, reports to stderr, and returns the
// process exit code: 0 ok, 2 configuration error, 3 empty data, 1 internal.
int run_extract(const ExtractConfig& config);
int run_cross_eval(const CrossEvalConfig& config);
int run_synth(const SynthConfig& config);

// Full argv interface (used by the binary and by tests).
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace treegram::cli
