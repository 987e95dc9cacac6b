#include "treegram/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "treegram/errors.hpp"
#include "treegram/eval.hpp"
#include "treegram/report.hpp"
#include "treegram/ruleset.hpp"

namespace treegram::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file: " + path);
  }
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw ConfigError("invalid JSON in config file: " + path);
  }
  return j;
}

FeatureFlags parse_features(const std::string& spec) {
  FeatureFlags flags;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "syn" || item == "syntactic") {
      flags.syntactic = true;
    } else if (item == "lex" || item == "lexical") {
      flags.lexical = true;
    } else if (item == "sem" || item == "semantic") {
      flags.semantic = true;
    } else {
      throw ConfigError("unknown feature family '" + item +
                        "' (expected syn, lex, or sem)");
    }
  }
  return flags;
}

FeatureFlags features_from_json(const Json& j) {
  if (j.is_string()) return parse_features(j.get<std::string>());
  if (!j.is_array()) {
    throw ConfigError("'features' must be an array or comma list");
  }
  std::string joined;
  for (const Json& item : j) {
    if (!joined.empty()) joined += ',';
    joined += item.get<std::string>();
  }
  return parse_features(joined);
}

// Cross-eval allows sibling entries that carry only a test file.
TreebankConfig treebank_from_json(const Json& j, bool allow_test_only = false) {
  if (!j.is_object()) {
    throw ConfigError("'treebank' must be an object");
  }
  TreebankConfig tb;
  tb.id = j.value("id", tb.id);
  tb.language = j.value("language", tb.language);
  tb.train = j.value("train", "");
  tb.valid = j.value("valid", "");
  tb.test = j.value("test", "");
  tb.path = j.value("path", "");
  if (j.contains("split_ratios")) {
    auto ratios = j.at("split_ratios").get<std::vector<double>>();
    if (ratios.size() != 3) {
      throw ConfigError("'split_ratios' must have exactly 3 entries");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (ratios[i] < 0.0) throw ConfigError("split ratios must be >= 0");
      tb.split_ratios[i] = ratios[i];
      sum += ratios[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ConfigError("split ratios must sum to 1");
    }
  }
  bool explicit_paths = !tb.train.empty() || !tb.valid.empty() ||
                        !tb.test.empty();
  if (tb.path.empty() && !explicit_paths) {
    throw ConfigError("config missing treebank path "
                      "(need 'path' or 'train'/'valid'/'test')");
  }
  if (tb.path.empty() &&
      (tb.train.empty() || tb.valid.empty() || tb.test.empty())) {
    throw ConfigError("explicit treebank splits need all of "
                      "'train', 'valid', and 'test'");
  }
  return tb;
}

RelationSpec relation_from_json(const Json& j) {
  RelationSpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.wals_code = j.value("wals", "");
  if (j.contains("dep_upos")) {
    spec.dep_upos = j.at("dep_upos").get<std::vector<std::string>>();
  }
  spec.deprel = j.value("deprel", "");
  std::string match = j.value("deprel_match", "exact");
  if (match == "contains") {
    spec.deprel_match = RelationSpec::DeprelMatch::contains;
  } else if (match == "exact") {
    spec.deprel_match = RelationSpec::DeprelMatch::exact;
  } else {
    throw ConfigError("deprel_match must be 'exact' or 'contains'");
  }
  if (j.contains("head_upos")) {
    spec.head_upos = j.at("head_upos").get<std::vector<std::string>>();
  }
  std::string orient = j.value("orientation", "dep");
  if (orient == "dep") {
    spec.orientation = RelationSpec::Orientation::dep;
  } else if (orient == "head") {
    spec.orientation = RelationSpec::Orientation::head;
  } else {
    throw ConfigError("orientation must be 'dep' or 'head'");
  }
  return spec;
}

std::vector<TrainParams> grid_from_json(const Json& j, int min_leaf) {
  std::vector<int> depths;
  std::vector<TrainParams::Criterion> criteria;
  if (j.contains("max_depths")) {
    depths = j.at("max_depths").get<std::vector<int>>();
  }
  if (j.contains("criteria")) {
    for (const Json& c : j.at("criteria")) {
      criteria.push_back(criterion_from_name(c.get<std::string>()));
    }
  }
  if (depths.empty() || criteria.empty()) {
    throw ConfigError("'grid' needs non-empty 'criteria' and 'max_depths'");
  }
  std::vector<TrainParams> grid;
  for (int depth : depths) {
    if (depth < 1) throw ConfigError("grid max_depth must be >= 1");
    for (auto criterion : criteria) {
      grid.push_back({criterion, depth, min_leaf});
    }
  }
  return grid;
}

void shared_fields_from_json(const Json& j, TaskKind& task, std::string& key,
                             FeatureFlags& features, std::string& lexicon_path,
                             std::size_t& lexicon_top_k, int& min_leaf,
                             std::vector<TrainParams>& grid,
                             std::uint64_t& seed, int& max_children,
                             std::vector<RelationSpec>& relations) {
  if (j.contains("task")) {
    task = task_from_name(j.at("task").get<std::string>());
  }
  key = j.value("key", "");
  if (j.contains("features")) features = features_from_json(j.at("features"));
  if (j.contains("lexicon")) {
    const Json& lex = j.at("lexicon");
    if (lex.is_string()) {
      lexicon_path = lex.get<std::string>();
    } else {
      lexicon_path = lex.value("path", "");
      lexicon_top_k = lex.value("top_k", lexicon_top_k);
    }
  }
  min_leaf = j.value("min_leaf", min_leaf);
  if (min_leaf < 1) throw ConfigError("min_leaf must be >= 1");
  if (j.contains("grid")) grid = grid_from_json(j.at("grid"), min_leaf);
  seed = j.value("seed", seed);
  max_children = j.value("max_focus_children", max_children);
  if (max_children < 0) {
    throw ConfigError("max_focus_children must be >= 0");
  }
  if (j.contains("relations")) {
    for (const Json& rj : j.at("relations")) {
      relations.push_back(relation_from_json(rj));
    }
  }
}

std::string default_key(TaskKind task) {
  switch (task) {
    case TaskKind::word_order: return "adjective-noun";
    case TaskKind::case_marking: return "NOUN";
    case TaskKind::agreement: return "Number";
  }
  return "adjective-noun";
}

void require_readable(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) {
    throw ConfigError("treebank file not found: " + path);
  }
}

std::array<Corpus, 3> load_treebank(const TreebankConfig& tb) {
  std::array<Corpus, 3> corpora;
  if (!tb.path.empty()) {
    require_readable(tb.path);
    Corpus whole = parse_conllu_file(tb.path);
    corpora = split_corpus(whole, tb.split_ratios);
  } else {
    require_readable(tb.train);
    require_readable(tb.valid);
    require_readable(tb.test);
    corpora = load_split(tb.train, tb.valid, tb.test);
  }
  for (Corpus& corpus : corpora) {
    corpus.language = tb.language;
    corpus.treebank_id = tb.id;
  }
  return corpora;
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write output file: " + path.string());
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

int guard(const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const EmptyDataError& e) {
    std::cerr << "empty data: " << e.what() << "\n";
    return kExitEmptyData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}

struct TrainedModel {
  Dataset train_dataset;
  FeatureMatrix matrix;
  GridResult fit;
  SparseLexicon lexicon;
  bool has_lexicon = false;
};

// Shared train path for extract and cross-eval: dataset, features, grid.
TrainedModel train_model(const Corpus& train_corpus,
                         const Corpus& valid_corpus, const TaskQuery& query,
                         const FeatureFlags& features,
                         const std::string& lexicon_path,
                         std::size_t lexicon_top_k,
                         const std::vector<TrainParams>& grid,
                         int max_children) {
  TrainedModel model;
  if (features.semantic) {
    if (lexicon_path.empty()) {
      throw ConfigError(
          "semantic features require a lexicon path "
          "(set 'lexicon' in the config or pass --lexicon)");
    }
    require_readable(lexicon_path);
    model.lexicon = load_sparse_lexicon(lexicon_path, lexicon_top_k);
    model.has_lexicon = true;
  }
  const SparseLexicon* lexicon = model.has_lexicon ? &model.lexicon : nullptr;

  model.train_dataset = extract_task(train_corpus, query);
  if (model.train_dataset.instances.empty()) {
    throw EmptyDataError("no training instances for task " +
                         std::string(task_name(query.task)) + "/" + query.key);
  }
  model.matrix = build_matrix(model.train_dataset, train_corpus, features,
                              lexicon, max_children);

  Dataset valid_dataset = extract_task(valid_corpus, query);
  if (valid_dataset.instances.empty()) {
    throw EmptyDataError("no validation instances for task " +
                         std::string(task_name(query.task)) + "/" + query.key);
  }
  std::vector<FeatureVector> valid_rows =
      vectorize(valid_dataset, valid_corpus, model.matrix.space, features,
                lexicon, max_children);
  std::vector<int> valid_labels =
      map_labels(valid_dataset, model.train_dataset.labels);

  TrainData data{&model.matrix.space, &model.matrix.rows, &model.matrix.labels,
                 model.train_dataset.labels};
  model.fit = grid_search(data, valid_rows, valid_labels,
                          grid.empty() ? default_grid() : grid);
  return model;
}

}  // namespace

ExtractConfig load_extract_config(const std::string& path) {
  Json j = read_json(path);
  ExtractConfig config;
  if (!j.contains("treebank")) {
    throw ConfigError("config missing treebank path ('treebank' object)");
  }
  config.treebank = treebank_from_json(j.at("treebank"));
  shared_fields_from_json(j, config.task, config.key, config.features,
                          config.lexicon_path, config.lexicon_top_k,
                          config.min_leaf, config.grid, config.seed,
                          config.max_focus_children, config.relations);
  config.alpha = j.value("alpha", config.alpha);
  config.tau = j.value("tau", config.tau);
  config.examples_per_rule =
      j.value("examples_per_rule", config.examples_per_rule);
  config.output_dir = j.value("output_dir", config.output_dir);
  config.format = j.value("format", config.format);
  return config;
}

CrossEvalConfig load_cross_eval_config(const std::string& path) {
  Json j = read_json(path);
  CrossEvalConfig config;
  if (!j.contains("treebanks") || !j.at("treebanks").is_array()) {
    throw ConfigError("cross-eval config needs a 'treebanks' array");
  }
  for (const Json& tj : j.at("treebanks")) {
    config.treebanks.push_back(treebank_from_json(tj));
  }
  shared_fields_from_json(j, config.task, config.key, config.features,
                          config.lexicon_path, config.lexicon_top_k,
                          config.min_leaf, config.grid, config.seed,
                          config.max_focus_children, config.relations);
  config.output_dir = j.value("output_dir", config.output_dir);
  config.output_path = j.value("output", "");
  return config;
}

void apply_overrides(ExtractConfig& config, const Overrides& overrides) {
  if (overrides.task) config.task = task_from_name(*overrides.task);
  if (overrides.key) config.key = *overrides.key;
  if (overrides.features) {
    config.features = parse_features(*overrides.features);
  }
  if (overrides.lexicon) config.lexicon_path = *overrides.lexicon;
  if (overrides.alpha) config.alpha = *overrides.alpha;
  if (overrides.tau) config.tau = *overrides.tau;
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.out) config.output_dir = *overrides.out;
  if (overrides.format) config.format = *overrides.format;
}

void apply_overrides(CrossEvalConfig& config, const Overrides& overrides) {
  if (overrides.task) config.task = task_from_name(*overrides.task);
  if (overrides.key) config.key = *overrides.key;
  if (overrides.features) {
    config.features = parse_features(*overrides.features);
  }
  if (overrides.lexicon) config.lexicon_path = *overrides.lexicon;
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.out) config.output_dir = *overrides.out;
}

int run_extract(const ExtractConfig& config) {
  return guard([&] {
    if (config.format != "json" && config.format != "md" &&
        config.format != "html" && config.format != "all") {
      throw ConfigError("format must be json, md, html, or all");
    }
    if (!(config.alpha >= 0.0) || config.alpha > 1.0) {
      throw ConfigError("alpha must be in [0, 1]");
    }
    std::string key =
        config.key.empty() ? default_key(config.task) : config.key;
    TaskQuery query = make_task_query(config.task, key, config.relations);

    std::array<Corpus, 3> corpora = load_treebank(config.treebank);
    TrainedModel model = train_model(
        corpora[0], corpora[1], query, config.features, config.lexicon_path,
        config.lexicon_top_k, config.grid, config.max_focus_children);
    const SparseLexicon* lexicon =
        model.has_lexicon ? &model.lexicon : nullptr;

    DecisionTree& tree = model.fit.tree;
    NullDistribution null = null_distribution(model.train_dataset, corpora[0]);
    label_leaves(tree, null, config.alpha);

    std::vector<Rule> rules = extract_rules(tree, model.matrix.space);
    attach_examples(rules, tree, model.matrix.rows, model.train_dataset,
                    corpora[0], config.seed, config.examples_per_rule);

    Dataset test_dataset = extract_task(corpora[2], query);
    if (test_dataset.instances.empty()) {
      throw EmptyDataError("no test instances for task " +
                           std::string(task_name(query.task)) + "/" + key);
    }
    std::vector<FeatureVector> test_rows =
        vectorize(test_dataset, corpora[2], model.matrix.space,
                  config.features, lexicon, config.max_focus_children);
    std::vector<int> test_labels =
        map_labels(test_dataset, model.train_dataset.labels);

    EvalReport eval;
    eval.task = config.task;
    eval.task_key = key;
    eval.baseline_label = frequency_baseline(model.train_dataset);
    eval.baseline_accuracy = baseline_accuracy(eval.baseline_label,
                                               test_dataset);
    eval.model_accuracy = accuracy(tree, test_rows, test_labels);
    eval.gain = eval.model_accuracy - eval.baseline_accuracy;
    eval.n_test = test_dataset.instances.size();
    eval.chosen = model.fit.params;
    eval.valid_accuracy = model.fit.valid_accuracy;
    if (config.task == TaskKind::word_order) {
      eval.entropy = prediction_entropy(tree, test_rows, config.task);
    }
    if (config.task == TaskKind::agreement) {
      eval.arm = arm(tree, test_rows, config.tau, config.task);
    }

    RunMeta meta;
    meta.task = config.task;
    meta.task_key = key;
    meta.language = config.treebank.language;
    meta.treebank_id = config.treebank.id;
    meta.features = config.features;
    meta.alpha = config.alpha;
    meta.tau = config.tau;
    meta.seed = config.seed;
    meta.params = model.fit.params;

    fs::path out_dir(config.output_dir);
    fs::create_directories(out_dir);
    bool json = config.format == "json" || config.format == "all";
    bool md = config.format == "md" || config.format == "all";
    bool html = config.format == "html" || config.format == "all";
    if (json) {
      write_file(out_dir / "tree.json",
                 tree_to_json(tree, model.matrix.space));
      write_file(out_dir / "rules.json",
                 emit_json(rules, eval, meta, tree.label_order, corpora[0]));
      write_file(out_dir / "eval.json", eval_to_json(eval, meta));
    }
    if (md) {
      write_file(out_dir / "rules.md", emit_markdown(rules, eval, meta,
                                                     tree.label_order,
                                                     corpora[0]));
    }
    if (html) {
      write_file(out_dir / "rules.html",
                 emit_html(rules, eval, meta, tree.label_order, corpora[0]));
    }

    std::size_t significant = 0;
    for (const Rule& rule : rules) significant += rule.significant ? 1 : 0;
    std::cout << task_name(config.task) << "/" << key << ": accuracy "
              << eval.model_accuracy << " (baseline "
              << eval.baseline_accuracy << "), " << significant << "/"
              << rules.size() << " significant rules -> "
              << out_dir.string() << "\n";
  });
}

int run_cross_eval(const CrossEvalConfig& config) {
  return guard([&] {
    if (config.treebanks.size() < 2) {
      throw ConfigError("cross-eval needs at least 2 treebanks");
    }
    std::string key =
        config.key.empty() ? default_key(config.task) : config.key;
    TaskQuery query = make_task_query(config.task, key, config.relations);

    struct LoadedTreebank {
      TreebankConfig cfg;
      std::array<Corpus, 3> corpora;
      bool trainable = false;
    };
    std::vector<LoadedTreebank> banks;
    for (const TreebankConfig& tb : config.treebanks) {
      LoadedTreebank loaded;
      loaded.cfg = tb;
      if (!tb.path.empty() || (!tb.train.empty() && !tb.valid.empty())) {
        loaded.corpora = load_treebank(tb);
        loaded.trainable = true;
      } else {
        // test-only sibling
        if (tb.test.empty()) {
          throw ConfigError("treebank '" + tb.id +
                            "' has neither training nor test data");
        }
        require_readable(tb.test);
        loaded.corpora[2] = parse_conllu_file(tb.test);
        loaded.corpora[2].split = Split::test;
        loaded.corpora[2].language = tb.language;
        loaded.corpora[2].treebank_id = tb.id;
      }
      banks.push_back(std::move(loaded));
    }

    std::vector<const Corpus*> tests;
    std::vector<std::string> ids;
    for (const LoadedTreebank& bank : banks) {
      tests.push_back(&bank.corpora[2]);
      ids.push_back(bank.cfg.id);
    }

    Json matrix;
    matrix["schema"] = "treegram-crosseval/1";
    matrix["task"] = task_name(config.task);
    matrix["key"] = key;
    Json rows = Json::array();
    bool any_model = false;
    for (const LoadedTreebank& bank : banks) {
      if (!bank.trainable) continue;
      any_model = true;
      TrainedModel model = train_model(
          bank.corpora[0], bank.corpora[1], query, config.features,
          config.lexicon_path, config.lexicon_top_k, config.grid,
          config.max_focus_children);
      const SparseLexicon* lexicon =
          model.has_lexicon ? &model.lexicon : nullptr;
      std::vector<CrossEvalCell> cells = cross_eval(
          model.fit.tree, model.matrix.space, config.features, query, tests,
          ids, lexicon, config.max_focus_children);
      Json row;
      row["model"] = bank.cfg.id;
      row["chosen_params"] =
          Json{{"criterion", criterion_name(model.fit.params.criterion)},
               {"max_depth", model.fit.params.max_depth},
               {"min_leaf", model.fit.params.min_leaf}};
      Json cell_array = Json::array();
      for (const CrossEvalCell& cell : cells) {
        Json cj;
        cj["treebank"] = cell.treebank_id;
        cj["n_instances"] = cell.n_instances;
        if (cell.accuracy) cj["accuracy"] = *cell.accuracy;
        cell_array.push_back(std::move(cj));
      }
      row["cells"] = std::move(cell_array);
      rows.push_back(std::move(row));
    }
    if (!any_model) {
      throw ConfigError("no treebank provides training data");
    }
    matrix["rows"] = std::move(rows);

    fs::path out =
        config.output_path.empty()
            ? fs::path(config.output_dir) / "cross_eval.json"
            : fs::path(config.output_path);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_file(out, matrix.dump(2) + "\n");
    std::cout << "cross-eval matrix -> " << out.string() << "\n";
  });
}

int run_synth(const SynthConfig& config) {
  return guard([&] {
    if (config.out.empty()) {
      throw ConfigError("synth needs an output path (--out)");
    }
    Corpus corpus =
        generate_synthetic(config.rule, config.n_sentences, config.seed);
    corpus.language = config.language;
    corpus.treebank_id = config.treebank_id;
    fs::path out(config.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_file(out, to_conllu(corpus));
    std::cout << "wrote " << corpus.sentences.size() << " sentences -> "
              << out.string() << "\n";
  });
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("treegram");
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Induces human-readable grammar rules (word order, case, "
               "agreement) from dependency treebanks"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;
  std::string task_flag;
  std::string key_flag;
  std::string features_flag;
  std::string lexicon_flag;
  std::string out_flag;
  std::string format_flag;
  double alpha_flag = -1.0;
  double tau_flag = -1.0;
  std::int64_t seed_flag = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON configuration file")
        ->required();
    cmd->add_option("--task", task_flag,
                    "Override task: word-order | case | agreement");
    cmd->add_option("--key", key_flag,
                    "Override task key (relation / POS tag / attribute)");
    cmd->add_option("--features", features_flag,
                    "Override feature families, comma list of syn,lex,sem");
    cmd->add_option("--lexicon", lexicon_flag, "Sparse lexicon file");
    cmd->add_option("--seed", seed_flag, "Override random seed");
    cmd->add_option("--out", out_flag, "Override output directory");
  };

  CLI::App* extract =
      app.add_subcommand("extract", "Train a tree and extract rules");
  add_common(extract);
  extract->add_option("--alpha", alpha_flag, "Leaf significance level");
  extract->add_option("--tau", tau_flag, "ARM required-agreement threshold");
  extract->add_option("--format", format_flag,
                      "Outputs to write: json | md | html | all");

  CLI::App* cross = app.add_subcommand(
      "cross-eval", "Apply trained models across sibling treebanks");
  add_common(cross);

  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a planted-rule synthetic treebank");
  SynthConfig synth_config;
  std::string attribute_flag = "NumType=Ord";
  synth->add_option("--n", synth_config.n_sentences, "Number of sentences");
  synth->add_option("--seed", synth_config.seed, "Random seed");
  synth->add_option("--out", synth_config.out, "Output CoNLL-U path")
      ->required();
  synth->add_option("--relation", synth_config.rule.relation,
                    "Planted relation: adjective-noun | subject-verb");
  synth->add_option("--attribute", attribute_flag,
                    "Controlling feature as Attr=Val");
  synth->add_option("--order-if", synth_config.rule.order_if_value,
                    "Order when the attribute is present");
  synth->add_option("--order-else", synth_config.rule.order_otherwise,
                    "Order otherwise");
  synth->add_option("--language", synth_config.language, "Language code");
  synth->add_option("--id", synth_config.treebank_id, "Treebank id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (!task_flag.empty()) overrides.task = task_flag;
  if (!key_flag.empty()) overrides.key = key_flag;
  if (!features_flag.empty()) overrides.features = features_flag;
  if (!lexicon_flag.empty()) overrides.lexicon = lexicon_flag;
  if (!out_flag.empty()) overrides.out = out_flag;
  if (!format_flag.empty()) overrides.format = format_flag;
  if (alpha_flag >= 0.0) overrides.alpha = alpha_flag;
  if (tau_flag >= 0.0) overrides.tau = tau_flag;
  if (seed_flag >= 0) {
    overrides.seed = static_cast<std::uint64_t>(seed_flag);
  }

  if (extract->parsed()) {
    ExtractConfig config;
    int rc = guard([&] {
      config = load_extract_config(config_path);
      apply_overrides(config, overrides);
    });
    if (rc != kExitOk) return rc;
    return run_extract(config);
  }
  if (cross->parsed()) {
    CrossEvalConfig config;
    int rc = guard([&] {
      config = load_cross_eval_config(config_path);
      apply_overrides(config, overrides);
    });
    if (rc != kExitOk) return rc;
    return run_cross_eval(config);
  }
  // synth
  std::size_t eq = attribute_flag.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == attribute_flag.size()) {
    std::cerr << "config error: --attribute must look like Attr=Val\n";
    return kExitConfig;
  }
  synth_config.rule.attribute = attribute_flag.substr(0, eq);
  synth_config.rule.value = attribute_flag.substr(eq + 1);
  return run_synth(synth_config);
}

}  // namespace treegram::cli
