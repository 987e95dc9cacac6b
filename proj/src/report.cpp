#include "treegram/report.hpp"

#include <cstdio>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "treegram/errors.hpp"

namespace treegram {

namespace {

using Json = nlohmann::ordered_json;

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

std::string compact(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

std::vector<std::string> feature_list(const FeatureFlags& flags) {
  std::vector<std::string> out;
  if (flags.syntactic) out.push_back("syntactic");
  if (flags.lexical) out.push_back("lexical");
  if (flags.semantic) out.push_back("semantic");
  return out;
}

Json params_json(const TrainParams& params) {
  return Json{{"criterion", criterion_name(params.criterion)},
              {"max_depth", params.max_depth},
              {"min_leaf", params.min_leaf}};
}

TrainParams params_from_json(const Json& j) {
  TrainParams params;
  params.criterion = criterion_from_name(j.at("criterion").get<std::string>());
  params.max_depth = j.at("max_depth").get<int>();
  params.min_leaf = j.at("min_leaf").get<int>();
  return params;
}

Json eval_json(const EvalReport& eval) {
  Json j;
  j["task"] = task_name(eval.task);
  j["key"] = eval.task_key;
  j["model_accuracy"] = eval.model_accuracy;
  j["baseline_accuracy"] = eval.baseline_accuracy;
  j["gain"] = eval.gain;
  j["baseline_label"] = eval.baseline_label;
  if (eval.entropy) j["entropy"] = *eval.entropy;
  if (eval.arm) j["arm"] = *eval.arm;
  j["n_test"] = eval.n_test;
  j["valid_accuracy"] = eval.valid_accuracy;
  j["chosen_params"] = params_json(eval.chosen);
  return j;
}

Json example_json(const ExampleRef& ref, const Corpus& corpus) {
  const Sentence& sentence = corpus.sentences[ref.sentence];
  Json j;
  j["sentence"] = ref.sentence;
  Json focus = Json::array();
  focus.push_back(ref.focus_a);
  if (ref.focus_b != 0) focus.push_back(ref.focus_b);
  j["focus"] = std::move(focus);
  std::string text = sentence.text;
  if (text.empty()) {
    for (const Token& tok : sentence.tokens) {
      if (!text.empty()) text += ' ';
      text += tok.form;
    }
  }
  j["text"] = text;
  Json tokens = Json::array();
  for (const Token& tok : sentence.tokens) tokens.push_back(tok.form);
  j["tokens"] = std::move(tokens);
  return j;
}

Json condition_json(const RuleCondition& cond) {
  Json j;
  j["feature"] = cond.feature;
  j["kind"] = cond.kind == SplitKind::presence ? "presence" : "threshold";
  j["passed"] = cond.passed;
  if (cond.kind == SplitKind::threshold) j["threshold"] = cond.threshold;
  return j;
}

Json rule_json(const Rule& rule, const Corpus& corpus) {
  Json j;
  j["leaf"] = rule.leaf;
  Json conds = Json::array();
  Json rendered = Json::array();
  for (const RuleCondition& cond : rule.conditions) {
    conds.push_back(condition_json(cond));
    rendered.push_back(cond.render());
  }
  j["conditions"] = std::move(conds);
  j["rendered"] = std::move(rendered);
  j["label"] = rule.label;
  j["significant"] = rule.significant;
  j["p_value"] = rule.p_value;
  j["support"] = rule.support;
  Json pos = Json::array();
  for (const ExampleRef& ref : rule.positives) {
    pos.push_back(example_json(ref, corpus));
  }
  j["positives"] = std::move(pos);
  Json neg = Json::array();
  for (const ExampleRef& ref : rule.negatives) {
    neg.push_back(example_json(ref, corpus));
  }
  j["negatives"] = std::move(neg);
  return j;
}

std::size_t count_significant(const std::vector<Rule>& rules) {
  std::size_t n = 0;
  for (const Rule& rule : rules) n += rule.significant ? 1 : 0;
  return n;
}

// Sentence with the focus words wrapped by the given markers.
std::string marked_sentence(
    const Sentence& sentence, int focus_a, int focus_b,
    const std::string& open_a, const std::string& close_a,
    const std::string& open_b, const std::string& close_b,
    const std::function<std::string(const std::string&)>& escape) {
  std::string out;
  for (const Token& tok : sentence.tokens) {
    if (!out.empty()) out += ' ';
    if (tok.id == focus_a) {
      out += open_a + escape(tok.form) + close_a;
    } else if (tok.id == focus_b) {
      out += open_b + escape(tok.form) + close_b;
    } else {
      out += escape(tok.form);
    }
  }
  return out;
}

std::string escape_html(const std::string& in) {
  std::string out;
  out.reserve(in.size());
  for (char c : in) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string identity(const std::string& in) { return in; }

std::string title_of(const RunMeta& meta) {
  std::string task;
  switch (meta.task) {
    case TaskKind::word_order: task = "Word order"; break;
    case TaskKind::case_marking: task = "Case marking"; break;
    case TaskKind::agreement: task = "Agreement"; break;
  }
  return task + " rules: " + meta.task_key;
}

std::string join(const std::vector<std::string>& items,
                 const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

void render_rule_markdown(std::ostream& out, const Rule& rule,
                          std::size_t index,
                          const std::vector<std::string>& label_order,
                          const Corpus& corpus) {
  out << "### Rule " << index << " — " << rule.label
      << " (p = " << compact(rule.p_value) << ")\n\n";
  out << "Support:";
  for (std::size_t i = 0; i < rule.support.size(); ++i) {
    out << (i ? ", " : " ") << label_order[i] << "=" << rule.support[i];
  }
  out << "\n\n";
  if (rule.conditions.empty()) {
    out << "Conditions: _none (single-leaf tree)_\n\n";
  } else {
    out << "Conditions:\n\n";
    for (const RuleCondition& cond : rule.conditions) {
      out << "- " << cond.render() << "\n";
    }
    out << "\n";
  }
  auto render_examples = [&](const std::vector<ExampleRef>& refs) {
    if (refs.empty()) {
      out << "- _none_\n";
      return;
    }
    for (const ExampleRef& ref : refs) {
      out << "- "
          << marked_sentence(corpus.sentences[ref.sentence], ref.focus_a,
                             ref.focus_b, "**", "**", "<u>", "</u>", identity)
          << "\n";
    }
  };
  out << "Examples:\n\n";
  render_examples(rule.positives);
  out << "\nCounterexamples:\n\n";
  render_examples(rule.negatives);
  out << "\n";
}

}  // namespace

std::string eval_to_json(const EvalReport& eval, const RunMeta& meta) {
  Json j;
  j["schema"] = "treegram-eval/1";
  j["language"] = meta.language;
  j["treebank"] = meta.treebank_id;
  j["features"] = feature_list(meta.features);
  j["alpha"] = meta.alpha;
  j["tau"] = meta.tau;
  j["seed"] = meta.seed;
  j["eval"] = eval_json(eval);
  return j.dump(2) + "\n";
}

std::string emit_json(const std::vector<Rule>& rules, const EvalReport& eval,
                      const RunMeta& meta,
                      const std::vector<std::string>& label_order,
                      const Corpus& train_corpus) {
  Json j;
  j["schema"] = "treegram-rules/1";
  j["task"] = task_name(meta.task);
  j["key"] = meta.task_key;
  j["language"] = meta.language;
  j["treebank"] = meta.treebank_id;
  j["features"] = feature_list(meta.features);
  j["params"] = params_json(meta.params);
  j["alpha"] = meta.alpha;
  j["tau"] = meta.tau;
  j["seed"] = meta.seed;
  j["labels"] = label_order;
  j["eval"] = eval_json(eval);
  j["n_rules"] = rules.size();
  std::size_t significant = count_significant(rules);
  j["n_significant"] = significant;
  if (significant == 0) {
    j["notice"] = "no significant rules at alpha " + compact(meta.alpha);
  }
  Json rule_array = Json::array();
  for (const Rule& rule : rules) {
    rule_array.push_back(rule_json(rule, train_corpus));
  }
  j["rules"] = std::move(rule_array);
  return j.dump(2) + "\n";
}

std::vector<Rule> rules_from_json(const std::string& bytes) {
  Json j = Json::parse(bytes);
  std::vector<Rule> rules;
  for (const Json& rj : j.at("rules")) {
    Rule rule;
    rule.leaf = rj.at("leaf").get<int>();
    for (const Json& cj : rj.at("conditions")) {
      RuleCondition cond;
      cond.feature = cj.at("feature").get<std::string>();
      cond.kind = cj.at("kind").get<std::string>() == "presence"
                      ? SplitKind::presence
                      : SplitKind::threshold;
      cond.passed = cj.at("passed").get<bool>();
      if (cond.kind == SplitKind::threshold) {
        cond.threshold = cj.at("threshold").get<double>();
      }
      rule.conditions.push_back(std::move(cond));
    }
    rule.label = rj.at("label").get<std::string>();
    rule.significant = rj.at("significant").get<bool>();
    rule.p_value = rj.at("p_value").get<double>();
    rule.support = rj.at("support").get<std::vector<long>>();
    auto refs = [](const Json& array) {
      std::vector<ExampleRef> out;
      for (const Json& ej : array) {
        ExampleRef ref;
        ref.sentence = ej.at("sentence").get<std::size_t>();
        const Json& focus = ej.at("focus");
        ref.focus_a = focus.at(0).get<int>();
        ref.focus_b = focus.size() > 1 ? focus.at(1).get<int>() : 0;
        out.push_back(ref);
      }
      return out;
    };
    rule.positives = refs(rj.at("positives"));
    rule.negatives = refs(rj.at("negatives"));
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::string emit_markdown(const std::vector<Rule>& rules,
                          const EvalReport& eval, const RunMeta& meta,
                          const std::vector<std::string>& label_order,
                          const Corpus& train_corpus) {
  std::ostringstream out;
  out << "# " << title_of(meta) << "\n\n";
  out << "Language: " << meta.language << " · Treebank: " << meta.treebank_id
      << " · Features: " << join(feature_list(meta.features), ", ")
      << " · Seed: " << meta.seed << "\n\n";
  out << "Model accuracy **" << fixed(eval.model_accuracy, 4)
      << "** vs frequency baseline " << fixed(eval.baseline_accuracy, 4)
      << " (gain " << (eval.gain >= 0 ? "+" : "") << fixed(eval.gain, 4)
      << ", baseline label `" << eval.baseline_label << "`) on "
      << eval.n_test << " test instances.\n\n";
  if (eval.entropy) {
    out << "Prediction entropy: " << fixed(*eval.entropy, 4) << " bits.\n\n";
  }
  if (eval.arm) {
    out << "ARM: " << fixed(*eval.arm, 4) << " (tau = " << compact(meta.tau)
        << ").\n\n";
  }
  out << "Chosen parameters: criterion=" << criterion_name(eval.chosen.criterion)
      << ", max_depth=" << eval.chosen.max_depth
      << ", min_leaf=" << eval.chosen.min_leaf << " (validation accuracy "
      << fixed(eval.valid_accuracy, 4) << ").\n\n";
  out << "Significance level: alpha = " << compact(meta.alpha) << ".\n\n";

  out << "## Rules\n\n";
  std::size_t significant = count_significant(rules);
  if (significant == 0) {
    out << "**No significant rules** at alpha = " << compact(meta.alpha)
        << ".\n\n";
  }
  std::size_t index = 0;
  for (const Rule& rule : rules) {
    if (!rule.significant) continue;
    render_rule_markdown(out, rule, ++index, label_order, train_corpus);
  }
  if (significant < rules.size()) {
    out << "## Uncertain leaves\n\n";
    out << "Leaves whose label distribution is not significantly different "
           "from the null distribution.\n\n";
    for (const Rule& rule : rules) {
      if (rule.significant) continue;
      render_rule_markdown(out, rule, ++index, label_order, train_corpus);
    }
  }
  return out.str();
}

std::string emit_html(const std::vector<Rule>& rules, const EvalReport& eval,
                      const RunMeta& meta,
                      const std::vector<std::string>& label_order,
                      const Corpus& train_corpus) {
  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n"
      << "<meta charset=\"utf-8\">\n"
      << "<title>" << escape_html(title_of(meta)) << "</title>\n"
      << "<style>\n"
      << "body{font-family:Georgia,serif;margin:2rem auto;max-width:56rem;"
         "line-height:1.5;color:#222;}\n"
      << "h1{border-bottom:2px solid #444;padding-bottom:0.3rem;}\n"
      << "table.summary{border-collapse:collapse;margin:1rem 0;}\n"
      << "table.summary td{border:1px solid #bbb;padding:0.3rem 0.7rem;}\n"
      << "article.rule{border:1px solid #ccc;border-radius:6px;margin:1rem 0;"
         "padding:0.5rem 1rem;}\n"
      << "article.rule.uncertain{opacity:0.6;background:#f6f6f6;}\n"
      << "mark{background:#ffe08a;font-weight:bold;}\n"
      << "ul.examples li{margin:0.2rem 0;}\n"
      << ".label{font-weight:bold;}\n"
      << ".meta{color:#666;font-size:0.9rem;}\n"
      << "</style>\n</head>\n<body>\n";
  out << "<h1>" << escape_html(title_of(meta)) << "</h1>\n";
  out << "<p class=\"meta\">Language " << escape_html(meta.language)
      << " · Treebank " << escape_html(meta.treebank_id) << " · Features "
      << escape_html(join(feature_list(meta.features), ", ")) << " · Seed "
      << meta.seed << " · alpha " << compact(meta.alpha) << "</p>\n";
  out << "<table class=\"summary\">\n";
  out << "<tr><td>Model accuracy</td><td>" << fixed(eval.model_accuracy, 4)
      << "</td></tr>\n";
  out << "<tr><td>Baseline accuracy (label "
      << escape_html(eval.baseline_label) << ")</td><td>"
      << fixed(eval.baseline_accuracy, 4) << "</td></tr>\n";
  out << "<tr><td>Gain</td><td>" << fixed(eval.gain, 4) << "</td></tr>\n";
  if (eval.entropy) {
    out << "<tr><td>Prediction entropy</td><td>" << fixed(*eval.entropy, 4)
        << " bits</td></tr>\n";
  }
  if (eval.arm) {
    out << "<tr><td>ARM (tau " << compact(meta.tau) << ")</td><td>"
        << fixed(*eval.arm, 4) << "</td></tr>\n";
  }
  out << "<tr><td>Test instances</td><td>" << eval.n_test << "</td></tr>\n";
  out << "<tr><td>Chosen parameters</td><td>"
      << criterion_name(eval.chosen.criterion) << ", depth "
      << eval.chosen.max_depth << ", min leaf " << eval.chosen.min_leaf
      << "</td></tr>\n";
  out << "</table>\n";

  std::size_t significant = count_significant(rules);
  if (significant == 0) {
    out << "<p><strong>No significant rules</strong> at alpha = "
        << compact(meta.alpha) << ".</p>\n";
  }
  auto render_rule = [&](const Rule& rule, std::size_t index) {
    out << "<article class=\"rule" << (rule.significant ? "" : " uncertain")
        << "\">\n";
    out << "<h3>Rule " << index << " — <span class=\"label\">"
        << escape_html(rule.label) << "</span> <span class=\"meta\">(p = "
        << compact(rule.p_value) << ")</span></h3>\n";
    out << "<p>Support:";
    for (std::size_t i = 0; i < rule.support.size(); ++i) {
      out << (i ? ", " : " ") << escape_html(label_order[i]) << " = "
          << rule.support[i];
    }
    out << "</p>\n";
    if (rule.conditions.empty()) {
      out << "<p><em>No conditions (single-leaf tree).</em></p>\n";
    } else {
      out << "<ul class=\"conditions\">\n";
      for (const RuleCondition& cond : rule.conditions) {
        out << "<li>" << escape_html(cond.render()) << "</li>\n";
      }
      out << "</ul>\n";
    }
    auto render_examples = [&](const std::vector<ExampleRef>& refs,
                               const char* heading) {
      out << "<h4>" << heading << "</h4>\n";
      if (refs.empty()) {
        out << "<p><em>none</em></p>\n";
        return;
      }
      out << "<ul class=\"examples\">\n";
      for (const ExampleRef& ref : refs) {
        out << "<li>"
            << marked_sentence(train_corpus.sentences[ref.sentence],
                               ref.focus_a, ref.focus_b, "<mark>", "</mark>",
                               "<u>", "</u>", escape_html)
            << "</li>\n";
      }
      out << "</ul>\n";
    };
    render_examples(rule.positives, "Examples");
    render_examples(rule.negatives, "Counterexamples");
    out << "</article>\n";
  };

  std::size_t index = 0;
  for (const Rule& rule : rules) {
    if (rule.significant) render_rule(rule, ++index);
  }
  if (significant < rules.size()) {
    out << "<h2>Uncertain leaves</h2>\n";
    for (const Rule& rule : rules) {
      if (!rule.significant) render_rule(rule, ++index);
    }
  }
  out << "</body>\n</html>\n";
  return out.str();
}

std::string tree_to_json(const DecisionTree& tree, const FeatureSpace& space) {
  Json j;
  j["schema"] = "treegram-tree/1";
  j["labels"] = tree.label_order;
  j["params"] = params_json(tree.params);
  Json nodes = Json::array();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const TreeNode& node = tree.nodes[i];
    Json nj;
    nj["id"] = i;
    nj["depth"] = node.depth;
    nj["counts"] = node.counts;
    nj["majority"] =
        tree.label_order[static_cast<std::size_t>(node.majority)];
    if (node.is_leaf()) {
      nj["leaf"] = true;
      nj["p_value"] = node.p_value;
      nj["significant"] = node.significant;
    } else {
      nj["feature"] = space.name_of(node.feature);
      nj["display"] = space.display_of(node.feature);
      nj["kind"] = node.kind == SplitKind::presence ? "presence" : "threshold";
      if (node.kind == SplitKind::threshold) nj["threshold"] = node.threshold;
      nj["left"] = node.left;
      nj["right"] = node.right;
    }
    nodes.push_back(std::move(nj));
  }
  j["nodes"] = std::move(nodes);
  return j.dump(2) + "\n";
}

DecisionTree tree_from_json(const std::string& bytes,
                            const FeatureSpace& space) {
  Json j = Json::parse(bytes);
  DecisionTree tree;
  tree.label_order = j.at("labels").get<std::vector<std::string>>();
  tree.params = params_from_json(j.at("params"));
  auto label_index = [&](const std::string& label) {
    for (std::size_t i = 0; i < tree.label_order.size(); ++i) {
      if (tree.label_order[i] == label) return static_cast<int>(i);
    }
    throw ConfigError("unknown label '" + label + "' in tree document");
  };
  for (const Json& nj : j.at("nodes")) {
    TreeNode node;
    node.depth = nj.at("depth").get<int>();
    node.counts = nj.at("counts").get<std::vector<long>>();
    node.majority = label_index(nj.at("majority").get<std::string>());
    if (nj.contains("leaf") && nj.at("leaf").get<bool>()) {
      node.p_value = nj.at("p_value").get<double>();
      node.significant = nj.at("significant").get<bool>();
    } else {
      std::string name = nj.at("feature").get<std::string>();
      node.feature = space.id_of(name);
      if (node.feature < 0) {
        throw ConfigError("tree references unknown feature '" + name + "'");
      }
      node.kind = nj.at("kind").get<std::string>() == "presence"
                      ? SplitKind::presence
                      : SplitKind::threshold;
      if (node.kind == SplitKind::threshold) {
        node.threshold = nj.at("threshold").get<double>();
      }
      node.left = nj.at("left").get<int>();
      node.right = nj.at("right").get<int>();
    }
    tree.nodes.push_back(std::move(node));
  }
  if (tree.nodes.empty()) {
    throw ConfigError("tree document has no nodes");
  }
  return tree;
}

}  // namespace treegram
