#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "treegram/dtree.hpp"
#include "treegram/eval.hpp"
#include "treegram/report.hpp"
#include "treegram/ruleset.hpp"

using namespace treegram;

namespace {

struct ReportFixture {
  Corpus corpus;
  Dataset dataset;
  FeatureMatrix matrix;
  DecisionTree tree;
  std::vector<Rule> rules;
  EvalReport eval;
  RunMeta meta;

  explicit ReportFixture(std::uint64_t seed = 7) {
    corpus = generate_synthetic(PlantedRule{}, 250, seed);
    dataset =
        extract_word_order(corpus, find_relation({}, "adjective-noun"));
    matrix = build_matrix(dataset, corpus, FeatureFlags{true, false, false});
    TrainData data{&matrix.space, &matrix.rows, &matrix.labels,
                   dataset.labels};
    tree = grow(data, {TrainParams::Criterion::gini, 3, 1});
    label_leaves(tree, {{0.5, 0.5}}, 0.01);
    rules = extract_rules(tree, matrix.space);
    attach_examples(rules, tree, matrix.rows, dataset, corpus, seed);

    eval.task = TaskKind::word_order;
    eval.task_key = "adjective-noun";
    eval.model_accuracy = 1.0;
    eval.baseline_accuracy = 0.52;
    eval.gain = 0.48;
    eval.baseline_label = "after";
    eval.entropy = 1.0;
    eval.n_test = 100;
    eval.chosen = tree.params;
    eval.valid_accuracy = 1.0;

    meta.task = TaskKind::word_order;
    meta.task_key = "adjective-noun";
    meta.language = "und";
    meta.treebank_id = "synthetic";
    meta.features = FeatureFlags{true, false, false};
    meta.alpha = 0.01;
    meta.tau = 0.9;
    meta.seed = seed;
    meta.params = tree.params;
  }
};

// Minimal well-formedness scan: every opened element is closed in order.
// Void and self-closing elements are skipped.
bool html_well_formed(const std::string& html) {
  static const std::set<std::string> kVoid = {"meta", "br",  "hr", "img",
                                              "link", "input"};
  std::vector<std::string> stack;
  std::size_t pos = 0;
  if (html.rfind("<!DOCTYPE html>", 0) != 0) return false;
  while ((pos = html.find('<', pos)) != std::string::npos) {
    if (html[pos + 1] == '!') {  // doctype/comment
      pos = html.find('>', pos);
      continue;
    }
    std::size_t end = html.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = html.substr(pos + 1, end - pos - 1);
    bool closing = !tag.empty() && tag[0] == '/';
    if (closing) tag = tag.substr(1);
    bool self_closing = !tag.empty() && tag.back() == '/';
    std::size_t space = tag.find_first_of(" \t\n");
    std::string name = tag.substr(0, space);
    if (!name.empty() && name.back() == '/') name.pop_back();
    if (!closing && !self_closing && !kVoid.count(name)) {
      stack.push_back(name);
    } else if (closing) {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    }
    pos = end + 1;
  }
  return stack.empty();
}

}  // namespace

TEST_CASE("emit_json round-trips the rule list") {
  ReportFixture fx;
  std::string bytes =
      emit_json(fx.rules, fx.eval, fx.meta, fx.tree.label_order, fx.corpus);
  std::vector<Rule> parsed = rules_from_json(bytes);
  REQUIRE(parsed.size() == fx.rules.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i] == fx.rules[i]);
  }
}

TEST_CASE("all three emitters are deterministic") {
  ReportFixture a(7);
  ReportFixture b(7);
  CHECK(emit_json(a.rules, a.eval, a.meta, a.tree.label_order, a.corpus) ==
        emit_json(b.rules, b.eval, b.meta, b.tree.label_order, b.corpus));
  CHECK(emit_markdown(a.rules, a.eval, a.meta, a.tree.label_order, a.corpus) ==
        emit_markdown(b.rules, b.eval, b.meta, b.tree.label_order, b.corpus));
  CHECK(emit_html(a.rules, a.eval, a.meta, a.tree.label_order, a.corpus) ==
        emit_html(b.rules, b.eval, b.meta, b.tree.label_order, b.corpus));
}

TEST_CASE("markdown names the planted condition and marks focus words") {
  ReportFixture fx;
  std::string md =
      emit_markdown(fx.rules, fx.eval, fx.meta, fx.tree.label_order,
                    fx.corpus);
  CHECK(md.find("dep-numtype-is-ord") != std::string::npos);
  CHECK(md.find("before") != std::string::npos);
  CHECK(md.find("**") != std::string::npos);    // bold dependent
  CHECK(md.find("<u>") != std::string::npos);   // underlined head
  CHECK(md.find("1.0000") != std::string::npos);
}

TEST_CASE("cannot-decide rules fall into the uncertain section") {
  ReportFixture fx;
  // Force one rule to be uncertain.
  fx.rules[0].significant = false;
  fx.rules[0].label = kCannotDecide;
  std::string md =
      emit_markdown(fx.rules, fx.eval, fx.meta, fx.tree.label_order,
                    fx.corpus);
  CHECK(md.find("## Uncertain leaves") != std::string::npos);
  std::string html =
      emit_html(fx.rules, fx.eval, fx.meta, fx.tree.label_order, fx.corpus);
  CHECK(html.find("uncertain") != std::string::npos);
}

TEST_CASE("an all-uncertain ruleset prints a notice") {
  ReportFixture fx;
  for (Rule& rule : fx.rules) {
    rule.significant = false;
    rule.label = kCannotDecide;
  }
  std::string md = emit_markdown(fx.rules, fx.eval, fx.meta,
                                 fx.tree.label_order, fx.corpus);
  CHECK(md.find("No significant rules") != std::string::npos);
  std::string json = emit_json(fx.rules, fx.eval, fx.meta,
                               fx.tree.label_order, fx.corpus);
  CHECK(json.find("notice") != std::string::npos);
}

TEST_CASE("html output is well-formed and self-contained") {
  ReportFixture fx;
  std::string html =
      emit_html(fx.rules, fx.eval, fx.meta, fx.tree.label_order, fx.corpus);
  CHECK(html_well_formed(html));
  CHECK(html.find("<meta charset=\"utf-8\">") != std::string::npos);
  CHECK(html.find("<style>") != std::string::npos);
  CHECK(html.find("http://") == std::string::npos);   // no external fetches
  CHECK(html.find("https://") == std::string::npos);
  CHECK(html.find("<mark>") != std::string::npos);
}

TEST_CASE("html preserves non-Latin scripts and escapes markup") {
  Corpus corpus = parse_conllu(std::string(
      "# text = βιβλίο <b>&\n"
      "1\tβιβλίο\tβιβλίο\tNOUN\t_\t_\t0\troot\t_\t_\n"
      "2\t<b>&\t<b>&\tADJ\t_\t_\t1\tmod\t_\t_\n\n"));
  Dataset ds = extract_word_order(corpus,
                                  find_relation({}, "adjective-noun"));
  FeatureMatrix matrix =
      build_matrix(ds, corpus, FeatureFlags{true, false, false});
  TrainData data{&matrix.space, &matrix.rows, &matrix.labels, ds.labels};
  DecisionTree tree = grow(data, {TrainParams::Criterion::gini, 1, 1});
  label_leaves(tree, {{0.5, 0.5}}, 0.01);
  auto rules = extract_rules(tree, matrix.space);
  attach_examples(rules, tree, matrix.rows, ds, corpus, 1);

  EvalReport eval;
  eval.task = TaskKind::word_order;
  eval.task_key = "adjective-noun";
  eval.baseline_label = "after";
  eval.n_test = 1;
  RunMeta meta;
  meta.task = TaskKind::word_order;
  meta.task_key = "adjective-noun";

  std::string html = emit_html(rules, eval, meta, tree.label_order, corpus);
  CHECK(html_well_formed(html));
  CHECK(html.find("βιβλίο") != std::string::npos);
  CHECK(html.find("&lt;b&gt;&amp;") != std::string::npos);
}

TEST_CASE("tree json round-trips through feature names") {
  ReportFixture fx;
  std::string bytes = tree_to_json(fx.tree, fx.matrix.space);
  DecisionTree loaded = tree_from_json(bytes, fx.matrix.space);
  CHECK(tree_to_json(loaded, fx.matrix.space) == bytes);
  // Same routing behaviour on every training row.
  for (const FeatureVector& row : fx.matrix.rows) {
    CHECK(loaded.route(row) == fx.tree.route(row));
  }
}

TEST_CASE("tree json rejects unknown feature names") {
  ReportFixture fx;
  std::string bytes = tree_to_json(fx.tree, fx.matrix.space);
  FeatureSpace other;
  other.intern("something-else", "", FeatureKind::binary);
  CHECK_THROWS_AS(tree_from_json(bytes, other), ConfigError);
}

TEST_CASE("eval json carries the metric block") {
  ReportFixture fx;
  std::string bytes = eval_to_json(fx.eval, fx.meta);
  CHECK(bytes.find("\"model_accuracy\": 1.0") != std::string::npos);
  CHECK(bytes.find("\"entropy\"") != std::string::npos);
  CHECK(bytes.find("\"arm\"") == std::string::npos);  // word-order run
}
