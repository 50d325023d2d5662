/*
 * Copyright 2026 The frs-select Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// frs: select, evaluate, intersect, normalize.
//
// Exit codes: 0 success, 2 usage or input error, 3 computation error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "builtin_data.hpp"
#include "frs/evaluation.hpp"
#include "frs/io.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitCompute = 3;

const std::vector<std::string> kDefaultUniversal{"UrlLen", "PrefSuff",    "HaveSubDomain", "Favicon",     "ReqUrl",
                                                 "UrlAnchor", "LinksInTags", "SFH",           "Submit2Email"};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataArgs {
  std::string path;
  std::string label;
  std::vector<std::string> drop;
  std::vector<std::string> kinds;

  void add(CLI::App* cmd, const std::string& prefix, bool required) {
    auto* o = cmd->add_option("--" + prefix, path, "CSV or ARFF file");
    if (required) o->required();
    cmd->add_option("--" + prefix + "-label", label, "Label column (default: format rule)");
    cmd->add_option("--" + prefix + "-drop", drop, "Column to ignore, repeatable");
    cmd->add_option("--" + prefix + "-kind", kinds, "Kind override NAME=binary|categorical|discrete|continuous");
  }

  frs::Dataset load() const {
    frs::LoadOptions o;
    o.label_column = label;
    o.drop_columns.insert(drop.begin(), drop.end());
    for (const auto& k : kinds) {
      auto eq = k.find('=');
      auto kind = eq == std::string::npos ? std::nullopt : frs::parse_feature_kind(k.substr(eq + 1));
      if (!kind) throw UsageError("bad kind override '" + k + "'");
      o.schema_hints[k.substr(0, eq)] = *kind;
    }
    return frs::load_dataset(path, o);
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

/// Summary goes to stdout unless stdout carries the document itself.
std::ostream& summary_stream(const std::string& out_path) {
  return out_path.empty() || out_path == "-" ? std::cerr : std::cout;
}

frs::AliasMap load_aliases(const std::vector<std::string>& files, bool builtin) {
  frs::AliasMap m;
  if (builtin) {
    m.merge(frs::parse_alias_map(frs::builtin::kSharedAliases));
    m.merge(frs::parse_alias_map(frs::builtin::kUciRawAliases));
    m.merge(frs::parse_alias_map(frs::builtin::kMendeleyRawAliases));
  }
  for (const auto& f : files) m.merge(frs::load_alias_map(f));
  return m;
}

frs::SelectionDocument read_selection(const std::string& path) {
  try {
    return frs::parse_selection_document(nlohmann::json::parse(frs::detail::read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw frs::Error(frs::Errc::MalformedDocument, path + ": " + e.what());
  }
}

std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

// ---------------------------------------------------------------------------

struct SelectArgs {
  DataArgs data;
  std::string method = "frs";
  std::string out;
  double epsilon = frs::kEpsilon;
  std::size_t bins = 10;
  double delta = 0.005;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string feature_classes;
  std::vector<std::string> aliases;
};

int cmd_select(const SelectArgs& a) {
  auto ds = a.data.load();
  const unsigned threads = a.threads ? a.threads : frs::default_threads();
  nlohmann::json doc;
  std::vector<std::string> selected;
  std::string note;
  if (a.method == "frs" || a.method == "frs-core" || a.method == "exhaustive") {
    auto nd = frs::normalize(ds);
    frs::SearchOptions so{a.epsilon, threads};
    frs::Reduct r = a.method == "frs"        ? frs::quickreduct(nd, so)
                    : a.method == "frs-core" ? frs::core_reduct(nd, so)
                                             : frs::exhaustive_reduct(nd, frs::kExhaustiveLimit, so);
    doc = frs::to_json(r);
    selected = r.selected;
    std::ostringstream s;
    s << "gamma " << r.gamma << " (all features " << r.gamma_full << ")";
    note = s.str();
  } else {
    frs::ProtocolOptions po;
    po.bins = a.bins;
    po.delta = a.delta;
    po.seed = a.seed;
    auto kind = frs::parse_selector_kind(a.method);
    auto s = frs::detail::run_selector(*kind, ds, po, threads);
    selected = s.selected;
    doc = {{"dataset", ds.name()}, {"mode", a.method}, {"selected", s.selected}, {"universe", ds.feature_names()},
           {"detail", s.detail}};
  }
  if (!a.feature_classes.empty()) {
    auto table = frs::parse_feature_classes(frs::detail::read_file(a.feature_classes));
    auto aliases = load_aliases(a.aliases, true);
    nlohmann::json classes = nlohmann::json::object();
    for (const auto& n : selected)
      if (auto c = frs::class_of(n, table, aliases)) classes[n] = static_cast<int>(*c);
    doc["feature_classes"] = classes;
  }
  emit(a.out, doc.dump(2) + "\n");
  auto& log = summary_stream(a.out);
  log << ds.name() << ": " << ds.n_samples() << " samples, " << ds.n_features() << " features\n"
      << a.method << ": " << selected.size() << " selected" << (note.empty() ? "" : ", " + note) << "\n";
  if (!selected.empty()) log << "  " << join(selected) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  DataArgs data;
  DataArgs train;
  std::vector<std::string> selectors{"frs"};
  std::vector<std::string> classifiers{"rf"};
  std::vector<std::string> universal;
  std::vector<std::string> universal_from;
  std::vector<std::string> aliases;
  bool no_builtin_aliases = false;
  std::string out, csv, bars;
  std::uint64_t seed = 1;
  double epsilon = frs::kEpsilon;
  double delta = 0.005;
  std::size_t bins = 10;
  std::size_t folds = 10;
  std::string suspicious = "phishing";
  std::vector<std::string> positive_labels;
  std::vector<std::string> suspicious_labels;
  unsigned threads = 0;
  frs::ForestParams forest;
  frs::MlpParams mlp;
  frs::SmoParams smo;
};

int cmd_evaluate(const EvaluateArgs& a) {
  frs::ProtocolOptions po;
  po.selectors.clear();
  for (const auto& s : a.selectors) {
    auto k = frs::parse_selector_kind(s);
    if (!k) throw UsageError("unknown selector '" + s + "'");
    po.selectors.push_back(*k);
  }
  po.classifiers.clear();
  for (const auto& c : a.classifiers) {
    auto k = frs::parse_classifier_kind(c);
    if (!k) throw UsageError("unknown classifier '" + c + "'");
    frs::ClassifierSpec spec;
    spec.kind = *k;
    spec.seed = a.seed;
    spec.forest = a.forest;
    spec.mlp = a.mlp;
    spec.smo = a.smo;
    spec.threads = a.threads;
    po.classifiers.push_back(spec);
  }
  po.seed = a.seed;
  po.epsilon = a.epsilon;
  po.delta = a.delta;
  po.bins = a.bins;
  po.folds = a.folds;
  po.suspicious_is_phishing = a.suspicious == "phishing";
  po.roles.positive = a.positive_labels;
  po.roles.suspicious = a.suspicious_labels;
  po.threads = a.threads;
  po.aliases = load_aliases(a.aliases, !a.no_builtin_aliases);
  if (std::find(po.selectors.begin(), po.selectors.end(), frs::SelectorKind::universal) != po.selectors.end()) {
    if (!a.universal_from.empty()) {
      std::vector<frs::SelectionDocument> docs;
      for (const auto& f : a.universal_from) docs.push_back(read_selection(f));
      po.universal = frs::universal_features(docs, po.aliases).features;
    } else {
      po.universal = a.universal.empty() ? kDefaultUniversal : a.universal;
    }
  }

  auto eval_ds = a.data.load();
  std::optional<frs::Dataset> train_ds;
  if (!a.train.path.empty()) train_ds = a.train.load();
  auto rep = frs::run_protocol(train_ds ? &*train_ds : nullptr, eval_ds, po);

  emit(a.out, frs::to_json(rep).dump(2) + "\n");
  if (!a.csv.empty()) {
    std::ostringstream s;
    frs::write_report_csv(s, rep);
    emit(a.csv, s.str());
  }
  if (!a.bars.empty()) {
    std::ostringstream s;
    frs::write_bar_chart(s, rep);
    emit(a.bars, s.str());
  }
  auto& log = summary_stream(a.out);
  log << rep.dataset << " (" << rep.protocol << ")\n";
  for (const auto& c : rep.cells)
    log << "  " << std::left << std::setw(13) << c.selector << std::setw(9) << c.classifier << " features "
        << std::setw(4) << c.n_features << " F " << frs::format_metric(frs::f_measure(c.counts)) << " P "
        << frs::format_metric(frs::precision(c.counts)) << " R " << frs::format_metric(frs::recall(c.counts))
        << (c.status == "ok" ? "" : "  [" + c.status + "]") << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct IntersectArgs {
  std::vector<std::string> reducts;
  std::vector<std::string> aliases;
  bool strict = false;
  std::string out;
};

int cmd_intersect(const IntersectArgs& a) {
  if (a.reducts.size() < 2) throw UsageError("intersect needs at least two selection files");
  std::vector<frs::SelectionDocument> docs;
  for (const auto& f : a.reducts) docs.push_back(read_selection(f));
  auto r = frs::universal_features(docs, load_aliases(a.aliases, false), a.strict);
  nlohmann::json doc = {{"features", r.features}, {"used", r.used}, {"excluded", r.excluded}};
  emit(a.out, doc.dump(2) + "\n");
  auto& log = summary_stream(a.out);
  log << r.features.size() << " shared features";
  if (!r.excluded.empty()) log << " (skipped, selected everything: " << join(r.excluded) << ")";
  log << "\n";
  if (!r.features.empty()) log << "  " << join(r.features) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct NormalizeArgs {
  DataArgs data;
  std::string out;
};

int cmd_normalize(const NormalizeArgs& a) {
  auto nd = frs::normalize(a.data.load());
  std::ostringstream s;
  frs::write_csv(s, nd);
  emit(a.out, s.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy rough set feature selection and evaluation for phishing datasets"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file of option values; command-line flags win");

  SelectArgs sel;
  auto* s = app.add_subcommand("select", "Select features from one dataset");
  sel.data.add(s, "data", true);
  s->add_option("--method", sel.method, "frs, frs-core, exhaustive, ig, cfs or dw")
      ->check(CLI::IsMember({"frs", "frs-core", "exhaustive", "ig", "cfs", "dw"}));
  s->add_option("--out,-o", sel.out, "Output JSON (default stdout)");
  s->add_option("--epsilon", sel.epsilon, "Membership threshold")->check(CLI::PositiveNumber);
  s->add_option("--bins", sel.bins, "Equal-width bins for continuous features")->check(CLI::Range(2, 1000));
  s->add_option("--delta", sel.delta, "Accuracy drop tolerated by dw")->check(CLI::Range(0.0, 1.0));
  s->add_option("--seed", sel.seed, "Random seed");
  s->add_option("--threads", sel.threads, "Worker threads (default $FRS_THREADS or all cores)");
  s->add_option("--feature-classes", sel.feature_classes, "CSV of feature,class to annotate the output");
  s->add_option("--aliases", sel.aliases, "Extra alias map for class lookup, repeatable");

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Run the selector x classifier grid");
  ev.data.add(e, "data", true);
  ev.train.add(e, "train", false);
  e->add_option("--selectors", ev.selectors, "frs, frs-core, ig, cfs, dw, all-features, universal")
      ->delimiter(',');
  e->add_option("--classifiers", ev.classifiers, "rf, mlp, smo, majority")->delimiter(',');
  e->add_option("--universal", ev.universal, "Canonical names for the universal selector")->delimiter(',');
  e->add_option("--universal-from", ev.universal_from, "Selection files to intersect for the universal selector")
      ->delimiter(',');
  e->add_option("--aliases", ev.aliases, "Alias map CSV, repeatable");
  e->add_flag("--no-builtin-aliases", ev.no_builtin_aliases, "Do not load the shipped alias maps");
  e->add_option("--out,-o", ev.out, "Report JSON (default stdout)");
  e->add_option("--csv", ev.csv, "Flat CSV, one row per cell");
  e->add_option("--bars", ev.bars, "Bar-chart data, category,value");
  e->add_option("--seed", ev.seed, "Random seed");
  e->add_option("--epsilon", ev.epsilon, "Membership threshold")->check(CLI::PositiveNumber);
  e->add_option("--delta", ev.delta, "Accuracy drop tolerated by dw")->check(CLI::Range(0.0, 1.0));
  e->add_option("--bins", ev.bins, "Equal-width bins")->check(CLI::Range(2, 1000));
  e->add_option("--folds", ev.folds, "Cross-validation folds without a training set")->check(CLI::Range(2, 1000));
  e->add_option("--suspicious", ev.suspicious, "Class given to suspicious samples")
      ->check(CLI::IsMember({"phishing", "legitimate"}));
  e->add_option("--positive-label", ev.positive_labels, "Raw label meaning phishing, repeatable");
  e->add_option("--suspicious-label", ev.suspicious_labels, "Raw label meaning suspicious, repeatable");
  e->add_option("--threads", ev.threads, "Worker threads");
  e->add_option("--trees", ev.forest.trees, "Random forest size")->check(CLI::PositiveNumber);
  e->add_option("--mtry", ev.forest.mtry, "Features per split (0 = sqrt)");
  e->add_option("--max-depth", ev.forest.max_depth, "Tree depth limit (0 = none)");
  e->add_option("--epochs", ev.mlp.epochs, "MLP epochs")->check(CLI::PositiveNumber);
  e->add_option("--hidden", ev.mlp.hidden, "MLP hidden units (0 = auto)");
  e->add_option("--learning-rate", ev.mlp.learning_rate, "MLP learning rate")->check(CLI::PositiveNumber);
  e->add_option("--momentum", ev.mlp.momentum, "MLP momentum")->check(CLI::Range(0.0, 1.0));
  e->add_option("--smo-c", ev.smo.c, "SVM complexity constant")->check(CLI::PositiveNumber);
  e->add_option("--smo-tolerance", ev.smo.tolerance, "KKT tolerance")->check(CLI::PositiveNumber);

  IntersectArgs in;
  auto* i = app.add_subcommand("intersect", "Features shared by several selections");
  i->add_option("reducts", in.reducts, "Selection JSON files")->required()->check(CLI::ExistingFile);
  i->add_option("--aliases", in.aliases, "Alias map CSV, repeatable");
  i->add_flag("--strict", in.strict, "Also intersect selections that kept every feature");
  i->add_option("--out,-o", in.out, "Output JSON (default stdout)");

  NormalizeArgs no;
  auto* n = app.add_subcommand("normalize", "Write the [0,1]-scaled table as CSV");
  no.data.add(n, "data", true);
  n->add_option("--out,-o", no.out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int rc = app.exit(err);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (s->parsed()) return cmd_select(sel);
    if (e->parsed()) return cmd_evaluate(ev);
    if (i->parsed()) return cmd_intersect(in);
    if (n->parsed()) return cmd_normalize(no);
  } catch (const frs::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return frs::is_input_error(err.code()) ? kExitInput : kExitCompute;
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInput;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitCompute;
  }
  return kExitInput;
}
