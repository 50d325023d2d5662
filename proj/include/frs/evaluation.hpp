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

#pragma once

#include <iomanip>
#include <ostream>

#include "frs/baselines.hpp"
#include "frs/io.hpp"
#include "frs/metrics.hpp"
#include "frs/reduct.hpp"

namespace frs {

enum class SelectorKind { frs, frs_core, ig, cfs, dw, all_features, universal };

constexpr std::string_view to_string(SelectorKind k) noexcept {
  switch (k) {
    case SelectorKind::frs: return "frs";
    case SelectorKind::frs_core: return "frs-core";
    case SelectorKind::ig: return "ig";
    case SelectorKind::cfs: return "cfs";
    case SelectorKind::dw: return "dw";
    case SelectorKind::all_features: return "all-features";
    case SelectorKind::universal: return "universal";
  }
  return "unknown";
}

inline std::optional<SelectorKind> parse_selector_kind(std::string_view s) {
  for (auto k : {SelectorKind::frs, SelectorKind::frs_core, SelectorKind::ig, SelectorKind::cfs, SelectorKind::dw,
                 SelectorKind::all_features, SelectorKind::universal})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Universal features

struct UniversalResult {
  /// Canonical names, sorted.
  std::vector<std::string> features;
  std::vector<std::string> used;
  /// Inputs left out because they selected their whole feature universe.
  std::vector<std::string> excluded;
};

inline bool is_saturated(const SelectionDocument& d) {
  if (d.universe.empty()) return false;
  std::set<std::string> s(d.selected.begin(), d.selected.end()), u(d.universe.begin(), d.universe.end());
  return s == u;
}

/// Intersection of the selected sets under alias canonicalization.
///
/// A selection that kept every feature of its dataset says nothing about
/// which features matter, so it is skipped unless `include_saturated` is set
/// or every input is saturated.
inline UniversalResult universal_features(std::span<const SelectionDocument> docs, const AliasMap& aliases,
                                          bool include_saturated = false) {
  if (docs.size() < 2) throw Error(Errc::InvalidArgument, "intersection needs at least two selections");
  std::vector<std::vector<std::string>> universes;
  for (const auto& d : docs) {
    auto u = d.universe;
    u.insert(u.end(), d.selected.begin(), d.selected.end());
    universes.push_back(std::move(u));
  }
  aliases.check_against(universes);

  UniversalResult r;
  std::vector<const SelectionDocument*> use;
  for (const auto& d : docs) {
    if (!include_saturated && is_saturated(d))
      r.excluded.push_back(d.dataset);
    else
      use.push_back(&d);
  }
  if (use.empty()) {
    r.excluded.clear();
    for (const auto& d : docs) use.push_back(&d);
  }
  std::optional<std::set<std::string>> acc;
  for (const auto* d : use) {
    r.used.push_back(d->dataset);
    std::set<std::string> here;
    for (const auto& n : d->selected) here.insert(aliases.canonical(n));
    if (!acc) {
      acc = std::move(here);
      continue;
    }
    std::set<std::string> keep;
    std::set_intersection(acc->begin(), acc->end(), here.begin(), here.end(), std::inserter(keep, keep.end()));
    acc = std::move(keep);
  }
  r.features.assign(acc->begin(), acc->end());
  return r;
}

// ---------------------------------------------------------------------------
// Label roles

/// Which raw labels count as phishing and which as suspicious.
struct LabelRoles {
  std::vector<std::string> positive;
  std::vector<std::string> suspicious;
};

/// Named labels win (phishing / phishy / suspicious). Otherwise numeric
/// sets follow the common encodings: {-1,0,1} is phishing / suspicious /
/// legitimate, {-1,1} has -1 phishing, {0,1} has 1 phishing.
inline LabelRoles infer_label_roles(std::span<const std::string> labels) {
  LabelRoles r;
  auto has = [&](std::string_view s) { return std::find(labels.begin(), labels.end(), s) != labels.end(); };
  for (const auto& l : labels) {
    std::string low = detail::lower(l);
    if (low == "phishing" || low == "phishy" || low == "phish" || low == "malicious") r.positive.push_back(l);
    if (low == "suspicious") r.suspicious.push_back(l);
  }
  if (r.positive.empty()) {
    if (has("-1"))
      r.positive.push_back("-1");
    else if (has("1"))
      r.positive.push_back("1");
  }
  if (r.suspicious.empty() && labels.size() == 3 && has("-1") && has("0") && has("1")) r.suspicious.push_back("0");
  if (r.positive.empty())
    throw Error(Errc::InvalidArgument, "cannot tell which label means phishing; name it explicitly");
  return r;
}

inline constexpr const char* kPhishing = "phishing";
inline constexpr const char* kLegitimate = "legitimate";

/// Relabels to phishing / legitimate.
inline Dataset binary_view(const Dataset& ds, const LabelRoles& roles, bool suspicious_is_phishing) {
  std::vector<std::string> out(ds.n_samples());
  auto in = [](const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
  };
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& l = ds.label(i);
    bool pos = in(roles.positive, l) || (suspicious_is_phishing && in(roles.suspicious, l));
    out[i] = pos ? kPhishing : kLegitimate;
  }
  return ds.with_labels(std::move(out));
}

// ---------------------------------------------------------------------------
// Protocol

struct ProtocolOptions {
  std::vector<SelectorKind> selectors{SelectorKind::frs};
  std::vector<ClassifierSpec> classifiers{ClassifierSpec{}};
  std::uint64_t seed = 1;
  double epsilon = kEpsilon;
  double delta = 0.005;
  std::size_t bins = 10;
  std::size_t folds = 10;
  bool suspicious_is_phishing = true;
  /// Empty: inferred from the evaluation labels.
  LabelRoles roles;
  /// Canonical names used by the universal selector.
  std::vector<std::string> universal;
  AliasMap aliases;
  unsigned threads = 0;
};

struct SelectionResult {
  std::string selector;
  std::vector<std::string> selected;
  nlohmann::json detail;
};

struct CellResult {
  std::string selector;
  std::string classifier;
  std::size_t n_features = 0;
  ConfusionCounts counts;
  std::string status = "ok";
};

struct EvalReport {
  std::string dataset;
  std::string train_dataset;  // empty under cross-validation
  std::string protocol;
  ProtocolOptions options;
  std::vector<SelectionResult> selections;
  std::vector<CellResult> cells;
};

namespace detail {

inline SelectionResult run_selector(SelectorKind k, const Dataset& ds, const ProtocolOptions& opt, unsigned threads) {
  SelectionResult s{std::string(to_string(k)), {}, nlohmann::json::object()};
  switch (k) {
    case SelectorKind::frs:
    case SelectorKind::frs_core: {
      auto nd = normalize(ds);
      SearchOptions so{opt.epsilon, threads};
      Reduct r = k == SelectorKind::frs ? quickreduct(nd, so) : core_reduct(nd, so);
      s.selected = r.selected;
      s.detail = {{"mode", std::string(to_string(r.mode))}, {"gamma", r.gamma}, {"gamma_full", r.gamma_full}};
      break;
    }
    case SelectorKind::ig: {
      auto rank = info_gain_rank(ds, opt.bins);
      s.selected = ig_select(rank);
      auto scores = nlohmann::json::array();
      for (const auto& [n, v] : rank.entries) scores.push_back({{"feature", n}, {"score", v}});
      s.detail = {{"ranking", scores}, {"rule", "above-mean"}};
      break;
    }
    case SelectorKind::cfs: {
      auto r = cfs_select(ds, opt.bins);
      s.selected = r.selected;
      s.detail = {{"merit", r.merit}};
      break;
    }
    case SelectorKind::dw: {
      DwOptions d;
      d.delta = opt.delta;
      d.seed = opt.seed;
      d.evaluator.seed = opt.seed;
      d.evaluator.threads = threads;
      auto r = dw_select(ds, d);
      s.selected = r.selected;
      s.detail = {{"cv_accuracy", r.accuracy}, {"delta", opt.delta}, {"folds", d.folds}};
      break;
    }
    case SelectorKind::all_features:
      s.selected = ds.feature_names();
      break;
    case SelectorKind::universal: {
      if (opt.universal.empty()) throw Error(Errc::InvalidArgument, "universal selector needs a feature list");
      auto names = ds.feature_names();
      s.selected = resolve_canonical(names, opt.universal, opt.aliases);
      s.detail = {{"canonical", opt.universal}};
      break;
    }
  }
  return s;
}

/// Renames `names` (columns of the evaluation set) to the training set's
/// columns carrying the same canonical name.
inline std::vector<std::string> match_columns(std::span<const std::string> names, const Dataset& train_ds,
                                              const AliasMap& aliases) {
  std::map<std::string, std::vector<std::string>> by_canonical;
  for (const auto& n : train_ds.feature_names()) by_canonical[aliases.canonical(n)].push_back(n);
  std::vector<std::string> out;
  for (const auto& n : names) {
    auto it = by_canonical.find(aliases.canonical(n));
    if (it == by_canonical.end())
      throw Error(Errc::FeatureUniverseMismatch, "training set has no column for '" + n + "'");
    if (it->second.size() != 1)
      throw Error(Errc::FeatureUniverseMismatch, "training set has several columns for '" + n + "'");
    out.push_back(it->second.front());
  }
  return out;
}

}  // namespace detail

/// Selects features on `eval_ds`, trains every classifier on `train_ds`
/// (or by stratified k-fold on `eval_ds` when absent) and scores on the
/// evaluation samples.
inline EvalReport run_protocol(const Dataset* train_ds, const Dataset& eval_ds, const ProtocolOptions& opt) {
  detail::require_labels(eval_ds);
  if (opt.selectors.empty() || opt.classifiers.empty())
    throw Error(Errc::InvalidArgument, "need at least one selector and one classifier");
  const unsigned threads = opt.threads ? opt.threads : default_threads();

  EvalReport rep;
  rep.dataset = eval_ds.name();
  rep.protocol = train_ds ? "out-of-sample" : "cross-validation";
  rep.options = opt;
  if (rep.options.roles.positive.empty()) rep.options.roles = infer_label_roles(eval_ds.label_set());
  if (train_ds) rep.train_dataset = train_ds->name();

  for (auto k : opt.selectors) rep.selections.push_back(detail::run_selector(k, eval_ds, opt, threads));

  const auto eval_bin = normalize(binary_view(eval_ds, rep.options.roles, opt.suspicious_is_phishing));
  std::optional<NormalizedDataset> train_bin;
  if (train_ds) {
    auto roles = infer_label_roles(train_ds->label_set());
    train_bin = normalize(binary_view(*train_ds, roles, opt.suspicious_is_phishing));
  }
  std::vector<std::size_t> fold;
  if (!train_ds) fold = stratified_folds(eval_bin.label_codes(), opt.folds, opt.seed);

  auto is_pos = [](const std::string& s) { return s == kPhishing; };
  for (const auto& sel : rep.selections) {
    for (const auto& spec_in : opt.classifiers) {
      ClassifierSpec spec = spec_in;
      if (!spec.threads) spec.threads = threads;
      CellResult cell{sel.selector, std::string(to_string(spec.kind)), sel.selected.size(), {}, "ok"};
      if (sel.selected.empty()) {
        cell.status = "empty-selection";
        rep.cells.push_back(cell);
        continue;
      }
      std::vector<std::string> truth;
      for (std::size_t i = 0; i < eval_bin.n_samples(); ++i) truth.push_back(eval_bin.label_name(i));
      if (train_bin) {
        auto cols = detail::match_columns(sel.selected, *train_ds, opt.aliases);
        auto model = train(spec, *train_bin, cols);
        // Present the evaluation columns under the training names.
        auto view = eval_bin.as_dataset().select(sel.selected);
        std::vector<FeatureDescriptor> feats = view.features();
        for (std::size_t j = 0; j < feats.size(); ++j) feats[j].name = cols[j];
        NormalizedDataset renamed(eval_bin.name(), feats, std::vector<double>(view.values().begin(), view.values().end()),
                                  eval_bin.label_codes(), eval_bin.label_names());
        auto pred = model.predict_all(renamed);
        cell.counts = confusion(std::span<const std::string>(truth), std::span<const std::string>(pred), is_pos);
      } else {
        for (std::size_t f = 0; f < opt.folds; ++f) {
          auto [tr, te] = split_fold(fold, f);
          auto model = train(spec, eval_bin.select_rows(tr), sel.selected);
          auto test_part = eval_bin.select_rows(te);
          auto pred = model.predict_all(test_part);
          std::vector<std::string> t;
          for (auto i : te) t.push_back(truth[i]);
          cell.counts += confusion(std::span<const std::string>(t), std::span<const std::string>(pred), is_pos);
        }
      }
      rep.cells.push_back(cell);
    }
  }
  return rep;
}

inline nlohmann::json to_json(const EvalReport& r) {
  const auto& o = r.options;
  auto classifiers = nlohmann::json::array();
  for (const auto& c : o.classifiers)
    classifiers.push_back(
        {{"kind", std::string(to_string(c.kind))}, {"seed", c.seed}, {"hyperparameters", hyperparameters_json(c)}});
  auto selections = nlohmann::json::array();
  for (const auto& s : r.selections)
    selections.push_back({{"selector", s.selector}, {"selected", s.selected}, {"detail", s.detail}});
  auto cells = nlohmann::json::array();
  for (const auto& c : r.cells)
    cells.push_back({{"selector", c.selector},
                     {"classifier", c.classifier},
                     {"n_features", c.n_features},
                     {"status", c.status},
                     {"counts", {{"tp", c.counts.tp}, {"fp", c.counts.fp}, {"tn", c.counts.tn}, {"fn", c.counts.fn}}},
                     {"precision", precision(c.counts)},
                     {"recall", recall(c.counts)},
                     {"f_measure", f_measure(c.counts)},
                     {"zero_denominator", has_degenerate_ratio(c.counts)}});
  nlohmann::json j = {{"format", "frs-eval-report"},
                      {"version", 1},
                      {"dataset", r.dataset},
                      {"train_dataset", r.train_dataset.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.train_dataset)},
                      {"protocol", r.protocol},
                      {"seed", o.seed},
                      {"thresholds", {{"epsilon", o.epsilon}, {"delta", o.delta}, {"bins", o.bins}, {"folds", o.folds}}},
                      {"labels",
                       {{"positive", o.roles.positive},
                        {"suspicious", o.roles.suspicious},
                        {"suspicious_as", o.suspicious_is_phishing ? kPhishing : kLegitimate}}},
                      {"classifiers", classifiers},
                      {"selections", selections},
                      {"cells", cells}};
  if (!o.universal.empty()) j["universal"] = o.universal;
  return j;
}

inline std::string format_metric(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << v;
  return s.str();
}

/// One row per grid cell.
inline void write_report_csv(std::ostream& out, const EvalReport& r) {
  out << "dataset,protocol,selector,classifier,n_features,status,tp,fp,tn,fn,precision,recall,f_measure\n";
  for (const auto& c : r.cells)
    out << detail::csv_escape(r.dataset) << ',' << r.protocol << ',' << c.selector << ',' << c.classifier << ','
        << c.n_features << ',' << c.status << ',' << c.counts.tp << ',' << c.counts.fp << ',' << c.counts.tn << ','
        << c.counts.fn << ',' << format_metric(precision(c.counts)) << ',' << format_metric(recall(c.counts)) << ','
        << format_metric(f_measure(c.counts)) << '\n';
}

/// F-measure per cell as `category,value`, grouped by classifier.
inline void write_bar_chart(std::ostream& out, const EvalReport& r) {
  out << "category,value\n";
  std::vector<std::string> order;
  for (const auto& c : r.cells)
    if (std::find(order.begin(), order.end(), c.classifier) == order.end()) order.push_back(c.classifier);
  for (const auto& k : order)
    for (const auto& c : r.cells)
      if (c.classifier == k) out << k << '/' << c.selector << ',' << format_metric(f_measure(c.counts)) << '\n';
}

// ---------------------------------------------------------------------------
// Feature classes

/// Reads `feature,class` rows (class 1-4).
inline std::map<std::string, FeatureClass> parse_feature_classes(std::string_view text) {
  auto records = detail::parse_csv(text);
  std::map<std::string, FeatureClass> out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != 2) throw Error(Errc::MalformedDocument, "feature class row " + std::to_string(r + 1));
    auto v = detail::parse_number(records[r][1]);
    if (!v || *v < 1 || *v > 4 || std::floor(*v) != *v)
      throw Error(Errc::MalformedDocument, "feature class must be 1-4 in row " + std::to_string(r + 1));
    out[std::string(detail::trim(records[r][0]))] = static_cast<FeatureClass>(static_cast<int>(*v));
  }
  return out;
}

/// Class of `name`, looked up directly and then by canonical name.
inline std::optional<FeatureClass> class_of(const std::string& name, const std::map<std::string, FeatureClass>& table,
                                            const AliasMap& aliases) {
  if (auto it = table.find(name); it != table.end()) return it->second;
  if (auto it = table.find(aliases.canonical(name)); it != table.end()) return it->second;
  return std::nullopt;
}

}  // namespace frs
