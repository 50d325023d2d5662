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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "frs/error.hpp"

namespace frs {

enum class FeatureKind { binary, categorical, discrete, continuous };

constexpr std::string_view to_string(FeatureKind k) noexcept {
  switch (k) {
    case FeatureKind::binary: return "binary";
    case FeatureKind::categorical: return "categorical";
    case FeatureKind::discrete: return "discrete";
    case FeatureKind::continuous: return "continuous";
  }
  return "continuous";
}

inline std::optional<FeatureKind> parse_feature_kind(std::string_view s) {
  if (s == "binary" || s == "B") return FeatureKind::binary;
  if (s == "categorical" || s == "C") return FeatureKind::categorical;
  if (s == "discrete" || s == "D") return FeatureKind::discrete;
  if (s == "continuous" || s == "real") return FeatureKind::continuous;
  return std::nullopt;
}

/// Phishing feature families: 1 address bar, 2 abnormal, 3 HTML/JavaScript,
/// 4 domain (third-party service).
enum class FeatureClass : int { address_bar = 1, abnormal = 2, html_javascript = 3, domain = 4 };

struct FeatureDescriptor {
  std::string name;
  FeatureKind kind = FeatureKind::continuous;
  std::optional<FeatureClass> feature_class;
  double observed_min = 0.0;
  double observed_max = 0.0;
  /// Distinct codes in ascending order (binary and categorical kinds).
  std::vector<double> levels;
  /// Token for each integer code, when the column held strings.
  std::vector<std::string> level_names;

  bool is_discrete_kind() const noexcept { return kind != FeatureKind::continuous; }
  bool is_constant() const noexcept { return observed_min == observed_max; }
};

namespace detail {

inline std::optional<double> parse_number(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Orders label tokens: numerically when every token is a number, otherwise
/// lexicographically. The position in the result is the label code.
inline std::vector<std::string> ordered_labels(std::span<const std::string> labels) {
  std::set<std::string> distinct(labels.begin(), labels.end());
  std::vector<std::string> out(distinct.begin(), distinct.end());
  bool numeric = std::all_of(out.begin(), out.end(),
                             [](const std::string& s) { return detail::parse_number(s).has_value(); });
  if (numeric) {
    std::stable_sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
      return *detail::parse_number(a) < *detail::parse_number(b);
    });
  }
  return out;
}

/// Recomputes observed range and levels of a descriptor from a column.
inline void rescan_descriptor(FeatureDescriptor& fd, std::span<const double> column) {
  fd.observed_min = column.empty() ? 0.0 : *std::min_element(column.begin(), column.end());
  fd.observed_max = column.empty() ? 0.0 : *std::max_element(column.begin(), column.end());
  if (fd.kind == FeatureKind::binary || fd.kind == FeatureKind::categorical) {
    std::set<double> distinct(column.begin(), column.end());
    fd.levels.assign(distinct.begin(), distinct.end());
  } else {
    fd.levels.clear();
  }
}

/// Table of samples x features with one decision column.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::string name, std::vector<FeatureDescriptor> features, std::vector<double> values,
          std::vector<std::string> labels)
      : name_(std::move(name)),
        features_(std::move(features)),
        values_(std::move(values)),
        labels_(std::move(labels)) {
    if (labels_.empty()) throw Error(Errc::EmptyFile, "dataset '" + name_ + "' has no samples");
    if (values_.size() != labels_.size() * features_.size())
      throw Error(Errc::DimensionMismatch, "value table does not match samples x features");
    std::set<std::string> seen;
    for (const auto& f : features_) {
      if (f.name.empty()) throw Error(Errc::MalformedHeader, "empty feature name");
      if (!seen.insert(f.name).second)
        throw Error(Errc::MalformedHeader, "duplicate feature name '" + f.name + "'");
    }
    for (double v : values_)
      if (!std::isfinite(v)) throw Error(Errc::NonFiniteValue, "dataset '" + name_ + "' holds a non-finite value");
    label_order_ = ordered_labels(labels_);
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t n_samples() const noexcept { return labels_.size(); }
  std::size_t n_features() const noexcept { return features_.size(); }
  const std::vector<FeatureDescriptor>& features() const noexcept { return features_; }
  const FeatureDescriptor& feature(std::size_t j) const { return features_.at(j); }
  std::span<const double> values() const noexcept { return values_; }
  double value(std::size_t i, std::size_t j) const { return values_[i * features_.size() + j]; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * features_.size(), features_.size()};
  }
  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(n_samples());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = value(i, j);
    return out;
  }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  /// Distinct labels in code order.
  const std::vector<std::string>& label_set() const noexcept { return label_order_; }
  std::size_t label_code(std::size_t i) const {
    auto it = std::find(label_order_.begin(), label_order_.end(), labels_[i]);
    return static_cast<std::size_t>(it - label_order_.begin());
  }

  std::optional<std::size_t> feature_index(std::string_view name) const {
    for (std::size_t j = 0; j < features_.size(); ++j)
      if (features_[j].name == name) return j;
    return std::nullopt;
  }

  std::vector<std::string> feature_names() const {
    std::vector<std::string> out;
    out.reserve(features_.size());
    for (const auto& f : features_) out.push_back(f.name);
    return out;
  }

  /// Column subset in the order given.
  Dataset select(std::span<const std::string> names) const {
    std::vector<std::size_t> idx;
    for (const auto& n : names) {
      auto j = feature_index(n);
      if (!j) throw Error(Errc::FeatureUniverseMismatch, "dataset '" + name_ + "' has no feature '" + n + "'");
      idx.push_back(*j);
    }
    return select_indices(idx);
  }

  Dataset select_indices(std::span<const std::size_t> idx) const {
    std::vector<FeatureDescriptor> feats;
    for (auto j : idx) feats.push_back(features_.at(j));
    std::vector<double> vals;
    vals.reserve(n_samples() * idx.size());
    for (std::size_t i = 0; i < n_samples(); ++i)
      for (auto j : idx) vals.push_back(value(i, j));
    return Dataset(name_, std::move(feats), std::move(vals), labels_);
  }

  Dataset select_rows(std::span<const std::size_t> rows) const {
    std::vector<double> vals;
    std::vector<std::string> labs;
    vals.reserve(rows.size() * n_features());
    for (auto i : rows) {
      auto r = row(i);
      vals.insert(vals.end(), r.begin(), r.end());
      labs.push_back(labels_.at(i));
    }
    Dataset out(name_, features_, std::move(vals), std::move(labs));
    out.label_order_ = label_order_;
    return out;
  }

  Dataset with_labels(std::vector<std::string> labels) const {
    return Dataset(name_, features_, values_, std::move(labels));
  }

  Dataset with_name(std::string name) const {
    Dataset out = *this;
    out.name_ = std::move(name);
    return out;
  }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    if (a.name_ != b.name_ || a.values_ != b.values_ || a.labels_ != b.labels_) return false;
    if (a.features_.size() != b.features_.size()) return false;
    for (std::size_t j = 0; j < a.features_.size(); ++j) {
      const auto& x = a.features_[j];
      const auto& y = b.features_[j];
      if (x.name != y.name || x.kind != y.kind || x.observed_min != y.observed_min ||
          x.observed_max != y.observed_max || x.levels != y.levels || x.level_names != y.level_names)
        return false;
    }
    return true;
  }

 private:
  std::string name_;
  std::vector<FeatureDescriptor> features_;
  std::vector<double> values_;
  std::vector<std::string> labels_;
  std::vector<std::string> label_order_;
};

/// Dataset with every feature value scaled into [0,1] and labels as codes.
class NormalizedDataset {
 public:
  NormalizedDataset() = default;
  NormalizedDataset(std::string name, std::vector<FeatureDescriptor> features, std::vector<double> values,
                    std::vector<std::size_t> label_codes, std::vector<std::string> label_names)
      : name_(std::move(name)),
        features_(std::move(features)),
        values_(std::move(values)),
        label_codes_(std::move(label_codes)),
        label_names_(std::move(label_names)) {
    if (values_.size() != label_codes_.size() * features_.size())
      throw Error(Errc::DimensionMismatch, "value table does not match samples x features");
    for (double v : values_)
      if (!(v >= 0.0 && v <= 1.0)) throw Error(Errc::OutOfRange, "normalized value outside [0,1]");
    for (auto c : label_codes_)
      if (c >= label_names_.size()) throw Error(Errc::OutOfRange, "label code without a name");
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t n_samples() const noexcept { return label_codes_.size(); }
  std::size_t n_features() const noexcept { return features_.size(); }
  std::size_t n_labels() const noexcept { return label_names_.size(); }
  const std::vector<FeatureDescriptor>& features() const noexcept { return features_; }
  const FeatureDescriptor& feature(std::size_t j) const { return features_.at(j); }
  std::span<const double> values() const noexcept { return values_; }
  double value(std::size_t i, std::size_t j) const { return values_[i * features_.size() + j]; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * features_.size(), features_.size()};
  }
  std::size_t label_code(std::size_t i) const { return label_codes_[i]; }
  const std::vector<std::size_t>& label_codes() const noexcept { return label_codes_; }
  const std::vector<std::string>& label_names() const noexcept { return label_names_; }
  const std::string& label_name(std::size_t i) const { return label_names_.at(label_codes_[i]); }

  /// Label code scaled to an equally spaced point in [0,1].
  double scaled_label(std::size_t code) const noexcept {
    return label_names_.size() <= 1 ? 0.0
                                    : static_cast<double>(code) / static_cast<double>(label_names_.size() - 1);
  }

  std::optional<std::size_t> feature_index(std::string_view name) const {
    for (std::size_t j = 0; j < features_.size(); ++j)
      if (features_[j].name == name) return j;
    return std::nullopt;
  }

  std::vector<std::string> feature_names() const {
    std::vector<std::string> out;
    for (const auto& f : features_) out.push_back(f.name);
    return out;
  }

  /// Resolves names to column indices.
  std::vector<std::size_t> indices_of(std::span<const std::string> names) const {
    std::vector<std::size_t> out;
    for (const auto& n : names) {
      auto j = feature_index(n);
      if (!j) throw Error(Errc::FeatureUniverseMismatch, "dataset '" + name_ + "' has no feature '" + n + "'");
      out.push_back(*j);
    }
    return out;
  }

  /// Same values viewed as a raw dataset with rescanned descriptors.
  Dataset as_dataset() const {
    std::vector<FeatureDescriptor> feats = features_;
    for (std::size_t j = 0; j < feats.size(); ++j) {
      std::vector<double> col(n_samples());
      for (std::size_t i = 0; i < col.size(); ++i) col[i] = value(i, j);
      feats[j].level_names.clear();
      rescan_descriptor(feats[j], col);
    }
    std::vector<std::string> labels;
    labels.reserve(n_samples());
    for (std::size_t i = 0; i < n_samples(); ++i) labels.push_back(label_name(i));
    return Dataset(name_, std::move(feats), values_, std::move(labels));
  }

  NormalizedDataset select_rows(std::span<const std::size_t> rows) const {
    std::vector<double> vals;
    std::vector<std::size_t> codes;
    for (auto i : rows) {
      auto r = row(i);
      vals.insert(vals.end(), r.begin(), r.end());
      codes.push_back(label_codes_.at(i));
    }
    return NormalizedDataset(name_, features_, std::move(vals), std::move(codes), label_names_);
  }

 private:
  std::string name_;
  std::vector<FeatureDescriptor> features_;
  std::vector<double> values_;
  std::vector<std::size_t> label_codes_;
  std::vector<std::string> label_names_;
};

/// Scales one raw value of a feature into [0,1].
inline double normalize_value(const FeatureDescriptor& fd, double v) {
  double out = 0.0;
  if ((fd.kind == FeatureKind::binary || fd.kind == FeatureKind::categorical) && !fd.levels.empty()) {
    if (fd.levels.size() == 1) return 0.0;
    auto it = std::lower_bound(fd.levels.begin(), fd.levels.end(), v);
    std::size_t pos = static_cast<std::size_t>(it - fd.levels.begin());
    if (it == fd.levels.end() || *it != v) {
      // unseen code: place it by its numeric position between neighbours
      if (pos == 0) return 0.0;
      if (pos >= fd.levels.size()) return 1.0;
      double lo = static_cast<double>(pos - 1), hi = static_cast<double>(pos);
      double t = (v - fd.levels[pos - 1]) / (fd.levels[pos] - fd.levels[pos - 1]);
      return (lo + t * (hi - lo)) / static_cast<double>(fd.levels.size() - 1);
    }
    out = static_cast<double>(pos) / static_cast<double>(fd.levels.size() - 1);
  } else {
    if (fd.is_constant()) return 0.0;
    out = (v - fd.observed_min) / (fd.observed_max - fd.observed_min);
  }
  return std::clamp(out, 0.0, 1.0);
}

/// Min-max scales continuous/discrete features, spaces binary/categorical
/// codes evenly in ascending order, sends constant features to 0, and encodes
/// labels as codes 0..k-1.
inline NormalizedDataset normalize(const Dataset& ds) {
  const std::size_t n = ds.n_samples(), d = ds.n_features();
  std::vector<double> vals(n * d);
  for (std::size_t j = 0; j < d; ++j) {
    const auto& fd = ds.feature(j);
    for (std::size_t i = 0; i < n; ++i) vals[i * d + j] = normalize_value(fd, ds.value(i, j));
  }
  std::vector<std::size_t> codes(n);
  const auto& order = ds.label_set();
  std::unordered_map<std::string, std::size_t> code_of;
  for (std::size_t c = 0; c < order.size(); ++c) code_of.emplace(order[c], c);
  for (std::size_t i = 0; i < n; ++i) codes[i] = code_of.at(ds.label(i));
  return NormalizedDataset(ds.name(), ds.features(), std::move(vals), std::move(codes), order);
}

inline NormalizedDataset normalize(const NormalizedDataset& ds) { return normalize(ds.as_dataset()); }

/// Declares features in different datasets to be the same quantity.
///
/// Each alias resolves to exactly one canonical name; several aliases may
/// share a canonical name (one dataset can split a quantity over several
/// columns). Canonical names cannot themselves be aliases of another name.
class AliasMap {
 public:
  AliasMap() = default;

  void add(const std::string& canonical, const std::string& alias) {
    if (canonical.empty() || alias.empty()) throw Error(Errc::MalformedAliasMap, "empty name in alias pair");
    pairs_.emplace_back(canonical, alias);
    if (canonical == alias) {
      if (auto it = to_canonical_.find(alias); it != to_canonical_.end() && it->second != canonical)
        throw Error(Errc::MalformedAliasMap, "'" + alias + "' is already an alias of '" + it->second + "'");
      canonicals_.insert(canonical);
      return;
    }
    if (auto it = to_canonical_.find(alias); it != to_canonical_.end() && it->second != canonical)
      throw Error(Errc::MalformedAliasMap,
                  "'" + alias + "' maps to both '" + it->second + "' and '" + canonical + "'");
    if (canonicals_.contains(alias))
      throw Error(Errc::MalformedAliasMap, "'" + alias + "' is used both as canonical name and alias");
    if (to_canonical_.contains(canonical))
      throw Error(Errc::MalformedAliasMap, "'" + canonical + "' is used both as canonical name and alias");
    to_canonical_[alias] = canonical;
    canonicals_.insert(canonical);
  }

  void merge(const AliasMap& other) {
    for (const auto& [c, a] : other.pairs_) add(c, a);
  }

  std::string canonical(const std::string& name) const {
    auto it = to_canonical_.find(name);
    return it == to_canonical_.end() ? name : it->second;
  }

  const std::vector<std::pair<std::string, std::string>>& pairs() const noexcept { return pairs_; }
  bool empty() const noexcept { return pairs_.empty(); }

  /// Throws UnknownFeatureInAlias unless every pair names at least one
  /// feature present in one of the universes.
  void check_against(std::span<const std::vector<std::string>> universes) const {
    std::set<std::string> present;
    for (const auto& u : universes) present.insert(u.begin(), u.end());
    for (const auto& [c, a] : pairs_)
      if (!present.contains(c) && !present.contains(a))
        throw Error(Errc::UnknownFeatureInAlias, "alias pair (" + c + ", " + a + ") names no known feature");
  }

 private:
  std::vector<std::pair<std::string, std::string>> pairs_;
  std::map<std::string, std::string> to_canonical_;
  std::set<std::string> canonicals_;
};

/// Features common to several datasets.
struct SharedUniverse {
  /// Canonical names present in every input, sorted.
  std::vector<std::string> canonical;
  /// Per input, its own feature names whose canonical form is shared (input order).
  std::vector<std::vector<std::string>> members;
};

inline SharedUniverse align(std::span<const std::vector<std::string>> universes, const AliasMap& aliases) {
  aliases.check_against(universes);
  SharedUniverse out;
  if (universes.empty()) return out;
  std::set<std::string> shared;
  for (const auto& n : universes[0]) shared.insert(aliases.canonical(n));
  for (std::size_t k = 1; k < universes.size(); ++k) {
    std::set<std::string> here;
    for (const auto& n : universes[k]) here.insert(aliases.canonical(n));
    std::set<std::string> keep;
    std::set_intersection(shared.begin(), shared.end(), here.begin(), here.end(),
                          std::inserter(keep, keep.end()));
    shared = std::move(keep);
  }
  out.canonical.assign(shared.begin(), shared.end());
  for (const auto& u : universes) {
    std::vector<std::string> m;
    for (const auto& n : u)
      if (shared.contains(aliases.canonical(n))) m.push_back(n);
    out.members.push_back(std::move(m));
  }
  return out;
}

inline SharedUniverse align(std::span<const Dataset> datasets, const AliasMap& aliases) {
  std::vector<std::vector<std::string>> universes;
  for (const auto& ds : datasets) universes.push_back(ds.feature_names());
  return align(std::span<const std::vector<std::string>>(universes), aliases);
}

/// Columns of `names` whose canonical form is in `wanted`, in dataset order.
inline std::vector<std::string> resolve_canonical(std::span<const std::string> names,
                                                  std::span<const std::string> wanted, const AliasMap& aliases) {
  std::set<std::string> want;
  for (const auto& w : wanted) want.insert(aliases.canonical(w));
  std::vector<std::string> out;
  for (const auto& n : names)
    if (want.contains(aliases.canonical(n))) out.push_back(n);
  return out;
}

}  // namespace frs
