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
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "frs/dataset.hpp"
#include "frs/error.hpp"

namespace frs {

/// Integer-valued columns with at most this many distinct values are
/// inferred as categorical, larger ones as discrete.
inline constexpr std::size_t kMaxCategoricalLevels = 10;

struct LoadOptions {
  /// Decision column; empty selects the format default.
  std::string label_column;
  /// Kind overrides by feature name.
  std::map<std::string, FeatureKind> schema_hints;
  /// Columns to discard (identifiers and the like).
  std::set<std::string> drop_columns;
  /// Dataset name; empty uses the file stem.
  std::string name;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileNotFound, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);
  return text;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// RFC 4180 records: quoted fields, doubled quotes, CRLF or LF endings.
/// Blank lines are skipped.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text, char quote = '"') {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false, field_started = false, any = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    if (any) {
      end_field();
      records.push_back(std::move(record));
    }
    record.clear();
    field.clear();
    any = false;
    field_started = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == quote) {
        if (i + 1 < text.size() && text[i + 1] == quote) {
          field.push_back(quote);
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == quote && !field_started) {
      in_quotes = true;
      field_started = true;
      any = true;
    } else if (c == ',') {
      any = true;
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;
      end_record();
    } else {
      field.push_back(c);
      if (!std::isspace(static_cast<unsigned char>(c))) field_started = true;
      any = true;
    }
  }
  end_record();
  return records;
}

inline bool is_missing_token(std::string_view s) {
  s = trim(s);
  return s.empty() || s == "?";
}

inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos && trim(s) == s) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

struct RawColumn {
  std::string name;
  std::vector<std::string> tokens;
};

inline FeatureKind infer_numeric_kind(const std::vector<double>& values) {
  std::set<double> distinct(values.begin(), values.end());
  if (distinct.size() <= 2) return FeatureKind::binary;
  bool integral = std::all_of(distinct.begin(), distinct.end(), [](double v) { return std::floor(v) == v; });
  if (!integral) return FeatureKind::continuous;
  return distinct.size() <= kMaxCategoricalLevels ? FeatureKind::categorical : FeatureKind::discrete;
}

/// Builds a feature from its text tokens. Numeric columns keep their values;
/// other columns become categorical codes in sorted token order.
inline FeatureDescriptor build_feature(const RawColumn& col, std::vector<double>& out_values,
                                       std::optional<FeatureKind> hint, std::optional<FeatureKind> declared) {
  FeatureDescriptor fd;
  fd.name = col.name;
  out_values.resize(col.tokens.size());
  bool numeric = true;
  for (std::size_t i = 0; i < col.tokens.size(); ++i) {
    auto v = parse_number(col.tokens[i]);
    if (!v) {
      numeric = false;
      break;
    }
    out_values[i] = *v;
  }
  if (!numeric) {
    std::set<std::string> distinct;
    for (const auto& t : col.tokens) distinct.insert(std::string(trim(t)));
    fd.level_names.assign(distinct.begin(), distinct.end());
    for (std::size_t i = 0; i < col.tokens.size(); ++i) {
      auto it = std::lower_bound(fd.level_names.begin(), fd.level_names.end(), std::string(trim(col.tokens[i])));
      out_values[i] = static_cast<double>(it - fd.level_names.begin());
    }
    fd.kind = fd.level_names.size() <= 2 ? FeatureKind::binary : FeatureKind::categorical;
  } else {
    fd.kind = declared ? *declared : infer_numeric_kind(out_values);
  }
  if (hint) fd.kind = *hint;
  rescan_descriptor(fd, out_values);
  return fd;
}

inline Dataset assemble(const std::string& name, const std::vector<RawColumn>& columns, std::size_t label_col,
                        const LoadOptions& opt, const std::vector<std::optional<FeatureKind>>& declared,
                        const std::vector<std::vector<std::string>>& declared_levels = {}) {
  const std::size_t n = columns.empty() ? 0 : columns[0].tokens.size();
  if (n == 0) throw Error(Errc::EmptyFile, "'" + name + "' has a header but no data rows");
  std::vector<FeatureDescriptor> feats;
  std::vector<std::vector<double>> cols;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c == label_col || opt.drop_columns.contains(columns[c].name)) continue;
    std::optional<FeatureKind> hint;
    if (auto it = opt.schema_hints.find(columns[c].name); it != opt.schema_hints.end()) hint = it->second;
    std::vector<double> vals;
    auto fd = build_feature(columns[c], vals, hint, declared.empty() ? std::nullopt : declared[c]);
    if (!declared_levels.empty() && !declared_levels[c].empty() && !fd.level_names.empty()) {
      // nominal strings keep their declaration order as codes
      const auto& decl = declared_levels[c];
      for (std::size_t i = 0; i < vals.size(); ++i) {
        const auto& tok = fd.level_names[static_cast<std::size_t>(vals[i])];
        vals[i] = static_cast<double>(std::find(decl.begin(), decl.end(), tok) - decl.begin());
      }
      fd.level_names = decl;
      rescan_descriptor(fd, vals);
    }
    feats.push_back(std::move(fd));
    cols.push_back(std::move(vals));
  }
  std::vector<double> values(n * feats.size());
  for (std::size_t j = 0; j < feats.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) values[i * feats.size() + j] = cols[j][i];
  std::vector<std::string> labels;
  labels.reserve(n);
  for (const auto& t : columns[label_col].tokens) labels.emplace_back(trim(t));
  return Dataset(name, std::move(feats), std::move(values), std::move(labels));
}

inline std::string stem_of(const std::filesystem::path& path) { return path.stem().string(); }

}  // namespace detail

/// Reads a CSV file with a header row. The label column defaults to the last
/// column when options.label_column is empty.
inline Dataset parse_csv_dataset(std::string_view text, const std::string& name, const LoadOptions& opt = {}) {
  auto records = detail::parse_csv(text);
  if (records.empty()) throw Error(Errc::EmptyFile, "'" + name + "' is empty");
  const auto& header = records[0];
  std::vector<detail::RawColumn> columns(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) columns[c].name = std::string(detail::trim(header[c]));
  std::size_t label_col = header.size() - 1;
  if (!opt.label_column.empty()) {
    auto it = std::find_if(columns.begin(), columns.end(),
                           [&](const detail::RawColumn& c) { return c.name == opt.label_column; });
    if (it == columns.end())
      throw Error(Errc::UnknownLabelColumn, "no column '" + opt.label_column + "' in '" + name + "'");
    label_col = static_cast<std::size_t>(it - columns.begin());
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size())
      throw Error(Errc::RaggedRow, "row " + std::to_string(r) + " has " + std::to_string(rec.size()) +
                                       " fields, expected " + std::to_string(header.size()));
    for (std::size_t c = 0; c < rec.size(); ++c) {
      if (opt.drop_columns.contains(columns[c].name)) {
        columns[c].tokens.emplace_back();
        continue;
      }
      if (detail::is_missing_token(rec[c]))
        throw Error(Errc::MissingValue, "row " + std::to_string(r) + ", column '" + columns[c].name + "'");
      columns[c].tokens.push_back(rec[c]);
    }
  }
  return detail::assemble(name, columns, label_col, opt, {});
}

inline Dataset load_csv(const std::filesystem::path& path, const LoadOptions& opt = {}) {
  return parse_csv_dataset(detail::read_file(path), opt.name.empty() ? detail::stem_of(path) : opt.name, opt);
}

/// Writes the dataset as CSV with the label as last column.
inline void write_csv(std::ostream& out, const Dataset& ds, const std::string& label_column = "label") {
  for (const auto& f : ds.features()) out << detail::csv_escape(f.name) << ',';
  out << detail::csv_escape(label_column) << '\n';
  for (std::size_t i = 0; i < ds.n_samples(); ++i) {
    for (std::size_t j = 0; j < ds.n_features(); ++j) {
      const auto& fd = ds.feature(j);
      double v = ds.value(i, j);
      if (!fd.level_names.empty())
        out << detail::csv_escape(fd.level_names.at(static_cast<std::size_t>(v)));
      else
        out << detail::format_number(v);
      out << ',';
    }
    out << detail::csv_escape(ds.label(i)) << '\n';
  }
}

inline void write_csv(std::ostream& out, const NormalizedDataset& ds, const std::string& label_column = "label") {
  for (const auto& f : ds.features()) out << detail::csv_escape(f.name) << ',';
  out << detail::csv_escape(label_column) << '\n';
  for (std::size_t i = 0; i < ds.n_samples(); ++i) {
    for (std::size_t j = 0; j < ds.n_features(); ++j) out << detail::format_number(ds.value(i, j)) << ',';
    out << detail::csv_escape(ds.label_name(i)) << '\n';
  }
}

namespace detail {

/// Splits an ARFF token list honouring ' and " quoting.
inline std::vector<std::string> split_arff_values(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  char q = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (q) {
      if (c == '\\' && i + 1 < line.size()) {
        cur.push_back(line[++i]);
      } else if (c == q) {
        q = 0;
      } else {
        cur.push_back(c);
      }
    } else if ((c == '\'' || c == '"') && trim(cur).empty()) {
      q = c;
      quoted = true;
      cur.clear();
    } else if (c == ',') {
      out.push_back(quoted ? cur : std::string(trim(cur)));
      cur.clear();
      quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(quoted ? cur : std::string(trim(cur)));
  return out;
}

/// Reads a possibly quoted ARFF identifier from the front of s.
inline std::string take_identifier(std::string_view& s) {
  s = trim(s);
  std::string out;
  if (!s.empty() && (s.front() == '\'' || s.front() == '"')) {
    char q = s.front();
    std::size_t i = 1;
    for (; i < s.size() && s[i] != q; ++i) {
      if (s[i] == '\\' && i + 1 < s.size()) ++i;
      out.push_back(s[i]);
    }
    if (i >= s.size()) throw Error(Errc::MalformedHeader, "unterminated quoted name");
    s.remove_prefix(i + 1);
  } else {
    std::size_t i = 0;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '{') ++i;
    out = std::string(s.substr(0, i));
    s.remove_prefix(i);
  }
  return out;
}

}  // namespace detail

/// Reads the @relation/@attribute/@data subset of ARFF with numeric and
/// nominal attributes. The label is options.label_column, else an attribute
/// named "Result" or "class", else the last attribute.
inline Dataset parse_arff_dataset(std::string_view text, const std::string& fallback_name,
                                  const LoadOptions& opt = {}) {
  std::string name = fallback_name;
  std::vector<detail::RawColumn> columns;
  std::vector<std::optional<FeatureKind>> declared;
  std::vector<std::vector<std::string>> nominal_levels;
  bool in_data = false;
  std::size_t data_row = 0;
  std::istringstream lines{std::string(text)};
  std::string raw;
  while (std::getline(lines, raw)) {
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '%') continue;
    if (!in_data) {
      if (line.front() != '@') throw Error(Errc::MalformedHeader, "unexpected header line '" + raw + "'");
      std::size_t sp = 0;
      while (sp < line.size() && !std::isspace(static_cast<unsigned char>(line[sp]))) ++sp;
      std::string keyword = detail::lower(line.substr(0, sp));
      std::string_view rest = line.substr(sp);
      if (keyword == "@relation") {
        auto rel = detail::take_identifier(rest);
        if (name.empty()) name = rel;
      } else if (keyword == "@attribute") {
        detail::RawColumn col;
        col.name = detail::take_identifier(rest);
        if (col.name.empty()) throw Error(Errc::MalformedHeader, "attribute without a name");
        rest = detail::trim(rest);
        if (!rest.empty() && rest.front() == '{') {
          auto close = rest.rfind('}');
          if (close == std::string_view::npos) throw Error(Errc::MalformedHeader, "unterminated nominal list");
          auto vals = detail::split_arff_values(rest.substr(1, close - 1));
          nominal_levels.push_back(vals);
          declared.push_back(vals.size() <= 2 ? std::optional(FeatureKind::binary)
                                              : std::optional(FeatureKind::categorical));
        } else {
          std::string type = detail::lower(detail::trim(rest));
          nominal_levels.emplace_back();
          if (type == "numeric" || type == "real")
            declared.push_back(FeatureKind::continuous);
          else if (type == "integer")
            declared.push_back(FeatureKind::discrete);
          else if (type.rfind("string", 0) == 0 || type.rfind("date", 0) == 0 || type.rfind("relational", 0) == 0)
            throw Error(Errc::UnsupportedAttributeType, "attribute '" + col.name + "' has type " + type);
          else
            throw Error(Errc::MalformedHeader, "attribute '" + col.name + "' has unknown type '" + type + "'");
        }
        columns.push_back(std::move(col));
      } else if (keyword == "@data") {
        if (columns.empty()) throw Error(Errc::MalformedHeader, "@data before any @attribute");
        in_data = true;
      } else {
        throw Error(Errc::MalformedHeader, "unknown declaration '" + keyword + "'");
      }
      continue;
    }
    ++data_row;
    if (line.front() == '{') throw Error(Errc::MalformedHeader, "sparse ARFF rows are not supported");
    auto vals = detail::split_arff_values(line);
    if (vals.size() != columns.size())
      throw Error(Errc::RaggedRow, "row " + std::to_string(data_row) + " has " + std::to_string(vals.size()) +
                                       " values, expected " + std::to_string(columns.size()));
    for (std::size_t c = 0; c < vals.size(); ++c) {
      if (opt.drop_columns.contains(columns[c].name)) {
        columns[c].tokens.emplace_back("0");
        continue;
      }
      if (detail::is_missing_token(vals[c]))
        throw Error(Errc::MissingValue, "row " + std::to_string(data_row) + ", attribute '" + columns[c].name + "'");
      const auto& levels = nominal_levels[c];
      if (!levels.empty() && std::find(levels.begin(), levels.end(), vals[c]) == levels.end())
        throw Error(Errc::MalformedHeader, "value '" + vals[c] + "' not declared for '" + columns[c].name + "'");
      columns[c].tokens.push_back(vals[c]);
    }
  }
  if (!in_data) throw Error(Errc::MalformedHeader, "no @data section");

  std::size_t label_col = columns.size() - 1;
  if (!opt.label_column.empty()) {
    auto it = std::find_if(columns.begin(), columns.end(),
                           [&](const detail::RawColumn& c) { return c.name == opt.label_column; });
    if (it == columns.end()) throw Error(Errc::UnknownLabelColumn, "no attribute '" + opt.label_column + "'");
    label_col = static_cast<std::size_t>(it - columns.begin());
  } else {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      auto l = detail::lower(columns[c].name);
      if (l == "result" || l == "class") label_col = c;
    }
  }
  // Nominal attributes whose declared values are all numbers keep those numbers
  // as codes; other nominal attributes use declaration order.
  std::vector<std::vector<std::string>> string_levels(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto& lv = nominal_levels[c];
    bool numeric = std::all_of(lv.begin(), lv.end(), [](const std::string& s) { return detail::parse_number(s).has_value(); });
    if (!lv.empty() && !numeric) string_levels[c] = lv;
  }
  return detail::assemble(name, columns, label_col, opt, declared, string_levels);
}

inline Dataset load_arff(const std::filesystem::path& path, const LoadOptions& opt = {}) {
  return parse_arff_dataset(detail::read_file(path), opt.name.empty() ? detail::stem_of(path) : opt.name, opt);
}

/// Chooses the reader by file extension (.arff, everything else CSV).
inline Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& opt = {}) {
  if (detail::lower(path.extension().string()) == ".arff") return load_arff(path, opt);
  return load_csv(path, opt);
}

/// Two-column CSV with a header row: canonical name, alias.
inline AliasMap parse_alias_map(std::string_view text) {
  auto records = detail::parse_csv(text);
  if (records.empty()) throw Error(Errc::MalformedAliasMap, "alias map has no header row");
  AliasMap map;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != 2)
      throw Error(Errc::MalformedAliasMap, "alias row " + std::to_string(r) + " does not have two columns");
    map.add(std::string(detail::trim(rec[0])), std::string(detail::trim(rec[1])));
  }
  return map;
}

inline AliasMap load_alias_map(const std::filesystem::path& path) { return parse_alias_map(detail::read_file(path)); }

}  // namespace frs
