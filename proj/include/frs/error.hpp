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

#include <stdexcept>
#include <string>
#include <string_view>

namespace frs {

/// Error categories raised by the library.
enum class Errc {
  // input / loading
  EmptyFile,
  MissingValue,
  UnknownLabelColumn,
  RaggedRow,
  MalformedHeader,
  UnsupportedAttributeType,
  UnknownFeatureInAlias,
  MalformedAliasMap,
  MalformedDocument,
  FileNotFound,
  // computation
  ArityMismatch,
  DimensionMismatch,
  NonDiscreteFeature,
  OutOfRange,
  EmptyInput,
  EmptySubset,
  DegenerateLabels,
  TooManyFeatures,
  NonFiniteValue,
  FeatureUniverseMismatch,
  InvalidArgument,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::MissingValue: return "MissingValue";
    case Errc::UnknownLabelColumn: return "UnknownLabelColumn";
    case Errc::RaggedRow: return "RaggedRow";
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::UnsupportedAttributeType: return "UnsupportedAttributeType";
    case Errc::UnknownFeatureInAlias: return "UnknownFeatureInAlias";
    case Errc::MalformedAliasMap: return "MalformedAliasMap";
    case Errc::MalformedDocument: return "MalformedDocument";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonDiscreteFeature: return "NonDiscreteFeature";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::EmptySubset: return "EmptySubset";
    case Errc::DegenerateLabels: return "DegenerateLabels";
    case Errc::TooManyFeatures: return "TooManyFeatures";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::FeatureUniverseMismatch: return "FeatureUniverseMismatch";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// True for errors caused by bad input files or arguments (as opposed to
/// failures inside a computation).
constexpr bool is_input_error(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyFile:
    case Errc::MissingValue:
    case Errc::UnknownLabelColumn:
    case Errc::RaggedRow:
    case Errc::MalformedHeader:
    case Errc::UnsupportedAttributeType:
    case Errc::UnknownFeatureInAlias:
    case Errc::MalformedAliasMap:
    case Errc::MalformedDocument:
    case Errc::FileNotFound:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace frs
