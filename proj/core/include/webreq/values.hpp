// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace webreq {

struct Segment {
  enum class Kind : std::uint8_t { Lit, Sym };
  Kind kind = Kind::Lit;
  std::string text;  // literal text, or the symbol name

  friend bool operator==(const Segment&, const Segment&) = default;
  friend auto operator<=>(const Segment&, const Segment&) = default;
};

/// A string whose parts are either known text or named unknowns.
///
/// Rendered form writes a symbol as `{name}`; literal braces are doubled so
/// that `parse(render())` is the identity.
class StringValue {
 public:
  StringValue() = default;

  static StringValue lit(std::string text);
  static StringValue sym(std::string name);

  /// Inverse of render(). Throws std::invalid_argument on unbalanced braces.
  static StringValue parse(std::string_view rendered);

  void append(const StringValue& other);
  void append_lit(std::string_view text);
  void append_sym(std::string name);

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  bool empty() const noexcept { return segments_.empty(); }
  bool is_literal() const noexcept;
  bool has_sym() const noexcept { return !is_literal(); }
  /// True when there is no literal text at all.
  bool is_fully_symbolic() const noexcept;
  /// True when the value is exactly one Sym segment.
  bool is_single_sym() const noexcept;
  /// Concatenated literal text; only meaningful when is_literal().
  std::string literal_text() const;
  /// Literal text before the first Sym segment.
  std::string literal_prefix() const;

  std::string render() const;

  friend bool operator==(const StringValue&, const StringValue&) = default;
  friend auto operator<=>(const StringValue&, const StringValue&) = default;

 private:
  std::vector<Segment> segments_;
};

StringValue concat(const StringValue& a, const StringValue& b);

/// Percent-encodes as JavaScript's encodeURI does; Sym segments pass through.
StringValue encode_uri(const StringValue& value);
std::string encode_uri(std::string_view text);

/// Structured request payload value.
class DataValue {
 public:
  enum class Kind : std::uint8_t { Obj, Arr, Str, Num, Bool, Null, Sym };

  DataValue() = default;

  /// Fields are kept sorted by key; for duplicate keys the last one wins.
  static DataValue object(std::vector<std::pair<std::string, DataValue>> fields);
  static DataValue array(std::vector<DataValue> items);
  /// A string consisting of a single Sym segment normalizes to Sym.
  static DataValue string(StringValue value);
  static DataValue number(double value);
  static DataValue boolean(bool value);
  static DataValue null();
  static DataValue symbol(std::string name);

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::pair<std::string, DataValue>>& fields() const noexcept { return fields_; }
  const std::vector<DataValue>& items() const noexcept { return items_; }
  const StringValue& str() const noexcept { return str_; }
  double num() const noexcept { return num_; }
  bool boolean_value() const noexcept { return bool_; }
  const std::string& sym_name() const noexcept { return sym_; }

  const DataValue* field(std::string_view key) const;
  /// True when no Sym appears anywhere inside.
  bool is_concrete() const;

  /// JSON form used in reports: Sym renders as "{name}", strings via
  /// StringValue::render.
  nlohmann::json to_json() const;
  static DataValue from_json(const nlohmann::json& j);

  friend bool operator==(const DataValue&, const DataValue&) = default;
  friend bool operator<(const DataValue& a, const DataValue& b) { return a.to_json().dump() < b.to_json().dump(); }

 private:
  Kind kind_ = Kind::Null;
  std::vector<std::pair<std::string, DataValue>> fields_;
  std::vector<DataValue> items_;
  StringValue str_;
  double num_ = 0.0;
  bool bool_ = false;
  std::string sym_;
};

}  // namespace webreq
