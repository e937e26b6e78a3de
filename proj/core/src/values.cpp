// SPDX-License-Identifier: Apache-2.0
#include "webreq/values.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "webreq/js/ast.hpp"

namespace webreq {

StringValue StringValue::lit(std::string text) {
  StringValue v;
  v.append_lit(text);
  return v;
}

StringValue StringValue::sym(std::string name) {
  StringValue v;
  v.append_sym(std::move(name));
  return v;
}

void StringValue::append_lit(std::string_view text) {
  if (text.empty()) return;
  if (!segments_.empty() && segments_.back().kind == Segment::Kind::Lit) {
    segments_.back().text += text;
  } else {
    segments_.push_back({Segment::Kind::Lit, std::string(text)});
  }
}

void StringValue::append_sym(std::string name) {
  segments_.push_back({Segment::Kind::Sym, std::move(name)});
}

void StringValue::append(const StringValue& other) {
  for (const Segment& s : other.segments_) {
    if (s.kind == Segment::Kind::Lit) {
      append_lit(s.text);
    } else {
      append_sym(s.text);
    }
  }
}

bool StringValue::is_literal() const noexcept {
  for (const Segment& s : segments_) {
    if (s.kind == Segment::Kind::Sym) return false;
  }
  return true;
}

bool StringValue::is_fully_symbolic() const noexcept {
  if (segments_.empty()) return false;
  for (const Segment& s : segments_) {
    if (s.kind == Segment::Kind::Lit) return false;
  }
  return true;
}

bool StringValue::is_single_sym() const noexcept {
  return segments_.size() == 1 && segments_.front().kind == Segment::Kind::Sym;
}

std::string StringValue::literal_text() const {
  std::string out;
  for (const Segment& s : segments_) {
    if (s.kind == Segment::Kind::Lit) out += s.text;
  }
  return out;
}

std::string StringValue::literal_prefix() const {
  if (!segments_.empty() && segments_.front().kind == Segment::Kind::Lit) return segments_.front().text;
  return {};
}

std::string StringValue::render() const {
  std::string out;
  for (const Segment& s : segments_) {
    if (s.kind == Segment::Kind::Sym) {
      out += '{';
      out += s.text;
      out += '}';
      continue;
    }
    for (char c : s.text) {
      if (c == '{' || c == '}') out += c;
      out += c;
    }
  }
  return out;
}

StringValue StringValue::parse(std::string_view rendered) {
  StringValue v;
  std::string lit;
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    const char c = rendered[i];
    if (c == '{' && i + 1 < rendered.size() && rendered[i + 1] == '{') {
      lit += '{';
      ++i;
    } else if (c == '}' && i + 1 < rendered.size() && rendered[i + 1] == '}') {
      lit += '}';
      ++i;
    } else if (c == '{') {
      const auto close = rendered.find('}', i + 1);
      if (close == std::string_view::npos) throw std::invalid_argument("unterminated symbol in string value");
      v.append_lit(lit);
      lit.clear();
      v.append_sym(std::string(rendered.substr(i + 1, close - i - 1)));
      i = close;
    } else if (c == '}') {
      throw std::invalid_argument("unbalanced '}' in string value");
    } else {
      lit += c;
    }
  }
  v.append_lit(lit);
  return v;
}

StringValue concat(const StringValue& a, const StringValue& b) {
  StringValue out = a;
  out.append(b);
  return out;
}

std::string encode_uri(std::string_view text) {
  static constexpr std::string_view unreserved = ";,/?:@&=+$-_.!~*'()#";
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) != 0 && c < 0x80) {
      out += ch;
    } else if (unreserved.find(ch) != std::string_view::npos) {
      out += ch;
    } else {
      // Source strings are UTF-8, so each byte is percent-encoded as is.
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

StringValue encode_uri(const StringValue& value) {
  StringValue out;
  for (const Segment& s : value.segments()) {
    if (s.kind == Segment::Kind::Lit) {
      out.append_lit(encode_uri(s.text));
    } else {
      out.append_sym(s.text);
    }
  }
  return out;
}

DataValue DataValue::object(std::vector<std::pair<std::string, DataValue>> fields) {
  DataValue v;
  v.kind_ = Kind::Obj;
  // Canonical order: sorted by key, later duplicates win.
  std::stable_sort(fields.begin(), fields.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& f : fields) {
    if (!v.fields_.empty() && v.fields_.back().first == f.first) {
      v.fields_.back().second = std::move(f.second);
    } else {
      v.fields_.push_back(std::move(f));
    }
  }
  return v;
}

DataValue DataValue::array(std::vector<DataValue> items) {
  DataValue v;
  v.kind_ = Kind::Arr;
  v.items_ = std::move(items);
  return v;
}

DataValue DataValue::string(StringValue value) {
  if (value.is_single_sym()) return symbol(value.segments().front().text);
  DataValue v;
  v.kind_ = Kind::Str;
  v.str_ = std::move(value);
  return v;
}

DataValue DataValue::number(double value) {
  DataValue v;
  v.kind_ = Kind::Num;
  v.num_ = value;
  return v;
}

DataValue DataValue::boolean(bool value) {
  DataValue v;
  v.kind_ = Kind::Bool;
  v.bool_ = value;
  return v;
}

DataValue DataValue::null() { return DataValue{}; }

DataValue DataValue::symbol(std::string name) {
  DataValue v;
  v.kind_ = Kind::Sym;
  v.sym_ = std::move(name);
  return v;
}

const DataValue* DataValue::field(std::string_view key) const {
  for (const auto& [k, v] : fields_) {
    if (k == key) return &v;
  }
  return nullptr;
}

bool DataValue::is_concrete() const {
  switch (kind_) {
    case Kind::Sym:
      return false;
    case Kind::Str:
      return str_.is_literal();
    case Kind::Obj:
      for (const auto& [k, v] : fields_) {
        if (!v.is_concrete()) return false;
      }
      return true;
    case Kind::Arr:
      for (const auto& v : items_) {
        if (!v.is_concrete()) return false;
      }
      return true;
    default:
      return true;
  }
}

nlohmann::json DataValue::to_json() const {
  switch (kind_) {
    case Kind::Obj: {
      auto j = nlohmann::json::object();
      for (const auto& [k, v] : fields_) j[k] = v.to_json();
      return j;
    }
    case Kind::Arr: {
      auto j = nlohmann::json::array();
      for (const auto& v : items_) j.push_back(v.to_json());
      return j;
    }
    case Kind::Str:
      return str_.render();
    case Kind::Num:
      if (std::isfinite(num_) && std::trunc(num_) == num_ && std::fabs(num_) < 9.0e15) {
        return static_cast<std::int64_t>(num_);
      }
      if (!std::isfinite(num_)) return js::number_to_string(num_);
      return num_;
    case Kind::Bool:
      return bool_;
    case Kind::Null:
      return nullptr;
    case Kind::Sym:
      return "{" + sym_ + "}";
  }
  return nullptr;
}

DataValue DataValue::from_json(const nlohmann::json& j) {
  if (j.is_object()) {
    std::vector<std::pair<std::string, DataValue>> fields;
    for (const auto& [k, v] : j.items()) fields.emplace_back(k, from_json(v));
    return object(std::move(fields));
  }
  if (j.is_array()) {
    std::vector<DataValue> items;
    for (const auto& v : j) items.push_back(from_json(v));
    return array(std::move(items));
  }
  if (j.is_string()) return string(StringValue::parse(j.get<std::string>()));
  if (j.is_number()) return number(j.get<double>());
  if (j.is_boolean()) return boolean(j.get<bool>());
  return null();
}

}  // namespace webreq
