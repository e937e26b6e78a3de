// SPDX-License-Identifier: Apache-2.0
#include "webreq/checker.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace webreq {

std::string_view outcome_name(Outcome o) noexcept {
  switch (o) {
    case Outcome::Consistent: return "Consistent";
    case Outcome::Unresolved: return "Unresolved";
    case Outcome::NoSpecMatched: return "NoSpecMatched";
    case Outcome::PathMismatch: return "PathMismatch";
    case Outcome::MethodMismatch: return "MethodMismatch";
    case Outcome::PayloadMismatch: return "PayloadMismatch";
    case Outcome::QueryMismatch: return "QueryMismatch";
  }
  return "?";
}

std::optional<Outcome> parse_outcome(std::string_view name) noexcept {
  for (Outcome o : kAllOutcomes) {
    if (outcome_name(o) == name) return o;
  }
  return std::nullopt;
}

bool is_mismatch(Outcome o) noexcept { return o != Outcome::Consistent && o != Outcome::Unresolved; }

namespace {

std::string percent_decode(std::string_view s) {
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && hex(s[i + 1]) >= 0 && hex(s[i + 2]) >= 0) {
      out += static_cast<char>(hex(s[i + 1]) * 16 + hex(s[i + 2]));
      i += 2;
    } else if (s[i] == '+') {
      out += ' ';
    } else {
      out += s[i];
    }
  }
  return out;
}

// Drops the first `n` characters of literal text.
StringValue drop_prefix(const StringValue& v, std::size_t n) {
  StringValue out;
  for (const Segment& s : v.segments()) {
    if (n > 0 && s.kind == Segment::Kind::Lit) {
      const std::size_t take = std::min(n, s.text.size());
      n -= take;
      out.append_lit(std::string_view(s.text).substr(take));
    } else {
      out.append(s.kind == Segment::Kind::Lit ? StringValue::lit(s.text) : StringValue::sym(s.text));
    }
  }
  return out;
}

// Plain JSON to DataValue; strings stay literal even if they contain braces.
DataValue plain_data(const nlohmann::json& j) {
  if (j.is_object()) {
    std::vector<std::pair<std::string, DataValue>> fields;
    for (const auto& [k, v] : j.items()) fields.emplace_back(k, plain_data(v));
    return DataValue::object(std::move(fields));
  }
  if (j.is_array()) {
    std::vector<DataValue> items;
    for (const auto& v : j) items.push_back(plain_data(v));
    return DataValue::array(std::move(items));
  }
  if (j.is_string()) return DataValue::string(StringValue::lit(j.get<std::string>()));
  if (j.is_boolean()) return DataValue::boolean(j.get<bool>());
  if (j.is_number()) return DataValue::number(j.get<double>());
  return DataValue::null();
}

// "a=1&b=2" as an object of string fields.
std::optional<DataValue> form_data(const std::string& text) {
  if (text.empty() || text.find('=') == std::string::npos) return std::nullopt;
  std::vector<std::pair<std::string, DataValue>> fields;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto amp = text.find('&', start);
    const std::string pair = text.substr(start, amp == std::string::npos ? std::string::npos : amp - start);
    if (!pair.empty()) {
      const auto eq = pair.find('=');
      fields.emplace_back(percent_decode(pair.substr(0, eq)),
                          DataValue::string(StringValue::lit(eq == std::string::npos ? "" : percent_decode(pair.substr(eq + 1)))));
    }
    if (amp == std::string::npos) break;
    start = amp + 1;
  }
  return DataValue::object(std::move(fields));
}

void collect_missing(const DataValue& data, const SchemaDef& schema, const std::string& prefix,
                     std::vector<std::string>& out) {
  switch (data.kind()) {
    case DataValue::Kind::Sym:
      return;
    case DataValue::Kind::Str: {
      if (!data.str().is_literal()) return;
      const std::string text = data.str().literal_text();
      auto parsed = nlohmann::json::parse(text, nullptr, false);
      if (!parsed.is_discarded()) {
        collect_missing(plain_data(parsed), schema, prefix, out);
        return;
      }
      if (auto form = form_data(text)) {
        collect_missing(*form, schema, prefix, out);
        return;
      }
      for (const std::string& r : schema.required) out.push_back(prefix + r);
      return;
    }
    case DataValue::Kind::Obj:
      for (const std::string& r : schema.required) {
        if (data.field(r) == nullptr) out.push_back(prefix + r);
      }
      for (const auto& [key, value] : data.fields()) {
        auto it = schema.properties.find(key);
        if (it != schema.properties.end() && it->second) collect_missing(value, *it->second, prefix + key + ".", out);
      }
      return;
    case DataValue::Kind::Arr:
      if (schema.items) {
        for (const DataValue& item : data.items()) collect_missing(item, *schema.items, prefix + "[].", out);
      }
      return;
    default:
      for (const std::string& r : schema.required) out.push_back(prefix + r);
      return;
  }
}

std::string render_segments(const std::vector<StringValue>& segs) {
  std::string out;
  for (const StringValue& s : segs) out += "/" + (s.is_literal() ? s.literal_text() : std::string("*"));
  return out.empty() ? "/" : out;
}

std::string render_template(const std::vector<TemplateSegment>& segs) {
  std::string out;
  for (const TemplateSegment& s : segs) out += "/" + (s.variable ? std::string("*") : s.text);
  return out.empty() ? "/" : out;
}

bool is_sym_method(const std::string& m) { return !m.empty() && m.front() == '{'; }

bool looks_absolute(std::string_view p) {
  const auto scheme = p.find(':');
  if (p.rfind("//", 0) == 0) return true;
  if (scheme == std::string_view::npos) {
    // Possibly a scheme that is still being spelled out.
    return !p.empty() && (std::string_view("https").rfind(p, 0) == 0);
  }
  return p.substr(0, scheme) == "http" || p.substr(0, scheme) == "https";
}

// True when a Sym may still change which base URL applies.
bool symbolic_base(const StringValue& url, const SpecIndex& index) {
  if (url.is_literal()) return false;
  const std::string prefix = normalize_url_origin(url.literal_prefix());
  if (prefix.empty()) return true;
  if (!looks_absolute(prefix)) return false;
  std::size_t auth = prefix.rfind("//", 0) == 0 ? 2 : prefix.find("://");
  if (auth == std::string::npos) return true;
  if (auth != 2) auth += 3;
  if (prefix.find('/', auth) == std::string::npos) return true;
  return std::any_of(index.entries().begin(), index.entries().end(),
                     [&](const SpecIndex::Entry& e) { return e.base_url.rfind(prefix, 0) == 0; });
}

struct Stage {
  int depth = -1;
  bool payload_failed = false;
  Finding evidence;
};

void add_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

struct Endpoint {
  const ApiSpec* spec;
  const PathItem* item;
  const OperationDef* op;
};

}  // namespace

UrlParts split_url(const StringValue& rest) {
  UrlParts parts;
  parts.full = rest;
  enum class State { Path, Key, Value, Fragment } state = State::Path;
  StringValue current;
  std::string key;
  bool key_symbolic = false;
  StringValue value;

  auto finish_pair = [&]() {
    if (key_symbolic) {
      parts.query_unresolved = true;
    } else if (!key.empty() || !value.empty()) {
      parts.query.push_back({percent_decode(key), value});
    }
    key.clear();
    value = StringValue{};
    key_symbolic = false;
  };

  for (const Segment& seg : rest.segments()) {
    if (seg.kind == Segment::Kind::Sym) {
      switch (state) {
        case State::Path: current.append_sym(seg.text); break;
        case State::Key: key_symbolic = true; break;
        case State::Value: value.append_sym(seg.text); break;
        case State::Fragment: break;
      }
      continue;
    }
    for (char c : seg.text) {
      switch (state) {
        case State::Path:
          if (c == '/') {
            parts.segments.push_back(std::move(current));
            current = StringValue{};
          } else if (c == '?' || c == '#') {
            parts.segments.push_back(std::move(current));
            current = StringValue{};
            state = c == '?' ? State::Key : State::Fragment;
          } else {
            current.append_lit(std::string(1, c));
          }
          break;
        case State::Key:
        case State::Value:
          if (c == '&' || c == '#') {
            finish_pair();
            state = c == '&' ? State::Key : State::Fragment;
          } else if (c == '=' && state == State::Key) {
            state = State::Value;
          } else if (state == State::Key) {
            key += c;
          } else {
            value.append_lit(std::string(1, c));
          }
          break;
        case State::Fragment:
          break;
      }
    }
  }
  if (state == State::Path) parts.segments.push_back(std::move(current));
  if (state == State::Key || state == State::Value) finish_pair();

  // A trailing variable in the path or in a key may carry further path or
  // query text; one in a value position is taken to be that value.
  if (!rest.segments().empty() && rest.segments().back().kind == Segment::Kind::Sym &&
      (state == State::Path || state == State::Key)) {
    parts.query_unresolved = true;
  }
  auto& segs = parts.segments;
  if (!segs.empty() && segs.front().empty()) segs.erase(segs.begin());
  if (!segs.empty() && segs.back().empty()) segs.pop_back();
  return parts;
}

bool segment_matches(const StringValue& url_segment, const TemplateSegment& tmpl) {
  if (tmpl.variable) return true;
  if (!url_segment.is_literal()) return true;
  return url_segment.literal_text() == tmpl.text;
}

bool path_matches(const std::vector<StringValue>& url_segments, const std::vector<TemplateSegment>& tmpl) {
  if (url_segments.size() != tmpl.size()) return false;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (!segment_matches(url_segments[i], tmpl[i])) return false;
  }
  return true;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::vector<std::string> missing_properties(const DataValue& data, const SchemaDef& schema) {
  std::vector<std::string> out;
  collect_missing(data, schema, "", out);
  return out;
}

Finding check_request(const RequestDescriptor& request, const SpecIndex& index, const CheckOptions& options) {
  std::vector<std::string> methods = request.methods;
  if (methods.empty()) methods = {"GET"};
  std::vector<std::optional<DataValue>> datas;
  for (const DataValue& d : request.data) datas.emplace_back(d);
  if (datas.empty()) datas.emplace_back(std::nullopt);

  Stage best;
  bool any_symbolic_base = false;
  std::vector<std::string> tried;
  std::vector<std::string> matched_specs;

  // Records evidence for a combination that reached `depth`.
  auto reach = [&](int depth) -> Finding* {
    if (depth < best.depth) return nullptr;
    if (depth > best.depth) {
      best.depth = depth;
      best.payload_failed = false;
      best.evidence = Finding{};
    }
    return &best.evidence;
  };

  for (const StringValue& url : request.urls) {
    add_unique(tried, url.render());
    const std::string prefix = url.is_literal() ? url.literal_text() : url.literal_prefix();
    const std::string normalized = normalize_url_origin(prefix);

    std::vector<const SpecIndex::Entry*> entries;
    std::set<const ApiSpec*> seen;
    for (const SpecIndex::Entry* e : index.match(prefix)) {
      std::size_t base_len = e->base_url.size();
      if (normalized.rfind("//", 0) == 0) base_len -= e->base_url.find("://") + 1;
      // The boundary after the base must be literal text.
      if (!url.is_literal() && normalized.size() <= base_len) continue;
      if (seen.insert(e->spec.get()).second) entries.push_back(e);
    }

    if (entries.empty()) {
      const bool sym = symbolic_base(url, index);
      any_symbolic_base |= sym;
      if (Finding* f = reach(0)) {
        // A port in the authority only matches a spec host that names it.
        const auto scheme_end = normalized.find("://");
        if (scheme_end != std::string::npos) {
          const auto auth_end = normalized.find_first_of("/?#", scheme_end + 3);
          const std::string authority = normalized.substr(scheme_end + 3, auth_end - scheme_end - 3);
          if (const auto colon = authority.find(':'); colon != std::string::npos) {
            const std::string without_port = normalized.substr(0, scheme_end + 3) + authority.substr(0, colon) +
                                             (auth_end == std::string::npos ? "" : normalized.substr(auth_end));
            if (!index.match(without_port).empty()) add_unique(f->notes, "port number in URL: " + authority);
          }
        }
        if (sym) add_unique(f->notes, "symbolic value in base URL");
      }
      continue;
    }

    for (const SpecIndex::Entry* entry : entries) {
      const ApiSpec& spec = *entry->spec;
      add_unique(matched_specs, spec.title.empty() ? spec.origin : spec.title);
      std::size_t base_len = entry->base_url.size();
      if (normalized.rfind("//", 0) == 0) base_len -= entry->base_url.find("://") + 1;
      UrlParts parts = split_url(drop_prefix(url, base_len));
      parts.base = entry->base_url;

      std::vector<const PathItem*> items;
      for (const PathItem& item : spec.paths) {
        if (path_matches(parts.segments, item.segments)) items.push_back(&item);
      }
      if (items.empty()) {
        if (Finding* f = reach(1)) {
          const std::string path = render_segments(parts.segments);
          for (const PathItem& item : spec.paths) {
            if (edit_distance(path, render_template(item.segments)) <= 2) add_unique(f->nearest, item.path);
          }
          if (!f->nearest.empty()) add_unique(f->notes, "possible typo");
        }
        continue;
      }

      for (const std::string& method : methods) {
        std::vector<Endpoint> endpoints;
        for (const PathItem* item : items) {
          for (const auto& [m, op] : item->operations) {
            if (is_sym_method(method) || m == method) endpoints.push_back({&spec, item, &op});
          }
        }
        if (endpoints.empty()) {
          if (Finding* f = reach(2)) {
            for (const PathItem* item : items) {
              for (const auto& [m, op] : item->operations) add_unique(f->endpoints, m + " " + item->path);
            }
            add_unique(f->notes, "method " + method + " not defined");
          }
          continue;
        }

        // Effective parameters per endpoint.
        struct Facts {
          std::vector<ParamDef> params;
          const ParamDef* body = nullptr;
          bool has_form = false;
          std::vector<std::string> required_query;
          std::set<std::string> declared_query;
        };
        std::vector<Facts> facts(endpoints.size());
        bool payload_applicable = true;
        bool query_applicable = true;
        for (std::size_t i = 0; i < endpoints.size(); ++i) {
          Facts& f = facts[i];
          f.body = effective_body(*endpoints[i].item, *endpoints[i].op, f.params);
          for (const ParamDef& p : f.params) {
            if (p.location == ParamLocation::FormData) f.has_form = true;
            if (p.location == ParamLocation::Query) {
              f.declared_query.insert(p.name);
              if (p.required) f.required_query.push_back(p.name);
            }
          }
          payload_applicable &= f.body != nullptr || f.has_form;
          query_applicable &= !f.required_query.empty();
        }

        for (const auto& data : datas) {
          std::set<std::string> keys;
          for (const QueryPair& q : parts.query) keys.insert(q.key);
          bool data_keys_unknown = false;
          if (options.jquery_get_data_as_query && method == "GET" && data) {
            if (data->kind() == DataValue::Kind::Obj) {
              for (const auto& [k, v] : data->fields()) keys.insert(k);
            } else if (data->kind() == DataValue::Kind::Str && data->str().is_literal()) {
              if (auto form = form_data(data->str().literal_text())) {
                for (const auto& [k, v] : form->fields()) keys.insert(k);
              }
            } else if (data->kind() != DataValue::Kind::Null) {
              data_keys_unknown = true;
            }
          }

          bool payload_ok = !payload_applicable;
          std::vector<std::string> payload_missing;
          if (payload_applicable) {
            for (const Facts& f : facts) {
              std::vector<std::string> missing;
              if (f.body && f.body->schema) {
                if (data) {
                  missing = missing_properties(*data, *f.body->schema);
                } else if (f.body->required) {
                  missing = f.body->schema->required;
                }
              }
              if (f.has_form && data && data->kind() == DataValue::Kind::Obj && data->is_concrete()) {
                for (const ParamDef& p : f.params) {
                  if (p.location == ParamLocation::FormData && p.required && data->field(p.name) == nullptr) {
                    missing.push_back(p.name);
                  }
                }
              }
              if (missing.empty()) {
                payload_ok = true;
                break;
              }
              if (payload_missing.empty()) payload_missing = missing;
            }
          }

          bool query_ok = !query_applicable || parts.query_unresolved || data_keys_unknown;
          std::vector<std::string> query_missing;
          if (!query_ok) {
            for (const Facts& f : facts) {
              std::vector<std::string> missing;
              for (const std::string& r : f.required_query) {
                if (keys.count(r) == 0) missing.push_back(r);
              }
              if (missing.empty()) {
                query_ok = true;
                break;
              }
              if (query_missing.empty()) query_missing = missing;
            }
          }

          if (payload_ok && query_ok) {
            Finding ok;
            ok.outcome = Outcome::Consistent;
            ok.tried = {url.render()};
            ok.specs = {spec.title.empty() ? spec.origin : spec.title};
            for (const Endpoint& e : endpoints) add_unique(ok.endpoints, e.op->method + " " + e.item->path);
            for (const Facts& f : facts) {
              for (const QueryPair& q : parts.query) {
                if (f.declared_query.count(q.key) == 0) add_unique(ok.extra_query, q.key);
              }
            }
            if (query_applicable && (parts.query_unresolved || data_keys_unknown)) {
              add_unique(ok.notes, "query parameters could not be fully determined");
            }
            for (const Endpoint& e : endpoints) {
              if (e.op->deprecated) add_unique(ok.notes, "deprecated endpoint " + e.op->method + " " + e.item->path);
            }
            return ok;
          }
          if (Finding* f = reach(3)) {
            for (const Endpoint& e : endpoints) add_unique(f->endpoints, e.op->method + " " + e.item->path);
            if (!payload_ok) {
              best.payload_failed = true;
              for (const std::string& m : payload_missing) add_unique(f->missing, m);
            } else {
              for (const std::string& m : query_missing) add_unique(f->missing, m);
            }
          }
        }
      }
    }
  }

  Finding out = std::move(best.evidence);
  out.tried = tried;
  out.specs = matched_specs;
  for (auto* v : {&out.tried, &out.specs, &out.endpoints, &out.nearest, &out.missing, &out.notes}) {
    std::sort(v->begin(), v->end());
  }
  switch (best.depth) {
    case 3: out.outcome = best.payload_failed ? Outcome::PayloadMismatch : Outcome::QueryMismatch; break;
    case 2: out.outcome = Outcome::MethodMismatch; break;
    case 1: out.outcome = Outcome::PathMismatch; break;
    default:
      out.outcome = any_symbolic_base || request.unresolved ? Outcome::Unresolved : Outcome::NoSpecMatched;
      break;
  }
  return out;
}

}  // namespace webreq
