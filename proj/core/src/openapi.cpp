// SPDX-License-Identifier: Apache-2.0
#include "webreq/openapi.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace webreq {

namespace {

using nlohmann::json;

const std::set<std::string> kMethods = {"get", "put", "post", "delete", "options", "head", "patch"};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

bool schema_ptr_equal(const SchemaPtr& a, const SchemaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

std::string string_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

// Resolves `#/definitions/X` references into shared schema nodes.
class SchemaResolver {
 public:
  SchemaResolver(const json& doc, std::string origin) : doc_(doc), origin_(std::move(origin)) {}

  SchemaPtr resolve(const json& node) {
    if (!node.is_object()) throw SpecError(origin_ + ": schema is not an object");
    if (auto ref = node.find("$ref"); ref != node.end()) {
      if (!ref->is_string()) throw SpecError(origin_ + ": $ref is not a string");
      return definition(ref->get<std::string>());
    }
    auto out = std::make_shared<SchemaDef>();
    out->type = string_field(node, "type");
    if (auto props = node.find("properties"); props != node.end() && props->is_object()) {
      for (const auto& [name, sub] : props->items()) out->properties[name] = resolve(sub);
    }
    if (auto req = node.find("required"); req != node.end() && req->is_array()) {
      for (const auto& r : *req) {
        if (r.is_string()) out->required.push_back(r.get<std::string>());
      }
    }
    if (auto items = node.find("items"); items != node.end() && items->is_object()) {
      out->items = resolve(*items);
    }
    if (auto all = node.find("allOf"); all != node.end() && all->is_array()) {
      for (const auto& part : *all) merge(*out, *resolve(part));
    }
    if (out->type.empty() && !out->properties.empty()) out->type = "object";
    std::sort(out->required.begin(), out->required.end());
    out->required.erase(std::unique(out->required.begin(), out->required.end()), out->required.end());
    return out;
  }

  SchemaPtr definition(const std::string& ref) {
    static constexpr std::string_view prefix = "#/definitions/";
    if (ref.rfind(prefix, 0) != 0) throw SpecError(origin_ + ": unsupported $ref " + ref);
    const std::string name = unescape(ref.substr(prefix.size()));
    if (auto it = done_.find(name); it != done_.end()) return it->second;
    if (active_.count(name) != 0) throw SpecError(origin_ + ": $ref cycle through " + ref);
    auto defs = doc_.find("definitions");
    if (defs == doc_.end() || !defs->is_object() || !defs->contains(name)) {
      throw SpecError(origin_ + ": dangling $ref " + ref);
    }
    active_.insert(name);
    auto resolved = std::make_shared<SchemaDef>(*resolve((*defs)[name]));
    resolved->ref = name;
    active_.erase(name);
    done_[name] = resolved;
    return resolved;
  }

 private:
  static std::string unescape(const std::string& token) {
    std::string out;
    for (std::size_t i = 0; i < token.size(); ++i) {
      if (token[i] == '~' && i + 1 < token.size() && (token[i + 1] == '0' || token[i + 1] == '1')) {
        out += token[i + 1] == '0' ? '~' : '/';
        ++i;
      } else {
        out += token[i];
      }
    }
    return out;
  }

  static void merge(SchemaDef& into, const SchemaDef& part) {
    if (into.type.empty()) into.type = part.type;
    for (const auto& [k, v] : part.properties) into.properties.emplace(k, v);
    into.required.insert(into.required.end(), part.required.begin(), part.required.end());
    if (!into.items) into.items = part.items;
  }

  const json& doc_;
  std::string origin_;
  std::map<std::string, SchemaPtr> done_;
  std::set<std::string> active_;
};

class Loader {
 public:
  Loader(const json& doc, std::string origin) : doc_(doc), origin_(std::move(origin)), schemas_(doc, origin_) {}

  ApiSpec load() {
    if (!doc_.is_object()) throw SpecError(origin_ + ": document is not a JSON object");
    if (string_field(doc_, "swagger") != "2.0") {
      throw SpecError(origin_ + ": only swagger \"2.0\" documents are supported");
    }
    ApiSpec spec;
    spec.origin = origin_;
    if (auto info = doc_.find("info"); info != doc_.end() && info->is_object()) {
      spec.title = string_field(*info, "title");
      spec.version = string_field(*info, "version");
    }
    spec.host = lower(string_field(doc_, "host"));
    if (spec.host.empty()) throw SpecError(origin_ + ": missing host");
    spec.base_path = normalize_base_path(string_field(doc_, "basePath"));

    if (auto schemes = doc_.find("schemes"); schemes != doc_.end() && schemes->is_array()) {
      for (const auto& s : *schemes) {
        if (!s.is_string()) continue;
        const std::string scheme = lower(s.get<std::string>());
        if (scheme == "http" || scheme == "https") spec.schemes.push_back(scheme);
      }
    }
    if (spec.schemes.empty()) spec.schemes = {"http", "https"};
    std::sort(spec.schemes.begin(), spec.schemes.end());
    spec.schemes.erase(std::unique(spec.schemes.begin(), spec.schemes.end()), spec.schemes.end());

    if (auto defs = doc_.find("definitions"); defs != doc_.end() && defs->is_object()) {
      for (const auto& [name, _] : defs->items()) {
        spec.definitions[name] = schemas_.definition("#/definitions/" + escape(name));
      }
    }

    auto paths = doc_.find("paths");
    if (paths == doc_.end() || !paths->is_object()) throw SpecError(origin_ + ": missing paths");
    for (const auto& [path, item] : paths->items()) {
      if (path.rfind("x-", 0) == 0) continue;
      if (path.empty() || path.front() != '/') throw SpecError(origin_ + ": path must start with '/': " + path);
      auto segments = parse_path_template(path);
      if (!segments) {
        spec.warnings.push_back("skipped path with partial-segment variable: " + path);
        continue;
      }
      if (!item.is_object()) throw SpecError(origin_ + ": path item is not an object: " + path);
      spec.paths.push_back(load_path(path, std::move(*segments), item));
    }
    std::sort(spec.paths.begin(), spec.paths.end(),
              [](const PathItem& a, const PathItem& b) { return a.path < b.path; });
    return spec;
  }

 private:
  static std::string escape(const std::string& name) {
    std::string out;
    for (char c : name) {
      if (c == '~') {
        out += "~0";
      } else if (c == '/') {
        out += "~1";
      } else {
        out += c;
      }
    }
    return out;
  }

  static std::string normalize_base_path(std::string base) {
    if (base.empty()) return base;
    if (base.front() != '/') base.insert(base.begin(), '/');
    while (!base.empty() && base.back() == '/') base.pop_back();
    return base;
  }

  PathItem load_path(const std::string& path, std::vector<TemplateSegment> segments, const json& item) {
    PathItem out;
    out.path = path;
    out.segments = std::move(segments);
    if (auto params = item.find("parameters"); params != item.end()) out.parameters = load_params(*params);
    for (const auto& [key, op] : item.items()) {
      if (kMethods.count(key) == 0) continue;
      if (!op.is_object()) throw SpecError(origin_ + ": operation is not an object: " + path + " " + key);
      OperationDef def;
      def.method = upper(key);
      def.operation_id = string_field(op, "operationId");
      if (auto dep = op.find("deprecated"); dep != op.end() && dep->is_boolean()) def.deprecated = dep->get<bool>();
      if (auto params = op.find("parameters"); params != op.end()) def.parameters = load_params(*params);
      const auto bodies = std::count_if(def.parameters.begin(), def.parameters.end(),
                                        [](const ParamDef& p) { return p.location == ParamLocation::Body; });
      if (bodies > 1) throw SpecError(origin_ + ": more than one body parameter: " + path + " " + key);
      out.operations[def.method] = std::move(def);
    }
    return out;
  }

  std::vector<ParamDef> load_params(const json& list) {
    if (!list.is_array()) throw SpecError(origin_ + ": parameters is not an array");
    std::vector<ParamDef> out;
    for (const json& raw : list) out.push_back(load_param(raw));
    return out;
  }

  const json& param_ref(const json& raw) {
    static constexpr std::string_view prefix = "#/parameters/";
    const std::string ref = raw["$ref"].is_string() ? raw["$ref"].get<std::string>() : "";
    if (ref.rfind(prefix, 0) != 0) throw SpecError(origin_ + ": unsupported parameter $ref " + ref);
    auto params = doc_.find("parameters");
    const std::string name = ref.substr(prefix.size());
    if (params == doc_.end() || !params->is_object() || !params->contains(name)) {
      throw SpecError(origin_ + ": dangling $ref " + ref);
    }
    return (*params)[name];
  }

  ParamDef load_param(const json& raw_in) {
    const json& raw = raw_in.is_object() && raw_in.contains("$ref") ? param_ref(raw_in) : raw_in;
    if (!raw.is_object()) throw SpecError(origin_ + ": parameter is not an object");
    ParamDef p;
    p.name = string_field(raw, "name");
    const std::string in = string_field(raw, "in");
    if (p.name.empty() || in.empty()) throw SpecError(origin_ + ": parameter without name or location");
    if (in == "path") {
      p.location = ParamLocation::Path;
    } else if (in == "query") {
      p.location = ParamLocation::Query;
    } else if (in == "body") {
      p.location = ParamLocation::Body;
    } else if (in == "formData") {
      p.location = ParamLocation::FormData;
    } else if (in == "header") {
      p.location = ParamLocation::Header;
    } else {
      throw SpecError(origin_ + ": unknown parameter location " + in);
    }
    if (auto req = raw.find("required"); req != raw.end() && req->is_boolean()) p.required = req->get<bool>();
    if (p.location == ParamLocation::Path) p.required = true;
    p.type = string_field(raw, "type");
    if (p.location == ParamLocation::Body) {
      auto schema = raw.find("schema");
      if (schema == raw.end()) throw SpecError(origin_ + ": body parameter without schema: " + p.name);
      p.schema = schemas_.resolve(*schema);
      p.type = p.schema->type;
    }
    return p;
  }

  const json& doc_;
  std::string origin_;
  SchemaResolver schemas_;
};

}  // namespace

bool operator==(const SchemaDef& a, const SchemaDef& b) {
  if (a.type != b.type || a.required != b.required || a.ref != b.ref) return false;
  if (!schema_ptr_equal(a.items, b.items)) return false;
  if (a.properties.size() != b.properties.size()) return false;
  auto it = b.properties.begin();
  for (const auto& [k, v] : a.properties) {
    if (k != it->first || !schema_ptr_equal(v, it->second)) return false;
    ++it;
  }
  return true;
}

bool operator==(const ParamDef& a, const ParamDef& b) {
  return a.name == b.name && a.location == b.location && a.required == b.required && a.type == b.type &&
         schema_ptr_equal(a.schema, b.schema);
}

bool operator==(const ApiSpec& a, const ApiSpec& b) {
  if (a.origin != b.origin || a.title != b.title || a.version != b.version || a.schemes != b.schemes ||
      a.host != b.host || a.base_path != b.base_path || a.paths != b.paths || a.warnings != b.warnings) {
    return false;
  }
  if (a.definitions.size() != b.definitions.size()) return false;
  auto it = b.definitions.begin();
  for (const auto& [k, v] : a.definitions) {
    if (k != it->first || !schema_ptr_equal(v, it->second)) return false;
    ++it;
  }
  return true;
}

std::string_view location_name(ParamLocation loc) noexcept {
  switch (loc) {
    case ParamLocation::Path: return "path";
    case ParamLocation::Query: return "query";
    case ParamLocation::Body: return "body";
    case ParamLocation::FormData: return "formData";
    case ParamLocation::Header: return "header";
  }
  return "?";
}

const PathItem* ApiSpec::find_path(std::string_view path) const {
  auto it = std::lower_bound(paths.begin(), paths.end(), path,
                             [](const PathItem& p, std::string_view v) { return p.path < v; });
  return it != paths.end() && it->path == path ? &*it : nullptr;
}

ApiSpec load_spec(const nlohmann::json& doc, std::string origin) {
  return Loader(doc, std::move(origin)).load();
}

ApiSpec load_spec(std::string_view text, std::string origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(origin + ": invalid JSON: " + e.what());
  }
  return load_spec(doc, std::move(origin));
}

ApiSpec load_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(path.generic_string() + ": cannot open");
  std::ostringstream text;
  text << in.rdbuf();
  return load_spec(std::string_view(text.str()), path.filename().generic_string());
}

std::optional<std::vector<TemplateSegment>> parse_path_template(std::string_view path) {
  std::vector<TemplateSegment> out;
  std::string_view rest = path;
  if (!rest.empty() && rest.front() == '/') rest.remove_prefix(1);
  if (!rest.empty() && rest.back() == '/') rest.remove_suffix(1);
  if (rest.empty()) return out;
  while (true) {
    const auto slash = rest.find('/');
    const std::string_view seg = rest.substr(0, slash);
    const auto open = seg.find('{');
    const auto close = seg.find('}');
    if (open == std::string_view::npos && close == std::string_view::npos) {
      out.push_back({false, std::string(seg)});
    } else if (open == 0 && close == seg.size() - 1 && seg.find('{', 1) == std::string_view::npos) {
      out.push_back({true, std::string(seg.substr(1, seg.size() - 2))});
    } else {
      return std::nullopt;
    }
    if (slash == std::string_view::npos) break;
    rest.remove_prefix(slash + 1);
  }
  return out;
}

std::vector<std::string> base_urls(const ApiSpec& spec) {
  std::vector<std::string> out;
  for (const std::string& scheme : spec.schemes) out.push_back(scheme + "://" + spec.host + spec.base_path);
  return out;
}

std::vector<ParamDef> effective_params(const PathItem& item, const OperationDef& op) {
  std::vector<ParamDef> out;
  for (const ParamDef& p : item.parameters) {
    const bool overridden = std::any_of(op.parameters.begin(), op.parameters.end(), [&](const ParamDef& o) {
      return o.name == p.name && o.location == p.location;
    });
    if (!overridden) out.push_back(p);
  }
  out.insert(out.end(), op.parameters.begin(), op.parameters.end());
  return out;
}

const ParamDef* effective_body(const PathItem& item, const OperationDef& op, std::vector<ParamDef>& storage) {
  storage = effective_params(item, op);
  // A body parameter is unique per operation, whatever its name; the
  // operation-level one takes precedence.
  const ParamDef* found = nullptr;
  for (const ParamDef& p : storage) {
    if (p.location == ParamLocation::Body) found = &p;
  }
  return found;
}

SpecLoadResult load_spec_directory(const std::filesystem::path& dir) {
  SpecLoadResult out;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      out.specs.push_back(std::make_shared<const ApiSpec>(load_spec_file(f)));
    } catch (const SpecError& e) {
      out.errors.emplace_back(f.filename().generic_string(), e.what());
    }
  }
  return out;
}

std::string normalize_url_origin(std::string_view url) {
  std::string out(url);
  auto scheme_end = out.find("://");
  std::size_t authority_start = 0;
  if (scheme_end != std::string::npos) {
    authority_start = scheme_end + 3;
  } else if (out.rfind("//", 0) == 0) {
    authority_start = 2;
  } else {
    return out;
  }
  const auto authority_end = out.find_first_of("/?#", authority_start);
  const std::size_t end = authority_end == std::string::npos ? out.size() : authority_end;
  std::transform(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(end), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

SpecIndex::SpecIndex(std::vector<std::shared_ptr<const ApiSpec>> specs) : specs_(std::move(specs)) {
  for (const auto& spec : specs_) {
    for (std::string& url : base_urls(*spec)) entries_.push_back({std::move(url), spec});
  }
}

std::vector<const SpecIndex::Entry*> SpecIndex::match(std::string_view url) const {
  std::vector<const Entry*> out;
  std::string normalized = normalize_url_origin(url);
  // Scheme-relative URLs take the scheme of the page, which may be either.
  const bool scheme_relative = normalized.rfind("//", 0) == 0;
  for (const Entry& e : entries_) {
    std::string_view base = e.base_url;
    if (scheme_relative) base.remove_prefix(base.find("://") + 1);
    if (normalized.size() < base.size() || normalized.compare(0, base.size(), base) != 0) continue;
    if (normalized.size() == base.size() || std::string_view("/?#").find(normalized[base.size()]) != std::string_view::npos) {
      out.push_back(&e);
    }
  }
  return out;
}

}  // namespace webreq
