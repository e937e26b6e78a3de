// SPDX-License-Identifier: Apache-2.0
#include "webreq/report.hpp"

#include <sstream>
#include <stdexcept>

namespace webreq {

using nlohmann::json;

std::string_view file_status_name(FileStatus s) noexcept {
  switch (s) {
    case FileStatus::Ok: return "ok";
    case FileStatus::SyntaxError: return "syntax-error";
    case FileStatus::TooLarge: return "too-large";
    case FileStatus::IoError: return "io-error";
    case FileStatus::InternalError: return "internal-error";
  }
  return "?";
}

std::optional<FileStatus> parse_file_status(std::string_view name) noexcept {
  for (FileStatus s : {FileStatus::Ok, FileStatus::SyntaxError, FileStatus::TooLarge, FileStatus::IoError,
                       FileStatus::InternalError}) {
    if (file_status_name(s) == name) return s;
  }
  return std::nullopt;
}

bool operator==(const Finding& a, const Finding& b) {
  return a.outcome == b.outcome && a.tried == b.tried && a.specs == b.specs && a.endpoints == b.endpoints &&
         a.nearest == b.nearest && a.missing == b.missing && a.extra_query == b.extra_query && a.notes == b.notes;
}

bool operator==(const RequestRecord& a, const RequestRecord& b) {
  return a.line == b.line && a.column == b.column && a.callee == b.callee && a.receiver == b.receiver &&
         a.urls == b.urls && a.methods == b.methods && a.data == b.data && a.unresolved == b.unresolved &&
         a.finding == b.finding;
}

RequestRecord make_record(const RequestDescriptor& d) {
  RequestRecord r;
  r.line = d.site.line;
  r.column = d.site.column;
  r.callee = std::string(callee_kind_name(d.site.kind));
  r.receiver = d.site.receiver;
  for (const StringValue& u : d.urls) r.urls.push_back(u.render());
  r.methods = d.methods;
  r.data = d.data;
  r.unresolved = d.unresolved;
  return r;
}

Report::Summary Report::summary() const {
  Summary s;
  for (Outcome o : kAllOutcomes) s.outcomes[o] = 0;
  for (const FileRecord& f : files) {
    ++s.files;
    if (f.status != FileStatus::Ok) ++s.skipped;
    for (const RequestRecord& r : f.requests) {
      ++s.requests;
      if (r.finding) ++s.outcomes[r.finding->outcome];
    }
  }
  return s;
}

namespace {

json string_list(const std::vector<std::string>& v) { return json(v); }

std::vector<std::string> read_strings(const json& j, const char* key) {
  std::vector<std::string> out;
  auto it = j.find(key);
  if (it == j.end()) return out;
  if (!it->is_array()) throw std::invalid_argument(std::string("expected array for ") + key);
  for (const json& s : *it) {
    if (!s.is_string()) throw std::invalid_argument(std::string("expected strings in ") + key);
    out.push_back(s.get<std::string>());
  }
  return out;
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("missing key ") + key);
  return *it;
}

std::string join(const std::vector<std::string>& v, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

json to_json(const Finding& f) {
  json j;
  j["outcome"] = std::string(outcome_name(f.outcome));
  j["tried"] = string_list(f.tried);
  j["specs"] = string_list(f.specs);
  j["endpoints"] = string_list(f.endpoints);
  j["nearest"] = string_list(f.nearest);
  j["missing"] = string_list(f.missing);
  j["extra_query"] = string_list(f.extra_query);
  j["notes"] = string_list(f.notes);
  return j;
}

Finding finding_from_json(const json& j) {
  Finding f;
  const json& outcome = require(j, "outcome");
  auto o = outcome.is_string() ? parse_outcome(outcome.get<std::string>()) : std::nullopt;
  if (!o) throw std::invalid_argument("unknown outcome");
  f.outcome = *o;
  f.tried = read_strings(j, "tried");
  f.specs = read_strings(j, "specs");
  f.endpoints = read_strings(j, "endpoints");
  f.nearest = read_strings(j, "nearest");
  f.missing = read_strings(j, "missing");
  f.extra_query = read_strings(j, "extra_query");
  f.notes = read_strings(j, "notes");
  return f;
}

json to_json(const Report& report) {
  json j;
  j["tool"] = "webreq-lint";
  j["version"] = report.version;
  j["command"] = report.command;
  json files = json::array();
  for (const FileRecord& f : report.files) {
    json jf;
    jf["path"] = f.path;
    jf["status"] = std::string(file_status_name(f.status));
    if (!f.diagnostic.empty()) jf["diagnostic"] = f.diagnostic;
    json requests = json::array();
    for (const RequestRecord& r : f.requests) {
      json jr;
      jr["line"] = r.line;
      jr["column"] = r.column;
      jr["callee"] = r.callee;
      jr["receiver"] = r.receiver;
      jr["url"] = r.urls;
      jr["type"] = r.methods;
      json data = json::array();
      for (const DataValue& d : r.data) data.push_back(d.to_json());
      jr["data"] = std::move(data);
      jr["unresolved"] = r.unresolved;
      if (r.finding) jr["finding"] = to_json(*r.finding);
      requests.push_back(std::move(jr));
    }
    jf["requests"] = std::move(requests);
    files.push_back(std::move(jf));
  }
  j["files"] = std::move(files);
  json errors = json::array();
  for (const auto& [file, message] : report.spec_errors) errors.push_back({{"file", file}, {"message", message}});
  j["spec_errors"] = std::move(errors);

  const Report::Summary s = report.summary();
  json summary;
  summary["files"] = s.files;
  summary["skipped"] = s.skipped;
  summary["requests"] = s.requests;
  if (report.command == "check") {
    json outcomes;
    for (const auto& [o, n] : s.outcomes) outcomes[std::string(outcome_name(o))] = n;
    summary["outcomes"] = std::move(outcomes);
  }
  j["summary"] = std::move(summary);
  return j;
}

Report report_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("report is not an object");
  Report report;
  report.command = require(j, "command").get<std::string>();
  report.version = require(j, "version").get<std::string>();
  for (const json& jf : require(j, "files")) {
    FileRecord f;
    f.path = require(jf, "path").get<std::string>();
    auto status = parse_file_status(require(jf, "status").get<std::string>());
    if (!status) throw std::invalid_argument("unknown file status");
    f.status = *status;
    if (auto d = jf.find("diagnostic"); d != jf.end()) f.diagnostic = d->get<std::string>();
    for (const json& jr : require(jf, "requests")) {
      RequestRecord r;
      r.line = require(jr, "line").get<int>();
      r.column = require(jr, "column").get<int>();
      r.callee = require(jr, "callee").get<std::string>();
      r.receiver = require(jr, "receiver").get<std::string>();
      r.urls = read_strings(jr, "url");
      r.methods = read_strings(jr, "type");
      for (const json& d : require(jr, "data")) r.data.push_back(DataValue::from_json(d));
      r.unresolved = require(jr, "unresolved").get<bool>();
      if (auto fj = jr.find("finding"); fj != jr.end()) r.finding = finding_from_json(*fj);
      f.requests.push_back(std::move(r));
    }
    report.files.push_back(std::move(f));
  }
  if (auto e = j.find("spec_errors"); e != j.end()) {
    for (const json& je : *e) {
      report.spec_errors.emplace_back(require(je, "file").get<std::string>(), require(je, "message").get<std::string>());
    }
  }
  if (auto s = j.find("summary"); s != j.end()) {
    const Report::Summary expect = report.summary();
    if (require(*s, "files").get<std::size_t>() != expect.files ||
        require(*s, "requests").get<std::size_t>() != expect.requests) {
      throw std::invalid_argument("summary does not match file records");
    }
  }
  return report;
}

std::string render_json(const Report& report) { return to_json(report).dump(2) + "\n"; }

std::string render_text(const Report& report) {
  std::ostringstream out;
  const bool check = report.command == "check";
  for (const FileRecord& f : report.files) {
    if (f.status != FileStatus::Ok) {
      out << f.path << ": " << file_status_name(f.status);
      if (!f.diagnostic.empty()) out << " " << f.diagnostic;
      out << "\n";
      continue;
    }
    for (const RequestRecord& r : f.requests) {
      out << f.path << ":" << r.line;
      if (check && r.finding) {
        const Finding& fd = *r.finding;
        out << " " << outcome_name(fd.outcome) << " " << join(r.urls, " | ");
        std::vector<std::string> evidence;
        if (!fd.nearest.empty()) evidence.push_back("nearest: " + join(fd.nearest, ", "));
        if (!fd.missing.empty()) evidence.push_back("missing: " + join(fd.missing, ", "));
        if (fd.outcome == Outcome::MethodMismatch && !fd.endpoints.empty()) {
          evidence.push_back("defined: " + join(fd.endpoints, ", "));
        }
        if (!fd.extra_query.empty()) evidence.push_back("undeclared query: " + join(fd.extra_query, ", "));
        for (const std::string& n : fd.notes) evidence.push_back(n);
        if (!evidence.empty()) out << " -- " << join(evidence, "; ");
      } else {
        out << " " << r.callee << " " << join(r.urls, " | ");
        if (!r.methods.empty()) out << " [" << join(r.methods, ",") << "]";
        if (!r.data.empty()) {
          std::vector<std::string> data;
          for (const DataValue& d : r.data) data.push_back(d.to_json().dump());
          out << " data=" << join(data, " | ");
        }
        if (r.unresolved) out << " (unresolved)";
      }
      out << "\n";
    }
  }
  for (const auto& [file, message] : report.spec_errors) out << "spec " << file << ": " << message << "\n";

  const Report::Summary s = report.summary();
  out << "\nfiles: " << s.files << " (skipped " << s.skipped << "), requests: " << s.requests << "\n";
  if (check) {
    for (Outcome o : kAllOutcomes) out << "  " << outcome_name(o) << ": " << s.outcomes.at(o) << "\n";
  }
  return out.str();
}

}  // namespace webreq
