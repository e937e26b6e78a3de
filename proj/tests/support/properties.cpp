// SPDX-License-Identifier: Apache-2.0
#include "properties.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "progen.hpp"
#include "testing.hpp"
#include "webreq/report.hpp"

namespace webreq::testing {

namespace {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

std::set<std::string> literal_urls(const FileExtraction& r) {
  std::set<std::string> out;
  for (const RequestDescriptor& d : r.descriptors) {
    for (const StringValue& u : d.urls) {
      if (u.is_literal()) out.insert(u.literal_text());
    }
  }
  return out;
}

std::string join(const std::set<std::string>& s) {
  std::string out;
  for (const std::string& x : s) out += "[" + x + "]";
  return out;
}

// Candidate pools over the corpus specs: consistent requests, near misses
// and unrelated hosts, so that random descriptors reach every stage.
const std::vector<std::string> kUrls = {
    "https://api.instagram.com/v1/tags/{tag}/media/recent?client_id=abc",
    "https://api.instagram.com/v1/tags/{tag}/media/recent",
    "https://api.instagram.com/v1/tags/{tag}media/recent",
    "https://api.instagram.com/v1/users/{id}",
    "https://api.instagram.com/v1/media/{id}/comments",
    "https://api.spotify.com/v1/search?q={q}&type=artist",
    "https://api.spotify.com/v1/seach?q={q}&type=artist",
    "https://api.spotify.com/v1/artists/{id}/top-tracks",
    "https://api.spotify.com/v1/artists/{id}/top-tracks?country=SE",
    "https://api.spotify.com/v1/users/{u}/playlists",
    "https://www.googleapis.com/oauth2/v1/tokeninfo?access_token={t}",
    "https://www.googleapis.com/oauth2/v1/userinfo",
    "https://api.bookshop.test/api/books?q={q}",
    "http://api.bookshop.test/api/books",
    "https://api.bookshop.test/api/books/{isbn}",
    "https://api.bookshop.test/api/orders",
    "https://api.bookshop.test/api/orders/{id}",
    "https://metrics.example.test/v1/admin/users",
    "https://metrics.example.test/v1/series/{name}",
    "https://unknown.example.test/v1/x",
    "https://api.instagram.com:8443/v1/users/1",
    "{base}/v1/users",
    "/relative/path",
};
const std::vector<std::string> kMethods = {"GET", "POST", "PUT", "DELETE", "PATCH", "{m}"};
const std::vector<std::string> kData = {
    R"({"customer": "c", "items": [{"isbn": "1", "quantity": 2}]})",
    R"({"items": []})",
    R"({"title": "t", "author": "a"})",
    R"({"title": "t"})",
    R"({"country": "SE"})",
    R"("{payload}")",
    R"("{{\"customer\":\"c\",\"items\":[]}}")",
    R"("text=hello")",
    R"({})",
};

RequestDescriptor random_descriptor(Rng& rng) {
  std::vector<std::string> urls;
  std::vector<std::string> methods;
  std::vector<DataValue> data;
  const int nu = uniform(rng, 1, 3);
  for (int i = 0; i < nu; ++i) urls.push_back(pick(rng, kUrls));
  const int nm = uniform(rng, 0, 2);
  for (int i = 0; i < nm; ++i) methods.push_back(pick(rng, kMethods));
  const int nd = uniform(rng, 0, 2);
  for (int i = 0; i < nd; ++i) data.push_back(DataValue::from_json(nlohmann::json::parse(pick(rng, kData))));
  std::sort(urls.begin(), urls.end());
  urls.erase(std::unique(urls.begin(), urls.end()), urls.end());
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
  std::sort(data.begin(), data.end());
  data.erase(std::unique(data.begin(), data.end()), data.end());
  return descriptor(urls, methods, data);
}

std::string describe(const RequestDescriptor& d) {
  std::string out;
  for (const StringValue& u : d.urls) out += u.render() + " ";
  for (const std::string& m : d.methods) out += m + " ";
  for (const DataValue& v : d.data) out += v.to_json().dump() + " ";
  return out;
}

const std::vector<std::string> kSegmentWords = {"a", "b", "users", "media", "x-y", "1"};

StringValue random_segment(Rng& rng) { return StringValue::lit(pick(rng, kSegmentWords)); }

}  // namespace

PropertyResult oracle_equivalence(int programs, bool correlated, std::uint64_t seed) {
  PropertyResult result;
  progen::Options options;
  options.correlated = correlated;
  // The generator keeps every program's path-insensitive bound within the
  // default cap, so the union is never truncated.
  ExtractOptions extract_options;
  options.max_value_bound = static_cast<double>(extract_options.max_values);
  for (int i = 0; i < programs; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    const progen::Program p = progen::generate(s, options);
    const std::string js = p.to_js();
    ++result.cases;
    try {
      const std::set<std::string> expected = progen::enumerate_urls(p);
      const std::set<std::string> got = literal_urls(extract_text(js, extract_options));
      const bool pass = correlated ? std::includes(got.begin(), got.end(), expected.begin(), expected.end())
                                   : got == expected;
      if (static_cast<double>(got.size()) > progen::path_insensitive_bound(p)) {
        result.fail("seed " + std::to_string(s) + ": more values than the path-insensitive bound");
      }
      if (!pass) result.fail("seed " + std::to_string(s) + ": expected " + join(expected) + " got " + join(got));
    } catch (const std::exception& e) {
      result.fail("seed " + std::to_string(s) + ": " + e.what());
    }
  }
  return result;
}

PropertyResult any_combination_monotonicity(int cases, std::uint64_t seed) {
  PropertyResult result;
  Rng rng(seed);
  while (result.cases < cases) {
    RequestDescriptor d = random_descriptor(rng);
    if (check_request(d, corpus_index()).outcome != Outcome::Consistent) continue;
    ++result.cases;
    RequestDescriptor more = random_descriptor(rng);
    RequestDescriptor merged = d;
    for (const StringValue& u : more.urls) merged.urls.push_back(u);
    for (const std::string& m : more.methods) merged.methods.push_back(m);
    // An empty data set means "no payload", not "no candidates", so data is
    // only added next to existing candidates. Likewise an empty method set
    // means GET and keeps that meaning when methods are added.
    if (!d.data.empty()) {
      for (const DataValue& v : more.data) merged.data.push_back(v);
    }
    if (d.methods.empty() && !more.methods.empty()) merged.methods.push_back("GET");
    const Outcome o = check_request(merged, corpus_index()).outcome;
    if (o != Outcome::Consistent) {
      result.fail(describe(d) + "+ " + describe(more) + "-> " + std::string(outcome_name(o)));
    }
  }
  return result;
}

PropertyResult wildcard_symmetry(int cases, std::uint64_t seed) {
  PropertyResult result;
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    ++result.cases;
    const int n = uniform(rng, 1, 5);
    std::vector<StringValue> url;
    std::vector<TemplateSegment> tmpl;
    for (int i = 0; i < n; ++i) {
      url.push_back(random_segment(rng));
      tmpl.push_back({false, pick(rng, kSegmentWords)});
    }
    const auto i = static_cast<std::size_t>(uniform(rng, 0, n - 1));
    std::vector<StringValue> url_sym = url;
    url_sym[i] = StringValue::sym("s");
    if (uniform(rng, 0, 1) == 1) url_sym[i] = concat(StringValue::lit(pick(rng, kSegmentWords)), StringValue::sym("s"));
    std::vector<TemplateSegment> tmpl_var = tmpl;
    tmpl_var[i] = {true, "v"};
    const bool a = path_matches(url_sym, tmpl);
    const bool b = path_matches(url, tmpl_var);
    bool rest = true;
    for (std::size_t k = 0; k < url.size(); ++k) {
      if (k != i) rest = rest && url[k].literal_text() == tmpl[k].text;
    }
    if (a != b || a != rest) result.fail("position " + std::to_string(i) + " of " + std::to_string(n));
    if (path_matches(url_sym, tmpl_var) != rest) result.fail("wildcards on both sides");
  }
  return result;
}

PropertyResult segment_count_necessity(int cases, std::uint64_t seed) {
  PropertyResult result;
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    ++result.cases;
    const int n = uniform(rng, 0, 5);
    int m = uniform(rng, 0, 5);
    if (m == n) ++m;
    std::vector<StringValue> url;
    for (int i = 0; i < n; ++i) {
      url.push_back(uniform(rng, 0, 2) == 0 ? StringValue::sym("s" + std::to_string(i)) : random_segment(rng));
    }
    std::vector<TemplateSegment> tmpl;
    for (int i = 0; i < m; ++i) {
      tmpl.push_back(uniform(rng, 0, 2) == 0 ? TemplateSegment{true, "v"} : TemplateSegment{false, pick(rng, kSegmentWords)});
    }
    if (path_matches(url, tmpl)) result.fail(std::to_string(n) + " URL segments matched " + std::to_string(m));
  }
  // End to end: an extra trailing segment on a matching URL never reaches
  // the method stage.
  for (int c = 0; c < cases; ++c) {
    ++result.cases;
    RequestDescriptor d = descriptor({"https://api.instagram.com/v1/users/{id}/" + pick(rng, kSegmentWords) + "/{x}/" +
                                      pick(rng, kSegmentWords)});
    const Finding f = check_request(d, corpus_index());
    if (f.outcome != Outcome::PathMismatch) result.fail(describe(d) + "-> " + std::string(outcome_name(f.outcome)));
  }
  return result;
}

PropertyResult default_method_equivalence(int cases, std::uint64_t seed) {
  PropertyResult result;
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    ++result.cases;
    RequestDescriptor d = random_descriptor(rng);
    d.methods.clear();
    RequestDescriptor get = d;
    get.methods = {"GET"};
    for (bool flag : {false, true}) {
      CheckOptions o;
      o.jquery_get_data_as_query = flag;
      if (!(check_request(d, corpus_index(), o) == check_request(get, corpus_index(), o))) {
        result.fail(describe(d) + (flag ? "(flag on)" : ""));
      }
    }
  }
  return result;
}

PropertyResult extraction_totality(int programs, std::uint64_t seed) {
  PropertyResult result;
  for (int i = 0; i < programs; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    progen::Options options;
    options.correlated = (i % 2) == 1;
    const std::string js = progen::generate(s, options).to_js();
    ++result.cases;
    try {
      const std::string a = dump(lower_text(js));
      const std::string b = dump(lower_text(js));
      FileExtraction x = extract_text(js);
      FileExtraction y = extract_text(js);
      bool same = a == b && x.descriptors.size() == y.descriptors.size();
      for (std::size_t k = 0; same && k < x.descriptors.size(); ++k) {
        same = make_record(x.descriptors[k]) == make_record(y.descriptors[k]);
      }
      if (!same) result.fail("seed " + std::to_string(s) + ": nondeterministic");
      if (x.descriptors.empty()) result.fail("seed " + std::to_string(s) + ": no request found");
      for (const RequestDescriptor& d : x.descriptors) {
        if (d.urls.empty()) result.fail("seed " + std::to_string(s) + ": empty URL set");
      }
    } catch (const std::exception& e) {
      result.fail("seed " + std::to_string(s) + ": " + e.what());
    }
  }
  return result;
}

}  // namespace webreq::testing
