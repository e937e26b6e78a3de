// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "testing.hpp"

namespace webreq {
namespace {

using testing::corpus_index;
using testing::descriptor;
using Strings = std::vector<std::string>;

DataValue dv(const char* json_text) { return DataValue::from_json(nlohmann::json::parse(json_text)); }

Finding check(const Strings& urls, Strings methods = {}, std::vector<DataValue> data = {}, CheckOptions o = {}) {
  return check_request(descriptor(urls, std::move(methods), std::move(data)), corpus_index(), o);
}

std::vector<TemplateSegment> tmpl(const char* path) { return *parse_path_template(path); }

std::vector<StringValue> segs(const Strings& parts) {
  std::vector<StringValue> out;
  for (const std::string& p : parts) out.push_back(StringValue::parse(p));
  return out;
}

// -- split_url -----------------------------------------------------------

TEST(SplitUrl, PathAndQuery) {
  UrlParts u = split_url(StringValue::parse("/tags/{t}/media/recent?client_id=abc&count=2#frag"));
  EXPECT_EQ(testing::rendered(u.segments), (Strings{"tags", "{t}", "media", "recent"}));
  ASSERT_EQ(u.query.size(), 2u);
  EXPECT_EQ(u.query[0].key, "client_id");
  EXPECT_EQ(u.query[1].value.render(), "2");
  EXPECT_FALSE(u.query_unresolved);
}

TEST(SplitUrl, PercentDecodedKeys) {
  UrlParts u = split_url(StringValue::parse("/a?my%20key=1&b+c=2"));
  ASSERT_EQ(u.query.size(), 2u);
  EXPECT_EQ(u.query[0].key, "my key");
  EXPECT_EQ(u.query[1].key, "b c");
}

TEST(SplitUrl, SymbolicQueryBoundary) {
  EXPECT_TRUE(split_url(StringValue::parse("/search{query}")).query_unresolved);
  EXPECT_TRUE(split_url(StringValue::parse("/search?{query}")).query_unresolved);
  EXPECT_TRUE(split_url(StringValue::parse("/search?a=1&{rest}")).query_unresolved);
  EXPECT_FALSE(split_url(StringValue::parse("/search?a={v}")).query_unresolved);
}

TEST(SplitUrl, NoSlashInSegments) {
  UrlParts u = split_url(StringValue::parse("//a//b{x}c/"));
  for (const StringValue& s : u.segments) {
    for (const Segment& seg : s.segments()) {
      if (seg.kind == Segment::Kind::Lit) EXPECT_EQ(seg.text.find('/'), std::string::npos);
    }
  }
}

// -- match_path ---------------------------------------------------------------

TEST(MatchPath, TemplateAndUrlWildcards) {
  EXPECT_TRUE(path_matches(segs({"tags", "{searchHashtag}", "media", "recent"}), tmpl("/tags/{tag-name}/media/recent")));
  EXPECT_FALSE(path_matches(segs({"seach"}), tmpl("/search")));
  EXPECT_TRUE(path_matches(segs({"search"}), tmpl("/search")));
  EXPECT_FALSE(path_matches(segs({"Search"}), tmpl("/search")));
  EXPECT_TRUE(path_matches(segs({"{x}"}), tmpl("/search")));
  EXPECT_TRUE(path_matches(segs({"v{n}"}), tmpl("/search")));
}

TEST(MatchPath, SymbolCannotSpanSegments) {
  // 'tags/' + term + 'media/recent' lost the slash after the variable.
  EXPECT_FALSE(path_matches(segs({"tags", "{term}media", "recent"}), tmpl("/tags/{tag-name}/media/recent")));
}

// -- check_request --------------------------------------------------------------

TEST(Check, InstagramConsistent) {
  Finding f = check({"https://api.instagram.com/v1/tags/{searchHashtag}/media/recent?client_id=1e3a4f7c9d2b48e6"}, {"GET"});
  EXPECT_EQ(f.outcome, Outcome::Consistent);
  EXPECT_EQ(f.specs, Strings{"Instagram API"});
}

TEST(Check, SpotifyTypo) {
  Finding f = check({"https://api.spotify.com/v1/seach?q={q}&type=artist"});
  EXPECT_EQ(f.outcome, Outcome::PathMismatch);
  EXPECT_EQ(f.nearest, Strings{"/search"});
  EXPECT_NE(std::find(f.notes.begin(), f.notes.end(), "possible typo"), f.notes.end());
}

TEST(Check, SymbolicBaseIsUnresolved) {
  EXPECT_EQ(check({"{base}/v1/x"}).outcome, Outcome::Unresolved);
  EXPECT_EQ(check({"https://{host}/v1/x"}).outcome, Outcome::Unresolved);
}

TEST(Check, UnknownHostIsNoSpecMatched) {
  Finding f = check({"https://www.googleapis.com/mapsengine/v1beta2/tables/{aid}/features/batchInsert"}, {"POST"});
  EXPECT_EQ(f.outcome, Outcome::NoSpecMatched);
}

TEST(Check, PortNumberNoted) {
  Finding f = check({"https://api.instagram.com:8443/v1/tags/x"});
  EXPECT_EQ(f.outcome, Outcome::NoSpecMatched);
  ASSERT_FALSE(f.notes.empty());
  EXPECT_NE(f.notes[0].find("port"), std::string::npos);
}

TEST(Check, MethodRules) {
  EXPECT_EQ(check({"https://www.googleapis.com/oauth2/v1/tokeninfo?access_token={t}"}, {"GET"}).outcome,
            Outcome::MethodMismatch);
  EXPECT_EQ(check({"https://www.googleapis.com/oauth2/v1/tokeninfo?access_token={t}"}, {"POST"}).outcome,
            Outcome::Consistent);
  EXPECT_EQ(check({"https://www.googleapis.com/oauth2/v1/tokeninfo"}, {"{m}"}).outcome, Outcome::Consistent);
  EXPECT_EQ(check({"https://www.googleapis.com/oauth2/v1/userinfo"}, {}).outcome, Outcome::Consistent);
}

TEST(Check, PayloadRequired) {
  const Strings url = {"https://api.bookshop.test/api/orders"};
  EXPECT_EQ(check(url, {"POST"}, {dv(R"({"customer": "c", "items": [], "note": "{n}"})")}).outcome, Outcome::Consistent);
  Finding f = check(url, {"POST"}, {dv(R"({"items": []})")});
  EXPECT_EQ(f.outcome, Outcome::PayloadMismatch);
  EXPECT_EQ(f.missing, Strings{"customer"});
  EXPECT_EQ(check(url, {"POST"}, {dv(R"("{payload}")")}).outcome, Outcome::Consistent);
  EXPECT_EQ(check(url, {"POST"}, {}).outcome, Outcome::PayloadMismatch);
}

TEST(Check, JsonStringPayloadIsParsed) {
  const Strings url = {"https://api.bookshop.test/api/orders"};
  EXPECT_EQ(check(url, {"POST"}, {dv(R"("{{\"customer\":\"c\",\"items\":[]}}")")}).outcome, Outcome::Consistent);
  EXPECT_EQ(check(url, {"POST"}, {dv(R"("{{\"items\":[]}}")")}).outcome, Outcome::PayloadMismatch);
}

TEST(Check, NestedRequiredProperties) {
  Finding f = check({"https://api.bookshop.test/api/orders"}, {"POST"},
                    {dv(R"({"customer": "c", "items": [{"isbn": "1"}]})")});
  EXPECT_EQ(f.outcome, Outcome::PayloadMismatch);
  ASSERT_EQ(f.missing.size(), 1u);
  EXPECT_NE(f.missing[0].find("quantity"), std::string::npos);
}

TEST(Check, QueryRequired) {
  const Strings no_country = {"https://api.spotify.com/v1/artists/{id}/top-tracks"};
  Finding f = check(no_country, {"GET"}, {dv(R"({"country": "SE"})")});
  EXPECT_EQ(f.outcome, Outcome::QueryMismatch);
  EXPECT_EQ(f.missing, Strings{"country"});
  CheckOptions jquery;
  jquery.jquery_get_data_as_query = true;
  EXPECT_EQ(check(no_country, {"GET"}, {dv(R"({"country": "SE"})")}, jquery).outcome, Outcome::Consistent);
  EXPECT_EQ(check({"https://api.spotify.com/v1/artists/{id}/top-tracks?country=SE"}, {"GET"}).outcome,
            Outcome::Consistent);
  // A URL ending in a variable might carry the parameter.
  EXPECT_EQ(check({"https://api.spotify.com/v1/artists/{id}/top-tracks{qs}"}, {"GET"}).outcome, Outcome::Consistent);
}

TEST(Check, ExtraQueryIsInformational) {
  Finding f = check({"https://api.instagram.com/v1/tags/x/media/recent?client_id=a&bogus=1"});
  EXPECT_EQ(f.outcome, Outcome::Consistent);
  EXPECT_EQ(f.extra_query, Strings{"bogus"});
}

TEST(Check, AnyCombinationRule) {
  Finding f = check({"https://api.spotify.com/v1/search?q={t}&type=artist", "https://api.spotify.com/v1/nope"});
  EXPECT_EQ(f.outcome, Outcome::Consistent);
}

TEST(Check, DeepestStageWins) {
  // One URL fails the path stage, the other fails the method stage.
  Finding f = check({"https://www.googleapis.com/oauth2/v1/tokenifno", "https://www.googleapis.com/oauth2/v1/tokeninfo"},
                    {"GET"});
  EXPECT_EQ(f.outcome, Outcome::MethodMismatch);
}

TEST(Check, OverlappingBasePaths) {
  // Both bases match; only the admin spec defines the path.
  EXPECT_EQ(corpus_index().match("https://metrics.example.test/v1/admin/users").size(), 2u);
  Finding f = check({"https://metrics.example.test/v1/admin/users"}, {"GET"});
  EXPECT_EQ(f.outcome, Outcome::Consistent);
  EXPECT_EQ(f.specs, Strings{"Metrics Admin API"});
  Finding status = check({"https://metrics.example.test/v1/admin/status"}, {"GET"});
  EXPECT_EQ(status.outcome, Outcome::Consistent);
  EXPECT_EQ(status.specs, Strings{"Metrics API"});
}

TEST(Check, CandidateOrderDoesNotMatter) {
  const Strings a = {"https://api.spotify.com/v1/seach", "https://www.googleapis.com/oauth2/v1/tokeninfo"};
  const Strings b = {a[1], a[0]};
  EXPECT_EQ(check(a, {"GET", "PUT"}).outcome, check(b, {"PUT", "GET"}).outcome);
}

TEST(EditDistance, Basics) {
  EXPECT_EQ(edit_distance("seach", "search"), 1u);
  EXPECT_EQ(edit_distance("", "abc"), 3u);
  EXPECT_EQ(edit_distance("kitten", "sitting"), 3u);
}

TEST(MissingProperties, SymSatisfies) {
  SchemaDef s;
  s.required = {"a", "b"};
  EXPECT_TRUE(missing_properties(DataValue::symbol("x"), s).empty());
  EXPECT_EQ(missing_properties(dv(R"({"a": 1})"), s), Strings{"b"});
  EXPECT_EQ(missing_properties(dv(R"("a=1&b=2")"), s), Strings{});
  EXPECT_EQ(missing_properties(dv(R"("a=1")"), s), Strings{"b"});
}

}  // namespace
}  // namespace webreq
