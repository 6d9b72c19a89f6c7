// Copyright 2026 The Stockfire Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "stockfire/kv.hpp"

using namespace stockfire;

TEST_CASE("kv parses pairs, comments, and blanks", "[kv]") {
  const std::string text =
      "# header comment\n"
      "name = demo\n"
      "\n"
      "price = 12.5   # trailing comment\n"
      "flag=true\n";
  const KvDocument doc = KvDocument::parse(text, "demo.txt");
  CHECK(doc.get_string("name", "") == "demo");
  CHECK(doc.get_number("price", 0.0) == 12.5);
  CHECK(doc.get_bool("flag", false));
  CHECK(doc.line_of("price") == 4);
  CHECK_FALSE(doc.has("missing"));
  CHECK(doc.get_number("missing", 7.0) == 7.0);
}

TEST_CASE("kv rejects malformed lines with line numbers", "[kv]") {
  CHECK_THROWS_MATCHES(
      KvDocument::parse("a = 1\njust words\n", "f.txt"), ParseError,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("f.txt:2")));
  CHECK_THROWS_AS(KvDocument::parse("= 3\n", "f.txt"), ParseError);
}

TEST_CASE("kv rejects duplicate keys", "[kv]") {
  CHECK_THROWS_MATCHES(
      KvDocument::parse("a = 1\na = 2\n", "f.txt"), ParseError,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("duplicate key `a`")));
}

TEST_CASE("kv type errors name the key and line", "[kv]") {
  const KvDocument doc = KvDocument::parse("x = ten\nb = maybe\n", "f.txt");
  CHECK_THROWS_MATCHES(doc.get_number("x", 0.0), ParseError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("f.txt:1")));
  CHECK_THROWS_AS(doc.get_bool("b", true), ParseError);
  CHECK_THROWS_AS(doc.get_int("x", 0), ParseError);
}

TEST_CASE("kv unknown-key rejection", "[kv]") {
  const KvDocument doc = KvDocument::parse("good = 1\nbad = 2\n", "f.txt");
  const std::vector<std::string> known = {"good"};
  CHECK_THROWS_MATCHES(
      doc.reject_unknown_keys(known), ParseError,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("unknown key `bad`")));
}
