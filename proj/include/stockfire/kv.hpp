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

#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "stockfire/errors.hpp"

namespace stockfire {

// Line-oriented `key = value` document, the common format behind .regime
// and .scenario files. UTF-8 text, one pair per line, `#` starts a comment,
// blank lines ignored. Keys may contain dots (`chp.capacity_mw`).

struct KvEntry {
  std::string key;
  std::string value;
  int line = 0;
};

class KvDocument {
 public:
  /// Parses `text`. `source` is used only for error messages.
  static KvDocument parse(std::string_view text, const std::string& source) {
    KvDocument doc;
    doc.source_ = source;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t eol = text.find('\n', pos);
      std::string_view line = (eol == std::string_view::npos)
                                  ? text.substr(pos)
                                  : text.substr(pos, eol - pos);
      pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
      ++line_no;

      std::size_t hash = line.find('#');
      if (hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;

      std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError(source, line_no, "expected `key = value`");
      }
      std::string key{trim(line.substr(0, eq))};
      std::string value{trim(line.substr(eq + 1))};
      if (key.empty()) throw ParseError(source, line_no, "empty key");
      if (doc.index_.count(key) != 0) {
        throw ParseError(source, line_no, "duplicate key `" + key + "`");
      }
      doc.index_.emplace(key, doc.entries_.size());
      doc.entries_.push_back(KvEntry{std::move(key), std::move(value), line_no});
    }
    return doc;
  }

  static KvDocument parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
  }

  const std::string& source() const { return source_; }
  const std::vector<KvEntry>& entries() const { return entries_; }

  bool has(const std::string& key) const { return index_.count(key) != 0; }

  const KvEntry* find(const std::string& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  int line_of(const std::string& key) const {
    const KvEntry* e = find(key);
    return e ? e->line : 0;
  }

  std::string get_string(const std::string& key, const std::string& dflt) const {
    const KvEntry* e = find(key);
    return e ? e->value : dflt;
  }

  double get_number(const std::string& key, double dflt) const {
    const KvEntry* e = find(key);
    if (!e) return dflt;
    return parse_number(*e);
  }

  std::int64_t get_int(const std::string& key, std::int64_t dflt) const {
    const KvEntry* e = find(key);
    if (!e) return dflt;
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(e->value.data(),
                                   e->value.data() + e->value.size(), v);
    if (ec != std::errc{} || p != e->value.data() + e->value.size()) {
      throw ParseError(source_, e->line,
                       "expected integer for `" + e->key + "`, got `" +
                           e->value + "`");
    }
    return v;
  }

  bool get_bool(const std::string& key, bool dflt) const {
    const KvEntry* e = find(key);
    if (!e) return dflt;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    throw ParseError(source_, e->line,
                     "expected true/false for `" + e->key + "`, got `" +
                         e->value + "`");
  }

  /// Throws if any key is not in `known` (typo rejection). The error names
  /// the key and its line.
  template <typename Container>
  void reject_unknown_keys(const Container& known) const {
    for (const KvEntry& e : entries_) {
      bool found = false;
      for (const auto& k : known) {
        if (e.key == k) {
          found = true;
          break;
        }
      }
      if (!found) {
        throw ParseError(source_, e.line, "unknown key `" + e.key + "`");
      }
    }
  }

 private:
  double parse_number(const KvEntry& e) const {
    double v = 0.0;
    auto [p, ec] =
        std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc{} || p != e.value.data() + e.value.size()) {
      throw ParseError(source_, e.line,
                       "expected number for `" + e.key + "`, got `" +
                           e.value + "`");
    }
    return v;
  }

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
      s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
      s.remove_suffix(1);
    return s;
  }

  std::string source_;
  std::vector<KvEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace stockfire
