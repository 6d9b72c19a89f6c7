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

#include <stdexcept>
#include <string>

namespace stockfire {

/// Base class for all stockfire errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A function was called with arguments outside its domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// A value type violates one of its declared invariants. Carries the name
/// of the offending field so config loaders can point at the bad key.
class InvariantError : public Error {
 public:
  InvariantError(std::string field, std::string msg)
      : Error(field + ": " + msg),
        field_(std::move(field)),
        detail_(std::move(msg)) {}

  const std::string& field() const { return field_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string field_;
  std::string detail_;
};

/// Malformed input text. what() is "<source>:<line>: <message>" so CLI
/// output can be jumped to directly.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& msg)
      : Error(source + ":" + std::to_string(line) + ": " + msg),
        source_(source),
        line_(line) {}

  const std::string& source() const { return source_; }
  int line() const { return line_; }

 private:
  std::string source_;
  int line_;
};

/// Filesystem failure, surfaced with the path involved.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace stockfire
