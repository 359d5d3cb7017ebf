// Copyright 2026 The qdyn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace qdyn::expr {

/// Parse failure with a zero-based column offset into the source text.
struct ParseError : std::runtime_error {
  int column;
  ParseError(const std::string& msg, int col)
      : std::runtime_error(msg + " at column " + std::to_string(col)),
        column(col) {}
};

struct Node;

/// A rate expression in the variable t.  Grammar: numbers, t, + - * / ^,
/// unary minus, sin cos exp sqrt, parentheses.  Precedence
/// ^ > unary- > * / > + -, binaries left-associative, ^ right-associative.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double eval(double t) const;
  /// Fully parenthesized round-trippable form.
  std::string str() const;
  const std::string& source() const { return source_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace qdyn::expr
