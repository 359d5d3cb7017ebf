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

#include "qdyn/expression.hpp"

#include <cmath>
#include <cstdio>
#include <cctype>

namespace qdyn::expr {

enum class Op { constant, variable, add, sub, mul, div, pow, neg, call };

struct Node {
  Op op;
  double value = 0.0;          // constant
  std::string name;            // call
  std::shared_ptr<const Node> lhs, rhs;
};

using NodePtr = std::shared_ptr<const Node>;

namespace {

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr run() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ < text_.size()) {
      throw ParseError("unexpected character '" + std::string(1, text_[pos_]) +
                           "'",
                       int(pos_));
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(unsigned(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Op::add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make(Op::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = make(Op::mul, lhs, parse_factor());
      } else if (accept('/')) {
        lhs = make(Op::div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  // factor := '-' factor | power
  NodePtr parse_factor() {
    if (accept('-')) return make(Op::neg, parse_factor());
    return parse_power();
  }

  // power := atom ('^' factor)?   (right-associative, binds above unary -)
  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) return make(Op::pow, base, parse_factor());
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) {
      throw ParseError("unexpected end of input", int(pos_));
    }
    const char c = text_[pos_];
    if (std::isdigit(unsigned(c)) || c == '.') return parse_number();
    if (std::isalpha(unsigned(c))) return parse_identifier();
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      if (!accept(')')) {
        throw ParseError("expected ')'", int(pos_));
      }
      return e;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'",
                     int(pos_));
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    const char* begin = text_.c_str() + start;
    char* after = nullptr;
    const double v = std::strtod(begin, &after);
    end = start + std::size_t(after - begin);
    if (end == start) {
      throw ParseError("invalid number", int(start));
    }
    pos_ = end;
    auto n = std::make_shared<Node>();
    n->op = Op::constant;
    n->value = v;
    return n;
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(unsigned(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "t") {
      return make(Op::variable);
    }
    if (name == "pi") {
      auto n = std::make_shared<Node>();
      n->op = Op::constant;
      n->value = M_PI;
      return n;
    }
    if (name == "sin" || name == "cos" || name == "exp" || name == "sqrt") {
      if (!accept('(')) {
        throw ParseError("expected '(' after function '" + name + "'",
                         int(pos_));
      }
      NodePtr arg = parse_sum();
      if (!accept(')')) {
        throw ParseError("expected ')'", int(pos_));
      }
      auto n = std::make_shared<Node>();
      n->op = Op::call;
      n->name = name;
      n->lhs = arg;
      return n;
    }
    throw ParseError("unknown identifier '" + name + "'", int(start));
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, double t) {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: return t;
    case Op::add: return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
    case Op::sub: return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
    case Op::mul: return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
    case Op::div: return eval_node(*n.lhs, t) / eval_node(*n.rhs, t);
    case Op::pow: return std::pow(eval_node(*n.lhs, t), eval_node(*n.rhs, t));
    case Op::neg: return -eval_node(*n.lhs, t);
    case Op::call: {
      const double a = eval_node(*n.lhs, t);
      if (n.name == "sin") return std::sin(a);
      if (n.name == "cos") return std::cos(a);
      if (n.name == "exp") return std::exp(a);
      return std::sqrt(a);
    }
  }
  return 0.0;
}

std::string print_node(const Node& n) {
  char buf[40];
  switch (n.op) {
    case Op::constant:
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      return buf;
    case Op::variable: return "t";
    case Op::add:
      return "(" + print_node(*n.lhs) + " + " + print_node(*n.rhs) + ")";
    case Op::sub:
      return "(" + print_node(*n.lhs) + " - " + print_node(*n.rhs) + ")";
    case Op::mul:
      return "(" + print_node(*n.lhs) + " * " + print_node(*n.rhs) + ")";
    case Op::div:
      return "(" + print_node(*n.lhs) + " / " + print_node(*n.rhs) + ")";
    case Op::pow:
      return "(" + print_node(*n.lhs) + " ^ " + print_node(*n.rhs) + ")";
    case Op::neg: return "(-" + print_node(*n.lhs) + ")";
    case Op::call: return n.name + "(" + print_node(*n.lhs) + ")";
  }
  return "";
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).run();
  e.source_ = text;
  return e;
}

double Expression::eval(double t) const {
  return eval_node(*root_, t);
}

std::string Expression::str() const {
  return print_node(*root_);
}

}  // namespace qdyn::expr
