#include "spilab/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace spilab::expr {

namespace {

struct NumNode : Node {
  double v;
  explicit NumNode(double x) : v(x) {}
  double eval(double) const override { return v; }
};

struct VarNode : Node {
  double eval(double x) const override { return x; }
};

struct UnaryNode : Node {
  enum class Op { abs, exp, log, neg };
  Op op;
  std::shared_ptr<const Node> arg;
  UnaryNode(Op o, std::shared_ptr<const Node> a) : op(o), arg(std::move(a)) {}
  double eval(double x) const override {
    double v = arg->eval(x);
    switch (op) {
      case Op::abs: return std::abs(v);
      case Op::exp: return std::exp(v);
      case Op::log: return std::log(v);
      case Op::neg: return -v;
    }
    return v;
  }
};

struct BinNode : Node {
  char op;
  std::shared_ptr<const Node> lhs, rhs;
  BinNode(char o, std::shared_ptr<const Node> l, std::shared_ptr<const Node> r)
      : op(o), lhs(std::move(l)), rhs(std::move(r)) {}
  double eval(double x) const override {
    double a = lhs->eval(x), b = rhs->eval(x);
    switch (op) {
      case '+': return a + b;
      case '-': return a - b;
      case '*': return a * b;
      case '/': return a / b;
    }
    return NAN;
  }
};

struct PowNode : Node {
  std::shared_ptr<const Node> base;
  double exponent;
  PowNode(std::shared_ptr<const Node> b, double e) : base(std::move(b)), exponent(e) {}
  double eval(double x) const override { return std::pow(base->eval(x), exponent); }
};

struct Token {
  enum class Kind { number, ident, symbol, end };
  Kind kind;
  std::size_t offset;
  double value = 0;
  std::string text;
};

[[noreturn]] void fail(std::size_t offset, const std::string& msg) {
  throw Error(Errc::parse_error, "syntax error at offset " + std::to_string(offset) + ": " + msg);
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = i;
      while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.'))
        ++i;
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t save = i;
        ++i;
        if (i < src.size() && (src[i] == '+' || src[i] == '-')) ++i;
        if (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        } else {
          i = save;  // 'e' belongs to something else
        }
      }
      std::string text(src.substr(start, i - start));
      char* endp = nullptr;
      double v = std::strtod(text.c_str(), &endp);
      if (endp == text.c_str() || *endp != '\0') fail(start, "malformed number '" + text + "'");
      out.push_back({Token::Kind::number, start, v, text});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < src.size() && std::isalnum(static_cast<unsigned char>(src[i]))) ++i;
      out.push_back({Token::Kind::ident, start, 0, std::string(src.substr(start, i - start))});
      continue;
    }
    if (std::string("+-*/^()").find(c) != std::string::npos) {
      out.push_back({Token::Kind::symbol, i, 0, std::string(1, c)});
      ++i;
      continue;
    }
    fail(i, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Token::Kind::end, src.size(), 0, ""});
  return out;
}

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  std::shared_ptr<const Node> run() {
    auto e = parse_expr();
    if (!at_end()) fail(cur().offset, "trailing input '" + cur().text + "'");
    return e;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  bool at_end() const { return cur().kind == Token::Kind::end; }
  bool is_symbol(const char* s) const {
    return cur().kind == Token::Kind::symbol && cur().text == s;
  }
  void expect_symbol(const char* s) {
    if (!is_symbol(s)) fail(cur().offset, std::string("expected '") + s + "'");
    ++pos_;
  }

  std::shared_ptr<const Node> parse_expr() {
    bool negate = false;
    if (is_symbol("-")) {
      negate = true;
      ++pos_;
    } else if (is_symbol("+")) {
      ++pos_;
    }
    auto lhs = parse_term();
    if (negate) lhs = std::make_shared<UnaryNode>(UnaryNode::Op::neg, lhs);
    while (is_symbol("+") || is_symbol("-")) {
      char op = cur().text[0];
      ++pos_;
      lhs = std::make_shared<BinNode>(op, lhs, parse_term());
    }
    return lhs;
  }

  std::shared_ptr<const Node> parse_term() {
    auto lhs = parse_factor();
    while (is_symbol("*") || is_symbol("/")) {
      char op = cur().text[0];
      ++pos_;
      lhs = std::make_shared<BinNode>(op, lhs, parse_factor());
    }
    return lhs;
  }

  std::shared_ptr<const Node> parse_factor() {
    auto base = parse_atom();
    if (is_symbol("^")) {
      ++pos_;
      if (cur().kind != Token::Kind::number)
        fail(cur().offset, "exponent must be a number");
      double e = cur().value;
      ++pos_;
      return std::make_shared<PowNode>(base, e);
    }
    return base;
  }

  std::shared_ptr<const Node> parse_atom() {
    if (cur().kind == Token::Kind::number) {
      double v = cur().value;
      ++pos_;
      return std::make_shared<NumNode>(v);
    }
    if (cur().kind == Token::Kind::ident) {
      std::string name = cur().text;
      std::size_t off = cur().offset;
      ++pos_;
      if (name == "x") return std::make_shared<VarNode>();
      if (name == "abs") {
        expect_symbol("(");
        if (!(cur().kind == Token::Kind::ident && cur().text == "x"))
          fail(cur().offset, "abs takes the bare variable x");
        ++pos_;
        expect_symbol(")");
        return std::make_shared<UnaryNode>(UnaryNode::Op::abs, std::make_shared<VarNode>());
      }
      if (name == "exp" || name == "log") {
        expect_symbol("(");
        auto inner = parse_expr();
        expect_symbol(")");
        auto op = (name == "exp") ? UnaryNode::Op::exp : UnaryNode::Op::log;
        return std::make_shared<UnaryNode>(op, inner);
      }
      fail(off, "unknown identifier '" + name + "'");
    }
    if (is_symbol("(")) {
      ++pos_;
      auto inner = parse_expr();
      expect_symbol(")");
      return inner;
    }
    fail(cur().offset, at_end() ? "unexpected end of input" : "unexpected token '" + cur().text + "'");
  }
};

}  // namespace

std::shared_ptr<const Node> parse(std::string_view src) {
  if (src.empty()) throw Error(Errc::parse_error, "syntax error at offset 0: empty expression");
  return Parser(src).run();
}

}  // namespace spilab::expr
