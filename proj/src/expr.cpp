#include "prak/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace prak {

ParseError::ParseError(const std::string& msg, std::size_t offset)
    : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

EvalDomainError::EvalDomainError(const std::string& msg, std::string subexpression)
    : Error(msg + " in subexpression '" + subexpression + "'"), subexpr_(std::move(subexpression)) {}

namespace detail {

enum class NodeKind { number, variable, pi, neg, add, sub, mul, div, pow, call };
enum class Fn { sin, cos, tan, cot, exp, ln, sqrt };

struct ExprNode {
  NodeKind kind;
  double value = 0.0;    // number
  int axis = 0;          // variable
  double exponent = 0.0; // pow
  Fn fn = Fn::sin;       // call
  NodePtr lhs, rhs;      // children (unary ops use lhs only)
};

namespace {

NodePtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::number;
  n->value = v;
  return n;
}

NodePtr make_variable(int axis) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::variable;
  n->axis = axis;
  return n;
}

NodePtr make_pi() {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::pi;
  return n;
}

NodePtr make_unary(NodeKind k, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(NodeKind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr make_pow(NodePtr base, double exponent) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::pow;
  n->lhs = std::move(base);
  n->exponent = exponent;
  return n;
}

NodePtr make_call(Fn fn, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::call;
  n->fn = fn;
  n->lhs = std::move(a);
  return n;
}

bool is_num(const NodePtr& n, double v) { return n->kind == NodeKind::number && n->value == v; }
bool is_num(const NodePtr& n) { return n->kind == NodeKind::number; }

// Simplifying constructors, used by derivative/substitute/operator building.
// Folding is limited to neutral elements and pure-number operands.
NodePtr s_neg(NodePtr a);

NodePtr s_add(NodePtr a, NodePtr b) {
  if (is_num(a, 0.0)) return b;
  if (is_num(b, 0.0)) return a;
  if (is_num(a) && is_num(b)) return make_number(a->value + b->value);
  return make_binary(NodeKind::add, std::move(a), std::move(b));
}

NodePtr s_sub(NodePtr a, NodePtr b) {
  if (is_num(b, 0.0)) return a;
  if (is_num(a) && is_num(b)) return make_number(a->value - b->value);
  if (is_num(a, 0.0)) return s_neg(std::move(b));
  return make_binary(NodeKind::sub, std::move(a), std::move(b));
}

NodePtr s_neg(NodePtr a) {
  if (is_num(a)) return make_number(-a->value);
  if (a->kind == NodeKind::neg) return a->lhs;
  return make_unary(NodeKind::neg, std::move(a));
}

NodePtr s_mul(NodePtr a, NodePtr b) {
  if (is_num(a, 0.0) || is_num(b, 0.0)) return make_number(0.0);
  if (is_num(a, 1.0)) return b;
  if (is_num(b, 1.0)) return a;
  if (is_num(a) && is_num(b)) return make_number(a->value * b->value);
  return make_binary(NodeKind::mul, std::move(a), std::move(b));
}

NodePtr s_div(NodePtr a, NodePtr b) {
  if (is_num(b, 1.0)) return a;
  if (is_num(a, 0.0)) return make_number(0.0);
  if (is_num(a) && is_num(b) && b->value != 0.0) return make_number(a->value / b->value);
  return make_binary(NodeKind::div, std::move(a), std::move(b));
}

NodePtr s_pow(NodePtr base, double exponent) {
  if (exponent == 1.0) return base;
  if (exponent == 0.0) return make_number(1.0);
  if (is_num(base)) return make_number(std::pow(base->value, exponent));
  return make_pow(std::move(base), exponent);
}

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::sin: return "sin";
    case Fn::cos: return "cos";
    case Fn::tan: return "tan";
    case Fn::cot: return "cot";
    case Fn::exp: return "exp";
    case Fn::ln: return "ln";
    case Fn::sqrt: return "sqrt";
  }
  return "?";
}

std::optional<Fn> fn_from_name(std::string_view s) {
  if (s == "sin") return Fn::sin;
  if (s == "cos") return Fn::cos;
  if (s == "tan") return Fn::tan;
  if (s == "cot") return Fn::cot;
  if (s == "exp") return Fn::exp;
  if (s == "ln") return Fn::ln;
  if (s == "sqrt") return Fn::sqrt;
  return std::nullopt;
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Printing levels: add/sub = 1, mul/div = 2, unary minus = 3, pow = 4, primary = 5.
// Negative literals print with a leading '-', so they rank as unary minus.
int level_of(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::add:
    case NodeKind::sub: return 1;
    case NodeKind::mul:
    case NodeKind::div: return 2;
    case NodeKind::neg: return 3;
    case NodeKind::pow: return 4;
    case NodeKind::number:
      return n.value < 0 || std::signbit(n.value) ? 3 : 5;
    default: return 5;
  }
}

void print_node(const ExprNode& n, std::string& out);

void print_child(const NodePtr& c, int min_level, std::string& out) {
  if (level_of(*c) < min_level) {
    out += '(';
    print_node(*c, out);
    out += ')';
  } else {
    print_node(*c, out);
  }
}

void print_node(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::number:
      if (n.value < 0 || std::signbit(n.value)) {
        out += '-';
        out += format_number(-n.value);
      } else {
        out += format_number(n.value);
      }
      break;
    case NodeKind::variable:
      out += 'x';
      out += static_cast<char>('0' + n.axis);
      break;
    case NodeKind::pi:
      out += "pi";
      break;
    case NodeKind::neg:
      out += '-';
      print_child(n.lhs, 3, out);
      break;
    case NodeKind::add:
      print_child(n.lhs, 1, out);
      out += " + ";
      print_child(n.rhs, 2, out);
      break;
    case NodeKind::sub:
      print_child(n.lhs, 1, out);
      out += " - ";
      print_child(n.rhs, 2, out);
      break;
    case NodeKind::mul:
      print_child(n.lhs, 2, out);
      out += '*';
      print_child(n.rhs, 3, out);
      break;
    case NodeKind::div:
      print_child(n.lhs, 2, out);
      out += '/';
      print_child(n.rhs, 3, out);
      break;
    case NodeKind::pow:
      print_child(n.lhs, 5, out);
      out += '^';
      if (n.exponent < 0) {
        out += "(-";
        out += format_number(-n.exponent);
        out += ')';
      } else {
        out += format_number(n.exponent);
      }
      break;
    case NodeKind::call:
      out += fn_name(n.fn);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      break;
  }
}

std::string print_tree(const NodePtr& n) {
  std::string out;
  print_node(*n, out);
  return out;
}

[[noreturn]] void domain_error(const char* msg, const ExprNode& at) {
  std::string sub;
  print_node(at, sub);
  throw EvalDomainError(msg, std::move(sub));
}

double eval_node(const ExprNode& n, const Point4& x) {
  switch (n.kind) {
    case NodeKind::number: return n.value;
    case NodeKind::variable: return x[n.axis];
    case NodeKind::pi: return M_PI;
    case NodeKind::neg: return -eval_node(*n.lhs, x);
    case NodeKind::add: return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
    case NodeKind::sub: return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
    case NodeKind::mul: return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
    case NodeKind::div: {
      const double num = eval_node(*n.lhs, x);
      const double den = eval_node(*n.rhs, x);
      if (den == 0.0) domain_error("division by zero", n);
      return num / den;
    }
    case NodeKind::pow: {
      const double base = eval_node(*n.lhs, x);
      if (base < 0.0 && n.exponent != std::floor(n.exponent))
        domain_error("negative base with non-integer exponent", n);
      if (base == 0.0 && n.exponent < 0.0) domain_error("zero base with negative exponent", n);
      return std::pow(base, n.exponent);
    }
    case NodeKind::call: {
      const double a = eval_node(*n.lhs, x);
      switch (n.fn) {
        case Fn::sin: return std::sin(a);
        case Fn::cos: return std::cos(a);
        case Fn::tan: return std::tan(a);
        case Fn::cot: {
          const double s = std::sin(a);
          if (s == 0.0) domain_error("cot at a multiple of pi", n);
          return std::cos(a) / s;
        }
        case Fn::exp: return std::exp(a);
        case Fn::ln:
          if (a <= 0.0) domain_error("ln of a non-positive value", n);
          return std::log(a);
        case Fn::sqrt:
          if (a < 0.0) domain_error("sqrt of a negative value", n);
          return std::sqrt(a);
      }
      return 0.0;
    }
  }
  return 0.0;
}

NodePtr derivative_node(const NodePtr& n, int axis) {
  switch (n->kind) {
    case NodeKind::number:
    case NodeKind::pi: return make_number(0.0);
    case NodeKind::variable: return make_number(n->axis == axis ? 1.0 : 0.0);
    case NodeKind::neg: return s_neg(derivative_node(n->lhs, axis));
    case NodeKind::add: return s_add(derivative_node(n->lhs, axis), derivative_node(n->rhs, axis));
    case NodeKind::sub: return s_sub(derivative_node(n->lhs, axis), derivative_node(n->rhs, axis));
    case NodeKind::mul:
      return s_add(s_mul(derivative_node(n->lhs, axis), n->rhs),
                   s_mul(n->lhs, derivative_node(n->rhs, axis)));
    case NodeKind::div:
      // (u'v - uv') / v^2
      return s_div(s_sub(s_mul(derivative_node(n->lhs, axis), n->rhs),
                         s_mul(n->lhs, derivative_node(n->rhs, axis))),
                   s_pow(n->rhs, 2.0));
    case NodeKind::pow:
      // p * u^(p-1) * u'
      return s_mul(s_mul(make_number(n->exponent), s_pow(n->lhs, n->exponent - 1.0)),
                   derivative_node(n->lhs, axis));
    case NodeKind::call: {
      NodePtr du = derivative_node(n->lhs, axis);
      switch (n->fn) {
        case Fn::sin: return s_mul(make_call(Fn::cos, n->lhs), std::move(du));
        case Fn::cos: return s_neg(s_mul(make_call(Fn::sin, n->lhs), std::move(du)));
        case Fn::tan: return s_div(std::move(du), s_pow(make_call(Fn::cos, n->lhs), 2.0));
        case Fn::cot: return s_neg(s_div(std::move(du), s_pow(make_call(Fn::sin, n->lhs), 2.0)));
        case Fn::exp: return s_mul(make_call(Fn::exp, n->lhs), std::move(du));
        case Fn::ln: return s_div(std::move(du), n->lhs);
        case Fn::sqrt:
          return s_div(std::move(du), s_mul(make_number(2.0), make_call(Fn::sqrt, n->lhs)));
      }
      return make_number(0.0);
    }
  }
  return make_number(0.0);
}

NodePtr substitute_node(const NodePtr& n, int axis, const NodePtr& repl) {
  switch (n->kind) {
    case NodeKind::number:
    case NodeKind::pi: return n;
    case NodeKind::variable: return n->axis == axis ? repl : n;
    case NodeKind::neg: {
      NodePtr a = substitute_node(n->lhs, axis, repl);
      return a == n->lhs ? n : make_unary(NodeKind::neg, std::move(a));
    }
    case NodeKind::pow: {
      NodePtr a = substitute_node(n->lhs, axis, repl);
      return a == n->lhs ? n : make_pow(std::move(a), n->exponent);
    }
    case NodeKind::call: {
      NodePtr a = substitute_node(n->lhs, axis, repl);
      return a == n->lhs ? n : make_call(n->fn, std::move(a));
    }
    default: {
      NodePtr a = substitute_node(n->lhs, axis, repl);
      NodePtr b = substitute_node(n->rhs, axis, repl);
      return (a == n->lhs && b == n->rhs) ? n : make_binary(n->kind, std::move(a), std::move(b));
    }
  }
}

}  // namespace
}  // namespace detail

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      // strtod needs a NUL-terminated buffer; copy the remainder once
      std::string rest(src.substr(i));
      char* end = nullptr;
      std::strtod(rest.c_str(), &end);
      std::size_t len = static_cast<std::size_t>(end - rest.c_str());
      if (len == 0) throw ParseError("malformed number", i);
      tokens.push_back({Token::Kind::number, rest.substr(0, len), i});
      i += len;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i + 1;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      tokens.push_back({Token::Kind::identifier, std::string(src.substr(i, j - i)), i});
      i = j;
      continue;
    }
    switch (c) {
      case '+': case '-': case '*': case '/': case '^':
        tokens.push_back({Token::Kind::op, std::string(1, c), i});
        break;
      case '(':
        tokens.push_back({Token::Kind::lparen, "(", i});
        break;
      case ')':
        tokens.push_back({Token::Kind::rparen, ")", i});
        break;
      case ',':
        tokens.push_back({Token::Kind::comma, ",", i});
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    ++i;
  }
  return tokens;
}

AliasSet AliasSet::none() { return AliasSet{}; }

AliasSet AliasSet::cylindrical() {
  AliasSet a;
  a.add("t", 0).add("r", 1).add("phi", 2).add("z", 3);
  return a;
}

AliasSet AliasSet::spherical() {
  AliasSet a;
  a.add("t", 0).add("r", 1).add("phi", 2).add("theta", 3);
  return a;
}

AliasSet AliasSet::single(std::string name, int axis) {
  AliasSet a;
  a.add(std::move(name), axis);
  return a;
}

AliasSet& AliasSet::add(std::string name, int axis) {
  entries_.emplace_back(std::move(name), axis);
  return *this;
}

std::optional<int> AliasSet::axis_of(std::string_view name) const {
  if (name.size() == 2 && name[0] == 'x' && name[1] >= '0' && name[1] <= '3')
    return name[1] - '0';
  for (const auto& [n, axis] : entries_)
    if (n == name) return axis;
  return std::nullopt;
}

namespace {

using detail::ExprNode;
using detail::Fn;
using detail::NodeKind;
using detail::NodePtr;

class Parser {
 public:
  Parser(std::string_view src, const AliasSet& aliases)
      : src_len_(src.size()), tokens_(tokenize(src)), aliases_(aliases) {}

  NodePtr parse() {
    if (tokens_.empty()) throw ParseError("empty expression", 0);
    NodePtr e = expression();
    if (pos_ < tokens_.size())
      throw ParseError("unexpected token '" + tokens_[pos_].text + "'", tokens_[pos_].position);
    return e;
  }

 private:
  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token& peek() const { return tokens_[pos_]; }
  std::size_t here() const { return at_end() ? src_len_ : tokens_[pos_].position; }

  bool accept_op(char c) {
    if (!at_end() && peek().kind == Token::Kind::op && peek().text[0] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_rparen() {
    if (at_end() || peek().kind != Token::Kind::rparen)
      throw ParseError("expected ')'", here());
    ++pos_;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept_op('+'))
        lhs = detail::make_binary(NodeKind::add, std::move(lhs), term());
      else if (accept_op('-'))
        lhs = detail::make_binary(NodeKind::sub, std::move(lhs), term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept_op('*'))
        lhs = detail::make_binary(NodeKind::mul, std::move(lhs), factor());
      else if (accept_op('/'))
        lhs = detail::make_binary(NodeKind::div, std::move(lhs), factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    if (accept_op('-')) return detail::make_unary(NodeKind::neg, factor());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept_op('^')) return detail::make_pow(std::move(base), exponent());
    return base;
  }

  // Exponents are numeric literals (optionally signed or parenthesized);
  // chained ^ folds right-associatively into a single number.
  double exponent() {
    if (accept_op('-')) return -exponent();
    if (at_end()) throw ParseError("expected numeric exponent", here());
    double value;
    if (peek().kind == Token::Kind::number) {
      value = std::strtod(peek().text.c_str(), nullptr);
      ++pos_;
    } else if (peek().kind == Token::Kind::lparen) {
      ++pos_;
      value = exponent();
      expect_rparen();
    } else {
      throw ParseError("exponent must be a numeric literal", here());
    }
    if (accept_op('^')) value = std::pow(value, exponent());
    return value;
  }

  NodePtr primary() {
    if (at_end()) throw ParseError("unexpected end of expression", here());
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::number: {
        ++pos_;
        return detail::make_number(std::strtod(t.text.c_str(), nullptr));
      }
      case Token::Kind::identifier: {
        ++pos_;
        if (!at_end() && peek().kind == Token::Kind::lparen) {
          auto fn = detail::fn_from_name(t.text);
          if (!fn) throw ParseError("unknown function '" + t.text + "'", t.position);
          ++pos_;
          NodePtr arg = expression();
          expect_rparen();
          return detail::make_call(*fn, std::move(arg));
        }
        if (t.text == "pi") return detail::make_pi();
        if (auto axis = aliases_.axis_of(t.text)) return detail::make_variable(*axis);
        throw ParseError("unknown identifier '" + t.text + "'", t.position);
      }
      case Token::Kind::lparen: {
        ++pos_;
        NodePtr e = expression();
        expect_rparen();
        return e;
      }
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.position);
    }
  }

  std::size_t src_len_;
  std::vector<Token> tokens_;
  const AliasSet& aliases_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarField::ScalarField() : root_(detail::make_number(0.0)) {}
ScalarField::ScalarField(detail::NodePtr root) : root_(std::move(root)) {}

ScalarField ScalarField::parse(std::string_view src, const AliasSet& aliases) {
  return ScalarField(Parser(src, aliases).parse());
}

ScalarField ScalarField::number(double value) { return ScalarField(detail::make_number(value)); }

ScalarField ScalarField::variable(int axis) {
  if (axis < 0 || axis > 3) throw Error("variable axis out of range");
  return ScalarField(detail::make_variable(axis));
}

ScalarField ScalarField::pi() { return ScalarField(detail::make_pi()); }

double ScalarField::eval(const Point4& x) const { return detail::eval_node(*root_, x); }

ScalarField ScalarField::derivative(int axis) const {
  return ScalarField(detail::derivative_node(root_, axis));
}

ScalarField ScalarField::substitute(int axis, const ScalarField& replacement) const {
  return ScalarField(detail::substitute_node(root_, axis, replacement.root_));
}

std::string ScalarField::str() const { return detail::print_tree(root_); }

bool ScalarField::is_number() const { return root_->kind == detail::NodeKind::number; }
double ScalarField::number_value() const { return root_->value; }

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return ScalarField(detail::s_add(a.root_, b.root_));
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return ScalarField(detail::s_sub(a.root_, b.root_));
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return ScalarField(detail::s_mul(a.root_, b.root_));
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  return ScalarField(detail::s_div(a.root_, b.root_));
}
ScalarField operator-(const ScalarField& a) { return ScalarField(detail::s_neg(a.root_)); }
ScalarField pow(const ScalarField& base, double exponent) {
  return ScalarField(detail::s_pow(base.root_, exponent));
}
ScalarField sin(const ScalarField& a) { return ScalarField(detail::make_call(Fn::sin, a.root_)); }
ScalarField cos(const ScalarField& a) { return ScalarField(detail::make_call(Fn::cos, a.root_)); }
ScalarField tan(const ScalarField& a) { return ScalarField(detail::make_call(Fn::tan, a.root_)); }
ScalarField cot(const ScalarField& a) { return ScalarField(detail::make_call(Fn::cot, a.root_)); }
ScalarField exp(const ScalarField& a) { return ScalarField(detail::make_call(Fn::exp, a.root_)); }
ScalarField ln(const ScalarField& a) { return ScalarField(detail::make_call(Fn::ln, a.root_)); }
ScalarField sqrt(const ScalarField& a) { return ScalarField(detail::make_call(Fn::sqrt, a.root_)); }

}  // namespace prak
