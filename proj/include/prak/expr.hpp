#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prak/error.hpp"

namespace prak {

using Point4 = std::array<double, 4>;
using Vec4 = std::array<double, 4>;

/// Syntax error in an expression string; offset() is the byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation left the domain of a function (ln of non-positive, division by
/// zero, ...). subexpression() is the printed form of the offending subtree.
class EvalDomainError : public Error {
 public:
  EvalDomainError(const std::string& msg, std::string subexpression);
  const std::string& subexpression() const noexcept { return subexpr_; }

 private:
  std::string subexpr_;
};

struct Token {
  enum class Kind { number, identifier, op, lparen, rparen, comma };
  Kind kind;
  std::string text;
  std::size_t position;  // byte offset of the first character
};

/// Splits an expression source into tokens. Positions strictly increase and
/// every non-whitespace byte belongs to exactly one token.
std::vector<Token> tokenize(std::string_view src);

/// Coordinate-name aliases accepted by the parser in addition to x0..x3.
class AliasSet {
 public:
  static AliasSet none();
  /// t->x0, r->x1, phi->x2, z->x3
  static AliasSet cylindrical();
  /// t->x0, r->x1, phi->x2, theta->x3
  static AliasSet spherical();
  /// a single extra name, for one-argument profile functions such as W(s)
  static AliasSet single(std::string name, int axis = 0);

  AliasSet& add(std::string name, int axis);
  std::optional<int> axis_of(std::string_view name) const;

 private:
  std::vector<std::pair<std::string, int>> entries_;
};

namespace detail {
struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;
}  // namespace detail

/// Immutable scalar expression in the coordinates x0..x3.
///
/// Supports exact evaluation, exact symbolic differentiation and variable
/// substitution. Grammar: `+ - * / ^` with the usual precedence (`^` above
/// unary minus above `*`,`/` above `+`,`-`), right-associative `^` restricted
/// to numeric exponents, the functions sin cos tan cot exp ln sqrt, and the
/// constant pi. Instances are safe to share across threads.
class ScalarField {
 public:
  ScalarField();  // the constant 0

  static ScalarField parse(std::string_view src, const AliasSet& aliases = AliasSet::cylindrical());
  static ScalarField number(double value);
  static ScalarField variable(int axis);
  static ScalarField pi();

  double eval(const Point4& x) const;
  double operator()(const Point4& x) const { return eval(x); }

  /// Exact derivative with respect to x<axis>, lightly simplified.
  ScalarField derivative(int axis) const;

  /// Replaces every occurrence of x<axis> by `replacement` (single pass).
  ScalarField substitute(int axis, const ScalarField& replacement) const;

  /// Printed form; reparsing it yields a structurally equal tree.
  std::string str() const;

  bool is_number() const;
  double number_value() const;  // valid only when is_number()

  friend ScalarField operator+(const ScalarField&, const ScalarField&);
  friend ScalarField operator-(const ScalarField&, const ScalarField&);
  friend ScalarField operator*(const ScalarField&, const ScalarField&);
  friend ScalarField operator/(const ScalarField&, const ScalarField&);
  friend ScalarField operator-(const ScalarField&);
  friend ScalarField pow(const ScalarField& base, double exponent);
  friend ScalarField sin(const ScalarField&);
  friend ScalarField cos(const ScalarField&);
  friend ScalarField tan(const ScalarField&);
  friend ScalarField cot(const ScalarField&);
  friend ScalarField exp(const ScalarField&);
  friend ScalarField ln(const ScalarField&);
  friend ScalarField sqrt(const ScalarField&);

 private:
  explicit ScalarField(detail::NodePtr root);
  detail::NodePtr root_;
};

}  // namespace prak
