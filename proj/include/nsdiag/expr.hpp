#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nsdiag/function.hpp"

namespace nsdiag {

struct ExprNode;

/// Compiled arithmetic expression over variables x1..xn. See
/// docs/expression-grammar.md for the accepted language.
class Expression {
 public:
  Expression() = default;
  double operator()(const Vector& x) const;
  const std::string& source() const { return source_; }
  int dim() const { return dim_; }

 private:
  friend Expression parse_expression(const std::string&, int, int, int);
  std::shared_ptr<const ExprNode> root_;
  std::string source_;
  int dim_ = 0;
};

/// Parses `text` as an expression in x1..x`dim`. `line` and `column_offset`
/// position the text inside a larger file for error messages.
Expression parse_expression(const std::string& text, int dim, int line = 1, int column_offset = 0);

/// Wraps expressions as a proper function; NaN results raise DomainError.
ProperFunction function_from_expressions(const std::string& name, int dim, const Expression& value,
                                         const std::vector<Expression>& gradient = {});

/// Reads a function file:
///   name: <identifier>        (optional)
///   dim: <n>
///   expr: <expression>
///   grad: <expression>        (optional, exactly n lines when present)
///   box: <lo>,<hi>            (optional symmetric bounds, default -1,1)
/// Blank lines and lines starting with '#' are ignored.
ProperFunction load_function_file(const std::string& path);
ProperFunction parse_function_text(const std::string& text, const std::string& default_name = "USER");

}  // namespace nsdiag
