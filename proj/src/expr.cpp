#include "nsdiag/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace nsdiag {

enum class Op { num, var, neg, add, sub, mul, div, pow, abs, cbrt, sqrt, exp, log, eq, lt, gt, le, ge, and_, or_, if_ };

struct ExprNode {
  Op op = Op::num;
  double number = 0.0;
  int index = 0;
  std::vector<std::shared_ptr<const ExprNode>> args;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(Op op, std::vector<NodePtr> args) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

bool nearly_equal(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

double eval_node(const ExprNode& n, const Vector& x) {
  auto arg = [&](int i) { return eval_node(*n.args[i], x); };
  switch (n.op) {
    case Op::num: return n.number;
    case Op::var: return x[n.index];
    case Op::neg: return -arg(0);
    case Op::add: return arg(0) + arg(1);
    case Op::sub: return arg(0) - arg(1);
    case Op::mul: return arg(0) * arg(1);
    case Op::div: return arg(0) / arg(1);
    case Op::pow: return std::pow(arg(0), arg(1));
    case Op::abs: return std::abs(arg(0));
    case Op::cbrt: return std::cbrt(arg(0));
    case Op::sqrt: return std::sqrt(arg(0));
    case Op::exp: return std::exp(arg(0));
    case Op::log: return std::log(arg(0));
    case Op::eq: return nearly_equal(arg(0), arg(1)) ? 1.0 : 0.0;
    case Op::lt: return arg(0) < arg(1) ? 1.0 : 0.0;
    case Op::gt: return arg(0) > arg(1) ? 1.0 : 0.0;
    case Op::le: return arg(0) <= arg(1) ? 1.0 : 0.0;
    case Op::ge: return arg(0) >= arg(1) ? 1.0 : 0.0;
    case Op::and_: return (arg(0) != 0.0 && arg(1) != 0.0) ? 1.0 : 0.0;
    case Op::or_: return (arg(0) != 0.0 || arg(1) != 0.0) ? 1.0 : 0.0;
    case Op::if_: return arg(0) != 0.0 ? arg(1) : arg(2);
  }
  return 0.0;
}

class Parser {
 public:
  Parser(const std::string& text, int dim, int line, int col0) : s_(text), dim_(dim), line_(line), col0_(col0) {}

  NodePtr parse() {
    NodePtr n = condition();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  const std::string& s_;
  int dim_;
  int line_;
  int col0_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col0_ + static_cast<int>(pos_) + 1);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(const std::string& tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) != 0) return false;
    // Keywords must not run into an identifier.
    if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
      std::size_t end = pos_ + tok.size();
      if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) return false;
    }
    pos_ += tok.size();
    return true;
  }

  void expect(const std::string& tok) {
    if (!accept(tok)) fail("expected '" + tok + "'");
  }

  // condition := comparison (('and' | 'or') comparison)*
  NodePtr condition() {
    NodePtr lhs = comparison();
    for (;;) {
      if (accept("and")) lhs = make(Op::and_, {lhs, comparison()});
      else if (accept("or")) lhs = make(Op::or_, {lhs, comparison()});
      else return lhs;
    }
  }

  // comparison := sum (relop sum)?
  NodePtr comparison() {
    NodePtr lhs = sum();
    if (accept("<=")) return make(Op::le, {lhs, sum()});
    if (accept(">=")) return make(Op::ge, {lhs, sum()});
    if (accept("<")) return make(Op::lt, {lhs, sum()});
    if (accept(">")) return make(Op::gt, {lhs, sum()});
    if (accept("=")) return make(Op::eq, {lhs, sum()});
    return lhs;
  }

  NodePtr sum() {
    NodePtr lhs = term();
    for (;;) {
      if (accept("+")) lhs = make(Op::add, {lhs, term()});
      else if (accept("-")) lhs = make(Op::sub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept("*")) lhs = make(Op::mul, {lhs, unary()});
      else if (accept("/")) lhs = make(Op::div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept("-")) return make(Op::neg, {unary()});
    if (accept("+")) return unary();
    return power();
  }

  // Right associative; the exponent may carry its own sign.
  NodePtr power() {
    NodePtr base = primary();
    if (accept("^")) return make(Op::pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept("(")) {
      NodePtr n = condition();
      expect(")");
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return word();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_shared<ExprNode>();
    n->number = v;
    return n;
  }

  NodePtr word() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string w = s_.substr(start, pos_ - start);
    if (w == "inf") {
      auto n = std::make_shared<ExprNode>();
      n->number = std::numeric_limits<double>::infinity();
      return n;
    }
    if (w == "if") {
      expect("(");
      NodePtr c = condition();
      expect(",");
      NodePtr a = condition();
      expect(",");
      NodePtr b = condition();
      expect(")");
      return make(Op::if_, {c, a, b});
    }
    static const std::pair<const char*, Op> funcs[] = {
        {"abs", Op::abs}, {"cbrt", Op::cbrt}, {"sqrt", Op::sqrt}, {"exp", Op::exp}, {"log", Op::log}};
    for (const auto& [fname, op] : funcs) {
      if (w == fname) {
        expect("(");
        NodePtr a = condition();
        expect(")");
        return make(op, {a});
      }
    }
    if (w.size() >= 2 && w[0] == 'x' && std::all_of(w.begin() + 1, w.end(), ::isdigit)) {
      int idx = std::stoi(w.substr(1));
      if (idx < 1 || idx > dim_) {
        pos_ = start;
        fail("variable " + w + " outside x1..x" + std::to_string(dim_));
      }
      auto n = std::make_shared<ExprNode>();
      n->op = Op::var;
      n->index = idx - 1;
      return n;
    }
    pos_ = start;
    fail("unknown identifier '" + w + "'");
  }
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

double Expression::operator()(const Vector& x) const {
  if (!root_) throw ConfigError("empty expression");
  return eval_node(*root_, x);
}

Expression parse_expression(const std::string& text, int dim, int line, int column_offset) {
  if (dim < 1) throw ConfigError("expression dimension must be positive");
  Parser p(text, dim, line, column_offset);
  Expression e;
  e.root_ = p.parse();
  e.source_ = text;
  e.dim_ = dim;
  return e;
}

ProperFunction function_from_expressions(const std::string& name, int dim, const Expression& value,
                                         const std::vector<Expression>& gradient) {
  if (!gradient.empty() && static_cast<int>(gradient.size()) != dim)
    throw ConfigError(name + ": gradient needs exactly " + std::to_string(dim) + " components");
  ProperFunction f;
  f.name = name;
  f.dim = dim;
  f.domain_box = symmetric_box(dim, 1.0);
  f.eval = [value](const Vector& x) { return ExtReal(value(x)); };
  if (!gradient.empty()) {
    f.gradient = [gradient](const Vector& x) -> Vector {
      Vector g(static_cast<Eigen::Index>(gradient.size()));
      for (std::size_t i = 0; i < gradient.size(); ++i) g[static_cast<Eigen::Index>(i)] = gradient[i](x);
      return g;
    };
  }
  return f;
}

ProperFunction parse_function_text(const std::string& text, const std::string& default_name) {
  std::string name = default_name;
  int dim = 0;
  std::string expr_text;
  int expr_line = 0, expr_col = 0;
  std::vector<std::tuple<std::string, int, int>> grads;
  double box_lo = -1.0, box_hi = 1.0;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string t = trim(raw);
    if (t.empty() || t[0] == '#') continue;
    std::size_t colon = raw.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'key: value'", line, 1);
    std::string key = trim(raw.substr(0, colon));
    std::string rest = raw.substr(colon + 1);
    int col = static_cast<int>(colon) + 1;
    if (key == "name") {
      name = trim(rest);
    } else if (key == "dim") {
      try {
        dim = std::stoi(trim(rest));
      } catch (const std::logic_error&) {
        throw ParseError("dim must be a positive integer", line, col + 1);
      }
      if (dim < 1) throw ParseError("dim must be a positive integer", line, col + 1);
    } else if (key == "expr") {
      expr_text = rest;
      expr_line = line;
      expr_col = col;
    } else if (key == "grad") {
      grads.emplace_back(rest, line, col);
    } else if (key == "box") {
      auto comma = rest.find(',');
      try {
        if (comma == std::string::npos) throw std::invalid_argument("box");
        box_lo = std::stod(rest.substr(0, comma));
        box_hi = std::stod(rest.substr(comma + 1));
      } catch (const std::logic_error&) {
        throw ParseError("box expects '<lo>,<hi>'", line, col + 1);
      }
    } else {
      throw ParseError("unknown key '" + key + "'", line, 1);
    }
  }
  if (dim == 0) throw ParseError("missing 'dim' line", line + 1, 1);
  if (expr_line == 0) throw ParseError("missing 'expr' line", line + 1, 1);

  Expression value = parse_expression(expr_text, dim, expr_line, expr_col);
  std::vector<Expression> gradient;
  for (const auto& [g, l, c] : grads) gradient.push_back(parse_expression(g, dim, l, c));
  if (!gradient.empty() && static_cast<int>(gradient.size()) != dim)
    throw ParseError("expected " + std::to_string(dim) + " grad lines", std::get<1>(grads.back()), 1);
  ProperFunction f = function_from_expressions(name, dim, value, gradient);
  f.domain_box = {Vector::Constant(dim, box_lo), Vector::Constant(dim, box_hi)};
  return f;
}

ProperFunction load_function_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open function file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
  return parse_function_text(buf.str(), stem);
}

}  // namespace nsdiag
