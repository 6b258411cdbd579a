#include "curveq/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "curveq/errors.hpp"

namespace curveq {

ExprAst::ExprAst(ExprPtr root, std::string parameter) : root_(std::move(root)), parameter_(std::move(parameter)) {
  if (!root_) throw std::invalid_argument("ExprAst: null root");
}

namespace expr {

namespace {
ExprPtr make(ExprKind kind, double value, std::size_t offset, ExprPtr lhs, ExprPtr rhs) {
  auto node = std::make_shared<ExprNode>();
  node->kind = kind;
  node->value = value;
  node->offset = offset;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}
}  // namespace

ExprPtr constant(double v) { return make(ExprKind::constant, v, 0, nullptr, nullptr); }
ExprPtr variable() { return make(ExprKind::variable, 0.0, 0, nullptr, nullptr); }
ExprPtr unary(ExprKind kind, ExprPtr arg) { return make(kind, 0.0, 0, std::move(arg), nullptr); }
ExprPtr binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs) { return make(kind, 0.0, 0, std::move(lhs), std::move(rhs)); }
ExprPtr power(ExprPtr base, double exponent) { return make(ExprKind::power, exponent, 0, std::move(base), nullptr); }

}  // namespace expr

namespace {

bool is_unary_function(ExprKind k) {
  switch (k) {
    case ExprKind::negate:
    case ExprKind::sin:
    case ExprKind::cos:
    case ExprKind::tan:
    case ExprKind::exp:
    case ExprKind::log:
    case ExprKind::sqrt:
    case ExprKind::power:
      return true;
    default:
      return false;
  }
}

bool contains_variable(const ExprNode& n) {
  if (n.kind == ExprKind::variable) return true;
  if (n.lhs && contains_variable(*n.lhs)) return true;
  if (n.rhs && contains_variable(*n.rhs)) return true;
  return false;
}

class Parser {
 public:
  Parser(std::string_view text, std::string_view parameter) : text_(text), parameter_(parameter) {}

  ExprPtr parse() {
    skip_space();
    if (pos_ >= text_.size()) fail(pos_, "empty expression");
    ExprPtr root = parse_expr();
    skip_space();
    if (pos_ < text_.size()) fail(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return root;
  }

 private:
  static ExprPtr node(ExprKind kind, double value, std::size_t offset, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->value = value;
    n->offset = offset;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  [[noreturn]] void fail(std::size_t at, const std::string& what) const {
    throw ParseError(ParseError::Kind::syntax, at, "syntax error: " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size()) fail(pos_, std::string("expected '") + c + "' before end of input");
    if (text_[pos_] != c) fail(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (accept('+')) {
        lhs = node(ExprKind::add, 0.0, at, lhs, parse_term());
      } else if (accept('-')) {
        lhs = node(ExprKind::subtract, 0.0, at, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (accept('*')) {
        lhs = node(ExprKind::multiply, 0.0, at, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = node(ExprKind::divide, 0.0, at, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_unary() {
    skip_space();
    const std::size_t at = pos_;
    if (accept('-')) return node(ExprKind::negate, 0.0, at, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    skip_space();
    const std::size_t at = pos_;
    if (!accept('^')) return base;
    skip_space();
    const std::size_t exponent_at = pos_;
    ExprPtr exponent = parse_unary();
    if (contains_variable(*exponent)) fail(exponent_at, "exponent must be a numeric constant");
    const double folded = eval(ExprAst(exponent, std::string(parameter_)), 0.0);
    if (!std::isfinite(folded)) fail(exponent_at, "exponent does not fold to a finite constant");
    return node(ExprKind::power, folded, at, base);
  }

  ExprPtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail(pos_, "unexpected end of input");
    const std::size_t at = pos_;
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) ++end;
      const std::string_view name = text_.substr(pos_, end - pos_);
      pos_ = end;
      if (name == parameter_) return node(ExprKind::variable, 0.0, at);
      if (name == "pi") return node(ExprKind::constant, std::numbers::pi, at);
      ExprKind kind;
      if (name == "sin") {
        kind = ExprKind::sin;
      } else if (name == "cos") {
        kind = ExprKind::cos;
      } else if (name == "tan") {
        kind = ExprKind::tan;
      } else if (name == "exp") {
        kind = ExprKind::exp;
      } else if (name == "log") {
        kind = ExprKind::log;
      } else if (name == "sqrt") {
        kind = ExprKind::sqrt;
      } else {
        throw ParseError(ParseError::Kind::unknown_identifier, at, "unknown identifier '" + std::string(name) + "'");
      }
      expect('(');
      ExprPtr arg = parse_expr();
      expect(')');
      return node(kind, 0.0, at, arg);
    }
    fail(at, std::string("unexpected '") + c + "'");
  }

  ExprPtr parse_number() {
    const std::size_t at = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    };
    digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      digits();
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp_end = end + 1;
      if (exp_end < text_.size() && (text_[exp_end] == '+' || text_[exp_end] == '-')) ++exp_end;
      if (exp_end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp_end]))) {
        end = exp_end;
        digits();
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + at, text_.data() + end, value);
    if (ec != std::errc() || ptr != text_.data() + end) fail(at, "malformed number");
    pos_ = end;
    return node(ExprKind::constant, value, at);
  }

  std::string_view text_;
  std::string_view parameter_;
  std::size_t pos_ = 0;
};

const char* function_name(ExprKind k) {
  switch (k) {
    case ExprKind::sin: return "sin";
    case ExprKind::cos: return "cos";
    case ExprKind::tan: return "tan";
    case ExprKind::exp: return "exp";
    case ExprKind::log: return "log";
    case ExprKind::sqrt: return "sqrt";
    default: return "";
  }
}

void print_number(std::ostream& os, double v) {
  if (v < 0.0 || std::signbit(v)) {
    os << "(-" << std::setprecision(17) << -v << ")";
  } else {
    os << std::setprecision(17) << v;
  }
}

void print_node(std::ostream& os, const ExprNode& n, const std::string& parameter) {
  switch (n.kind) {
    case ExprKind::constant:
      print_number(os, n.value);
      return;
    case ExprKind::variable:
      os << parameter;
      return;
    case ExprKind::negate:
      os << "(-";
      print_node(os, *n.lhs, parameter);
      os << ")";
      return;
    case ExprKind::power:
      os << "(";
      print_node(os, *n.lhs, parameter);
      os << "^";
      print_number(os, n.value);
      os << ")";
      return;
    case ExprKind::add:
    case ExprKind::subtract:
    case ExprKind::multiply:
    case ExprKind::divide: {
      const char* op = n.kind == ExprKind::add ? " + " : n.kind == ExprKind::subtract ? " - " : n.kind == ExprKind::multiply ? "*" : "/";
      os << "(";
      print_node(os, *n.lhs, parameter);
      os << op;
      print_node(os, *n.rhs, parameter);
      os << ")";
      return;
    }
    default:
      os << function_name(n.kind) << "(";
      print_node(os, *n.lhs, parameter);
      os << ")";
      return;
  }
}

template <typename T>
T evaluate(const ExprNode& n, const T& x) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::pow;
  using std::sin;
  using std::sqrt;
  using std::tan;
  auto domain = [&](const char* what) -> EvaluationError { return EvaluationError(n.offset, what); };
  auto value_of = [](const T& v) -> double {
    if constexpr (std::is_same_v<T, double>) {
      return v;
    } else {
      return v.value();
    }
  };
  switch (n.kind) {
    case ExprKind::constant: return T(n.value);
    case ExprKind::variable: return x;
    case ExprKind::negate: return -evaluate(*n.lhs, x);
    case ExprKind::add: return evaluate(*n.lhs, x) + evaluate(*n.rhs, x);
    case ExprKind::subtract: return evaluate(*n.lhs, x) - evaluate(*n.rhs, x);
    case ExprKind::multiply: return evaluate(*n.lhs, x) * evaluate(*n.rhs, x);
    case ExprKind::divide: {
      const T den = evaluate(*n.rhs, x);
      if (value_of(den) == 0.0) throw domain("division by zero");
      return evaluate(*n.lhs, x) / den;
    }
    case ExprKind::sin: return sin(evaluate(*n.lhs, x));
    case ExprKind::cos: return cos(evaluate(*n.lhs, x));
    case ExprKind::tan: {
      const T arg = evaluate(*n.lhs, x);
      if (std::cos(value_of(arg)) == 0.0) throw domain("tan at a pole");
      return tan(arg);
    }
    case ExprKind::exp: return exp(evaluate(*n.lhs, x));
    case ExprKind::log: {
      const T arg = evaluate(*n.lhs, x);
      if (!(value_of(arg) > 0.0)) throw domain("log of non-positive value");
      return log(arg);
    }
    case ExprKind::sqrt: {
      const T arg = evaluate(*n.lhs, x);
      const double v = value_of(arg);
      if constexpr (std::is_same_v<T, double>) {
        if (v < 0.0) throw domain("sqrt of negative value");
      } else {
        if (!(v > 0.0)) throw domain("sqrt of non-positive value (derivatives undefined)");
      }
      return sqrt(arg);
    }
    case ExprKind::power: {
      const T base = evaluate(*n.lhs, x);
      const double b = value_of(base);
      const double p = n.value;
      const bool integral = std::floor(p) == p;
      if (!integral && b < 0.0) throw domain("non-integer power of negative value");
      if (b == 0.0 && p < 0.0) throw domain("negative power of zero");
      if constexpr (!std::is_same_v<T, double>) {
        if (!integral && b == 0.0) throw domain("non-integer power of zero (derivatives undefined)");
      }
      return pow(base, p);
    }
  }
  throw std::logic_error("unhandled expression node");
}

}  // namespace

bool structurally_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  if ((a.kind == ExprKind::constant || a.kind == ExprKind::power) && a.value != b.value) return false;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
  return !is_unary_function(a.kind) || a.lhs != nullptr;
}

ExprAst parse_expression(std::string_view text, std::string_view parameter) {
  Parser parser(text, parameter);
  return ExprAst(parser.parse(), std::string(parameter));
}

std::string print(const ExprAst& ast) {
  std::ostringstream os;
  print_node(os, ast.root(), ast.parameter());
  return os.str();
}

Jet4 eval_jet(const ExprAst& ast, double t) {
  try {
    return evaluate<Jet4>(ast.root(), Jet4::variable(t));
  } catch (const std::domain_error& e) {
    throw EvaluationError(ast.root().offset, e.what());
  }
}

double eval(const ExprAst& ast, double t) { return evaluate<double>(ast.root(), t); }

}  // namespace curveq
