#pragma once

// Expression language for complex-valued functions of the chart coordinates.
//
//   expr    := term   { ('+' | '-') term }
//   term    := unary  { ('*' | '/') unary }
//   unary   := ('-' | '+') unary | power
//   power   := primary [ '^' unary ]          (right associative)
//   primary := number | 'im' | 'pi' | coordinate
//            | function '(' expr ')' | '(' expr ')'
//   function: sin cos tan exp log sqrt sinh cosh tanh
//
// `im` is the imaginary unit. Functions use their principal complex branches;
// log is rejected on the nonpositive real axis. Integer exponents are applied
// by repeated multiplication, so t^2 is exact.

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qframe/chart.hpp"
#include "qframe/errors.hpp"

namespace qframe {

enum class ExprOp : std::uint8_t {
  kConstant,
  kCoordinate,
  kNegate,
  kAdd,
  kSubtract,
  kMultiply,
  kDivide,
  kPower,
  kCall,
};

enum class ExprFunction : std::uint8_t {
  kSin,
  kCos,
  kTan,
  kExp,
  kLog,
  kSqrt,
  kSinh,
  kCosh,
  kTanh,
};

struct ExprNode {
  ExprOp op = ExprOp::kConstant;
  ExprFunction function = ExprFunction::kSin;
  std::int32_t lhs = -1;
  std::int32_t rhs = -1;
  std::complex<double> value{};
  int coordinate = -1;
  std::size_t position = 0;
};

// Parsed, immutable expression tree. Nodes live in a flat arena; children
// always precede their parent.
class FieldExpr {
 public:
  // The constant expression `value`.
  static FieldExpr constant(std::complex<double> value) {
    FieldExpr e;
    e.nodes_.push_back({.op = ExprOp::kConstant, .value = value});
    e.root_ = 0;
    e.text_ = "<constant>";
    return e;
  }

  std::complex<double> evaluate(const Point& p) const {
    const auto v = eval(root_, p);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("expression '" + text_ + "' is not finite here");
    }
    return v;
  }

  const std::string& text() const noexcept { return text_; }
  std::span<const ExprNode> nodes() const noexcept { return nodes_; }
  std::int32_t root() const noexcept { return root_; }

  // True when the tree is a single literal.
  bool is_literal() const noexcept {
    return nodes_.size() == 1 && nodes_[0].op == ExprOp::kConstant;
  }

 private:
  friend class ExprParser;

  std::complex<double> eval(std::int32_t i, const Point& p) const {
    const ExprNode& n = nodes_[static_cast<std::size_t>(i)];
    switch (n.op) {
      case ExprOp::kConstant:
        return n.value;
      case ExprOp::kCoordinate:
        return p[static_cast<std::size_t>(n.coordinate)];
      case ExprOp::kNegate:
        return -eval(n.lhs, p);
      case ExprOp::kAdd:
        return eval(n.lhs, p) + eval(n.rhs, p);
      case ExprOp::kSubtract:
        return eval(n.lhs, p) - eval(n.rhs, p);
      case ExprOp::kMultiply:
        return eval(n.lhs, p) * eval(n.rhs, p);
      case ExprOp::kDivide: {
        const auto den = eval(n.rhs, p);
        if (den == std::complex<double>{}) {
          throw DomainError("division by zero in '" + text_ + "'");
        }
        return eval(n.lhs, p) / den;
      }
      case ExprOp::kPower:
        return power(n, p);
      case ExprOp::kCall:
        return call(n.function, eval(n.lhs, p));
    }
    return {};
  }

  std::complex<double> power(const ExprNode& n, const Point& p) const {
    const auto base = eval(n.lhs, p);
    const auto exponent = eval(n.rhs, p);
    if (exponent.imag() == 0.0 && std::trunc(exponent.real()) == exponent.real() &&
        std::abs(exponent.real()) <= 1 << 20) {
      auto k = static_cast<std::int64_t>(exponent.real());
      const bool reciprocal = k < 0;
      if (reciprocal) k = -k;
      std::complex<double> result{1.0};
      std::complex<double> b = base;
      while (k > 0) {
        if (k & 1) result *= b;
        b *= b;
        k >>= 1;
      }
      if (reciprocal) {
        if (result == std::complex<double>{}) {
          throw DomainError("division by zero in '" + text_ + "'");
        }
        return 1.0 / result;
      }
      return result;
    }
    if (base == std::complex<double>{}) {
      if (exponent.real() > 0.0) return {};
      throw DomainError("zero raised to a non-positive power in '" + text_ +
                        "'");
    }
    return std::pow(on_principal_side(base), exponent);
  }

  // -x parses as a negation, leaving a -0 imaginary part that would put
  // branch-cut functions on the wrong sheet.
  static std::complex<double> on_principal_side(std::complex<double> z) {
    if (z.imag() == 0.0) z.imag(0.0);
    return z;
  }

  std::complex<double> call(ExprFunction f, std::complex<double> z) const {
    switch (f) {
      case ExprFunction::kSin:
        return std::sin(z);
      case ExprFunction::kCos:
        return std::cos(z);
      case ExprFunction::kTan:
        return std::tan(z);
      case ExprFunction::kExp:
        return std::exp(z);
      case ExprFunction::kLog:
        if (z.imag() == 0.0 && z.real() <= 0.0) {
          throw DomainError("log of nonpositive real in '" + text_ + "'");
        }
        return std::log(on_principal_side(z));
      case ExprFunction::kSqrt:
        return std::sqrt(on_principal_side(z));
      case ExprFunction::kSinh:
        return std::sinh(z);
      case ExprFunction::kCosh:
        return std::cosh(z);
      case ExprFunction::kTanh:
        return std::tanh(z);
    }
    return {};
  }

  std::vector<ExprNode> nodes_;
  std::int32_t root_ = -1;
  std::string text_;
};

class ExprParser {
 public:
  ExprParser(std::string_view text, const Chart& chart)
      : text_(text), chart_(chart) {}

  FieldExpr parse() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    const auto root = parse_sum();
    skip_space();
    if (pos_ < text_.size()) {
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    out_.root_ = root;
    out_.text_ = std::string(text_);
    return std::move(out_);
  }

 private:
  std::int32_t push(ExprNode n) {
    out_.nodes_.push_back(n);
    return static_cast<std::int32_t>(out_.nodes_.size() - 1);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail_here(const std::string& what) {
    if (pos_ >= text_.size()) {
      throw ParseError("unexpected end of expression", pos_);
    }
    throw ParseError(what + " '" + text_[pos_] + "'", pos_);
  }

  std::int32_t parse_sum() {
    auto lhs = parse_product();
    for (;;) {
      skip_space();
      const auto at = pos_;
      ExprOp op;
      if (accept('+')) {
        op = ExprOp::kAdd;
      } else if (accept('-')) {
        op = ExprOp::kSubtract;
      } else {
        return lhs;
      }
      const auto rhs = parse_product();
      lhs = push({.op = op, .lhs = lhs, .rhs = rhs, .position = at});
    }
  }

  std::int32_t parse_product() {
    auto lhs = parse_unary();
    for (;;) {
      skip_space();
      const auto at = pos_;
      ExprOp op;
      if (accept('*')) {
        op = ExprOp::kMultiply;
      } else if (accept('/')) {
        op = ExprOp::kDivide;
      } else {
        return lhs;
      }
      const auto rhs = parse_unary();
      lhs = push({.op = op, .lhs = lhs, .rhs = rhs, .position = at});
    }
  }

  std::int32_t parse_unary() {
    skip_space();
    const auto at = pos_;
    if (accept('-')) {
      const auto operand = parse_unary();
      auto& child = out_.nodes_[static_cast<std::size_t>(operand)];
      if (child.op == ExprOp::kConstant) {
        child.value = -child.value;
        return operand;
      }
      return push({.op = ExprOp::kNegate, .lhs = operand, .position = at});
    }
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  std::int32_t parse_power() {
    const auto base = parse_primary();
    skip_space();
    const auto at = pos_;
    if (accept('^')) {
      const auto exponent = parse_unary();
      return push(
          {.op = ExprOp::kPower, .lhs = base, .rhs = exponent, .position = at});
    }
    return base;
  }

  static bool ident_start(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || u >= 0x80;
  }
  static bool ident_char(char c) {
    return ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
  }

  std::int32_t parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail_here("unexpected");
    const auto at = pos_;
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (c == '(') {
      ++pos_;
      const auto inner = parse_sum();
      if (!accept(')')) fail_here("expected ')' but found");
      return inner;
    }
    if (ident_start(c)) {
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      const std::string name(text_.substr(at, pos_ - at));
      if (name == "im") {
        return push({.op = ExprOp::kConstant, .value = {0.0, 1.0}, .position = at});
      }
      if (name == "pi") {
        return push(
            {.op = ExprOp::kConstant, .value = {std::numbers::pi, 0.0}, .position = at});
      }
      if (const auto fn = lookup_function(name)) {
        if (!accept('(')) fail_here("expected '(' after function name, found");
        const auto arg = parse_sum();
        if (!accept(')')) fail_here("expected ')' but found");
        return push({.op = ExprOp::kCall,
                     .function = *fn,
                     .lhs = arg,
                     .position = at});
      }
      const int coord = chart_.index_of(name);
      if (coord < 0) throw UnknownIdentifierError(name, at);
      return push({.op = ExprOp::kCoordinate, .coordinate = coord, .position = at});
    }
    fail_here("unexpected");
  }

  std::int32_t parse_number() {
    const auto at = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) throw ParseError("malformed number", at);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      auto save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        ++pos_;
      }
      if (digits() == 0) pos_ = save;
    }
    double value = 0.0;
    const auto* first = text_.data() + at;
    const auto* last = text_.data() + pos_;
    const auto [end, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || end != last || !std::isfinite(value)) {
      throw ParseError("malformed number", at);
    }
    return push({.op = ExprOp::kConstant, .value = {value, 0.0}, .position = at});
  }

  static std::optional<ExprFunction> lookup_function(std::string_view name) {
    struct Entry {
      std::string_view name;
      ExprFunction fn;
    };
    static constexpr Entry kTable[] = {
        {"sin", ExprFunction::kSin},   {"cos", ExprFunction::kCos},
        {"tan", ExprFunction::kTan},   {"exp", ExprFunction::kExp},
        {"log", ExprFunction::kLog},   {"sqrt", ExprFunction::kSqrt},
        {"sinh", ExprFunction::kSinh}, {"cosh", ExprFunction::kCosh},
        {"tanh", ExprFunction::kTanh},
    };
    for (const auto& e : kTable) {
      if (e.name == name) return e.fn;
    }
    return std::nullopt;
  }

  std::string_view text_;
  const Chart& chart_;
  std::size_t pos_ = 0;
  FieldExpr out_;
};

inline FieldExpr parse_expr(std::string_view text, const Chart& chart) {
  return ExprParser(text, chart).parse();
}

}  // namespace qframe
