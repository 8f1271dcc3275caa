#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace selfnorm {

/// A compiled arithmetic expression in one variable.
///
/// Grammar (whitespace ignored):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?          right associative
///   primary := number | variable | 'pi' | 'e'
///            | ('exp' | 'ln' | 'abs' | 'sqrt') '(' expr ')' | '(' expr ')'
/// Numbers use the C locale: 12, 0.5, .5, 1e-3, 2.5E+2.
class Expression {
 public:
  /// Throws ParseError with the offending column on malformed input.
  static Expression parse(std::string_view text, std::string_view variable = "x");

  double operator()(double value) const;

  const std::string& source() const noexcept { return source_; }

 private:
  enum class Op { push_const, push_var, add, sub, mul, div, pow, neg, exp, ln, abs, sqrt };
  struct Instr {
    Op op;
    double value = 0.0;
  };

  friend class ExpressionParser;

  std::string source_;
  std::vector<Instr> code_;
  std::size_t max_stack_ = 0;
};

}  // namespace selfnorm
