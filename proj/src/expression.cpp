#include "selfnorm/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "selfnorm/error.hpp"

namespace selfnorm {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, std::string_view variable) : text_(text), var_(variable) {}

  Expression run() {
    Expression e;
    e.source_ = std::string(text_);
    out_ = &e;
    skip_space();
    if (pos_ == text_.size()) fail("empty expression");
    expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    e.max_stack_ = max_depth_;
    return e;
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::ParseError,
                msg + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(text_) + "'");
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

  void emit(Op op, double value = 0.0) {
    out_->code_.push_back({op, value});
    if (op == Op::push_const || op == Op::push_var) {
      ++depth_;
      max_depth_ = std::max(max_depth_, depth_);
    } else if (op == Op::add || op == Op::sub || op == Op::mul || op == Op::div || op == Op::pow) {
      --depth_;
    }
  }

  void expr() {
    term();
    for (;;) {
      if (accept('+')) {
        term();
        emit(Op::add);
      } else if (accept('-')) {
        term();
        emit(Op::sub);
      } else {
        return;
      }
    }
  }

  void term() {
    unary();
    for (;;) {
      if (accept('*')) {
        unary();
        emit(Op::mul);
      } else if (accept('/')) {
        unary();
        emit(Op::div);
      } else {
        return;
      }
    }
  }

  void unary() {
    if (accept('-')) {
      unary();
      emit(Op::neg);
    } else if (accept('+')) {
      unary();
    } else {
      power();
    }
  }

  void power() {
    primary();
    if (accept('^')) {
      unary();
      emit(Op::pow);
    }
  }

  std::string_view identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  void primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      expr();
      if (!accept(')')) fail("expected ')'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      const std::string_view id = identifier();
      if (id == var_) {
        emit(Op::push_var);
      } else if (id == "pi") {
        emit(Op::push_const, std::numbers::pi);
      } else if (id == "e") {
        emit(Op::push_const, std::numbers::e);
      } else if (id == "exp" || id == "ln" || id == "abs" || id == "sqrt") {
        if (!accept('(')) fail("expected '(' after " + std::string(id));
        expr();
        if (!accept(')')) fail("expected ')'");
        emit(id == "exp" ? Op::exp : id == "ln" ? Op::ln : id == "abs" ? Op::abs : Op::sqrt);
      } else {
        pos_ = start;
        fail("unknown identifier '" + std::string(id) + "'");
      }
      return;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  void number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    // Exponent part only when digits follow; "2e" is left for the caller to reject.
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        digits();
      }
    }
    double value = 0.0;
    const auto r = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (r.ec != std::errc() || r.ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    emit(Op::push_const, value);
  }

  std::string_view text_;
  std::string_view var_;
  std::size_t pos_ = 0;
  Expression* out_ = nullptr;
  std::size_t depth_ = 0;
  std::size_t max_depth_ = 0;
};

Expression Expression::parse(std::string_view text, std::string_view variable) {
  return ExpressionParser(text, variable).run();
}

double Expression::operator()(double value) const {
  double stack[64] = {};
  std::vector<double> heap;
  double* st = stack;
  if (max_stack_ > 64) {
    heap.resize(max_stack_);
    st = heap.data();
  }
  std::size_t sp = 0;
  for (const auto& in : code_) {
    switch (in.op) {
      case Op::push_const: st[sp++] = in.value; break;
      case Op::push_var: st[sp++] = value; break;
      case Op::add: --sp; st[sp - 1] += st[sp]; break;
      case Op::sub: --sp; st[sp - 1] -= st[sp]; break;
      case Op::mul: --sp; st[sp - 1] *= st[sp]; break;
      case Op::div: --sp; st[sp - 1] /= st[sp]; break;
      case Op::pow: --sp; st[sp - 1] = std::pow(st[sp - 1], st[sp]); break;
      case Op::neg: st[sp - 1] = -st[sp - 1]; break;
      case Op::exp: st[sp - 1] = std::exp(st[sp - 1]); break;
      case Op::ln: st[sp - 1] = std::log(st[sp - 1]); break;
      case Op::abs: st[sp - 1] = std::fabs(st[sp - 1]); break;
      case Op::sqrt: st[sp - 1] = std::sqrt(st[sp - 1]); break;
    }
  }
  return st[0];
}

}  // namespace selfnorm
