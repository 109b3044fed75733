#include "cxdim/literal.hpp"

#include "cxdim/errors.hpp"

#include <cctype>
#include <sstream>

namespace cxdim {
namespace {

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view text) : text_(text) {}

  Quad parse() {
    Quad v = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(Errc::parse_error,
                "literal \"" + std::string(text_) + "\" at offset " + std::to_string(pos_) + ": " + why);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Quad expr() {
    Quad v = term();
    for (;;) {
      if (accept('+')) v += term();
      else if (accept('-')) v -= term();
      else return v;
    }
  }

  Quad term() {
    Quad v = unary();
    for (;;) {
      if (accept('*')) {
        v *= unary();
      } else if (accept('/')) {
        Quad d = unary();
        if (d == 0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  Quad unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Quad power() {
    Quad base = primary();
    if (accept('^')) {
      Quad exponent = unary();
      if (base <= 0) fail("power base must be positive");
      return boost::multiprecision::exp(exponent * boost::multiprecision::log(base));
    }
    return base;
  }

  Quad primary() {
    skip_ws();
    if (accept('(')) {
      Quad v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view name = text_.substr(start, pos_ - start);
      if (name == "pi") return quad_pi();
      if (!accept('(')) fail("expected '(' after function name");
      Quad arg = expr();
      if (!accept(')')) fail("expected ')'");
      if (name == "sqrt") {
        if (arg < 0) fail("sqrt of negative number");
        return boost::multiprecision::sqrt(arg);
      }
      if (name == "log") {
        if (arg <= 0) fail("log of non-positive number");
        return boost::multiprecision::log(arg);
      }
      if (name == "exp") return boost::multiprecision::exp(arg);
      fail("unknown function '" + std::string(name) + "'");
    }
    return number();
  }

  Quad number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '.')) fail("expected a number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      std::size_t digits = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == digits) pos_ = save;
    }
    // float128's string constructor rounds the decimal exactly.
    return Quad(std::string(text_.substr(start, pos_ - start)));
  }
};

}  // namespace

Quad parse_literal(std::string_view text) { return LiteralParser(text).parse(); }

std::string quad_to_string(const Quad& value) {
  std::ostringstream os;
  os.precision(36);
  os << value;
  return os.str();
}

}  // namespace cxdim
