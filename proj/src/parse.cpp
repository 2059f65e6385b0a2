#include <cctype>

#include "zmc/error.hpp"
#include "zmc/poly.hpp"

namespace zmc {

namespace {

class Parser {
 public:
  Parser(std::string_view text, int nvars) : text_(text), nvars_(nvars) {}

  Poly run() {
    Poly p = parse_poly();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool starts_factor() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == 'x' || c == '(' || text_.substr(pos_, 4) == "sqrt";
  }

  mpz_class parse_integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  mpz_class parse_posint() {
    const std::size_t start = pos_;
    mpz_class v = parse_integer();
    if (sgn(v) <= 0) {
      pos_ = start;
      fail("expected a positive integer");
    }
    return v;
  }

  int small_int(const mpz_class& v, const char* what) const {
    if (!v.fits_sint_p()) throw ParseError(pos_, std::string(what) + " too large");
    return static_cast<int>(v.get_si());
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Poly parse_poly() {
    Poly acc(nvars_);
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = text_[pos_] == '-';
      ++pos_;
    }
    Poly first = parse_term();
    acc = negate ? -first : first;
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      Poly t = parse_term();
      if (c == '+')
        acc += t;
      else
        acc -= t;
    }
    return acc;
  }

  Poly parse_term() {
    Poly acc = parse_factor();
    for (;;) {
      if (peek() == '*') {
        ++pos_;
        acc *= parse_factor();
      } else if (starts_factor()) {
        acc *= parse_factor();
      } else {
        break;
      }
    }
    return acc;
  }

  Poly parse_factor() {
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num = parse_integer();
      mpz_class den = 1;
      if (peek() == '/') {
        ++pos_;
        skip_ws();
        den = parse_posint();
      }
      return Poly::constant(nvars_, QuadExt(mpq_class(num, den)));
    }
    if (text_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      expect('(');
      skip_ws();
      const std::size_t at = pos_;
      mpz_class n = parse_posint();
      if (!n.fits_ulong_p()) throw ParseError(at, "sqrt argument too large");
      expect(')');
      return Poly::constant(nvars_, QuadExt::sqrt_of(mpq_class(n)));
    }
    if (c == 'x') {
      const std::size_t at = pos_;
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("expected a variable index after 'x'");
      const int index = small_int(parse_posint(), "variable index");
      if (index > nvars_)
        throw ParseError(at, "variable x" + std::to_string(index) + " outside 1.." + std::to_string(nvars_));
      Poly v = Poly::variable(nvars_, index);
      return maybe_power(std::move(v));
    }
    if (c == '(') {
      ++pos_;
      Poly inner = parse_poly();
      expect(')');
      return maybe_power(std::move(inner));
    }
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Poly maybe_power(Poly base) {
    if (peek() != '^') return base;
    ++pos_;
    skip_ws();
    const int e = small_int(parse_posint(), "exponent");
    return pow(base, static_cast<unsigned>(e));
  }

  std::string_view text_;
  int nvars_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse(std::string_view text, int nvars) {
  if (nvars < 1) throw Error(Errc::invalid_argument, "nvars must be positive");
  return Parser(text, nvars).run();
}

}  // namespace zmc
