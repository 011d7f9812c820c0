#include <algorithm>
#include <cctype>

#include "spencer/jetcalc.hpp"

namespace spencer::jet {
namespace {

class Parser {
 public:
  Parser(const JetSpace& space, const std::string& text) : sp_(space), s_(text) {}

  JetPolynomial polynomial() {
    JetPolynomial out(sp_);
    skip();
    bool neg = false;
    if (peek() == '-' || peek() == '+') neg = get() == '-';
    out += term() * Rational(neg ? -1 : 1);
    for (skip(); pos_ < s_.size(); skip()) {
      char op = get();
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      out += term() * Rational(op == '-' ? -1 : 1);
    }
    return out;
  }

  VarId variable_only() {
    skip();
    VarId v = variable();
    skip();
    if (pos_ != s_.size()) fail("trailing input after variable");
    return v;
  }

 private:
  const JetSpace& sp_;
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, what + " at offset " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() {
    if (pos_ >= s_.size()) fail("unexpected end of input");
    return s_[pos_++];
  }
  void expect(char c) {
    skip();
    if (get() != c) fail(std::string("expected '") + c + "'");
  }

  std::string digits() {
    skip();
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected digits");
    return s_.substr(start, pos_ - start);
  }
  int small_int() {
    std::string d = digits();
    if (d.size() > 6) fail("index too large");
    return std::stoi(d);
  }

  JetPolynomial term() {
    JetPolynomial out = factor();
    for (skip(); peek() == '*'; skip()) {
      ++pos_;
      out = out * factor();
    }
    return out;
  }

  JetPolynomial factor() {
    skip();
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      std::string num = digits();
      skip();
      if (peek() == '/') {
        ++pos_;
        std::string den = digits();
        if (den.find_first_not_of('0') == std::string::npos) fail("zero denominator");
        num += "/" + den;
      }
      Rational q(num);
      q.canonicalize();
      return JetPolynomial::constant(sp_, q);
    }
    VarId v = variable();
    skip();
    std::uint32_t e = 1;
    if (peek() == '^') {
      ++pos_;
      e = static_cast<std::uint32_t>(small_int());
    }
    if (e == 0) return JetPolynomial::constant(sp_, 1);
    return JetPolynomial::monomial(sp_, {{v, e}});
  }

  VarId variable() {
    skip();
    char c = get();
    try {
      if (c == 'x') return sp_.x(small_int() - 1);
      if (c == 'u') return sp_.u(small_int() - 1);
      if (c == 'p') {
        expect('[');
        int j = small_int() - 1;
        expect(',');
        skip();
        MultiIndex sigma(sp_.n(), 0);
        if (peek() == '(') {
          ++pos_;
          for (int i = 0; i < sp_.n(); ++i) {
            if (i) expect(',');
            sigma[i] = small_int();
          }
          expect(')');
        } else if (small_int() != 0) {
          fail("expected a multi-index or 0");
        }
        expect(']');
        return sp_.p(j, sigma);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      fail(e.what());
    }
    --pos_;
    fail("expected a variable");
  }
};

}  // namespace

JetPolynomial parse_polynomial(const JetSpace& space, const std::string& text) {
  return Parser(space, text).polynomial();
}

VarId parse_variable(const JetSpace& space, const std::string& text) { return Parser(space, text).variable_only(); }

std::string to_string(const JetPolynomial& f) {
  if (f.is_zero()) return "0";
  std::string out;
  // Highest degree first, then the map order.
  std::vector<std::pair<const Monomial*, const Rational*>> terms;
  for (const auto& [m, c] : f.terms()) terms.emplace_back(&m, &c);
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    auto deg = [](const Monomial& m) {
      std::uint32_t d = 0;
      for (const auto& t : m) d += t.second;
      return d;
    };
    return deg(*a.first) > deg(*b.first);
  });
  for (const auto& [m, c] : terms) {
    Rational a = abs(*c);
    if (out.empty()) {
      if (sgn(*c) < 0) out += "-";
    } else {
      out += sgn(*c) < 0 ? " - " : " + ";
    }
    std::string body;
    for (const auto& [v, e] : *m) {
      if (!body.empty()) body += "*";
      body += f.space().name(v);
      if (e > 1) body += "^" + std::to_string(e);
    }
    if (body.empty()) out += a.get_str();
    else if (a == 1) out += body;
    else out += a.get_str() + "*" + body;
  }
  return out;
}

}  // namespace spencer::jet
