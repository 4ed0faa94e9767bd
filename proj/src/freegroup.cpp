#include "crep/freegroup.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace crep {

namespace {

// Exponents are expanded into letter repetitions, so keep them bounded.
constexpr long kMaxExponent = 1'000'000;

void push_reduced(std::vector<Letter>& stack, const Letter& l) {
  if (!stack.empty() && stack.back().gen == l.gen && stack.back().exponent == -l.exponent) {
    stack.pop_back();
  } else {
    stack.push_back(l);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Word

Word::Word(std::span<const Letter> letters) {
  letters_.reserve(letters.size());
  for (const Letter& l : letters) push_reduced(letters_, l);
}

Word Word::generator(Generator g, int exponent) {
  std::vector<Letter> letters;
  const Letter l{g, exponent < 0 ? -1 : 1};
  for (int k = 0; k < std::abs(exponent); ++k) letters.push_back(l);
  return Word(letters);
}

Word Word::inverse() const {
  Word out;
  out.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.letters_.push_back(it->inverse());
  return out;
}

Word Word::operator*(const Word& rhs) const {
  Word out = *this;
  for (const Letter& l : rhs.letters_) push_reduced(out.letters_, l);
  return out;
}

int Word::exponent_sum(Generator g) const {
  int s = 0;
  for (const Letter& l : letters_)
    if (l.gen == g) s += l.exponent;
  return s;
}

Word reduce(std::span<const Letter> letters) { return Word(letters); }

bool WordOrder::operator()(const Word& a, const Word& b) const {
  if (a.length() != b.length()) return a.length() < b.length();
  const auto la = a.letters();
  const auto lb = b.letters();
  for (std::size_t k = 0; k < la.size(); ++k) {
    if (la[k].code() != lb[k].code()) return la[k].code() < lb[k].code();
  }
  return false;
}

// ---------------------------------------------------------------------------
// GroupRingElement

GroupRingElement::GroupRingElement(const Word& w, Complex c) { add_term(w, c); }

Complex GroupRingElement::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Complex{} : it->second;
}

double GroupRingElement::l1_norm() const {
  double s = 0.0;
  for (const auto& [w, c] : terms_) s += std::abs(c);
  return s;
}

void GroupRingElement::add_term(const Word& w, Complex c) {
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

GroupRingElement GroupRingElement::adjoint() const {
  GroupRingElement out;
  for (const auto& [w, c] : terms_) out.add_term(w.inverse(), std::conj(c));
  return out;
}

GroupRingElement& GroupRingElement::operator+=(const GroupRingElement& rhs) {
  for (const auto& [w, c] : rhs.terms_) add_term(w, c);
  return *this;
}

GroupRingElement& GroupRingElement::operator-=(const GroupRingElement& rhs) {
  for (const auto& [w, c] : rhs.terms_) add_term(w, -c);
  return *this;
}

GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
  GroupRingElement out;
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) out.add_term(wa * wb, ca * cb);
  return out;
}

GroupRingElement operator*(Complex c, const GroupRingElement& a) {
  GroupRingElement out;
  for (const auto& [w, cw] : a.terms_) out.add_term(w, c * cw);
  return out;
}

GroupRingElement ring_add(const GroupRingElement& a, const GroupRingElement& b) { return a + b; }
GroupRingElement ring_mul(const GroupRingElement& a, const GroupRingElement& b) { return a * b; }
GroupRingElement adjoint(const GroupRingElement& a) { return a.adjoint(); }

GroupRingElement averaging_element() {
  GroupRingElement x;
  x.add_term(Word::generator(Generator::U, 1), 1.0);
  x.add_term(Word::generator(Generator::U, -1), 1.0);
  x.add_term(Word::generator(Generator::V, 1), 1.0);
  x.add_term(Word::generator(Generator::V, -1), 1.0);
  return x;
}

// ---------------------------------------------------------------------------
// Parser

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  GroupRingElement parse() {
    GroupRingElement result;
    skip_ws();
    if (at_end()) fail("empty expression");
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    result += Complex(sign) * term();
    skip_ws();
    while (!at_end()) {
      const char op = peek();
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      ++pos_;
      const GroupRingElement t = term();
      if (op == '+') result += t;
      else result -= t;
      skip_ws();
    }
    return result;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  static bool is_gen(char c) { return c == 'u' || c == 'v'; }
  static bool starts_number(char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.'; }

  GroupRingElement term() {
    skip_ws();
    const char c = peek();
    if (is_gen(c)) return GroupRingElement(word());
    if (!(starts_number(c) || c == 'i' || c == '(')) fail("expected coefficient or word");
    const Complex coeff = coefficient();
    skip_ws();
    if (peek() == '*') {
      ++pos_;
      skip_ws();
      return GroupRingElement(word_or_one(), coeff);
    }
    if (is_gen(peek())) return GroupRingElement(word(), coeff);
    return GroupRingElement::scalar(coeff);
  }

  Word word_or_one() {
    if (peek() == '1') {
      const std::size_t save = pos_;
      ++pos_;
      if (!starts_number(peek())) return Word::identity();
      pos_ = save;
      fail("expected word");
    }
    if (!is_gen(peek())) fail("expected word");
    return word();
  }

  Word word() {
    std::vector<Letter> letters;
    factor(letters);
    for (;;) {
      skip_ws();
      if (is_gen(peek())) {
        factor(letters);
        continue;
      }
      if (peek() == '*') {
        const std::size_t save = pos_;
        ++pos_;
        skip_ws();
        if (is_gen(peek())) {
          factor(letters);
          continue;
        }
        pos_ = save;
      }
      break;
    }
    return reduce(letters);
  }

  void factor(std::vector<Letter>& letters) {
    const Generator g = peek() == 'u' ? Generator::U : Generator::V;
    ++pos_;
    skip_ws();
    long exponent = 1;
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      const bool paren = peek() == '(';
      if (paren) {
        ++pos_;
        skip_ws();
      }
      exponent = signed_integer();
      if (paren) {
        skip_ws();
        if (peek() != ')') fail("expected ')'");
        ++pos_;
      }
    }
    const Letter l{g, exponent < 0 ? -1 : 1};
    for (long k = 0; k < std::abs(exponent); ++k) letters.push_back(l);
  }

  long signed_integer() {
    const std::size_t start = pos_;
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = peek() == '-';
      ++pos_;
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer exponent");
    long value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (peek() - '0');
      if (value > kMaxExponent) throw ParseError("exponent overflow", start);
      ++pos_;
    }
    return negative ? -value : value;
  }

  double number() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '.') {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc{} || res.ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return value;
  }

  // number ['i'] | 'i'
  Complex simple_coefficient() {
    if (peek() == 'i') {
      ++pos_;
      return {0.0, 1.0};
    }
    if (!starts_number(peek())) fail("expected number");
    const double value = number();
    if (peek() == 'i') {
      ++pos_;
      return {0.0, value};
    }
    return {value, 0.0};
  }

  Complex coefficient() {
    if (peek() != '(') return simple_coefficient();
    ++pos_;
    skip_ws();
    Complex value{};
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
      skip_ws();
    }
    value += sign * simple_coefficient();
    skip_ws();
    while (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
      skip_ws();
      value += sign * simple_coefficient();
      skip_ws();
    }
    if (peek() != ')') fail("expected ')'");
    ++pos_;
    return value;
  }
};

std::string format_real(double x) {
  char buf[64];
  for (int precision : {15, 16, 17}) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    double back = 0.0;
    std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
    if (back == x) break;
  }
  return buf;
}

// Printed magnitude of a coefficient whose sign has already been pulled out.
std::string format_coefficient(Complex c) {
  if (c.imag() == 0.0) return format_real(c.real());
  if (c.real() == 0.0) return c.imag() == 1.0 ? "i" : format_real(c.imag()) + "i";
  std::string s = "(" + format_real(c.real());
  s += c.imag() < 0 ? "-" : "+";
  const double im = std::abs(c.imag());
  s += im == 1.0 ? "i" : format_real(im) + "i";
  return s + ")";
}

}  // namespace

GroupRingElement parse_element(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Word& w) {
  if (w.is_identity()) return "1";
  std::string s;
  const auto letters = w.letters();
  std::size_t k = 0;
  while (k < letters.size()) {
    std::size_t run = 1;
    while (k + run < letters.size() && letters[k + run] == letters[k]) ++run;
    if (!s.empty()) s += '*';
    s += letters[k].gen == Generator::U ? 'u' : 'v';
    const long e = static_cast<long>(run) * letters[k].exponent;
    if (e != 1) s += "^" + std::to_string(e);
    k += run;
  }
  return s;
}

std::string to_string(const GroupRingElement& a) {
  if (a.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [w, c0] : a.terms()) {
    Complex c = c0;
    // A single negative component is printed as a subtraction.
    const bool negative = (c.imag() == 0.0 && std::signbit(c.real())) ||
                          (c.real() == 0.0 && std::signbit(c.imag()));
    if (negative) c = -c;
    if (first) s += negative ? "-" : "";
    else s += negative ? " - " : " + ";
    first = false;
    if (w.is_identity()) {
      s += format_coefficient(c);
    } else if (c == Complex(1.0)) {
      s += to_string(w);
    } else {
      s += format_coefficient(c) + "*" + to_string(w);
    }
  }
  return s;
}

}  // namespace crep
