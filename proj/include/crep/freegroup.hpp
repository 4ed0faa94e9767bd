#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crep {

using Complex = std::complex<double>;

enum class Generator : std::uint8_t { U = 0, V = 1 };

/// One letter g^{±1} of a word in F₂.
struct Letter {
  Generator gen = Generator::U;
  int exponent = 1;  // +1 or -1

  Letter inverse() const { return {gen, -exponent}; }

  // Canonical order u < u⁻¹ < v < v⁻¹.
  int code() const { return 2 * static_cast<int>(gen) + (exponent < 0 ? 1 : 0); }

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// A freely reduced word in the generators u, v. The empty word is the identity.
class Word {
 public:
  Word() = default;

  /// Reduces `letters` to free normal form.
  explicit Word(std::span<const Letter> letters);

  static Word identity() { return {}; }
  static Word generator(Generator g, int exponent = 1);

  std::span<const Letter> letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }

  Word inverse() const;
  Word operator*(const Word& rhs) const;

  /// Exponent sum of the given generator (image in the abelianization ℤ²).
  int exponent_sum(Generator g) const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

/// Free reduction of an arbitrary letter sequence.
Word reduce(std::span<const Letter> letters);

/// Length-then-lexicographic order with u < u⁻¹ < v < v⁻¹.
struct WordOrder {
  bool operator()(const Word& a, const Word& b) const;
};

/// Finite ℂ-linear combination of reduced words: an element of ℂ[F₂].
///
/// Only nonzero coefficients are stored. Zero means exact zero; accumulated
/// rounding stays in the coefficients.
class GroupRingElement {
 public:
  using TermMap = std::map<Word, Complex, WordOrder>;

  GroupRingElement() = default;
  GroupRingElement(const Word& w, Complex c = 1.0);

  static GroupRingElement scalar(Complex c) { return {Word::identity(), c}; }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Coefficient of `w` (zero when absent).
  Complex coefficient(const Word& w) const;

  /// Σ|c_w|, an upper bound for ‖π(a)‖ in every unitary representation.
  double l1_norm() const;

  void add_term(const Word& w, Complex c);

  GroupRingElement adjoint() const;

  GroupRingElement& operator+=(const GroupRingElement& rhs);
  GroupRingElement& operator-=(const GroupRingElement& rhs);

  friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
  friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b);
  friend GroupRingElement operator*(Complex c, const GroupRingElement& a);

  friend bool operator==(const GroupRingElement&, const GroupRingElement&) = default;

 private:
  TermMap terms_;
};

GroupRingElement ring_add(const GroupRingElement& a, const GroupRingElement& b);
GroupRingElement ring_mul(const GroupRingElement& a, const GroupRingElement& b);
GroupRingElement adjoint(const GroupRingElement& a);

/// x = u + u⁻¹ + v + v⁻¹.
GroupRingElement averaging_element();

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses expressions like "2*u*v^-1 - i*u" or "(1+2i)*uv + 3".
GroupRingElement parse_element(std::string_view text);

/// Canonical text form; parse_element(to_string(a)) == a.
std::string to_string(const Word& w);
std::string to_string(const GroupRingElement& a);

}  // namespace crep
