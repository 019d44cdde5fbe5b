#include "featrange/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace featrange {

std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    auto num = parse_rational(text.substr(0, slash));
    auto den = parse_rational(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return Rational(*num / *den);
  }
  size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') {
    neg = text[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false, any_digit = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) return std::nullopt;
  long exp10 = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') return std::nullopt;
    ++i;
    bool eneg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      eneg = text[i] == '-';
      ++i;
    }
    if (i >= text.size()) return std::nullopt;
    long e = 0;
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
      e = e * 10 + (text[i] - '0');
      if (e > 100000) return std::nullopt;
    }
    exp10 = eneg ? -e : e;
  }
  mpz_class mant(digits, 10);
  long shift = exp10 - frac_digits;
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational r;
  if (shift >= 0) {
    r = Rational(mant * p10);
  } else {
    r = Rational(mant, p10);
    r.canonicalize();
  }
  if (neg) r = -r;
  return r;
}

std::string to_exact(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_literal(const Rational& r) {
  mpz_class den = r.get_den();
  unsigned long twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return to_exact(r);
  unsigned long digits = std::max(twos, fives);
  if (digits == 0) return r.get_num().get_str();
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  mpz_class n = r.get_num() * scale / r.get_den();
  bool neg = n < 0;
  if (neg) n = -n;
  std::string s = n.get_str();
  if (s.size() <= digits) s.insert(0, digits - s.size() + 1, '0');
  s.insert(s.size() - digits, ".");
  return neg ? "-" + s : s;
}

double to_double(const Rational& r) { return r.get_d(); }

std::string to_decimal(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", r.get_d());
  return buf;
}

Rational from_double(double d) {
  Rational r(d);
  return r;
}

}  // namespace featrange
