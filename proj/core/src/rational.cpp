#include "antipode/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "antipode/error.hpp"

namespace antipode {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t k = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (k == s.size()) return false;
  for (; k < s.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  std::string text(s);
  if (!text.empty() && text[0] == '+') text.erase(0, 1);
  return mpz_class(text, 10);
}

mpz_class pow10(unsigned long exponent) {
  mpz_class result;
  mpz_ui_pow_ui(result.get_mpz_t(), 10, exponent);
  return result;
}

Rational parse_decimal(std::string_view s) {
  std::string_view mantissa = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = s.substr(0, e);
    std::string_view exp_text = s.substr(e + 1);
    if (!is_integer_text(exp_text)) {
      fail(ErrorKind::Parse, "malformed exponent in '" + std::string(s) + "'");
    }
    exponent = std::strtol(std::string(exp_text).c_str(), nullptr, 10);
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long fraction_digits = 0;
  bool seen_point = false;
  for (char ch : mantissa) {
    if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      if (seen_point) ++fraction_digits;
    } else {
      fail(ErrorKind::Parse, "malformed number '" + std::string(s) + "'");
    }
  }
  if (digits.empty()) fail(ErrorKind::Parse, "malformed number '" + std::string(s) + "'");
  Rational value(mpz_class(digits, 10));
  long shift = exponent - fraction_digits;
  if (shift >= 0) {
    value *= Rational(pow10(static_cast<unsigned long>(shift)));
  } else {
    value /= Rational(pow10(static_cast<unsigned long>(-shift)));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) fail(ErrorKind::Parse, "empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!is_integer_text(num) || !is_integer_text(den)) {
      fail(ErrorKind::Parse, "malformed fraction '" + std::string(text) + "'");
    }
    mpz_class d = parse_integer(den);
    if (d == 0) fail(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
    Rational r(parse_integer(num), d);
    r.canonicalize();
    return r;
  }
  return parse_decimal(text);
}

Rational exact_from_double(double value) {
  if (!std::isfinite(value)) fail(ErrorKind::InvalidArgument, "non-finite coordinate");
  return Rational(value);
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_str();
}

RationalVec exact_from_doubles(const std::vector<double>& values) {
  RationalVec out;
  out.reserve(values.size());
  for (double v : values) out.push_back(exact_from_double(v));
  return out;
}

std::vector<double> to_doubles(const RationalVec& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_double(v));
  return out;
}

}  // namespace antipode
