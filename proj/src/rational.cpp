#include "mechkernel/rational.hpp"

#include <cctype>

#include "mechkernel/errors.hpp"

namespace mechkernel {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = text;
  // trim whitespace
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw InvalidInput("empty rational literal");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = (s.front() == '-');
    s.erase(s.begin());
  }
  if (s.empty()) throw InvalidInput("rational literal '" + text + "' has no digits");

  long exponent = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    std::string etext = s.substr(epos + 1);
    s.erase(epos);
    bool eneg = false;
    if (!etext.empty() && (etext.front() == '+' || etext.front() == '-')) {
      eneg = (etext.front() == '-');
      etext.erase(etext.begin());
    }
    if (!all_digits(etext) || etext.size() > 6 || s.empty()) {
      throw InvalidInput("malformed exponent in '" + text + "'");
    }
    exponent = std::stol(etext);
    if (eneg) exponent = -exponent;
  }

  auto slash = s.find('/');
  auto dot = s.find('.');
  Rational result;
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw InvalidInput("malformed fraction '" + text + "'");
    }
    mpz_class d(den);
    if (d == 0) throw InvalidInput("zero denominator in '" + text + "'");
    result = Rational(mpz_class(num), d);
  } else if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) {
      throw InvalidInput("malformed decimal '" + text + "'");
    }
    if (!whole.empty() && !all_digits(whole)) {
      throw InvalidInput("malformed decimal '" + text + "'");
    }
    if (!frac.empty() && !all_digits(frac)) {
      throw InvalidInput("malformed decimal '" + text + "'");
    }
    mpz_class numerator(whole.empty() ? std::string("0") : whole);
    mpz_class scale = 1;
    for (char c : frac) {
      numerator = numerator * 10 + (c - '0');
      scale *= 10;
    }
    result = Rational(numerator, scale);
  } else {
    if (!all_digits(s)) throw InvalidInput("malformed integer '" + text + "'");
    result = Rational(mpz_class(s));
  }
  if (exponent != 0) {
    if (slash != std::string::npos) {
      throw InvalidInput("exponent not allowed on a fraction in '" + text + "'");
    }
    mpz_class scale = 1;
    for (long i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) scale *= 10;
    if (exponent > 0) {
      result *= scale;
    } else {
      result /= scale;
    }
  }
  result.canonicalize();
  if (negative) result = -result;
  return result;
}

std::string to_string(const Rational& value) { return value.get_str(); }

std::string to_decimal_string(const Rational& value, int max_digits) {
  mpz_class num = value.get_num();
  mpz_class den = value.get_den();
  std::string sign;
  if (num < 0) {
    sign = "-";
    num = -num;
  }
  mpz_class whole = num / den;
  mpz_class rem = num % den;
  std::string out = sign + whole.get_str();
  if (rem == 0) return out;
  out += '.';
  for (int i = 0; i < max_digits && rem != 0; ++i) {
    rem *= 10;
    mpz_class digit = rem / den;
    rem %= den;
    out += static_cast<char>('0' + digit.get_si());
  }
  // drop trailing zeros from the fractional part
  while (out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return out;
}

}  // namespace mechkernel
