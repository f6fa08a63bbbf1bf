#include "osp/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "osp/errors.hpp"

namespace osp {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ParseError("empty numeric string");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (num.empty() || den.empty()) throw ParseError("bad fraction: " + text);
    for (size_t i = 0; i < num.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(num[i])) &&
          !(i == 0 && (num[i] == '-' || num[i] == '+')))
        throw ParseError("bad fraction: " + text);
    for (char c : den)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError("bad fraction: " + text);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw ParseError("zero denominator: " + text);
    Rational q(n, d);
    q.canonicalize();
    return q;
  }

  size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') {
    neg = text[i] == '-';
    ++i;
  }
  std::string digits;
  size_t frac_digits = 0;
  bool seen_dot = false, seen_digit = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_dot) throw ParseError("bad decimal: " + text);
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    } else {
      // 'e'/'E' lands here: scientific notation is rejected by design.
      throw ParseError("bad decimal: " + text);
    }
  }
  if (!seen_digit) throw ParseError("bad decimal: " + text);
  mpz_class mantissa(digits.empty() ? std::string("0") : digits, 10);
  if (neg) mantissa = -mantissa;
  mpz_class den = 1;
  for (size_t k = 0; k < frac_digits; ++k) den *= 10;
  Rational q(mantissa, den);
  q.canonicalize();
  return q;
}

std::string fraction_str(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string decimal6_str(const Rational& q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", q.get_d());
  return buf;
}

std::string pretty_str(const Rational& q) {
  return fraction_str(q) + " (~" + decimal6_str(q) + ")";
}

Rational round_sig12(long double value) {
  if (value == 0.0L) return Rational(0);
  char buf[64];
  // %.11Le carries 12 significant digits through the exponent form.
  std::snprintf(buf, sizeof buf, "%.11Le", value);
  // Rebuild "mEe" as mantissa * 10^e exactly.
  std::string s(buf);
  auto epos = s.find_first_of("eE");
  std::string mant = s.substr(0, epos);
  int exp10 = std::atoi(s.c_str() + epos + 1);
  auto dot = mant.find('.');
  if (dot != std::string::npos) {
    exp10 -= static_cast<int>(mant.size() - dot - 1);
    mant.erase(dot, 1);
  }
  mpz_class m(mant, 10);
  Rational q;
  if (exp10 >= 0) {
    mpz_class p = 1;
    for (int k = 0; k < exp10; ++k) p *= 10;
    q = Rational(m * p);
  } else {
    mpz_class p = 1;
    for (int k = 0; k < -exp10; ++k) p *= 10;
    q = Rational(m, p);
  }
  q.canonicalize();
  return q;
}

std::string ratio_str(const Ratio& r) {
  if (r.infinite) return "inf";
  return pretty_str(r.value);
}

}  // namespace osp
