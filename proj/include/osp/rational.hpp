#ifndef OSP_RATIONAL_HPP
#define OSP_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>

namespace osp {

/// Exact rational scalar used throughout; all comparisons and arithmetic
/// on instance data are exact.
using Rational = mpq_class;

/// Parses a plain decimal string ("10", "-3.25", "0.707106781187") into an
/// exact rational. Scientific notation and anything else is rejected with
/// ParseError. Fraction form "p/q" is accepted for CLI ergonomics.
Rational parse_rational(const std::string& text);

/// Canonical fraction form, "p/q" or "p" when the denominator is 1.
std::string fraction_str(const Rational& q);

/// Fixed 6-decimal approximation for human-readable output.
std::string decimal6_str(const Rational& q);

/// "p/q (~0.123456)" convenience form used by reports.
std::string pretty_str(const Rational& q);

/// Rounds a floating constant to 12 significant decimal digits and returns
/// the exact rational of the rounded decimal. Used to materialize the
/// irrational instance constants; callers re-verify any strict inequality
/// the construction relies on.
Rational round_sig12(long double value);

/// Extended ratio that can be infinite (used for approximation ratios).
struct Ratio {
  bool infinite = false;
  Rational value = 0;  // meaningful iff !infinite

  static Ratio inf() { return Ratio{true, 0}; }
  static Ratio of(Rational v) { return Ratio{false, std::move(v)}; }

  bool operator==(const Ratio& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
  bool operator<(const Ratio& o) const {
    if (infinite) return false;
    if (o.infinite) return true;
    return value < o.value;
  }
  bool operator>=(const Ratio& o) const { return !(*this < o); }
};

std::string ratio_str(const Ratio& r);

}  // namespace osp

#endif
