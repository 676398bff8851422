#include "pwafix/rational.hpp"

#include <cctype>
#include <sstream>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace pwafix {

namespace {

using Int = boost::multiprecision::mpz_int;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Base-10 digits to an integer; mpz would read a leading 0 as octal.
Int decimal_int(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  return first == std::string_view::npos ? Int(0) : Int(std::string(digits.substr(first)));
}

}  // namespace

DimensionMismatch::DimensionMismatch(Index expected, Index got)
    : Error("dimension mismatch: expected " + std::to_string(expected) +
            ", got " + std::to_string(got)) {}

Rat parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rat value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    const Int d = decimal_int(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    value = Rat(decimal_int(num), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    Int scale = boost::multiprecision::pow(Int(10), static_cast<unsigned>(frac.size()));
    const Int digits = decimal_int(std::string(whole) + std::string(frac));
    value = Rat(digits, scale);
  } else {
    if (!all_digits(s))
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    value = Rat(decimal_int(s));
  }
  return negative ? Rat(-value) : value;
}

std::string to_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string to_decimal(const Rat& r, int significant_digits) {
  using Dec = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<60>>;
  Dec value(numerator(r).str());
  value /= Dec(denominator(r).str());
  return value.str(significant_digits, std::ios_base::fmtflags(0));
}

std::string to_string(const Vec& v) {
  std::ostringstream out;
  out << '(';
  for (Index i = 0; i < v.size(); ++i) out << (i ? ", " : "") << to_string(v[i]);
  out << ')';
  return out.str();
}

bool leq(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  return (a.array() <= b.array()).all();
}

bool less(const Vec& a, const Vec& b) { return leq(a, b) && a != b; }

bool strictly_less(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  return (a.array() < b.array()).all();
}

Rat sup_norm(const Vec& v) {
  Rat m = 0;
  for (const Rat& x : v) m = std::max(m, Rat(abs(x)));
  return m;
}

}  // namespace pwafix
