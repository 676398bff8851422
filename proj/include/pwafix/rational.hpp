// Exact rational scalar and the dense vector/matrix types built on it.
#ifndef PWAFIX_RATIONAL_HPP
#define PWAFIX_RATIONAL_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace pwafix {

/// Arbitrary-precision rational, always stored in canonical (reduced) form.
/// Expression templates are disabled so that Eigen sees a plain value type.
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                          boost::multiprecision::et_off>;

using Index = Eigen::Index;
using Vec = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(Index expected, Index got);
};

/// Parses "p", "p/q", or a decimal literal such as "-0.125" exactly.
/// Throws std::invalid_argument on malformed input.
Rat parse_rational(std::string_view text);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rat& r);

/// Decimal approximation with the given number of significant digits.
std::string to_decimal(const Rat& r, int significant_digits = 20);

std::string to_string(const Vec& v);

// Componentwise order on R^d.
bool leq(const Vec& a, const Vec& b);
/// a <= b with a != b.
bool less(const Vec& a, const Vec& b);
/// a_i < b_i for every i.
bool strictly_less(const Vec& a, const Vec& b);

Rat sup_norm(const Vec& v);

inline Vec constant_vec(Index d, const Rat& value) {
  return Vec::Constant(d, value);
}

}  // namespace pwafix

#endif  // PWAFIX_RATIONAL_HPP
