// Text format for min-max-affine equation systems (.eqs):
//
//   # comment
//   var x, y;
//   x = max(0, x - 1);
//   y = min(max(1/2*x + 1, 0.25), 3);
//
// Every declared variable needs exactly one equation.
#ifndef PWAFIX_EQUATIONS_HPP
#define PWAFIX_EQUATIONS_HPP

#include <string>
#include <string_view>

#include "pwafix/expr.hpp"

namespace pwafix {

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses and validates; errors carry the location of the offending token.
ExprSystem parse_equation_exprs(std::string_view text);

/// parse_equation_exprs followed by normalization. Coefficients violating
/// monotonicity or nonexpansiveness are reported as ParseError.
NamedSystem parse_equations(std::string_view text);

/// Prints in the format accepted by parse_equations; parsing the output gives
/// back an identical system.
std::string print_equations(const NamedSystem& ns);

}  // namespace pwafix

#endif  // PWAFIX_EQUATIONS_HPP
