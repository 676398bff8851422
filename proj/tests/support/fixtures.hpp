// Shared fixtures: the two-loop example system and its known vectors.
#ifndef PWAFIX_TESTS_FIXTURES_HPP
#define PWAFIX_TESTS_FIXTURES_HPP

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "pwafix/equations.hpp"

namespace pwafix::testing {

inline std::string data_path(const std::string& name) { return std::string(PWAFIX_DATA_DIR) + "/" + name; }

inline std::string read_data(const std::string& name) {
  std::ifstream in(data_path(name));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Vec vec(std::initializer_list<Rat> values) {
  Vec v(static_cast<Index>(values.size()));
  Index i = 0;
  for (const Rat& x : values) v[i++] = x;
  return v;
}

inline PwaSystem system_of(const std::string& eqs) { return parse_equations(eqs).system; }

inline NamedSystem example() { return parse_equations(read_data("paper_example.eqs")); }

// Order: x2m x2p x7m x7p y2m y2p y4m y4p y6m y6p y7m y7p.
inline Vec example_u0() { return vec({0, 15, -1, 16, 0, 15, -5, 15, 0, 4, 0, 15}); }
inline Vec example_u1() { return vec({0, 15, -5, 16, -4, 15, -5, 15, -4, 4, -4, 15}); }
inline Vec example_h() { return vec({0, 0, -1, 0, -1, 0, 0, 0, -1, 0, -1, 0}); }
inline Policy example_pi0() { return Policy{{0, 1, 1, 0, 0, 0, 1, 0, 0, 1, 0, 1}}; }

/// The twelve coordinate formulas written out directly with std::min/max.
inline Vec example_direct(const Vec& v) {
  using std::max;
  using std::min;
  const Rat &x2m = v[0], &x2p = v[1], &y2m = v[4], &y2p = v[5], &y4m = v[6], &y4p = v[7],
            &y6m = v[8], &y6p = v[9];
  return vec({max(Rat(0), x2m - 1),
              min(max(Rat(2), x2p + 1), max(Rat(15), y6p)),
              min(max(Rat(0), x2m - 1), max(Rat(-10), y6m) - 1),
              max(Rat(0), x2p + 1),
              min(max(Rat(0), x2m - 1), max(Rat(-10), y6m)),
              max(Rat(15), y6p),
              min(max(y2m, y4m + 1), Rat(-5)),
              max(y2p, y4p - 1),
              max(y2m, y4m + 1),
              min(max(y2p, y4p - 1), Rat(4)),
              max(Rat(-10), y6m),
              min(max(Rat(15), y6p), max(Rat(2), x2p + 1) - 1)});
}

}  // namespace pwafix::testing

#endif  // PWAFIX_TESTS_FIXTURES_HPP
