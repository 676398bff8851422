// Stochastic game format (.game). Per state, the minimizer picks an action,
// the maximizer a counter-action b, and the state pays r and moves with
// substochastic probabilities P:
//
//   state 1 {
//     action 1 {
//       b 1: P = [1/2, 0], r = 1;
//       b 2: P = [0, 0.25], r = 0;
//     }
//   }
//
// Coordinate i of the resulting map is  min_a max_b (P_i^{ab} . x + r_i^{ab}).
#ifndef PWAFIX_GAME_HPP
#define PWAFIX_GAME_HPP

#include <string_view>

#include "pwafix/equations.hpp"

namespace pwafix {

/// State names are the labels given after `state`. Negative probabilities and
/// rows summing above 1 are rejected with their location.
NamedSystem parse_game(std::string_view text);

}  // namespace pwafix

#endif  // PWAFIX_GAME_HPP
