#include "pwafix/game.hpp"

#include <set>

#include "lexer.hpp"

namespace pwafix {

namespace {

using detail::Token;

struct Row {
  std::vector<Rat> p;
  Rat r;
  Token at;
};

std::string label(detail::TokenStream& ts) {
  const Token& t = ts.next();
  if (t.kind != Token::Kind::Ident && t.kind != Token::Kind::Number)
    ts.fail(t, "expected a label, found " + detail::describe(t));
  return t.text;
}

}  // namespace

NamedSystem parse_game(std::string_view text) {
  detail::TokenStream ts(detail::tokenize(text, detail::CommentStyle::Hash));
  std::vector<std::string> names;
  std::vector<std::vector<std::vector<Row>>> states;
  std::set<std::string> seen;

  while (!ts.at_end()) {
    const Token kw = ts.peek();
    ts.expect("state");
    const Token name_at = ts.peek();
    std::string name = label(ts);
    if (!seen.insert(name).second) ts.fail(name_at, "state '" + name + "' defined twice");
    names.push_back(name);
    ts.expect("{");
    std::vector<std::vector<Row>> actions;
    while (ts.accept("action")) {
      label(ts);
      ts.expect("{");
      std::vector<Row> rows;
      while (ts.accept("b")) {
        label(ts);
        ts.expect(":");
        Row row{{}, Rat(0), ts.peek()};
        ts.expect("P");
        ts.expect("=");
        ts.expect("[");
        do {
          const Token at = ts.peek();
          Rat q = detail::read_rational(ts);
          if (q < 0) ts.fail(at, "negative probability " + to_string(q) + " in state '" + name + "'");
          row.p.push_back(std::move(q));
        } while (ts.accept(","));
        ts.expect("]");
        ts.expect(",");
        ts.expect("r");
        ts.expect("=");
        row.r = detail::read_rational(ts);
        ts.expect(";");
        rows.push_back(std::move(row));
      }
      ts.expect("}");
      if (rows.empty()) ts.fail(ts.peek(), "action without counter-actions in state '" + name + "'");
      actions.push_back(std::move(rows));
    }
    ts.expect("}");
    if (actions.empty()) ts.fail(kw, "state '" + name + "' has no actions");
    states.push_back(std::move(actions));
  }
  if (states.empty()) ts.fail(ts.peek(), "expected at least one state");

  const auto n = static_cast<Index>(states.size());
  std::vector<PwaSystem::Coordinate> coords;
  for (std::size_t i = 0; i < states.size(); ++i) {
    PwaSystem::Coordinate coord;
    for (const auto& rows : states[i]) {
      MaxGroup group;
      for (const auto& row : rows) {
        if (static_cast<Index>(row.p.size()) != n)
          ts.fail(row.at, "transition row has " + std::to_string(row.p.size()) +
                              " entries, expected one per state (" + std::to_string(n) + ")");
        Vec p(n);
        Rat sum = 0;
        for (Index k = 0; k < n; ++k) {
          p[k] = row.p[static_cast<std::size_t>(k)];
          sum += p[k];
        }
        if (sum > 1)
          ts.fail(row.at, "transition probabilities of state '" + names[i] + "' sum to " +
                              to_string(sum) + " > 1 (negative discount rate)");
        group.terms.push_back({std::move(p), row.r});
      }
      coord.push_back(std::move(group));
    }
    coords.push_back(std::move(coord));
  }
  NamedSystem ns{PwaSystem(n, std::move(coords)), std::move(names)};
  require_valid(ns.system);
  return ns;
}

}  // namespace pwafix
