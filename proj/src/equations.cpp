#include "pwafix/equations.hpp"

#include <map>
#include <optional>

#include "lexer.hpp"

namespace pwafix {

ParseError::ParseError(int line, int column, const std::string& message)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

using detail::Token;
using detail::TokenStream;

// Either a plain affine function or a min/max tree (possibly shifted).
struct Operand {
  std::optional<AffineTerm> affine;
  std::optional<Expr> tree;
  Token at;

  Expr to_expr() const { return affine ? Expr::atom(*affine) : *tree; }
};

class EquationParser {
 public:
  explicit EquationParser(std::string_view text)
      : ts_(detail::tokenize(text, detail::CommentStyle::Hash)) {}

  ExprSystem parse() {
    while (ts_.is("var")) {
      ts_.next();
      do {
        const Token& name = ts_.expect_ident("a variable name");
        if (name.text == "min" || name.text == "max" || name.text == "var")
          ts_.fail(name, "'" + name.text + "' is reserved");
        if (!index_.emplace(name.text, static_cast<Index>(names_.size())).second)
          ts_.fail(name, "variable '" + name.text + "' declared twice");
        names_.push_back(name.text);
      } while (ts_.accept(","));
      ts_.expect(";");
    }
    if (names_.empty()) ts_.fail(ts_.peek(), "expected at least one 'var' declaration");

    std::vector<std::optional<Expr>> equations(names_.size());
    while (!ts_.at_end()) {
      const Token lhs = ts_.expect_ident("a variable name");
      const Index j = lookup(lhs);
      auto& slot = equations[static_cast<std::size_t>(j)];
      if (slot) ts_.fail(lhs, "second equation for '" + lhs.text + "'");
      ts_.expect("=");
      Expr rhs = sum().to_expr();
      ts_.expect(";");
      check_atoms(rhs, lhs);
      slot = std::move(rhs);
    }

    ExprSystem sys{names_, {}};
    for (std::size_t j = 0; j < names_.size(); ++j) {
      if (!equations[j]) ts_.fail(ts_.peek(), "no equation for '" + names_[j] + "'");
      sys.equations.push_back(std::move(*equations[j]));
    }
    return sys;
  }

 private:
  Index dim() const { return static_cast<Index>(names_.size()); }

  Index lookup(const Token& name) const {
    auto it = index_.find(name.text);
    if (it == index_.end()) ts_.fail(name, "unknown identifier '" + name.text + "'");
    return it->second;
  }

  Operand sum() {
    Operand acc = unary();
    while (ts_.is("+") || ts_.is("-")) {
      const bool minus = ts_.next().text == "-";
      Operand rhs = unary();
      if (minus) rhs = negate(std::move(rhs));
      acc = add(std::move(acc), std::move(rhs));
    }
    return acc;
  }

  Operand unary() {
    if (ts_.is("-")) {
      ts_.next();
      return negate(unary());
    }
    return primary();
  }

  Operand primary() {
    const Token at = ts_.peek();
    if (at.kind == Token::Kind::Number) {
      const Rat coeff = detail::read_rational(ts_);
      if (!ts_.accept("*")) return {AffineTerm{Vec::Zero(dim()), coeff}, std::nullopt, at};
      const Token& name = ts_.expect_ident("a variable name after '*'");
      AffineTerm t{Vec::Zero(dim()), Rat(0)};
      t.grad[lookup(name)] = coeff;
      return {std::move(t), std::nullopt, at};
    }
    if (at.kind == Token::Kind::Ident && (at.text == "min" || at.text == "max")) {
      ts_.next();
      ts_.expect("(");
      std::vector<Expr> children{sum().to_expr()};
      while (ts_.accept(",")) children.push_back(sum().to_expr());
      ts_.expect(")");
      Expr e = at.text == "min" ? Expr::min(std::move(children)) : Expr::max(std::move(children));
      return {std::nullopt, std::move(e), at};
    }
    if (at.kind == Token::Kind::Ident) {
      ts_.next();
      return {Expr::variable(dim(), lookup(at)).term(), std::nullopt, at};
    }
    if (ts_.accept("(")) {
      Operand inner = sum();
      ts_.expect(")");
      return inner;
    }
    ts_.fail(at, "expected an expression, found " + detail::describe(at));
  }

  Operand negate(Operand op) {
    if (!op.affine) ts_.fail(op.at, "a min/max expression cannot be negated");
    op.affine->grad = -op.affine->grad;
    op.affine->constant = -op.affine->constant;
    return op;
  }

  Operand add(Operand a, Operand b) {
    if (a.affine && b.affine) {
      a.affine->grad += b.affine->grad;
      a.affine->constant += b.affine->constant;
      return a;
    }
    if (a.tree && b.affine && b.affine->is_constant())
      return {std::nullopt, Expr::shift(std::move(*a.tree), b.affine->constant), a.at};
    if (b.tree && a.affine && a.affine->is_constant())
      return {std::nullopt, Expr::shift(std::move(*b.tree), a.affine->constant), a.at};
    ts_.fail(b.at, "only a constant can be added to a min/max expression");
  }

  void check_atoms(const Expr& e, const Token& lhs) const {
    if (e.kind() != Expr::Kind::Atom) {
      for (const auto& c : e.children()) check_atoms(c, lhs);
      return;
    }
    const Vec& w = e.term().grad;
    Rat total = 0;
    for (Index i = 0; i < w.size(); ++i) {
      if (w[i] < 0)
        ts_.fail(lhs, "negative coefficient " + to_string(w[i]) + " on '" +
                          names_[static_cast<std::size_t>(i)] + "' in the equation of '" +
                          lhs.text + "'");
      total += w[i];
    }
    if (total > 1)
      ts_.fail(lhs, "gradient sum " + to_string(total) + " > 1 in the equation of '" + lhs.text +
                        "'");
  }

  TokenStream ts_;
  std::vector<std::string> names_;
  std::map<std::string, Index> index_;
};

std::string group_string(const MaxGroup& g, const std::vector<std::string>& names) {
  if (g.terms.size() == 1) return to_string(g.terms.front(), names);
  std::string out = "max(";
  for (std::size_t i = 0; i < g.terms.size(); ++i)
    out += (i ? ", " : "") + to_string(g.terms[i], names);
  return out + ")";
}

}  // namespace

ExprSystem parse_equation_exprs(std::string_view text) { return EquationParser(text).parse(); }

NamedSystem parse_equations(std::string_view text) {
  NamedSystem ns = normalize(parse_equation_exprs(text));
  require_valid(ns.system);
  return ns;
}

std::string print_equations(const NamedSystem& ns) {
  std::string out = "var ";
  for (std::size_t i = 0; i < ns.names.size(); ++i) out += (i ? ", " : "") + ns.names[i];
  out += ";\n";
  for (Index j = 0; j < ns.system.dim(); ++j) {
    const auto& coord = ns.system.coord(j);
    std::string rhs;
    if (coord.size() == 1) {
      rhs = group_string(coord.front(), ns.names);
    } else {
      rhs = "min(";
      for (std::size_t a = 0; a < coord.size(); ++a)
        rhs += (a ? ", " : "") + group_string(coord[a], ns.names);
      rhs += ")";
    }
    out += ns.names[static_cast<std::size_t>(j)] + " = " + rhs + ";\n";
  }
  return out;
}

}  // namespace pwafix
