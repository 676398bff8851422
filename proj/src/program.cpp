#include "pwafix/program.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "lexer.hpp"

namespace pwafix {

namespace {

using detail::Token;
using detail::TokenStream;

const std::set<std::string> kKeywords = {"int", "while", "if", "else", "for", "do", "return"};

class ProgramParser {
 public:
  explicit ProgramParser(std::string_view text)
      : ts_(detail::tokenize(text, detail::CommentStyle::DoubleSlash)) {}

  Program parse() {
    declarations();
    std::set<Index> assigned;
    program_.body = block(assigned);
    if (!ts_.at_end()) ts_.fail(ts_.peek(), "unexpected " + detail::describe(ts_.peek()));
    program_.num_points = next_point_;
    return std::move(program_);
  }

 private:
  void declarations() {
    while (ts_.accept("int")) {
      declare(ts_.expect_ident("a variable name"));
      while (ts_.accept(",")) {
        if (ts_.peek().kind != Token::Kind::Ident || ts_.is("int") || ts_.peek(1).text == "=") break;
        declare(ts_.next());
      }
      ts_.accept(";");
    }
  }

  void declare(const Token& name) {
    if (kKeywords.count(name.text)) ts_.fail(name, "'" + name.text + "' is a keyword");
    if (!index_.emplace(name.text, static_cast<Index>(program_.vars.size())).second)
      ts_.fail(name, "variable '" + name.text + "' declared twice");
    program_.vars.push_back(name.text);
  }

  Index variable(const Token& name) const {
    auto it = index_.find(name.text);
    if (it == index_.end()) ts_.fail(name, "undeclared variable '" + name.text + "'");
    return it->second;
  }

  Index used_variable(const Token& name, const std::set<Index>& assigned) const {
    const Index v = variable(name);
    if (!assigned.count(v)) ts_.fail(name, "'" + name.text + "' is used before it is assigned");
    return v;
  }

  Rat integer() {
    const Token at = ts_.peek();
    Rat value = detail::read_rational(ts_);
    if (denominator(value) != 1) ts_.fail(at, "expected an integer, found " + to_string(value));
    return value;
  }

  std::vector<Located> block(std::set<Index>& assigned) {
    std::vector<Located> out;
    for (;;) {
      while (ts_.accept(";")) {
      }
      if (ts_.at_end() || ts_.is("}")) return out;
      const Token start = ts_.peek();
      if (start.kind != Token::Kind::Ident)
        ts_.fail(start, "expected a statement, found " + detail::describe(start));
      if (start.text == "while") {
        out.push_back(loop(assigned));
        continue;
      }
      if (kKeywords.count(start.text))
        ts_.fail(start, "unsupported construct '" + start.text + "'");

      Stmt stmt = assignment(assigned);
      int point = -1;
      if (!out.empty() && out.back().line == start.line &&
          !std::holds_alternative<While>(out.back().stmt))
        point = out.back().point;
      if (point < 0) point = next_point_++;
      out.push_back({std::move(stmt), start.line, point});
    }
  }

  Stmt assignment(std::set<Index>& assigned) {
    const Token target = ts_.next();
    const Index v = variable(target);
    ts_.expect("=");
    if (ts_.accept("[")) {
      const Token at = ts_.peek();
      Rat lo = integer();
      ts_.expect(",");
      Rat hi = integer();
      ts_.expect("]");
      if (lo > hi)
        ts_.fail(at, "empty interval [" + to_string(lo) + ", " + to_string(hi) + "]");
      assigned.insert(v);
      return IntervalAssign{v, std::move(lo), std::move(hi)};
    }
    const Token source = ts_.peek();
    if (source.kind != Token::Kind::Ident)
      ts_.fail(source, "unsupported assignment: expected '[lo, hi]' or '" + target.text +
                           " + c', found " + detail::describe(source));
    ts_.next();
    if (source.text != target.text)
      ts_.fail(source, "unsupported construct: assignment from another variable ('" +
                           target.text + " = " + source.text + " ...')");
    used_variable(source, assigned);
    const Token op = ts_.peek();
    if (op.text != "+" && op.text != "-")
      ts_.fail(op, "unsupported assignment: expected '+ c' or '- c' after '" + source.text + "'");
    ts_.next();
    const Token at = ts_.peek();
    Rat c = integer();
    if (c < 0) ts_.fail(at, "increment must be a nonnegative integer");
    return Increment{v, op.text == "-" ? Rat(-c) : c};
  }

  GuardOperand operand(const std::set<Index>& assigned) {
    if (ts_.peek().kind == Token::Kind::Ident) return used_variable(ts_.next(), assigned);
    return integer();
  }

  Located loop(std::set<Index>& assigned) {
    const Token kw = ts_.next();
    ts_.expect("(");
    const Token lhs_at = ts_.peek();
    GuardOperand lhs = operand(assigned);
    const Token cmp = ts_.peek();
    if (cmp.text != "<=") {
      if (cmp.text == "<" || cmp.text == ">" || cmp.text == ">=" || cmp.text == "==" ||
          cmp.text == "!=")
        ts_.fail(cmp, "unsupported comparison '" + cmp.text + "' (only '<=' is supported)");
      ts_.fail(cmp, "expected '<=', found " + detail::describe(cmp));
    }
    ts_.next();
    GuardOperand rhs = operand(assigned);
    if (std::holds_alternative<Rat>(lhs) && std::holds_alternative<Rat>(rhs))
      ts_.fail(lhs_at, "unsupported guard: both sides are constants");
    ts_.expect(")");
    ts_.expect("{");
    const int head = next_point_++;
    std::set<Index> inner = assigned;
    std::vector<Located> body = block(inner);
    ts_.expect("}");
    const int exit = next_point_++;
    return {While{Guard{std::move(lhs), std::move(rhs)}, std::move(body), head, exit}, kw.line,
            exit};
  }

  TokenStream ts_;
  Program program_;
  std::map<std::string, Index> index_;
  int next_point_ = 1;
};

struct Bounds {
  Expr m;
  Expr p;
};

using State = std::vector<std::optional<Bounds>>;

// Builds the equations over the full grid of (variable, point, bound)
// unknowns; unknowns that never get an equation are dropped at the end.
class Generator {
 public:
  explicit Generator(const Program& p)
      : prog_(p),
        vars_(static_cast<Index>(p.vars.size())),
        points_(p.num_points),
        full_(2 * vars_ * points_),
        equations_(static_cast<std::size_t>(full_)),
        keep_(static_cast<std::size_t>(full_), false) {}

  ProgramEquations run() {
    State state(static_cast<std::size_t>(vars_));
    block(prog_.body, state);

    std::vector<Index> used;
    for (Index i = 0; i < full_; ++i)
      if (equations_[static_cast<std::size_t>(i)]) used.push_back(i);
    std::vector<Index> position(static_cast<std::size_t>(full_), -1);
    for (std::size_t k = 0; k < used.size(); ++k) position[static_cast<std::size_t>(used[k])] = static_cast<Index>(k);

    ProgramEquations out;
    out.bounds.assign(static_cast<std::size_t>(points_),
                      std::vector<std::optional<BoundPair>>(static_cast<std::size_t>(vars_)));
    for (Index i : used) {
      const Index var = i / (2 * points_);
      const Index point = (i / 2) % points_;
      const bool upper = i % 2 == 1;
      out.system.names.push_back(bound_name(var, point, upper));
      out.system.equations.push_back(simplify(compact(*equations_[static_cast<std::size_t>(i)], used)));
      out.keep.push_back(keep_[static_cast<std::size_t>(i)]);
      auto& slot = out.bounds[static_cast<std::size_t>(point)][static_cast<std::size_t>(var)];
      if (!slot) slot = BoundPair{-1, -1};
      (upper ? slot->upper : slot->lower) = position[static_cast<std::size_t>(i)];
    }
    return out;
  }

 private:
  Index unknown(Index var, Index point, bool upper) const {
    return (var * points_ + point) * 2 + (upper ? 1 : 0);
  }

  std::string bound_name(Index var, Index point, bool upper) const {
    std::string base = prog_.vars[static_cast<std::size_t>(var)];
    if (std::isdigit(static_cast<unsigned char>(base.back()))) base += '_';
    return base + std::to_string(point) + (upper ? "p" : "m");
  }

  Expr constant(const Rat& c) const { return Expr::constant(full_, c); }

  Bounds unknowns_at(Index var, Index point) const {
    return {Expr::variable(full_, unknown(var, point, false)),
            Expr::variable(full_, unknown(var, point, true))};
  }

  // Gives every assigned variable fresh unknowns at `point` defined by its
  // current bounds, and continues from those unknowns.
  void materialize(State& state, Index point) {
    for (Index v = 0; v < vars_; ++v) {
      auto& b = state[static_cast<std::size_t>(v)];
      if (!b) continue;
      equations_[static_cast<std::size_t>(unknown(v, point, false))] = std::move(b->m);
      equations_[static_cast<std::size_t>(unknown(v, point, true))] = std::move(b->p);
      b = unknowns_at(v, point);
    }
  }

  void block(const std::vector<Located>& stmts, State& state) {
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      const Located& s = stmts[i];
      if (const auto* w = std::get_if<While>(&s.stmt)) {
        loop(*w, state);
        continue;
      }
      if (const auto* a = std::get_if<IntervalAssign>(&s.stmt)) {
        state[static_cast<std::size_t>(a->var)] = Bounds{constant(-a->lo), constant(a->hi)};
      } else {
        const auto& inc = std::get<Increment>(s.stmt);
        auto& b = *state[static_cast<std::size_t>(inc.var)];
        b = Bounds{Expr::shift(b.m, -inc.delta), Expr::shift(b.p, inc.delta)};
      }
      const bool run_continues = i + 1 < stmts.size() && stmts[i + 1].point == s.point &&
                                 !std::holds_alternative<While>(stmts[i + 1].stmt);
      if (!run_continues) materialize(state, s.point);
    }
  }

  static Expr meet(Expr a, Expr b) { return Expr::min({std::move(a), std::move(b)}); }

  void loop(const While& w, State& state) {
    State head(state.size());
    for (Index v = 0; v < vars_; ++v)
      if (state[static_cast<std::size_t>(v)]) head[static_cast<std::size_t>(v)] = unknowns_at(v, w.head_point);
    State end = head;
    block(w.body, end);

    State join(state.size());
    for (std::size_t v = 0; v < state.size(); ++v) {
      if (!state[v]) continue;
      join[v] = Bounds{Expr::max({state[v]->m, end[v]->m}), Expr::max({state[v]->p, end[v]->p})};
    }
    State inside = join;
    State outside = join;
    filter(w.guard, join, inside, outside);

    for (std::size_t v = 0; v < state.size(); ++v) {
      if (!state[v]) continue;
      const auto vi = static_cast<Index>(v);
      equations_[static_cast<std::size_t>(unknown(vi, w.head_point, false))] = inside[v]->m;
      equations_[static_cast<std::size_t>(unknown(vi, w.head_point, true))] = inside[v]->p;
    }
    state = std::move(outside);
    materialize(state, w.exit_point);

    for (const auto& operand : {w.guard.lhs, w.guard.rhs}) {
      if (const auto* v = std::get_if<Index>(&operand))
        for (Index point : {static_cast<Index>(w.head_point), static_cast<Index>(w.exit_point)})
          for (bool upper : {false, true}) keep_[static_cast<std::size_t>(unknown(*v, point, upper))] = true;
    }
  }

  // Guard lhs <= rhs holds in `inside` and fails (integer negation) in `outside`.
  void filter(const Guard& g, const State& j, State& inside, State& outside) const {
    const auto* lv = std::get_if<Index>(&g.lhs);
    const auto* rv = std::get_if<Index>(&g.rhs);
    auto at = [&](const State& s, Index v) -> const Bounds& { return *s[static_cast<std::size_t>(v)]; };
    auto slot = [](State& s, Index v) -> Bounds& { return *s[static_cast<std::size_t>(v)]; };
    if (lv && rv) {
      slot(inside, *lv).p = meet(at(j, *lv).p, at(j, *rv).p);
      slot(inside, *rv).m = meet(at(j, *rv).m, at(j, *lv).m);
      slot(outside, *lv).m = meet(at(j, *lv).m, Expr::shift(at(j, *rv).m, -1));
      slot(outside, *rv).p = meet(at(j, *rv).p, Expr::shift(at(j, *lv).p, -1));
    } else if (lv) {
      const Rat& c = std::get<Rat>(g.rhs);
      slot(inside, *lv).p = meet(at(j, *lv).p, constant(c));
      slot(outside, *lv).m = meet(at(j, *lv).m, constant(-(c + 1)));
    } else {
      const Rat& c = std::get<Rat>(g.lhs);
      slot(inside, *rv).m = meet(at(j, *rv).m, constant(-c));
      slot(outside, *rv).p = meet(at(j, *rv).p, constant(c - 1));
    }
  }

  static Expr compact(const Expr& e, const std::vector<Index>& used) {
    switch (e.kind()) {
      case Expr::Kind::Atom: {
        Vec grad(static_cast<Index>(used.size()));
        for (std::size_t k = 0; k < used.size(); ++k) grad[static_cast<Index>(k)] = e.term().grad[used[k]];
        return Expr::atom({std::move(grad), e.term().constant});
      }
      case Expr::Kind::Shift: return Expr::shift(compact(e.children().front(), used), e.offset());
      default: {
        std::vector<Expr> children;
        for (const auto& c : e.children()) children.push_back(compact(c, used));
        return e.kind() == Expr::Kind::Min ? Expr::min(std::move(children)) : Expr::max(std::move(children));
      }
    }
  }

  const Program& prog_;
  Index vars_;
  Index points_;
  Index full_;
  std::vector<std::optional<Expr>> equations_;
  std::vector<bool> keep_;
};

XRat negate(const XRat& x) {
  if (x.infinity() > 0) return XRat::neg_inf();
  if (x.infinity() < 0) return XRat::pos_inf();
  return XRat(Rat(-x.value()));
}

}  // namespace

Program parse_program(std::string_view text) { return ProgramParser(text).parse(); }

ProgramEquations generate_equations(const Program& p) { return Generator(p).run(); }

ExprSystem compile_program(const Program& p) {
  ProgramEquations eq = generate_equations(p);
  return eliminate_variables(eq.system, eq.keep).system;
}

Analysis analyze(const Program& p, const AnalysisOptions& opts) {
  ProgramEquations eq = generate_equations(p);
  Elimination elim = eliminate_variables(eq.system, eq.keep);

  Analysis out;
  out.infinities = eliminate_infinities(elim.system, opts.widen_after);
  out.residual = normalize(out.infinities.residual, opts.term_budget);

  std::vector<XRat> kept = out.infinities.values;
  if (out.residual.system.dim() > 0) {
    out.solution = solve_smallest(out.residual.system, opts.solve);
    for (std::size_t i = 0; i < out.infinities.residual_index.size(); ++i)
      kept[static_cast<std::size_t>(out.infinities.residual_index[i])] = out.solution->u[static_cast<Index>(i)];
  }

  for (int point = 0; point < p.num_points; ++point) {
    PointIntervals pi{point, {}};
    for (std::size_t v = 0; v < p.vars.size(); ++v) {
      const auto& b = eq.bounds[static_cast<std::size_t>(point)][v];
      if (!b) continue;
      pi.vars.push_back({p.vars[v],
                         negate(eval_extended(elim.definitions[static_cast<std::size_t>(b->lower)], kept)),
                         eval_extended(elim.definitions[static_cast<std::size_t>(b->upper)], kept)});
    }
    out.points.push_back(std::move(pi));
  }
  return out;
}

}  // namespace pwafix
