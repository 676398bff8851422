#include "pwafix/cli.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pwafix/game.hpp"
#include "pwafix/program.hpp"

namespace pwafix {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string input;
  std::string format = "text";
  bool trace = false;
  int oracle2_cap = 0;
  std::string seed_policy = "warmstart";
  std::string initial_policy;
  bool dump_lp = false;
  std::size_t max_iter = 0;
  int widen_after = 0;
};

class InputError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Policy parse_policy(const std::string& text, Index dim) {
  Policy p;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      p.choice.push_back(static_cast<Index>(std::stoll(item)));
    } catch (const std::exception&) {
      throw InputError("--initial-policy: '" + item + "' is not an action index");
    }
  }
  if (static_cast<Index>(p.choice.size()) != dim)
    throw InputError("--initial-policy has " + std::to_string(p.choice.size()) +
                     " entries, the system has dimension " + std::to_string(dim));
  return p;
}

SolveOptions solve_options(const RunConfig& cfg, const std::vector<std::string>& names,
                           std::ostream& err) {
  SolveOptions opts;
  opts.oracle2_cap = cfg.oracle2_cap;
  opts.seed = cfg.seed_policy == "first" ? SeedPolicy::First : SeedPolicy::Warmstart;
  opts.max_iterations = cfg.max_iter;
  if (cfg.dump_lp) {
    opts.on_value_determination = [&err, names](std::size_t round, const Policy& policy,
                                                 const LinearProgram& lp) {
      err << "# value determination, round " << round << ", policy " << to_string(policy) << '\n'
          << to_text(lp, names);
    };
  }
  return opts;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (const Rat& x : v) a.push_back(to_string(x));
  return a;
}

json policy_json(const Policy& p) {
  json a = json::array();
  for (Index c : p.choice) a.push_back(c);
  return a;
}

json certificate_json(const SpectralOutcome& c) {
  if (const auto* r = std::get_if<RadiusLtOne>(&c.result))
    return {{"kind", "radius_lt_one"}, {"k", r->certificate_k}, {"iterations", c.iterations}};
  return {{"kind", c.unit_radius() ? "unit_radius" : "inconclusive"}, {"iterations", c.iterations}};
}

json trace_json(const Solution& sol) {
  json a = json::array();
  for (std::size_t r = 0; r < sol.trace.size(); ++r) {
    const auto& rec = sol.trace[r];
    json imp;
    if (std::holds_alternative<Strict>(rec.improvement))
      imp = {{"kind", "strict"}};
    else if (const auto* d = std::get_if<Descent>(&rec.improvement))
      imp = {{"kind", "descent"}, {"h", vec_json(d->h)}};
    else
      imp = {{"kind", "terminal"}};
    a.push_back({{"round", r}, {"policy", policy_json(rec.policy)}, {"value", vec_json(rec.value)},
                 {"improvement", imp}});
  }
  return a;
}

std::string certificate_text(const SpectralOutcome& c) {
  if (const auto* r = std::get_if<RadiusLtOne>(&c.result))
    return "minimal: spectral radius of the semidifferential < 1 (certificate k = " +
           std::to_string(r->certificate_k) + ", " + std::to_string(c.iterations) + " iterations)";
  return "not certified";
}

void trace_text(const Solution& sol, std::ostream& out) {
  for (std::size_t r = 0; r < sol.trace.size(); ++r) {
    const auto& rec = sol.trace[r];
    out << "round " << r << ": policy " << to_string(rec.policy) << '\n'
        << "  value " << to_string(rec.value) << '\n';
    if (std::holds_alternative<Strict>(rec.improvement))
      out << "  f(u) < u: switch to the argmin policy\n";
    else if (const auto* d = std::get_if<Descent>(&rec.improvement))
      out << "  f(u) = u, descent direction h = " << to_string(d->h) << '\n';
    else
      out << "  f(u) = u, minimal\n";
  }
  if (sol.capped)
    out << "note: the initial policy has no finite fixed point; solved through the capped system\n";
}

void print_values(const std::vector<std::string>& names, const Vec& u, const std::string& prefix,
                  std::ostream& out) {
  for (Index j = 0; j < u.size(); ++j)
    out << prefix << names[static_cast<std::size_t>(j)] << " = " << to_string(u[j]) << "  ("
        << to_decimal(u[j]) << ")\n";
}

json values_json(const std::vector<std::string>& names, const Vec& u) {
  json a = json::array();
  for (Index j = 0; j < u.size(); ++j)
    a.push_back({{"name", names[static_cast<std::size_t>(j)]},
                 {"value", to_string(u[j])},
                 {"decimal", to_decimal(u[j])}});
  return a;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const NamedSystem ns = parse_equations(read_file(cfg.input));
  SolveOptions opts = solve_options(cfg, ns.names, err);
  if (!cfg.initial_policy.empty()) opts.initial = parse_policy(cfg.initial_policy, ns.system.dim());
  const Solution sol = solve_smallest(ns.system, opts);

  if (cfg.format == "json") {
    json doc = {{"variables", values_json(ns.names, sol.u)},
                {"certificate", certificate_json(sol.certificate)},
                {"policy", policy_json(sol.policy)},
                {"capped", sol.capped},
                {"trace", cfg.trace ? trace_json(sol) : json::array()}};
    out << doc.dump(2) << '\n';
    return exit_code::kOk;
  }
  if (cfg.trace) trace_text(sol, out);
  print_values(ns.names, sol.u, "", out);
  out << "certificate: " << certificate_text(sol.certificate) << '\n';
  return exit_code::kOk;
}

int cmd_game(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const NamedSystem ns = parse_game(read_file(cfg.input));
  const Solution sol = solve_smallest(ns.system, solve_options(cfg, ns.names, err));

  if (cfg.format == "json") {
    json doc = {{"states", values_json(ns.names, sol.u)},
                {"certificate", certificate_json(sol.certificate)},
                {"policy", cfg.trace ? policy_json(sol.policy) : json::array()},
                {"trace", cfg.trace ? trace_json(sol) : json::array()}};
    out << doc.dump(2) << '\n';
    return exit_code::kOk;
  }
  print_values(ns.names, sol.u, "state ", out);
  if (cfg.trace) {
    out << "minimizer policy (action positions from 0):\n";
    for (Index j = 0; j < ns.system.dim(); ++j)
      out << "  state " << ns.names[static_cast<std::size_t>(j)] << " -> action "
          << sol.policy.choice[static_cast<std::size_t>(j)] << '\n';
  }
  out << "certificate: " << certificate_text(sol.certificate) << '\n';
  return exit_code::kOk;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Program prog = parse_program(read_file(cfg.input));
  AnalysisOptions opts;
  opts.widen_after = cfg.widen_after;
  // The residual system is built inside analyze(), so dumped LPs use x1, x2, ...
  opts.solve = solve_options(cfg, {}, err);
  const Analysis a = analyze(prog, opts);

  std::vector<std::string> widened;
  for (const auto& e : a.infinities.eliminated)
    if (e.widened) widened.push_back(e.name);

  if (cfg.format == "json") {
    json points = json::array();
    for (const auto& p : a.points) {
      json vars = json::object();
      for (const auto& v : p.vars) vars[v.name] = {{"lo", to_string(v.lo)}, {"hi", to_string(v.hi)}};
      points.push_back({{"id", p.id}, {"vars", vars}});
    }
    json eliminated = json::array();
    for (const auto& e : a.infinities.eliminated)
      eliminated.push_back({{"name", e.name}, {"value", e.sign > 0 ? "+inf" : "-inf"}, {"widened", e.widened}});
    json doc = {{"points", points},
                {"trace", a.solution && cfg.trace ? trace_json(*a.solution) : json::array()},
                {"certificate", a.solution ? certificate_json(a.solution->certificate) : json(nullptr)},
                {"widened", widened},
                {"eliminated", eliminated}};
    out << doc.dump(2) << '\n';
    return exit_code::kOk;
  }

  if (cfg.trace && a.solution) {
    out << "bound variables: ";
    for (std::size_t i = 0; i < a.residual.names.size(); ++i) out << (i ? ", " : "") << a.residual.names[i];
    out << '\n';
    trace_text(*a.solution, out);
  }
  for (const auto& p : a.points) {
    out << "point " << p.id << ':';
    for (std::size_t i = 0; i < p.vars.size(); ++i) {
      const auto& v = p.vars[i];
      out << (i ? ", " : " ") << v.name << " in [" << to_string(v.lo) << ", " << to_string(v.hi) << ']';
    }
    out << '\n';
  }
  for (const auto& e : a.infinities.eliminated)
    out << "eliminated: " << e.name << " = " << (e.sign > 0 ? "+inf" : "-inf")
        << (e.widened ? " (widened)" : "") << '\n';
  if (a.solution) out << "certificate: " << certificate_text(a.solution->certificate) << '\n';
  return exit_code::kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Smallest fixed points of min-max-affine maps by policy iteration", "pwafix"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("input", cfg.input, "Input file")->required();
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--trace", cfg.trace, "Print the policy iteration trace");
    sub->add_option("--oracle2-cap", cfg.oracle2_cap, "Iteration cap of the negative-cone test")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed-policy", cfg.seed_policy, "Initial policy")
        ->check(CLI::IsMember({"first", "warmstart"}));
    sub->add_flag("--dump-lp", cfg.dump_lp, "Write each value-determination LP to stderr");
    sub->add_option("--max-iter", cfg.max_iter, "Limit on value determinations")
        ->check(CLI::PositiveNumber);
  };
  CLI::App* solve = app.add_subcommand("solve", "Solve an equation file (.eqs)");
  add_common(solve);
  solve->add_option("--initial-policy", cfg.initial_policy,
                    "Comma-separated action index per coordinate (overrides --seed-policy)");
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Interval analysis of a program (.tc)");
  add_common(analyze_cmd);
  analyze_cmd->add_option("--widen-after", cfg.widen_after,
                          "Steps before still-increasing bounds are widened (default 3 d)")
      ->check(CLI::PositiveNumber);
  CLI::App* game = app.add_subcommand("game", "Solve a stochastic game (.game)");
  add_common(game);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kInput;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    if (cfg.command == "solve") return cmd_solve(cfg, out, err);
    if (cfg.command == "analyze") return cmd_analyze(cfg, out, err);
    return cmd_game(cfg, out, err);
  } catch (const ParseError& e) {
    err << "error: " << cfg.input << ':' << e.what() << '\n';
    return exit_code::kInput;
  } catch (const InvalidSystem& e) {
    err << "error: " << cfg.input << ": " << e.what() << '\n';
    return exit_code::kInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kInput;
  } catch (const NormalizationTooLarge& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kInput;
  } catch (const SolveError& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    switch (e.kind()) {
      case SolveError::Kind::NoFiniteFixedPoint:
      case SolveError::Kind::UnboundedBelow: return exit_code::kNoFixedPoint;
      case SolveError::Kind::Undecidable: return exit_code::kUndecidable;
      default: return exit_code::kInternal;
    }
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return exit_code::kInternal;
  }
}

}  // namespace pwafix
