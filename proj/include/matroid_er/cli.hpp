#pragma once

// Batch command-line surface. Exit codes: 0 success or verdict true,
// 1 verdict false, 2 usage or input error. "-" (the default for most
// inputs) reads stdin; outputs without a path go to stdout.

#include "matroid_er/builtins.hpp"
#include "matroid_er/io.hpp"
#include "matroid_er/normalize.hpp"
#include "matroid_er/realizer.hpp"
#include "matroid_er/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace matroid_er::cli {

struct Config {
  std::string format = "text";  // text | json
  std::uint64_t seed = 1;
  int max_n = 20;          // brute-force column guard for from-matrix
  int max_retries = 64;    // realizer, per gadget
  int max_restarts = 8;    // realizer, global
};

namespace detail {

using io::json;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

inline std::string read_input(const std::string& path, Streams& s) {
  std::ostringstream buf;
  if (path.empty() || path == "-") {
    buf << s.in.rdbuf();
    return buf.str();
  }
  std::ifstream f(path);
  if (!f) throw InputError("cannot open '" + path + "'");
  buf << f.rdbuf();
  return buf.str();
}

inline void write_output(const std::string& path, const std::string& text, Streams& s) {
  if (path.empty() || path == "-") {
    s.out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json witness_json(const ExchangeWitness& w) { return {{"b1", w.b1}, {"b2", w.b2}, {"x", w.x}}; }

inline json outcome_json(const VerificationOutcome& o) {
  json j{{"verdict", to_string(o.verdict)}, {"matrix_rank", o.matrix_rank}};
  if (o.verdict == Verdict::MissingBasis || o.verdict == Verdict::ExtraBasis) j["basis"] = o.basis;
  if (o.verdict == Verdict::ExtraBasis) {
    j["x"] = *o.x;
    j["y"] = *o.y;
    j["independent_non_basis"] = o.extra_set();
  }
  return j;
}

inline json check_json(const CheckReport& r, const ConstraintSystem& cs) {
  json j{{"all_passed", r.all_passed}, {"distinct", r.distinct}, {"ok", r.ok()}};
  if (r.first_failure) j["first_failure"] = {{"index", *r.first_failure},
                                             {"constraint", op_keyword(cs.constraints[*r.first_failure].op)}};
  if (r.collision) j["collision"] = {cs.vars[r.collision->first], cs.vars[r.collision->second]};
  return j;
}

inline json params_json(const NormalizationParams& p) {
  return {{"n", p.n},
          {"L", p.L},
          {"Lbar", p.Lbar},
          {"delta_chain_k", p.delta_chain_k},
          {"R_chain_k", p.R_chain_k},
          {"R_upper_k", p.R_upper_k}};
}

/// Emits a JSON document, or its text rendering.
inline void emit(const Config& cfg, Streams& s, const json& j, const std::string& text) {
  s.out << (cfg.format == "json" ? dump(j) : text);
}

inline std::string kv_text(const json& j) {
  std::ostringstream os;
  for (auto it = j.begin(); it != j.end(); ++it)
    os << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
  return os.str();
}

}  // namespace detail

/// Runs one command line (without the program name).
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  using detail::json;
  detail::Streams s{in, out, err};
  Config cfg;
  CLI::App app{"Exact tools for rank-3 matroid representability"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--max-n", cfg.max_n, "Column guard for brute-force enumeration")->check(CLI::PositiveNumber);
  app.add_option("--max-retries", cfg.max_retries, "Realizer retries per gadget")->check(CLI::PositiveNumber);
  app.add_option("--max-restarts", cfg.max_restarts, "Realizer global restarts")->check(CLI::NonNegativeNumber);

  std::function<int()> action;
  std::string matroid_path = "-", matrix_path = "-", system_path = "-", assignment_path, trace_path, out_path,
              in_path = "-", points_path, stage, builtin_name, against_path;
  std::vector<std::string> test_scale;
  bool want_matrix = false, vars_only = false;

  auto* axioms = app.add_subcommand("axioms-check", "Check the basis-exchange axiom");
  axioms->add_option("matroid,--matroid", matroid_path, "Matroid file");
  axioms->callback([&] {
    action = [&] {
      auto doc = io::parse_matroid(detail::read_input(matroid_path, s));
      auto rep = validate_axioms(doc.matroid);
      json j{{"ok", rep.ok}, {"n", doc.matroid.size()}, {"r", doc.matroid.rank()}, {"bases", doc.matroid.bases().size()}};
      if (rep.witness) j["witness"] = detail::witness_json(*rep.witness);
      detail::emit(cfg, s, j, detail::kv_text(j));
      return rep.ok ? 0 : 1;
    };
  });

  auto* from_matrix = app.add_subcommand("from-matrix", "Vector matroid of a matrix");
  from_matrix->add_option("matrix,--matrix", matrix_path, "Matrix file");
  from_matrix->add_option("--out", out_path, "Output matroid file");
  from_matrix->callback([&] {
    action = [&] {
      auto text = detail::read_input(matrix_path, s);
      auto a = io::detect_kind(text) == "{" ? io::parse_matrix_json(io::parse_json(text)) : io::parse_matrix_text(text);
      auto m = matroid_from_matrix(a, static_cast<std::size_t>(cfg.max_n));
      detail::write_output(out_path, cfg.format == "json" ? detail::dump(io::matroid_json(m)) : io::write_matroid_text(m), s);
      return 0;
    };
  });

  auto* verify = app.add_subcommand("verify", "Decide whether a matrix represents a matroid");
  verify->add_option("--matroid", matroid_path, "Matroid file")->required();
  verify->add_option("--matrix", matrix_path, "Matrix file")->required();
  verify->callback([&] {
    action = [&] {
      auto doc = io::parse_matroid(detail::read_input(matroid_path, s));
      auto text = detail::read_input(matrix_path, s);
      auto a = io::detect_kind(text) == "{" ? io::parse_matrix_json(io::parse_json(text)) : io::parse_matrix_text(text);
      auto o = verify_representation(doc.matroid, a);
      s.out << detail::dump(detail::outcome_json(o));
      return o.verdict == Verdict::Represents ? 0 : 1;
    };
  });

  auto* check = app.add_subcommand("check", "Evaluate a constraint system at an assignment");
  check->add_option("--system", system_path, "Constraint file")->required();
  check->add_option("--assignment", assignment_path, "Assignment file")->required();
  check->callback([&] {
    action = [&] {
      auto cs = io::parse_system_any(detail::read_input(system_path, s));
      auto a = parse_assignment(detail::read_input(assignment_path, s));
      auto rep = check_assignment(cs, a);
      auto j = detail::check_json(rep, cs);
      detail::emit(cfg, s, j, detail::kv_text(j));
      return rep.ok() && (!cs.distinct_promise || rep.distinct) ? 0 : 1;
    };
  });

  auto* normalize = app.add_subcommand("normalize", "Reduce a polynomial system through the normal forms");
  normalize->add_option("--in", in_path, "Polynomial system file");
  normalize->add_option("--stage", stage, "Target stage")
      ->required()
      ->check(CLI::IsMember({"etrami", "feasibility", "strictineq", "distinct"}));
  normalize->add_option("--test-scale", test_scale, "Small delta and R instead of the symbolic chains")
      ->expected(2);
  normalize->add_option("--out", out_path, "Output file for the produced system");
  normalize->callback([&] {
    action = [&] {
      auto eqs = io::parse_poly_system(detail::read_input(in_path, s));
      const int arity = eqs.empty() ? 0 : eqs.front().arity();
      std::optional<Rational> delta, R;
      if (!test_scale.empty()) {
        delta = parse_rational(test_scale[0]);
        R = parse_rational(test_scale[1]);
      }
      auto etrami = flatten_to_etrami(eqs, arity);
      json meta{{"stage", stage}, {"etrami_variables", etrami.cs.size()}, {"etrami_constraints", etrami.cs.constraints.size()}};
      std::string artifact;
      if (stage == "etrami") {
        artifact = serialize(etrami.cs);
      } else {
        const int n = static_cast<int>(etrami.cs.size());
        auto feas = to_feasibility(constraint_polynomials(etrami.cs), n);
        meta["distinct_constraints"] = feas.distinct_constraints;
        meta["coefficient_bound"] = feas.coefficient_bound.get_str();
        meta["max_coefficient"] = feas.p.max_abs_coefficient().get_str();
        meta["terms"] = feas.p.size();
        if (stage == "feasibility") {
          artifact = io::write_poly_system({feas.p});
        } else {
          auto si = to_strict_ineq(feas.p, delta, R, etrami.cs.vars);
          meta["params"] = detail::params_json(si.params);
          if (delta) {
            meta["delta"] = delta->get_str();
            meta["R"] = R->get_str();
          }
          if (stage == "strictineq") {
            artifact = serialize(si.chains.cs);
          } else {
            auto ds = to_distinct(si);
            artifact = serialize(ds.cs);
            meta["variables"] = ds.cs.size();
            meta["constraints"] = ds.cs.constraints.size();
          }
        }
      }
      if (cfg.format == "json" && out_path.empty()) {
        meta["output"] = artifact;
        s.out << detail::dump(meta);
      } else {
        detail::write_output(out_path, artifact, s);
        if (!out_path.empty()) s.out << (cfg.format == "json" ? detail::dump(meta) : detail::kv_text(meta));
      }
      return 0;
    };
  });

  auto* compile_cmd = app.add_subcommand("compile", "Compile a constraint system to a rank-3 matroid");
  compile_cmd->add_option("--system", system_path, "Constraint file");
  compile_cmd->add_option("--out", out_path, "Output matroid file (line form)");
  compile_cmd->add_option("--trace", trace_path, "Output trace JSON")->required();
  compile_cmd->callback([&] {
    action = [&] {
      auto cs = io::parse_system_any(detail::read_input(system_path, s));
      auto c = compile(cs);
      auto ls = c.cm.line_set();
      detail::write_output(out_path, cfg.format == "json" ? detail::dump(io::lines_json(ls)) : io::write_lines_text(ls), s);
      detail::write_output(trace_path, detail::dump(io::compilation_json(c, cs)), s);
      if (!out_path.empty()) {
        json j{{"points", c.cm.num_points()},     {"lines", c.cm.num_lines()},
               {"expected_points", expected_points(c)}, {"expected_lines", expected_lines(c)},
               {"gadgets", c.traces.size()}};
        detail::emit(cfg, s, j, detail::kv_text(j));
      }
      return 0;
    };
  });

  auto* realize_cmd = app.add_subcommand("realize", "Place the points of a compiled matroid");
  realize_cmd->add_option("--trace", trace_path, "Trace JSON from compile or simulate-ot")->required();
  realize_cmd->add_option("--matroid", against_path, "Matroid to check the result against");
  realize_cmd->add_option("--assignment", assignment_path, "Satisfying assignment (compile traces)");
  realize_cmd->add_option("--points", points_path, "Source points with the chirotope (order-type traces)");
  realize_cmd->add_option("--out", out_path, "Output points file");
  realize_cmd->callback([&] {
    action = [&] {
      auto tj = io::parse_json(detail::read_input(trace_path, s));
      RealizeOptions opt;
      opt.seed = cfg.seed;
      opt.max_retries = cfg.max_retries;
      opt.max_restarts = cfg.max_restarts;
      Realization r;
      LineSet ls;
      if (tj.value("kind", "") == "order-type") {
        if (points_path.empty()) throw InputError("order-type traces need --points");
        auto doc = io::simulation_from_json(tj);
        auto src = io::parse_points(detail::read_input(points_path, s));
        if (!equal_up_to_sign(chirotope_from_points(src), doc.chirotope))
          throw InputError("the source points do not have the traced chirotope");
        r = realize_order_type(doc.simulation, src, opt);
        ls = doc.simulation.cm.line_set();
      } else {
        if (assignment_path.empty()) throw InputError("compile traces need --assignment");
        auto doc = io::compilation_from_json(tj);
        r = realize(doc.compilation, doc.system, parse_assignment(detail::read_input(assignment_path, s)), opt);
        ls = doc.compilation.cm.line_set();
      }
      bool ok = check_realization(r, ls);
      if (!against_path.empty()) {
        auto m = io::parse_matroid(detail::read_input(against_path, s));
        ok = ok && (m.lines ? check_realization(r, *m.lines) : check_realization(r, m.matroid));
      }
      detail::write_output(out_path, cfg.format == "json" ? detail::dump(io::points_json(r.config)) : io::write_points_text(r.config), s);
      if (!out_path.empty()) {
        json j{{"points", r.config.size()}, {"verified", ok}, {"seed", r.seed},
               {"resamples", r.total_resamples()}, {"restarts", r.restarts}};
        detail::emit(cfg, s, j, detail::kv_text(j));
      }
      if (!ok) s.err << "realization does not represent the matroid\n";
      return ok ? 0 : 1;
    };
  });

  auto* read_values = app.add_subcommand("read-values", "Coordinates of the points on the measurement line");
  read_values->add_option("points,--points", points_path, "Points file")->required();
  read_values->add_flag("--vars-only", vars_only, "Only variable points, as an assignment file");
  read_values->callback([&] {
    action = [&] {
      Realization r;
      r.config = io::parse_points(detail::read_input(points_path, s));
      if (r.config.size() < 3) throw InputError("need the frame points 0, 1 and inf first");
      const auto& P = r.config.points;
      if (!collinear(P[0], P[1], P[2]) || proportional(P[0], P[1]) || proportional(P[0], P[2]) ||
          proportional(P[1], P[2]))
        throw InputError("points 0, 1, 2 must be distinct collinear frame points");
      Line3 ell = line_through(P[0], P[1]);
      json j = json::object();
      std::ostringstream text;
      for (int p = 0; p < static_cast<int>(r.config.size()); ++p) {
        if (p == CompiledMatroid::kInf || !on_line(P[p], ell)) continue;
        std::string label = r.config.labels[p];
        if (vars_only) {
          if (label.rfind("var:", 0) != 0) continue;
          label = label.substr(4);
        }
        auto v = read_value(r, p).get_str();
        j[label] = v;
        text << label << " " << v << "\n";
      }
      detail::emit(cfg, s, j, text.str());
      return 0;
    };
  });

  auto* simulate_cmd = app.add_subcommand("simulate-ot", "Compile a chirotope to a rank-3 matroid");
  simulate_cmd->add_option("--in", in_path, "Chirotope file");
  simulate_cmd->add_option("--out", out_path, "Output matroid file (line form)");
  simulate_cmd->add_option("--trace", trace_path, "Output trace JSON")->required();
  simulate_cmd->callback([&] {
    action = [&] {
      auto chi = io::parse_chirotope(detail::read_input(in_path, s));
      auto sim = simulate(chi);
      auto ls = sim.cm.line_set();
      detail::write_output(out_path, cfg.format == "json" ? detail::dump(io::lines_json(ls)) : io::write_lines_text(ls), s);
      detail::write_output(trace_path, detail::dump(io::simulation_json(sim, chi)), s);
      if (!out_path.empty()) {
        json j{{"points", sim.cm.num_points()}, {"lines", sim.cm.num_lines()},
               {"expected_points", sim.expected_points()}, {"expected_lines", sim.expected_lines()},
               {"same_side", sim.same_side}, {"opposite_side", sim.opposite_side},
               {"collinear_triples", sim.collinear_triples}};
        detail::emit(cfg, s, j, detail::kv_text(j));
      }
      return 0;
    };
  });

  auto* builtin_cmd = app.add_subcommand("builtin", "Print a bundled instance");
  builtin_cmd->add_option("name", builtin_name, "Instance name")
      ->required()
      ->check(CLI::IsMember({"fano", "nonfano", "u24", "u34"}));
  builtin_cmd->add_flag("--matrix", want_matrix, "Print the bundled matrix instead");
  builtin_cmd->add_option("--out", out_path, "Output file");
  builtin_cmd->callback([&] {
    action = [&] {
      auto inst = builtin::lookup(builtin_name);
      std::string text;
      if (want_matrix)
        text = cfg.format == "json" ? detail::dump(io::matrix_json(*inst->matrix)) : io::write_matrix_text(*inst->matrix);
      else
        text = cfg.format == "json" ? detail::dump(io::matroid_json(inst->matroid)) : io::write_matroid_text(inst->matroid);
      detail::write_output(out_path, text, s);
      return 0;
    };
  });

  for (std::size_t i = 0; i < args.size(); ++i) {  // first bare word must name a subcommand
    const auto& a = args[i];
    if (!a.empty() && a[0] == '-') {
      if (a.find('=') == std::string::npos && a != "-h" && a != "--help") ++i;  // skip the option value
      continue;
    }
    if (app.get_subcommand_no_throw(a) == nullptr) {
      err << "usage error: unknown subcommand '" << a << "'\n";
      return 2;
    }
    break;
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }
  try {
    return action();
  } catch (const GeometricInfeasibility& e) {
    err << "infeasible: " << e.what() << "\n";
    return 1;
  } catch (const RetryExhausted& e) {
    err << "realization failed: " << e.what() << "\n";
    return 1;
  } catch (const CoincidenceError& e) {
    err << "coincidence: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const BoundError& e) {
    err << "bound exceeded: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace matroid_er::cli
