#pragma once

// Text and JSON formats: matroids, matrices, point sets, chirotopes,
// polynomial systems and compiled registries (trace files).

#include "matroid_er/compiler.hpp"
#include "matroid_er/etr.hpp"
#include "matroid_er/order_type.hpp"
#include "matroid_er/polynomial.hpp"

#include <json.hpp>

#include <climits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace matroid_er::io {

using nlohmann::json;

namespace detail {

struct TokenLine {
  std::size_t no;
  std::vector<std::string> tok;
};

/// Non-empty, comment-stripped lines with 1-based line numbers.
inline std::vector<TokenLine> token_lines(const std::string& text) {
  std::vector<TokenLine> out;
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto t = matroid_er::detail::split_tokens(line);
    if (!t.empty()) out.push_back({no, std::move(t)});
  }
  return out;
}

inline int parse_int(const std::string& s, std::size_t line) {
  std::size_t pos = 0;
  long v = 0;
  bool ok = true;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    ok = false;
  }
  if (!ok || pos != s.size() || v < INT_MIN || v > INT_MAX)
    throw InputError(line, "expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

inline Rational parse_rational_at(const std::string& s, std::size_t line) {
  try {
    return parse_rational(s);
  } catch (const InputError& e) {
    throw InputError(line, e.what());
  }
}

inline Integer parse_integer_at(const std::string& s, std::size_t line) {
  Rational q = parse_rational_at(s, line);
  if (q.get_den() != 1) throw InputError(line, "expected an integer coefficient, got '" + s + "'");
  return q.get_num();
}

/// `{}` is the empty set; otherwise every token is an element.
inline ElementSet parse_set(const TokenLine& l) {
  if (l.tok.size() == 1 && l.tok[0] == "{}") return {};
  ElementSet s;
  for (const auto& t : l.tok) s.push_back(parse_int(t, l.no));
  return s;
}

inline void write_set(std::ostream& os, const ElementSet& s) {
  if (s.empty()) os << "{}";
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? " " : "") << s[i];
  os << "\n";
}

inline void expect_header(const std::vector<TokenLine>& ls, const std::string& keyword, const std::string& shape) {
  if (ls.empty() || ls[0].tok[0] != keyword)
    throw InputError(ls.empty() ? 1 : ls[0].no, "expected header '" + shape + "'");
}

template <class F>
auto json_guard(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

inline Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InputError("rational must be an integer or a 'p/q' string");
}

}  // namespace detail

/// First meaningful token of a document: "{" for JSON, else the header keyword.
inline std::string detect_kind(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    if (line[start] == '{') return "{";
    auto tok = matroid_er::detail::split_tokens(line);
    return tok.empty() ? "" : tok[0];
  }
  return "";
}

inline json parse_json(const std::string& text) {
  return detail::json_guard([&] { return json::parse(text); });
}

// ---- matroids ----

struct MatroidDoc {
  Matroid matroid;
  std::optional<LineSet> lines;  // set when the input used the line form
};

inline MatroidDoc matroid_from_parts(int n, int r, bool line_form, std::vector<ElementSet> sets) {
  if (line_form) {
    if (r >= 0 && r != 3) throw InputError("line form describes rank-3 matroids only");
    LineSet ls{n, std::move(sets)};
    for (auto& l : ls.lines) l = canonical_set(l);
    return {from_lines(ls), ls};
  }
  if (r < 0) throw InputError("bases form needs r=<int> in the header");
  return {Matroid(n, r, std::move(sets)), std::nullopt};
}

inline MatroidDoc parse_matroid_text(const std::string& text) {
  auto ls = detail::token_lines(text);
  detail::expect_header(ls, "matroid", "matroid n=<int> r=<int>");
  int n = -1, r = -1;
  for (std::size_t i = 1; i < ls[0].tok.size(); ++i) {
    const auto& t = ls[0].tok[i];
    auto eq = t.find('=');
    std::string key = t.substr(0, eq);
    if (eq == std::string::npos || (key != "n" && key != "r"))
      throw InputError(ls[0].no, "unknown header field '" + t + "'");
    (key == "n" ? n : r) = detail::parse_int(t.substr(eq + 1), ls[0].no);
  }
  if (n < 0) throw InputError(ls[0].no, "header needs n=<int>");
  if (ls.size() < 2 || ls[1].tok.size() != 1 || (ls[1].tok[0] != "bases" && ls[1].tok[0] != "lines"))
    throw InputError(ls.size() < 2 ? ls[0].no + 1 : ls[1].no, "expected 'bases' or 'lines'");
  const bool line_form = ls[1].tok[0] == "lines";
  std::vector<ElementSet> sets;
  for (std::size_t i = 2; i < ls.size(); ++i) sets.push_back(detail::parse_set(ls[i]));
  return matroid_from_parts(n, r, line_form, std::move(sets));
}

inline MatroidDoc parse_matroid_json(const json& j) {
  return detail::json_guard([&] {
    if (!j.is_object() || !j.contains("n")) throw InputError("matroid JSON needs field 'n'");
    const int n = j.at("n").get<int>();
    const int r = j.contains("r") ? j.at("r").get<int>() : -1;
    const bool line_form = j.contains("lines");
    if (!line_form && !j.contains("bases")) throw InputError("matroid JSON needs 'bases' or 'lines'");
    auto sets = j.at(line_form ? "lines" : "bases").get<std::vector<ElementSet>>();
    return matroid_from_parts(n, r, line_form, std::move(sets));
  });
}

inline MatroidDoc parse_matroid(const std::string& text) {
  return detect_kind(text) == "{" ? parse_matroid_json(parse_json(text)) : parse_matroid_text(text);
}

inline std::string write_matroid_text(const Matroid& m) {
  std::ostringstream os;
  os << "matroid n=" << m.size() << " r=" << m.rank() << "\nbases\n";
  for (const auto& b : m.bases()) detail::write_set(os, b);
  return os.str();
}

inline std::string write_lines_text(const LineSet& ls) {
  std::ostringstream os;
  os << "matroid n=" << ls.n << " r=3\nlines\n";
  for (const auto& l : ls.lines) detail::write_set(os, l);
  return os.str();
}

inline json matroid_json(const Matroid& m) { return {{"n", m.size()}, {"r", m.rank()}, {"bases", m.bases()}}; }
inline json lines_json(const LineSet& ls) { return {{"n", ls.n}, {"r", 3}, {"lines", ls.lines}}; }

// ---- matrices and point sets ----

inline RationalMatrix parse_matrix_text(const std::string& text) {
  auto ls = detail::token_lines(text);
  detail::expect_header(ls, "matrix", "matrix <rows> <cols>");
  if (ls[0].tok.size() != 3) throw InputError(ls[0].no, "expected 'matrix <rows> <cols>'");
  const int rows = detail::parse_int(ls[0].tok[1], ls[0].no), cols = detail::parse_int(ls[0].tok[2], ls[0].no);
  if (rows < 0 || cols < 0) throw InputError(ls[0].no, "negative matrix dimension");
  if (static_cast<int>(ls.size()) - 1 != rows)
    throw InputError(ls.back().no, "expected " + std::to_string(rows) + " rows, found " + std::to_string(ls.size() - 1));
  std::vector<std::vector<Rational>> out;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    if (static_cast<int>(ls[i].tok.size()) != cols)
      throw InputError(ls[i].no, "expected " + std::to_string(cols) + " entries");
    std::vector<Rational> row;
    for (const auto& t : ls[i].tok) row.push_back(detail::parse_rational_at(t, ls[i].no));
    out.push_back(std::move(row));
  }
  if (rows == 0) return RationalMatrix(0, static_cast<std::size_t>(cols));
  return RationalMatrix::from_rows(out);
}

/// {"rows": r, "cols": c, "entries": [[...], ...]} with integer or "p/q" entries.
inline RationalMatrix parse_matrix_json(const json& j) {
  return detail::json_guard([&] {
    std::vector<std::vector<Rational>> rows;
    for (const auto& r : j.at("entries")) {
      std::vector<Rational> row;
      for (const auto& e : r) row.push_back(detail::rational_from_json(e));
      rows.push_back(std::move(row));
    }
    const auto nr = j.at("rows").get<std::size_t>(), nc = j.at("cols").get<std::size_t>();
    if (rows.size() != nr) throw InputError("row count does not match 'rows'");
    for (const auto& r : rows)
      if (r.size() != nc) throw InputError("row length does not match 'cols'");
    return nr == 0 ? RationalMatrix(0, nc) : RationalMatrix::from_rows(rows);
  });
}

inline std::string write_matrix_text(const RationalMatrix& a) {
  std::ostringstream os;
  os << "matrix " << a.rows() << " " << a.cols() << "\n";
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) os << (j ? " " : "") << a(i, j).get_str();
    os << "\n";
  }
  return os.str();
}

inline json matrix_json(const RationalMatrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(a(i, j).get_str());
    rows.push_back(row);
  }
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"entries", rows}};
}

/// `points <n>` then `x y z [label]` per line.
inline PointConfig parse_points_text(const std::string& text) {
  auto ls = detail::token_lines(text);
  detail::expect_header(ls, "points", "points <n>");
  if (ls[0].tok.size() != 2) throw InputError(ls[0].no, "expected 'points <n>'");
  const int n = detail::parse_int(ls[0].tok[1], ls[0].no);
  if (static_cast<int>(ls.size()) - 1 != n)
    throw InputError(ls.back().no, "expected " + std::to_string(n) + " points, found " + std::to_string(ls.size() - 1));
  PointConfig pc;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto& t = ls[i].tok;
    if (t.size() != 3 && t.size() != 4) throw InputError(ls[i].no, "expected 'x y z [label]'");
    Point3 p{detail::parse_rational_at(t[0], ls[i].no), detail::parse_rational_at(t[1], ls[i].no),
             detail::parse_rational_at(t[2], ls[i].no)};
    if (is_zero(p)) throw InputError(ls[i].no, "the zero vector is not a projective point");
    pc.points.push_back(p);
    pc.labels.push_back(t.size() == 4 ? t[3] : std::to_string(i - 1));
  }
  return pc;
}

inline PointConfig parse_points_json(const json& j) {
  return detail::json_guard([&] {
    PointConfig pc;
    for (const auto& p : j.at("points")) {
      if (p.size() != 3) throw InputError("point needs three coordinates");
      Point3 q{detail::rational_from_json(p[0]), detail::rational_from_json(p[1]), detail::rational_from_json(p[2])};
      if (is_zero(q)) throw InputError("the zero vector is not a projective point");
      pc.points.push_back(q);
    }
    if (j.contains("labels")) pc.labels = j.at("labels").get<std::vector<std::string>>();
    else
      for (std::size_t i = 0; i < pc.points.size(); ++i) pc.labels.push_back(std::to_string(i));
    if (pc.labels.size() != pc.points.size()) throw InputError("label count does not match point count");
    return pc;
  });
}

inline PointConfig parse_points(const std::string& text) {
  return detect_kind(text) == "{" ? parse_points_json(parse_json(text)) : parse_points_text(text);
}

inline std::string write_points_text(const PointConfig& pc) {
  std::ostringstream os;
  os << "points " << pc.size() << "\n";
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const auto& p = pc.points[i];
    os << p[0].get_str() << " " << p[1].get_str() << " " << p[2].get_str();
    if (i < pc.labels.size()) os << " " << pc.labels[i];
    os << "\n";
  }
  return os.str();
}

inline json points_json(const PointConfig& pc) {
  json pts = json::array();
  for (const auto& p : pc.points) pts.push_back({p[0].get_str(), p[1].get_str(), p[2].get_str()});
  return {{"points", pts}, {"labels", pc.labels}};
}

// ---- chirotopes ----

/// `chirotope <n>` then `i j k s` for every sorted triple i < j < k exactly once.
inline Chirotope parse_chirotope_text(const std::string& text) {
  auto ls = detail::token_lines(text);
  detail::expect_header(ls, "chirotope", "chirotope <n>");
  if (ls[0].tok.size() != 2) throw InputError(ls[0].no, "expected 'chirotope <n>'");
  const int n = detail::parse_int(ls[0].tok[1], ls[0].no);
  if (n < 3) throw InputError(ls[0].no, "a chirotope needs at least three elements");
  Chirotope chi(n);
  std::vector<char> seen(static_cast<std::size_t>(n) * n * n, 0);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto& t = ls[i].tok;
    if (t.size() != 4) throw InputError(ls[i].no, "expected 'i j k s'");
    int a = detail::parse_int(t[0], ls[i].no), b = detail::parse_int(t[1], ls[i].no),
        c = detail::parse_int(t[2], ls[i].no), s = detail::parse_int(t[3], ls[i].no);
    if (!(0 <= a && a < b && b < c && c < n)) throw InputError(ls[i].no, "triple must be sorted and in range");
    if (s < -1 || s > 1) throw InputError(ls[i].no, "sign must be -1, 0 or 1");
    auto& mark = seen[(static_cast<std::size_t>(a) * n + b) * n + c];
    if (mark) throw InputError(ls[i].no, "triple listed twice");
    mark = 1;
    chi.set(a, b, c, s);
  }
  std::size_t expected = static_cast<std::size_t>(n) * (n - 1) * (n - 2) / 6;
  if (ls.size() - 1 != expected)
    throw InputError("chirotope lists " + std::to_string(ls.size() - 1) + " triples; all " +
                     std::to_string(expected) + " sorted triples are required");
  return chi;
}

inline std::string write_chirotope_text(const Chirotope& chi) {
  std::ostringstream os;
  os << "chirotope " << chi.size() << "\n";
  const int n = chi.size();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) os << a << " " << b << " " << c << " " << chi(a, b, c) << "\n";
  return os.str();
}

inline json chirotope_json(const Chirotope& chi) {
  json t = json::array();
  const int n = chi.size();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) t.push_back({a, b, c, chi(a, b, c)});
  return {{"n", n}, {"triples", t}};
}

inline Chirotope chirotope_from_json(const json& j) {
  return detail::json_guard([&] {
    std::ostringstream os;
    os << "chirotope " << j.at("n").get<int>() << "\n";
    for (const auto& t : j.at("triples")) os << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
    return parse_chirotope_text(os.str());
  });
}

inline Chirotope parse_chirotope(const std::string& text) {
  return detect_kind(text) == "{" ? chirotope_from_json(parse_json(text)) : parse_chirotope_text(text);
}

// ---- polynomial systems ----

/// One equation p = 0 per `poly <n>` block; each block lists `term <coeff> <e1..en>`.
/// Every block must use the same arity.
inline std::vector<SparsePolynomial> parse_poly_system(const std::string& text) {
  auto ls = detail::token_lines(text);
  detail::expect_header(ls, "poly", "poly <n>");
  std::vector<SparsePolynomial> out;
  int n = -1;
  for (const auto& l : ls) {
    if (l.tok[0] == "poly") {
      if (l.tok.size() != 2) throw InputError(l.no, "expected 'poly <n>'");
      int k = detail::parse_int(l.tok[1], l.no);
      if (k < 0) throw InputError(l.no, "negative arity");
      if (n >= 0 && k != n) throw InputError(l.no, "all polynomials must share one arity");
      n = k;
      out.emplace_back(n);
    } else if (l.tok[0] == "term") {
      if (static_cast<int>(l.tok.size()) != n + 2)
        throw InputError(l.no, "expected 'term <coeff>' and " + std::to_string(n) + " exponents");
      Exponents e;
      for (int i = 0; i < n; ++i) {
        int x = detail::parse_int(l.tok[i + 2], l.no);
        if (x < 0) throw InputError(l.no, "negative exponent");
        e.push_back(x);
      }
      out.back().add_term(e, detail::parse_integer_at(l.tok[1], l.no));
    } else {
      throw InputError(l.no, "unknown keyword '" + l.tok[0] + "'");
    }
  }
  return out;
}

inline std::string write_poly_system(const std::vector<SparsePolynomial>& ps) {
  std::ostringstream os;
  for (const auto& p : ps) {
    os << "poly " << p.arity() << "\n";
    for (const auto& [e, c] : p.terms()) {
      os << "term " << c.get_str();
      for (int x : e) os << " " << x;
      os << "\n";
    }
  }
  return os.str();
}

// ---- constraint systems ----

inline json system_json(const ConstraintSystem& cs) {
  json cons = json::array();
  for (const auto& k : cs.constraints) {
    json args = json::array({cs.vars[k.a]});
    if (k.op == Op::Add || k.op == Op::Mul) {
      args.push_back(cs.vars[k.b]);
      args.push_back(cs.vars[k.c]);
    }
    cons.push_back({{"op", op_keyword(k.op)}, {"args", args}});
  }
  return {{"vars", cs.vars}, {"constraints", cons}, {"distinct", cs.distinct_promise}};
}

inline ConstraintSystem system_from_json(const json& j) {
  return detail::json_guard([&] {
    std::ostringstream os;
    for (const auto& v : j.at("vars")) os << "VAR " << v.get<std::string>() << "\n";
    for (const auto& k : j.at("constraints")) {
      os << k.at("op").get<std::string>();
      for (const auto& a : k.at("args")) os << " " << a.get<std::string>();
      os << "\n";
    }
    if (j.value("distinct", false)) os << "DISTINCT\n";
    return parse_system(os.str());
  });
}

inline ConstraintSystem parse_system_any(const std::string& text) {
  return detect_kind(text) == "{" ? system_from_json(parse_json(text)) : parse_system(text);
}

// ---- registries and traces ----

namespace detail {

inline json registry_json(const CompiledMatroid& cm, const std::vector<GadgetTrace>& traces) {
  json pts = json::array();
  for (const auto& p : cm.points())
    pts.push_back({{"role", role_name(p.role)},
                   {"name", p.name},
                   {"var", p.var},
                   {"gadget", p.gadget},
                   {"freedom", p.freedom}});
  json frames = json::array();
  for (const auto& f : cm.frames()) frames.push_back({f.zero, f.one, f.inf, f.line});
  json tr = json::array();
  for (const auto& t : traces)
    tr.push_back({{"kind", gadget_name(t.kind)},
                  {"constraint", t.constraint},
                  {"frame", t.frame},
                  {"x", t.x},
                  {"y", t.y},
                  {"z", t.z},
                  {"helpers", t.helpers},
                  {"lines", t.lines},
                  {"parent", t.parent},
                  {"args", t.args}});
  return {{"points", pts}, {"lines", cm.lines()}, {"frames", frames}, {"traces", tr}};
}

inline Role role_from_name(const std::string& s) {
  for (Role r : {Role::Zero, Role::One, Role::Inf, Role::Variable, Role::Helper})
    if (s == role_name(r)) return r;
  throw InputError("unknown point role '" + s + "'");
}

inline GadgetKind kind_from_name(const std::string& s) {
  for (GadgetKind k : {GadgetKind::Add, GadgetKind::Mul, GadgetKind::Pos, GadgetKind::Orient})
    if (s == gadget_name(k)) return k;
  throw InputError("unknown gadget kind '" + s + "'");
}

inline std::pair<CompiledMatroid, std::vector<GadgetTrace>> registry_from_json(const json& j) {
  std::vector<PointInfo> pts;
  for (const auto& p : j.at("points"))
    pts.push_back({role_from_name(p.at("role").get<std::string>()), p.at("name").get<std::string>(),
                   p.at("var").get<int>(), p.at("gadget").get<int>(), p.at("freedom").get<std::string>()});
  std::vector<FrameInfo> frames;
  for (const auto& f : j.at("frames")) frames.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>(), f[3].get<int>()});
  auto cm = CompiledMatroid::restore(std::move(pts), j.at("lines").get<std::vector<ElementSet>>(), std::move(frames));
  std::vector<GadgetTrace> traces;
  const int np = static_cast<int>(cm.num_points()), nl = static_cast<int>(cm.num_lines()),
            nf = static_cast<int>(cm.frames().size());
  auto point_ok = [&](int p, bool optional) { return (optional && p == -1) || (p >= 0 && p < np); };
  for (const auto& t : j.at("traces")) {
    GadgetTrace g;
    g.kind = kind_from_name(t.at("kind").get<std::string>());
    g.constraint = t.at("constraint").get<int>();
    g.frame = t.at("frame").get<int>();
    g.x = t.at("x").get<int>();
    g.y = t.at("y").get<int>();
    g.z = t.at("z").get<int>();
    g.helpers = t.at("helpers").get<std::vector<int>>();
    g.lines = t.at("lines").get<std::vector<int>>();
    g.parent = t.at("parent").get<int>();
    g.args = t.at("args").get<std::vector<int>>();
    bool ok = ((g.kind == GadgetKind::Orient && g.frame == -1) || (g.frame >= 0 && g.frame < nf)) && point_ok(g.x, g.kind == GadgetKind::Orient) &&
              point_ok(g.y, true) && point_ok(g.z, true) && g.parent < static_cast<int>(traces.size());
    for (int h : g.helpers) ok = ok && point_ok(h, false);
    for (int l : g.lines) ok = ok && l >= 0 && l < nl;
    if (g.kind == GadgetKind::Orient) {
      ok = ok && g.args.size() == static_cast<std::size_t>(orient_arg::kCount);
      for (int i = 0; ok && i < orient_arg::kSame; ++i) ok = point_ok(g.args[i], false);
    }
    if (!ok) throw InputError("trace record " + std::to_string(traces.size()) + " references ids out of range");
    traces.push_back(std::move(g));
  }
  return {std::move(cm), std::move(traces)};
}

}  // namespace detail

inline json compilation_json(const Compilation& c, const ConstraintSystem& cs) {
  json j = detail::registry_json(c.cm, c.traces);
  j["kind"] = "compilation";
  j["system"] = system_json(cs);
  j["var_point"] = c.var_point;
  j["emitted_arith"] = c.emitted_arith;
  j["emitted_pos"] = c.emitted_pos;
  j["unaliased_vars"] = c.unaliased_vars;
  return j;
}

struct CompilationDoc {
  Compilation compilation;
  ConstraintSystem system;
};

inline CompilationDoc compilation_from_json(const json& j) {
  return detail::json_guard([&] {
    if (j.value("kind", "") != "compilation") throw InputError("not a compilation trace");
    CompilationDoc d;
    d.system = system_from_json(j.at("system"));
    auto [cm, traces] = detail::registry_from_json(j);
    d.compilation.cm = std::move(cm);
    d.compilation.traces = std::move(traces);
    d.compilation.var_point = j.at("var_point").get<std::vector<int>>();
    d.compilation.emitted_arith = j.at("emitted_arith").get<std::size_t>();
    d.compilation.emitted_pos = j.at("emitted_pos").get<std::size_t>();
    d.compilation.unaliased_vars = j.at("unaliased_vars").get<std::size_t>();
    if (d.compilation.var_point.size() != d.system.size()) throw InputError("var_point does not match the system");
    for (int p : d.compilation.var_point)
      if (p < 0 || p >= static_cast<int>(d.compilation.cm.num_points())) throw InputError("var_point out of range");
    return d;
  });
}

inline json simulation_json(const Simulation& s, const Chirotope& chi) {
  json j = detail::registry_json(s.cm, s.traces);
  j["kind"] = "order-type";
  j["chirotope"] = chirotope_json(chi);
  j["element_point"] = s.element_point;
  j["order"] = s.order;
  j["collinear_triples"] = s.collinear_triples;
  j["same_side"] = s.same_side;
  j["opposite_side"] = s.opposite_side;
  j["line_infinities"] = s.line_infinities;
  j["new_lines"] = s.new_lines;
  return j;
}

struct SimulationDoc {
  Simulation simulation;
  Chirotope chirotope;
};

inline SimulationDoc simulation_from_json(const json& j) {
  return detail::json_guard([&] {
    if (j.value("kind", "") != "order-type") throw InputError("not an order-type trace");
    SimulationDoc d;
    d.chirotope = chirotope_from_json(j.at("chirotope"));
    auto [cm, traces] = detail::registry_from_json(j);
    auto& s = d.simulation;
    s.cm = std::move(cm);
    s.traces = std::move(traces);
    s.element_point = j.at("element_point").get<std::vector<int>>();
    s.order = j.at("order").get<std::vector<int>>();
    s.collinear_triples = j.at("collinear_triples").get<std::size_t>();
    s.same_side = j.at("same_side").get<std::size_t>();
    s.opposite_side = j.at("opposite_side").get<std::size_t>();
    s.line_infinities = j.at("line_infinities").get<std::size_t>();
    s.new_lines = j.at("new_lines").get<std::size_t>();
    if (s.element_point.size() != static_cast<std::size_t>(d.chirotope.size()))
      throw InputError("element_point does not match the chirotope");
    for (int p : s.element_point)
      if (p < 0 || p >= static_cast<int>(s.cm.num_points())) throw InputError("element_point out of range");
    return d;
  });
}

}  // namespace matroid_er::io
