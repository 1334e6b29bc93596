#include "varsel/scenario.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "varsel/duality.hpp"
#include "varsel/interval.hpp"
#include "varsel/oracle.hpp"
#include "varsel/selection.hpp"
#include "varsel/tolerance.hpp"

namespace varsel {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_real(const json& j, const std::string& what) {
  if (!j.is_string())
    throw ScenarioError(what + ": real numbers must be decimal strings");
  const std::string s = j.get<std::string>();
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s.empty()) throw ScenarioError(what + ": empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || std::isnan(v))
    throw ScenarioError(what + ": cannot parse '" + s + "' as a number");
  if (!std::isfinite(v))
    throw ScenarioError(what + ": use \"inf\"/\"-inf\" for infinite values");
  return v;
}

std::vector<double> parse_reals(const json& j, const std::string& what) {
  if (!j.is_array()) throw ScenarioError(what + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_real(j[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

int parse_int(const json& j, const std::string& what) {
  if (!j.is_number_integer())
    throw ScenarioError(what + ": expected an integer");
  return j.get<int>();
}

bool parse_bool(const json& j, const std::string& what) {
  if (!j.is_boolean()) throw ScenarioError(what + ": expected a boolean");
  return j.get<bool>();
}

const json& need(const json& obj, const std::string& key,
                 const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ScenarioError(ctx + ": missing required field '" + key + "'");
  return *it;
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& ctx) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ScenarioError(ctx + ": unknown field '" + it.key() + "'");
  }
}

json num_out(double v) {
  if (v == kInf) return json("inf");
  if (v == -kInf) return json("-inf");
  return json(v);
}

json set_out(const IntervalUnion& u) {
  json arr = json::array();
  for (const Interval& p : u.parts())
    arr.push_back(json::array({num_out(p.lo), num_out(p.hi)}));
  return arr;
}

IntervalUnion parse_set(const json& j, const std::string& what) {
  if (!j.is_array()) throw ScenarioError(what + ": expected [[lo,hi],...]");
  std::vector<Interval> parts;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& p = j[i];
    const std::string ctx = what + "[" + std::to_string(i) + "]";
    if (!p.is_array() || p.size() != 2)
      throw ScenarioError(ctx + ": expected a [lo, hi] pair");
    parts.push_back(
        Interval{parse_real(p[0], ctx + ".lo"), parse_real(p[1], ctx + ".hi")});
  }
  return IntervalUnion(std::move(parts));
}

PLQFunction parse_plq(const json& j, const std::string& what) {
  if (!j.is_object())
    throw ScenarioError(what + ": expected {dom, xbreaks, pieces}");
  check_keys(j, {"dom", "xbreaks", "pieces"}, what);
  const json& dom = need(j, "dom", what);
  if (!dom.is_array() || dom.size() != 2)
    throw ScenarioError(what + ".dom: expected [lo, hi]");
  const double lo = parse_real(dom[0], what + ".dom.lo");
  const double hi = parse_real(dom[1], what + ".dom.hi");
  std::vector<double> breaks;
  if (j.contains("xbreaks")) breaks = parse_reals(j["xbreaks"], what + ".xbreaks");
  const json& pj = need(j, "pieces", what);
  if (!pj.is_array()) throw ScenarioError(what + ".pieces: expected an array");
  std::vector<PLQPiece> pieces;
  for (std::size_t i = 0; i < pj.size(); ++i) {
    const std::string ctx = what + ".pieces[" + std::to_string(i) + "]";
    if (!pj[i].is_array() || pj[i].size() != 3)
      throw ScenarioError(ctx + ": expected [q, s, c]");
    pieces.push_back(PLQPiece{parse_real(pj[i][0], ctx + ".q"),
                              parse_real(pj[i][1], ctx + ".s"),
                              parse_real(pj[i][2], ctx + ".c")});
  }
  return PLQFunction(lo, hi, std::move(breaks), std::move(pieces));
}

json plq_out(const PLQFunction& f) {
  json j;
  j["dom"] = json::array({num_out(f.domain().lo), num_out(f.domain().hi)});
  json br = json::array();
  for (double b : f.breaks()) br.push_back(num_out(b));
  j["xbreaks"] = br;
  json ps = json::array();
  for (const PLQPiece& p : f.pieces())
    ps.push_back(json::array({num_out(p.q), num_out(p.s), num_out(p.c)}));
  j["pieces"] = ps;
  return j;
}

json fn_out(const PiecewiseFunction& f) {
  json j;
  switch (f.mode()) {
    case FunctionMode::ContinuousPWA:
      j["mode"] = "continuous";
      break;
    case FunctionMode::LeftStep:
      j["mode"] = "left_step";
      break;
    case FunctionMode::LeftPWAJumps:
      j["mode"] = "left_pwa";
      break;
  }
  json g = json::array();
  for (double t : f.grid()) g.push_back(num_out(t));
  j["grid"] = g;
  json v = json::array();
  for (double x : f.node_values()) v.push_back(num_out(x));
  j["values"] = v;
  if (f.mode() != FunctionMode::ContinuousPWA) {
    json s = json::array();
    for (double x : f.piece_starts()) s.push_back(num_out(x));
    j["starts"] = s;
  }
  return j;
}

PiecewiseFunction parse_fn(const json& j, const std::string& what) {
  if (!j.is_object()) throw ScenarioError(what + ": expected an object");
  const std::string mode = need(j, "mode", what).get<std::string>();
  if (mode == "continuous") {
    check_keys(j, {"mode", "grid", "values"}, what);
    return PiecewiseFunction::continuous(
        parse_reals(need(j, "grid", what), what + ".grid"),
        parse_reals(need(j, "values", what), what + ".values"));
  }
  if (mode == "left_step") {
    check_keys(j, {"mode", "grid", "piece_values", "value_at_zero"}, what);
    return PiecewiseFunction::left_step(
        parse_reals(need(j, "grid", what), what + ".grid"),
        parse_reals(need(j, "piece_values", what), what + ".piece_values"),
        parse_real(need(j, "value_at_zero", what), what + ".value_at_zero"));
  }
  if (mode == "left_pwa") {
    check_keys(j, {"mode", "grid", "values", "starts"}, what);
    return PiecewiseFunction::left_pwa(
        parse_reals(need(j, "grid", what), what + ".grid"),
        parse_reals(need(j, "values", what), what + ".values"),
        parse_reals(need(j, "starts", what), what + ".starts"));
  }
  throw ScenarioError(what + ".mode: expected continuous|left_step|left_pwa");
}

std::vector<Atom> parse_atoms(const json& j, const std::string& what,
                              bool signed_ok) {
  if (!j.is_array()) throw ScenarioError(what + ": expected an array");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string ctx = what + "[" + std::to_string(i) + "]";
    if (!j[i].is_object()) throw ScenarioError(ctx + ": expected {t, w}");
    check_keys(j[i], {"t", "w"}, ctx);
    const double t = parse_real(need(j[i], "t", ctx), ctx + ".t");
    const double w = parse_real(need(j[i], "w", ctx), ctx + ".w");
    if (w == 0.0) throw ScenarioError(ctx + ": zero-weight atom");
    if (!signed_ok && w < 0.0)
      throw ScenarioError(ctx + ": atom weight must be positive");
    atoms.push_back(Atom{t, w});
  }
  return atoms;
}

Measure parse_measure(const json& j, const std::string& what) {
  check_keys(j, {"grid", "densities", "atoms"}, what);
  std::vector<Atom> atoms;
  if (j.contains("atoms")) atoms = parse_atoms(j["atoms"], what + ".atoms", false);
  Measure m(parse_reals(need(j, "grid", what), what + ".grid"),
            parse_reals(need(j, "densities", what), what + ".densities"),
            std::move(atoms));
  if (!is_strictly_positive(m))
    throw ScenarioError(what +
                        ": base measure must be strictly positive (every "
                        "density piece positive)");
  return m;
}

SignedMeasure parse_signed(const json& j, const std::string& what) {
  check_keys(j, {"grid", "densities", "atoms"}, what);
  std::vector<Atom> atoms;
  if (j.contains("atoms")) atoms = parse_atoms(j["atoms"], what + ".atoms", true);
  return SignedMeasure(parse_reals(need(j, "grid", what), what + ".grid"),
                       parse_reals(need(j, "densities", what), what + ".densities"),
                       std::move(atoms));
}

PiecewiseSetMap parse_setmap(const json& j, const std::string& what) {
  check_keys(j, {"grid", "pieces", "values"}, what);
  std::vector<double> grid = parse_reals(need(j, "grid", what), what + ".grid");
  const json& pj = need(j, "pieces", what);
  if (!pj.is_array()) throw ScenarioError(what + ".pieces: expected an array");
  std::vector<std::vector<AffineComponent>> pieces;
  for (std::size_t k = 0; k < pj.size(); ++k) {
    const std::string pctx = what + ".pieces[" + std::to_string(k) + "]";
    if (!pj[k].is_array()) throw ScenarioError(pctx + ": expected an array");
    std::vector<AffineComponent> comps;
    for (std::size_t c = 0; c < pj[k].size(); ++c) {
      const std::string ctx = pctx + "[" + std::to_string(c) + "]";
      if (!pj[k][c].is_array() || pj[k][c].size() != 4)
        throw ScenarioError(ctx + ": expected [a0, a1, b0, b1]");
      comps.push_back(AffineComponent{parse_real(pj[k][c][0], ctx + ".a0"),
                                      parse_real(pj[k][c][1], ctx + ".a1"),
                                      parse_real(pj[k][c][2], ctx + ".b0"),
                                      parse_real(pj[k][c][3], ctx + ".b1")});
    }
    pieces.push_back(std::move(comps));
  }
  const json& vj = need(j, "values", what);
  if (!vj.is_array()) throw ScenarioError(what + ".values: expected an array");
  std::vector<IntervalUnion> values;
  for (std::size_t i = 0; i < vj.size(); ++i)
    values.push_back(
        parse_set(vj[i], what + ".values[" + std::to_string(i) + "]"));
  return PiecewiseSetMap(std::move(grid), std::move(pieces), std::move(values));
}

NormalIntegrand parse_integrand(const json& j, const std::string& what) {
  check_keys(j, {"tgrid", "piece_plq", "break_plq"}, what);
  std::vector<double> tgrid = parse_reals(need(j, "tgrid", what), what + ".tgrid");
  const json& pj = need(j, "piece_plq", what);
  const json& bj = need(j, "break_plq", what);
  if (!pj.is_array() || !bj.is_array())
    throw ScenarioError(what + ": piece_plq and break_plq must be arrays");
  std::vector<PLQFunction> piece_fns;
  for (std::size_t i = 0; i < pj.size(); ++i)
    piece_fns.push_back(
        parse_plq(pj[i], what + ".piece_plq[" + std::to_string(i) + "]"));
  std::vector<PLQFunction> break_fns;
  for (std::size_t i = 0; i < bj.size(); ++i)
    break_fns.push_back(
        parse_plq(bj[i], what + ".break_plq[" + std::to_string(i) + "]"));
  return NormalIntegrand(std::move(tgrid), std::move(piece_fns),
                         std::move(break_fns));
}

template <typename T>
const T& lookup(const std::map<std::string, T>& table, const std::string& name,
                const std::string& section) {
  auto it = table.find(name);
  if (it == table.end())
    throw ScenarioError("unknown " + section + " '" + name + "'");
  return it->second;
}

std::string need_name(const json& task, const std::string& key,
                      const std::string& ctx) {
  const json& j = need(task, key, ctx);
  if (!j.is_string()) throw ScenarioError(ctx + "." + key + ": expected a name");
  return j.get<std::string>();
}

Topology parse_topology(const json& task, const std::string& ctx) {
  auto it = task.find("topology");
  if (it == task.end()) return Topology::Standard;
  const std::string s = it->get<std::string>();
  if (s == "standard") return Topology::Standard;
  if (s == "left") return Topology::Left;
  throw ScenarioError(ctx + ".topology: expected standard|left");
}

Measure measure_or_lebesgue(const Scenario& sc, const json& task,
                            const std::string& ctx, json& inputs) {
  auto it = task.find("measure");
  if (it == task.end()) return Measure::lebesgue();
  const std::string name = need_name(task, "measure", ctx);
  inputs["measure"] = name;
  return lookup(sc.measures, name, "measure");
}

const char* witness_kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::InnerLimitMiss:
      return "inner-limit-miss";
    case WitnessKind::OuterLimitEscape:
      return "outer-limit-escape";
    case WitnessKind::MeasureLimitEscape:
      return "measure-limit-escape";
    case WitnessKind::NotSolid:
      return "not-solid";
    case WitnessKind::DensityEscape:
      return "density-escape";
  }
  return "unknown";
}

json witnesses_out(const std::vector<Witness>& ws) {
  json arr = json::array();
  for (const Witness& w : ws) {
    json j;
    j["t"] = num_out(w.t);
    j["x"] = num_out(w.x);
    j["kind"] = witness_kind_name(w.kind);
    j["violation"] = num_out(w.violation);
    arr.push_back(j);
  }
  return arr;
}

json borel_out(const BorelSet& s) {
  json arr = json::array();
  for (const SetPiece& p : s) {
    json j;
    j["lo"] = num_out(p.lo);
    j["hi"] = num_out(p.hi);
    j["lo_closed"] = p.lo_closed;
    j["hi_closed"] = p.hi_closed;
    arr.push_back(j);
  }
  return arr;
}

const char* selection_class_name(SelectionClass k) {
  switch (k) {
    case SelectionClass::Selection:
      return "selection";
    case SelectionClass::EssentialOnly:
      return "essential-only";
    case SelectionClass::NotEssential:
      return "not-essential";
  }
  return "unknown";
}

const PLQFunction conjugate_operand(const Scenario& sc, const json& task,
                                    const std::string& ctx, json& inputs) {
  if (task.contains("plq")) {
    const std::string name = need_name(task, "plq", ctx);
    inputs["plq"] = name;
    return lookup(sc.plqs, name, "plq");
  }
  if (task.contains("integrand")) {
    const std::string name = need_name(task, "integrand", ctx);
    inputs["integrand"] = name;
    const double t = parse_real(need(task, "t", ctx), ctx + ".t");
    return lookup(sc.integrands, name, "integrand").at(t);
  }
  throw ScenarioError(ctx + ": name a 'plq' or an 'integrand' plus 't'");
}

void run_limits(const Scenario& sc, const json& task, const std::string& ctx,
                json& report) {
  const std::string name = need_name(task, "map", ctx);
  report["inputs"]["map"] = name;
  const PiecewiseSetMap& map = lookup(sc.setmaps, name, "setmap");
  const Measure mu = measure_or_lebesgue(sc, task, ctx, report["inputs"]);
  const Topology top = parse_topology(task, ctx);
  std::vector<double> points;
  if (task.contains("t")) {
    points.push_back(parse_real(task["t"], ctx + ".t"));
  } else {
    points = map.grid();
  }
  json out = json::array();
  for (double t : points) {
    json row;
    row["t"] = num_out(t);
    row["value"] = set_out(map.value_at(t));
    row["li"] = set_out(inner_limit(map, t, top));
    row["ls"] = set_out(outer_limit(map, t, top));
    row["mli"] = set_out(mu_inner_limit(map, t, mu, top));
    out.push_back(row);
  }
  report["values"]["points"] = out;
  report["paper_anchor"] = "one-sided set limits of piecewise maps";
}

void run_check(const Scenario& sc, const json& task, const std::string& ctx,
               json& report) {
  const std::string name = need_name(task, "map", ctx);
  report["inputs"]["map"] = name;
  const PiecewiseSetMap& map = lookup(sc.setmaps, name, "setmap");
  const Topology top = parse_topology(task, ctx);
  const std::string kind = need_name(task, "kind", ctx);
  RegularityReport rr;
  if (kind == "isc") {
    rr = is_inner_semicontinuous(map, top);
    report["paper_anchor"] = "inner semicontinuity at grid points";
  } else if (kind == "osc") {
    rr = is_outer_semicontinuous(map, top);
    report["paper_anchor"] = "outer semicontinuity at grid points";
  } else if (kind == "outer-regular") {
    const Measure mu = measure_or_lebesgue(sc, task, ctx, report["inputs"]);
    rr = is_outer_mu_regular(map, mu, top);
    report["paper_anchor"] =
        "measure inner limit contained in the closed value";
  } else if (kind == "fully-lsc") {
    if (top != Topology::Standard)
      throw ScenarioError(ctx +
                          ": full lower semicontinuity is checked in the "
                          "standard topology only");
    rr = is_fully_lsc(map);
    report["paper_anchor"] =
        "solid inner semicontinuity with dense inclusion";
  } else {
    throw ScenarioError(ctx +
                        ".kind: expected isc|osc|outer-regular|fully-lsc");
  }
  report["verdicts"][kind] = rr.verdict;
  report["witnesses"] = witnesses_out(rr.violations);
}

void run_selection(const Scenario& sc, const json& task,
                   const std::string& ctx, json& report) {
  const std::string name = need_name(task, "map", ctx);
  report["inputs"]["map"] = name;
  const PiecewiseSetMap& map = lookup(sc.setmaps, name, "setmap");
  const Measure mu = measure_or_lebesgue(sc, task, ctx, report["inputs"]);

  if (task.contains("michael")) {
    const int n = parse_int(task["michael"], ctx + ".michael");
    MichaelFamily fam = michael_representation(map, n);
    json sel = json::array();
    for (const PiecewiseFunction& f : fam.selections) sel.push_back(fn_out(f));
    report["values"]["selections"] = sel;
    report["values"]["covering_distance"] = num_out(fam.covering_distance);
    report["paper_anchor"] =
        "families of continuous selections covering the tube";
    return;
  }

  if (task.contains("counterexample")) {
    if (!parse_bool(task["counterexample"], ctx + ".counterexample"))
      throw ScenarioError(ctx + ".counterexample: expected true");
    const Topology top = parse_topology(task, ctx);
    std::optional<PiecewiseFunction> y =
        essential_selection_counterexample(map, mu, top);
    report["verdicts"]["found"] = y.has_value();
    if (y) {
      SelectionReport sr = check_essential_selection(map, *y, mu);
      report["values"]["function"] = fn_out(*y);
      report["verdicts"]["classification"] = selection_class_name(sr.kind);
      report["values"]["violation_measure"] = num_out(sr.violation_measure);
      report["witnesses"] = borel_out(sr.violation);
    }
    report["paper_anchor"] =
        "essential selection escaping the value at a point";
    return;
  }

  std::optional<Anchor> anchor;
  if (task.contains("anchor")) {
    const json& a = task["anchor"];
    if (!a.is_object()) throw ScenarioError(ctx + ".anchor: expected {t, x}");
    check_keys(a, {"t", "x"}, ctx + ".anchor");
    anchor = Anchor{parse_real(need(a, "t", ctx), ctx + ".anchor.t"),
                    parse_real(need(a, "x", ctx), ctx + ".anchor.x")};
  }
  PiecewiseFunction y = continuous_selection(map, anchor);
  SelectionReport sr = check_essential_selection(map, y, mu);
  report["values"]["function"] = fn_out(y);
  report["verdicts"]["classification"] = selection_class_name(sr.kind);
  report["values"]["violation_measure"] = num_out(sr.violation_measure);
  report["witnesses"] = borel_out(sr.violation);
  report["paper_anchor"] = "continuous selections of convex tubes";
}

void run_conjugate(const Scenario& sc, const json& task,
                   const std::string& ctx, json& report) {
  const PLQFunction f = conjugate_operand(sc, task, ctx, report["inputs"]);
  const PLQFunction fstar = conjugate(f);
  report["values"]["conjugate"] = plq_out(fstar);
  const bool roundtrip = plq_equal(conjugate(fstar), f, set_tol());
  report["verdicts"]["consistent"] = roundtrip;
  report["paper_anchor"] =
      "exact conjugation on the piecewise linear-quadratic class";
}

void run_recession(const Scenario& sc, const json& task,
                   const std::string& ctx, json& report) {
  const PLQFunction f = conjugate_operand(sc, task, ctx, report["inputs"]);
  report["values"]["recession"] = plq_out(recession(f));
  report["paper_anchor"] =
      "recession slopes of a piecewise linear-quadratic function";
}

void run_eval_ih(const Scenario& sc, const json& task, const std::string& ctx,
                 json& report) {
  const std::string hname = need_name(task, "integrand", ctx);
  const std::string yname = need_name(task, "function", ctx);
  report["inputs"]["integrand"] = hname;
  report["inputs"]["function"] = yname;
  const NormalIntegrand& h = lookup(sc.integrands, hname, "integrand");
  const PiecewiseFunction& y = lookup(sc.functions, yname, "function");
  const Measure mu = measure_or_lebesgue(sc, task, ctx, report["inputs"]);
  report["values"]["value"] = num_out(eval_Ih(h, y, mu));
  MembershipReport mr = int_dom_Ih_membership(h, y, mu);
  report["verdicts"]["inside_domain_interior"] = mr.inside;
  report["values"]["feasible_radius"] = num_out(mr.radius);
  report["paper_anchor"] = "integral functional of a convex normal integrand";
}

void run_duality(const Scenario& sc, const json& task, const std::string& ctx,
                 json& report) {
  const std::string hname = need_name(task, "integrand", ctx);
  const std::string tname = need_name(task, "theta", ctx);
  report["inputs"]["integrand"] = hname;
  report["inputs"]["theta"] = tname;
  const NormalIntegrand& h = lookup(sc.integrands, hname, "integrand");
  const SignedMeasure& theta = lookup(sc.signed_measures, tname, "signed measure");
  const Measure mu = measure_or_lebesgue(sc, task, ctx, report["inputs"]);
  int levels = 8;
  if (task.contains("levels")) levels = parse_int(task["levels"], ctx + ".levels");
  DualityReport dr = duality_report(h, theta, mu, levels);
  report["values"]["J"] = num_out(dr.J);
  json est = json::array();
  for (double e : dr.estimates) est.push_back(num_out(e));
  report["values"]["estimates"] = est;
  report["values"]["gap"] = num_out(dr.gap);
  report["values"]["levels"] = levels;
  report["verdicts"]["regular"] = dr.regular;
  report["verdicts"]["consistent"] = dr.consistent;
  report["paper_anchor"] =
      "conjugate of the integral functional versus its dual value";
}

void run_bv_duality(const Scenario& sc, const json& task,
                    const std::string& ctx, json& report) {
  const std::string hname = need_name(task, "integrand", ctx);
  const std::string tname = need_name(task, "theta", ctx);
  report["inputs"]["integrand"] = hname;
  report["inputs"]["theta"] = tname;
  const NormalIntegrand& h = lookup(sc.integrands, hname, "integrand");
  const SignedMeasure& theta = lookup(sc.signed_measures, tname, "signed measure");
  const Measure mu = measure_or_lebesgue(sc, task, ctx, report["inputs"]);
  int levels = 6;
  if (task.contains("levels")) levels = parse_int(task["levels"], ctx + ".levels");
  BVDualityReport br = bv_duality(h, theta, mu, levels);
  report["values"]["exact_sup"] = num_out(br.exact_sup);
  report["values"]["J"] = num_out(br.J);
  json est = json::array();
  for (double e : br.estimates) est.push_back(num_out(e));
  report["values"]["estimates"] = est;
  report["values"]["gap"] = num_out(br.gap);
  report["values"]["levels"] = levels;
  report["verdicts"]["left_regular"] = br.left_regular;
  report["verdicts"]["consistent"] = br.consistent;
  report["paper_anchor"] =
      "supremum over left-continuous functions of bounded variation";
}

void run_oracle(const Scenario& sc, const json& task, const std::string& ctx,
                json& report) {
  const std::string name = need_name(task, "map", ctx);
  report["inputs"]["map"] = name;
  const PiecewiseSetMap& map = lookup(sc.setmaps, name, "setmap");
  const Measure mu = measure_or_lebesgue(sc, task, ctx, report["inputs"]);
  const Topology top = parse_topology(task, ctx);
  const std::string kind = need_name(task, "kind", ctx);
  if (kind != "li" && kind != "ls" && kind != "mli")
    throw ScenarioError(ctx + ".kind: expected li|ls|mli");

  OracleParams params;
  double step = 1.0 / 4096.0;
  if (task.contains("step")) step = parse_real(task["step"], ctx + ".step");
  if (task.contains("depth")) params.depth = parse_int(task["depth"], ctx + ".depth");
  bool compare = false;
  if (task.contains("compare"))
    compare = parse_bool(task["compare"], ctx + ".compare");

  const SampledMap s = sample_map(map, step);
  params.step = s.step;

  std::vector<double> points;
  if (task.contains("t")) {
    points.push_back(parse_real(task["t"], ctx + ".t"));
  } else {
    points = map.grid();
  }

  bool all_within = true;
  json out = json::array();
  for (double t : points) {
    json row;
    row["t"] = num_out(t);
    IntervalUnion approx;
    IntervalUnion exact;
    if (kind == "li") {
      approx = oracle_limits(s, t, LimitKind::Inner, top, params);
      exact = inner_limit(map, t, top);
    } else if (kind == "ls") {
      approx = oracle_limits(s, t, LimitKind::Outer, top, params);
      exact = outer_limit(map, t, top);
    } else {
      approx = oracle_mli(s, t, mu, top, params);
      exact = mu_inner_limit(map, t, mu, top);
    }
    row["set"] = set_out(approx);
    row["step"] = num_out(s.step);
    if (compare) {
      const double hd = hausdorff(approx, exact);
      row["exact"] = set_out(exact);
      row["hausdorff"] = num_out(hd);
      if (!(hd <= 2.0 * s.step + 1e-12)) all_within = false;
    }
    out.push_back(row);
  }
  report["values"]["points"] = out;
  if (compare) report["verdicts"]["consistent"] = all_within;
  report["paper_anchor"] = "grid-sampled definitional cross-check";
}

}  // namespace

Scenario parse_scenario(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ScenarioError("scenario: expected a JSON object");
  check_keys(doc,
             {"version", "notes", "measures", "signed_measures", "setmaps",
              "integrands", "plqs", "functions", "tasks"},
             "scenario");
  const json& ver = need(doc, "version", "scenario");
  if (!ver.is_number_integer() || ver.get<int>() != 1)
    throw ScenarioError("scenario.version: expected the integer 1");

  Scenario sc;
  auto section = [&](const char* key) -> json {
    auto it = doc.find(key);
    if (it == doc.end()) return json::object();
    if (!it->is_object())
      throw ScenarioError(std::string("scenario.") + key +
                          ": expected an object of named entries");
    return *it;
  };

  try {
    const json ms = section("measures");
    for (const auto& [name, j] : ms.items())
      sc.measures.emplace(name, parse_measure(j, "measures." + name));
    const json sm = section("signed_measures");
    for (const auto& [name, j] : sm.items())
      sc.signed_measures.emplace(name, parse_signed(j, "signed_measures." + name));
    const json maps = section("setmaps");
    for (const auto& [name, j] : maps.items())
      sc.setmaps.emplace(name, parse_setmap(j, "setmaps." + name));
    const json igs = section("integrands");
    for (const auto& [name, j] : igs.items())
      sc.integrands.emplace(name, parse_integrand(j, "integrands." + name));
    const json ps = section("plqs");
    for (const auto& [name, j] : ps.items())
      sc.plqs.emplace(name, parse_plq(j, "plqs." + name));
    const json fs = section("functions");
    for (const auto& [name, j] : fs.items())
      sc.functions.emplace(name, parse_fn(j, "functions." + name));
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }

  if (doc.contains("tasks")) {
    const json& tj = doc["tasks"];
    if (!tj.is_array()) throw ScenarioError("scenario.tasks: expected an array");
    for (const json& t : tj) sc.tasks.push_back(t);
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ScenarioError("scenario '" + path + "': " + e.what());
  }
  return parse_scenario(doc);
}

nlohmann::json run_task(const Scenario& sc, const nlohmann::json& task,
                        int index) {
  const std::string ctx = "task[" + std::to_string(index) + "]";
  if (!task.is_object()) throw ScenarioError(ctx + ": expected an object");
  check_keys(task,
             {"command", "notes", "map", "measure", "theta", "integrand",
              "function", "plq", "kind", "topology", "t", "anchor", "michael",
              "counterexample", "levels", "step", "depth", "compare"},
             ctx);
  const std::string cmd = need_name(task, "command", ctx);

  json report;
  report["task"] = task;
  report["task"]["index"] = index;
  report["inputs"] = json::object();
  report["verdicts"] = json::object();
  report["witnesses"] = json::array();
  report["values"] = json::object();
  report["paper_anchor"] = "";

  try {
    if (cmd == "limits")
      run_limits(sc, task, ctx, report);
    else if (cmd == "check")
      run_check(sc, task, ctx, report);
    else if (cmd == "selection")
      run_selection(sc, task, ctx, report);
    else if (cmd == "conjugate")
      run_conjugate(sc, task, ctx, report);
    else if (cmd == "recession")
      run_recession(sc, task, ctx, report);
    else if (cmd == "eval-ih")
      run_eval_ih(sc, task, ctx, report);
    else if (cmd == "duality")
      run_duality(sc, task, ctx, report);
    else if (cmd == "bv-duality")
      run_bv_duality(sc, task, ctx, report);
    else if (cmd == "oracle")
      run_oracle(sc, task, ctx, report);
    else
      throw ScenarioError(ctx + ": unknown command '" + cmd + "'");
  } catch (const ScenarioError&) {
    throw;
  } catch (const InconsistencyError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(ctx + " (" + cmd + "): " + e.what());
  } catch (const std::logic_error& e) {
    throw InconsistencyError(ctx + " (" + cmd + "): " + e.what());
  } catch (const std::exception& e) {
    throw ScenarioError(ctx + " (" + cmd + "): " + e.what());
  }
  return report;
}

nlohmann::json run_all(const Scenario& sc) {
  nlohmann::json out;
  out["reports"] = nlohmann::json::array();
  for (std::size_t i = 0; i < sc.tasks.size(); ++i)
    out["reports"].push_back(run_task(sc, sc.tasks[i], static_cast<int>(i)));
  return out;
}

bool reports_consistent(const nlohmann::json& report_or_list) {
  if (report_or_list.is_array()) {
    for (const auto& r : report_or_list)
      if (!reports_consistent(r)) return false;
    return true;
  }
  if (!report_or_list.is_object()) return true;
  if (report_or_list.contains("reports"))
    return reports_consistent(report_or_list["reports"]);
  auto it = report_or_list.find("verdicts");
  if (it == report_or_list.end() || !it->is_object()) return true;
  auto c = it->find("consistent");
  if (c != it->end() && c->is_boolean() && !c->get<bool>()) return false;
  return true;
}

}  // namespace varsel
