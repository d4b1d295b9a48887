#include "antipode/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "antipode/error.hpp"

#ifndef ANTIPODE_VERSION
#define ANTIPODE_VERSION "unknown"
#endif

namespace antipode {

namespace {

using json = nlohmann::ordered_json;

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
  }
}

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::Parse, what); }

const json& member(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) bad(std::string("missing field '") + key + "'");
  return obj.at(key);
}

json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double read_double(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return kInfinity;
    if (s == "-inf" || s == "-infinity") return -kInfinity;
    if (s == "nan") return std::nan("");
    return to_double(parse_rational(s));
  }
  bad("expected a number");
}

Rational read_rational(const json& v) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number()) {
    const double x = v.get<double>();
    if (!std::isfinite(x)) bad("non-finite coordinate");
    return exact_from_double(x);
  }
  if (v.is_string()) return parse_rational(v.get<std::string>());
  bad("expected a number or a rational string");
}

std::size_t read_index(const json& v) {
  if (!v.is_number_integer() || v.get<long long>() < 0) bad("expected a non-negative integer");
  return v.get<std::size_t>();
}

json rational_entry(const Rational& r) {
  const double x = to_double(r);
  if (std::isfinite(x) && exact_from_double(x) == r) return x;
  return to_string(r);
}

json rational_row(const RationalVec& v) {
  json row = json::array();
  for (const auto& r : v) row.push_back(rational_entry(r));
  return row;
}

json double_row(const std::vector<double>& v) {
  json row = json::array();
  for (double x : v) row.push_back(number(x));
  return row;
}

RationalVec read_row(const json& row) {
  if (!row.is_array()) bad("expected an array of coordinates");
  RationalVec out;
  for (const auto& v : row) out.push_back(read_rational(v));
  return out;
}

std::vector<RationalVec> read_rows(const json& rows) {
  if (!rows.is_array()) bad("expected an array of rows");
  std::vector<RationalVec> out;
  for (const auto& row : rows) out.push_back(read_row(row));
  return out;
}

json space_json(const NormSpace& space) {
  json out;
  switch (space.kind()) {
    case SpaceKind::Lp:
      out["kind"] = "lp";
      out["n"] = space.dim();
      if (std::isinf(space.p())) {
        out["p"] = "inf";
      } else {
        out["p"] = space.p();
      }
      break;
    case SpaceKind::PolytopeV: {
      out["kind"] = "polytope_v";
      json rows = json::array();
      for (const auto& g : space.generators()) rows.push_back(rational_row(g));
      out["vertices"] = rows;
      break;
    }
    case SpaceKind::PolytopeF: {
      out["kind"] = "polytope_f";
      json rows = json::array();
      for (const auto& g : space.generators()) rows.push_back(rational_row(g));
      out["facets"] = rows;
      break;
    }
    case SpaceKind::Cylinder:
      out["kind"] = "cylinder";
      out["n"] = space.dim();
      break;
  }
  return out;
}

NormSpace space_of(const json& j) {
  const std::string kind = member(j, "kind").is_string() ? member(j, "kind").get<std::string>() : "";
  if (kind == "lp") {
    return NormSpace::lp(read_index(member(j, "n")), read_double(member(j, "p")));
  }
  if (kind == "polytope_v") return NormSpace::polytope_vertices(read_rows(member(j, "vertices")));
  if (kind == "polytope_f") return NormSpace::polytope_facets(read_rows(member(j, "facets")));
  if (kind == "cylinder") return NormSpace::cylinder(read_index(member(j, "n")));
  bad("unknown space kind '" + kind + "'");
}

json points_json(const PointSet& set) {
  json rows = json::array();
  for (const auto& p : set.exact_points()) rows.push_back(rational_row(p));
  return rows;
}

json manifest_json(const RunManifest& m) {
  json out;
  out["command_line"] = m.command_line;
  json config = json::object();
  for (const auto& [k, v] : m.config) config[k] = v;
  out["config"] = config;
  out["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  out["tool_version"] = m.tool_version;
  out["numeric_mode"] = m.numeric_mode;
  out["timestamp"] = m.timestamp;
  return out;
}

json pair_json(const PairWitness& w) {
  json out;
  out["i"] = w.i;
  out["j"] = w.j;
  out["f"] = w.exact ? rational_row(w.exact->functional) : double_row(w.functional.values());
  out["margin"] = number(w.margin);
  out["upper_bound"] = number(w.upper_bound);
  out["slack"] = number(w.sandwich_slack);
  out["dual_norm"] = number(w.dual_norm_value);
  out["separating"] = w.separating;
  out["converged"] = w.converged;
  out["iterations"] = w.iterations;
  if (w.exact) {
    out["margin_exact"] = to_string(w.exact->margin);
    out["slack_exact"] = to_string(w.exact->sandwich_slack);
    out["dual_norm_exact"] = to_string(w.exact->dual_norm_value);
  }
  return out;
}

PairWitness pair_of(const json& j) {
  PairWitness w;
  w.i = read_index(member(j, "i"));
  w.j = read_index(member(j, "j"));
  const RationalVec f = read_row(member(j, "f"));
  w.functional = Functional(to_doubles(f));
  w.margin = read_double(member(j, "margin"));
  w.upper_bound = j.contains("upper_bound") ? read_double(j.at("upper_bound")) : w.margin;
  w.sandwich_slack = read_double(member(j, "slack"));
  w.dual_norm_value = j.contains("dual_norm") ? read_double(j.at("dual_norm")) : 0.0;
  w.separating = j.contains("separating") ? j.at("separating").get<bool>() : w.margin > 0.0;
  w.converged = j.contains("converged") ? j.at("converged").get<bool>() : true;
  w.iterations = j.contains("iterations") ? read_index(j.at("iterations")) : 0;
  if (j.contains("margin_exact")) {
    ExactPairData e;
    e.functional = f;
    e.margin = read_rational(j.at("margin_exact"));
    e.sandwich_slack = read_rational(member(j, "slack_exact"));
    e.dual_norm_value = read_rational(member(j, "dual_norm_exact"));
    w.exact = std::move(e);
  }
  return w;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string to_text(ConstructionTarget t) { return t == ConstructionTarget::Certify ? "certify" : "separation"; }

}  // namespace

std::string tool_version() { return ANTIPODE_VERSION; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string space_to_json(const NormSpace& space) { return dump(space_json(space)); }

NormSpace space_from_json(std::string_view text) {
  const json j = parse(text);
  return space_of(j.contains("space") && !j.contains("kind") ? j.at("space") : j);
}

std::string points_to_json(const PointSet& set, const RunManifest* manifest) {
  json out;
  out["space"] = space_json(set.space());
  out["points"] = points_json(set);
  if (manifest) out["manifest"] = manifest_json(*manifest);
  return dump(out);
}

std::optional<NormSpace> embedded_space(std::string_view text) {
  const json j = parse(text);
  if (j.is_object() && j.contains("space")) return space_of(j.at("space"));
  return std::nullopt;
}

PointSet points_from_json(std::string_view text, const std::optional<NormSpace>& space, double sphere_tol,
                          bool project) {
  const json j = parse(text);
  const json& rows = j.is_array() ? j : member(j, "points");
  std::optional<NormSpace> s = space;
  if (!s && j.is_object() && j.contains("space")) s = space_of(j.at("space"));
  if (!s) bad("no space given for the points");
  return PointSet(*s, read_rows(rows), sphere_tol, project);
}

std::string certificate_to_json(const Certificate& cert, const RunManifest* manifest) {
  json out;
  out["format"] = "antipode-certificate";
  out["space"] = space_json(cert.points.space());
  out["points"] = points_json(cert.points);
  json pairs = json::array();
  for (const auto& w : cert.witnesses) pairs.push_back(pair_json(w));
  out["pairs"] = pairs;
  out["d"] = number(cert.d);
  if (cert.d_exact) out["d_exact"] = to_string(*cert.d_exact);
  out["classification"] = to_string(cert.classification);
  out["mode"] = to_string(cert.mode);
  out["lower_bound_mode"] = cert.lower_bound_mode;
  json tol;
  tol["sphere"] = cert.tolerances.sphere;
  tol["solver"] = cert.tolerances.solver;
  tol["strict"] = cert.tolerances.strict;
  tol["max_iterations"] = cert.tolerances.max_iterations;
  out["tolerances"] = tol;
  if (manifest) out["manifest"] = manifest_json(*manifest);
  return dump(out);
}

Certificate certificate_from_json(std::string_view text) {
  const json j = parse(text);
  Tolerances tol;
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (t.contains("sphere")) tol.sphere = read_double(t.at("sphere"));
    if (t.contains("solver")) tol.solver = read_double(t.at("solver"));
    if (t.contains("strict")) tol.strict = read_double(t.at("strict"));
    if (t.contains("max_iterations")) tol.max_iterations = read_index(t.at("max_iterations"));
  }
  const NormSpace space = space_of(member(j, "space"));
  PointSet points(space, read_rows(member(j, "points")), std::max(tol.sphere, 1e-9));
  std::vector<PairWitness> witnesses;
  const json& pairs = member(j, "pairs");
  if (!pairs.is_array()) bad("'pairs' must be an array");
  for (const auto& p : pairs) {
    PairWitness w = pair_of(p);
    if (w.i >= points.size() || w.j >= points.size()) bad("pair index out of range");
    witnesses.push_back(std::move(w));
  }
  const json& cls = member(j, "classification");
  const json& mode = member(j, "mode");
  if (!cls.is_string() || !mode.is_string()) bad("classification and mode must be strings");
  NumericMode m;
  if (mode.get<std::string>() == "float") {
    m = NumericMode::Float;
  } else if (mode.get<std::string>() == "rational") {
    m = NumericMode::Rational;
  } else {
    bad("unknown mode '" + mode.get<std::string>() + "'");
  }
  Certificate cert{std::move(points),
                   std::move(witnesses),
                   read_double(member(j, "d")),
                   j.contains("d_exact") ? std::optional<Rational>(read_rational(j.at("d_exact"))) : std::nullopt,
                   parse_classification(cls.get<std::string>()),
                   j.contains("lower_bound_mode") && j.at("lower_bound_mode").get<bool>(),
                   m,
                   tol};
  return cert;
}

std::string construction_to_json(const Construction& c, const RunManifest* manifest) {
  json out;
  out["name"] = c.name;
  out["space"] = space_json(c.points.space());
  out["points"] = points_json(c.points);
  json params = json::object();
  for (const auto& [k, v] : c.params) params[k] = v;
  out["params"] = params;
  json expected;
  expected["target"] = to_text(c.target);
  expected["d"] = number(c.expected_d);
  if (c.expected_d_exact) expected["d_exact"] = to_string(*c.expected_d_exact);
  expected["is_lower_bound"] = c.expected_is_lower_bound;
  if (c.witness_d) expected["witness_d"] = number(*c.witness_d);
  expected["formula"] = c.expected_formula;
  expected["classification"] = to_string(c.expected_class);
  out["expected"] = expected;
  json suggested = json::array();
  for (const auto& s : c.suggested) {
    json w;
    w["i"] = s.i;
    w["j"] = s.j;
    w["f"] = rational_row(s.functional);
    suggested.push_back(w);
  }
  out["suggested_witnesses"] = suggested;
  json prov;
  prov["construction"] = c.name;
  prov["source"] = c.provenance;
  out["provenance"] = prov;
  if (manifest) out["manifest"] = manifest_json(*manifest);
  return dump(out);
}

std::vector<RationalVec> suggested_from_json(std::string_view text) {
  const json j = parse(text);
  std::vector<RationalVec> out;
  if (!j.is_object() || !j.contains("suggested_witnesses")) return out;
  for (const auto& w : j.at("suggested_witnesses")) {
    RationalVec f = read_row(member(w, "f"));
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(std::move(f));
  }
  return out;
}

std::string search_result_to_jsonl(const SearchResult& r, const RunManifest* manifest) {
  json out;
  out["method"] = r.method;
  out["mode"] = search_mode_name(r.required);
  out["pool"] = r.pool_description;
  out["seed"] = r.seed;
  out["iterations"] = r.iterations;
  out["size"] = r.best_set.size();
  out["best_d"] = number(r.best_d);
  out["meets_mode"] = r.meets_required;
  if (!r.indices.empty()) out["indices"] = r.indices;
  if (r.schedule) {
    json s;
    s["initial_temp"] = r.schedule->initial_temp;
    s["decay"] = r.schedule->decay;
    s["steps"] = r.schedule->steps;
    s["initial_step"] = r.schedule->initial_step;
    s["min_step"] = r.schedule->min_step;
    s["penalty_start"] = r.schedule->penalty_start;
    s["penalty_end"] = r.schedule->penalty_end;
    out["schedule"] = s;
  }
  if (!r.best_trace.empty()) out["best_trace"] = double_row(r.best_trace);
  if (r.certificate) {
    out["certificate"] = json::parse(certificate_to_json(*r.certificate));
  } else {
    out["space"] = space_json(r.best_set.space());
    out["points"] = points_json(r.best_set);
  }
  if (manifest) out["manifest"] = manifest_json(*manifest);
  return out.dump();
}

std::string manifest_to_json(const RunManifest& manifest) { return dump(manifest_json(manifest)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Parse, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::InvalidArgument, "write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

void append_line(const std::string& path, const std::string& line) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot append to '" + path + "'");
  out << line << '\n';
}

}  // namespace antipode
