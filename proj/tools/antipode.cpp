// antipode: command-line front end.
//
// Exit codes: 0 success / classification meets --mode, 1 classification
// below --mode, 2 parse or validation error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "antipode/bmdist.hpp"
#include "antipode/certify.hpp"
#include "antipode/constructions.hpp"
#include "antipode/error.hpp"
#include "antipode/io.hpp"
#include "antipode/search.hpp"

namespace {

using namespace antipode;
using json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kBelowMode = 1;
constexpr int kInvalid = 2;

struct Globals {
  std::string mode = "hadwiger";
  std::optional<double> tol;
  std::optional<double> strict_tol;
  std::optional<double> sphere_tol;
  bool rational = false;
  bool float_mode = false;
  std::uint64_t seed = 0;
  std::string out;
  bool project = false;
  std::string command_line;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(12);
  s << x;
  return s.str();
}

Classification required(const Globals& g) { return parse_search_mode(g.mode); }

CertifyOptions options_of(const Globals& g) {
  CertifyOptions o;
  if (g.tol) o.tol.solver = *g.tol;
  if (g.strict_tol) o.tol.strict = *g.strict_tol;
  if (g.sphere_tol) o.tol.sphere = *g.sphere_tol;
  if (g.rational && g.float_mode) fail(ErrorKind::InvalidArgument, "--rational and --float are exclusive");
  if (g.rational) o.mode = NumericMode::Rational;
  if (g.float_mode) o.mode = NumericMode::Float;
  return o;
}

RunManifest manifest(const Globals& g, std::vector<std::pair<std::string, std::string>> config,
                     const std::string& numeric_mode, std::optional<std::uint64_t> seed = std::nullopt) {
  RunManifest m;
  m.command_line = g.command_line;
  config.insert(config.begin(), {"mode", g.mode});
  const CertifyOptions o = options_of(g);
  config.emplace_back("tol", fmt(o.tol.solver));
  config.emplace_back("strict_tol", fmt(o.tol.strict));
  config.emplace_back("sphere_tol", fmt(o.tol.sphere));
  config.emplace_back("project", g.project ? "true" : "false");
  m.config = std::move(config);
  m.seed = seed;
  m.tool_version = tool_version();
  m.numeric_mode = numeric_mode;
  m.timestamp = utc_timestamp();
  return m;
}

void emit(const Globals& g, const std::string& content) {
  if (g.out.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
  } else {
    write_text_file_atomic(g.out, content);
  }
}

/// A file path, or inline JSON starting with '{'.
std::string load_json_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return arg;
  return read_text_file(arg);
}

std::optional<NormSpace> load_space(const std::string& arg) {
  if (arg.empty()) return std::nullopt;
  return space_from_json(load_json_arg(arg));
}

PointSet load_points(const Globals& g, const std::string& points_arg, const std::string& space_arg) {
  const CertifyOptions o = options_of(g);
  return points_from_json(load_json_arg(points_arg), load_space(space_arg), o.tol.sphere, g.project);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json number(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : "-inf";
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) out.push_back(to_double(parse_rational(item)));
  return out;
}

RationalVec parse_exact_list(const std::string& text) {
  RationalVec out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) out.push_back(parse_rational(item));
  return out;
}

// ---------------------------------------------------------------- construct

struct ConstructArgs {
  std::string name;
  std::optional<std::size_t> n;
  std::optional<std::string> p;
  std::optional<double> beta;
  std::optional<double> delta;
  std::optional<std::size_t> max_count;
  std::string space;
};

ConstructionParams construction_params(const Globals& g, const ConstructArgs& a) {
  ConstructionParams params;
  params.n = a.n;
  if (a.p) {
    params.p = (*a.p == "inf" || *a.p == "infinity") ? kInfinity : to_double(parse_rational(*a.p));
  }
  params.beta = a.beta;
  params.delta = a.delta;
  params.max_count = a.max_count;
  params.seed = g.seed;
  params.space = load_space(a.space);
  return params;
}

int cmd_construct(const Globals& g, const ConstructArgs& a) {
  const Construction c = make_construction(a.name, construction_params(g, a));
  std::vector<std::pair<std::string, std::string>> config{{"construction", c.name}};
  for (const auto& kv : c.params) config.push_back(kv);
  const RunManifest m = manifest(g, config, "n/a", g.seed);
  const std::string payload = construction_to_json(c, &m);
  if (g.out.empty()) {
    std::cout << payload;
  } else {
    const std::filesystem::path dir(g.out);
    write_text_file_atomic((dir / "space.json").string(), space_to_json(c.points.space()));
    write_text_file_atomic((dir / "points.json").string(), payload);
  }
  std::cerr << c.name << ": " << c.points.size() << " points in " << c.points.space().describe() << "\n";
  return kOk;
}

// ---------------------------------------------------------------- certify

int cmd_certify(const Globals& g, const std::string& points, const std::string& space, bool suggested,
                const std::string& witness_file) {
  const PointSet set = load_points(g, points, space);
  const CertifyOptions o = options_of(g);
  std::optional<Certificate> cert;
  if (suggested || !witness_file.empty()) {
    std::vector<RationalVec> pool = suggested_from_json(load_json_arg(witness_file.empty() ? points : witness_file));
    if (pool.empty()) fail(ErrorKind::Parse, "no suggested witnesses found");
    cert = certify_with_witnesses(set, pool, o);
  } else {
    cert = certify_set(set, o);
  }
  const RunManifest m = manifest(g, {{"points", points}, {"space", space}}, to_string(cert->mode));
  emit(g, certificate_to_json(*cert, &m));
  std::cerr << "d = " << fmt(cert->d);
  if (cert->d_exact) std::cerr << " (" << to_string(*cert->d_exact) << ")";
  std::cerr << ", " << to_string(cert->classification) << ", " << set.size() << " points\n";
  return meets(cert->classification, required(g)) ? kOk : kBelowMode;
}

// ---------------------------------------------------------------- verify-witness

int cmd_verify(const Globals& g, const std::string& points, const std::string& space, std::size_t i, std::size_t j,
               const std::string& f_text) {
  const PointSet set = load_points(g, points, space);
  const CertifyOptions o = options_of(g);
  const PairWitness w = resolve_mode(set.space(), o) == NumericMode::Rational
                            ? verify_witness(set, i, j, parse_exact_list(f_text), o)
                            : verify_witness(set, i, j, Functional(parse_list(f_text)), o);
  json out;
  out["i"] = w.i;
  out["j"] = w.j;
  out["margin"] = number(w.margin);
  out["slack"] = number(w.sandwich_slack);
  out["dual_norm"] = number(w.dual_norm_value);
  out["separating"] = w.separating;
  if (w.exact) {
    out["margin_exact"] = to_string(w.exact->margin);
    out["slack_exact"] = to_string(w.exact->sandwich_slack);
  }
  const Classification c =
      w.exact ? classify_exact(w.exact->margin, w.separating) : classify(w.margin, w.separating, o.tol);
  out["classification"] = to_string(c);
  emit(g, dump(out));
  return meets(c, required(g)) ? kOk : kBelowMode;
}

// ---------------------------------------------------------------- separation

int cmd_separation(const Globals& g, const std::string& points, const std::string& space) {
  const PointSet set = load_points(g, points, space);
  const SeparationReport r = separation_matrix(set, options_of(g));
  emit(g, separation_csv(r));
  std::cerr << "min distance = " << fmt(r.min_distance);
  if (r.min_distance_exact) std::cerr << " (" << to_string(*r.min_distance_exact) << ")";
  std::cerr << "\n";
  bool ok = false;
  switch (required(g)) {
    case Classification::StrictHadwiger:
      ok = r.strictly_separated;
      break;
    case Classification::Hadwiger:
      ok = r.one_separated;
      break;
    default:
      ok = r.min_distance > 0.0;
      break;
  }
  return ok ? kOk : kBelowMode;
}

// ---------------------------------------------------------------- search

struct SearchArgs {
  std::string method;
  std::string space;
  std::string pool;
  std::string base;
  std::size_t k = 0;
  std::size_t restarts = 1;
  std::optional<std::size_t> steps;
  std::string log = "search_log.jsonl";
  ConstructArgs construct;
};

PointSet load_pool(const Globals& g, const SearchArgs& a, const std::string& arg) {
  const auto names = construction_names();
  if (!std::filesystem::exists(arg) && std::find(names.begin(), names.end(), arg) != names.end()) {
    ConstructArgs c = a.construct;
    c.name = arg;
    return make_construction(arg, construction_params(g, c)).points;
  }
  return load_points(g, arg, a.space);
}

int cmd_search(const Globals& g, const SearchArgs& a) {
  const CertifyOptions o = options_of(g);
  const Classification need = required(g);
  std::optional<SearchResult> r;
  std::vector<std::pair<std::string, std::string>> config{{"method", a.method}};
  if (a.method == "exact") {
    if (a.pool.empty()) fail(ErrorKind::InvalidArgument, "search exact needs --pool");
    const PointSet pool = load_pool(g, a, a.pool);
    r = exact_max_subset(pool, need, o);
    config.emplace_back("pool", a.pool);
  } else if (a.method == "greedy") {
    if (a.pool.empty() || a.base.empty()) fail(ErrorKind::InvalidArgument, "search greedy needs --base and --pool");
    const PointSet pool = load_pool(g, a, a.pool);
    const PointSet base = load_points(g, a.base, a.space.empty() ? "" : a.space);
    r = greedy_extend(base, pool, need, o);
    config.emplace_back("pool", a.pool);
    config.emplace_back("base", a.base);
  } else if (a.method == "anneal") {
    const auto space = load_space(a.space);
    if (!space) fail(ErrorKind::InvalidArgument, "search anneal needs --space");
    if (a.k < 2) fail(ErrorKind::InvalidArgument, "search anneal needs --k >= 2");
    AnnealSchedule schedule;
    if (a.steps) schedule.steps = *a.steps;
    r = a.restarts > 1 ? anneal_restarts(*space, a.k, need, g.seed, a.restarts, schedule, o)
                       : anneal_placement(*space, a.k, need, g.seed, schedule, o);
    config.emplace_back("space", a.space);
    config.emplace_back("k", std::to_string(a.k));
    config.emplace_back("restarts", std::to_string(a.restarts));
  } else {
    fail(ErrorKind::InvalidArgument, "unknown search method '" + a.method + "'");
  }
  const std::string numeric =
      r->certificate ? to_string(r->certificate->mode) : to_string(resolve_mode(r->best_set.space(), o));
  const RunManifest m = manifest(g, config, numeric, g.seed);
  if (!a.log.empty()) append_line(a.log, search_result_to_jsonl(*r, &m));
  if (!g.out.empty() && r->certificate) write_text_file_atomic(g.out, certificate_to_json(*r->certificate, &m));
  std::cout << r->method << ": " << r->best_set.size() << " points, d = " << fmt(r->best_d) << ", "
            << (r->certificate ? to_string(r->certificate->classification) : std::string("single point")) << "\n";
  return r->meets_required ? kOk : kBelowMode;
}

// ---------------------------------------------------------------- bm

int cmd_bm_inclusion(const Globals& g, const std::string& inner, const std::string& outer) {
  const auto in = load_space(inner);
  const auto out_space = load_space(outer);
  if (!in || !out_space) fail(ErrorKind::InvalidArgument, "bm inclusion needs --inner and --outer");
  const InclusionResult r = polytope_inclusion_scale(*in, *out_space);
  json out;
  out["alpha"] = r.alpha;
  if (r.alpha_exact) out["alpha_exact"] = to_string(*r.alpha_exact);
  out["bm_upper"] = r.bm_upper;
  if (r.bm_upper_exact) out["bm_upper_exact"] = to_string(*r.bm_upper_exact);
  out["contact"] = r.contact;
  emit(g, dump(out));
  return kOk;
}

int cmd_bm_from_cert(const Globals& g, const std::string& cert_file) {
  const Certificate cert = certificate_from_json(read_text_file(cert_file));
  const BmBound b = bm_bound_from_certificate(cert);
  json out;
  out["d"] = number(cert.d);
  out["bound"] = b.bound;
  if (b.bound_exact) out["bound_exact"] = to_string(*b.bound_exact);
  out["hypercube_case"] = b.hypercube_case;
  out["note"] = b.note;
  emit(g, dump(out));
  return kOk;
}

int cmd_bm_cylinder(const Globals& g, const std::string& vertices_arg) {
  std::vector<Vector> vertices = petty_dual_octahedron();
  if (!vertices_arg.empty()) {
    const json j = json::parse(load_json_arg(vertices_arg));
    const json& rows = j.is_array() ? j : j.at("points");
    vertices.clear();
    for (const auto& row : rows) {
      Vector v(row.size());
      for (std::size_t k = 0; k < row.size(); ++k) {
        v[k] = row[k].is_string() ? to_double(parse_rational(row[k].get<std::string>())) : row[k].get<double>();
      }
      vertices.push_back(v);
    }
  }
  const InclusionResult r = cylinder_octahedron_scale(vertices);
  json out;
  out["alpha"] = r.alpha;
  out["bm_upper"] = r.bm_upper;
  out["closed_form_alpha"] = cylinder_octahedron_scale_closed_form(vertices);
  out["sampled_gauge_at_alpha"] = sampled_cylinder_gauge(vertices, r.alpha);
  out["contact"] = r.contact;
  emit(g, dump(out));
  return kOk;
}

int cmd_bm_contrapositive(const Globals& g, std::size_t n, double p) {
  const ContrapositiveReport r = contrapositive_check(n, p);
  json out;
  out["n"] = r.n;
  out["p"] = r.p;
  out["ceiling"] = r.ceiling;
  out["strict_excluded"] = r.strict_excluded;
  out["note"] = r.note;
  emit(g, dump(out));
  return kOk;
}

// ---------------------------------------------------------------- report

struct Row {
  std::string source;
  std::string space;
  std::size_t size = 0;
  double d = 0.0;
  std::string d_text;
  std::string classification;
  std::string bound;
};

Row row_of(const std::string& source, const Certificate& cert) {
  Row r;
  r.source = source;
  r.space = cert.points.space().describe();
  r.size = cert.points.size();
  r.d = cert.d;
  r.d_text = cert.d_exact ? to_string(*cert.d_exact) : fmt(cert.d);
  r.classification = to_string(cert.classification);
  if (cert.d > 0.0) {
    const BmBound b = bm_bound_from_certificate(cert);
    r.bound = b.bound_exact ? to_string(*b.bound_exact) : fmt(b.bound);
  } else {
    r.bound = "none";
  }
  return r;
}

std::vector<Row> theorem1_rows(const CertifyOptions& o) {
  std::vector<std::pair<std::string, Construction>> items;
  for (double p : {1.5, 2.0, 3.0}) {
    items.emplace_back("n=2 p=" + fmt(p), auerbach_cross(2, p));
    items.emplace_back("n=3 p=" + fmt(p), prism_4n_minus_4(3, p));
  }
  items.emplace_back("n=3 p=2 cube", scaled_hypercube(3, 2.0));
  items.emplace_back("n=4 p=2 prism", prism_4n_minus_4(4, 2.0));
  items.emplace_back("n=4 p=2 cube", scaled_hypercube(4, 2.0));
  std::vector<Row> rows;
  for (const auto& [label, c] : items) rows.push_back(row_of(label, certify_set(c.points, o)));
  return rows;
}

std::string render(const std::vector<Row>& rows, const std::string& format) {
  std::ostringstream out;
  if (format == "csv") {
    out << "source,space,size,d,classification,bm_bound\n";
    for (const auto& r : rows) {
      out << '"' << r.source << "\",\"" << r.space << "\"," << r.size << ',' << r.d_text << ',' << r.classification
          << ',' << r.bound << '\n';
    }
  } else if (format == "markdown") {
    out << "| source | space | size | d | classification | 2/d bound |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
      out << "| " << r.source << " | " << r.space << " | " << r.size << " | " << r.d_text << " | " << r.classification
          << " | " << r.bound << " |\n";
    }
  } else {
    fail(ErrorKind::InvalidArgument, "unknown format '" + format + "' (csv or markdown)");
  }
  return out.str();
}

int cmd_report(const Globals& g, const std::vector<std::string>& certs, const std::string& preset,
               const std::string& format) {
  std::vector<Row> rows;
  if (!preset.empty()) {
    if (preset != "theorem1") fail(ErrorKind::InvalidArgument, "unknown preset '" + preset + "'");
    rows = theorem1_rows(options_of(g));
  }
  for (const auto& path : certs) rows.push_back(row_of(path, certificate_from_json(read_text_file(path))));
  emit(g, render(rows, format));
  return kOk;
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int k = 0; k < argc; ++k) {
    if (k) s += ' ';
    s += argv[k];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certifier, constructor and search toolkit for antipodal Hadwiger configurations in normed spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", antipode::tool_version());

  Globals g;
  g.command_line = join_args(argc, argv);
  app.add_option("--mode", g.mode, "Required level: antipodal, hadwiger or strict")
      ->check(CLI::IsMember({"antipodal", "hadwiger", "strict"}));
  app.add_option("--tol", g.tol, "Solver tolerance (default 1e-9)");
  app.add_option("--strict-tol", g.strict_tol, "Margin above 1 needed for strict (default 1e-6)");
  app.add_option("--sphere-tol", g.sphere_tol, "Allowed | ||x|| - 1 | (default 1e-9)");
  app.add_flag("--rational", g.rational, "Exact rational arithmetic (polytopal spaces only)");
  app.add_flag("--float", g.float_mode, "Force floating-point arithmetic");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Output file (construct: output directory)");
  app.add_flag("--project", g.project, "Rescale input points onto the unit sphere");

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build a named construction");
  construct->add_option("name", ca.name, "Construction name")->required()->check(CLI::IsMember(construction_names()));
  construct->add_option("--n", ca.n, "Dimension");
  construct->add_option("--p", ca.p, "Exponent (number or inf)");
  construct->add_option("--beta", ca.beta, "Prism parameter");
  construct->add_option("--delta", ca.delta, "Inner-product bound for gv");
  construct->add_option("--max-count", ca.max_count, "Vector cap for gv");
  construct->add_option("--space", ca.space, "Space JSON (minkowski-quadruple)");

  std::string points, space, witness_file, f_text;
  bool suggested = false;
  std::size_t wi = 0, wj = 0;
  auto* certify = app.add_subcommand("certify", "Certify a point set");
  certify->add_option("--points", points, "Points JSON")->required();
  certify->add_option("--space", space, "Space JSON (overrides the one in the points file)");
  certify->add_flag("--suggested", suggested, "Use the suggested witnesses of a construction file");
  certify->add_option("--witnesses", witness_file, "Construction file supplying suggested witnesses");

  auto* verify = app.add_subcommand("verify-witness", "Evaluate a functional on one pair");
  verify->add_option("--points", points, "Points JSON")->required();
  verify->add_option("--space", space, "Space JSON");
  verify->add_option("--i", wi, "First index")->required();
  verify->add_option("--j", wj, "Second index")->required();
  verify->add_option("--f", f_text, "Comma-separated coefficients")->required();

  auto* separation = app.add_subcommand("separation", "Pairwise distance matrix as CSV");
  separation->add_option("--points", points, "Points JSON")->required();
  separation->add_option("--space", space, "Space JSON");

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "Search for large witness sets");
  search->add_option("method", sa.method, "exact, anneal or greedy")
      ->required()
      ->check(CLI::IsMember({"exact", "anneal", "greedy"}));
  search->add_option("--space", sa.space, "Space JSON");
  search->add_option("--pool", sa.pool, "Pool points JSON or construction name");
  search->add_option("--base", sa.base, "Base points JSON (greedy)");
  search->add_option("--k", sa.k, "Number of points (anneal)");
  search->add_option("--restarts", sa.restarts, "Seeds seed..seed+restarts-1 (anneal)");
  search->add_option("--steps", sa.steps, "Annealing steps");
  search->add_option("--log", sa.log, "JSONL run log (empty to disable)");
  search->add_option("--n", sa.construct.n, "Pool construction dimension");
  search->add_option("--p", sa.construct.p, "Pool construction exponent");
  search->add_option("--beta", sa.construct.beta, "Pool construction prism parameter");

  auto* bm = app.add_subcommand("bm", "Banach-Mazur distance bounds");
  bm->require_subcommand(1);
  std::string inner, outer, cert_file, vertices;
  std::size_t cn = 0;
  double cp = 0.0;
  auto* inclusion = bm->add_subcommand("inclusion", "alpha with alpha*outer in inner");
  inclusion->add_option("--inner", inner, "Inner body (space JSON)")->required();
  inclusion->add_option("--outer", outer, "Outer body (space JSON)")->required();
  auto* from_cert = bm->add_subcommand("from-cert", "2/d bound from a certificate");
  from_cert->add_option("cert", cert_file, "Certificate JSON")->required();
  auto* cylinder = bm->add_subcommand("cylinder-octahedron", "Cylinder inside an octahedron");
  cylinder->add_option("--vertices", vertices, "Three or six octahedron vertices (JSON array)");
  auto* contra = bm->add_subcommand("contrapositive", "Ceiling on d for 2^n-point sets in l_p^n");
  contra->add_option("--n", cn, "Dimension")->required();
  contra->add_option("--p", cp, "Exponent")->required();

  std::vector<std::string> certs;
  std::string preset, format = "csv";
  auto* report = app.add_subcommand("report", "Summary table from certificates");
  report->add_option("certs", certs, "Certificate files");
  report->add_option("--preset", preset, "Bundled batch: theorem1");
  report->add_option("--format", format, "csv or markdown")->check(CLI::IsMember({"csv", "markdown"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*construct) return cmd_construct(g, ca);
    if (*certify) return cmd_certify(g, points, space, suggested, witness_file);
    if (*verify) return cmd_verify(g, points, space, wi, wj, f_text);
    if (*separation) return cmd_separation(g, points, space);
    if (*search) return cmd_search(g, sa);
    if (*inclusion) return cmd_bm_inclusion(g, inner, outer);
    if (*from_cert) return cmd_bm_from_cert(g, cert_file);
    if (*cylinder) return cmd_bm_cylinder(g, vertices);
    if (*contra) return cmd_bm_contrapositive(g, cn, cp);
    if (*report) return cmd_report(g, certs, preset, format);
  } catch (const antipode::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
