#include "plateau/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>

namespace plateau {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

json point_json(const Point& p) {
  json a = json::array();
  for (const Rational& q : p) a.push_back(to_string(q));
  return a;
}

json rationals(const std::vector<Rational>& v) { return point_json(v); }

json solve_json(const SolveReport& r) {
  std::map<std::string, int> counts;
  std::map<std::string, Rational> deltas;
  for (const Move& m : r.moves) {
    ++counts[to_string(m.kind)];
    deltas[to_string(m.kind)] += m.delta;
  }
  json moves = json::object();
  for (const auto& [k, c] : counts) moves[k] = {{"count", c}, {"delta", to_string(deltas[k])}};
  json starts = json::array();
  for (const Rational& w : r.start_weights) starts.push_back(to_string(w));
  return {{"initial_weight", to_string(r.initial_weight)},
          {"final_weight", to_string(r.final_weight)},
          {"moves", moves},
          {"passes", r.passes},
          {"chosen_order", to_string(r.chosen_order)},
          {"start_weights", starts},
          {"subboxes_visited", r.subboxes_visited},
          {"subboxes_skipped", r.subboxes_skipped},
          {"spans_verified", r.spans_verified},
          {"one_minimal", r.one_minimal}};
}

bool wanted(const std::string& name, bool toggle, const RunOptions& opts) {
  if (!opts.diagnostics) return toggle;
  for (const std::string& d : *opts.diagnostics)
    if (d == name || d == "all") return true;
  return false;
}

// Probe point for the local diagnostics: barycenter of the least m-cell of
// X \ A.
std::optional<Point> probe_point(const Surface& x) {
  if (x.mcells().empty()) return std::nullopt;
  return barycenter(*x.mcells().begin(), x.problem().grid);
}

json diagnostics_json(const Surface& x, const RunOptions& opts, const Scenario& s, std::optional<SliceReport>& slices,
                      std::optional<DensityProfile>& profile) {
  const SpanningProblem& p = x.problem();
  const GridSpec& g = p.grid;
  const Rational side = g.side();
  json d = json::object();
  const std::optional<Point> probe = probe_point(x);
  auto skipped = [](const std::string& why) { return json{{"skipped", why}}; };

  if (wanted("slicing", s.diagnostics.slicing, opts)) {
    Point c;
    for (int a = 0; a < g.n(); ++a) c.push_back(Rational(g.lo(a) + g.hi(a), 2) * side);
    const SliceReport r = slicing_check(x, c, 2 * side);
    d["slicing"] = {{"center", point_json(r.center)}, {"width", to_string(r.width)},
                    {"lhs", to_string(r.lhs)},        {"rhs", to_string(r.rhs)},
                    {"ratio", r.ratio},               {"within_slack", r.within_slack},
                    {"crossing_ratio", r.crossing_ratio},
                    {"shells", r.radii.size()}};
    slices = r;
  }
  const std::vector<Rational> radii{2 * side, 3 * side, 4 * side};
  if (wanted("density", s.diagnostics.density, opts)) {
    if (!probe) {
      d["density"] = skipped("X \\ A is empty");
    } else {
      const DensityProfile r = density_profile(x, *probe, radii);
      d["density"] = {{"center", point_json(r.center)}, {"radii", rationals(r.radii)}, {"g", rationals(r.g)},
                      {"ratios", r.ratios},             {"lower_density", r.lower_density}};
      profile = r;
    }
  }
  if (wanted("regularity", s.diagnostics.regularity, opts)) {
    if (!probe) {
      d["regularity"] = skipped("X \\ A is empty");
    } else {
      const RegularityReport r = regularity_constant(x, {2 * side, 4 * side});
      d["regularity"] = {{"c_hat", to_string(r.c_hat)},
                         {"c_hat_value", to_double(r.c_hat)},
                         {"radius_max", to_string(r.radius_max)},
                         {"points", r.points},
                         {"samples", r.samples},
                         {"worst_point", point_json(r.worst_point)},
                         {"worst_radius", to_string(r.worst_radius)}};
    }
  }
  if (wanted("monotonicity", s.diagnostics.monotonicity, opts)) {
    if (!probe) {
      d["monotonicity"] = skipped("X \\ A is empty");
    } else {
      const MonotonicityReport r =
          monotonicity_check(x, *probe, {{3 * side, 2 * side}, {4 * side, 2 * side}, {4 * side, 3 * side}});
      d["monotonicity"] = {{"ratios", r.ratios}, {"min_ratio", r.min_ratio}, {"k_hat", r.k_hat}, {"warn", r.warn}};
    }
  }
  return d;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json RunReport::to_json() const {
  json j = body;
  j["determinism_hash"] = hash;
  j["timing"] = timing;
  return j;
}

RunReport run(const Scenario& s, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemPtr problem = s.problem ? s.problem : build_problem(s);
  const SpanningProblem& p = *problem;
  RunReport rep;
  json& body = rep.body;
  body["scenario"] = s.to_json();
  body["versions"] = {{"plateau", kVersion}, {"report_format", 1}};
  body["seed"] = s.seed;
  {
    json cells = json::array();
    for (int d = 0; d <= p.boundary.dim(); ++d) cells.push_back(p.boundary.count(d));
    body["boundary"] = {{"kind", s.boundary.kind_name()},
                        {"discretization", s.boundary.kind != BoundarySpec::Kind::File},
                        {"components", connected_components(p.boundary).size()},
                        {"cells", cells},
                        {"euler_characteristic", p.boundary.euler_characteristic()},
                        {"classes", p.classes.size()},
                        {"coeffs", p.coeffs.name()}};
  }

  bool ok = true;
  Surface x;
  if (s.surface_file) {
    x = read_surface(*s.surface_file, problem);
    body["source"] = "surface_file";
  } else {
    const auto ts = std::chrono::steady_clock::now();
    auto [y, sr] = solve(problem, s.solver);
    rep.timing["solve_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - ts).count();
    x = std::move(y);
    body["source"] = "solve";
    body["solve"] = solve_json(sr);
    ok = ok && sr.spans_verified && sr.one_minimal;
  }
  const bool x_spans = spans(x);
  ok = ok && x_spans;
  body["surface"] = {{"mcells", x.mcells().size()},
                     {"weight", to_string(surface_weight(x))},
                     {"measure", to_string(surface_measure(x))},
                     {"spans", x_spans}};

  std::optional<SliceReport> slices;
  std::optional<DensityProfile> profile;
  body["diagnostics"] = diagnostics_json(x, opts, s, slices, profile);

  if (s.oracle_budget) {
    const auto to = std::chrono::steady_clock::now();
    const IsoperimetricReport o = isoperimetric_scan(problem, *s.oracle_budget);
    rep.timing["oracle_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - to).count();
    const Rational w = surface_weight(x);
    body["oracle"] = {{"method", o.method},
                      {"exact", o.exact},
                      {"minimum", to_string(o.minimum)},
                      {"lower_bound", to_string(o.lower_bound)},
                      {"nodes", o.nodes},
                      {"budget", o.budget},
                      {"surface_matches_minimum", o.exact && w == o.minimum}};
    if (x_spans && w < o.lower_bound) ok = false;
  }

  json files = json::array();
  const bool mesh = opts.mesh && (p.grid.n() == 2 || p.grid.n() == 3);
  if (opts.out_dir) {
    files.push_back("report.json");
    files.push_back("surface.cplx");
    if (slices) files.push_back("slices.csv");
    if (profile) files.push_back("profile.csv");
    if (mesh) files.push_back("surface.off");
  }
  body["files"] = files;
  body["ok"] = ok;
  rep.ok = ok;
  rep.hash = fnv1a_hex(body.dump());

  if (const char* threads = std::getenv("PLATEAU_THREADS")) rep.timing["threads"] = threads;
  rep.timing["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (opts.out_dir) {
    const std::filesystem::path dir = *opts.out_dir;
    std::filesystem::create_directories(dir);
    std::ofstream cplx(dir / "surface.cplx");
    write_complex(cplx, x.complex());
    if (slices) {
      std::ofstream csv(dir / "slices.csv");
      write_slices_csv(csv, *slices);
    }
    if (profile) {
      std::ofstream csv(dir / "profile.csv");
      write_profile_csv(csv, *profile);
    }
    if (mesh) {
      std::ofstream off(dir / "surface.off");
      write_off(off, x.complex());
    }
    write_text(dir / "report.json", rep.to_json().dump(2) + "\n");
  }
  rep.surface = std::move(x);
  return rep;
}

}  // namespace plateau
