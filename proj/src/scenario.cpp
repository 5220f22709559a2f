#include "plateau/scenario.hpp"

#include <fstream>
#include <map>
#include <set>

namespace plateau {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw ScenarioError(field, what); }

void check_keys(const json& j, const std::string& field, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(field, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(field + "." + key, "unknown field");
  }
}

int get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

std::vector<int> get_ints(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_int(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

Rational get_rational(const json& j, const std::string& field) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    fail(field, e.what());
  }
  fail(field, "expected an integer or a \"p/q\" string");
}

std::vector<Rational> get_rationals(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_rational(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

json rationals_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const Rational& q : v) a.push_back(to_string(q));
  return a;
}

Coeffs parse_coeffs(const json& j) {
  if (!j.is_string()) fail("coeffs", "expected \"gf2\", \"gf<p>\" or \"rational\"");
  const std::string s = j.get<std::string>();
  if (s == "gf2") return Coeffs::gf2();
  if (s == "rational" || s == "q") return Coeffs::rationals();
  if (s.rfind("gf", 0) == 0 && s.size() > 2) {
    try {
      return Coeffs::gfp(std::stoll(s.substr(2)));
    } catch (const std::exception& e) {
      fail("coeffs", e.what());
    }
  }
  fail("coeffs", "unknown field '" + s + "'");
}

std::string coeffs_tag(const Coeffs& c) {
  switch (c.kind) {
    case Coeffs::Kind::GF2: return "gf2";
    case Coeffs::Kind::GFp: return "gf" + std::to_string(c.prime);
    case Coeffs::Kind::Rational: return "rational";
  }
  return "?";
}

Coord coord(std::initializer_list<int> v) {
  Coord c{};
  int i = 0;
  for (int x : v) c[i++] = x;
  return c;
}

Cell edge(Coord anchor, int axis) { return Cell{anchor, static_cast<std::uint8_t>(1u << axis)}; }

void add_loop(CubicalComplex& a, int x0, int y0, int w, int h, int z, int n) {
  auto at = [&](int x, int y) { return n == 3 ? coord({x, y, z}) : coord({x, y}); };
  for (int x = x0; x < x0 + w; ++x) {
    a.insert(edge(at(x, y0), 0));
    a.insert(edge(at(x, y0 + h), 0));
  }
  for (int y = y0; y < y0 + h; ++y) {
    a.insert(edge(at(x0, y), 1));
    a.insert(edge(at(x0 + w, y), 1));
  }
}

CubicalComplex cube_union_boundary(const GridSpec& g, const std::set<Coord>& cubes) {
  const int n = g.n();
  const std::uint8_t full = static_cast<std::uint8_t>((1u << n) - 1);
  std::map<Cell, int> count;
  for (const Coord& a : cubes)
    for (const Cell& f : faces(Cell{a, full})) ++count[f];
  CubicalComplex out(g);
  for (const auto& [f, k] : count)
    if (k == 1) out.insert(f);
  return out;
}

void require_in_grid(const GridSpec& g, int axis, int lo, int hi, const std::string& field) {
  if (lo < g.lo(axis) || hi > g.hi(axis))
    fail(field, "outside the grid on axis " + std::to_string(axis) + " ([" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "] vs [" + std::to_string(g.lo(axis)) + ", " + std::to_string(g.hi(axis)) +
                    "])");
}

BoundarySpec parse_boundary(const json& j, const GridSpec& g, const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("type")) fail("boundary", "expected an object with a type");
  const std::string type = j["type"].is_string() ? j["type"].get<std::string>() : "";
  BoundarySpec b;
  const int n = g.n();
  if (type == "disk") {
    check_keys(j, "boundary", {"type", "size", "origin"});
    b.kind = BoundarySpec::Kind::Disk;
    if (j.contains("size")) b.size = get_ints(j["size"], "boundary.size");
    if (j.contains("origin")) b.origin = get_ints(j["origin"], "boundary.origin");
  } else if (type == "three_rings") {
    check_keys(j, "boundary", {"type", "side", "spacings", "spacing", "base", "origin"});
    b.kind = BoundarySpec::Kind::ThreeRings;
    b.side = n >= 2 ? g.extent(0) : 1;
    b.base = n == 3 ? g.lo(2) + 1 : 0;
    if (j.contains("side")) b.side = get_int(j["side"], "boundary.side");
    if (j.contains("spacing")) {
      const int d = get_int(j["spacing"], "boundary.spacing");
      b.spacings = {d, d};
    }
    if (j.contains("spacings")) b.spacings = get_ints(j["spacings"], "boundary.spacings");
    if (j.contains("base")) b.base = get_int(j["base"], "boundary.base");
    if (j.contains("origin")) b.origin = get_ints(j["origin"], "boundary.origin");
  } else if (type == "torus_longitude") {
    check_keys(j, "boundary", {"type", "outer", "inner", "z", "pinch"});
    b.kind = BoundarySpec::Kind::TorusLongitude;
    if (j.contains("outer")) b.outer = get_ints(j["outer"], "boundary.outer");
    if (j.contains("inner")) b.inner = get_ints(j["inner"], "boundary.inner");
    if (n == 3) {
      b.z_lo = g.lo(2) + 1;
      b.z_hi = g.hi(2) - 1;
    }
    if (j.contains("z")) {
      const std::vector<int> z = get_ints(j["z"], "boundary.z");
      if (z.size() != 2) fail("boundary.z", "expected [z_lo, z_hi]");
      b.z_lo = z[0];
      b.z_hi = z[1];
    }
    if (j.contains("pinch")) b.pinch = get_int(j["pinch"], "boundary.pinch");
  } else if (type == "sphere_shell") {
    check_keys(j, "boundary", {"type", "center", "radius"});
    b.kind = BoundarySpec::Kind::SphereShell;
    if (!j.contains("radius")) fail("boundary.radius", "required");
    b.radius = get_rational(j["radius"], "boundary.radius");
    if (j.contains("center")) b.center = get_rationals(j["center"], "boundary.center");
  } else if (type == "file") {
    check_keys(j, "boundary", {"type", "path"});
    b.kind = BoundarySpec::Kind::File;
    if (!j.contains("path") || !j["path"].is_string()) fail("boundary.path", "required string");
    std::filesystem::path p = j["path"].get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    b.path = p.string();
  } else {
    fail("boundary.type", "unknown builtin '" + type + "'");
  }

  // Defaults and bounds.
  switch (b.kind) {
    case BoundarySpec::Kind::Disk: {
      if (n != 2 && n != 3) fail("boundary", "disk needs n = 2 or 3");
      if (b.size.size() != 2 || b.size[0] < 1 || b.size[1] < 1) fail("boundary.size", "expected two positive sizes");
      if (b.origin.empty()) {
        b.origin = {g.lo(0) + 1, g.lo(1) + 1};
        if (n == 3) b.origin.push_back((g.lo(2) + g.hi(2)) / 2);
      }
      if (static_cast<int>(b.origin.size()) != n) fail("boundary.origin", "expected n coordinates");
      require_in_grid(g, 0, b.origin[0], b.origin[0] + b.size[0], "boundary.size");
      require_in_grid(g, 1, b.origin[1], b.origin[1] + b.size[1], "boundary.size");
      if (n == 3) require_in_grid(g, 2, b.origin[2], b.origin[2], "boundary.origin");
      break;
    }
    case BoundarySpec::Kind::ThreeRings: {
      if (n != 3) fail("boundary", "three_rings needs n = 3");
      if (b.origin.empty()) b.origin = {g.lo(0), g.lo(1)};
      if (b.origin.size() != 2) fail("boundary.origin", "expected [x, y]");
      if (b.side < 1) fail("boundary.side", "must be positive");
      if (b.spacings.size() != 2) fail("boundary.spacings", "expected two spacings");
      for (int d : b.spacings)
        if (d < 1) fail("boundary.spacings", "rings would intersect (spacing < 1)");
      require_in_grid(g, 0, b.origin[0], b.origin[0] + b.side, "boundary.side");
      require_in_grid(g, 1, b.origin[1], b.origin[1] + b.side, "boundary.side");
      const int top = b.base + b.spacings[0] + b.spacings[1];
      if (b.base < g.lo(2) || top > g.hi(2))
        fail("boundary.spacings", "rings at z = " + std::to_string(b.base) + ".." + std::to_string(top) +
                                      " exceed the box height [" + std::to_string(g.lo(2)) + ", " +
                                      std::to_string(g.hi(2)) + "]");
      break;
    }
    case BoundarySpec::Kind::TorusLongitude: {
      if (n != 3) fail("boundary", "torus_longitude needs n = 3");
      if (b.outer.empty()) b.outer = {g.lo(0) + 1, g.hi(0) - 1, g.lo(1) + 1, g.hi(1) - 1};
      if (b.outer.size() != 4) fail("boundary.outer", "expected [x_lo, x_hi, y_lo, y_hi]");
      if (b.inner.empty()) b.inner = {b.outer[0] + 1, b.outer[1] - 1, b.outer[2] + 1, b.outer[3] - 1};
      if (b.inner.size() != 4) fail("boundary.inner", "expected [x_lo, x_hi, y_lo, y_hi]");
      for (int a = 0; a < 2; ++a) {
        const int olo = b.outer[2 * a], ohi = b.outer[2 * a + 1], ilo = b.inner[2 * a], ihi = b.inner[2 * a + 1];
        if (!(olo < ilo && ilo < ihi && ihi < ohi)) fail("boundary.inner", "hole must lie strictly inside the outer square");
        require_in_grid(g, a, olo, ohi, "boundary.outer");
      }
      if (b.z_lo >= b.z_hi) fail("boundary.z", "empty height range");
      require_in_grid(g, 2, b.z_lo, b.z_hi, "boundary.z");
      if (b.pinch < 0) b.pinch = b.inner[2];
      if (b.pinch < b.inner[2] || b.pinch > b.inner[3]) fail("boundary.pinch", "must lie in the hole's y range");
      break;
    }
    case BoundarySpec::Kind::SphereShell: {
      if (b.radius <= 0) fail("boundary.radius", "must be positive");
      if (b.center.empty())
        for (int a = 0; a < n; ++a) b.center.push_back(Rational(g.lo(a) + g.hi(a), 2));
      if (static_cast<int>(b.center.size()) != n) fail("boundary.center", "expected n coordinates");
      break;
    }
    case BoundarySpec::Kind::File: break;
  }
  return b;
}

json boundary_json(const BoundarySpec& b) {
  json j{{"type", b.kind_name()}};
  switch (b.kind) {
    case BoundarySpec::Kind::Disk: j["size"] = b.size; j["origin"] = b.origin; break;
    case BoundarySpec::Kind::ThreeRings:
      j["side"] = b.side;
      j["spacings"] = b.spacings;
      j["base"] = b.base;
      j["origin"] = b.origin;
      break;
    case BoundarySpec::Kind::TorusLongitude:
      j["outer"] = b.outer;
      j["inner"] = b.inner;
      j["z"] = {b.z_lo, b.z_hi};
      j["pinch"] = b.pinch;
      break;
    case BoundarySpec::Kind::SphereShell:
      j["center"] = rationals_json(b.center);
      j["radius"] = to_string(b.radius);
      break;
    case BoundarySpec::Kind::File: j["path"] = std::filesystem::path(b.path).filename().string(); break;
  }
  return j;
}

DensityField parse_density(const json& j, const GridSpec& g, json& echo) {
  if (!j.is_object() || !j.contains("type")) fail("density", "expected an object with a type");
  const std::string type = j["type"].is_string() ? j["type"].get<std::string>() : "";
  try {
    if (type == "constant") {
      check_keys(j, "density", {"type", "value"});
      const Rational c = j.contains("value") ? get_rational(j["value"], "density.value") : Rational(1);
      echo = {{"type", type}, {"value", to_string(c)}};
      return DensityField::constant(c);
    }
    if (type == "affine") {
      check_keys(j, "density", {"type", "coefficients"});
      if (!j.contains("coefficients")) fail("density.coefficients", "required");
      std::vector<Rational> c = get_rationals(j["coefficients"], "density.coefficients");
      echo = {{"type", type}, {"coefficients", rationals_json(c)}};
      return DensityField::affine(std::move(c), g);
    }
    if (type == "radial") {
      check_keys(j, "density", {"type", "c0", "c1", "center"});
      for (const char* k : {"c0", "c1", "center"})
        if (!j.contains(k)) fail(std::string("density.") + k, "required");
      const Rational c0 = get_rational(j["c0"], "density.c0"), c1 = get_rational(j["c1"], "density.c1");
      std::vector<Rational> q = get_rationals(j["center"], "density.center");
      echo = {{"type", type}, {"c0", to_string(c0)}, {"c1", to_string(c1)}, {"center", rationals_json(q)}};
      return DensityField::radial(c0, c1, std::move(q), g);
    }
  } catch (const std::invalid_argument& e) {
    fail("density", e.what());
  }
  fail("density.type", "unknown density '" + type + "'");
}

// Cheapest cross-section of the torus sits at y = pinch on the x = outer lo
// arm.
DensityField torus_default_density(const BoundarySpec& b, const GridSpec& g, json& echo) {
  const Rational s = g.side();
  std::vector<Rational> q{Rational(b.outer[0] + b.inner[0], 2) * s, Rational(b.pinch) * s,
                          Rational(b.z_lo + b.z_hi, 2) * s};
  const Rational c0 = 1, c1 = Rational(1, 16) / (s * s);
  echo = {{"type", "radial"}, {"c0", to_string(c0)}, {"c1", to_string(c1)}, {"center", rationals_json(q)}};
  return DensityField::radial(c0, c1, std::move(q), g);
}

std::vector<CohomologyClass> parse_classes(const json& j, const GridSpec& g, int m) {
  if (!j.is_array()) fail("classes", "expected \"canonical\", \"builtin\" or an array of cochains");
  std::vector<CohomologyClass> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string field = "classes[" + std::to_string(i) + "]";
    const json& c = j[i];
    check_keys(c, field, {"degree", "cochain"});
    CohomologyClass cls;
    cls.degree = c.contains("degree") ? get_int(c["degree"], field + ".degree") : m - 1;
    if (!c.contains("cochain") || !c["cochain"].is_array()) fail(field + ".cochain", "required array");
    for (std::size_t k = 0; k < c["cochain"].size(); ++k) {
      const std::string ef = field + ".cochain[" + std::to_string(k) + "]";
      const json& e = c["cochain"][k];
      check_keys(e, ef, {"cell", "axes", "value"});
      if (!e.contains("cell") || !e.contains("axes")) fail(ef, "needs cell and axes");
      const std::vector<int> a = get_ints(e["cell"], ef + ".cell");
      if (static_cast<int>(a.size()) != g.n()) fail(ef + ".cell", "expected n coordinates");
      Cell cell;
      for (int t = 0; t < g.n(); ++t) cell.anchor[t] = a[t];
      const int axes = get_int(e["axes"], ef + ".axes");
      if (axes < 0 || axes >= (1 << g.n())) fail(ef + ".axes", "mask out of range");
      cell.axes = static_cast<std::uint8_t>(axes);
      cls.rep[cell] = e.contains("value") ? get_rational(e["value"], ef + ".value") : Rational(1);
    }
    out.push_back(std::move(cls));
  }
  return out;
}

json classes_json(const std::vector<CohomologyClass>& classes, int n) {
  json a = json::array();
  for (const CohomologyClass& c : classes) {
    json co = json::array();
    for (const auto& [cell, v] : c.rep) {
      std::vector<int> anchor(cell.anchor.begin(), cell.anchor.begin() + n);
      co.push_back({{"cell", anchor}, {"axes", cell.axes}, {"value", to_string(v)}});
    }
    a.push_back({{"degree", c.degree}, {"cochain", co}});
  }
  return a;
}

}  // namespace

std::string BoundarySpec::kind_name() const {
  switch (kind) {
    case Kind::Disk: return "disk";
    case Kind::ThreeRings: return "three_rings";
    case Kind::TorusLongitude: return "torus_longitude";
    case Kind::SphereShell: return "sphere_shell";
    case Kind::File: return "file";
  }
  return "?";
}

json Scenario::to_json() const {
  json j;
  j["name"] = name;
  std::vector<int> lo, hi;
  for (int a = 0; a < grid.n(); ++a) {
    lo.push_back(grid.lo(a));
    hi.push_back(grid.hi(a));
  }
  j["grid"] = {{"lo", lo}, {"hi", hi}, {"level", grid.level()}};
  j["boundary"] = boundary_json(boundary);
  j["m"] = m;
  j["coeffs"] = coeffs_tag(coeffs);
  switch (class_spec) {
    case ClassSpec::Canonical: j["classes"] = "canonical"; break;
    case ClassSpec::Builtin: j["classes"] = "builtin"; break;
    case ClassSpec::Explicit: j["classes"] = classes_json(explicit_classes, grid.n()); break;
  }
  j["density"] = density_spec;
  j["solver"] = {{"removal_order", to_string(solver.removal_order)},
                 {"local_box_side", solver.local_box_side},
                 {"max_passes", solver.max_passes},
                 {"max_local_cells", solver.max_local_cells},
                 {"multi_start", solver.multi_start}};
  j["diagnostics"] = {{"slicing", diagnostics.slicing},
                      {"density", diagnostics.density},
                      {"regularity", diagnostics.regularity},
                      {"monotonicity", diagnostics.monotonicity}};
  if (oracle_budget) j["oracle"] = {{"budget", *oracle_budget}};
  if (surface_file) j["surface"] = surface_file->filename().string();
  j["seed"] = seed;
  return j;
}

Scenario parse_scenario(const json& j, const std::filesystem::path& base_dir) {
  check_keys(j, "scenario",
             {"name", "grid", "boundary", "m", "coeffs", "classes", "density", "solver", "diagnostics", "oracle",
              "surface", "seed"});
  Scenario s;
  s.name = j.value("name", "scenario");

  if (!j.contains("grid")) fail("grid", "required");
  const json& gj = j["grid"];
  check_keys(gj, "grid", {"extents", "lo", "hi", "level"});
  try {
    const int level = gj.contains("level") ? get_int(gj["level"], "grid.level") : 0;
    if (level < 0 || level > 20) fail("grid.level", "must be in [0, 20]");
    std::vector<int> lo, hi;
    if (gj.contains("extents")) {
      const std::vector<int> ext = get_ints(gj["extents"], "grid.extents");
      lo = gj.contains("lo") ? get_ints(gj["lo"], "grid.lo") : std::vector<int>(ext.size(), 0);
      if (lo.size() != ext.size()) fail("grid.lo", "length differs from extents");
      for (std::size_t a = 0; a < ext.size(); ++a) hi.push_back(lo[a] + ext[a]);
    } else {
      if (!gj.contains("lo") || !gj.contains("hi")) fail("grid", "needs extents or lo and hi");
      lo = get_ints(gj["lo"], "grid.lo");
      hi = get_ints(gj["hi"], "grid.hi");
    }
    s.grid = GridSpec(static_cast<int>(lo.size()), level, lo, hi);
  } catch (const std::invalid_argument& e) {
    fail("grid", e.what());
  }

  if (!j.contains("boundary")) fail("boundary", "required");
  s.boundary = parse_boundary(j["boundary"], s.grid, base_dir);

  s.m = s.boundary.kind == BoundarySpec::Kind::SphereShell ? s.grid.n() : 2;
  if (j.contains("m")) s.m = get_int(j["m"], "m");
  if (s.m < 2 || s.m > s.grid.n()) fail("m", "must lie in [2, n]");

  if (j.contains("coeffs")) s.coeffs = parse_coeffs(j["coeffs"]);

  s.class_spec = s.boundary.kind == BoundarySpec::Kind::TorusLongitude ? ClassSpec::Builtin : ClassSpec::Canonical;
  if (j.contains("classes")) {
    const json& c = j["classes"];
    if (c == "canonical") s.class_spec = ClassSpec::Canonical;
    else if (c == "builtin") s.class_spec = ClassSpec::Builtin;
    else {
      s.class_spec = ClassSpec::Explicit;
      s.explicit_classes = parse_classes(c, s.grid, s.m);
    }
  }
  if (s.class_spec == ClassSpec::Builtin && s.boundary.kind != BoundarySpec::Kind::TorusLongitude)
    fail("classes", "\"builtin\" classes exist only for torus_longitude");

  if (j.contains("density")) s.density = parse_density(j["density"], s.grid, s.density_spec);
  else if (s.boundary.kind == BoundarySpec::Kind::TorusLongitude)
    s.density = torus_default_density(s.boundary, s.grid, s.density_spec);
  else s.density_spec = {{"type", "constant"}, {"value", "1"}};

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "expected a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  s.solver.seed = s.seed;
  if (j.contains("solver")) {
    const json& sj = j["solver"];
    check_keys(sj, "solver", {"removal_order", "local_box_side", "max_passes", "max_local_cells", "multi_start"});
    try {
      if (sj.contains("removal_order")) {
        if (!sj["removal_order"].is_string()) fail("solver.removal_order", "expected a string");
        s.solver.removal_order = parse_removal_order(sj["removal_order"].get<std::string>());
      }
    } catch (const std::invalid_argument& e) {
      fail("solver.removal_order", e.what());
    }
    if (sj.contains("local_box_side")) s.solver.local_box_side = get_int(sj["local_box_side"], "solver.local_box_side");
    if (sj.contains("max_passes")) s.solver.max_passes = get_int(sj["max_passes"], "solver.max_passes");
    if (sj.contains("max_local_cells"))
      s.solver.max_local_cells = get_int(sj["max_local_cells"], "solver.max_local_cells");
    if (sj.contains("multi_start")) {
      if (!sj["multi_start"].is_boolean()) fail("solver.multi_start", "expected a boolean");
      s.solver.multi_start = sj["multi_start"].get<bool>();
    }
    try {
      s.solver.validate();
    } catch (const std::invalid_argument& e) {
      fail("solver", e.what());
    }
  }

  if (j.contains("diagnostics")) {
    const json& dj = j["diagnostics"];
    if (dj == "all") s.diagnostics = {};
    else if (dj == "none") s.diagnostics = {false, false, false, false};
    else {
      check_keys(dj, "diagnostics", {"slicing", "density", "regularity", "monotonicity"});
      auto flag = [&](const char* k, bool& out) {
        if (!dj.contains(k)) return;
        if (!dj[k].is_boolean()) fail(std::string("diagnostics.") + k, "expected a boolean");
        out = dj[k].get<bool>();
      };
      flag("slicing", s.diagnostics.slicing);
      flag("density", s.diagnostics.density);
      flag("regularity", s.diagnostics.regularity);
      flag("monotonicity", s.diagnostics.monotonicity);
    }
  }

  if (j.contains("oracle")) {
    const json& oj = j["oracle"];
    check_keys(oj, "oracle", {"budget"});
    if (!oj.contains("budget") || !oj["budget"].is_number_unsigned() || oj["budget"].get<std::size_t>() == 0)
      fail("oracle.budget", "expected a positive integer");
    s.oracle_budget = oj["budget"].get<std::size_t>();
  }
  if (j.contains("surface")) {
    if (!j["surface"].is_string()) fail("surface", "expected a path");
    std::filesystem::path p = j["surface"].get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    s.surface_file = p;
  }

  s.problem = build_problem(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("scenario", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("scenario", std::string("parse error at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  return parse_scenario(j, path.parent_path());
}

bool is_closed_manifold(const CubicalComplex& a) {
  const int k = a.dim();
  if (k < 1) return false;
  // Pure: every cell lies in a k-cell.
  std::set<Cell> covered;
  for (const Cell& c : a.cells(k))
    for (const Cell& f : closure_of(c)) covered.insert(f);
  if (covered.size() != a.size()) return false;
  std::map<Cell, int> cofaces;
  for (const Cell& c : a.cells(k))
    for (const Cell& f : faces(c)) ++cofaces[f];
  for (const Cell& f : a.cells(k - 1))
    if (cofaces[f] != 2) return false;
  if (k != 2) return true;
  // Vertex links: edges at v joined by the squares at v must form one cycle.
  std::map<Cell, std::vector<std::pair<Cell, Cell>>> link;
  for (const Cell& sq : a.cells(2)) {
    std::vector<Cell> vs, es;
    for (const Cell& f : closure_of(sq)) {
      if (f.dim() == 0) vs.push_back(f);
      if (f.dim() == 1) es.push_back(f);
    }
    for (const Cell& v : vs) {
      std::vector<Cell> at;
      for (const Cell& e : es) {
        const auto cl = closure_of(e);
        if (std::find(cl.begin(), cl.end(), v) != cl.end()) at.push_back(e);
      }
      if (at.size() == 2) link[v].emplace_back(at[0], at[1]);
    }
  }
  for (const Cell& v : a.cells(0)) {
    const auto& arcs = link[v];
    std::map<Cell, std::vector<Cell>> adj;
    for (const auto& [e1, e2] : arcs) {
      adj[e1].push_back(e2);
      adj[e2].push_back(e1);
    }
    if (adj.empty()) return false;
    for (const auto& [e, nb] : adj)
      if (nb.size() != 2) return false;
    std::set<Cell> seen{adj.begin()->first};
    std::vector<Cell> stack{adj.begin()->first};
    while (!stack.empty()) {
      const Cell e = stack.back();
      stack.pop_back();
      for (const Cell& f : adj[e])
        if (seen.insert(f).second) stack.push_back(f);
    }
    if (seen.size() != adj.size()) return false;
  }
  return true;
}

CubicalComplex build_boundary(const Scenario& s) {
  const GridSpec& g = s.grid;
  const BoundarySpec& b = s.boundary;
  const int n = g.n();
  CubicalComplex a(g);
  switch (b.kind) {
    case BoundarySpec::Kind::Disk: add_loop(a, b.origin[0], b.origin[1], b.size[0], b.size[1], n == 3 ? b.origin[2] : 0, n); break;
    case BoundarySpec::Kind::ThreeRings: {
      int z = b.base;
      for (int i = 0; i < 3; ++i) {
        add_loop(a, b.origin[0], b.origin[1], b.side, b.side, z, n);
        if (i < 2) z += b.spacings[i];
      }
      break;
    }
    case BoundarySpec::Kind::TorusLongitude: {
      std::set<Coord> cubes;
      for (int x = b.outer[0]; x < b.outer[1]; ++x)
        for (int y = b.outer[2]; y < b.outer[3]; ++y)
          for (int z = b.z_lo; z < b.z_hi; ++z)
            if (x < b.inner[0] || x >= b.inner[1] || y < b.inner[2] || y >= b.inner[3]) cubes.insert(coord({x, y, z}));
      a = cube_union_boundary(g, cubes);
      break;
    }
    case BoundarySpec::Kind::SphereShell: {
      std::set<Coord> cubes;
      Coord lo{}, hi{};
      for (int t = 0; t < n; ++t) {
        lo[t] = g.lo(t);
        hi[t] = g.hi(t);
      }
      for (const Cell& c : cells_in_box(lo, hi, n, n))
        if (barycenter_distance_sq(c, b.center, n) <= b.radius * b.radius) cubes.insert(c.anchor);
      if (cubes.empty()) fail("boundary.radius", "no cube barycenter within the radius");
      for (const Coord& q : cubes)
        for (int t = 0; t < n; ++t)
          if (q[t] == g.lo(t) || q[t] + 1 == g.hi(t)) fail("boundary.radius", "ball touches the grid boundary");
      a = cube_union_boundary(g, cubes);
      break;
    }
    case BoundarySpec::Kind::File: {
      std::ifstream in(b.path);
      if (!in) fail("boundary.path", "cannot open " + b.path);
      try {
        a = read_complex(in);
      } catch (const std::exception& e) {
        fail("boundary.path", e.what());
      }
      if (!(a.grid() == g)) fail("boundary.path", "complex grid differs from the scenario grid");
      break;
    }
  }
  if (b.is_manifold()) {
    if (!is_closed_manifold(a)) fail("boundary", b.kind_name() + " is not a closed manifold (self-intersection?)");
    const auto comps = connected_components(a);
    if (static_cast<int>(comps.size()) != b.expected_components())
      fail("boundary", b.kind_name() + " has " + std::to_string(comps.size()) + " components, expected " +
                           std::to_string(b.expected_components()));
  }
  return a;
}

CohomologyClass torus_disk_class(const Scenario& s, const CubicalComplex& a) {
  const BoundarySpec& b = s.boundary;
  if (b.kind != BoundarySpec::Kind::TorusLongitude) fail("classes", "torus class requested for a non-torus boundary");
  const CellIndex edges(a.cells(1));
  // Oriented vertex loops: around the arm at y = pinch, and around the hole.
  const std::vector<Coord> small{coord({b.outer[0], b.pinch, b.z_lo}), coord({b.inner[0], b.pinch, b.z_lo}),
                                 coord({b.inner[0], b.pinch, b.z_hi}), coord({b.outer[0], b.pinch, b.z_hi})};
  const std::vector<Coord> big{coord({b.outer[0], b.outer[2], b.z_lo}), coord({b.outer[1], b.outer[2], b.z_lo}),
                               coord({b.outer[1], b.outer[3], b.z_lo}), coord({b.outer[0], b.outer[3], b.z_lo})};
  auto loop_chain = [&](const std::vector<Coord>& corners) {
    std::map<Cell, int> chain;
    for (std::size_t i = 0; i < corners.size(); ++i) {
      Coord p = corners[i];
      const Coord q = corners[(i + 1) % corners.size()];
      int axis = 0;
      while (p[axis] == q[axis]) ++axis;
      const int step = q[axis] > p[axis] ? 1 : -1;
      while (p[axis] != q[axis]) {
        Coord lo = p;
        if (step < 0) --lo[axis];
        chain[edge(lo, axis)] += step;
        p[axis] += step;
      }
    }
    return chain;
  };
  const auto c_small = loop_chain(small), c_big = loop_chain(big);
  CohomologyClass cls;
  cls.degree = 1;
  with_scalar(s.coeffs, [&](auto tag) {
    using S = decltype(tag);
    const CochainComplex<S> cx(a, s.coeffs);
    const Matrix<S> d1 = cx.delta(1, false);
    Matrix<S> sys = Matrix<S>::Zero(d1.rows() + 2, edges.size());
    sys.topRows(d1.rows()) = d1;
    Vector<S> rhs = Vector<S>::Zero(d1.rows() + 2);
    int row = static_cast<int>(d1.rows());
    for (const auto* chain : {&c_small, &c_big}) {
      for (const auto& [e, w] : *chain) {
        const auto i = edges.find(e);
        if (!i) throw std::logic_error("torus loop leaves the surface");
        sys(row, *i) = FieldTraits<S>::from_rational(Rational(w), s.coeffs);
      }
      ++row;
    }
    rhs(d1.rows()) = FieldTraits<S>::from_rational(Rational(1), s.coeffs);
    const auto l = solve(sys, rhs);
    if (!l) throw std::logic_error("no cocycle separates the torus loops");
    cls.rep = to_cochain<S>(*l, edges);
  });
  return cls;
}

ProblemPtr build_problem(const Scenario& s) {
  CubicalComplex a = build_boundary(s);
  std::vector<CohomologyClass> classes;
  try {
    switch (s.class_spec) {
      case ClassSpec::Canonical: classes = canonical_L(a, s.m, s.coeffs); break;
      case ClassSpec::Builtin: classes = {torus_disk_class(s, a)}; break;
      case ClassSpec::Explicit: classes = s.explicit_classes; break;
    }
  } catch (const std::invalid_argument& e) {
    fail("classes", e.what());
  }
  try {
    return make_problem(s.grid, std::move(a), s.m, std::move(classes), s.coeffs, s.density);
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    if (msg.find("class") != std::string::npos || msg.find("cocycle") != std::string::npos) fail("classes", msg);
    if (msg.find("density") != std::string::npos) fail("density", msg);
    fail("problem", msg);
  }
}

Surface read_surface(const std::filesystem::path& path, const ProblemPtr& problem) {
  std::ifstream in(path);
  if (!in) fail("surface", "cannot open " + path.string());
  CubicalComplex x;
  try {
    x = read_complex(in);
  } catch (const std::exception& e) {
    fail("surface", e.what());
  }
  if (!(x.grid() == problem->grid)) fail("surface", "grid differs from the scenario grid");
  if (x.dim() > problem->m) fail("surface", "contains cells above dimension m");
  std::set<Cell> cells;
  for (const Cell& c : x.cells(problem->m))
    if (!problem->boundary.contains(c)) cells.insert(c);
  return Surface(problem, std::move(cells));
}

}  // namespace plateau
