#ifndef PLATEAU_SCENARIO_HPP
#define PLATEAU_SCENARIO_HPP

// Scenario files (JSON), built-in boundaries and the solve + diagnostics
// pipeline that produces a run report.

#include "plateau/diagnostics.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace plateau {

/// Error in a scenario, naming the offending field.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Lattice approximations of round boundaries.
///
///   disk:            rectangle loop size[0] x size[1] at origin (z = origin[2] when n = 3)
///   three_rings:     loops around the lateral boundary of [o, o+side]^2 at z = base,
///                    base + spacings[0], base + spacings[0] + spacings[1]
///   torus_longitude: boundary of the solid square annulus outer \ inner, z in [z_lo, z_hi]
///   sphere_shell:    boundary of the union of n-cubes with barycenter within radius of center
///   file:            complex read from path
struct BoundarySpec {
  enum class Kind { Disk, ThreeRings, TorusLongitude, SphereShell, File };
  Kind kind = Kind::Disk;

  std::vector<int> size{3, 3};
  std::vector<int> origin;

  int side = 5;
  std::vector<int> spacings{1, 1};
  int base = 0;

  std::vector<int> outer;  // lo, hi in x and y
  std::vector<int> inner;
  int z_lo = 1, z_hi = 3;
  int pinch = -1;  // y plane of the cheap disk on the x = outer lo arm

  std::vector<Rational> center;  // lattice units
  Rational radius = 1;

  std::string path;

  std::string kind_name() const;
  /// Builtins that must produce closed manifolds, and their component count.
  bool is_manifold() const { return kind != Kind::File; }
  int expected_components() const { return kind == Kind::ThreeRings ? 3 : 1; }
};

enum class ClassSpec { Canonical, Builtin, Explicit };

struct DiagnosticsToggles {
  bool slicing = true;
  bool density = true;
  bool regularity = true;
  bool monotonicity = true;
};

struct Scenario {
  std::string name;
  GridSpec grid;
  BoundarySpec boundary;
  int m = 2;
  Coeffs coeffs = Coeffs::gf2();
  ClassSpec class_spec = ClassSpec::Canonical;
  std::vector<CohomologyClass> explicit_classes;
  nlohmann::json density_spec;  // normalized echo
  DensityField density = DensityField::constant(1);
  SolverConfig solver;
  DiagnosticsToggles diagnostics;
  std::optional<std::size_t> oracle_budget;
  std::optional<std::filesystem::path> surface_file;  // diagnostics on a given surface
  std::uint64_t seed = 1;
  /// Built and validated by parse_scenario.
  ProblemPtr problem;

  /// Normalized JSON with defaults filled in.
  nlohmann::json to_json() const;
};

/// Throws ScenarioError for invalid fields; relative paths resolve against
/// `base_dir`.
Scenario parse_scenario(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
/// Reads and parses; JSON syntax errors report the byte position.
Scenario load_scenario(const std::filesystem::path& path);

/// Builds A and checks closedness and component count for manifold
/// builtins. Throws ScenarioError on self-intersections or out-of-grid
/// parameters.
CubicalComplex build_boundary(const Scenario& s);

/// A closed k-manifold complex: pure, every (k-1)-cell in exactly two
/// k-cells, and for k = 2 every vertex link a single cycle.
bool is_closed_manifold(const CubicalComplex& a);

/// The class on the torus pairing to one with the small circle around the
/// solid and to zero with the loop around the hole.
CohomologyClass torus_disk_class(const Scenario& s, const CubicalComplex& a);

/// Builds A and L and validates the problem; parse_scenario stores the
/// result in Scenario::problem.
ProblemPtr build_problem(const Scenario& s);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  bool mesh = false;
  /// Empty means all toggles from the scenario; otherwise the listed
  /// diagnostics ("slicing", "density", "regularity", "monotonicity").
  std::optional<std::vector<std::string>> diagnostics;
};

struct RunReport {
  nlohmann::json body;    // everything covered by the determinism hash
  nlohmann::json timing;  // wall-clock data, excluded from the hash
  std::string hash;       // FNV-1a 64 of body.dump(), hex
  bool ok = false;        // all hard assertions held
  std::optional<Surface> surface;

  nlohmann::json to_json() const;
};

std::string fnv1a_hex(const std::string& bytes);
RunReport run(const Scenario& s, const RunOptions& opts = {});

/// Surface read from a complex file: its m-cells outside A.
Surface read_surface(const std::filesystem::path& path, const ProblemPtr& problem);

}  // namespace plateau

#endif
