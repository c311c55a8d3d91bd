#pragma once

#include "rdeuler/diagnostics.hpp"
#include "rdeuler/problems.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace rd {

struct RunConfig
{
  /// mesh file path, or "rect:nx:ny:x0:y0:lx:ly[:distortion]" for a generated periodic rectangle
  std::string mesh = "rect:32:32:-5:-5:10:10";
  SpaceKind space = SpaceKind::S2;
  BasisKind basis = BasisKind::Bernstein;
  int degree = 1;
  std::string scheme = "galerkin+ec+jump";
  /// interpolated | pointwise | auto (Lagrange: interpolated, Bernstein: pointwise)
  std::string flux_mode = "auto";
  Integrator integrator = Integrator::SspRk2;
  double cfl = 0.2;
  double t_end = 2.0;
  int max_steps = 10000000;
  double gamma = 1.4;
  double lambda_jump = 0.1;
  double lambda_u = 0.1;
  double zeta = 2.0;
  bool mood = false;
  CascadeConfig cascade = CascadeConfig::standard();
  std::string output_dir;
  /// snapshot every n steps (0: initial and final only)
  int output_every = 0;
  /// vortex | sod_smooth | constant | from_file
  std::string problem = "vortex";
  std::string problem_file;
  VortexParams vortex;
  SodParams sod;
  /// rho, u, v, p of the constant problem
  std::array<double, 4> constant{1.0, 0.5, -0.25, 1.0};
  int threads = 0;
  /// directory relative paths are resolved against
  std::string base_dir;

  GasModel gas() const;
  ResidualParams residual_params() const;
  /// canonical key = value listing of every setting
  std::string canonical() const;
};

/// Flat "key = value" text; '#' starts a comment. Unknown or repeated keys throw Config.
RunConfig parse_config(std::istream &in, const std::string &base_dir = "");
RunConfig load_config(const std::string &path);
/// Applies one key; throws Config on unknown keys or malformed values.
void set_config_value(RunConfig &cfg, const std::string &key, const std::string &value);

/// Hash of the canonical config without the problem, output and t_end keys.
std::uint64_t config_hash(const RunConfig &cfg);

Mesh load_mesh(const RunConfig &cfg);

/// Mesh, space and discretization of one run.
struct Setup
{
  std::unique_ptr<Mesh> mesh;
  std::unique_ptr<FeSpace> space;
  std::unique_ptr<Discretization> disc;
  std::unique_ptr<Stencils> stencils;
};
Setup make_setup(const RunConfig &cfg);
Setup make_setup(const RunConfig &cfg, Mesh mesh);

FieldState initial_state(const RunConfig &cfg, const Setup &s);

struct Snapshot
{
  std::uint64_t mesh_hash = 0;
  std::uint64_t config_hash = 0;
  double t = 0.0;
  std::vector<State> u;
};
void write_snapshot(std::ostream &out, const Setup &s, const FieldState &f, std::uint64_t cfg_hash);
Snapshot read_snapshot(std::istream &in);

struct RunOptions
{
  bool keep_trace = false;
  bool diagnostics = true;
  bool write_files = true;
  /// stop after this many steps regardless of t_end (-1: no limit)
  int step_limit = -1;
};

struct RunResult
{
  FieldState initial;
  FieldState final_state;
  int steps = 0;
  State initial_totals;
  State final_totals;
  /// per component |T_final - T_initial| / sum |C| |U_initial|
  std::array<double, 4> drift{};
  /// largest drift seen at any step
  double max_drift = 0.0;
  std::vector<DiagnosticsRecord> diagnostics;
  /// elements that used a cascade level above 0, summed over steps
  long raised_elements = 0;
  /// every DOF admissible after every step
  bool pad_ok = true;
  RunTrace trace;
};

RunResult run(const RunConfig &cfg, const Setup &s, const RunOptions &opt = {});
RunResult run(const RunConfig &cfg, const RunOptions &opt = {});

struct ConvergenceResult
{
  std::vector<ErrorReportRow> rows;
  std::vector<double> order_rho, order_u, order_p;
};
/// Vortex runs on each mesh, errors against the translated exact vortex.
ConvergenceResult convergence(const RunConfig &cfg, const std::vector<std::string> &meshes);

struct SuiteCheck
{
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};
struct SuiteResult
{
  std::string suite;
  std::vector<SuiteCheck> checks;
  bool passed() const;
};
const std::vector<std::string> &suite_names();
/// throws Config for unknown suites
SuiteResult verify(const std::string &suite);

} // namespace rd
