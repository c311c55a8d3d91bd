#pragma once

#include "rdeuler/time_integration.hpp"

#include <vector>

namespace rd {

enum class Integrator { ForwardEuler, SspRk2, Implicit };

const char *to_string(Integrator i);
Integrator integrator_from_string(const std::string &s);

struct CascadeConfig
{
  /// ordered schemes; the last one must be plain LxF (the parachute)
  std::vector<SchemeSpec> schemes;
  /// plateau threshold factor: eps_plateau = plateau_factor * h_K^3
  double plateau_factor = 1.0;
  double delta_dmp = 1e-3;
  double delta_min = 1e-6;
  double smoothness_threshold = 0.01;
  bool nad = true;

  /// [galerkin+ec+jump, limited_lxf, lxf]
  static CascadeConfig standard();
  /// throws Config unless non-empty with an LxF parachute last
  void validate() const;
};

enum class Detector { None, Pad, Cad, PlateauSkip, Nad };
const char *to_string(Detector d);

struct ElementReport
{
  bool accepted = true;
  /// last detector that fired (PlateauSkip is informative, the element passed)
  Detector detector = Detector::None;
  /// DOF with the worst violation, -1 when none
  int worst_dof = -1;
  int level = 0;
};

struct DetectorReport
{
  std::vector<ElementReport> elements;
  int pad = 0;
  int cad = 0;
  int nad = 0;
  int plateau = 0;
  /// elements whose final level is the parachute (length > 1 cascades only)
  int parachute = 0;
  /// elements at each cascade level
  std::vector<int> per_level;
  int rounds = 0;

  /// elements that used a level above 0
  int raised() const;
};

/// Element plus edge neighbours: their DOFs, computed once per space.
struct Stencils
{
  std::vector<std::vector<int>> dofs;
  std::vector<std::vector<Vec2>> points;
};
Stencils build_stencils(const FeSpace &space);

/// Single-element detection of candidate against previous. Never throws.
ElementReport detect(const Discretization &disc, const Stencils &st, const std::vector<State> &candidate,
                     const std::vector<State> &previous, int k, const CascadeConfig &cfg);

/// Relative difference between linear and quadratic least-squares fits of
/// the values over the points, relative to max |value|. Infinite when the
/// points cannot determine a quadratic (never counted as smooth).
double smoothness_indicator(const std::vector<Vec2> &points, const std::vector<double> &values);

struct MoodResult
{
  FieldState next;
  DetectorReport report;
  /// sum over stages of jump production
  double production = 0.0;
};

/// One forward-Euler sub-update with per-element cascade recomputation.
MoodResult mood_substep(const Discretization &disc, const Stencils &st, const std::vector<State> &u,
                        double dt, const CascadeConfig &cfg);

/// MOOD applied to every explicit stage of the integrator.
MoodResult mood_step(const Discretization &disc, const Stencils &st, const FieldState &s, double dt,
                     const CascadeConfig &cfg, Integrator integrator);

} // namespace rd
