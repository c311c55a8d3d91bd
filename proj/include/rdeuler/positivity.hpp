#pragma once

#include "rdeuler/euler.hpp"
#include "rdeuler/fe_basis.hpp"

#include <vector>

namespace rd {

enum class AlphaCase { Interpolated, NonInterpolated, Implicit };

struct AlphaBound
{
  double value = 0.0;
  AlphaCase kind = AlphaCase::Interpolated;
  /// max norm of the geometric factor that entered the bound
  double geometry = 0.0;
  /// max wavespeed that entered the bound
  double wavespeed = 0.0;
};

/// Per-element basis integrals, n_local^2 entries each (row sigma, column sigma'):
///   omega = 2 N_K \int phi_sigma grad phi_sigma'
///   nmat  = -\int grad phi_sigma phi_sigma' + \oint phi_sigma phi_sigma' n
///   gmat  = \int phi_sigma grad phi_sigma'
struct GeometryTables
{
  int n = 0;
  std::vector<Vec2> omega;
  std::vector<Vec2> nmat;
  std::vector<Vec2> gmat;
  std::vector<double> max_omega;
  std::vector<double> max_n;
  std::vector<double> max_g;

  const Vec2 *omega_of(int k) const { return omega.data() + static_cast<std::size_t>(k) * n * n; }
  const Vec2 *nmat_of(int k) const { return nmat.data() + static_cast<std::size_t>(k) * n * n; }
  const Vec2 *gmat_of(int k) const { return gmat.data() + static_cast<std::size_t>(k) * n * n; }
};

GeometryTables build_geometry_tables(const FeSpace &space);

/// omega table of one element, row-major
std::vector<Vec2> scaled_normals(const FeSpace &space, int k);

/// max over sample states and pairs of |u.omega| + a |omega|. Bernstein
/// samples include the Lagrange-point values.
AlphaBound alpha_interpolated(const FeSpace &space, const GeometryTables &geo, int k,
                              const std::vector<State> &u, const GasModel &gas);

/// 1.1 * max_{DOFs, quadrature points}(|u|+a) * max |N_{sigma sigma'}|
AlphaBound alpha_noninterpolated(const FeSpace &space, const GeometryTables &geo, int k,
                                 const std::vector<State> &u, const GasModel &gas);

/// N_K * max_{DOFs}(|u|+a) * max |\int phi_sigma grad phi_sigma'|
AlphaBound alpha_implicit(const FeSpace &space, const GeometryTables &geo, int k,
                          const std::vector<State> &u, const GasModel &gas);

constexpr double kNonInterpolatedSafety = 1.1;

/// dt = cfl * min_K |K_sigma| / (N_K alpha_K); cfl * dt_cap when every alpha is 0
double admissible_timestep(const Mesh &mesh, const DofMap &dofmap, const std::vector<double> &alphas,
                           double cfl, double dt_cap);

struct Split1d
{
  State llf;
  State tilde;
  State tilde2;
};

/// Local Lax-Friedrichs update of the middle cell of a 1D triple (y momentum
/// ignored) and the two split updates whose average it is.
Split1d split_1d(const State &ul, const State &um, const State &ur, double nu, double ratio,
                 const GasModel &gas);
State split_1d_oracle(const State &ul, const State &um, const State &ur, double nu, double ratio,
                      const GasModel &gas);

} // namespace rd
