#pragma once

#include "rdeuler/core.hpp"

#include <Eigen/Dense>
#include <vector>

namespace rd {

struct GasModel
{
  double gamma = 1.4;
  double rho_floor = 1e-12;
  double e_floor = 1e-12;
};

/// p = (gamma-1)(E - |m|^2/(2 rho)); no admissibility check
inline double pressure(const State &u, const GasModel &gas)
{
  return (gas.gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0]);
}

/// E - |m|^2/(2 rho)
inline double internal_energy(const State &u)
{
  return u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0];
}

/// Physical flux. Throws VacuumState if rho <= rho_floor.
Flux flux(const State &u, const GasModel &gas);
/// Same formula without any check, for candidate states that may be invalid.
Flux flux_unchecked(const State &u, const GasModel &gas);

double entropy_eta(const State &u, const GasModel &gas);
Vec2 entropy_flux(const State &u, const GasModel &gas);
Vec2 entropy_potential(const State &u);
State entropy_vars(const State &u, const GasModel &gas);
/// unchecked variants used inside the residual kernels
double entropy_eta_unchecked(const State &u, const GasModel &gas);
State entropy_vars_unchecked(const State &u, const GasModel &gas);

/// d^2 eta / dU^2 = dV/dU, closed form
Eigen::Matrix4d entropy_hessian(const State &u, const GasModel &gas);
Eigen::Matrix4d entropy_hessian_unchecked(const State &u, const GasModel &gas);

double sound_speed(const State &u, const GasModel &gas);
double max_wavespeed(const State &u, const GasModel &gas);
double max_wavespeed_unchecked(const State &u, const GasModel &gas);

bool admissible(const State &u, const GasModel &gas);

double wu_shu_functional(const State &u, const Vec2 &v);

bool bernstein_admissible(const std::vector<State> &dof_states, const GasModel &gas);

/// conversion from primitive variables
State from_primitive(double rho, double ux, double uy, double p, const GasModel &gas);

} // namespace rd
