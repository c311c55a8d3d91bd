#include "rdeuler/euler.hpp"

namespace rd {

namespace {

void require_density(const State &u, const GasModel &gas)
{
  if (!(u[0] > gas.rho_floor))
    throw Error(ErrorKind::VacuumState, "density " + std::to_string(u[0]) + " at or below floor");
}

void require_thermo(const State &u, const GasModel &gas)
{
  require_density(u, gas);
  if (!(pressure(u, gas) > (gas.gamma - 1.0) * gas.e_floor))
    throw Error(ErrorKind::NonPositivePressure, "pressure " + std::to_string(pressure(u, gas)));
}

} // namespace

Flux flux_unchecked(const State &u, const GasModel &gas)
{
  const double ux = u[1] / u[0], uy = u[2] / u[0];
  const double p = pressure(u, gas);
  Flux f;
  f.fx = State(u[1], u[1] * ux + p, u[2] * ux, ux * (u[3] + p));
  f.fy = State(u[2], u[1] * uy, u[2] * uy + p, uy * (u[3] + p));
  return f;
}

Flux flux(const State &u, const GasModel &gas)
{
  require_density(u, gas);
  return flux_unchecked(u, gas);
}

double entropy_eta_unchecked(const State &u, const GasModel &gas)
{
  const double p = pressure(u, gas);
  const double s = std::log(p) - gas.gamma * std::log(u[0]);
  return -u[0] * s / (gas.gamma - 1.0);
}

double entropy_eta(const State &u, const GasModel &gas)
{
  require_thermo(u, gas);
  return entropy_eta_unchecked(u, gas);
}

Vec2 entropy_flux(const State &u, const GasModel &gas)
{
  const double eta = entropy_eta(u, gas);
  return {eta * u[1] / u[0], eta * u[2] / u[0]};
}

Vec2 entropy_potential(const State &u) { return {u[1], u[2]}; }

State entropy_vars_unchecked(const State &u, const GasModel &gas)
{
  const double g = gas.gamma;
  const double p = pressure(u, gas);
  const double s = std::log(p) - g * std::log(u[0]);
  const double beta = u[0] / p;
  const double ux = u[1] / u[0], uy = u[2] / u[0];
  return State((g - s) / (g - 1.0) - 0.5 * beta * (ux * ux + uy * uy), beta * ux, beta * uy, -beta);
}

State entropy_vars(const State &u, const GasModel &gas)
{
  require_thermo(u, gas);
  return entropy_vars_unchecked(u, gas);
}

Eigen::Matrix4d entropy_hessian_unchecked(const State &u, const GasModel &gas)
{
  const double g = gas.gamma;
  const double rho = u[0];
  const double ux = u[1] / rho, uy = u[2] / rho;
  const double q = 0.5 * (ux * ux + uy * uy);
  const double p = pressure(u, gas);
  const double beta = rho / p;
  const double dp[4] = {(g - 1.0) * q, -(g - 1.0) * ux, -(g - 1.0) * uy, g - 1.0};
  const double dux[4] = {-ux / rho, 1.0 / rho, 0.0, 0.0};
  const double duy[4] = {-uy / rho, 0.0, 1.0 / rho, 0.0};
  const double dq[4] = {-2.0 * q / rho, ux / rho, uy / rho, 0.0};
  Eigen::Matrix4d a;
  for (int j = 0; j < 4; ++j) {
    const double db = ((j == 0 ? 1.0 : 0.0) - beta * dp[j]) / p;
    const double ds = dp[j] / p - (j == 0 ? g / rho : 0.0);
    a(0, j) = -ds / (g - 1.0) - q * db - beta * dq[j];
    a(1, j) = ux * db + beta * dux[j];
    a(2, j) = uy * db + beta * duy[j];
    a(3, j) = -db;
  }
  return a;
}

Eigen::Matrix4d entropy_hessian(const State &u, const GasModel &gas)
{
  require_thermo(u, gas);
  return entropy_hessian_unchecked(u, gas);
}

double sound_speed(const State &u, const GasModel &gas)
{
  require_thermo(u, gas);
  return std::sqrt(gas.gamma * pressure(u, gas) / u[0]);
}

double max_wavespeed_unchecked(const State &u, const GasModel &gas)
{
  const double ux = u[1] / u[0], uy = u[2] / u[0];
  return std::hypot(ux, uy) + std::sqrt(gas.gamma * pressure(u, gas) / u[0]);
}

double max_wavespeed(const State &u, const GasModel &gas)
{
  require_thermo(u, gas);
  return max_wavespeed_unchecked(u, gas);
}

bool admissible(const State &u, const GasModel &gas)
{
  if (!finite(u)) return false;
  if (!(u[0] >= gas.rho_floor) || u[0] <= 0.0) return false;
  return internal_energy(u) >= gas.e_floor;
}

double wu_shu_functional(const State &u, const Vec2 &v)
{
  return 0.5 * dot(v, v) * u[0] - v.x * u[1] - v.y * u[2] + u[3];
}

bool bernstein_admissible(const std::vector<State> &dof_states, const GasModel &gas)
{
  for (const State &u : dof_states)
    if (!admissible(u, gas)) return false;
  return true;
}

State from_primitive(double rho, double ux, double uy, double p, const GasModel &gas)
{
  return State(rho, rho * ux, rho * uy, p / (gas.gamma - 1.0) + 0.5 * rho * (ux * ux + uy * uy));
}

} // namespace rd
