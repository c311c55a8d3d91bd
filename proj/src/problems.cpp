#include "rdeuler/problems.hpp"

#include <numbers>

namespace rd {

namespace {

double wrap(double d, double len)
{
  d = std::fmod(d, len);
  if (d > 0.5 * len) d -= len;
  if (d < -0.5 * len) d += len;
  return d;
}

} // namespace

State vortex_state(const Vec2 &x, double t, const VortexParams &p, const GasModel &gas)
{
  const double lx = p.hi.x - p.lo.x, ly = p.hi.y - p.lo.y;
  const double cx = p.center.x + std::fmod(p.u_inf * t, lx);
  const double cy = p.center.y + std::fmod(p.v_inf * t, ly);
  const double dx = wrap(x.x - cx, lx), dy = wrap(x.y - cy, ly);
  const double r2 = dx * dx + dy * dy;
  const double ex = std::exp(0.5 * (1.0 - r2));
  const double pi = std::numbers::pi;
  const double g = gas.gamma;
  const double et = p.profile == VortexProfile::Equilibrium ? ex * ex : ex;
  const double temp = 1.0 - (g - 1.0) * p.beta * p.beta / (8.0 * g * pi * pi) * et;
  if (!(temp > 0.0)) throw Error(ErrorKind::InadmissibleParameters, "vortex temperature is not positive");
  const double rho = std::pow(temp, 1.0 / (g - 1.0));
  const double u = p.u_inf - dy * p.beta / (2.0 * pi) * ex;
  const double v = p.v_inf + dx * p.beta / (2.0 * pi) * ex;
  return State(rho, rho * u, rho * v, std::pow(rho, g) / (g - 1.0) + 0.5 * rho * (u * u + v * v));
}

std::vector<State> init_vortex(const FeSpace &space, const VortexParams &p, const GasModel &gas)
{
  return exact_vortex(space, 0.0, p, gas);
}

std::vector<State> exact_vortex(const FeSpace &space, double t, const VortexParams &p, const GasModel &gas)
{
  // the centre is the extremum of the temperature dip
  vortex_state(p.center, 0.0, p, gas);
  std::vector<State> u = space.interpolate([&](const Vec2 &x) { return vortex_state(x, t, p, gas); });
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!admissible(u[i], gas))
      throw Error(ErrorKind::InadmissibleParameters, "vortex DOF " + std::to_string(i) + " is not admissible");
  return u;
}

State sod_state(const Vec2 &x, const SodParams &p, const GasModel &gas)
{
  // inside indicator in [0, 1]
  const double s = 0.5 * (std::tanh((x.x - p.x_a) / p.width) - std::tanh((x.x - p.x_b) / p.width));
  const double rho = p.rho_l + (p.rho_r - p.rho_l) * s;
  const double pr = p.p_l + (p.p_r - p.p_l) * s;
  return from_primitive(rho, 0.0, 0.0, pr, gas);
}

std::vector<State> init_sod_smooth(const FeSpace &space, const SodParams &p, const GasModel &gas)
{
  return space.interpolate([&](const Vec2 &x) { return sod_state(x, p, gas); });
}

std::vector<State> init_constant(const FeSpace &space, const State &w)
{
  return std::vector<State>(space.n_dofs(), w);
}

} // namespace rd
