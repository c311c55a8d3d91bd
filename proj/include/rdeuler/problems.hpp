#pragma once

#include "rdeuler/euler.hpp"
#include "rdeuler/fe_basis.hpp"

#include <functional>
#include <vector>

namespace rd {

/// Equilibrium: temperature dip exp(1 - r^2), an exact steady solution moving
/// with the free stream. Literal: dip exp((1 - r^2)/2), same amplitude, not in
/// radial equilibrium.
enum class VortexProfile { Equilibrium, Literal };

struct VortexParams
{
  VortexProfile profile = VortexProfile::Equilibrium;
  double beta = 5.0;
  double u_inf = 1.0;
  double v_inf = 0.0;
  Vec2 center{0.0, 0.0};
  /// periodic box the vortex lives in
  Vec2 lo{-5.0, -5.0};
  Vec2 hi{5.0, 5.0};
};

/// Isentropic vortex at x, with the centre translated by (u_inf t, v_inf t)
/// modulo the box; distances use the nearest periodic image.
State vortex_state(const Vec2 &x, double t, const VortexParams &p, const GasModel &gas);

/// DOF values of the vortex at time 0; throws InadmissibleParameters when the
/// centre density is not positive.
std::vector<State> init_vortex(const FeSpace &space, const VortexParams &p, const GasModel &gas);
std::vector<State> exact_vortex(const FeSpace &space, double t, const VortexParams &p, const GasModel &gas);

/// Periodic two-jump density/pressure profile in x smoothed by tanh fronts:
/// left state outside [x_a, x_b], right state inside.
struct SodParams
{
  double rho_l = 1.0, p_l = 1.0;
  double rho_r = 0.125, p_r = 0.1;
  double x_a = 0.25, x_b = 0.75;
  double width = 0.005;
};
State sod_state(const Vec2 &x, const SodParams &p, const GasModel &gas);
std::vector<State> init_sod_smooth(const FeSpace &space, const SodParams &p, const GasModel &gas);

std::vector<State> init_constant(const FeSpace &space, const State &w);

} // namespace rd
