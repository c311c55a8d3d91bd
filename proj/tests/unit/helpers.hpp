#pragma once

#include "rdeuler/app.hpp"

#include <random>

namespace rdtest {

using namespace rd;

inline State random_state(std::mt19937_64 &rng, const GasModel &gas)
{
  std::uniform_real_distribution<double> rho(0.2, 2.0), vel(-1.0, 1.0), p(0.2, 2.0);
  return from_primitive(rho(rng), vel(rng), vel(rng), p(rng), gas);
}

inline std::vector<State> random_field(std::mt19937_64 &rng, int n, const GasModel &gas)
{
  std::vector<State> u(n);
  for (auto &w : u) w = random_state(rng, gas);
  return u;
}

/// Mesh, space and discretization held together.
struct Bundle
{
  Mesh mesh;
  std::unique_ptr<FeSpace> space;
  std::unique_ptr<Discretization> disc;

  Bundle(Mesh m, SpaceKind s, BasisKind b, int degree, ResidualParams p = {})
    : mesh(std::move(m))
  {
    space = std::make_unique<FeSpace>(mesh, build_dofmap(mesh, s, b, degree));
    disc = std::make_unique<Discretization>(*space, GasModel{}, p);
  }
};

inline Mesh reference_triangle()
{
  return build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
}

inline double max_abs_diff(const State &a, const State &b) { return max_abs(a - b); }

} // namespace rdtest
