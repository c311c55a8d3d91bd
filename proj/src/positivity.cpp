#include "rdeuler/positivity.hpp"

#include <algorithm>
#include <limits>

namespace rd {

GeometryTables build_geometry_tables(const FeSpace &space)
{
  const Mesh &mesh = space.mesh();
  const int n = space.n_local();
  const int ne = mesh.n_elems();
  GeometryTables t;
  t.n = n;
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  t.omega.assign(nn * ne, Vec2{});
  t.nmat.assign(nn * ne, Vec2{});
  t.gmat.assign(nn * ne, Vec2{});
  t.max_omega.assign(ne, 0.0);
  t.max_n.assign(ne, 0.0);
  t.max_g.assign(ne, 0.0);
  for (int k = 0; k < ne; ++k) {
    Vec2 *g = t.gmat.data() + nn * k;
    Vec2 *nm = t.nmat.data() + nn * k;
    Vec2 *om = t.omega.data() + nn * k;
    for (int q = 0; q < space.n_qp(); ++q) {
      const auto &val = space.val(q);
      const Vec2 *gr = space.grad(k, q);
      const double w = space.qw(k, q);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          g[a * n + b] += (w * val[a]) * gr[b];
          nm[a * n + b] -= (w * val[b]) * gr[a];
        }
    }
    for (int e = 0; e < 3; ++e)
      for (int j = 0; j < space.n_eqp(); ++j) {
        const auto &val = space.edge_val(e, j);
        const Vec2 nrm = mesh.normal[k][e];
        const double w = space.eqw(k, e, j);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) nm[a * n + b] += (w * val[a] * val[b]) * nrm;
      }
    for (std::size_t i = 0; i < nn; ++i) {
      om[i] = (2.0 * n) * g[i];
      t.max_omega[k] = std::max(t.max_omega[k], norm(om[i]));
      t.max_n[k] = std::max(t.max_n[k], norm(nm[i]));
      t.max_g[k] = std::max(t.max_g[k], norm(g[i]));
    }
  }
  return t;
}

std::vector<Vec2> scaled_normals(const FeSpace &space, int k)
{
  const int n = space.n_local();
  std::vector<Vec2> om(static_cast<std::size_t>(n) * n);
  for (int q = 0; q < space.n_qp(); ++q) {
    const auto &val = space.val(q);
    const Vec2 *gr = space.grad(k, q);
    const double w = space.qw(k, q);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) om[a * n + b] += (2.0 * n * w * val[a]) * gr[b];
  }
  return om;
}

namespace {

// local sample states of element k: DOF values, plus Lagrange-point values for Bernstein
int sample_states(const FeSpace &space, int k, const std::vector<State> &u,
                  std::array<State, 2 * kMaxLocal> &out)
{
  const int n = space.n_local();
  const int *d = space.dofs().element(k);
  for (int s = 0; s < n; ++s) out[s] = u[d[s]];
  if (space.dofs().basis != BasisKind::Bernstein || space.dofs().degree == 1) return n;
  static const BernsteinLagrangeMap m2 = bernstein_to_lagrange(2);
  for (int l = 0; l < n; ++l) {
    State v;
    for (int s = 0; s < n; ++s) v += m2.m[l][s] * out[s];
    out[n + l] = v;
  }
  return 2 * n;
}

} // namespace

AlphaBound alpha_interpolated(const FeSpace &space, const GeometryTables &geo, int k,
                              const std::vector<State> &u, const GasModel &gas)
{
  std::array<State, 2 * kMaxLocal> st;
  const int ns = sample_states(space, k, u, st);
  const int n = geo.n;
  const Vec2 *om = geo.omega_of(k);
  AlphaBound b;
  b.kind = AlphaCase::Interpolated;
  b.geometry = geo.max_omega[k];
  for (int i = 0; i < ns; ++i) {
    const State &w = st[i];
    const Vec2 vel{w[1] / w[0], w[2] / w[0]};
    const double a = std::sqrt(gas.gamma * pressure(w, gas) / w[0]);
    b.wavespeed = std::max(b.wavespeed, norm(vel) + a);
    for (int p = 0; p < n * n; ++p)
      b.value = std::max(b.value, std::abs(dot(vel, om[p])) + a * norm(om[p]));
  }
  return b;
}

AlphaBound alpha_noninterpolated(const FeSpace &space, const GeometryTables &geo, int k,
                                 const std::vector<State> &u, const GasModel &gas)
{
  std::array<State, 2 * kMaxLocal> st;
  const int ns = sample_states(space, k, u, st);
  const int n = space.n_local();
  double smax = 0.0;
  for (int i = 0; i < ns; ++i) smax = std::max(smax, max_wavespeed_unchecked(st[i], gas));
  auto at = [&](const std::array<double, kMaxLocal> &val) {
    State w;
    for (int s = 0; s < n; ++s) w += val[s] * st[s];
    smax = std::max(smax, max_wavespeed_unchecked(w, gas));
  };
  for (int q = 0; q < space.n_qp(); ++q) at(space.val(q));
  for (int e = 0; e < 3; ++e)
    for (int j = 0; j < space.n_eqp(); ++j) at(space.edge_val(e, j));
  AlphaBound b;
  b.kind = AlphaCase::NonInterpolated;
  b.geometry = geo.max_n[k];
  b.wavespeed = smax;
  b.value = kNonInterpolatedSafety * smax * geo.max_n[k];
  return b;
}

AlphaBound alpha_implicit(const FeSpace &space, const GeometryTables &geo, int k,
                          const std::vector<State> &u, const GasModel &gas)
{
  std::array<State, 2 * kMaxLocal> st;
  const int ns = sample_states(space, k, u, st);
  double smax = 0.0;
  for (int i = 0; i < ns; ++i) smax = std::max(smax, max_wavespeed_unchecked(st[i], gas));
  AlphaBound b;
  b.kind = AlphaCase::Implicit;
  b.geometry = geo.max_g[k];
  b.wavespeed = smax;
  b.value = space.n_local() * smax * geo.max_g[k];
  return b;
}

double admissible_timestep(const Mesh &mesh, const DofMap &dofmap, const std::vector<double> &alphas,
                           double cfl, double dt_cap)
{
  const int n = dofmap.n_local;
  double dt = std::numeric_limits<double>::infinity();
  for (int k = 0; k < mesh.n_elems(); ++k) {
    if (!(alphas[k] > 0.0)) continue;
    dt = std::min(dt, (mesh.area[k] / n) / (n * alphas[k]));
  }
  if (!std::isfinite(dt)) return cfl * dt_cap;
  return cfl * dt;
}

Split1d split_1d(const State &ul, const State &um, const State &ur, double nu, double ratio,
                 const GasModel &gas)
{
  const double smax = std::max({max_wavespeed(ul, gas), max_wavespeed(um, gas), max_wavespeed(ur, gas)});
  if (nu < smax * (1.0 - 1e-12))
    throw Error(ErrorKind::CflViolation, "nu below the local max wavespeed");
  if (2.0 * nu * ratio > 1.0 + 1e-12)
    throw Error(ErrorKind::CflViolation, "2 nu dt/dx exceeds 1");
  const State fl = flux(ul, gas).fx, fm = flux(um, gas).fx, fr = flux(ur, gas).fx;
  auto fhat = [nu](const State &fa, const State &ua, const State &fb, const State &ub) {
    return 0.5 * (fa + fb) - 0.5 * nu * (ub - ua);
  };
  Split1d r;
  r.llf = um - ratio * (fhat(fm, um, fr, ur) - fhat(fl, ul, fm, um));
  r.tilde = um - ratio * ((fm + nu * um) - (fl + nu * ul));
  r.tilde2 = um - ratio * ((fr - nu * ur) - (fm - nu * um));
  return r;
}

State split_1d_oracle(const State &ul, const State &um, const State &ur, double nu, double ratio,
                      const GasModel &gas)
{
  return split_1d(ul, um, ur, nu, ratio, gas).llf;
}

} // namespace rd
