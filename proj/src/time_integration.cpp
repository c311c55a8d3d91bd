#include "rdeuler/time_integration.hpp"

#include "rdeuler/parallel.hpp"

#include <Eigen/SparseLU>
#include <algorithm>

namespace rd {

Discretization::Discretization(const FeSpace &space, GasModel gas, ResidualParams params)
  : space_(&space), gas_(gas), params_(params), geo_(build_geometry_tables(space))
{}

AlphaBound Discretization::alpha(int k, const std::vector<State> &u) const
{
  if (params_.flux_mode == FluxMode::Interpolated)
    return alpha_interpolated(*space_, geo_, k, u, gas_);
  return alpha_noninterpolated(*space_, geo_, k, u, gas_);
}

std::vector<double> Discretization::alphas(const std::vector<State> &u) const
{
  std::vector<double> a(space_->n_elems());
  parallel_for(space_->n_elems(), [&](int b, int e) {
    for (int k = b; k < e; ++k) a[k] = alpha(k, u).value;
  });
  return a;
}

double Discretization::timestep(const std::vector<State> &u, double cfl, double dt_cap) const
{
  return admissible_timestep(space_->mesh(), space_->dofs(), alphas(u), cfl, dt_cap);
}

bool SchemeAssignment::needs_entropy_vars() const
{
  for (const auto &s : levels)
    if (s.entropy_correction || s.jump_diffusion) return true;
  return false;
}

bool SchemeAssignment::needs_alpha() const
{
  for (const auto &s : levels)
    if (s.lxf_family()) return true;
  return false;
}

void evaluate_element(const Discretization &disc, const FieldCache &cache, int k,
                      const SchemeSpec &spec, double alpha, ElementContribution &out)
{
  const ResidualContext ctx{disc.space(), disc.gas(), disc.params(), cache};
  out.edge.clear();
  out.production = 0.0;
  ElementResidual base;
  switch (spec.kind) {
  case SchemeKind::Galerkin: base = galerkin_residual(ctx, k); break;
  case SchemeKind::Dg: base = dg_residual(ctx, k); break;
  case SchemeKind::GalerkinJump:
    base = galerkin_jump_residual(ctx, k, disc.params().lambda_u * element_wavespeed(ctx, k), out.edge);
    break;
  case SchemeKind::Lxf: base = lxf_residual(ctx, k, alpha); break;
  case SchemeKind::LxfGalerkin: base = lxf_galerkin_residual(ctx, k, alpha); break;
  case SchemeKind::LimitedLxf: base = limited_lxf_residual(ctx, k, alpha); break;
  }
  out.n = base.n;
  const int *d = disc.space().dofs().element(k);
  for (int s = 0; s < base.n; ++s) out.dof[s] = d[s];
  if (spec.entropy_correction || spec.jump_diffusion) {
    const double lambda = spec.jump_diffusion ? entropy_jump_coefficient(ctx, k) : 0.0;
    const CorrectedResidual cr =
        corrected_residual(ctx, k, base, spec.entropy_correction, lambda, disc.params().zeta);
    for (int s = 0; s < base.n; ++s) out.local[s] = cr.theta[s];
    for (int i = 0; i < cr.psi.count; ++i) out.edge.add(cr.psi.items[i].dof, cr.psi.items[i].value);
    out.production = cr.production;
  } else {
    for (int s = 0; s < base.n; ++s) out.local[s] = base.phi[s];
  }
}

namespace {

void check_strict(const Discretization &disc, const std::vector<State> &u)
{
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i][0] > disc.gas().rho_floor))
      throw Error(ErrorKind::VacuumState, "DOF " + std::to_string(i));
    if (!(internal_energy(u[i]) >= disc.gas().e_floor))
      throw Error(ErrorKind::NonPositivePressure, "DOF " + std::to_string(i));
  }
}

} // namespace

Rhs assemble_rhs(const Discretization &disc, const std::vector<State> &u,
                 const SchemeAssignment &scheme, bool strict)
{
  if (strict) check_strict(disc, u);
  const int ne = disc.space().n_elems();
  const FieldCache cache = make_cache(u, disc.gas(), scheme.needs_entropy_vars());
  Rhs out;
  if (scheme.needs_alpha()) out.alpha = disc.alphas(u);
  thread_local std::vector<ElementContribution> buffer;
  // workers must see the caller's buffer, not their own thread_local one
  std::vector<ElementContribution> &work = buffer;
  work.resize(ne);
  parallel_for(ne, [&](int b, int e) {
    for (int k = b; k < e; ++k)
      evaluate_element(disc, cache, k, scheme.of(k), out.alpha.empty() ? 0.0 : out.alpha[k], work[k]);
  });
  out.r.assign(u.size(), State());
  for (int k = 0; k < ne; ++k) {
    const ElementContribution &c = work[k];
    for (int s = 0; s < c.n; ++s) out.r[c.dof[s]] += c.local[s];
    for (int i = 0; i < c.edge.count; ++i) out.r[c.edge.items[i].dof] += c.edge.items[i].value;
    out.production += c.production;
  }
  return out;
}

std::vector<State> assemble_galerkin_reference(const Discretization &disc, const std::vector<State> &u)
{
  const FieldCache cache = make_cache(u, disc.gas(), false);
  const ResidualContext ctx{disc.space(), disc.gas(), disc.params(), cache};
  std::vector<State> r(u.size());
  for (int k = 0; k < disc.space().n_elems(); ++k) {
    const ElementResidual g = galerkin_reference(ctx, k);
    const int *d = disc.space().dofs().element(k);
    for (int s = 0; s < g.n; ++s) r[d[s]] += g.phi[s];
  }
  return r;
}

std::vector<State> apply_update(const Discretization &disc, const std::vector<State> &u,
                                const std::vector<State> &r, double dt)
{
  const auto &c = disc.space().dual_volumes();
  std::vector<State> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] - (dt / c[i]) * r[i];
  return out;
}

FieldState forward_euler_step(const Discretization &disc, const FieldState &s,
                              const SchemeAssignment &scheme, double dt, StepRecorder *rec)
{
  const Rhs r = assemble_rhs(disc, s.u, scheme);
  FieldState out;
  out.t = s.t + dt;
  out.u = apply_update(disc, s.u, r.r, dt);
  out.provenance = s.provenance;
  if (rec) {
    StageRecord st;
    st.weight = dt;
    st.production = r.production;
    if (rec->keep_fields) {
      st.u = s.u;
      st.r = r.r;
    }
    rec->stages.push_back(std::move(st));
  }
  return out;
}

FieldState ssp_rk2_step(const Discretization &disc, const FieldState &s,
                        const SchemeAssignment &scheme, double dt, StepRecorder *rec)
{
  const Rhs r0 = assemble_rhs(disc, s.u, scheme);
  const std::vector<State> u1 = apply_update(disc, s.u, r0.r, dt);
  const Rhs r1 = assemble_rhs(disc, u1, scheme);
  const auto &c = disc.space().dual_volumes();
  FieldState out;
  out.t = s.t + dt;
  out.provenance = s.provenance;
  out.u.resize(s.u.size());
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    const State u2 = u1[i] - (dt / c[i]) * r1.r[i];
    out.u[i] = 0.5 * s.u[i] + 0.5 * u2;
  }
  if (rec) {
    StageRecord a, b;
    a.weight = b.weight = 0.5 * dt;
    a.production = r0.production;
    b.production = r1.production;
    if (rec->keep_fields) {
      a.u = s.u;
      a.r = r0.r;
      b.u = u1;
      b.r = r1.r;
    }
    rec->stages.push_back(std::move(a));
    rec->stages.push_back(std::move(b));
  }
  return out;
}

DensitySystem assemble_density_system(const Discretization &disc, const FieldState &s, double dt,
                                      const std::vector<double> &alpha,
                                      const std::vector<Vec2> &velocity)
{
  const FeSpace &sp = disc.space();
  if (!sp.continuous())
    throw Error(ErrorKind::Config, "the implicit density system needs a continuous space");
  const GeometryTables &geo = disc.geometry();
  const int n = sp.n_local();
  const int nd = sp.n_dofs();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(sp.n_elems()) * n * n + nd);
  const auto &c = sp.dual_volumes();
  for (int i = 0; i < nd; ++i) trip.emplace_back(i, i, c[i]);
  for (int k = 0; k < sp.n_elems(); ++k) {
    const int *d = sp.dofs().element(k);
    const Vec2 *g = geo.gmat_of(k);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double cab = dot(g[a * n + b], velocity[d[b]]) + alpha[k] * ((a == b ? 1.0 : 0.0) - 1.0 / n);
        trip.emplace_back(d[a], d[b], dt * cab);
      }
  }
  DensitySystem sys;
  sys.matrix.resize(nd, nd);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.makeCompressed();
  sys.rhs.resize(nd);
  for (int i = 0; i < nd; ++i) sys.rhs[i] = c[i] * s.u[i][0];

  double scale = 0.0;
  for (int i = 0; i < nd; ++i) scale = std::max(scale, c[i]);
  for (int col = 0; col < sys.matrix.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, col); it; ++it)
      if (it.row() != it.col() && it.value() > 1e-14 * scale)
        throw Error(ErrorKind::AlphaTooSmall, "positive off-diagonal at (" + std::to_string(it.row()) +
                                                  "," + std::to_string(it.col()) + ")");
  return sys;
}

std::vector<double> solve_density(const DensitySystem &sys)
{
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(sys.matrix);
  if (lu.info() != Eigen::Success) throw Error(ErrorKind::PicardDivergence, "density matrix factorization failed");
  const Eigen::VectorXd x = lu.solve(sys.rhs);
  return std::vector<double>(x.data(), x.data() + x.size());
}

FieldState implicit_euler_step(const Discretization &disc, const FieldState &s, double dt,
                               const ImplicitOptions &opt, ImplicitReport *report)
{
  const FeSpace &sp = disc.space();
  if (!sp.continuous())
    throw Error(ErrorKind::Config, "implicit Euler is implemented for continuous spaces");
  const GeometryTables &geo = disc.geometry();
  const int n = sp.n_local();
  const int nd = sp.n_dofs();
  const auto &c = sp.dual_volumes();

  std::vector<double> alpha(sp.n_elems(), 0.0);
  std::vector<State> it = s.u;
  double change = 0.0;
  for (int iter = 1; iter <= opt.max_iterations; ++iter) {
    for (int k = 0; k < sp.n_elems(); ++k)
      alpha[k] = std::max(alpha[k], alpha_implicit(sp, geo, k, it, disc.gas()).value);
    std::vector<Vec2> vel(nd);
    std::vector<double> p(nd);
    for (int i = 0; i < nd; ++i) {
      vel[i] = {it[i][1] / it[i][0], it[i][2] / it[i][0]};
      p[i] = pressure(it[i], disc.gas());
    }
    FieldState frozen{s.t, s.u, s.provenance};
    const DensitySystem sys = assemble_density_system(disc, frozen, dt, alpha, vel);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(sys.matrix);
    if (lu.info() != Eigen::Success)
      throw Error(ErrorKind::PicardDivergence, "implicit matrix factorization failed");

    // pressure parts of the momentum and energy fluxes go to the right-hand side
    Eigen::MatrixXd rhs(nd, 4);
    for (int i = 0; i < nd; ++i)
      for (int q = 0; q < 4; ++q) rhs(i, q) = c[i] * s.u[i][q];
    for (int k = 0; k < sp.n_elems(); ++k) {
      const int *d = sp.dofs().element(k);
      const Vec2 *g = geo.gmat_of(k);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const Vec2 &gab = g[a * n + b];
          const double pb = p[d[b]];
          rhs(d[a], 1) -= dt * gab.x * pb;
          rhs(d[a], 2) -= dt * gab.y * pb;
          rhs(d[a], 3) -= dt * dot(gab, vel[d[b]]) * pb;
        }
    }
    const Eigen::MatrixXd x = lu.solve(rhs);
    change = 0.0;
    std::array<double, 4> scale{};
    for (int i = 0; i < nd; ++i)
      for (int q = 0; q < 4; ++q) scale[q] = std::max(scale[q], std::abs(x(i, q)));
    std::vector<State> next(nd);
    for (int i = 0; i < nd; ++i) {
      next[i] = State(x(i, 0), x(i, 1), x(i, 2), x(i, 3));
      for (int q = 0; q < 4; ++q)
        change = std::max(change, std::abs(next[i][q] - it[i][q]) / std::max(scale[q], 1e-300));
    }
    it = std::move(next);
    if (report) {
      report->iterations = iter;
      report->last_change = change;
    }
    if (!(change <= opt.tolerance)) continue;
    FieldState out;
    out.t = s.t + dt;
    out.u = std::move(it);
    out.provenance = s.provenance;
    return out;
  }
  throw Error(ErrorKind::PicardDivergence,
              "no convergence after " + std::to_string(opt.max_iterations) +
                  " iterations, last relative change " + std::to_string(change));
}

State totals(const Discretization &disc, const std::vector<State> &u)
{
  const auto &c = disc.space().dual_volumes();
  State t;
  for (std::size_t i = 0; i < u.size(); ++i) t += c[i] * u[i];
  return t;
}

} // namespace rd
