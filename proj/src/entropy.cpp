#include "rdeuler/entropy.hpp"

#include <algorithm>

namespace rd {

double correction_term(const State *v, const State *phi, int n, double g_boundary, double guard,
                       State *r, double *alpha_corr)
{
  State mean;
  double vv = 0.0;
  for (int s = 0; s < n; ++s) {
    mean += v[s];
    vv += dot(v[s], v[s]);
  }
  mean *= 1.0 / n;
  vv /= n;
  double e = g_boundary;
  double denom = 0.0;
  for (int s = 0; s < n; ++s) {
    e -= dot(v[s], phi[s]);
    const State d = v[s] - mean;
    denom += dot(d, d);
  }
  double a = 0.0;
  if (denom > guard * vv) a = e / denom;
  for (int s = 0; s < n; ++s) r[s] = a * (v[s] - mean);
  if (alpha_corr) *alpha_corr = a;
  return e;
}

double entropy_numerical_flux(const State &ul, const State &ur, const Vec2 &n, const GasModel &gas)
{
  const double el = entropy_eta_unchecked(ul, gas), er = entropy_eta_unchecked(ur, gas);
  const double gl = el * (ul[1] * n.x + ul[2] * n.y) / ul[0];
  const double gr = er * (ur[1] * n.x + ur[2] * n.y) / ur[0];
  const double s = std::max(max_wavespeed_unchecked(ul, gas), max_wavespeed_unchecked(ur, gas));
  return 0.5 * (gl + gr) - 0.5 * s * (er - el);
}

double entropy_boundary_flux(const ResidualContext &ctx, int k)
{
  const FeSpace &sp = ctx.space;
  const Mesh &mesh = sp.mesh();
  const int n = sp.n_local();
  const int *dk = sp.dofs().element(k);
  const auto &u = *ctx.cache.u;
  double g = 0.0;
  for (int e = 0; e < 3; ++e) {
    int nb = -1, nbl = -1;
    Vec2 shift;
    const bool has_nb = !sp.continuous() && mesh.neighbor(k, e, nb, nbl, shift);
    for (int j = 0; j < sp.n_eqp(); ++j) {
      const auto &vk = sp.edge_val(e, j);
      State ul;
      for (int s = 0; s < n; ++s) ul += vk[s] * u[dk[s]];
      State ur = ul;
      if (has_nb) {
        const int *dn = sp.dofs().element(nb);
        const auto &vn = sp.edge_val(nbl, sp.n_eqp() - 1 - j);
        ur = State();
        for (int s = 0; s < n; ++s) ur += vn[s] * u[dn[s]];
      }
      g += sp.eqw(k, e, j) * entropy_numerical_flux(ul, ur, mesh.normal[k][e], ctx.gas);
    }
  }
  return g;
}

double jump_diffusion(const ResidualContext &ctx, int k, double lambda, double zeta,
                      EdgeTerms &out)
{
  if (lambda == 0.0) return 0.0;
  const double h = ctx.space.mesh().diameter[k];
  if (ctx.space.continuous())
    return add_gradient_jump(ctx.space, k, ctx.cache.v, lambda * std::pow(h, zeta), out);
  return add_value_jump(ctx.space, k, ctx.cache.v, lambda * std::pow(h, zeta - 2.0), out);
}

CorrectedResidual corrected_residual(const ResidualContext &ctx, int k, const ElementResidual &base,
                                     bool correction, double lambda, double zeta)
{
  CorrectedResidual cr;
  cr.base = base;
  const int n = base.n;
  const int *d = ctx.space.dofs().element(k);
  std::array<State, kMaxLocal> v{};
  for (int s = 0; s < n; ++s) v[s] = ctx.cache.v[d[s]];
  cr.g_boundary = entropy_boundary_flux(ctx, k);
  if (correction) {
    cr.e_corr = correction_term(v.data(), base.phi.data(), n, cr.g_boundary,
                                ctx.params.correction_guard, cr.r.data(), &cr.alpha_corr);
  }
  for (int s = 0; s < n; ++s) cr.theta[s] = base.phi[s] + cr.r[s];
  cr.production = jump_diffusion(ctx, k, lambda, zeta, cr.psi);
  return cr;
}

double entropy_balance(const ResidualContext &ctx, int k, const CorrectedResidual &cr,
                       bool include_psi)
{
  const int *d = ctx.space.dofs().element(k);
  double s = 0.0;
  for (int i = 0; i < cr.base.n; ++i) s += dot(ctx.cache.v[d[i]], cr.theta[i]);
  if (include_psi)
    for (int i = 0; i < cr.psi.count; ++i) s += dot(ctx.cache.v[cr.psi.items[i].dof], cr.psi.items[i].value);
  return s - cr.g_boundary;
}

} // namespace rd
