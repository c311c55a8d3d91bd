#include "rdeuler/residuals.hpp"

#include <algorithm>
#include <sstream>

namespace rd {

const char *to_string(SchemeKind k)
{
  switch (k) {
  case SchemeKind::Galerkin: return "galerkin";
  case SchemeKind::GalerkinJump: return "galerkin_jump";
  case SchemeKind::Dg: return "dg";
  case SchemeKind::Lxf: return "lxf";
  case SchemeKind::LxfGalerkin: return "lxf_galerkin";
  case SchemeKind::LimitedLxf: return "limited_lxf";
  }
  return "?";
}

SchemeKind scheme_kind_from_string(const std::string &s)
{
  for (SchemeKind k : {SchemeKind::Galerkin, SchemeKind::GalerkinJump, SchemeKind::Dg,
                       SchemeKind::Lxf, SchemeKind::LxfGalerkin, SchemeKind::LimitedLxf})
    if (s == to_string(k)) return k;
  throw Error(ErrorKind::Config, "unknown scheme '" + s + "'");
}

SchemeSpec parse_scheme(const std::string &text)
{
  // base[+ec][+jump]; "galerkin_ec_jump" is accepted as a shorthand
  std::string s = text;
  if (s == "galerkin_ec_jump") s = "galerkin+ec+jump";
  std::istringstream in(s);
  std::string part;
  SchemeSpec spec;
  bool first = true;
  while (std::getline(in, part, '+')) {
    if (first) {
      spec.kind = scheme_kind_from_string(part);
      first = false;
    } else if (part == "ec") {
      spec.entropy_correction = true;
    } else if (part == "jump") {
      spec.jump_diffusion = true;
    } else {
      throw Error(ErrorKind::Config, "unknown scheme modifier '" + part + "'");
    }
  }
  if (first) throw Error(ErrorKind::Config, "empty scheme name");
  if (spec.kind == SchemeKind::GalerkinJump && (spec.entropy_correction || spec.jump_diffusion))
    throw Error(ErrorKind::Config, "galerkin_jump cannot be combined with entropy terms");
  return spec;
}

std::string to_string(const SchemeSpec &s)
{
  std::string r = to_string(s.kind);
  if (s.entropy_correction) r += "+ec";
  if (s.jump_diffusion) r += "+jump";
  return r;
}

FieldCache make_cache(const std::vector<State> &u, const GasModel &gas, bool need_v)
{
  FieldCache c;
  c.u = &u;
  c.f.resize(u.size());
  c.s.resize(u.size());
  if (need_v) {
    c.v.resize(u.size());
    c.hess.resize(u.size());
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    c.f[i] = flux_unchecked(u[i], gas);
    c.s[i] = max_wavespeed_unchecked(u[i], gas);
    if (need_v) {
      c.v[i] = entropy_vars_unchecked(u[i], gas);
      c.hess[i] = entropy_hessian_unchecked(u[i], gas).norm();
    }
  }
  return c;
}

State rusanov_flux(const State &ul, const State &ur, const Vec2 &n, const GasModel &gas)
{
  const double s = std::max(max_wavespeed(ul, gas), max_wavespeed(ur, gas));
  return 0.5 * (flux(ul, gas).dot(n) + flux(ur, gas).dot(n)) - 0.5 * s * (ur - ul);
}

namespace {

struct Local
{
  int n = 0;
  std::array<int, kMaxLocal> dof{};
  std::array<State, kMaxLocal> u{};
};

Local gather(const ResidualContext &ctx, int k)
{
  Local l;
  l.n = ctx.space.n_local();
  const int *d = ctx.space.dofs().element(k);
  for (int s = 0; s < l.n; ++s) {
    l.dof[s] = d[s];
    l.u[s] = (*ctx.cache.u)[d[s]];
  }
  return l;
}

template <class Vals>
State combine(const Local &l, const Vals &val)
{
  State r;
  for (int s = 0; s < l.n; ++s) r += val[s] * l.u[s];
  return r;
}

template <class Vals>
Flux point_flux(const ResidualContext &ctx, const Local &l, const Vals &val, const State &u,
                FluxMode mode)
{
  if (mode == FluxMode::Pointwise) return flux_unchecked(u, ctx.gas);
  Flux f;
  for (int s = 0; s < l.n; ++s) f += val[s] * ctx.cache.f[l.dof[s]];
  return f;
}

// numerical flux at point j of local edge e of element k
State edge_numflux(const ResidualContext &ctx, const Local &l, int k, int e, int j, FluxMode mode,
                   double *magnitude = nullptr)
{
  const Vec2 n = ctx.space.mesh().normal[k][e];
  const auto &val = ctx.space.edge_val(e, j);
  const State ul = combine(l, val);
  const Flux fl = point_flux(ctx, l, val, ul, mode);
  State fn;
  if (ctx.space.continuous()) {
    fn = fl.dot(n);
  } else {
    int nb, nbl;
    Vec2 shift;
    if (!ctx.space.mesh().neighbor(k, e, nb, nbl, shift)) {
      fn = fl.dot(n);
    } else {
      const Local r = gather(ctx, nb);
      const auto &vr = ctx.space.edge_val(nbl, ctx.space.n_eqp() - 1 - j);
      const State ur = combine(r, vr);
      const Flux fr = point_flux(ctx, r, vr, ur, mode);
      const double smax = std::max(max_wavespeed_unchecked(ul, ctx.gas),
                                   max_wavespeed_unchecked(ur, ctx.gas));
      fn = 0.5 * (fl.dot(n) + fr.dot(n)) - 0.5 * smax * (ur - ul);
    }
  }
  if (magnitude) *magnitude = max_abs(fl.fx) + max_abs(fl.fy);
  return fn;
}

ElementResidual base_impl(const ResidualContext &ctx, int k, FluxMode mode)
{
  const FeSpace &sp = ctx.space;
  const Local l = gather(ctx, k);
  ElementResidual r;
  r.scheme = sp.continuous() ? SchemeKind::Galerkin : SchemeKind::Dg;
  r.n = l.n;
  for (int e = 0; e < 3; ++e) {
    for (int j = 0; j < sp.n_eqp(); ++j) {
      const State fn = sp.eqw(k, e, j) * edge_numflux(ctx, l, k, e, j, mode);
      r.total += fn;
      const auto &val = sp.edge_val(e, j);
      for (int s = 0; s < l.n; ++s) r.phi[s] += val[s] * fn;
    }
  }
  for (int q = 0; q < sp.n_qp(); ++q) {
    const auto &val = sp.val(q);
    const Flux f = point_flux(ctx, l, val, combine(l, val), mode);
    const Vec2 *g = sp.grad(k, q);
    const double w = sp.qw(k, q);
    for (int s = 0; s < l.n; ++s) r.phi[s] -= w * (g[s].x * f.fx + g[s].y * f.fy);
  }
  return r;
}

} // namespace

State boundary_flux_total(const ResidualContext &ctx, int k, double &magnitude)
{
  const Local l = gather(ctx, k);
  State t;
  magnitude = 0.0;
  for (int e = 0; e < 3; ++e)
    for (int j = 0; j < ctx.space.n_eqp(); ++j) {
      double m = 0.0;
      t += ctx.space.eqw(k, e, j) * edge_numflux(ctx, l, k, e, j, ctx.params.flux_mode, &m);
      magnitude += ctx.space.eqw(k, e, j) * m;
    }
  return t;
}

State boundary_flux_total(const ResidualContext &ctx, int k)
{
  double m;
  return boundary_flux_total(ctx, k, m);
}

ElementResidual galerkin_residual(const ResidualContext &ctx, int k)
{
  ElementResidual r = base_impl(ctx, k, ctx.params.flux_mode);
  r.scheme = SchemeKind::Galerkin;
  return r;
}

ElementResidual dg_residual(const ResidualContext &ctx, int k)
{
  ElementResidual r = base_impl(ctx, k, ctx.params.flux_mode);
  r.scheme = SchemeKind::Dg;
  return r;
}

ElementResidual base_residual(const ResidualContext &ctx, int k)
{
  return base_impl(ctx, k, ctx.params.flux_mode);
}

ElementResidual galerkin_reference(const ResidualContext &ctx, int k)
{
  return base_impl(ctx, k, FluxMode::Pointwise);
}

double element_wavespeed(const ResidualContext &ctx, int k)
{
  const int *d = ctx.space.dofs().element(k);
  double s = 0.0;
  for (int i = 0; i < ctx.space.n_local(); ++i) s = std::max(s, ctx.cache.s[d[i]]);
  return s;
}

double entropy_jump_coefficient(const ResidualContext &ctx, int k)
{
  const int *d = ctx.space.dofs().element(k);
  double hmax = 0.0;
  for (int i = 0; i < ctx.space.n_local(); ++i) hmax = std::max(hmax, ctx.cache.hess[d[i]]);
  if (!(hmax > 0.0) || !std::isfinite(hmax)) return 0.0;
  return ctx.params.lambda_v * element_wavespeed(ctx, k) / hmax;
}

ElementResidual galerkin_jump_residual(const ResidualContext &ctx, int k, double lambda_e,
                                       EdgeTerms &out)
{
  ElementResidual r = base_impl(ctx, k, ctx.params.flux_mode);
  r.scheme = SchemeKind::GalerkinJump;
  const double h = ctx.space.mesh().diameter[k];
  if (lambda_e != 0.0) add_gradient_jump(ctx.space, k, *ctx.cache.u, lambda_e * h * h, out);
  return r;
}

void lxf_distribute(const State &total, const State *u, int n, double alpha, State *phi)
{
  State mean;
  for (int s = 0; s < n; ++s) mean += u[s];
  mean *= 1.0 / n;
  for (int s = 0; s < n; ++s) phi[s] = (1.0 / n) * total + alpha * (u[s] - mean);
}

void limited_distribute(const State &total, const State *phi_lxf, int n, double eps, State *phi)
{
  for (int c = 0; c < 4; ++c) {
    bool fallback = std::abs(total[c]) < eps;
    std::array<double, kMaxLocal> xp{};
    double sum = 0.0;
    if (!fallback) {
      for (int s = 0; s < n; ++s) {
        xp[s] = std::max(phi_lxf[s][c] / total[c], 0.0);
        sum += xp[s];
      }
      fallback = !(sum >= eps);
    }
    for (int s = 0; s < n; ++s) phi[s][c] = fallback ? phi_lxf[s][c] : (xp[s] / sum) * total[c];
  }
}

ElementResidual lxf_residual(const ResidualContext &ctx, int k, double alpha)
{
  const Local l = gather(ctx, k);
  ElementResidual r;
  r.scheme = SchemeKind::Lxf;
  r.n = l.n;
  r.alpha = alpha;
  r.total = boundary_flux_total(ctx, k);
  lxf_distribute(r.total, l.u.data(), l.n, alpha, r.phi.data());
  return r;
}

ElementResidual lxf_galerkin_residual(const ResidualContext &ctx, int k, double alpha)
{
  ElementResidual r = base_impl(ctx, k, ctx.params.flux_mode);
  const Local l = gather(ctx, k);
  r.scheme = SchemeKind::LxfGalerkin;
  r.alpha = alpha;
  State mean;
  for (int s = 0; s < l.n; ++s) mean += l.u[s];
  mean *= 1.0 / l.n;
  for (int s = 0; s < l.n; ++s) r.phi[s] += alpha * (l.u[s] - mean);
  return r;
}

ElementResidual limited_lxf_residual(const ResidualContext &ctx, int k, double alpha)
{
  ElementResidual lx = lxf_residual(ctx, k, alpha);
  ElementResidual r = lx;
  r.scheme = SchemeKind::LimitedLxf;
  limited_distribute(lx.total, lx.phi.data(), lx.n, ctx.params.beta_eps, r.phi.data());
  return r;
}

double conservation_defect(const ElementResidual &res, const ResidualContext &ctx, int k)
{
  double mag;
  const State t = boundary_flux_total(ctx, k, mag);
  State s;
  for (int i = 0; i < res.n; ++i) s += res.phi[i];
  return max_abs(s - t) / std::max(1.0, mag);
}

double add_gradient_jump(const FeSpace &space, int k, const std::vector<State> &w, double coef,
                         EdgeTerms &out)
{
  const Mesh &mesh = space.mesh();
  const int n = space.n_local();
  const int *dk = space.dofs().element(k);
  double production = 0.0;
  for (int e = 0; e < 3; ++e) {
    int nb, nbl;
    Vec2 shift;
    if (!mesh.neighbor(k, e, nb, nbl, shift)) continue;
    const int *dn = space.dofs().element(nb);
    std::array<State, kMaxLocal> ak{}, an{};
    for (int j = 0; j < space.n_eqp(); ++j) {
      const int jn = space.n_eqp() - 1 - j;
      const Vec2 *gk = space.edge_grad(k, e, j);
      const Vec2 *gn = space.edge_grad(nb, nbl, jn);
      State jx, jy;
      for (int s = 0; s < n; ++s) {
        jx += gn[s].x * w[dn[s]];
        jy += gn[s].y * w[dn[s]];
        jx -= gk[s].x * w[dk[s]];
        jy -= gk[s].y * w[dk[s]];
      }
      const double c = 0.5 * coef * space.eqw(k, e, j);
      for (int s = 0; s < n; ++s) {
        ak[s] -= c * (gk[s].x * jx + gk[s].y * jy);
        an[s] += c * (gn[s].x * jx + gn[s].y * jy);
      }
      production += c * (dot(jx, jx) + dot(jy, jy));
    }
    for (int s = 0; s < n; ++s) out.add(dk[s], ak[s]);
    for (int s = 0; s < n; ++s) out.add(dn[s], an[s]);
  }
  return production;
}

double add_value_jump(const FeSpace &space, int k, const std::vector<State> &w, double coef,
                      EdgeTerms &out)
{
  const Mesh &mesh = space.mesh();
  const int n = space.n_local();
  const int *dk = space.dofs().element(k);
  double production = 0.0;
  for (int e = 0; e < 3; ++e) {
    int nb, nbl;
    Vec2 shift;
    if (!mesh.neighbor(k, e, nb, nbl, shift)) continue;
    const int *dn = space.dofs().element(nb);
    std::array<State, kMaxLocal> ak{}, an{};
    for (int j = 0; j < space.n_eqp(); ++j) {
      const int jn = space.n_eqp() - 1 - j;
      const auto &vk = space.edge_val(e, j);
      const auto &vn = space.edge_val(nbl, jn);
      State jump;
      for (int s = 0; s < n; ++s) {
        jump += vn[s] * w[dn[s]];
        jump -= vk[s] * w[dk[s]];
      }
      const double c = 0.5 * coef * space.eqw(k, e, j);
      for (int s = 0; s < n; ++s) {
        ak[s] -= (c * vk[s]) * jump;
        an[s] += (c * vn[s]) * jump;
      }
      production += c * dot(jump, jump);
    }
    for (int s = 0; s < n; ++s) out.add(dk[s], ak[s]);
    for (int s = 0; s < n; ++s) out.add(dn[s], an[s]);
  }
  return production;
}

} // namespace rd
