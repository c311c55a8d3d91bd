#include "rdeuler/diagnostics.hpp"

#include "rdeuler/parallel.hpp"

#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

namespace rd {

double weak_bv_norm(const FeSpace &space, const std::vector<State> &u, const GasModel &gas,
                    double lambda, double zeta)
{
  std::vector<State> v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) v[i] = entropy_vars(u[i], gas);
  const int ne = space.n_elems();
  std::vector<double> part(ne);
  parallel_for(ne, [&](int b, int e) {
    EdgeTerms scratch;
    for (int k = b; k < e; ++k) {
      scratch.clear();
      part[k] = add_gradient_jump(space, k, v, lambda * std::pow(space.mesh().diameter[k], zeta), scratch);
    }
  });
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

TestFunction cosine_test_function(int kx, int ky, double lx, double ly)
{
  const double ax = 2.0 * std::numbers::pi * kx / lx;
  const double ay = 2.0 * std::numbers::pi * ky / ly;
  TestFunction t;
  t.value = [=](const Vec2 &x) { return std::cos(ax * x.x) * std::cos(ay * x.y); };
  t.grad = [=](const Vec2 &x) {
    return Vec2{-ax * std::sin(ax * x.x) * std::cos(ay * x.y), -ay * std::cos(ax * x.x) * std::sin(ay * x.y)};
  };
  return t;
}

TestFunction constant_test_function(double c)
{
  TestFunction t;
  t.value = [c](const Vec2 &) { return c; };
  t.grad = [](const Vec2 &) { return Vec2{}; };
  return t;
}

const char *to_string(Component c)
{
  switch (c) {
  case Component::Density: return "rho";
  case Component::MomentumX: return "mx";
  case Component::MomentumY: return "my";
  case Component::Energy: return "E";
  case Component::Entropy: return "eta";
  }
  return "?";
}

namespace {

State trial(const FeSpace &sp, const std::vector<State> &u, int k, const PointBasis &pb)
{
  State w;
  const int *d = sp.dofs().element(k);
  for (int s = 0; s < pb.n; ++s) w += pb.val[s] * u[d[s]];
  return w;
}

double field_value(const State &w, Component c, const GasModel &gas)
{
  if (c == Component::Entropy) return entropy_eta_unchecked(w, gas);
  return w[static_cast<int>(c)];
}

Vec2 field_flux(const State &w, Component c, const GasModel &gas)
{
  if (c == Component::Entropy) return entropy_flux(w, gas);
  const Flux f = flux_unchecked(w, gas);
  const int i = static_cast<int>(c);
  return {f.fx[i], f.fy[i]};
}

// sum over elements of an element integral, ordered reduction
double sum_elements(const FeSpace &sp, const std::function<double(int)> &f)
{
  std::vector<double> part(sp.n_elems());
  parallel_for(sp.n_elems(), [&](int b, int e) {
    for (int k = b; k < e; ++k) part[k] = f(k);
  });
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

} // namespace

ConsistencyTerms consistency_error(const Discretization &disc, const RunTrace &trace,
                                   const TestFunction &phi, Component c)
{
  const FeSpace &sp = disc.space();
  const GasModel &gas = disc.gas();
  if (!sp.continuous()) throw Error(ErrorKind::Config, "consistency terms need a continuous space");
  if (trace.steps.size() + 1 != trace.states.size())
    throw Error(ErrorKind::MeshMismatch, "trace has inconsistent step and state counts");
  for (const auto &s : trace.states)
    if (static_cast<int>(s.u.size()) != sp.n_dofs())
      throw Error(ErrorKind::MeshMismatch, "snapshot size differs from the DOF count");

  const std::vector<State> pi_state = sp.interpolate([&](const Vec2 &x) { return State(phi.value(x), 0, 0, 0); });
  std::vector<double> phis(pi_state.size());
  for (std::size_t i = 0; i < phis.size(); ++i) phis[i] = pi_state[i][0];
  const auto &cv = sp.dual_volumes();
  const bool ent = c == Component::Entropy;
  const int ci = ent ? 0 : static_cast<int>(c);

  auto lumped = [&](const std::vector<State> &u) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += phis[i] * cv[i] * field_value(u[i], c, gas);
    return s;
  };
  auto tested = [&](const std::vector<State> &u) {
    return sum_elements(sp, [&](int k) {
      return integrate_element(sp, k, [&](const Vec2 &x, const PointBasis &pb) {
        return field_value(trial(sp, u, k, pb), c, gas) * phi.value(x);
      });
    });
  };
  auto flux_grad = [&](const std::vector<State> &u, bool with_pi) {
    return sum_elements(sp, [&](int k) {
      const int *d = sp.dofs().element(k);
      return integrate_element(sp, k, [&](const Vec2 &x, const PointBasis &pb) {
        const Vec2 f = field_flux(trial(sp, u, k, pb), c, gas);
        if (!with_pi) return dot(f, phi.grad(x));
        Vec2 g{};
        for (int s = 0; s < pb.n; ++s) g += phis[d[s]] * pb.grad[s];
        return dot(f, g);
      });
    });
  };

  ConsistencyTerms t;
  double mag = 0.0;
  for (std::size_t n = 0; n < trace.steps.size(); ++n) {
    const auto &u0 = trace.states[n].u;
    const auto &u1 = trace.states[n + 1].u;
    const double dtest = tested(u1) - tested(u0);
    const double dlump = lumped(u1) - lumped(u0);
    t.ii += dtest - dlump;
    t.direct += dtest;
    mag = std::max({mag, std::abs(dtest), std::abs(dlump)});
    if (ent) t.iii += dlump;
    for (const StageRecord &st : trace.steps[n].stages) {
      if (st.u.empty() || st.r.empty())
        throw Error(ErrorKind::Config, "consistency terms need stage fields in the trace");
      const double w = st.weight;
      const double fphi = flux_grad(st.u, false);
      t.direct -= w * fphi;
      mag = std::max(mag, std::abs(w * fphi));
      if (ent) {
        double vr = 0.0;
        for (std::size_t i = 0; i < st.u.size(); ++i) vr += phis[i] * dot(entropy_vars_unchecked(st.u[i], gas), st.r[i]);
        t.iv += w * st.production;
        t.i -= w * (vr + fphi);
        t.iii += w * vr;
        mag = std::max(mag, std::abs(w * vr));
      } else {
        const std::vector<State> rg = assemble_galerkin_reference(disc, st.u);
        double s = 0.0;
        for (std::size_t i = 0; i < st.u.size(); ++i) s += phis[i] * (st.r[i][ci] - rg[i][ci]);
        t.i -= w * s;
        const double fpi = flux_grad(st.u, true);
        t.iii += w * (fpi - fphi);
        mag = std::max({mag, std::abs(w * s), std::abs(w * fpi)});
      }
    }
  }
  if (ent) t.i += t.iv;
  t.total = t.i + t.ii + t.iii - t.iv;
  t.scale = std::max({mag, std::abs(t.i), std::abs(t.ii), std::abs(t.iii), std::abs(t.iv)});
  return t;
}

double total_entropy(const Discretization &disc, const std::vector<State> &u)
{
  const auto &c = disc.space().dual_volumes();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += c[i] * entropy_eta_unchecked(u[i], disc.gas());
  return s;
}

std::vector<EntropyBudgetStep> entropy_budget(const Discretization &disc, const RunTrace &trace)
{
  std::vector<EntropyBudgetStep> out;
  for (std::size_t n = 0; n + 1 < trace.states.size(); ++n) {
    EntropyBudgetStep b;
    b.increment = total_entropy(disc, trace.states[n + 1].u) - total_entropy(disc, trace.states[n].u);
    if (n < trace.steps.size())
      for (const auto &st : trace.steps[n].stages) b.production += st.weight * st.production;
    b.defect = b.increment + b.production;
    out.push_back(b);
  }
  return out;
}

ProductionMonitor entropy_production_monitor(const Discretization &disc, const std::vector<State> &un,
                                             const std::vector<State> &unp1, double dt,
                                             const SchemeSpec &scheme)
{
  if (scheme.kind != SchemeKind::Lxf && scheme.kind != SchemeKind::LxfGalerkin)
    throw Error(ErrorKind::Config, "the production monitor covers lxf and lxf_galerkin");
  const FeSpace &sp = disc.space();
  const GasModel &gas = disc.gas();
  const Mesh &mesh = sp.mesh();
  const int n = sp.n_local();
  const auto &cv = sp.dual_volumes();
  const FieldCache cache = make_cache(un, gas, true);
  const ResidualContext ctx{sp, gas, disc.params(), cache};
  std::vector<double> eta(un.size());
  for (std::size_t i = 0; i < un.size(); ++i) eta[i] = entropy_eta(un[i], gas);

  std::vector<double> acc(un.size(), 0.0);
  std::vector<double> grad_term(sp.n_elems(), 0.0);
  for (int k = 0; k < sp.n_elems(); ++k) {
    const int *d = sp.dofs().element(k);
    const double alpha = disc.alpha(k, un).value;
    std::array<State, kMaxLocal> central{};
    if (scheme.kind == SchemeKind::Lxf) {
      const State tot = boundary_flux_total(ctx, k);
      for (int s = 0; s < n; ++s) central[s] = (1.0 / n) * tot;
    } else {
      const ElementResidual b = base_residual(ctx, k);
      for (int s = 0; s < n; ++s) central[s] = b.phi[s];
    }
    double mean = 0.0;
    for (int s = 0; s < n; ++s) mean += eta[d[s]];
    mean /= n;
    for (int s = 0; s < n; ++s) acc[d[s]] += dot(cache.v[d[s]], central[s]) + alpha * (eta[d[s]] - mean);

    double g = 0.0;
    for (int e = 0; e < 3; ++e)
      g += integrate_edge(sp, k, e, [&](const Vec2 &, const PointBasis &pb) {
        State gx, gy;
        for (int s = 0; s < pb.n; ++s) {
          gx += pb.grad[s].x * un[d[s]];
          gy += pb.grad[s].y * un[d[s]];
        }
        return dot(gx, gx) + dot(gy, gy);
      });
    grad_term[k] = mesh.diameter[k] * mesh.diameter[k] * g;
  }
  ProductionMonitor m;
  m.d.resize(un.size());
  for (std::size_t i = 0; i < un.size(); ++i) {
    m.d[i] = entropy_eta(unp1[i], gas) - eta[i] + dt / cv[i] * acc[i];
    m.max_abs = std::max(m.max_abs, std::abs(m.d[i]));
    m.max_rate = std::max(m.max_rate, cv[i] * std::abs(m.d[i]) / dt);
  }
  for (double g : grad_term) m.max_gradient_term = std::max(m.max_gradient_term, g);
  m.constant = m.max_gradient_term > 0.0 ? m.max_rate / m.max_gradient_term : 0.0;
  return m;
}

std::vector<Vec2> probe_grid(const Vec2 &lo, const Vec2 &hi, int nx, int ny)
{
  std::vector<Vec2> p;
  p.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      p.push_back({lo.x + (i + 0.5) * (hi.x - lo.x) / nx, lo.y + (j + 0.5) * (hi.y - lo.y) / ny});
  return p;
}

CesaroAverage cesaro_average(const std::vector<const FeSpace *> &spaces,
                             const std::vector<const std::vector<State> *> &fields,
                             const std::vector<Vec2> &probes, const GasModel &gas)
{
  if (spaces.size() != fields.size() || spaces.empty())
    throw Error(ErrorKind::MeshMismatch, "one field per space is required");
  CesaroAverage out;
  out.u.assign(probes.size(), State());
  out.eta.assign(probes.size(), 0.0);
  const double inv = 1.0 / static_cast<double>(spaces.size());
  for (std::size_t m = 0; m < spaces.size(); ++m) {
    const FeSpace &sp = *spaces[m];
    for (std::size_t p = 0; p < probes.size(); ++p) {
      Bary lam;
      const int k = sp.locate(probes[p], lam);
      if (k < 0) throw Error(ErrorKind::OutOfElement, "probe outside the mesh");
      const State w = sp.evaluate(*fields[m], k, lam);
      out.u[p] += inv * w;
      out.eta[p] += inv * entropy_eta_unchecked(w, gas);
    }
  }
  return out;
}

FieldError field_error(const FeSpace &space, const std::vector<State> &u, const GasModel &gas,
                       const std::function<State(const Vec2 &)> &exact)
{
  FieldError e;
  for (int k = 0; k < space.n_elems(); ++k) {
    const int *d = space.dofs().element(k);
    double r1 = 0, r2 = 0, u1 = 0, u2 = 0, p1 = 0, p2 = 0;
    const Quadrature &qr = interior_rule();
    for (std::size_t q = 0; q < qr.points.size(); ++q) {
      const double w = qr.weights[q] * space.mesh().area[k];
      State uh;
      const auto &val = space.val(static_cast<int>(q));
      for (int s = 0; s < space.n_local(); ++s) uh += val[s] * u[d[s]];
      const State ue = exact(space.qpoint(k, static_cast<int>(q)));
      const double dr = std::abs(uh[0] - ue[0]);
      const double du = norm(Vec2{uh[1] / uh[0] - ue[1] / ue[0], uh[2] / uh[0] - ue[2] / ue[0]});
      const double dp = std::abs(pressure(uh, gas) - pressure(ue, gas));
      r1 += w * dr;
      r2 += w * dr * dr;
      u1 += w * du;
      u2 += w * du * du;
      p1 += w * dp;
      p2 += w * dp * dp;
      e.rho_linf = std::max(e.rho_linf, dr);
      e.u_linf = std::max(e.u_linf, du);
      e.p_linf = std::max(e.p_linf, dp);
    }
    e.rho_l1 += r1;
    e.rho_l2 += r2;
    e.u_l1 += u1;
    e.u_l2 += u2;
    e.p_l1 += p1;
    e.p_l2 += p2;
  }
  e.rho_l2 = std::sqrt(e.rho_l2);
  e.u_l2 = std::sqrt(e.u_l2);
  e.p_l2 = std::sqrt(e.p_l2);
  return e;
}

std::vector<double> convergence_order(const std::vector<double> &errors, const std::vector<double> &h)
{
  std::vector<double> o;
  for (std::size_t i = 0; i + 1 < errors.size() && i + 1 < h.size(); ++i) {
    if (h[i] == h[i + 1]) {
      o.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    o.push_back(std::log(errors[i] / errors[i + 1]) / std::log(h[i] / h[i + 1]));
  }
  return o;
}

void write_diagnostics_header(std::ostream &out)
{
  out << "step,t,dt,mass,mom_x,mom_y,energy,entropy,bv_norm,entropy_production,mood_pad,mood_nad,"
         "mood_parachute\n";
}

void write_diagnostics_row(std::ostream &out, const DiagnosticsRecord &r)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%d\n", r.step,
                r.t, r.dt, r.totals[0], r.totals[1], r.totals[2], r.totals[3], r.entropy, r.bv_norm,
                r.entropy_production, r.mood_pad, r.mood_nad, r.mood_parachute);
  out << buf;
}

void write_error_report(std::ostream &out, const std::vector<ErrorReportRow> &rows)
{
  out << "mesh_h,n_elems,err_rho_L1,err_u_L1,err_p_L1,err_rho_L2,err_u_L2,err_p_L2,err_rho_Linf,err_u_Linf,"
         "err_p_Linf,order_rho,order_u,order_p\n";
  char buf[512];
  for (const auto &r : rows) {
    const FieldError &e = r.err;
    std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.6g,%.6g,%.6g\n",
                  r.h, r.n_elems, e.rho_l1, e.u_l1, e.p_l1, e.rho_l2, e.u_l2, e.p_l2, e.rho_linf, e.u_linf,
                  e.p_linf, r.order_rho, r.order_u, r.order_p);
    out << buf;
  }
}

} // namespace rd
