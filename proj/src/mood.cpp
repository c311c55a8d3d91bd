#include "rdeuler/mood.hpp"

#include "rdeuler/parallel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>

namespace rd {

const char *to_string(Integrator i)
{
  switch (i) {
  case Integrator::ForwardEuler: return "fe";
  case Integrator::SspRk2: return "ssprk2";
  case Integrator::Implicit: return "implicit";
  }
  return "?";
}

Integrator integrator_from_string(const std::string &s)
{
  if (s == "fe") return Integrator::ForwardEuler;
  if (s == "ssprk2") return Integrator::SspRk2;
  if (s == "implicit") return Integrator::Implicit;
  throw Error(ErrorKind::Config, "unknown integrator '" + s + "'");
}

const char *to_string(Detector d)
{
  switch (d) {
  case Detector::None: return "none";
  case Detector::Pad: return "PAD";
  case Detector::Cad: return "CAD";
  case Detector::PlateauSkip: return "PLATEAU_SKIP";
  case Detector::Nad: return "NAD";
  }
  return "?";
}

CascadeConfig CascadeConfig::standard()
{
  CascadeConfig c;
  c.schemes = {parse_scheme("galerkin+ec+jump"), parse_scheme("limited_lxf"), parse_scheme("lxf")};
  return c;
}

void CascadeConfig::validate() const
{
  if (schemes.empty()) throw Error(ErrorKind::Config, "empty cascade");
  const SchemeSpec &p = schemes.back();
  if (p.kind != SchemeKind::Lxf || p.entropy_correction || p.jump_diffusion)
    throw Error(ErrorKind::Config, "the last cascade entry must be the plain lxf parachute");
  if (!(delta_dmp >= 0.0) || !(delta_min >= 0.0) || !(plateau_factor >= 0.0) ||
      !(smoothness_threshold >= 0.0))
    throw Error(ErrorKind::Config, "negative detector tolerance");
}

int DetectorReport::raised() const
{
  int n = 0;
  for (const auto &e : elements) n += e.level > 0;
  return n;
}

Stencils build_stencils(const FeSpace &space)
{
  const Mesh &mesh = space.mesh();
  const DofMap &dm = space.dofs();
  const int n = dm.n_local;
  Stencils st;
  st.dofs.resize(mesh.n_elems());
  st.points.resize(mesh.n_elems());
  for (int k = 0; k < mesh.n_elems(); ++k) {
    auto &d = st.dofs[k];
    auto &p = st.points[k];
    auto push = [&](int el, Vec2 shift) {
      for (int s = 0; s < n; ++s) {
        const int g = dm.dof(el, s);
        if (std::find(d.begin(), d.end(), g) != d.end()) continue;
        d.push_back(g);
        p.push_back(dm.points[static_cast<std::size_t>(el) * n + s] + shift);
      }
    };
    push(k, Vec2{});
    for (int e = 0; e < 3; ++e) {
      int nb, nl;
      Vec2 shift;
      if (mesh.neighbor(k, e, nb, nl, shift)) push(nb, shift);
    }
  }
  return st;
}

double smoothness_indicator(const std::vector<Vec2> &points, const std::vector<double> &values)
{
  // a stencil that cannot carry a quadratic never certifies smoothness
  constexpr double unresolved = std::numeric_limits<double>::infinity();
  const int m = static_cast<int>(points.size());
  if (m < 6) return unresolved;
  Vec2 c{};
  for (const auto &x : points) c += x;
  c = (1.0 / m) * c;
  double h = 0.0;
  for (const auto &x : points) h = std::max(h, norm(x - c));
  if (!(h > 0.0)) return unresolved;
  Eigen::MatrixXd a(m, 6);
  Eigen::VectorXd b(m);
  double scale = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = (points[i].x - c.x) / h, y = (points[i].y - c.y) / h;
    a.row(i) << 1.0, x, y, x * x, x * y, y * y;
    b[i] = values[i];
    scale = std::max(scale, std::abs(values[i]));
  }
  if (!(scale > 0.0)) return 0.0;
  const Eigen::VectorXd lin = a.leftCols(3).colPivHouseholderQr().solve(b);
  const auto qr = a.colPivHouseholderQr();
  if (qr.rank() < 6) return unresolved;
  const Eigen::VectorXd quad = qr.solve(b);
  const Eigen::VectorXd diff = a.leftCols(3) * lin - a * quad;
  return diff.cwiseAbs().maxCoeff() / scale;
}

ElementReport detect(const Discretization &disc, const Stencils &st, const std::vector<State> &candidate,
                     const std::vector<State> &previous, int k, const CascadeConfig &cfg)
{
  const FeSpace &sp = disc.space();
  const GasModel &gas = disc.gas();
  const int *d = sp.dofs().element(k);
  const int n = sp.n_local();
  ElementReport r;

  for (int s = 0; s < n; ++s)
    if (!finite(candidate[d[s]])) {
      r.accepted = false;
      r.detector = Detector::Cad;
      r.worst_dof = d[s];
      return r;
    }

  double worst = 0.0;
  for (int s = 0; s < n; ++s) {
    const State &w = candidate[d[s]];
    const double rho_def = gas.rho_floor - w[0];
    const double e_def = gas.e_floor - internal_energy(w);
    const double def = std::max(rho_def, e_def);
    if (!(w[0] >= gas.rho_floor) || !(internal_energy(w) >= gas.e_floor)) {
      if (r.accepted || def > worst) {
        worst = def;
        r.worst_dof = d[s];
      }
      r.accepted = false;
      r.detector = Detector::Pad;
    }
  }
  if (!r.accepted || !cfg.nad) return r;

  const auto &sd = st.dofs[k];
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int g : sd) {
    lo = std::min(lo, previous[g][0]);
    hi = std::max(hi, previous[g][0]);
  }
  const double h = sp.mesh().diameter[k];
  if (hi - lo < cfg.plateau_factor * h * h * h) {
    r.detector = Detector::PlateauSkip;
    return r;
  }
  const double delta = std::max(cfg.delta_min, cfg.delta_dmp * (hi - lo));
  worst = 0.0;
  int bad = -1;
  for (int s = 0; s < n; ++s) {
    const double rho = candidate[d[s]][0];
    const double v = std::max(lo - delta - rho, rho - hi - delta);
    if (v > worst) {
      worst = v;
      bad = d[s];
    }
  }
  if (bad < 0) return r;
  std::vector<double> vals(sd.size());
  for (std::size_t i = 0; i < sd.size(); ++i) vals[i] = candidate[sd[i]][0];
  if (smoothness_indicator(st.points[k], vals) < cfg.smoothness_threshold) return r;
  r.accepted = false;
  r.detector = Detector::Nad;
  r.worst_dof = bad;
  return r;
}

MoodResult mood_substep(const Discretization &disc, const Stencils &st, const std::vector<State> &u,
                        double dt, const CascadeConfig &cfg)
{
  cfg.validate();
  const int ne = disc.space().n_elems();
  const int last = static_cast<int>(cfg.schemes.size()) - 1;
  SchemeAssignment assign;
  assign.levels = cfg.schemes;
  assign.level.assign(ne, 0);

  MoodResult out;
  DetectorReport &rep = out.report;
  rep.elements.assign(ne, ElementReport{});
  std::vector<ElementReport> det(ne);
  // every round raises at least one level, so the loop is bounded by ne * levels
  for (;;) {
    ++rep.rounds;
    const Rhs r = assemble_rhs(disc, u, assign);
    std::vector<State> cand = apply_update(disc, u, r.r, dt);
    parallel_for(ne, [&](int b, int e) {
      for (int k = b; k < e; ++k) det[k] = detect(disc, st, cand, u, k, cfg);
    });
    bool raised = false;
    for (int k = 0; k < ne; ++k) {
      ElementReport &er = rep.elements[k];
      const ElementReport &dk = det[k];
      if (dk.detector != Detector::None) {
        er.detector = dk.detector;
        if (!dk.accepted) er.worst_dof = dk.worst_dof;
      }
      if (dk.accepted) continue;
      if (assign.level[k] == last) {
        if (dk.detector == Detector::Nad) continue;
        throw Error(ErrorKind::ParachutePadFailure,
                    std::string(to_string(dk.detector)) + " failure of the parachute on element " +
                        std::to_string(k) + " at DOF " + std::to_string(dk.worst_dof));
      }
      ++assign.level[k];
      raised = true;
      if (dk.detector == Detector::Pad) ++rep.pad;
      if (dk.detector == Detector::Cad) ++rep.cad;
      if (dk.detector == Detector::Nad) ++rep.nad;
    }
    if (!raised) {
      out.next.u = std::move(cand);
      out.production = r.production;
      break;
    }
  }
  rep.per_level.assign(last + 1, 0);
  for (int k = 0; k < ne; ++k) {
    ElementReport &er = rep.elements[k];
    er.level = assign.level[k];
    er.accepted = det[k].accepted;
    if (det[k].detector == Detector::PlateauSkip) ++rep.plateau;
    ++rep.per_level[er.level];
    if (last > 0 && er.level == last) ++rep.parachute;
  }
  return out;
}

namespace {

void merge(DetectorReport &into, const DetectorReport &r)
{
  if (into.elements.empty()) {
    into = r;
    return;
  }
  into.pad += r.pad;
  into.cad += r.cad;
  into.nad += r.nad;
  into.plateau += r.plateau;
  into.rounds += r.rounds;
  for (std::size_t k = 0; k < r.elements.size(); ++k) {
    ElementReport &a = into.elements[k];
    const ElementReport &b = r.elements[k];
    a.accepted = a.accepted && b.accepted;
    if (b.level >= a.level) {
      a.level = b.level;
      if (b.detector != Detector::None) a.detector = b.detector;
      if (b.worst_dof >= 0) a.worst_dof = b.worst_dof;
    }
  }
  const int last = static_cast<int>(into.per_level.size()) - 1;
  std::fill(into.per_level.begin(), into.per_level.end(), 0);
  into.parachute = 0;
  for (const auto &e : into.elements) {
    ++into.per_level[e.level];
    if (last > 0 && e.level == last) ++into.parachute;
  }
}

} // namespace

MoodResult mood_step(const Discretization &disc, const Stencils &st, const FieldState &s, double dt,
                     const CascadeConfig &cfg, Integrator integrator)
{
  MoodResult out;
  out.next.t = s.t + dt;
  out.next.provenance = s.provenance;
  switch (integrator) {
  case Integrator::ForwardEuler: {
    MoodResult a = mood_substep(disc, st, s.u, dt, cfg);
    out.next.u = std::move(a.next.u);
    out.report = std::move(a.report);
    out.production = dt * a.production;
    break;
  }
  case Integrator::SspRk2: {
    MoodResult a = mood_substep(disc, st, s.u, dt, cfg);
    MoodResult b = mood_substep(disc, st, a.next.u, dt, cfg);
    out.next.u.resize(s.u.size());
    for (std::size_t i = 0; i < s.u.size(); ++i) out.next.u[i] = 0.5 * s.u[i] + 0.5 * b.next.u[i];
    merge(out.report, a.report);
    merge(out.report, b.report);
    out.production = 0.5 * dt * (a.production + b.production);
    break;
  }
  case Integrator::Implicit:
    throw Error(ErrorKind::Config, "the cascade runs on explicit integrators only");
  }
  return out;
}

} // namespace rd
