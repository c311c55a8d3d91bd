// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "rdeuler/app.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace rd;

namespace {

struct Outcome
{
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string &what)
  {
    pass = pass && ok;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [violated]");
  }
};

std::string num(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

const GasModel gas{};

State random_state(std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> rho(0.2, 2.0), vel(-1.0, 1.0), p(0.2, 2.0);
  return from_primitive(rho(rng), vel(rng), vel(rng), p(rng), gas);
}

// admissible state with density down to 1e-6 and internal energy down to 10 e_floor
State near_vacuum_state(std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> un(0.0, 1.0), vel(-2.0, 2.0);
  const double rho = std::pow(10.0, -6.0 + 6.3 * un(rng));
  const double rhoe = 10.0 * gas.e_floor * std::pow(10.0, 11.3 * un(rng));
  const double ux = vel(rng), uy = vel(rng);
  return State(rho, rho * ux, rho * uy, rhoe + 0.5 * rho * (ux * ux + uy * uy));
}

struct Space
{
  Mesh mesh;
  std::unique_ptr<FeSpace> space;
  std::unique_ptr<Discretization> disc;

  Space(Mesh m, BasisKind b, int degree, ResidualParams p = {}) : mesh(std::move(m))
  {
    space = std::make_unique<FeSpace>(mesh, build_dofmap(mesh, SpaceKind::S2, b, degree));
    disc = std::make_unique<Discretization>(*space, gas, p);
  }
};

RunConfig vortex_config(int n, double t_end)
{
  RunConfig c;
  c.mesh = "rect:" + std::to_string(n) + ":" + std::to_string(n) + ":-5:-5:10:10";
  c.t_end = t_end;
  return c;
}

RunOptions quiet()
{
  RunOptions o;
  o.write_files = false;
  return o;
}

void conservation(Outcome &out)
{
  RunConfig c = vortex_config(32, 1.0);
  c.degree = 1;
  c.scheme = "galerkin+ec+jump";
  c.integrator = Integrator::SspRk2;
  c.cfl = 0.2;
  const RunResult r = run(c, quiet());
  const char *names[] = {"mass", "x-momentum", "y-momentum", "energy"};
  for (int i = 0; i < 4; ++i)
    out.require(r.drift[i] <= 1e-11, std::string(names[i]) + " drift " + num(r.drift[i]) + " <= 1e-11");
  out.require(r.max_drift <= 1e-11, "max drift over the run " + num(r.max_drift) + " <= 1e-11");
  out.detail << "; 2048 triangles, " << r.steps << " steps";
}

void entropy_balance_check(Outcome &out)
{
  RunConfig c = vortex_config(4, 1.0);
  c.mesh = "rect:4:4:0:0:1:1:0.15";
  c.basis = BasisKind::Lagrange;
  const Setup s = make_setup(c);
  std::mt19937_64 rng(101);
  double worst_eq = 0.0, worst_ineq = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<State> u(s.space->n_dofs());
    for (auto &w : u) w = random_state(rng);
    const FieldCache cache = make_cache(u, gas, true);
    const ResidualContext ctx{*s.space, gas, s.disc->params(), cache};
    for (int k = 0; k < s.mesh->n_elems(); ++k) {
      const ElementResidual base = base_residual(ctx, k);
      const CorrectedResidual eq = corrected_residual(ctx, k, base, true, 0.0, c.zeta);
      double scale = std::abs(eq.g_boundary);
      const int *d = s.space->dofs().element(k);
      for (int i = 0; i < base.n; ++i) scale += std::abs(dot(cache.v[d[i]], base.phi[i]));
      worst_eq = std::max(worst_eq, std::abs(entropy_balance(ctx, k, eq, false)) / scale);
      const CorrectedResidual ineq =
          corrected_residual(ctx, k, base, true, entropy_jump_coefficient(ctx, k), c.zeta);
      worst_ineq = std::min(worst_ineq, entropy_balance(ctx, k, ineq, true));
    }
  }
  out.require(worst_eq <= 1e-11, "equality defect / flux scale " + num(worst_eq) + " <= 1e-11");
  out.require(worst_ineq >= -1e-12, "inequality minimum " + num(worst_ineq) + " >= -1e-12");
}

void convergence_check(Outcome &out)
{
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::string> meshes{"rect:16:16:-5:-5:10:10", "rect:32:32:-5:-5:10:10",
                                        "rect:64:64:-5:-5:10:10"};
  auto study = [&](const std::string &scheme, double lo, double hi) {
    RunConfig c = vortex_config(16, 2.0);
    c.scheme = scheme;
    const ConvergenceResult r = convergence(c, meshes);
    bool decreasing = true;
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
      const FieldError &a = r.rows[i - 1].err, &b = r.rows[i].err;
      decreasing = decreasing && b.rho_l1 < a.rho_l1 && b.u_l1 < a.u_l1 && b.p_l1 < a.p_l1;
    }
    out.require(decreasing, scheme + " rho/u/p L1 strictly decreasing (rho " + num(r.rows[0].err.rho_l1) + ", " +
                                num(r.rows[1].err.rho_l1) + ", " + num(r.rows[2].err.rho_l1) + ")");
    const double order = r.order_rho.back();
    out.require(order >= lo && order <= hi, scheme + " rho order " + num(order) + " in [" + num(lo) + ", " +
                                                (std::isinf(hi) ? std::string("inf") : num(hi)) + "]");
  };
  study("galerkin+ec+jump", 1.5, std::numeric_limits<double>::infinity());
  study("lxf", 0.6, 1.4);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.require(secs <= 180.0, "runtime " + num(secs) + " s <= 180 s");
}

void positivity_check(Outcome &out)
{
  const Mesh m = periodic_rectangle(3, 3, 0, 0, 1, 1, 0.1);
  ResidualParams par;
  par.flux_mode = FluxMode::Interpolated;
  const SchemeAssignment lxf(parse_scheme("lxf"));
  std::mt19937_64 rng(404);
  for (BasisKind kind : {BasisKind::Lagrange, BasisKind::Bernstein}) {
    const Space sp(m, kind, 2, par);
    const BernsteinLagrangeMap map = bernstein_to_lagrange(2);
    const int nl = sp.space->n_local();
    long violations = 0, checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
      FieldState f;
      f.u.resize(sp.space->n_dofs());
      for (auto &w : f.u) w = near_vacuum_state(rng);
      for (int step = 0; step < 50; ++step) {
        const double dt = admissible_timestep(sp.mesh, sp.space->dofs(), sp.disc->alphas(f.u), 1.0, 1.0);
        f = forward_euler_step(*sp.disc, f, lxf, dt);
        for (const auto &w : f.u) {
          violations += !admissible(w, gas);
          ++checked;
        }
        if (kind != BasisKind::Bernstein) continue;
        for (int k = 0; k < sp.mesh.n_elems(); ++k) {
          const int *d = sp.space->dofs().element(k);
          for (int l = 0; l < nl; ++l) {
            State w;
            for (int s = 0; s < nl; ++s) w += map.m[l][s] * f.u[d[s]];
            violations += !admissible(w, gas);
            ++checked;
          }
        }
      }
    }
    out.require(violations == 0, std::string(kind == BasisKind::Lagrange ? "Lagrange" : "Bernstein") +
                                     " violations " + std::to_string(violations) + " of " +
                                     std::to_string(checked) + " checks");
  }
}

void m_matrix_check(Outcome &out)
{
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> un(0.0, 1.0), vel(-2.0, 2.0);
  const std::vector<std::pair<std::string, Mesh>> meshes{
      {"2-element", build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}})},
      {"200-element", periodic_rectangle(10, 10, 0, 0, 1, 1, 0.1)}};
  for (const auto &[name, m] : meshes) {
    const Space sp(m, BasisKind::Lagrange, 1);
    const auto &c = sp.space->dual_volumes();
    double min_diag = std::numeric_limits<double>::infinity(), max_off = -min_diag;
    double row_gap = 0.0, min_rho = min_diag;
    for (int trial = 0; trial < 20; ++trial) {
      // uniform velocity in half of the trials
      const bool uniform = trial % 2 == 0;
      const double ux0 = vel(rng), uy0 = vel(rng);
      FieldState f;
      f.u.resize(sp.space->n_dofs());
      for (auto &w : f.u) {
        const double rho = std::pow(10.0, -6.0 + 6.0 * un(rng));
        w = uniform ? from_primitive(rho, ux0, uy0, 0.1 + un(rng), gas)
                    : from_primitive(rho, vel(rng), vel(rng), 0.1 + un(rng), gas);
      }
      std::vector<double> alpha(m.n_elems());
      for (int k = 0; k < m.n_elems(); ++k)
        alpha[k] = alpha_implicit(*sp.space, sp.disc->geometry(), k, f.u, gas).value;
      std::vector<Vec2> v(f.u.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = {f.u[i][1] / f.u[i][0], f.u[i][2] / f.u[i][0]};
      const double dt = 10.0 * sp.disc->timestep(f.u, 1.0, 1.0);
      const DensitySystem sys = assemble_density_system(*sp.disc, f, dt, alpha, v);
      const Eigen::MatrixXd a(sys.matrix);
      for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
          if (i == j) min_diag = std::min(min_diag, a(i, j));
          else max_off = std::max(max_off, a(i, j));
        }
        if (uniform) row_gap = std::max(row_gap, std::abs(a.row(i).sum() - c[i]) / c[i]);
      }
      for (double r : solve_density(sys)) min_rho = std::min(min_rho, r);
    }
    out.require(min_diag > 0.0, name + " min diagonal " + num(min_diag) + " > 0");
    out.require(max_off <= 0.0, name + " max off-diagonal " + num(max_off) + " <= 0");
    out.require(row_gap <= 1e-12, name + " |row sum - |C||/|C| " + num(row_gap) + " <= 1e-12 (uniform velocity)");
    out.require(min_rho > 0.0, name + " min rho at 10x dt " + num(min_rho) + " > 0");
  }
}

void bernstein_convexity(Outcome &out)
{
  std::mt19937_64 rng(606);
  std::vector<RefBasis> samples;
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; i + j <= 10; ++j)
      samples.push_back(reference_basis(BasisKind::Bernstein, 2, {i / 10.0, j / 10.0, 1.0 - i / 10.0 - j / 10.0}));
  long violations = 0, checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<State> coef(6);
    for (auto &w : coef) w = near_vacuum_state(rng);
    for (const RefBasis &b : samples) {
      State w;
      for (int s = 0; s < 6; ++s) w += b.val[s] * coef[s];
      violations += !(w[0] >= 0.0 && internal_energy(w) >= 0.0);
      ++checked;
    }
  }
  out.require(samples.size() == 66, std::to_string(samples.size()) + " sample points per element");
  out.require(violations == 0, "violations " + std::to_string(violations) + " of " + std::to_string(checked));
}

void mood_check(Outcome &out)
{
  RunConfig c;
  c.mesh = "rect:100:4:0:0:1:0.04";
  c.problem = "sod_smooth";
  c.basis = BasisKind::Lagrange;
  c.mood = true;
  c.cascade.schemes = {parse_scheme("galerkin"), parse_scheme("limited_lxf"), parse_scheme("lxf")};
  c.t_end = 0.1;
  const RunResult r = run(c, quiet());
  out.require(r.pad_ok, std::string("(a) PAD at every DOF every step: ") + (r.pad_ok ? "yes" : "no") + ", " +
                            std::to_string(r.steps) + " steps");
  out.require(r.raised_elements >= 1, "(b) raised element-steps " + std::to_string(r.raised_elements) + " >= 1");
  out.require(r.max_drift <= 1e-11, "(c) drift " + num(r.max_drift) + " <= 1e-11");
}

void consistency_scaling(Outcome &out)
{
  const TestFunction phi = cosine_test_function(1, 1, 10.0, 10.0);
  double totals[2] = {};
  double min_iv = std::numeric_limits<double>::infinity();
  const int sizes[2] = {16, 32};
  for (int i = 0; i < 2; ++i) {
    RunConfig c = vortex_config(sizes[i], 0.5);
    const Setup s = make_setup(c);
    RunOptions o = quiet();
    o.keep_trace = true;
    const RunResult r = run(c, s, o);
    for (const StepRecorder &st : r.trace.steps) {
      double iv = 0.0;
      for (const StageRecord &g : st.stages) iv += g.weight * g.production;
      min_iv = std::min(min_iv, iv);
    }
    const ConsistencyTerms t = consistency_error(*s.disc, r.trace, phi, Component::Entropy);
    totals[i] = std::abs(t.total);
    min_iv = std::min(min_iv, t.iv);
  }
  const double exponent = std::log2(totals[0] / totals[1]);
  out.require(exponent >= 1.0, "|e_eta| " + num(totals[0]) + " -> " + num(totals[1]) + ", exponent " +
                                   num(exponent) + " >= 1");
  out.require(min_iv >= 0.0, "min term IV over steps " + num(min_iv) + " >= 0");
}

void monitor_check(Outcome &out)
{
  const SchemeSpec lxf = parse_scheme("lxf");
  std::mt19937_64 rng(909);
  double constants[2] = {};
  double worst_increase = -std::numeric_limits<double>::infinity();
  const int sizes[2] = {8, 16};
  for (int i = 0; i < 2; ++i) {
    const Space sp(periodic_rectangle(sizes[i], sizes[i], 0, 0, 1, 1, 0.1), BasisKind::Lagrange, 1);
    for (int trial = 0; trial < 20; ++trial) {
      FieldState f;
      f.u.resize(sp.space->n_dofs());
      for (auto &w : f.u) w = random_state(rng);
      for (int step = 0; step < 5; ++step) {
        const double dt = sp.disc->timestep(f.u, 1.0, 1.0);
        const FieldState g = forward_euler_step(*sp.disc, f, SchemeAssignment(lxf), dt);
        const double e0 = total_entropy(*sp.disc, f.u), e1 = total_entropy(*sp.disc, g.u);
        worst_increase = std::max(worst_increase, (e1 - e0) / std::abs(e0));
        if (step == 0) {
          const ProductionMonitor pm = entropy_production_monitor(*sp.disc, f.u, g.u, dt, lxf);
          constants[i] = std::max(constants[i], pm.constant);
        }
        f = g;
      }
    }
  }
  out.require(worst_increase <= 1e-10, "max relative entropy increase per step " + num(worst_increase) + " <= 1e-10");
  const double ratio = std::max(constants[0], constants[1]) / std::min(constants[0], constants[1]);
  out.require(ratio <= 3.0, "C " + num(constants[0]) + " -> " + num(constants[1]) + ", ratio " + num(ratio) + " <= 3");
}

void consistency_oracle(Outcome &out)
{
  RunConfig c = vortex_config(8, 0.5);
  const Setup s = make_setup(c);
  RunOptions o = quiet();
  o.keep_trace = true;
  const RunResult r = run(c, s, o);
  const TestFunction phi = cosine_test_function(1, 1, 10.0, 10.0);
  for (Component comp : {Component::Density, Component::MomentumX, Component::MomentumY}) {
    const ConsistencyTerms t = consistency_error(*s.disc, r.trace, phi, comp);
    const double gap = std::abs(t.total - t.direct) / t.scale;
    out.require(gap <= 1e-9, std::string(to_string(comp)) + " gap " + num(gap) + " <= 1e-9");
  }
  out.detail << "; " << r.steps << " steps";
}

} // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<void(Outcome &)>>> criteria{
      {"1 conservation", conservation},
      {"2 entropy equality/inequality", entropy_balance_check},
      {"3 grid convergence", convergence_check},
      {"4 explicit positivity", positivity_check},
      {"5 implicit M-matrix", m_matrix_check},
      {"6 Bernstein convexity", bernstein_convexity},
      {"7 MOOD safety and necessity", mood_check},
      {"8 entropy consistency scaling", consistency_scaling},
      {"9 entropy production monitor", monitor_check},
      {"10 consistency oracle", consistency_oracle},
  };
  int failed = 0;
  for (const auto &[name, fn] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception &e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%s] %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
