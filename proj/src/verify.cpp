#include "rdeuler/app.hpp"

#include <random>

namespace rd {

namespace {

SuiteCheck check_le(const std::string &name, double value, double limit)
{
  return {name, value, limit, value <= limit};
}

SuiteCheck check_ge(const std::string &name, double value, double limit)
{
  return {name, value, limit, value >= limit};
}

RunConfig vortex_config(int n)
{
  RunConfig c;
  c.mesh = "rect:" + std::to_string(n) + ":" + std::to_string(n) + ":-5:-5:10:10";
  c.t_end = 1e9;
  return c;
}

State random_state(std::mt19937_64 &rng, const GasModel &gas)
{
  std::uniform_real_distribution<double> rho(0.2, 2.0), vel(-1.0, 1.0), p(0.2, 2.0);
  return from_primitive(rho(rng), vel(rng), vel(rng), p(rng), gas);
}

SuiteResult conservation()
{
  SuiteResult r{"conservation", {}};
  for (const char *space : {"S2", "S1"}) {
    RunConfig c = vortex_config(12);
    set_config_value(c, "space", space);
    if (std::string(space) == "S1") c.scheme = "dg";
    RunOptions o;
    o.step_limit = 10;
    o.write_files = false;
    const RunResult res = run(c, o);
    r.checks.push_back(check_le(std::string("vortex drift ") + space, res.max_drift, 1e-12));
  }
  return r;
}

SuiteResult entropy()
{
  SuiteResult r{"entropy", {}};
  RunConfig c = vortex_config(4);
  c.basis = BasisKind::Lagrange;
  const Setup s = make_setup(c);
  const GasModel gas = c.gas();
  std::mt19937_64 rng(20240917);
  double worst_eq = 0.0, worst_ineq = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<State> u(s.space->n_dofs());
    for (auto &w : u) w = random_state(rng, gas);
    const FieldCache cache = make_cache(u, gas, true);
    const ResidualContext ctx{*s.space, gas, s.disc->params(), cache};
    for (int k = 0; k < s.mesh->n_elems(); ++k) {
      const ElementResidual base = base_residual(ctx, k);
      const CorrectedResidual eq = corrected_residual(ctx, k, base, true, 0.0, c.zeta);
      double scale = std::abs(eq.g_boundary);
      const int *d = s.space->dofs().element(k);
      for (int i = 0; i < base.n; ++i) scale += std::abs(dot(cache.v[d[i]], base.phi[i]));
      worst_eq = std::max(worst_eq, std::abs(entropy_balance(ctx, k, eq, false)) / std::max(scale, 1e-300));
      const CorrectedResidual ineq =
          corrected_residual(ctx, k, base, true, entropy_jump_coefficient(ctx, k), c.zeta);
      worst_ineq = std::min(worst_ineq, entropy_balance(ctx, k, ineq, true));
    }
  }
  r.checks.push_back(check_le("entropy equality, relative", worst_eq, 1e-11));
  r.checks.push_back(check_ge("entropy inequality, minimum", worst_ineq, -1e-12));
  return r;
}

SuiteResult positivity()
{
  SuiteResult r{"positivity", {}};
  RunConfig c = vortex_config(3);
  c.basis = BasisKind::Lagrange;
  c.flux_mode = "interpolated";
  const Setup s = make_setup(c);
  const GasModel gas = c.gas();
  const SchemeAssignment lxf(parse_scheme("lxf"));
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> unit(0.0, 1.0), vel(-2.0, 2.0);
  int violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    FieldState f;
    f.u.resize(s.space->n_dofs());
    for (auto &w : f.u) {
      const double rho = std::pow(10.0, -6.0 + 6.3 * unit(rng));
      const double rhoe = 10.0 * gas.e_floor * std::pow(10.0, 11.3 * unit(rng));
      const double ux = vel(rng), uy = vel(rng);
      w = State(rho, rho * ux, rho * uy, rhoe + 0.5 * rho * (ux * ux + uy * uy));
    }
    for (int step = 0; step < 5; ++step) {
      const double dt = s.disc->timestep(f.u, 1.0, 1.0);
      f = forward_euler_step(*s.disc, f, lxf, dt);
      for (const auto &w : f.u) violations += !admissible(w, gas);
    }
  }
  r.checks.push_back(check_le("lxf admissibility violations", violations, 0));
  return r;
}

SuiteResult mood()
{
  SuiteResult r{"mood", {}};
  RunConfig c;
  c.mesh = "rect:100:4:0:0:1:0.04";
  c.problem = "sod_smooth";
  c.basis = BasisKind::Lagrange;
  c.mood = true;
  c.cascade.schemes = {parse_scheme("galerkin"), parse_scheme("limited_lxf"), parse_scheme("lxf")};
  c.t_end = 0.02;
  RunOptions o;
  o.write_files = false;
  const RunResult res = run(c, o);
  r.checks.push_back(check_ge("pad satisfied", res.pad_ok ? 1 : 0, 1));
  r.checks.push_back(check_ge("raised elements", static_cast<double>(res.raised_elements), 1));
  r.checks.push_back(check_le("drift", res.max_drift, 1e-11));
  return r;
}

SuiteResult consistency()
{
  SuiteResult r{"consistency", {}};
  RunConfig c = vortex_config(8);
  const Setup s = make_setup(c);
  RunOptions o;
  o.keep_trace = true;
  o.step_limit = 4;
  o.write_files = false;
  const RunResult res = run(c, s, o);
  const TestFunction phi = cosine_test_function(1, 1, 10.0, 10.0);
  for (Component comp : {Component::Density, Component::MomentumX, Component::MomentumY}) {
    const ConsistencyTerms t = consistency_error(*s.disc, res.trace, phi, comp);
    r.checks.push_back(check_le(std::string("oracle gap ") + to_string(comp),
                                std::abs(t.total - t.direct) / std::max(t.scale, 1e-300), 1e-9));
  }
  return r;
}

} // namespace

const std::vector<std::string> &suite_names()
{
  static const std::vector<std::string> n{"conservation", "entropy", "positivity", "mood", "consistency"};
  return n;
}

SuiteResult verify(const std::string &suite)
{
  if (suite == "conservation") return conservation();
  if (suite == "entropy") return entropy();
  if (suite == "positivity") return positivity();
  if (suite == "mood") return mood();
  if (suite == "consistency") return consistency();
  throw Error(ErrorKind::Config, "unknown suite '" + suite + "'");
}

} // namespace rd
