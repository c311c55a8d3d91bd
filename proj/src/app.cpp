#include "rdeuler/app.hpp"

#include "rdeuler/parallel.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace rd {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string &key, const std::string &v)
{
  char *end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(d))
    throw Error(ErrorKind::Config, "key '" + key + "': '" + v + "' is not a finite number");
  return d;
}

int to_int(const std::string &key, const std::string &v)
{
  char *end = nullptr;
  const long i = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || i < std::numeric_limits<int>::min() ||
      i > std::numeric_limits<int>::max())
    throw Error(ErrorKind::Config, "key '" + key + "': '" + v + "' is not an integer");
  return static_cast<int>(i);
}

bool to_bool(const std::string &key, const std::string &v)
{
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorKind::Config, "key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<std::string> split(const std::string &s, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

void require(bool ok, const std::string &key, const std::string &what)
{
  if (!ok) throw Error(ErrorKind::Config, "key '" + key + "': " + what);
}

std::string fmt(double d)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

std::uint64_t fnv1a(const std::string &s)
{
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t h)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string resolve(const std::string &base, const std::string &p)
{
  if (p.empty() || base.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).string();
}

} // namespace

GasModel RunConfig::gas() const
{
  GasModel g;
  g.gamma = gamma;
  return g;
}

ResidualParams RunConfig::residual_params() const
{
  ResidualParams p;
  if (flux_mode == "interpolated")
    p.flux_mode = FluxMode::Interpolated;
  else if (flux_mode == "pointwise")
    p.flux_mode = FluxMode::Pointwise;
  else
    p.flux_mode = basis == BasisKind::Bernstein ? FluxMode::Pointwise : FluxMode::Interpolated;
  p.lambda_v = lambda_jump;
  p.lambda_u = lambda_u;
  p.zeta = zeta;
  return p;
}

void set_config_value(RunConfig &c, const std::string &key, const std::string &v)
{
  if (key == "mesh") {
    require(!v.empty(), key, "empty");
    c.mesh = v;
  } else if (key == "space") {
    if (v == "S1" || v == "s1")
      c.space = SpaceKind::S1;
    else if (v == "S2" || v == "s2")
      c.space = SpaceKind::S2;
    else
      require(false, key, "expected S1 or S2");
  } else if (key == "basis") {
    if (v == "lagrange")
      c.basis = BasisKind::Lagrange;
    else if (v == "bernstein")
      c.basis = BasisKind::Bernstein;
    else
      require(false, key, "expected lagrange or bernstein");
  } else if (key == "degree") {
    c.degree = to_int(key, v);
    require(c.degree == 1 || c.degree == 2, key, "degree must be 1 or 2");
  } else if (key == "scheme") {
    parse_scheme(v);
    c.scheme = v;
  } else if (key == "flux_mode") {
    require(v == "auto" || v == "interpolated" || v == "pointwise", key,
            "expected auto, interpolated or pointwise");
    c.flux_mode = v;
  } else if (key == "integrator") {
    c.integrator = integrator_from_string(v);
  } else if (key == "cfl") {
    c.cfl = to_double(key, v);
    require(c.cfl > 0.0 && c.cfl <= 100.0, key, "must lie in (0, 100]");
  } else if (key == "t_end") {
    c.t_end = to_double(key, v);
    require(c.t_end >= 0.0, key, "must be >= 0");
  } else if (key == "max_steps") {
    c.max_steps = to_int(key, v);
    require(c.max_steps >= 0, key, "must be >= 0");
  } else if (key == "gamma") {
    c.gamma = to_double(key, v);
    require(c.gamma > 1.0 && c.gamma < 3.0, key, "must lie in (1, 3)");
  } else if (key == "lambda_jump") {
    c.lambda_jump = to_double(key, v);
    require(c.lambda_jump >= 0.0, key, "must be >= 0");
  } else if (key == "lambda_u") {
    c.lambda_u = to_double(key, v);
    require(c.lambda_u >= 0.0, key, "must be >= 0");
  } else if (key == "zeta") {
    c.zeta = to_double(key, v);
    require(c.zeta >= 0.0 && c.zeta <= 4.0, key, "must lie in [0, 4]");
  } else if (key == "mood") {
    c.mood = to_bool(key, v);
  } else if (key == "mood.cascade") {
    std::vector<SchemeSpec> s;
    for (const auto &p : split(v, ',')) s.push_back(parse_scheme(p));
    c.cascade.schemes = s;
    c.cascade.validate();
  } else if (key == "mood.delta_dmp") {
    c.cascade.delta_dmp = to_double(key, v);
    require(c.cascade.delta_dmp >= 0.0, key, "must be >= 0");
  } else if (key == "mood.delta_min") {
    c.cascade.delta_min = to_double(key, v);
    require(c.cascade.delta_min >= 0.0, key, "must be >= 0");
  } else if (key == "mood.plateau_factor") {
    c.cascade.plateau_factor = to_double(key, v);
    require(c.cascade.plateau_factor >= 0.0, key, "must be >= 0");
  } else if (key == "mood.smoothness") {
    c.cascade.smoothness_threshold = to_double(key, v);
    require(c.cascade.smoothness_threshold >= 0.0, key, "must be >= 0");
  } else if (key == "mood.nad") {
    c.cascade.nad = to_bool(key, v);
  } else if (key == "output.dir") {
    c.output_dir = v;
  } else if (key == "output.every") {
    c.output_every = to_int(key, v);
    require(c.output_every >= 0, key, "must be >= 0");
  } else if (key == "problem") {
    require(v == "vortex" || v == "sod_smooth" || v == "constant" || v == "from_file", key,
            "expected vortex, sod_smooth, constant or from_file");
    c.problem = v;
  } else if (key == "problem.file") {
    c.problem_file = v;
  } else if (key == "vortex.beta") {
    c.vortex.beta = to_double(key, v);
    require(c.vortex.beta >= 0.0, key, "must be >= 0");
  } else if (key == "vortex.profile") {
    if (v == "equilibrium")
      c.vortex.profile = VortexProfile::Equilibrium;
    else if (v == "literal")
      c.vortex.profile = VortexProfile::Literal;
    else
      require(false, key, "expected equilibrium or literal");
  } else if (key == "vortex.u_inf") {
    c.vortex.u_inf = to_double(key, v);
  } else if (key == "vortex.v_inf") {
    c.vortex.v_inf = to_double(key, v);
  } else if (key == "sod.width") {
    c.sod.width = to_double(key, v);
    require(c.sod.width > 0.0, key, "must be > 0");
  } else if (key == "sod.rho_l" || key == "sod.rho_r" || key == "sod.p_l" || key == "sod.p_r") {
    const double d = to_double(key, v);
    require(d > 0.0, key, "must be > 0");
    (key == "sod.rho_l" ? c.sod.rho_l : key == "sod.rho_r" ? c.sod.rho_r : key == "sod.p_l" ? c.sod.p_l : c.sod.p_r) = d;
  } else if (key == "constant.state") {
    const auto parts = split(v, ',');
    require(parts.size() == 4, key, "expected rho,u,v,p");
    for (int i = 0; i < 4; ++i) c.constant[i] = to_double(key, parts[i]);
    require(c.constant[0] > 0.0 && c.constant[3] > 0.0, key, "density and pressure must be > 0");
  } else if (key == "threads") {
    c.threads = to_int(key, v);
    require(c.threads >= 0, key, "must be >= 0");
  } else {
    throw Error(ErrorKind::Config, "unknown key '" + key + "'");
  }
}

RunConfig parse_config(std::istream &in, const std::string &base_dir)
{
  RunConfig c;
  c.base_dir = base_dir;
  std::map<std::string, int> seen;
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::Config, "line " + std::to_string(ln) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (seen.count(key))
      throw Error(ErrorKind::Config, "line " + std::to_string(ln) + ": key '" + key + "' repeated");
    seen[key] = ln;
    try {
      set_config_value(c, key, value);
    } catch (const Error &e) {
      throw Error(ErrorKind::Config, "line " + std::to_string(ln) + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path + "'");
  return parse_config(in, fs::path(path).parent_path().string());
}

std::string RunConfig::canonical() const
{
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("mesh", mesh);
  kv.emplace_back("space", space == SpaceKind::S1 ? "S1" : "S2");
  kv.emplace_back("basis", basis == BasisKind::Lagrange ? "lagrange" : "bernstein");
  kv.emplace_back("degree", std::to_string(degree));
  kv.emplace_back("scheme", to_string(parse_scheme(scheme)));
  kv.emplace_back("flux_mode", flux_mode);
  kv.emplace_back("integrator", to_string(integrator));
  kv.emplace_back("cfl", fmt(cfl));
  kv.emplace_back("t_end", fmt(t_end));
  kv.emplace_back("max_steps", std::to_string(max_steps));
  kv.emplace_back("gamma", fmt(gamma));
  kv.emplace_back("lambda_jump", fmt(lambda_jump));
  kv.emplace_back("lambda_u", fmt(lambda_u));
  kv.emplace_back("zeta", fmt(zeta));
  kv.emplace_back("mood", mood ? "on" : "off");
  std::string cas;
  for (const auto &s : cascade.schemes) cas += (cas.empty() ? "" : ",") + to_string(s);
  kv.emplace_back("mood.cascade", cas);
  kv.emplace_back("mood.delta_dmp", fmt(cascade.delta_dmp));
  kv.emplace_back("mood.delta_min", fmt(cascade.delta_min));
  kv.emplace_back("mood.plateau_factor", fmt(cascade.plateau_factor));
  kv.emplace_back("mood.smoothness", fmt(cascade.smoothness_threshold));
  kv.emplace_back("mood.nad", cascade.nad ? "on" : "off");
  kv.emplace_back("output.dir", output_dir);
  kv.emplace_back("output.every", std::to_string(output_every));
  kv.emplace_back("problem", problem);
  kv.emplace_back("problem.file", problem_file);
  kv.emplace_back("vortex.beta", fmt(vortex.beta));
  kv.emplace_back("vortex.profile", vortex.profile == VortexProfile::Equilibrium ? "equilibrium" : "literal");
  kv.emplace_back("vortex.u_inf", fmt(vortex.u_inf));
  kv.emplace_back("vortex.v_inf", fmt(vortex.v_inf));
  kv.emplace_back("sod.width", fmt(sod.width));
  kv.emplace_back("sod.rho_l", fmt(sod.rho_l));
  kv.emplace_back("sod.rho_r", fmt(sod.rho_r));
  kv.emplace_back("sod.p_l", fmt(sod.p_l));
  kv.emplace_back("sod.p_r", fmt(sod.p_r));
  kv.emplace_back("constant.state", fmt(constant[0]) + "," + fmt(constant[1]) + "," + fmt(constant[2]) + "," +
                                        fmt(constant[3]));
  std::string out;
  for (const auto &[k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::uint64_t config_hash(const RunConfig &cfg)
{
  std::istringstream in(cfg.canonical());
  std::string line, kept;
  while (std::getline(in, line)) {
    const std::string key = trim(line.substr(0, line.find('=')));
    if (key == "t_end" || key.rfind("problem", 0) == 0 || key.rfind("output", 0) == 0 ||
        key.rfind("vortex", 0) == 0 || key.rfind("sod", 0) == 0 || key.rfind("constant", 0) == 0)
      continue;
    kept += line + "\n";
  }
  return fnv1a(kept);
}

Mesh load_mesh(const RunConfig &cfg)
{
  if (cfg.mesh.rfind("rect:", 0) == 0) {
    const auto p = split(cfg.mesh.substr(5), ':');
    if (p.size() != 6 && p.size() != 7)
      throw Error(ErrorKind::Config, "mesh: expected rect:nx:ny:x0:y0:lx:ly[:distortion]");
    const int nx = to_int("mesh", p[0]), ny = to_int("mesh", p[1]);
    if (nx < 1 || ny < 1) throw Error(ErrorKind::Config, "mesh: nx and ny must be >= 1");
    const double x0 = to_double("mesh", p[2]), y0 = to_double("mesh", p[3]);
    const double lx = to_double("mesh", p[4]), ly = to_double("mesh", p[5]);
    if (!(lx > 0.0) || !(ly > 0.0)) throw Error(ErrorKind::Config, "mesh: lx and ly must be > 0");
    const double dist = p.size() == 7 ? to_double("mesh", p[6]) : 0.0;
    return periodic_rectangle(nx, ny, x0, y0, lx, ly, dist);
  }
  return read_mesh_file(resolve(cfg.base_dir, cfg.mesh));
}

Setup make_setup(const RunConfig &cfg) { return make_setup(cfg, load_mesh(cfg)); }

Setup make_setup(const RunConfig &cfg, Mesh mesh)
{
  Setup s;
  s.mesh = std::make_unique<Mesh>(std::move(mesh));
  s.space = std::make_unique<FeSpace>(*s.mesh, build_dofmap(*s.mesh, cfg.space, cfg.basis, cfg.degree));
  s.disc = std::make_unique<Discretization>(*s.space, cfg.gas(), cfg.residual_params());
  s.stencils = std::make_unique<Stencils>(build_stencils(*s.space));
  return s;
}

FieldState initial_state(const RunConfig &cfg, const Setup &s)
{
  FieldState f;
  const GasModel gas = cfg.gas();
  if (cfg.problem == "vortex") {
    VortexParams p = cfg.vortex;
    p.lo = s.mesh->lo;
    p.hi = s.mesh->hi;
    p.center = 0.5 * (p.lo + p.hi);
    f.u = init_vortex(*s.space, p, gas);
    f.provenance = "vortex";
  } else if (cfg.problem == "sod_smooth") {
    SodParams p = cfg.sod;
    const double lx = s.mesh->hi.x - s.mesh->lo.x;
    p.x_a = s.mesh->lo.x + 0.25 * lx;
    p.x_b = s.mesh->lo.x + 0.75 * lx;
    f.u = init_sod_smooth(*s.space, p, gas);
    f.provenance = "sod_smooth";
  } else if (cfg.problem == "constant") {
    const auto &c = cfg.constant;
    f.u = init_constant(*s.space, from_primitive(c[0], c[1], c[2], c[3], gas));
    f.provenance = "constant";
  } else {
    const std::string path = resolve(cfg.base_dir, cfg.problem_file);
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open snapshot '" + path + "'");
    Snapshot snap = read_snapshot(in);
    if (snap.mesh_hash != mesh_hash(*s.mesh))
      throw Error(ErrorKind::MeshMismatch, "snapshot mesh hash differs from the configured mesh");
    if (static_cast<int>(snap.u.size()) != s.space->n_dofs())
      throw Error(ErrorKind::MeshMismatch, "snapshot DOF count differs from the configured space");
    f.t = snap.t;
    f.u = std::move(snap.u);
    f.provenance = "from_file:" + path;
  }
  return f;
}

void write_snapshot(std::ostream &out, const Setup &s, const FieldState &f, std::uint64_t cfg_hash)
{
  out << "# rdeuler snapshot\n";
  out << "# mesh_hash = " << hex(mesh_hash(*s.mesh)) << "\n";
  out << "# t = " << fmt(f.t) << "\n";
  out << "# config_hash = " << hex(cfg_hash) << "\n";
  out << "dof_id,x,y,rho,mx,my,E\n";
  char buf[256];
  const auto &pos = s.space->dofs().position;
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    const State &w = f.u[i];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, pos[i].x, pos[i].y, w[0], w[1],
                  w[2], w[3]);
    out << buf;
  }
}

Snapshot read_snapshot(std::istream &in)
{
  Snapshot s;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(line.substr(1, eq - 1));
      const std::string v = trim(line.substr(eq + 1));
      if (key == "mesh_hash") s.mesh_hash = std::stoull(v, nullptr, 16);
      if (key == "config_hash") s.config_hash = std::stoull(v, nullptr, 16);
      if (key == "t") s.t = to_double("t", v);
      continue;
    }
    if (!header) {
      if (line != "dof_id,x,y,rho,mx,my,E") throw Error(ErrorKind::Io, "snapshot: unexpected column header");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 7) throw Error(ErrorKind::Io, "snapshot: expected 7 columns");
    const int id = to_int("dof_id", f[0]);
    if (id != static_cast<int>(s.u.size())) throw Error(ErrorKind::Io, "snapshot: DOF ids out of order");
    s.u.emplace_back(to_double("rho", f[3]), to_double("mx", f[4]), to_double("my", f[5]), to_double("E", f[6]));
  }
  if (!header) throw Error(ErrorKind::Io, "snapshot: missing column header");
  return s;
}

namespace {

void check_admissible(const Setup &s, const FieldState &f, const GasModel &gas, bool throw_on_fail, bool &ok)
{
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    const State &w = f.u[i];
    if (admissible(w, gas)) continue;
    ok = false;
    if (!throw_on_fail) return;
    const Vec2 x = s.space->dofs().position[i];
    const std::string where = "DOF " + std::to_string(i) + " at (" + fmt(x.x) + ", " + fmt(x.y) + "), t = " + fmt(f.t);
    if (!(w[0] >= gas.rho_floor) || !finite(w)) throw Error(ErrorKind::VacuumState, where);
    throw Error(ErrorKind::NonPositivePressure, where);
  }
}

void snapshot_file(const RunConfig &cfg, const Setup &s, const FieldState &f, int step, std::uint64_t h)
{
  char name[64];
  std::snprintf(name, sizeof name, "snapshot_%06d.csv", step);
  std::ofstream out(fs::path(cfg.output_dir) / name);
  if (!out) throw Error(ErrorKind::Io, "cannot write snapshot in '" + cfg.output_dir + "'");
  write_snapshot(out, s, f, h);
}

} // namespace

RunResult run(const RunConfig &cfg, const RunOptions &opt)
{
  const Setup s = make_setup(cfg);
  return run(cfg, s, opt);
}

RunResult run(const RunConfig &cfg, const Setup &s, const RunOptions &opt)
{
  if (cfg.threads > 0) set_worker_count(cfg.threads);
  const Discretization &disc = *s.disc;
  const GasModel &gas = disc.gas();
  const SchemeSpec spec = parse_scheme(cfg.scheme);
  const SchemeAssignment assign(spec);
  if (cfg.integrator == Integrator::Implicit && (spec.kind != SchemeKind::LxfGalerkin || cfg.mood))
    throw Error(ErrorKind::Config, "the implicit integrator runs the lxf_galerkin scheme without the cascade");
  if (cfg.mood) cfg.cascade.validate();
  const std::uint64_t h = config_hash(cfg);

  RunResult res;
  FieldState st = initial_state(cfg, s);
  res.initial = st;
  check_admissible(s, st, gas, true, res.pad_ok);

  const bool files = opt.write_files && !cfg.output_dir.empty();
  std::ofstream diag;
  if (files) {
    fs::create_directories(cfg.output_dir);
    diag.open(fs::path(cfg.output_dir) / "diagnostics.csv");
    if (!diag) throw Error(ErrorKind::Io, "cannot write diagnostics in '" + cfg.output_dir + "'");
    write_diagnostics_header(diag);
    snapshot_file(cfg, s, st, 0, h);
  }

  const auto &cv = s.space->dual_volumes();
  res.initial_totals = totals(disc, st.u);
  State scale;
  for (std::size_t i = 0; i < st.u.size(); ++i)
    for (int c = 0; c < 4; ++c) scale[c] += cv[i] * std::abs(st.u[i][c]);

  auto record = [&](int step, double dt, double production, const DetectorReport *rep) {
    if (!opt.diagnostics) return;
    DiagnosticsRecord r;
    r.step = step;
    r.t = st.t;
    r.dt = dt;
    r.totals = totals(disc, st.u);
    r.entropy = total_entropy(disc, st.u);
    r.bv_norm = weak_bv_norm(*s.space, st.u, gas, cfg.lambda_jump, cfg.zeta);
    r.entropy_production = production;
    if (rep) {
      r.mood_pad = rep->pad + rep->cad;
      r.mood_nad = rep->nad;
      r.mood_parachute = rep->parachute;
    }
    res.diagnostics.push_back(r);
    if (files) write_diagnostics_row(diag, r);
  };
  record(0, 0.0, 0.0, nullptr);
  if (opt.keep_trace) res.trace.states.push_back(st);

  const double tol = 1e-12 * std::max(1.0, cfg.t_end);
  while (cfg.t_end - st.t > tol && res.steps < cfg.max_steps &&
         (opt.step_limit < 0 || res.steps < opt.step_limit)) {
    const double remaining = cfg.t_end - st.t;
    const double dt = std::min(disc.timestep(st.u, cfg.cfl, remaining), remaining);
    StepRecorder rec;
    rec.keep_fields = opt.keep_trace;
    FieldState next;
    double production = 0.0;
    DetectorReport rep;
    bool have_rep = false;
    if (cfg.mood) {
      MoodResult m = mood_step(disc, *s.stencils, st, dt, cfg.cascade, cfg.integrator);
      next = std::move(m.next);
      production = m.production;
      rep = std::move(m.report);
      have_rep = true;
      res.raised_elements += rep.raised();
    } else {
      switch (cfg.integrator) {
      case Integrator::ForwardEuler: next = forward_euler_step(disc, st, assign, dt, &rec); break;
      case Integrator::SspRk2: next = ssp_rk2_step(disc, st, assign, dt, &rec); break;
      case Integrator::Implicit: next = implicit_euler_step(disc, st, dt); break;
      }
      for (const auto &sr : rec.stages) production += sr.weight * sr.production;
    }
    if (cfg.t_end - next.t <= tol) next.t = cfg.t_end;
    check_admissible(s, next, gas, !cfg.mood, res.pad_ok);
    if (cfg.mood && !res.pad_ok)
      throw Error(ErrorKind::ParachutePadFailure, "inadmissible state after the cascade at t = " + fmt(next.t));
    st = std::move(next);
    ++res.steps;
    if (opt.keep_trace) {
      res.trace.states.push_back(st);
      res.trace.steps.push_back(std::move(rec));
    }
    const State tot = totals(disc, st.u);
    for (int c = 0; c < 4; ++c)
      if (scale[c] > 0.0) res.max_drift = std::max(res.max_drift, std::abs(tot[c] - res.initial_totals[c]) / scale[c]);
    record(res.steps, dt, production, have_rep ? &rep : nullptr);
    if (files && cfg.output_every > 0 && res.steps % cfg.output_every == 0) snapshot_file(cfg, s, st, res.steps, h);
  }
  res.final_totals = totals(disc, st.u);
  for (int c = 0; c < 4; ++c)
    res.drift[c] = scale[c] > 0.0 ? std::abs(res.final_totals[c] - res.initial_totals[c]) / scale[c] : 0.0;
  if (files) {
    if (cfg.output_every == 0 || res.steps % cfg.output_every != 0) snapshot_file(cfg, s, st, res.steps, h);
    std::ofstream fin(fs::path(cfg.output_dir) / "final.csv");
    write_snapshot(fin, s, st, h);
  }
  res.final_state = std::move(st);
  return res;
}

ConvergenceResult convergence(const RunConfig &cfg, const std::vector<std::string> &meshes)
{
  if (cfg.problem != "vortex") throw Error(ErrorKind::Config, "convergence needs problem = vortex");
  if (meshes.size() < 2) throw Error(ErrorKind::Config, "convergence needs at least two meshes");
  ConvergenceResult out;
  std::vector<double> hs, er, eu, ep;
  for (const auto &m : meshes) {
    RunConfig c = cfg;
    c.mesh = m;
    c.output_dir.clear();
    const Setup s = make_setup(c);
    RunOptions opt;
    opt.diagnostics = false;
    opt.write_files = false;
    const RunResult r = run(c, s, opt);
    VortexParams vp = c.vortex;
    vp.lo = s.mesh->lo;
    vp.hi = s.mesh->hi;
    vp.center = 0.5 * (vp.lo + vp.hi);
    const GasModel gas = c.gas();
    ErrorReportRow row;
    row.h = s.mesh->max_diameter();
    row.n_elems = s.mesh->n_elems();
    row.err = field_error(*s.space, r.final_state.u, gas,
                          [&](const Vec2 &x) { return vortex_state(x, r.final_state.t, vp, gas); });
    hs.push_back(row.h);
    er.push_back(row.err.rho_l1);
    eu.push_back(row.err.u_l1);
    ep.push_back(row.err.p_l1);
    out.rows.push_back(row);
  }
  out.order_rho = convergence_order(er, hs);
  out.order_u = convergence_order(eu, hs);
  out.order_p = convergence_order(ep, hs);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.rows[0].order_rho = out.rows[0].order_u = out.rows[0].order_p = nan;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    out.rows[i].order_rho = out.order_rho[i - 1];
    out.rows[i].order_u = out.order_u[i - 1];
    out.rows[i].order_p = out.order_p[i - 1];
  }
  return out;
}

bool SuiteResult::passed() const
{
  for (const auto &c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

} // namespace rd
