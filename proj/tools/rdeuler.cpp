#include "rdeuler/app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

rd::RunConfig config_with_overrides(const std::string &path, const std::vector<std::string> &sets)
{
  rd::RunConfig c = rd::load_config(path);
  for (const auto &s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw rd::Error(rd::ErrorKind::Config, "--set expects key=value, got '" + s + "'");
    rd::set_config_value(c, s.substr(0, eq), s.substr(eq + 1));
  }
  return c;
}

int cmd_run(const std::string &path, const std::vector<std::string> &sets)
{
  const rd::RunConfig c = config_with_overrides(path, sets);
  const rd::RunResult r = rd::run(c);
  nlohmann::json j;
  j["steps"] = r.steps;
  j["t"] = r.final_state.t;
  j["max_drift"] = r.max_drift;
  j["raised_elements"] = r.raised_elements;
  j["pad_ok"] = r.pad_ok;
  std::cout << j.dump() << "\n";
  return kOk;
}

int cmd_convergence(const std::string &path, const std::vector<std::string> &sets, const std::string &meshes,
                    const std::string &out_path)
{
  const rd::RunConfig c = config_with_overrides(path, sets);
  std::vector<std::string> list;
  std::string cur;
  for (char ch : meshes) {
    if (ch == ',') {
      list.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) list.push_back(cur);
  const rd::ConvergenceResult r = rd::convergence(c, list);
  for (std::size_t i = 0; i < r.order_rho.size(); ++i)
    if (std::isnan(r.order_rho[i]))
      std::cerr << "warning: meshes " << i << " and " << i + 1 << " have equal h, order undefined\n";
  if (out_path.empty()) {
    rd::write_error_report(std::cout, r.rows);
  } else {
    std::ofstream out(out_path);
    if (!out) throw rd::Error(rd::ErrorKind::Io, "cannot write '" + out_path + "'");
    rd::write_error_report(out, r.rows);
  }
  return kOk;
}

int cmd_verify(const std::string &suite)
{
  const rd::SuiteResult r = rd::verify(suite);
  nlohmann::json j;
  j["suite"] = r.suite;
  j["passed"] = r.passed();
  for (const auto &c : r.checks)
    j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}});
  std::cout << j.dump(2) << "\n";
  return r.passed() ? kOk : kFailed;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Residual distribution solver for the 2D Euler equations"};
  app.require_subcommand(1);

  std::string config, meshes, out_path, suite;
  std::vector<std::string> sets;

  auto *run = app.add_subcommand("run", "run a configuration");
  run->add_option("config", config, "config file")->required();
  run->add_option("--set", sets, "override key=value");

  auto *conv = app.add_subcommand("convergence", "vortex errors over a mesh family");
  conv->add_option("config", config, "config file")->required();
  conv->add_option("--meshes", meshes, "comma separated mesh list")->required();
  conv->add_option("--set", sets, "override key=value");
  conv->add_option("-o,--output", out_path, "error report CSV (default stdout)");

  auto *ver = app.add_subcommand("verify", "run an invariant suite");
  ver->add_option("suite", suite, "conservation | entropy | positivity | mood | consistency")->required();

  int nx = 16, ny = 16;
  double x0 = -5, y0 = -5, lx = 10, ly = 10, distortion = 0;
  auto *mesh = app.add_subcommand("mesh", "write a periodic rectangle mesh");
  mesh->add_option("--nx", nx)->check(CLI::PositiveNumber);
  mesh->add_option("--ny", ny)->check(CLI::PositiveNumber);
  mesh->add_option("--x0", x0);
  mesh->add_option("--y0", y0);
  mesh->add_option("--lx", lx)->check(CLI::PositiveNumber);
  mesh->add_option("--ly", ly)->check(CLI::PositiveNumber);
  mesh->add_option("--distortion", distortion);
  mesh->add_option("-o,--output", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(config, sets);
    if (*conv) return cmd_convergence(config, sets, meshes, out_path);
    if (*ver) {
      const auto &names = rd::suite_names();
      if (std::find(names.begin(), names.end(), suite) == names.end()) {
        std::cerr << "unknown suite '" << suite << "'\n" << ver->help();
        return kUsage;
      }
      return cmd_verify(suite);
    }
    if (*mesh) {
      const rd::Mesh m = rd::periodic_rectangle(nx, ny, x0, y0, lx, ly, distortion);
      std::ofstream out(out_path);
      if (!out) throw rd::Error(rd::ErrorKind::Io, "cannot write '" + out_path + "'");
      rd::write_mesh(out, m);
      return kOk;
    }
  } catch (const rd::Error &e) {
    std::cerr << "error [" << rd::to_string(e.kind()) << "]: " << e.what() << "\n";
    return e.kind() == rd::ErrorKind::Config ? kUsage : kFailed;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
