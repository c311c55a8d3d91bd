#pragma once

#include "rdeuler/entropy.hpp"
#include "rdeuler/positivity.hpp"

#include <Eigen/Sparse>
#include <string>
#include <vector>

namespace rd {

/// Everything a residual sweep needs besides the field itself.
class Discretization
{
public:
  Discretization(const FeSpace &space, GasModel gas, ResidualParams params);

  const FeSpace &space() const { return *space_; }
  const GasModel &gas() const { return gas_; }
  const ResidualParams &params() const { return params_; }
  const GeometryTables &geometry() const { return geo_; }

  /// explicit LxF alpha for element k according to the flux mode
  AlphaBound alpha(int k, const std::vector<State> &u) const;
  std::vector<double> alphas(const std::vector<State> &u) const;
  /// positivity time step for the state
  double timestep(const std::vector<State> &u, double cfl, double dt_cap) const;

private:
  const FeSpace *space_;
  GasModel gas_;
  ResidualParams params_;
  GeometryTables geo_;
};

struct FieldState
{
  double t = 0.0;
  std::vector<State> u;
  std::string provenance;
};

/// Scheme per element: levels[level[k]], level empty means level 0 everywhere.
struct SchemeAssignment
{
  std::vector<SchemeSpec> levels;
  std::vector<int> level;

  SchemeAssignment() = default;
  explicit SchemeAssignment(SchemeSpec s) : levels{s} {}
  const SchemeSpec &of(int k) const { return levels[level.empty() ? 0 : level[k]]; }
  bool needs_entropy_vars() const;
  bool needs_alpha() const;
};

/// element-local contributions of one scheme evaluation
struct ElementContribution
{
  int n = 0;
  std::array<int, kMaxLocal> dof{};
  std::array<State, kMaxLocal> local{};
  EdgeTerms edge;
  double production = 0.0;
};

void evaluate_element(const Discretization &disc, const FieldCache &cache, int k,
                      const SchemeSpec &spec, double alpha, ElementContribution &out);

struct Rhs
{
  /// R_sigma = sum over owners of Theta_sigma^K (plus edge terms)
  std::vector<State> r;
  /// total jump production sum_K 1/2 lambda h^zeta \oint |[grad V]|^2
  double production = 0.0;
  std::vector<double> alpha;
};

/// strict: throw on inadmissible DOF states
Rhs assemble_rhs(const Discretization &disc, const std::vector<State> &u,
                 const SchemeAssignment &scheme, bool strict = false);

/// Galerkin reference R^Gal with pointwise fluxes
std::vector<State> assemble_galerkin_reference(const Discretization &disc, const std::vector<State> &u);

/// U - dt/|C| R
std::vector<State> apply_update(const Discretization &disc, const std::vector<State> &u,
                                const std::vector<State> &r, double dt);

struct StageRecord
{
  std::vector<State> u;
  double weight = 0.0;
  double production = 0.0;
  std::vector<State> r;
};

struct StepRecorder
{
  bool keep_fields = false;
  std::vector<StageRecord> stages;
};

FieldState forward_euler_step(const Discretization &disc, const FieldState &s,
                              const SchemeAssignment &scheme, double dt,
                              StepRecorder *rec = nullptr);
FieldState ssp_rk2_step(const Discretization &disc, const FieldState &s,
                        const SchemeAssignment &scheme, double dt, StepRecorder *rec = nullptr);

struct DensitySystem
{
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
};

/// d_ss' = |C_s| delta + dt sum_K c_ss', c_ss' = G_ss'.u_s' + alpha_K (delta - 1/N_K)
DensitySystem assemble_density_system(const Discretization &disc, const FieldState &s, double dt,
                                      const std::vector<double> &alpha,
                                      const std::vector<Vec2> &velocity);

std::vector<double> solve_density(const DensitySystem &sys);

struct ImplicitOptions
{
  double tolerance = 1e-10;
  int max_iterations = 50;
};

struct ImplicitReport
{
  int iterations = 0;
  double last_change = 0.0;
};

/// Implicit Euler on the interpolated Galerkin-form LxF residual (S2)
FieldState implicit_euler_step(const Discretization &disc, const FieldState &s, double dt,
                               const ImplicitOptions &opt = {}, ImplicitReport *report = nullptr);

/// sum |C_sigma| U_sigma
State totals(const Discretization &disc, const std::vector<State> &u);

} // namespace rd
