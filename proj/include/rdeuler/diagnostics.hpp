#pragma once

#include "rdeuler/mood.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace rd {

/// sum_K 1/2 lambda h_K^zeta \oint_{dK} |[grad V^h]|^2, each edge seen from both sides
double weak_bv_norm(const FeSpace &space, const std::vector<State> &u, const GasModel &gas,
                    double lambda, double zeta);

/// Smooth periodic test function with its gradient.
struct TestFunction
{
  std::function<double(const Vec2 &)> value;
  std::function<Vec2(const Vec2 &)> grad;
};
/// cos(2 pi kx x / lx) cos(2 pi ky y / ly)
TestFunction cosine_test_function(int kx, int ky, double lx, double ly);
TestFunction constant_test_function(double c);

/// States and per-stage records of an explicit run; steps[n] leads from
/// states[n] to states[n+1]. Stage records must keep fields.
struct RunTrace
{
  std::vector<FieldState> states;
  std::vector<StepRecorder> steps;
};

enum class Component { Density, MomentumX, MomentumY, Energy, Entropy };
const char *to_string(Component c);

/// Weak-form defect split for a time-independent test function.
/// Conserved components, with phi_s the coefficients of Pi_h phi:
///   I   = -sum_stages w sum_s phi_s (R_s - R_s^Gal)
///   II  = sum_steps [\int dU^h phi - sum_s phi_s |C_s| dU_s]
///   III = sum_stages w \int grad(Pi_h phi - phi) . f(U^h)
///   IV  = 0
/// Entropy:
///   I   = -sum_stages w (sum_s phi_s <V_s, R_s> + \int g(U^h) . grad phi) + IV
///   II  = sum_steps [\int d eta(U^h) phi - sum_s phi_s |C_s| d eta_s]
///   III = sum_steps [sum_s phi_s |C_s| d eta_s] + sum_stages w sum_s phi_s <V_s, R_s>
///   IV  = sum_stages w * jump production
/// total = I + II + III - IV. direct is the defect
///   sum_steps \int d(.)^h phi - sum_stages w \int flux(U^h) . grad phi
/// evaluated by its own element quadrature without touching residual code.
struct ConsistencyTerms
{
  double i = 0.0, ii = 0.0, iii = 0.0, iv = 0.0;
  double total = 0.0;
  double direct = 0.0;
  /// largest magnitude among the terms and the defect pieces
  double scale = 0.0;
};

/// Continuous spaces only.
ConsistencyTerms consistency_error(const Discretization &disc, const RunTrace &trace,
                                   const TestFunction &phi, Component c);

struct EntropyBudgetStep
{
  double increment = 0.0;
  double production = 0.0;
  /// increment + production
  double defect = 0.0;
};
/// total entropy sum |C| eta of a field
double total_entropy(const Discretization &disc, const std::vector<State> &u);
std::vector<EntropyBudgetStep> entropy_budget(const Discretization &disc, const RunTrace &trace);

/// Entropy production of an LxF forward-Euler step, per DOF:
///   D_s = eta(U^{n+1}_s) - eta(U^n_s)
///         + dt/|C_s| sum_K (<V_s, Phi_c^K_s> + alpha_K (eta_s - mean_K eta))
/// with Phi_c the central part (Phi^K/N for lxf, the base residual for lxf_galerkin).
struct ProductionMonitor
{
  std::vector<double> d;
  double max_abs = 0.0;
  /// max_s |C_s| |D_s| / dt
  double max_rate = 0.0;
  /// max_K h_K^2 \oint_{dK} |grad U^n|^2
  double max_gradient_term = 0.0;
  /// max_rate / max_gradient_term
  double constant = 0.0;
};
ProductionMonitor entropy_production_monitor(const Discretization &disc, const std::vector<State> &un,
                                             const std::vector<State> &unp1, double dt,
                                             const SchemeSpec &scheme);

/// Uniform nx x ny cell-centre grid over [lo, hi].
std::vector<Vec2> probe_grid(const Vec2 &lo, const Vec2 &hi, int nx, int ny);

struct CesaroAverage
{
  std::vector<State> u;
  std::vector<double> eta;
};
CesaroAverage cesaro_average(const std::vector<const FeSpace *> &spaces,
                             const std::vector<const std::vector<State> *> &fields,
                             const std::vector<Vec2> &probes, const GasModel &gas);

/// Errors of density, velocity (Euclidean) and pressure against an exact field.
struct FieldError
{
  double rho_l1 = 0, rho_l2 = 0, rho_linf = 0;
  double u_l1 = 0, u_l2 = 0, u_linf = 0;
  double p_l1 = 0, p_l2 = 0, p_linf = 0;
};
FieldError field_error(const FeSpace &space, const std::vector<State> &u, const GasModel &gas,
                       const std::function<State(const Vec2 &)> &exact);

/// pairwise log(e_i/e_{i+1}) / log(h_i/h_{i+1}); NaN when h_i == h_{i+1}
std::vector<double> convergence_order(const std::vector<double> &errors, const std::vector<double> &h);

struct DiagnosticsRecord
{
  int step = 0;
  double t = 0, dt = 0;
  State totals;
  double entropy = 0;
  double bv_norm = 0;
  double entropy_production = 0;
  int mood_pad = 0, mood_nad = 0, mood_parachute = 0;
};
void write_diagnostics_header(std::ostream &out);
void write_diagnostics_row(std::ostream &out, const DiagnosticsRecord &r);

struct ErrorReportRow
{
  double h = 0;
  int n_elems = 0;
  FieldError err;
  double order_rho = 0, order_u = 0, order_p = 0;
};
void write_error_report(std::ostream &out, const std::vector<ErrorReportRow> &rows);

} // namespace rd
