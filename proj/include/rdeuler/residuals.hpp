#pragma once

#include "rdeuler/euler.hpp"
#include "rdeuler/fe_basis.hpp"

#include <string>
#include <vector>

namespace rd {

enum class SchemeKind
{
  Galerkin,     ///< continuous Galerkin
  GalerkinJump, ///< Galerkin + gradient-jump stabilization of U
  Dg,           ///< discontinuous Galerkin with Rusanov flux
  Lxf,          ///< Phi^K / N_K + alpha (U_sigma - mean)
  LxfGalerkin,  ///< base Galerkin/DG residual + alpha (U_sigma - mean)
  LimitedLxf,   ///< beta-limited Lxf, componentwise
};

/// Interpolated: f^h = sum f(U_sigma) phi_sigma. Pointwise: f(U^h) at quadrature points.
enum class FluxMode { Interpolated, Pointwise };

const char *to_string(SchemeKind k);
SchemeKind scheme_kind_from_string(const std::string &s);

struct SchemeSpec
{
  SchemeKind kind = SchemeKind::Galerkin;
  bool entropy_correction = false;
  bool jump_diffusion = false;

  bool lxf_family() const
  {
    return kind == SchemeKind::Lxf || kind == SchemeKind::LxfGalerkin || kind == SchemeKind::LimitedLxf;
  }
};

/// "galerkin", "galerkin_ec_jump", "lxf", "limited_lxf+ec", ...
SchemeSpec parse_scheme(const std::string &s);
std::string to_string(const SchemeSpec &s);

struct ResidualParams
{
  FluxMode flux_mode = FluxMode::Interpolated;
  /// multiplier on the element max wavespeed for the U-gradient jump term
  double lambda_u = 0.1;
  /// multiplier of the V-jump coefficient, see entropy_jump_coefficient
  double lambda_v = 0.1;
  double zeta = 2.0;
  double beta_eps = 1e-14;
  double correction_guard = 1e-14;
};

/// Per-DOF quantities evaluated once per residual sweep.
struct FieldCache
{
  const std::vector<State> *u = nullptr;
  std::vector<Flux> f;
  std::vector<State> v;
  /// Frobenius norm of the entropy Hessian, filled with v
  std::vector<double> hess;
  std::vector<double> s;
};

FieldCache make_cache(const std::vector<State> &u, const GasModel &gas, bool need_v);

struct ElementResidual
{
  SchemeKind scheme = SchemeKind::Galerkin;
  int n = 0;
  std::array<State, kMaxLocal> phi{};
  State total;
  double alpha = 0.0;
};

/// Contributions of a jump term to DOFs of an element and its edge neighbors.
struct EdgeTerms
{
  struct Item
  {
    int dof;
    State value;
  };
  std::array<Item, 6 * kMaxLocal> items{};
  int count = 0;

  void clear() { count = 0; }
  void add(int dof, const State &v) { items[count++] = {dof, v}; }
  State sum() const
  {
    State s;
    for (int i = 0; i < count; ++i) s += items[i].value;
    return s;
  }
};

struct ResidualContext
{
  const FeSpace &space;
  const GasModel &gas;
  const ResidualParams &params;
  const FieldCache &cache;
};

State rusanov_flux(const State &ul, const State &ur, const Vec2 &n, const GasModel &gas);

/// Boundary quadrature of the numerical flux on element k: the total every
/// catalog scheme distributes.
State boundary_flux_total(const ResidualContext &ctx, int k);
/// same with the flux magnitude used for scaling
State boundary_flux_total(const ResidualContext &ctx, int k, double &magnitude);

ElementResidual galerkin_residual(const ResidualContext &ctx, int k);
ElementResidual dg_residual(const ResidualContext &ctx, int k);
/// Galerkin on S2, DG on S1
ElementResidual base_residual(const ResidualContext &ctx, int k);
/// Galerkin residual with f(U^h) at quadrature points regardless of the flux mode
ElementResidual galerkin_reference(const ResidualContext &ctx, int k);

/// Galerkin + sum_e lambda_e h^2 \oint [grad U].[grad phi]; edge terms go to out
ElementResidual galerkin_jump_residual(const ResidualContext &ctx, int k, double lambda_e,
                                       EdgeTerms &out);

ElementResidual lxf_residual(const ResidualContext &ctx, int k, double alpha);
ElementResidual lxf_galerkin_residual(const ResidualContext &ctx, int k, double alpha);
ElementResidual limited_lxf_residual(const ResidualContext &ctx, int k, double alpha);

/// distribution helpers on given data (used by the kernels and in tests)
void lxf_distribute(const State &total, const State *u, int n, double alpha, State *phi);
void limited_distribute(const State &total, const State *phi_lxf, int n, double eps, State *phi);

/// ||sum phi - \oint f^num||_inf / max(1, element flux magnitude)
double conservation_defect(const ElementResidual &res, const ResidualContext &ctx, int k);

/// Gradient-jump term on the edges of element k with weight coef = lambda h^zeta,
/// half of each edge integral charged to k. W is a per-DOF field.
/// Returns the production 1/2 coef \oint |[grad W^h]|^2.
double add_gradient_jump(const FeSpace &space, int k, const std::vector<State> &w, double coef,
                         EdgeTerms &out);
/// Value-jump variant for discontinuous spaces.
double add_value_jump(const FeSpace &space, int k, const std::vector<State> &w, double coef,
                      EdgeTerms &out);

/// element max wavespeed over its DOFs from the cache
double element_wavespeed(const ResidualContext &ctx, int k);
/// lambda_v * max wavespeed / max |d^2 eta/dU^2|_F over the DOFs of k: the
/// V-jump coefficient with the units of the U-jump one. Requires cache.hess.
double entropy_jump_coefficient(const ResidualContext &ctx, int k);

} // namespace rd
