#pragma once

#include "rdeuler/residuals.hpp"

namespace rd {

struct CorrectedResidual
{
  ElementResidual base;
  std::array<State, kMaxLocal> r{};
  /// diffusion contributions, possibly to neighbor DOFs
  EdgeTerms psi;
  /// element-local part of Theta: base.phi + r (psi is kept separately)
  std::array<State, kMaxLocal> theta{};
  double e_corr = 0.0;
  double alpha_corr = 0.0;
  /// sum_sigma <V_sigma, Psi_sigma> = 1/2 lambda h^zeta \oint |[grad V]|^2 >= 0
  double production = 0.0;
  /// \oint g^num
  double g_boundary = 0.0;
};

/// r_sigma = alpha (V_sigma - Vbar), alpha = E / sum |V_sigma - Vbar|^2,
/// E = g_boundary - sum <V_sigma, Phi_sigma>. Returns E; alpha_corr = 0 when guarded.
double correction_term(const State *v, const State *phi, int n, double g_boundary, double guard,
                       State *r, double *alpha_corr = nullptr);

/// Rusanov entropy flux with the same s_max as the conserved flux
double entropy_numerical_flux(const State &ul, const State &ur, const Vec2 &n, const GasModel &gas);

/// \oint_{dK} g^num on element k (traces of U^h)
double entropy_boundary_flux(const ResidualContext &ctx, int k);

/// Psi contributions of element k. S2: lambda h^zeta \oint [grad phi].[grad V^h];
/// S1: lambda h^(zeta-2) \oint [phi][V^h]. Requires ctx.cache.v. Returns the production.
double jump_diffusion(const ResidualContext &ctx, int k, double lambda, double zeta,
                      EdgeTerms &out);

/// Theta = Phi + r (+ Psi when lambda > 0)
CorrectedResidual corrected_residual(const ResidualContext &ctx, int k, const ElementResidual &base,
                                     bool correction, double lambda, double zeta);

/// sum over theta and psi of <V, .> minus \oint g^num
double entropy_balance(const ResidualContext &ctx, int k, const CorrectedResidual &cr,
                       bool include_psi);

} // namespace rd
