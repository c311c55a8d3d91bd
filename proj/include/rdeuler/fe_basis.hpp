#pragma once

#include "rdeuler/mesh.hpp"

#include <functional>
#include <vector>

namespace rd {

enum class SpaceKind { S1, S2 };
enum class BasisKind { Lagrange, Bernstein };

using Bary = std::array<double, 3>;

constexpr int kMaxLocal = 6;

/// N_K = (p+1)(p+2)/2
int n_local(int degree);

/// Reference basis values and derivatives with respect to the barycentric
/// coordinates. Local order: vertices 0,1,2 then edge midpoints 01, 12, 20.
struct RefBasis
{
  int n = 0;
  std::array<double, kMaxLocal> val{};
  std::array<std::array<double, 3>, kMaxLocal> dlam{};
};

RefBasis reference_basis(BasisKind kind, int degree, const Bary &lam);

struct Quadrature
{
  std::vector<Bary> points;
  std::vector<double> weights;
};

/// 6-point rule exact for degree 4, weights sum to 1
const Quadrature &interior_rule();

/// 3-point Gauss rule on [0,1], weights sum to 1
struct EdgeRule
{
  std::vector<double> t;
  std::vector<double> w;
};
const EdgeRule &edge_rule();

/// barycentric coordinates of the Lagrange points in local DOF order
std::vector<Bary> lagrange_points(int degree);

/// M[L][s] = B_s(point_L)
struct BernsteinLagrangeMap
{
  int n = 0;
  std::vector<std::vector<double>> m;
};

BernsteinLagrangeMap bernstein_to_lagrange(int degree);

struct DofMap
{
  SpaceKind space = SpaceKind::S2;
  BasisKind basis = BasisKind::Lagrange;
  int degree = 1;
  int n_local = 3;
  int n_dofs = 0;
  /// element-major global ids, n_local per element
  std::vector<int> dofs;
  /// physical Lagrange point of every (element, local DOF)
  std::vector<Vec2> points;
  /// representative physical position of each global DOF
  std::vector<Vec2> position;

  const int *element(int k) const { return dofs.data() + static_cast<std::size_t>(k) * n_local; }
  int dof(int k, int s) const { return dofs[static_cast<std::size_t>(k) * n_local + s]; }
};

DofMap build_dofmap(const Mesh &mesh, SpaceKind space, BasisKind basis, int degree);

struct PointBasis
{
  int n = 0;
  std::array<double, kMaxLocal> val{};
  std::array<Vec2, kMaxLocal> grad{};
};

/// gradients of the barycentric coordinates of element k
std::array<Vec2, 3> barycentric_gradients(const Mesh &mesh, int k);

PointBasis eval_basis(const Mesh &mesh, const DofMap &dofmap, int element, const Bary &lam);

Vec2 bary_to_physical(const Mesh &mesh, int k, const Bary &lam);

/// Mesh + DOF layout + precomputed quadrature tables. Immutable after
/// construction.
class FeSpace
{
public:
  FeSpace(const Mesh &mesh, DofMap dofmap);

  const Mesh &mesh() const { return *mesh_; }
  const DofMap &dofs() const { return dofmap_; }
  int n_local() const { return dofmap_.n_local; }
  int n_dofs() const { return dofmap_.n_dofs; }
  int n_elems() const { return mesh_->n_elems(); }
  bool continuous() const { return dofmap_.space == SpaceKind::S2; }

  int n_qp() const { return static_cast<int>(q_weight_.size()); }
  int n_eqp() const { return static_cast<int>(eq_weight_.size()); }

  /// reference values at interior point q / at point j of local edge e
  const std::array<double, kMaxLocal> &val(int q) const { return q_val_[q]; }
  const std::array<double, kMaxLocal> &edge_val(int e, int j) const { return eq_val_[e * n_eqp() + j]; }
  /// physical gradients
  const Vec2 *grad(int k, int q) const
  {
    return grad_int_.data() + (static_cast<std::size_t>(k) * n_qp() + q) * kMaxLocal;
  }
  const Vec2 *edge_grad(int k, int e, int j) const
  {
    return grad_edge_.data() +
           ((static_cast<std::size_t>(k) * 3 + e) * n_eqp() + j) * kMaxLocal;
  }
  /// integration weight including |K| (or edge length)
  double qw(int k, int q) const { return q_weight_[q] * mesh_->area[k]; }
  double eqw(int k, int e, int j) const { return eq_weight_[j] * mesh_->edge_length[k][e]; }
  Vec2 qpoint(int k, int q) const;
  Vec2 eqpoint(int k, int e, int j) const;
  const Bary &qbary(int q) const { return interior_rule().points[q]; }
  Bary eqbary(int e, int j) const;

  /// |C_sigma|
  const std::vector<double> &dual_volumes() const { return dual_; }

  /// interpolate (Lagrange) or represent (Bernstein) a pointwise function
  std::vector<State> interpolate(const std::function<State(const Vec2 &)> &f) const;

  /// value of U^h at barycentric point of element k
  State evaluate(const std::vector<State> &u, int k, const Bary &lam) const;

  /// element containing point x (with tolerance), -1 if none; fills lam
  int locate(const Vec2 &x, Bary &lam) const;

private:
  const Mesh *mesh_;
  DofMap dofmap_;
  std::vector<std::array<double, kMaxLocal>> q_val_;
  std::vector<double> q_weight_;
  std::vector<std::array<double, kMaxLocal>> eq_val_;
  std::vector<double> eq_weight_;
  std::vector<Vec2> grad_int_;
  std::vector<Vec2> grad_edge_;
  std::vector<double> dual_;
};

/// |C_sigma| = sum over owners of |K|/N_K
std::vector<double> dual_volumes(const Mesh &mesh, const DofMap &dofmap);

/// integral over element k of f(x, basis at x)
double integrate_element(const FeSpace &space, int k,
                         const std::function<double(const Vec2 &, const PointBasis &)> &f);
/// integral over local edge e of element k
double integrate_edge(const FeSpace &space, int k, int e,
                      const std::function<double(const Vec2 &, const PointBasis &)> &f);

} // namespace rd
