#include "rdeuler/fe_basis.hpp"

#include <limits>

namespace rd {

int n_local(int degree)
{
  if (degree < 1 || degree > 2)
    throw Error(ErrorKind::UnsupportedDegree, "degree " + std::to_string(degree));
  return (degree + 1) * (degree + 2) / 2;
}

RefBasis reference_basis(BasisKind kind, int degree, const Bary &l)
{
  RefBasis b;
  b.n = n_local(degree);
  if (degree == 1) {
    for (int i = 0; i < 3; ++i) {
      b.val[i] = l[i];
      b.dlam[i] = {0.0, 0.0, 0.0};
      b.dlam[i][i] = 1.0;
    }
    return b;
  }
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    b.dlam[i] = {0.0, 0.0, 0.0};
    b.dlam[3 + i] = {0.0, 0.0, 0.0};
    if (kind == BasisKind::Lagrange) {
      b.val[i] = l[i] * (2.0 * l[i] - 1.0);
      b.dlam[i][i] = 4.0 * l[i] - 1.0;
      b.val[3 + i] = 4.0 * l[i] * l[j];
      b.dlam[3 + i][i] = 4.0 * l[j];
      b.dlam[3 + i][j] = 4.0 * l[i];
    } else {
      b.val[i] = l[i] * l[i];
      b.dlam[i][i] = 2.0 * l[i];
      b.val[3 + i] = 2.0 * l[i] * l[j];
      b.dlam[3 + i][i] = 2.0 * l[j];
      b.dlam[3 + i][j] = 2.0 * l[i];
    }
  }
  return b;
}

const Quadrature &interior_rule()
{
  static const Quadrature q = [] {
    Quadrature r;
    const double a1 = 0.44594849091596488632, w1 = 0.22338158967801146570;
    const double a2 = 0.091576213509770743460, w2 = 0.10995174365532186764;
    const double b1 = 1.0 - 2.0 * a1, b2 = 1.0 - 2.0 * a2;
    r.points = {{a1, a1, b1}, {a1, b1, a1}, {b1, a1, a1},
                {a2, a2, b2}, {a2, b2, a2}, {b2, a2, a2}};
    r.weights = {w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return q;
}

const EdgeRule &edge_rule()
{
  static const EdgeRule r = [] {
    EdgeRule e;
    const double d = 0.5 * std::sqrt(0.6);
    e.t = {0.5 - d, 0.5, 0.5 + d};
    e.w = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return e;
  }();
  return r;
}

std::vector<Bary> lagrange_points(int degree)
{
  std::vector<Bary> pts{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  if (n_local(degree) == 6) {
    pts.push_back({0.5, 0.5, 0.0});
    pts.push_back({0.0, 0.5, 0.5});
    pts.push_back({0.5, 0.0, 0.5});
  }
  return pts;
}

BernsteinLagrangeMap bernstein_to_lagrange(int degree)
{
  BernsteinLagrangeMap map;
  map.n = n_local(degree);
  for (const Bary &p : lagrange_points(degree)) {
    const RefBasis b = reference_basis(BasisKind::Bernstein, degree, p);
    map.m.emplace_back(b.val.begin(), b.val.begin() + map.n);
  }
  return map;
}

DofMap build_dofmap(const Mesh &mesh, SpaceKind space, BasisKind basis, int degree)
{
  DofMap d;
  d.space = space;
  d.basis = basis;
  d.degree = degree;
  d.n_local = n_local(degree);
  const int ne = mesh.n_elems();
  d.dofs.resize(static_cast<std::size_t>(ne) * d.n_local);
  d.points.resize(d.dofs.size());
  const auto lp = lagrange_points(degree);
  for (int k = 0; k < ne; ++k) {
    for (int s = 0; s < d.n_local; ++s) {
      int id;
      if (space == SpaceKind::S1)
        id = k * d.n_local + s;
      else if (s < 3)
        id = mesh.node_class[mesh.tris[k][s]];
      else
        id = mesh.n_node_classes + mesh.side_group[k][s - 3];
      d.dofs[static_cast<std::size_t>(k) * d.n_local + s] = id;
      d.points[static_cast<std::size_t>(k) * d.n_local + s] = bary_to_physical(mesh, k, lp[s]);
    }
  }
  if (space == SpaceKind::S1)
    d.n_dofs = ne * d.n_local;
  else
    d.n_dofs = mesh.n_node_classes + (degree == 2 ? mesh.n_side_groups : 0);

  // S2 with p = 2: side-group ids are dense, but guard against unused ids
  d.position.assign(d.n_dofs, Vec2{std::numeric_limits<double>::quiet_NaN(), 0.0});
  for (std::size_t i = d.dofs.size(); i-- > 0;) d.position[d.dofs[i]] = d.points[i];
  return d;
}

std::array<Vec2, 3> barycentric_gradients(const Mesh &mesh, int k)
{
  const Vec2 p0 = mesh.vertex(k, 0), p1 = mesh.vertex(k, 1), p2 = mesh.vertex(k, 2);
  const double two_a = 2.0 * mesh.area[k];
  // grad lambda_i = rot90(opposite edge) / 2|K|
  auto g = [two_a](const Vec2 &a, const Vec2 &b) { return Vec2{(a.y - b.y) / two_a, (b.x - a.x) / two_a}; };
  return {g(p1, p2), g(p2, p0), g(p0, p1)};
}

Vec2 bary_to_physical(const Mesh &mesh, int k, const Bary &l)
{
  return l[0] * mesh.vertex(k, 0) + l[1] * mesh.vertex(k, 1) + l[2] * mesh.vertex(k, 2);
}

PointBasis eval_basis(const Mesh &mesh, const DofMap &dofmap, int element, const Bary &lam)
{
  const double tol = 1e-12;
  double sum = 0.0;
  for (double v : lam) {
    if (v < -tol || v > 1.0 + tol)
      throw Error(ErrorKind::OutOfElement, "barycentric coordinate outside the simplex");
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol)
    throw Error(ErrorKind::OutOfElement, "barycentric coordinates do not sum to 1");
  const RefBasis rb = reference_basis(dofmap.basis, dofmap.degree, lam);
  const auto gl = barycentric_gradients(mesh, element);
  PointBasis pb;
  pb.n = rb.n;
  for (int s = 0; s < rb.n; ++s) {
    pb.val[s] = rb.val[s];
    pb.grad[s] = rb.dlam[s][0] * gl[0] + rb.dlam[s][1] * gl[1] + rb.dlam[s][2] * gl[2];
  }
  return pb;
}

std::vector<double> dual_volumes(const Mesh &mesh, const DofMap &dofmap)
{
  std::vector<double> c(dofmap.n_dofs, 0.0);
  for (int k = 0; k < mesh.n_elems(); ++k)
    for (int s = 0; s < dofmap.n_local; ++s)
      c[dofmap.dof(k, s)] += mesh.area[k] / dofmap.n_local;
  return c;
}

FeSpace::FeSpace(const Mesh &mesh, DofMap dofmap) : mesh_(&mesh), dofmap_(std::move(dofmap))
{
  const Quadrature &qr = interior_rule();
  const EdgeRule &er = edge_rule();
  const int nl = dofmap_.n_local;
  const int nq = static_cast<int>(qr.points.size());
  const int nqe = static_cast<int>(er.t.size());
  q_weight_ = qr.weights;
  eq_weight_ = er.w;

  std::vector<RefBasis> rq, re;
  for (const Bary &p : qr.points) {
    rq.push_back(reference_basis(dofmap_.basis, dofmap_.degree, p));
    q_val_.push_back(rq.back().val);
  }
  for (int e = 0; e < 3; ++e)
    for (int j = 0; j < nqe; ++j) {
      re.push_back(reference_basis(dofmap_.basis, dofmap_.degree, eqbary(e, j)));
      eq_val_.push_back(re.back().val);
    }

  const int ne = mesh.n_elems();
  grad_int_.assign(static_cast<std::size_t>(ne) * nq * kMaxLocal, Vec2{});
  grad_edge_.assign(static_cast<std::size_t>(ne) * 3 * nqe * kMaxLocal, Vec2{});
  for (int k = 0; k < ne; ++k) {
    const auto gl = barycentric_gradients(mesh, k);
    auto phys = [&gl](const RefBasis &rb, int s) {
      return rb.dlam[s][0] * gl[0] + rb.dlam[s][1] * gl[1] + rb.dlam[s][2] * gl[2];
    };
    for (int q = 0; q < nq; ++q) {
      Vec2 *g = grad_int_.data() + (static_cast<std::size_t>(k) * nq + q) * kMaxLocal;
      for (int s = 0; s < nl; ++s) g[s] = phys(rq[q], s);
    }
    for (int e = 0; e < 3; ++e)
      for (int j = 0; j < nqe; ++j) {
        Vec2 *g = grad_edge_.data() +
                  ((static_cast<std::size_t>(k) * 3 + e) * nqe + j) * kMaxLocal;
        for (int s = 0; s < nl; ++s) g[s] = phys(re[e * nqe + j], s);
      }
  }
  dual_ = rd::dual_volumes(mesh, dofmap_);
}

Bary FeSpace::eqbary(int e, int j) const
{
  const double t = edge_rule().t[j];
  Bary l{0.0, 0.0, 0.0};
  l[e] = 1.0 - t;
  l[(e + 1) % 3] = t;
  return l;
}

Vec2 FeSpace::qpoint(int k, int q) const { return bary_to_physical(*mesh_, k, qbary(q)); }

Vec2 FeSpace::eqpoint(int k, int e, int j) const
{
  return bary_to_physical(*mesh_, k, eqbary(e, j));
}

std::vector<State> FeSpace::interpolate(const std::function<State(const Vec2 &)> &f) const
{
  const int nl = dofmap_.n_local;
  std::vector<State> u(dofmap_.n_dofs);
  std::array<State, kMaxLocal> pv;
  for (int k = 0; k < n_elems(); ++k) {
    for (int s = 0; s < nl; ++s) pv[s] = f(dofmap_.points[static_cast<std::size_t>(k) * nl + s]);
    if (dofmap_.basis == BasisKind::Bernstein && dofmap_.degree == 2) {
      for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        pv[3 + i] = 2.0 * pv[3 + i] - 0.5 * (pv[i] + pv[j]);
      }
    }
    for (int s = 0; s < nl; ++s) u[dofmap_.dof(k, s)] = pv[s];
  }
  return u;
}

State FeSpace::evaluate(const std::vector<State> &u, int k, const Bary &lam) const
{
  const RefBasis rb = reference_basis(dofmap_.basis, dofmap_.degree, lam);
  State r;
  for (int s = 0; s < rb.n; ++s) r += rb.val[s] * u[dofmap_.dof(k, s)];
  return r;
}

int FeSpace::locate(const Vec2 &x, Bary &lam) const
{
  const double tol = 1e-10;
  for (int k = 0; k < n_elems(); ++k) {
    const Vec2 a = mesh_->vertex(k, 0), b = mesh_->vertex(k, 1), c = mesh_->vertex(k, 2);
    if (x.x < std::min({a.x, b.x, c.x}) - tol || x.x > std::max({a.x, b.x, c.x}) + tol ||
        x.y < std::min({a.y, b.y, c.y}) - tol || x.y > std::max({a.y, b.y, c.y}) + tol)
      continue;
    const double two_a = 2.0 * mesh_->area[k];
    const double l1 = cross(c - x, a - x) / two_a;
    const double l2 = cross(a - x, b - x) / two_a;
    const double l0 = 1.0 - l1 - l2;
    if (l0 >= -tol && l1 >= -tol && l2 >= -tol) {
      lam = {std::max(l0, 0.0), std::max(l1, 0.0), std::max(l2, 0.0)};
      const double s = lam[0] + lam[1] + lam[2];
      for (double &v : lam) v /= s;
      return k;
    }
  }
  return -1;
}

double integrate_element(const FeSpace &space, int k,
                         const std::function<double(const Vec2 &, const PointBasis &)> &f)
{
  const Quadrature &qr = interior_rule();
  double r = 0.0;
  for (std::size_t q = 0; q < qr.points.size(); ++q) {
    const PointBasis pb = eval_basis(space.mesh(), space.dofs(), k, qr.points[q]);
    r += qr.weights[q] * f(space.qpoint(k, static_cast<int>(q)), pb);
  }
  return r * space.mesh().area[k];
}

double integrate_edge(const FeSpace &space, int k, int e,
                      const std::function<double(const Vec2 &, const PointBasis &)> &f)
{
  const EdgeRule &er = edge_rule();
  double r = 0.0;
  for (std::size_t j = 0; j < er.t.size(); ++j) {
    const Bary l = space.eqbary(e, static_cast<int>(j));
    const PointBasis pb = eval_basis(space.mesh(), space.dofs(), k, l);
    r += er.w[j] * f(space.eqpoint(k, e, static_cast<int>(j)), pb);
  }
  return r * space.mesh().edge_length[k][e];
}

} // namespace rd
