#include "doctest.h"
#include "helpers.hpp"

#include <numbers>

using namespace rdtest;

namespace {

const GasModel gas{};

const char *const kCatalog[] = {"galerkin", "galerkin_jump", "lxf", "lxf_galerkin", "limited_lxf",
                                "galerkin+ec", "galerkin+ec+jump", "lxf+ec", "limited_lxf+ec+jump"};

// independent re-quadrature of \oint f^num on element k from traces of U^h
State requadrature(const FeSpace &sp, const std::vector<State> &u, int k)
{
  const Mesh &m = sp.mesh();
  State tot;
  for (int e = 0; e < 3; ++e) {
    int nb, nl;
    Vec2 shift;
    const bool has = m.neighbor(k, e, nb, nl, shift);
    const Vec2 a = m.vertex(k, e), b = m.vertex(k, (e + 1) % 3);
    const EdgeRule &r = edge_rule();
    for (std::size_t j = 0; j < r.t.size(); ++j) {
      const Vec2 x = a + r.t[j] * (b - a);
      Bary l;
      // the point lies on the edge, locate within the element itself
      const std::array<Vec2, 3> g = barycentric_gradients(m, k);
      for (int i = 0; i < 3; ++i) l[i] = 1.0 / 3.0 + dot(g[i], x - (1.0 / 3.0) * (m.vertex(k, 0) + m.vertex(k, 1) + m.vertex(k, 2)));
      const State ul = sp.evaluate(u, k, l);
      State ur = ul;
      if (has) {
        const Vec2 xn = x - shift;
        const std::array<Vec2, 3> gn = barycentric_gradients(m, nb);
        const Vec2 cn = (1.0 / 3.0) * (m.vertex(nb, 0) + m.vertex(nb, 1) + m.vertex(nb, 2));
        Bary ln;
        for (int i = 0; i < 3; ++i) ln[i] = 1.0 / 3.0 + dot(gn[i], xn - cn);
        ur = sp.evaluate(u, nb, ln);
      }
      const double w = r.w[j] * norm(b - a);
      tot += w * rusanov_flux(ul, ur, m.normal[k][e], gas);
    }
  }
  return tot;
}

} // namespace

TEST_CASE("Rusanov flux")
{
  const State u(1, 0, 0, 2.5);
  CHECK(max_abs_diff(rusanov_flux(u, u, {1, 0}, gas), State(0, 1, 0, 0)) < 1e-15);
  const State ur(0.125, 0, 0, 0.25);
  const State expected = 0.5 * (flux(u, gas).fx + flux(ur, gas).fx) - 0.5 * std::sqrt(1.4) * (ur - u);
  CHECK(max_abs_diff(rusanov_flux(u, ur, {1, 0}, gas), expected) < 1e-14);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const State a = random_state(rng, gas), b = random_state(rng, gas);
    const Vec2 n{0.6, -0.8};
    CHECK(max_abs_diff(rusanov_flux(a, b, n, gas), -rusanov_flux(b, a, -n, gas)) < 1e-14);
  }
}

TEST_CASE("LxF distribution")
{
  const std::array<State, 3> u{State(1.5, 0, 0, 0), State(0.75, 0, 0, 0), State(0.75, 0, 0, 0)};
  std::array<State, 3> phi;
  lxf_distribute(State(3, 0, 0, 0), u.data(), 3, 2.0, phi.data());
  CHECK(max_abs_diff(phi[0], State(2, 0, 0, 0)) < 1e-15);
  State s;
  for (const auto &p : phi) s += p;
  CHECK(max_abs_diff(s, State(3, 0, 0, 0)) < 1e-15);
}

TEST_CASE("limited distribution")
{
  const State total(1, 1, 1, 0);
  std::array<State, 3> lxf{State(0.5, 1.5, 1, 0.3), State(0.5, -0.5, 0, -0.1), State(0, 0, 0, -0.2)};
  std::array<State, 3> phi;
  limited_distribute(total, lxf.data(), 3, 1e-14, phi.data());
  // component 0: beta = (0.5, 0.5, 0); component 1: beta = (1, 0, 0)
  CHECK(phi[0][0] == doctest::Approx(0.5));
  CHECK(phi[1][0] == doctest::Approx(0.5));
  CHECK(phi[2][0] == doctest::Approx(0.0));
  CHECK(phi[0][1] == doctest::Approx(1.0));
  CHECK(phi[1][1] == doctest::Approx(0.0));
  // zero total falls back to the LxF values
  for (int s = 0; s < 3; ++s) CHECK(phi[s][3] == doctest::Approx(lxf[s][3]));
}

TEST_CASE("constant field gives zero residuals")
{
  const Mesh m = periodic_rectangle(3, 3, 0, 0, 1, 1, 0.1);
  for (auto sk : {SpaceKind::S1, SpaceKind::S2}) {
    Bundle b(m, sk, BasisKind::Bernstein, 2);
    const std::vector<State> u(b.space->n_dofs(), from_primitive(1.2, 0.3, -0.4, 0.8, gas));
    for (const char *name : kCatalog) {
      const SchemeSpec spec = parse_scheme(name);
      if (sk == SpaceKind::S1 && spec.kind == SchemeKind::GalerkinJump) continue;
      const Rhs r = assemble_rhs(*b.disc, u, SchemeAssignment(spec));
      for (const State &x : r.r) CHECK(max_abs(x) < 1e-13);
    }
  }
}

TEST_CASE("element conservation for every catalog scheme")
{
  std::mt19937_64 rng(5);
  const Mesh m = periodic_rectangle(3, 3, 0, 0, 1, 1, 0.15);
  for (auto sk : {SpaceKind::S1, SpaceKind::S2})
    for (int p : {1, 2})
      for (auto mode : {FluxMode::Interpolated, FluxMode::Pointwise}) {
        ResidualParams par;
        par.flux_mode = mode;
        Bundle b(m, sk, BasisKind::Lagrange, p, par);
        const auto u = random_field(rng, b.space->n_dofs(), gas);
        const FieldCache cache = make_cache(u, gas, true);
        const ResidualContext ctx{*b.space, gas, par, cache};
        for (int k = 0; k < m.n_elems(); ++k) {
          const double a = b.disc->alpha(k, u).value;
          for (const ElementResidual &res : {base_residual(ctx, k), lxf_residual(ctx, k, a),
                                             lxf_galerkin_residual(ctx, k, a), limited_lxf_residual(ctx, k, a)})
            CHECK(conservation_defect(res, ctx, k) <= 1e-12);
        }
      }
}

TEST_CASE("boundary flux total matches an independent re-quadrature")
{
  std::mt19937_64 rng(6);
  const Mesh m = periodic_rectangle(3, 2, 0, 0, 1, 1, 0.1);
  ResidualParams par;
  par.flux_mode = FluxMode::Pointwise;
  Bundle b(m, SpaceKind::S1, BasisKind::Lagrange, 2, par);
  const auto u = random_field(rng, b.space->n_dofs(), gas);
  const FieldCache cache = make_cache(u, gas, false);
  const ResidualContext ctx{*b.space, gas, par, cache};
  for (int k = 0; k < m.n_elems(); ++k) {
    double mag = 0.0;
    const State t = boundary_flux_total(ctx, k, mag);
    CHECK(max_abs_diff(t, requadrature(*b.space, u, k)) <= 1e-13 * std::max(1.0, mag));
  }
}

TEST_CASE("corrupted residual is detected")
{
  std::mt19937_64 rng(7);
  const Mesh m = periodic_rectangle(2, 2, 0, 0, 1, 1);
  Bundle b(m, SpaceKind::S2, BasisKind::Lagrange, 1);
  const auto u = random_field(rng, b.space->n_dofs(), gas);
  const FieldCache cache = make_cache(u, gas, false);
  const ResidualContext ctx{*b.space, gas, b.disc->params(), cache};
  ElementResidual r = galerkin_residual(ctx, 0);
  double mag = 0.0;
  boundary_flux_total(ctx, 0, mag);
  r.phi[1] += State(1, 0, 0, 0);
  CHECK(conservation_defect(r, ctx, 0) == doctest::Approx(1.0 / std::max(1.0, mag)).epsilon(1e-10));
}

TEST_CASE("global residual sum vanishes on periodic meshes")
{
  std::mt19937_64 rng(8);
  const Mesh m = periodic_rectangle(4, 3, 0, 0, 1, 1, 0.1);
  for (auto sk : {SpaceKind::S1, SpaceKind::S2}) {
    Bundle b(m, sk, BasisKind::Bernstein, 1);
    const auto u = random_field(rng, b.space->n_dofs(), gas);
    for (const char *name : kCatalog) {
      const SchemeSpec spec = parse_scheme(name);
      if (sk == SpaceKind::S1 && spec.kind == SchemeKind::GalerkinJump) continue;
      const Rhs r = assemble_rhs(*b.disc, u, SchemeAssignment(spec));
      State s;
      double scale = 0.0;
      for (const State &x : r.r) {
        s += x;
        scale = std::max(scale, max_abs(x));
      }
      CHECK(max_abs(s) <= 1e-12 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("gradient jump vanishes for a global linear field")
{
  // non-periodic copy, so the linear field is a single polynomial everywhere
  const Mesh p = periodic_rectangle(3, 3, 0, 0, 1, 1, 0.1);
  const Mesh m = build_mesh(p.nodes, p.tris);
  for (int deg : {1, 2}) {
    const FeSpace sp(m, build_dofmap(m, SpaceKind::S2, BasisKind::Lagrange, deg));
    const auto w = sp.interpolate([](const Vec2 &x) { return State(1 + x.x, 2 - x.y, x.x + x.y, 3); });
    EdgeTerms out;
    for (int k = 0; k < m.n_elems(); ++k) {
      out.clear();
      CHECK(add_gradient_jump(sp, k, w, 0.7, out) < 1e-24);
      for (int i = 0; i < out.count; ++i) CHECK(max_abs(out.items[i].value) < 1e-13);
    }
  }
}

TEST_CASE("galerkin_jump with zero coefficient is galerkin")
{
  std::mt19937_64 rng(9);
  const Mesh m = periodic_rectangle(2, 2, 0, 0, 1, 1);
  Bundle b(m, SpaceKind::S2, BasisKind::Lagrange, 2);
  const auto u = random_field(rng, b.space->n_dofs(), gas);
  const FieldCache cache = make_cache(u, gas, false);
  const ResidualContext ctx{*b.space, gas, b.disc->params(), cache};
  EdgeTerms out;
  const ElementResidual j = galerkin_jump_residual(ctx, 0, 0.0, out);
  const ElementResidual g = galerkin_residual(ctx, 0);
  for (int s = 0; s < g.n; ++s) CHECK(max_abs_diff(j.phi[s], g.phi[s]) == 0.0);
  CHECK(max_abs(out.sum()) == 0.0);
}

TEST_CASE("gradient jump production scales as h^3 for a fixed profile")
{
  auto measure = [](int n) {
    const Mesh m = periodic_rectangle(n, n, 0, 0, 1, 1);
    const FeSpace sp(m, build_dofmap(m, SpaceKind::S2, BasisKind::Lagrange, 1));
    const double pi = std::numbers::pi;
    const auto w = sp.interpolate([&](const Vec2 &x) {
      return State(std::sin(2 * pi * x.x) * std::cos(2 * pi * x.y), 0, 0, 0);
    });
    double prod = 0.0;
    EdgeTerms out;
    for (int k = 0; k < m.n_elems(); ++k) {
      out.clear();
      prod += add_gradient_jump(sp, k, w, m.diameter[k] * m.diameter[k], out);
    }
    return prod;
  };
  // gradient jumps of the interpolant are O(h) on a skeleton of length O(1/h):
  // h^2 \oint |[grad u]|^2 = O(h^3)
  const double r = measure(16) / measure(32);
  CHECK(r == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("scheme names")
{
  const SchemeSpec s = parse_scheme("galerkin+ec+jump");
  CHECK(s.kind == SchemeKind::Galerkin);
  CHECK(s.entropy_correction);
  CHECK(s.jump_diffusion);
  CHECK(parse_scheme(to_string(s)).jump_diffusion);
  CHECK(parse_scheme("limited_lxf").kind == SchemeKind::LimitedLxf);
  CHECK_THROWS_AS(parse_scheme("upwind"), Error);
}
