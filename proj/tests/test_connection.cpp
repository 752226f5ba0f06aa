#include "fivec/connection.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "fivec/sampling.hpp"
#include "test_support.hpp"

using namespace fivec;

namespace {

Connection random_connection(std::mt19937_64& rng, int entries = 10, bool standard = true) {
  Connection H;
  for (int k = 0; k < entries; ++k) {
    int c = static_cast<int>(rng() % 5);
    int b = static_cast<int>(rng() % 5);
    int a = static_cast<int>(rng() % 5);
    if (standard && c < 4 && b == 4) continue;  // honor H^α_5B = 0
    H.coeff(c, b, a) += test_support::random_polynomial(rng, 2);
  }
  return H;
}

FiveVectorField random_field(std::mt19937_64& rng, int degree = 2) {
  FiveVectorField v;
  for (int i = 0; i < 5; ++i) v[i] = test_support::random_polynomial(rng, degree);
  return v;
}

FiveFormField random_form(std::mt19937_64& rng, int degree = 2) {
  FiveFormField s;
  for (int i = 0; i < 5; ++i) s[i] = test_support::random_polynomial(rng, degree);
  return s;
}

}  // namespace

TEST_CASE("covariant derivative of vectors: flat and partial-only cases") {
  Connection flat;
  FiveVectorField v = FiveVectorField::constant(FiveVector({2, -1, 3, 0, 5}));
  for (int a = 0; a < 5; ++a) {
    FiveVectorField d = cov_deriv_vector(v, flat, a);
    for (int c = 0; c < 5; ++c) CHECK(d[c].is_zero());
  }

  FiveVectorField w;
  w[0] = Expression::coordinate(1);  // v^0 = x1
  FiveVectorField d = cov_deriv_vector(w, flat, 1);
  CHECK(d[0].is_constant());
  CHECK(d[0].eval({0, 0, 0, 0}) == doctest::Approx(1.0));
  for (int c = 1; c < 5; ++c) CHECK(d[c].is_zero());
}

TEST_CASE("covariant derivative matches a first-order transport step") {
  std::mt19937_64 rng(2024);
  Connection H = random_connection(rng);
  FiveVectorField v = random_field(rng);
  const Point p = {0.2, 0.4, -0.1, 1.0};
  const double h = 1e-5;

  // direction u in Z
  FiveVector u({0.7, -0.3, 0.5, 0.2, 0.0});
  FiveVectorField dv;
  for (int a = 0; a < 4; ++a) {
    FiveVectorField da = cov_deriv_vector(v, H, a);
    for (int c = 0; c < 5; ++c) dv[c] += Expression(u[a]) * da[c];
  }

  // transport v(p + h·u) back to p to first order, then difference
  Point q = p;
  for (int i = 0; i < 4; ++i) q[static_cast<std::size_t>(i)] += h * u[i];
  FiveVector vq = v.eval(q);
  double vnorm = 0.0;
  for (int c = 0; c < 5; ++c) vnorm = std::max(vnorm, std::abs(vq[c]));
  for (int c = 0; c < 5; ++c) {
    double transported = vq[c];
    for (int b = 0; b < 5; ++b)
      for (int a = 0; a < 4; ++a) transported += h * u[a] * H.coeff(c, b, a).eval(p) * vq[b];
    double oracle = (transported - v.eval(p)[c]) / h;
    CHECK(std::abs(dv[c].eval(p) - oracle) <= 1e-4 * std::max(1.0, vnorm));
  }
}

TEST_CASE("connection axioms hold numerically") {
  std::mt19937_64 rng(77);
  Connection H = random_connection(rng);
  auto points = test_support::random_points(rng, 50, -0.8, 0.8);

  FiveVectorField u = random_field(rng), v = random_field(rng), w = random_field(rng);
  Expression f = test_support::random_polynomial(rng, 2);
  Expression gfun = test_support::random_polynomial(rng, 2);

  // (11a) function-linearity in the direction slot
  FiveVectorField dir;
  for (int i = 0; i < 5; ++i) dir[i] = f * u[i] + gfun * v[i];
  FiveVectorField lhs_a = cov_deriv_along(w, H, dir);
  FiveVectorField du = cov_deriv_along(w, H, u);
  FiveVectorField dv = cov_deriv_along(w, H, v);
  for (const Point& p : points)
    for (int c = 0; c < 5; ++c) {
      double want = f.eval(p) * du[c].eval(p) + gfun.eval(p) * dv[c].eval(p);
      CHECK(lhs_a[c].eval(p) == doctest::Approx(want).epsilon(1e-11));
    }

  // (11b) additivity in the field slot
  FiveVectorField sum;
  for (int i = 0; i < 5; ++i) sum[i] = v[i] + w[i];
  for (int a = 0; a < 5; ++a) {
    FiveVectorField both = cov_deriv_vector(sum, H, a);
    FiveVectorField dv2 = cov_deriv_vector(v, H, a);
    FiveVectorField dw2 = cov_deriv_vector(w, H, a);
    for (const Point& p : points)
      for (int c = 0; c < 5; ++c)
        CHECK(both[c].eval(p) ==
              doctest::Approx(dv2[c].eval(p) + dw2[c].eval(p)).epsilon(1e-11));
  }

  // (11c) Leibniz for a scalar multiple, along a generic direction
  FiveVectorField fv;
  for (int i = 0; i < 5; ++i) fv[i] = f * v[i];
  FiveVectorField dfv = cov_deriv_along(fv, H, u);
  FiveVectorField dv3 = cov_deriv_along(v, H, u);
  for (const Point& p : points) {
    double df_u = 0.0;  // ∂_u f = u^α ∂_α f; the fifth slot differentiates nothing
    for (int a = 0; a < 4; ++a) df_u += u[a].eval(p) * f.partial(a).eval(p);
    for (int c = 0; c < 5; ++c) {
      double want = df_u * v[c].eval(p) + f.eval(p) * dv3[c].eval(p);
      CHECK(dfv[c].eval(p) == doctest::Approx(want).epsilon(1e-11));
    }
  }

  // restriction: a direction with no E-component only uses the four-slices
  FiveVectorField zdir = u;
  zdir[4] = Expression();
  FiveVectorField full = cov_deriv_along(w, H, zdir);
  FiveVectorField four_only;
  for (int a = 0; a < 4; ++a) {
    FiveVectorField da = cov_deriv_vector(w, H, a);
    for (int c = 0; c < 5; ++c) four_only[c] += zdir[a] * da[c];
  }
  for (const Point& p : points)
    for (int c = 0; c < 5; ++c)
      CHECK(full[c].eval(p) == doctest::Approx(four_only[c].eval(p)).epsilon(1e-12));

  // locality of the fifth slot: ∇̄_5(f·v) = f·∇̄_5 v
  FiveVectorField d5fv = cov_deriv_vector(fv, H, 4);
  FiveVectorField d5v = cov_deriv_vector(v, H, 4);
  for (const Point& p : points)
    for (int c = 0; c < 5; ++c)
      CHECK(d5fv[c].eval(p) == doctest::Approx(f.eval(p) * d5v[c].eval(p)).epsilon(1e-11));
}

TEST_CASE("form derivative satisfies the contraction Leibniz rule") {
  std::mt19937_64 rng(88);
  Connection H = random_connection(rng);
  auto points = test_support::random_points(rng, 50, -0.8, 0.8);

  FiveFormField s = random_form(rng);
  FiveVectorField v = random_field(rng);

  Connection flat;
  FiveFormField s_const;
  for (int i = 0; i < 5; ++i) s_const[i] = Expression(1.5 - i);
  for (int a = 0; a < 5; ++a) {
    FiveFormField d = cov_deriv_form(s_const, flat, a);
    for (int b = 0; b < 5; ++b) CHECK(d[b].is_zero());
  }

  for (int a = 0; a < 5; ++a) {
    Expression lhs = partial_dir(contract(s, v), a);
    Expression rhs = contract(cov_deriv_form(s, H, a), v) + contract(s, cov_deriv_vector(v, H, a));
    Expression res = lhs - rhs;
    for (const Point& p : points) CHECK(std::abs(res.eval(p)) <= 1e-12);
  }

  // constant contraction: <s, v> fixed means <∇̄s, v> = −<s, ∇̄v>
  FiveFormField dual0;
  dual0[0] = Expression(1.0);  // the dual basis form õ⁰
  FiveVectorField e0 = FiveVectorField::constant(FiveVector({1, 0, 0, 0, 0}));
  for (int a = 0; a < 5; ++a) {
    Expression left = contract(cov_deriv_form(dual0, H, a), e0);
    Expression right = contract(dual0, cov_deriv_vector(e0, H, a));
    Expression sum = left + right;
    for (const Point& p : points) CHECK(std::abs(sum.eval(p)) <= 1e-13);
  }
}

TEST_CASE("tensor derivative obeys the product rule and flat/constant cases") {
  std::mt19937_64 rng(99);
  Connection H = random_connection(rng);
  auto points = test_support::random_points(rng, 30, -0.7, 0.7);

  // rank (0,0) reduces to the partial derivative
  Tensor5 scalar(0, 0);
  Expression f = test_support::random_polynomial(rng, 3);
  scalar.at({}, {}) = f;
  for (int a = 0; a < 5; ++a) {
    Tensor5 d = cov_deriv_tensor(scalar, H, a);
    Expression res = d.at({}, {}) - partial_dir(f, a);
    for (const Point& p : points) CHECK(std::abs(res.eval(p)) <= 1e-13);
  }

  // product rule on v ⊗ w
  FiveVectorField v = random_field(rng), w = random_field(rng);
  Tensor5 vw(2, 0);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      int ij[2] = {i, j};
      vw.at(ij, {}) = v[i] * w[j];
    }
  for (int a = 0; a < 5; ++a) {
    Tensor5 d = cov_deriv_tensor(vw, H, a);
    FiveVectorField dv = cov_deriv_vector(v, H, a);
    FiveVectorField dw = cov_deriv_vector(w, H, a);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        int ij[2] = {i, j};
        Expression res = d.at(ij, {}) - (dv[i] * w[j] + v[i] * dw[j]);
        for (const Point& p : points) CHECK(std::abs(res.eval(p)) <= 1e-12);
      }
  }

  // constant tensor, flat connection
  Connection flat;
  Tensor5 m(1, 1);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      int iu[1] = {i}, jl[1] = {j};
      m.at(iu, jl) = Expression(static_cast<double>(i - j));
    }
  for (int a = 0; a < 5; ++a) {
    Tensor5 d = cov_deriv_tensor(m, flat, a);
    for (const Expression& e : d.comp) CHECK(e.is_zero());
  }

  // mixed-rank product rule: v ⊗ s with a lower index
  FiveFormField s = random_form(rng);
  Tensor5 vs(1, 1);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      int iu[1] = {i}, jl[1] = {j};
      vs.at(iu, jl) = v[i] * s[j];
    }
  for (int a = 0; a < 5; ++a) {
    Tensor5 d = cov_deriv_tensor(vs, H, a);
    FiveVectorField dv = cov_deriv_vector(v, H, a);
    FiveFormField ds = cov_deriv_form(s, H, a);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        int iu[1] = {i}, jl[1] = {j};
        Expression res = d.at(iu, jl) - (dv[i] * s[j] + v[i] * ds[j]);
        for (const Point& p : points) CHECK(std::abs(res.eval(p)) <= 1e-12);
      }
  }
}

TEST_CASE("mod-R classes are preserved exactly when the standard constraint holds") {
  std::mt19937_64 rng(111);
  Connection H = random_connection(rng);
  REQUIRE(H.standard_constraint_holds());

  FiveVectorField v = random_field(rng);
  FiveVectorField w = v;
  w[4] = w[4] + test_support::random_polynomial(rng, 2);  // same class mod R

  auto points = test_support::random_points(rng, 30, -0.8, 0.8);
  for (int a = 0; a < 5; ++a) {
    FiveVectorField dv = cov_deriv_vector(v, H, a);
    FiveVectorField dw = cov_deriv_vector(w, H, a);
    for (int alpha = 0; alpha < 4; ++alpha) {
      Expression res = dv[alpha] - dw[alpha];
      for (const Point& p : points) CHECK(std::abs(res.eval(p)) <= 1e-12);
    }
  }

  // breaking H^α_5B breaks the preservation
  Connection bad = H;
  bad.coeff(0, 4, 1) = Expression(0.5);
  CHECK_FALSE(bad.standard_constraint_holds());
  FiveVectorField dv = cov_deriv_vector(v, bad, 1);
  FiveVectorField dw = cov_deriv_vector(w, bad, 1);
  Expression res = dv[0] - dw[0];
  bool violated = false;
  for (const Point& p : points)
    if (std::abs(res.eval(p)) > 1e-6) violated = true;
  CHECK(violated);
}

TEST_CASE("connection transform: identity, round trip, and the tensorial fifth slice") {
  std::mt19937_64 rng(121);
  Connection H = random_connection(rng);
  auto points = test_support::random_points(rng, 50, -0.6, 0.6);

  MatX id = MatX::identity(5);
  Connection same = transform_connection(H, id);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c) {
        Expression res = same.coeff(a, b, c) - H.coeff(a, b, c);
        for (const Point& p : points) CHECK(std::abs(res.eval(p)) <= 1e-13);
      }

  // a position-dependent standard-to-standard transform
  MatX L = MatX::identity(5);
  L(0, 1) = Expression::parse("0.25*x2");
  L(2, 3) = Expression::parse("0.1 + 0.2*x0");
  L(4, 0) = Expression::parse("0.3*x1");  // e'_0 may pick up an E part
  L(4, 4) = Expression::parse("2");
  Connection fwd = transform_connection(H, L);
  Connection back = transform_connection(fwd, L.inverse(), Frame::coordinate().transformed(L));
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c) {
        Expression res = back.coeff(a, b, c) - H.coeff(a, b, c);
        for (const Point& p : points) CHECK(std::abs(res.eval(p)) <= 1e-12);
      }

  // between standard bases the fifth slice transforms tensorially
  MatX slice = fifth_slice_tensorial(H, L);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      Expression res = fwd.coeff(a, b, 4) - slice(a, b);
      for (const Point& p : points) CHECK(std::abs(res.eval(p)) <= 1e-12);
    }

  // constant L with L^5_5 = 2: the fifth slice is the conjugated slice
  // scaled by L^5_5 = 2, with no derivative term anywhere
  MatX L2 = MatX::identity(5);
  L2(4, 4) = Expression(2.0);
  Connection fwd2 = transform_connection(H, L2);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      Expression want = (a == 4 ? Expression(0.5) : Expression(1.0)) *
                        (b == 4 ? Expression(2.0) : Expression(1.0)) * H.coeff(a, b, 4) *
                        Expression(2.0);
      Expression res = fwd2.coeff(a, b, 4) - want;
      for (const Point& p : points) CHECK(std::abs(res.eval(p)) <= 1e-13);
    }
}

TEST_CASE("metric compatibility residual: flat, Levi-Civita, perturbed") {
  MetricG flat_g = MetricG::minkowski();
  Connection flat_h;
  std::mt19937_64 rng(131);
  auto points = test_support::random_points(rng, 40, -0.5, 0.5);
  CHECK(metric_compat_residual(flat_h, flat_g, points) == 0.0);

  // diagonal metric g_00 = 1 + x1², Christoffel symbols by the textbook
  // formula, embedded with vanishing fifth slices
  MetricG g = MetricG::minkowski();
  g.comp(0, 0) = Expression::parse("1 + x1^2");
  MatX ginv(4, 4);
  ginv(0, 0) = Expression(1.0) / g.comp(0, 0);
  for (int i = 1; i < 4; ++i) ginv(i, i) = Expression(-1.0);

  Connection H;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        Expression gamma;
        for (int d = 0; d < 4; ++d) {
          if (ginv(a, d).is_zero()) continue;
          gamma += Expression(0.5) * ginv(a, d) *
                   (g.comp(d, b).partial(c) + g.comp(d, c).partial(b) - g.comp(b, c).partial(d));
        }
        H.coeff(a, b, c) = gamma;
      }
  CHECK(metric_compat_residual(H, g, points) <= 1e-10);

  Connection bad = H;
  bad.coeff(0, 0, 0) = bad.coeff(0, 0, 0) + Expression(0.25);
  CHECK(metric_compat_residual(bad, g, points) > 1e-3);
}

TEST_CASE("D operator: degenerate fifth slice, locality, collinearity") {
  std::mt19937_64 rng(141);
  MetricG g = MetricG::minkowski();
  auto points = test_support::random_points(rng, 10, -0.5, 0.5);

  // no algebraic part: D(u) = ∇_u and Λ = 0
  Connection H4 = random_connection(rng);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) H4.coeff(a, b, 4) = Expression();
  DOperator d4(H4, g);
  FiveVectorField w = random_field(rng);
  PreparedField pw = prepare(w, H4);
  auto cone = sample_future_cone(6);
  for (const Point& p : points) {
    for (std::size_t i = 0; i + 1 < cone.size(); ++i) {
      FiveVector lam = d4.lambda(cone[i], cone[i + 1], pw, p);
      for (int c = 0; c < 5; ++c) CHECK(std::abs(lam[c]) <= 1e-12);
    }
    // D(u) equals the plain directional covariant derivative
    FiveVector du = d4.apply(cone[0], pw, p);
    for (int c = 0; c < 5; ++c) {
      double want = 0.0;
      for (int a = 0; a < 4; ++a) want += cone[0][a] * pw.deriv[static_cast<std::size_t>(a)][c].eval(p);
      CHECK(du[c] == doctest::Approx(want).epsilon(1e-12));
    }
  }

  // generic fifth slice: Λ is local and vanishes on collinear pairs
  Connection H = random_connection(rng);
  DOperator d(H, g);
  Expression f = test_support::random_polynomial(rng, 2);
  FiveVectorField fw;
  for (int i = 0; i < 5; ++i) fw[i] = f * w[i];
  PreparedField pw2 = prepare(w, H);
  PreparedField pfw = prepare(fw, H);
  for (const Point& p : points) {
    FiveVector u = cone[0], v = cone[1];
    FiveVector lam_fw = d.lambda(u, v, pfw, p);
    FiveVector lam_w = d.lambda(u, v, pw2, p);
    for (int c = 0; c < 5; ++c)
      CHECK(lam_fw[c] == doctest::Approx(f.eval(p) * lam_w[c]).epsilon(1e-11));

    FiveVector ku = 1.7 * u, lu = 0.4 * u;
    FiveVector lam_col = d.lambda(ku, lu, pw2, p);
    for (int c = 0; c < 5; ++c) CHECK(std::abs(lam_col[c]) <= 1e-12);
  }

  FiveVector spacelike({0.1, 1, 0, 0, 0});
  CHECK_THROWS_AS(d.apply(spacelike, pw2, points[0]), std::invalid_argument);
}

TEST_CASE("D decomposition reconstructs D and ignores the decomposition gauge") {
  std::mt19937_64 rng(151);
  MetricG g = MetricG::minkowski();
  std::array<FiveVector, 4> cone_basis = {
      FiveVector({1, 0, 0, 0, 0}),
      FiveVector({1, 1, 0, 0, 0}),
      FiveVector({1, 0, 1, 0, 0}),
      FiveVector({1, 0, 0, 1, 0}),
  };
  auto points = test_support::random_points(rng, 5, -0.5, 0.5);
  auto us = sample_future_cone(100);

  // purely four-dimensional connection: Δ = 0, Δ'_α = ∇_α
  Connection H4 = random_connection(rng);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) H4.coeff(a, b, 4) = Expression();
  DDecomposition dec4(DOperator(H4, g), cone_basis);
  MatD delta0 = dec4.delta_at(points[0]);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(std::abs(delta0(i, j)) <= 1e-12);

  // nonzero constant H^5_{μ5} plus generic slices
  Connection H = random_connection(rng);
  H.coeff(4, 0, 4) = Expression(0.8);
  H.coeff(4, 1, 4) = Expression(-0.3);
  DDecomposition dec(DOperator(H, g), cone_basis);
  FiveVectorField w = random_field(rng);
  PreparedField pw = prepare(w, H);

  MatD delta = dec.delta_at(points[0]);
  double delta_norm = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) delta_norm = std::max(delta_norm, std::abs(delta(i, j)));
  CHECK(delta_norm > 0.1);
  // Δ recovered through Λ/φ equals the algebraic slice H^C_{B5}
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(delta(i, j) == doctest::Approx(H.coeff(i, j, 4).eval(points[0])).epsilon(1e-10));

  CHECK(dec.reconstruction_residual(us, pw, points) <= 1e-10);

  std::array<double, 4> shift;
  for (auto& x : shift) x = test_support::uniform(rng, -2.0, 2.0);
  CHECK(dec.gauge_shift_residual(shift, us, pw, points) <= 1e-12);

  // φ agrees with the ρ-combination and vanishes on the basis vectors
  for (const Point& p : points) {
    FiveVector u = us[3], v = us[7];
    double lhs = dec.phi(u, v, p);
    double rhs = dec.rho(u + v, p) - dec.rho(u, p) - dec.rho(v, p);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    for (const FiveVector& e : cone_basis) CHECK(std::abs(dec.rho(e, p)) <= 1e-12);
  }
}
