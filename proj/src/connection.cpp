#include "fivec/connection.hpp"

#include <cmath>
#include <stdexcept>

#include "fivec/sampling.hpp"

namespace fivec {

Expression contract(const FiveFormField& s, const FiveVectorField& v) {
  if (s.basis != v.basis) throw std::invalid_argument("basis mismatch in contraction");
  Expression acc;
  for (int a = 0; a < 5; ++a) acc += s[a] * v[a];
  return acc;
}

bool Connection::standard_constraint_holds() const {
  for (int alpha = 0; alpha < 4; ++alpha)
    for (int b = 0; b < 5; ++b)
      if (!coeff(alpha, 4, b).is_zero()) return false;
  return true;
}

FiveVectorField cov_deriv_vector(const FiveVectorField& v, const Connection& H, int A) {
  if (v.basis != H.basis) throw std::invalid_argument("basis mismatch in covariant derivative");
  FiveVectorField out;
  out.basis = v.basis;
  for (int c = 0; c < 5; ++c) {
    Expression acc = partial_dir(v[c], A);
    for (int b = 0; b < 5; ++b) acc += H.coeff(c, b, A) * v[b];
    out[c] = acc;
  }
  return out;
}

FiveFormField cov_deriv_form(const FiveFormField& s, const Connection& H, int A) {
  if (s.basis != H.basis) throw std::invalid_argument("basis mismatch in covariant derivative");
  FiveFormField out;
  out.basis = s.basis;
  for (int b = 0; b < 5; ++b) {
    Expression acc = partial_dir(s[b], A);
    for (int c = 0; c < 5; ++c) acc -= s[c] * H.coeff(c, b, A);
    out[b] = acc;
  }
  return out;
}

FiveVectorField cov_deriv_along(const FiveVectorField& v, const Connection& H,
                                const FiveVectorField& u) {
  FiveVectorField out;
  out.basis = v.basis;
  for (int a = 0; a < 5; ++a) {
    if (u[a].is_zero()) continue;
    FiveVectorField da = cov_deriv_vector(v, H, a);
    for (int c = 0; c < 5; ++c) out[c] += u[a] * da[c];
  }
  return out;
}

Tensor5::Tensor5(int upper, int lower) : p(upper), q(lower) {
  if (p < 0 || q < 0 || p > 2 || q > 2) throw std::invalid_argument("tensor rank must be <= (2,2)");
  std::size_t size = 1;
  for (int i = 0; i < p + q; ++i) size *= 5;
  comp.resize(size);
}

namespace {

std::size_t tensor_index(int p, int q, std::span<const int> upper, std::span<const int> lower) {
  if (static_cast<int>(upper.size()) != p || static_cast<int>(lower.size()) != q)
    throw std::invalid_argument("tensor index arity mismatch");
  std::size_t idx = 0;
  for (int i : upper) idx = idx * 5 + static_cast<std::size_t>(i);
  for (int j : lower) idx = idx * 5 + static_cast<std::size_t>(j);
  return idx;
}

}  // namespace

Expression& Tensor5::at(std::span<const int> upper, std::span<const int> lower) {
  return comp[tensor_index(p, q, upper, lower)];
}
const Expression& Tensor5::at(std::span<const int> upper, std::span<const int> lower) const {
  return comp[tensor_index(p, q, upper, lower)];
}

Tensor5 cov_deriv_tensor(const Tensor5& m, const Connection& H, int A) {
  Tensor5 out(m.p, m.q);
  const int rank = m.p + m.q;
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  for (;;) {
    std::span<const int> up(idx.data(), static_cast<std::size_t>(m.p));
    std::span<const int> lo(idx.data() + m.p, static_cast<std::size_t>(m.q));
    Expression acc = partial_dir(m.at(up, lo), A);
    std::vector<int> probe = idx;
    for (int slot = 0; slot < rank; ++slot) {
      int original = idx[static_cast<std::size_t>(slot)];
      for (int d = 0; d < 5; ++d) {
        probe[static_cast<std::size_t>(slot)] = d;
        std::span<const int> pu(probe.data(), static_cast<std::size_t>(m.p));
        std::span<const int> pl(probe.data() + m.p, static_cast<std::size_t>(m.q));
        const Expression& val = m.at(pu, pl);
        if (val.is_zero()) continue;
        if (slot < m.p)
          acc += H.coeff(original, d, A) * val;
        else
          acc -= H.coeff(d, original, A) * val;
      }
      probe[static_cast<std::size_t>(slot)] = original;
    }
    out.at(up, lo) = acc;
    // advance the multi-index
    int carry = rank - 1;
    while (carry >= 0 && ++idx[static_cast<std::size_t>(carry)] == 5) {
      idx[static_cast<std::size_t>(carry)] = 0;
      --carry;
    }
    if (carry < 0) break;
  }
  return out;
}

Frame Frame::coordinate() {
  Frame f;
  for (int mu = 0; mu < 4; ++mu) f.z(mu, mu) = Expression(1.0);
  return f;
}

Frame Frame::transformed(const MatX& L) const {
  Frame out;
  out.z = z * L;
  return out;
}

Expression Frame::dir_deriv(const Expression& f, int F) const {
  Expression acc;
  for (int mu = 0; mu < 4; ++mu) {
    if (z(mu, F).is_zero()) continue;
    acc += z(mu, F) * f.partial(mu);
  }
  return acc;
}

Connection transform_connection(const Connection& H, const MatX& L, const Frame& frame) {
  MatX inv = L.inverse();

  Connection out;
  out.basis = H.basis;
  bool standard_L = true;
  for (int alpha = 0; alpha < 4; ++alpha)
    if (!L(alpha, 4).is_zero()) standard_L = false;
  if (!(H.basis.is_standard() && standard_L)) out.basis.kind = BasisKind::general;

  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c) {
        Expression acc;
        for (int d = 0; d < 5; ++d) {
          if (inv(a, d).is_zero()) continue;
          // homogeneous part
          for (int e = 0; e < 5; ++e) {
            if (L(e, b).is_zero()) continue;
            for (int f = 0; f < 5; ++f) {
              const Expression& h = H.coeff(d, e, f);
              if (h.is_zero() || L(f, c).is_zero()) continue;
              acc += inv(a, d) * h * L(e, b) * L(f, c);
            }
          }
          // inhomogeneous part
          for (int f = 0; f < 5; ++f) {
            if (L(f, c).is_zero()) continue;
            Expression dl = frame.dir_deriv(L(d, b), f);
            if (dl.is_zero()) continue;
            acc += inv(a, d) * dl * L(f, c);
          }
        }
        out.coeff(a, b, c) = acc;
      }
  return out;
}

MatX fifth_slice_tensorial(const Connection& H, const MatX& L) {
  MatX inv = L.inverse();
  MatX out(5, 5);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      Expression acc;
      for (int d = 0; d < 5; ++d) {
        if (inv(a, d).is_zero()) continue;
        for (int e = 0; e < 5; ++e) {
          const Expression& h = H.coeff(d, e, 4);
          if (h.is_zero() || L(e, b).is_zero()) continue;
          acc += inv(a, d) * h * L(e, b);
        }
      }
      out(a, b) = acc * L(4, 4);
    }
  return out;
}

double metric_compat_residual(const Connection& H, const MetricG& g,
                              std::span<const Point> points) {
  double worst = 0.0;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c) {
        Expression res = partial_dir(g.comp(b, c), a);
        for (int d = 0; d < 5; ++d) {
          res -= g.comp(d, c) * H.coeff(d, b, a);
          res -= g.comp(b, d) * H.coeff(d, c, a);
        }
        if (res.is_zero()) continue;
        for (const Point& p : points) worst = std::max(worst, std::abs(res.eval(p)));
      }
  return worst;
}

PreparedField prepare(const FiveVectorField& w, const Connection& H) {
  PreparedField out;
  out.w = w;
  for (int a = 0; a < 5; ++a) out.deriv[static_cast<std::size_t>(a)] = cov_deriv_vector(w, H, a);
  return out;
}

DOperator::DOperator(Connection H, MetricG g, LiftConvention conv)
    : H_(std::move(H)), g_(std::move(g)), conv_(conv) {}

void DOperator::require_future(const FiveVector& u, const Point& p) const {
  if (u[4] != 0.0) throw std::invalid_argument("D(u) requires a Z-vector");
  if (u[0] <= 0.0 || g_inner(u, u, g_, p) < 0.0)
    throw std::invalid_argument("D(u) requires u in the future cone Z+");
}

double DOperator::norm(const FiveVector& u, const Point& p) const {
  double q = g_inner(u, u, g_, p);
  if (q < 0.0) throw std::invalid_argument("norm of a spacelike vector");
  return std::sqrt(q);
}

FiveVector DOperator::apply(const FiveVector& u, const PreparedField& w, const Point& p) const {
  require_future(u, p);
  // D(u) = ∇̄ at the lift u + ||u||·n: the fifth slot weight is ||u||.
  FiveVector out;
  out.basis = w.w.basis;
  double weight5 = norm(u, p);
  for (int c = 0; c < 5; ++c) {
    double acc = 0.0;
    for (int alpha = 0; alpha < 4; ++alpha)
      acc += u[alpha] * w.deriv[static_cast<std::size_t>(alpha)][c].eval(p);
    acc += weight5 * w.deriv[4][c].eval(p);
    out[c] = acc;
  }
  return out;
}

FiveVector DOperator::lambda(const FiveVector& u, const FiveVector& v, const PreparedField& w,
                             const Point& p) const {
  FiveVector sum = apply(u + v, w, p);
  FiveVector du = apply(u, w, p);
  FiveVector dv = apply(v, w, p);
  return sum - du - dv;
}

DDecomposition::DDecomposition(DOperator d, std::array<FiveVector, 4> cone_basis)
    : d_(std::move(d)), cone_basis_(cone_basis) {
  MatD m(4, 4);
  for (int col = 0; col < 4; ++col) {
    const FiveVector& e = cone_basis_[static_cast<std::size_t>(col)];
    if (e[4] != 0.0 || e[0] <= 0.0)
      throw std::invalid_argument("cone basis vectors must lie in Z+");
    for (int row = 0; row < 4; ++row) m(row, col) = e[row];
  }
  cone_inverse_ = m.inverse();
}

double DDecomposition::phi(const FiveVector& u, const FiveVector& v, const Point& p) const {
  return d_.norm(u + v, p) - d_.norm(u, p) - d_.norm(v, p);
}

double DDecomposition::rho_prime(const FiveVector& u, const Point& p) const {
  return d_.norm(u, p);
}

double DDecomposition::rho(const FiveVector& u, const Point& p) const {
  auto comps = cone_components(u);
  double acc = d_.norm(u, p);
  for (int alpha = 0; alpha < 4; ++alpha)
    acc -= comps[static_cast<std::size_t>(alpha)] *
           d_.norm(cone_basis_[static_cast<std::size_t>(alpha)], p);
  return acc;
}

std::array<double, 4> DDecomposition::cone_components(const FiveVector& u) const {
  std::array<double, 4> out{};
  for (int row = 0; row < 4; ++row) {
    double acc = 0.0;
    for (int col = 0; col < 4; ++col) acc += cone_inverse_(row, col) * u[col];
    out[static_cast<std::size_t>(row)] = acc;
  }
  return out;
}

MatD DDecomposition::delta_at(const Point& p) const {
  // Probe quasi-random cone pairs until the bracket φ is usable, then apply
  // Λ/φ to the constant basis fields; Λ is local so this recovers Δ.
  const auto us = sample_future_cone(32, cone_basis_[0].basis, 0);
  const auto vs = sample_future_cone(32, cone_basis_[0].basis, 101);
  for (int k = 0; k < 32; ++k) {
    const FiveVector& u = us[static_cast<std::size_t>(k)];
    const FiveVector& v = vs[static_cast<std::size_t>(k)];
    double f = phi(u, v, p);
    if (std::abs(f) < 1e-6) continue;
    MatD delta(5, 5);
    for (int b = 0; b < 5; ++b) {
      FiveVector basis_vec;
      basis_vec.basis = cone_basis_[0].basis;
      basis_vec[b] = 1.0;
      PreparedField pw = prepare(FiveVectorField::constant(basis_vec), d_.connection());
      FiveVector col = d_.lambda(u, v, pw, p);
      for (int c = 0; c < 5; ++c) delta(c, b) = col[c] / f;
    }
    return delta;
  }
  throw std::runtime_error("degenerate pair: every sampled bracket vanished");
}

FiveVector DDecomposition::delta_prime_apply(int alpha, const PreparedField& w,
                                             const Point& p) const {
  const FiveVector& e = cone_basis_[static_cast<std::size_t>(alpha)];
  FiveVector de = d_.apply(e, w, p);
  double n = d_.norm(e, p);
  MatD delta = delta_at(p);
  FiveVector wp = w.w.eval(p);
  for (int c = 0; c < 5; ++c) {
    double acc = 0.0;
    for (int b = 0; b < 5; ++b) acc += delta(c, b) * wp[b];
    de[c] -= n * acc;
  }
  return de;
}

double DDecomposition::reconstruction_residual(std::span<const FiveVector> us,
                                               const PreparedField& w,
                                               std::span<const Point> points) const {
  double worst = 0.0;
  for (const Point& p : points) {
    MatD delta = delta_at(p);
    FiveVector wp = w.w.eval(p);
    FiveVector delta_w;
    delta_w.basis = w.w.basis;
    for (int c = 0; c < 5; ++c) {
      double acc = 0.0;
      for (int b = 0; b < 5; ++b) acc += delta(c, b) * wp[b];
      delta_w[c] = acc;
    }
    std::array<FiveVector, 4> dprime;
    for (int alpha = 0; alpha < 4; ++alpha) {
      const FiveVector& e = cone_basis_[static_cast<std::size_t>(alpha)];
      FiveVector de = d_.apply(e, w, p);
      double n = d_.norm(e, p);
      dprime[static_cast<std::size_t>(alpha)] = de - n * delta_w;
    }
    for (const FiveVector& u : us) {
      FiveVector direct = d_.apply(u, w, p);
      auto comps = cone_components(u);
      FiveVector rebuilt = d_.norm(u, p) * delta_w;
      for (int alpha = 0; alpha < 4; ++alpha)
        rebuilt = rebuilt + comps[static_cast<std::size_t>(alpha)] *
                                dprime[static_cast<std::size_t>(alpha)];
      for (int c = 0; c < 5; ++c) worst = std::max(worst, std::abs(direct[c] - rebuilt[c]));
    }
  }
  return worst;
}

double DDecomposition::gauge_shift_residual(const std::array<double, 4>& shift,
                                            std::span<const FiveVector> us,
                                            const PreparedField& w,
                                            std::span<const Point> points) const {
  double worst = 0.0;
  for (const Point& p : points) {
    MatD delta = delta_at(p);
    FiveVector wp = w.w.eval(p);
    FiveVector delta_w;
    delta_w.basis = w.w.basis;
    for (int c = 0; c < 5; ++c) {
      double acc = 0.0;
      for (int b = 0; b < 5; ++b) acc += delta(c, b) * wp[b];
      delta_w[c] = acc;
    }
    for (const FiveVector& u : us) {
      FiveVector direct = d_.apply(u, w, p);
      auto comps = cone_components(u);
      double rho_shifted = d_.norm(u, p);
      FiveVector rebuilt;
      rebuilt.basis = w.w.basis;
      for (int alpha = 0; alpha < 4; ++alpha) {
        auto ai = static_cast<std::size_t>(alpha);
        const FiveVector& e = cone_basis_[ai];
        FiveVector de = d_.apply(e, w, p);
        FiveVector dprime = de - d_.norm(e, p) * delta_w;
        // Δ'_α → Δ'_α + X_α Δ and ρ'(u) → ρ'(u) − u^α X_α leave D(u) fixed.
        FiveVector shifted = dprime + shift[ai] * delta_w;
        rebuilt = rebuilt + comps[ai] * shifted;
        rho_shifted -= comps[ai] * shift[ai];
      }
      rebuilt = rebuilt + rho_shifted * delta_w;
      for (int c = 0; c < 5; ++c) worst = std::max(worst, std::abs(direct[c] - rebuilt[c]));
    }
  }
  return worst;
}

}  // namespace fivec
