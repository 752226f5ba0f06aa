#include "fivec/pentavec.hpp"

#include <cmath>
#include <stdexcept>

namespace fivec {

MetricG MetricG::minkowski(BasisDescriptor b) {
  MetricG g;
  g.basis = b;
  g.comp(0, 0) = Expression(1.0);
  for (int i = 1; i < 4; ++i) g.comp(i, i) = Expression(-1.0);
  return g;
}

MetricH MetricH::normalized_regular(const MetricG& g, int xi) {
  if (xi != 1 && xi != -1) throw std::invalid_argument("xi must be +1 or -1");
  if (!g.basis.is_regular())
    throw std::invalid_argument("h is defined from g in a normalized regular basis");
  MetricH h;
  h.basis = g.basis;
  h.basis.kind = BasisKind::normalized_regular;
  h.basis.epsilon_sign = xi;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) h.comp(a, b) = g.comp(a, b);
  h.comp(4, 4) = Expression(static_cast<double>(xi));
  return h;
}

std::pair<FiveVector, FiveVector> split(const FiveVector& u) {
  if (!u.basis.is_standard()) throw std::invalid_argument("split requires a standard basis");
  FiveVector z = u, e;
  e.basis = u.basis;
  e[4] = u[4];
  z[4] = 0.0;
  return {z, e};
}

double g_inner(const FiveVector& u, const FiveVector& v, const MatD& g) {
  if (u.basis != v.basis) throw std::invalid_argument("basis mismatch in g_inner");
  double acc = 0.0;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) acc += g(a, b) * u[a] * v[b];
  return acc;
}

double g_inner(const FiveVector& u, const FiveVector& v, const MetricG& g, const Point& p) {
  return g_inner(u, v, g.eval(p));
}

FiveVector homogeneous_lift(const FiveVector& u, CausalClass cls, LiftConvention conv,
                            const MatD& g) {
  if (u.basis.kind != BasisKind::normalized_regular)
    throw std::invalid_argument("homogeneous lift requires a normalized regular basis");
  if (u[4] != 0.0) throw std::invalid_argument("homogeneous lift requires a Z-vector");

  double q = g_inner(u, u, g);
  bool spacelike = cls == CausalClass::spacelike;
  if (spacelike && q >= 0.0)
    throw std::invalid_argument("causal class spacelike but g(u,u) >= 0");
  if (!spacelike && q < 0.0)
    throw std::invalid_argument("causal class timelike/null but g(u,u) < 0");

  FiveVector lifted = u;
  double norm = std::sqrt(std::abs(q));
  if (conv == LiftConvention::irreversible) {
    lifted[4] = norm;
  } else {
    switch (cls) {
      case CausalClass::future_timelike_or_null: lifted[4] = norm; break;
      case CausalClass::past_timelike_or_null: lifted[4] = -norm; break;
      case CausalClass::spacelike: lifted[4] = 0.0; break;
    }
  }
  return lifted;
}

FiveVector homogeneous_lift(const FiveVector& u, CausalClass cls, LiftConvention conv,
                            const MetricG& g, const Point& p) {
  return homogeneous_lift(u, cls, conv, g.eval(p));
}

double h_relation_residual(const FiveVector& lifted, const MatD& g, const MatD& h, int xi) {
  double lhs = 0.0;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) lhs += h(a, b) * lifted[a] * lifted[b];
  double rhs = (1.0 + static_cast<double>(xi)) * g_inner(lifted, lifted, g);
  return std::abs(lhs - rhs);
}

double h_relation_residual(const FiveVector& lifted, const MetricG& g, const MetricH& h,
                           const Point& p) {
  return h_relation_residual(lifted, g.eval(p), h.eval(p), h.basis.epsilon_sign);
}

bool equivalent_mod_r(const FiveVector& u, const FiveVector& v) {
  if (u.basis != v.basis || !u.basis.is_standard())
    throw std::invalid_argument("mod-R comparison requires one standard basis");
  for (int a = 0; a < 4; ++a)
    if (u[a] != v[a]) return false;
  return true;
}

FiveVector transform_vector(const FiveVector& u, const MatD& L) {
  MatD inv = L.inverse();
  FiveVector out;
  out.basis = u.basis;
  for (int a = 0; a < 5; ++a) {
    double acc = 0.0;
    for (int b = 0; b < 5; ++b) acc += inv(a, b) * u[b];
    out[a] = acc;
  }
  return out;
}

MatD transform_bilinear(const MatD& m, const MatD& L) { return L.transpose() * m * L; }
MatX transform_bilinear(const MatX& m, const MatX& L) { return L.transpose() * m * L; }

bool is_standard_transform(const MatD& L) {
  for (int a = 0; a < 4; ++a)
    if (L(a, 4) != 0.0) return false;
  return true;
}

}  // namespace fivec
