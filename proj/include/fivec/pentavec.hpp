#pragma once

#include <array>
#include <utility>

#include "fivec/expr.hpp"
#include "fivec/linalg.hpp"

namespace fivec {

// Five-vector linear algebra. The five-dimensional space splits as Z + E:
// Z is isomorphic to the tangent space, E is a distinguished one-dimensional
// direction that corresponds to no space-time direction. Index 4 is the
// fifth ("E") slot throughout; space-time signature is fixed to (+,-,-,-),
// so timelike means g(u,u) > 0.

enum class BasisKind {
  standard,            // fifth basis vector lies in E
  regular,             // standard, and the first four basis vectors lie in Z
  normalized_regular,  // regular with |h(e5,e5)| = 1
  general,
};

struct BasisDescriptor {
  BasisKind kind = BasisKind::normalized_regular;
  int epsilon_sign = +1;  // ξ, the sign of h on the E subspace

  bool is_standard() const { return kind != BasisKind::general; }
  bool is_regular() const {
    return kind == BasisKind::regular || kind == BasisKind::normalized_regular;
  }
  friend bool operator==(const BasisDescriptor&, const BasisDescriptor&) = default;
};

struct FiveVector {
  std::array<double, 5> c{};
  BasisDescriptor basis;

  FiveVector() = default;
  FiveVector(std::array<double, 5> comps, BasisDescriptor b = {}) : c(comps), basis(b) {}

  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  friend FiveVector operator+(const FiveVector& a, const FiveVector& b) {
    FiveVector out = a;
    for (int i = 0; i < 5; ++i) out[i] += b[i];
    return out;
  }
  friend FiveVector operator-(const FiveVector& a, const FiveVector& b) {
    FiveVector out = a;
    for (int i = 0; i < 5; ++i) out[i] -= b[i];
    return out;
  }
  friend FiveVector operator-(const FiveVector& a) {
    FiveVector out = a;
    for (auto& v : out.c) v = -v;
    return out;
  }
  friend FiveVector operator*(double k, const FiveVector& a) {
    FiveVector out = a;
    for (auto& v : out.c) v *= k;
    return out;
  }
};

struct FiveVectorField {
  std::array<Expression, 5> c{};
  BasisDescriptor basis;

  Expression& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  const Expression& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  FiveVector eval(const Point& p) const {
    FiveVector out;
    out.basis = basis;
    for (int i = 0; i < 5; ++i) out[i] = (*this)[i].eval(p);
    return out;
  }
  static FiveVectorField constant(const FiveVector& v) {
    FiveVectorField f;
    f.basis = v.basis;
    for (int i = 0; i < 5; ++i) f[i] = Expression(v[i]);
    return f;
  }
};

/// Degenerate inner product g: in a standard basis the fifth row and column
/// vanish and the 4x4 block has signature (+,-,-,-).
struct MetricG {
  MatX comp{5, 5};
  BasisDescriptor basis;

  static MetricG minkowski(BasisDescriptor b = {});
  MatD eval(const Point& p) const { return eval_matrix(comp, p); }
};

/// Nondegenerate companion metric h: in a normalized regular basis it equals
/// g on the Z block and ξ on the E block.
struct MetricH {
  MatX comp{5, 5};
  BasisDescriptor basis;

  static MetricH normalized_regular(const MetricG& g, int xi);
  MatD eval(const Point& p) const { return eval_matrix(comp, p); }
};

enum class CausalClass { future_timelike_or_null, past_timelike_or_null, spacelike };
enum class LiftConvention { reversible, irreversible };

/// zPart + ePart = u, with ePart supported on the fifth slot only.
/// Requires a standard basis.
std::pair<FiveVector, FiveVector> split(const FiveVector& u);

double g_inner(const FiveVector& u, const FiveVector& v, const MatD& g);
double g_inner(const FiveVector& u, const FiveVector& v, const MetricG& g, const Point& p);

/// Homogeneous tangent lift of a Z-vector. Under the reversible convention:
/// future-directed curves get u + ||u||·n, past-directed u - ||u||·n, and
/// spacelike curves keep a zero E-component; under the irreversible
/// convention every class gets u + ||u||·n with ||u|| = sqrt|g(u,u)|.
/// n is the fifth basis vector, so the basis must be normalized regular.
FiveVector homogeneous_lift(const FiveVector& u, CausalClass cls, LiftConvention conv,
                            const MatD& g);
FiveVector homogeneous_lift(const FiveVector& u, CausalClass cls, LiftConvention conv,
                            const MetricG& g, const Point& p);

/// |h(u,u) - (1 + ξ)·g(u,u)| for a lifted vector.
double h_relation_residual(const FiveVector& lifted, const MatD& g, const MatD& h, int xi);
double h_relation_residual(const FiveVector& lifted, const MetricG& g, const MetricH& h,
                           const Point& p);

/// u ≡ v (mod R): the difference lies in E, i.e. the first four components
/// agree. Requires the same standard basis.
bool equivalent_mod_r(const FiveVector& u, const FiveVector& v);

/// Components in the primed basis e'_A = e_B L^B_A, i.e. u'^A = (L⁻¹)^A_B u^B.
FiveVector transform_vector(const FiveVector& u, const MatD& L);

/// Covariant (0,2) components in the primed basis: m'_AB = m_CD L^C_A L^D_B.
MatD transform_bilinear(const MatD& m, const MatD& L);
MatX transform_bilinear(const MatX& m, const MatX& L);

/// True when L maps standard bases to standard bases (L^α_5 = 0).
bool is_standard_transform(const MatD& L);

}  // namespace fivec
