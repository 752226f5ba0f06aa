#pragma once

#include <array>
#include <span>
#include <vector>

#include "fivec/pentavec.hpp"

namespace fivec {

/// Five-vector 1-form field (covector components s_A).
struct FiveFormField {
  std::array<Expression, 5> c{};
  BasisDescriptor basis;

  Expression& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  const Expression& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
};

/// <s, v> = s_A v^A.
Expression contract(const FiveFormField& s, const FiveVectorField& v);

/// Five-vector connection coefficients.
///
/// coeff(C, B, A) holds H^C_{BA}, the C-component of the derivative of basis
/// vector e_B along direction A. The LAST index is always the
/// differentiation direction; the A = 4 slot is the purely algebraic part
/// that has no space-time direction attached (∂ along it is zero).
struct Connection {
  BasisDescriptor basis;

  Connection() : store_(125) {}
  explicit Connection(BasisDescriptor b) : basis(b), store_(125) {}

  Expression& coeff(int c, int b, int a) { return store_[idx(c, b, a)]; }
  const Expression& coeff(int c, int b, int a) const { return store_[idx(c, b, a)]; }

  /// In a standard basis H^α_{5B} must vanish for α in 0..3: transport keeps
  /// the E line inside E. True when that holds structurally.
  bool standard_constraint_holds() const;

private:
  static std::size_t idx(int c, int b, int a) {
    return static_cast<std::size_t>((c * 5 + b) * 5 + a);
  }
  std::vector<Expression> store_;
};

/// (∇̄_A v)^C = ∂_A v^C + H^C_{BA} v^B, with ∂ along the fifth slot zero.
FiveVectorField cov_deriv_vector(const FiveVectorField& v, const Connection& H, int A);

/// (∇̄_A s)_B = ∂_A s_B − s_C H^C_{BA}.
FiveFormField cov_deriv_form(const FiveFormField& s, const Connection& H, int A);

/// ∇̄_u v = u^A ∇̄_A v; the direction components may be fields.
FiveVectorField cov_deriv_along(const FiveVectorField& v, const Connection& H,
                                const FiveVectorField& u);

/// Dense five-tensor field of rank (p, q), p + q <= 4; upper indices first.
struct Tensor5 {
  int p = 0;
  int q = 0;
  std::vector<Expression> comp;

  Tensor5() = default;
  Tensor5(int upper, int lower);
  Expression& at(std::span<const int> upper, std::span<const int> lower);
  const Expression& at(std::span<const int> upper, std::span<const int> lower) const;
};

/// One +H term per upper index, one −H term per lower index; rank (0,0)
/// reduces to the plain partial derivative. Supported up to rank (2,2).
Tensor5 cov_deriv_tensor(const Tensor5& m, const Connection& H, int A);

/// Z-components of the five basis vectors in the coordinate chart (4 rows by
/// 5 columns); they determine how a scalar differentiates along each basis
/// direction. The default is the passive regular coordinate basis:
/// e_μ = ∂/∂x^μ and e_5 in E (no space-time direction at all).
struct Frame {
  MatX z{4, 5};

  static Frame coordinate();
  /// The frame of the primed basis e'_A = e_B L^B_A.
  Frame transformed(const MatX& L) const;
  /// ∂_F f along basis vector F in this frame.
  Expression dir_deriv(const Expression& f, int F) const;
};

/// Coefficients in the primed basis e'_A = e_B L^B_A:
///   H'^A_BC = (L⁻¹)^A_D H^D_EF L^E_B L^F_C + (L⁻¹)^A_D (∂_F L^D_B) L^F_C,
/// where ∂_F differentiates along the SOURCE basis directions (`frame`).
/// L must be invertible wherever evaluated.
Connection transform_connection(const Connection& H, const MatX& L,
                                const Frame& frame = Frame::coordinate());

/// The C = 5 slice of the transform by the purely tensorial law,
/// out(A,B) = (L⁻¹)^A_D H^D_{E5} L^E_B L^5_5, for comparison with the full
/// transform between standard bases (where the derivative term drops).
MatX fifth_slice_tensorial(const Connection& H, const MatX& L);

/// max over A,B,C and the sample points of |(∇̄_A g)_BC|,
/// (∇̄_A g)_BC = ∂_A g_BC − g_DC H^D_{BA} − g_BD H^D_{CA}. Zero means the
/// connection is compatible with g.
double metric_compat_residual(const Connection& H, const MetricG& g,
                              std::span<const Point> points);

/// A five-vector field together with its five covariant derivatives,
/// precomputed so directional derivatives are cheap to evaluate.
struct PreparedField {
  FiveVectorField w;
  std::array<FiveVectorField, 5> deriv;  // ∇̄_A w
};
PreparedField prepare(const FiveVectorField& w, const Connection& H);

/// The derivative-along-a-curve operator D(u) = ∇̄ at the homogeneous lift
/// of u, defined for u in the open future cone of Z.
class DOperator {
public:
  DOperator(Connection H, MetricG g,
            LiftConvention conv = LiftConvention::irreversible);

  /// D(u)w at p. Requires u in Z⁺ (future timelike or null, zero fifth
  /// component).
  FiveVector apply(const FiveVector& u, const PreparedField& w, const Point& p) const;

  /// Λ(u,v)w = D(u+v)w − D(u)w − D(v)w: the additivity defect, a local
  /// operator.
  FiveVector lambda(const FiveVector& u, const FiveVector& v, const PreparedField& w,
                    const Point& p) const;

  /// ||u|| at p (requires g(u,u) >= 0 there).
  double norm(const FiveVector& u, const Point& p) const;

  const Connection& connection() const { return H_; }
  const MetricG& metric() const { return g_; }

private:
  void require_future(const FiveVector& u, const Point& p) const;
  Connection H_;
  MetricG g_;
  LiftConvention conv_;
};

/// Decomposition D(u) = u^α Δ'_α + ||u|| Δ over a basis of Z⁺ vectors.
/// Δ is extracted from the additivity defect, Λ(u,v) = (||u+v|| − ||u|| −
/// ||v||)·Δ, and Δ'_α = D(e_α) − ||e_α||·Δ.
class DDecomposition {
public:
  DDecomposition(DOperator d, std::array<FiveVector, 4> cone_basis);

  /// Δ at p, recovered by applying Λ(u,v)/φ(u,v) to the constant basis
  /// fields for a quasi-random nondegenerate pair (u, v). Throws when every
  /// sampled bracket vanishes.
  MatD delta_at(const Point& p) const;

  /// Δ'_α w at p (Eq. of the decomposition; α indexes the cone basis).
  FiveVector delta_prime_apply(int alpha, const PreparedField& w, const Point& p) const;

  /// φ(u,v) = ||u+v|| − ||u|| − ||v||.
  double phi(const FiveVector& u, const FiveVector& v, const Point& p) const;
  /// The canonical nonlinear part: ρ(u) = ||u|| − u^α ||e_α|| (vanishes on
  /// the basis vectors); ρ'(u) = ||u|| after the shift that makes it
  /// Lorentz-invariant.
  double rho(const FiveVector& u, const Point& p) const;
  double rho_prime(const FiveVector& u, const Point& p) const;

  /// Components of u in the cone basis (first four slots).
  std::array<double, 4> cone_components(const FiveVector& u) const;

  /// max over u and points of |D(u)w − u^α Δ'_α w − ||u|| Δ w|.
  double reconstruction_residual(std::span<const FiveVector> us, const PreparedField& w,
                                 std::span<const Point> points) const;

  /// Reconstructs through the shifted pieces Δ'_α + X_α Δ and
  /// ρ'(u) − u^α X_α; D(u) must be unchanged for any constants X.
  double gauge_shift_residual(const std::array<double, 4>& shift,
                              std::span<const FiveVector> us, const PreparedField& w,
                              std::span<const Point> points) const;

  const DOperator& op() const { return d_; }

private:
  DOperator d_;
  std::array<FiveVector, 4> cone_basis_;
  MatD cone_inverse_{4, 4};
};

}  // namespace fivec
