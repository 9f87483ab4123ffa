#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "nag/errors.hpp"
#include "nag/multi_index.hpp"

namespace nag {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

enum class Field { Real, Complex };

/// Point on the unit sphere of R^{n+1} or C^{n+1} (projective representative
/// of unit norm in the complex case). The norm is checked to 1e-12.
class UnitPoint {
 public:
  UnitPoint(Field field, CVector coords);

  static UnitPoint real(const Eigen::VectorXd& x);
  static UnitPoint complex(CVector z) { return UnitPoint(Field::Complex, std::move(z)); }
  /// Normalizes before constructing; throws InputError on the zero vector.
  static UnitPoint normalized(Field field, CVector coords);

  Field field() const { return field_; }
  int n() const { return static_cast<int>(coords_.size()) - 1; }
  const CVector& coords() const { return coords_; }
  Eigen::VectorXd real_coords() const { return coords_.real(); }

 private:
  Field field_;
  CVector coords_;
};

/// Dense homogeneous polynomial of degree d in nvars variables.
/// Coefficients are stored in the fixed-degree rank order of MonoTable.
/// Degree 0 (constants) is allowed so that derivative images stay closed.
class HomogeneousPoly {
 public:
  HomogeneousPoly(int nvars, int degree);

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  std::int64_t coefficient_count() const { return coef_.size(); }

  const CVector& coefficients() const { return coef_; }
  CVector& coefficients() { return coef_; }

  Complex coefficient(const std::vector<int>& alpha) const;
  void set_coefficient(const std::vector<int>& alpha, Complex value);

  Complex eval(const CVector& x) const;
  double eval_real(const Eigen::VectorXd& x) const;

  /// Partial derivative with respect to variable j (degree drops by one;
  /// the derivative of a constant is the zero constant).
  HomogeneousPoly partial(int j) const;

  /// Directional derivative sum_j v_j dP/dX_j.
  HomogeneousPoly directional_derivative(const CVector& v) const;

  /// Substitution X <- A X for a square matrix A (used for rotations).
  HomogeneousPoly compose_linear(const CMatrix& a) const;

  HomogeneousPoly conjugate_coefficients() const;

  HomogeneousPoly& operator*=(Complex s) {
    coef_ *= s;
    return *this;
  }

 private:
  int nvars_;
  int degree_;
  CVector coef_;
};

/// Product of homogeneous polynomials (degree adds).
HomogeneousPoly poly_mul(const HomogeneousPoly& a, const HomogeneousPoly& b);

/// Tuple of homogeneous polynomials over a common variable set.
class PolySystem {
 public:
  PolySystem(Field field, std::vector<HomogeneousPoly> components);

  Field field() const { return field_; }
  int q() const { return static_cast<int>(components_.size()); }
  int nvars() const { return components_[0].nvars(); }
  int n() const { return nvars() - 1; }
  std::vector<int> degrees() const;
  int max_degree() const;
  /// Sum of the per-component coefficient space dimensions (the paper's N).
  std::int64_t basis_dimension() const;

  const HomogeneousPoly& component(int i) const { return components_[i]; }
  HomogeneousPoly& component(int i) { return components_[i]; }
  const std::vector<HomogeneousPoly>& components() const { return components_; }

  PolySystem compose_linear(const CMatrix& a) const;

  /// Largest coefficient magnitude across all components.
  double max_abs_coefficient() const;

 private:
  Field field_;
  std::vector<HomogeneousPoly> components_;
};

PolySystem operator*(Complex s, const PolySystem& f);
PolySystem operator+(const PolySystem& a, const PolySystem& b);
PolySystem operator-(const PolySystem& a, const PolySystem& b);
/// t*f + (1-t)*g, the homotopy segment.
PolySystem segment_point(const PolySystem& f, const PolySystem& g, double t);

// --- poly-core operations ---------------------------------------------------

/// (f_1(x), ..., f_q(x)) with O(N) arithmetic.
CVector evaluate(const PolySystem& f, const UnitPoint& x);

/// q x (n+1) matrix of all partial derivatives at x.
CMatrix full_derivative(const PolySystem& f, const UnitPoint& x);

/// Orthonormal basis of the tangent space at x, as the (n+1) x n matrix of
/// basis columns. Produced by a deterministic Householder completion, so
/// repeated calls are bit-identical. At x = e_0 the basis is e_1..e_n.
CMatrix tangent_basis(const UnitPoint& x);

/// Derivative restricted to the tangent space, q x n, in the tangent_basis
/// column frame.
CMatrix tangent_derivative(const PolySystem& f, const UnitPoint& x);

/// k-th derivative applied to vectors v_1..v_k; zero vector for k > max d_i.
CVector kth_derivative_apply(const PolySystem& f, const UnitPoint& x,
                             const std::vector<CVector>& vectors);

/// Weyl norm: sqrt(sum_i sum_a |f_{i,a}|^2 / C(d_i, a)).
double weyl_norm(const PolySystem& f);
double weyl_norm(const HomogeneousPoly& p);

/// Hermitian Weyl inner product <f, g>_W of two polynomials of equal degree.
Complex weyl_inner(const HomogeneousPoly& a, const HomogeneousPoly& b);

/// Coefficient l2 norm.
double std_norm(const PolySystem& f);
double std_norm(const HomogeneousPoly& p);

// --- affine polynomials (inputs to the subdivision algorithm) ---------------

/// Sparse affine polynomial in n variables, total degree <= degree_bound.
struct AffinePoly {
  int nvars = 0;
  int degree_bound = 0;
  std::vector<std::pair<std::vector<int>, Complex>> terms;

  double eval_real(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient_real(const Eigen::VectorXd& x) const;
};

/// Homogenization f^h of degree exactly d: f^h(1, x) = p(x).
HomogeneousPoly homogenize(const AffinePoly& p, int d);

/// Substitutes X_0 = 1.
AffinePoly dehomogenize(const HomogeneousPoly& h);

// --- named test families ----------------------------------------------------

/// Binary homogeneous polynomial restricting to cos(d theta) on the circle.
HomogeneousPoly circle_cosine(int d);
/// Binary homogeneous polynomial restricting to sin(d theta) on the circle.
HomogeneousPoly circle_sine(int d);
/// The monomial c * X^alpha as a single-component system.
PolySystem monomial_system(Field field, const std::vector<int>& alpha, Complex c = 1.0);

}  // namespace nag
