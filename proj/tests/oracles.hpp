// Independent reference implementations used to freeze expected values.
// Everything here deliberately avoids the library's evaluation and norm
// paths: direct term-by-term arithmetic, finite differences and rejection
// sampling only.
#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "nag/polynomial.hpp"
#include "nag/rng.hpp"

namespace oracle {

using nag::Complex;
using nag::CVector;

/// Term-by-term evaluation straight off the coefficient list.
inline Complex naive_eval(const nag::HomogeneousPoly& p, const CVector& x) {
  auto table = nag::MonoTable::get(p.nvars(), std::max(1, p.degree()));
  const auto& exps = table->exps(p.degree());
  Complex acc(0.0, 0.0);
  for (std::int64_t r = 0; r < p.coefficients().size(); ++r) {
    Complex term = p.coefficients()[r];
    const int* alpha = exps.data() + static_cast<std::size_t>(r) * p.nvars();
    for (int v = 0; v < p.nvars(); ++v)
      for (int e = 0; e < alpha[v]; ++e) term *= x[v];
    acc += term;
  }
  return acc;
}

/// Central finite-difference partial derivative of naive_eval.
inline Complex fd_partial(const nag::HomogeneousPoly& p, const CVector& x, int j,
                          double h = 1e-6) {
  CVector xp = x, xm = x;
  xp[j] += h;
  xm[j] -= h;
  return (naive_eval(p, xp) - naive_eval(p, xm)) / (2.0 * h);
}

/// Haar-ish random orthogonal matrix by QR of a Gaussian matrix.
inline Eigen::MatrixXd random_orthogonal(int n, nag::Rng& rng) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

inline nag::CMatrix random_unitary(int n, nag::Rng& rng) {
  nag::CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<nag::CMatrix> qr(g);
  nag::CMatrix q = qr.householderQ();
  nag::CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (d != Complex(0.0, 0.0)) q.col(i) *= d / std::abs(d);
  }
  return q;
}

/// Dense random real system with standard normal monomial coefficients.
inline nag::PolySystem random_real_system(int n, const std::vector<int>& degrees,
                                          nag::Rng& rng) {
  std::vector<nag::HomogeneousPoly> comps;
  for (int d : degrees) {
    nag::HomogeneousPoly p(n + 1, d);
    for (std::int64_t r = 0; r < p.coefficients().size(); ++r)
      p.coefficients()[r] = Complex(rng.normal(), 0.0);
    comps.push_back(std::move(p));
  }
  return nag::PolySystem(nag::Field::Real, std::move(comps));
}

inline nag::PolySystem random_complex_system(int n, const std::vector<int>& degrees,
                                             nag::Rng& rng) {
  std::vector<nag::HomogeneousPoly> comps;
  for (int d : degrees) {
    nag::HomogeneousPoly p(n + 1, d);
    for (std::int64_t r = 0; r < p.coefficients().size(); ++r)
      p.coefficients()[r] = rng.complex_normal();
    comps.push_back(std::move(p));
  }
  return nag::PolySystem(nag::Field::Complex, std::move(comps));
}

inline nag::UnitPoint random_real_point(int nvars, nag::Rng& rng) {
  const auto x = rng.sphere_point(nvars);
  return nag::UnitPoint::real(Eigen::Map<const Eigen::VectorXd>(x.data(), nvars));
}

inline nag::UnitPoint random_complex_point(int nvars, nag::Rng& rng) {
  const auto z = rng.complex_sphere_point(nvars);
  CVector v(nvars);
  for (int i = 0; i < nvars; ++i) v[i] = z[static_cast<std::size_t>(i)];
  return nag::UnitPoint(nag::Field::Complex, v);
}

/// Dense scan of |f| over the circle (n = 1 only).
inline double circle_max(const nag::PolySystem& f, std::int64_t points) {
  double best = 0.0;
  for (std::int64_t i = 0; i < points; ++i) {
    const double th = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(points);
    CVector x(2);
    x << Complex(std::cos(th), 0.0), Complex(std::sin(th), 0.0);
    for (int c = 0; c < f.q(); ++c)
      best = std::max(best, std::abs(naive_eval(f.component(c), x)));
  }
  return best;
}

/// Connected components of a union of equal balls: each ball is connected,
/// so path components equal components of the pairwise-overlap graph. Only
/// distances enter; no nerve or rank computation is shared with the library.
inline int ball_union_components(const std::vector<Eigen::VectorXd>& centers, double eps) {
  if (centers.empty()) return 0;
  std::vector<int> parent(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      if ((centers[i] - centers[j]).norm() <= 2.0 * eps)
        parent[static_cast<std::size_t>(find(static_cast<int>(i)))] =
            find(static_cast<int>(j));
  int count = 0;
  for (std::size_t i = 0; i < centers.size(); ++i)
    if (find(static_cast<int>(i)) == static_cast<int>(i)) ++count;
  return count;
}

}  // namespace oracle
