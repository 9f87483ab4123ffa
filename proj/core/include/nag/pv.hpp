#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "nag/norms.hpp"
#include "nag/polynomial.hpp"

namespace nag {

/// Axis-aligned box m + [-w/2, w/2]^n.
struct Box {
  Eigen::VectorXd center;
  double width = 0.0;
};

enum class BoxClause { Value, Gradient };

struct AcceptedBox {
  Box box;
  BoxClause clause = BoxClause::Value;
};

struct PVResult {
  std::vector<AcceptedBox> accepted;  // sorted by center, then width
  std::int64_t boxes_processed = 0;
  int max_depth_reached = 0;
  double Q = 0.0;
  CertifiedNorm norm;
  bool completed = true;
  std::vector<Box> unresolved;  // nonempty only when the depth cap was hit
};

/// IO(x) = (1, x) / sqrt(1 + |x|^2) on S^n.
UnitPoint io_map(const Eigen::VectorXd& x);

/// The scaled evaluations (f_hat(x), |grad_hat f(x)|) built from a certified
/// upper bound Q of ||f^h||_inf^R.
std::pair<double, double> hat_values(const AffinePoly& f, double Q, const Eigen::VectorXd& x);

enum class BoxTest { AcceptValue, AcceptGradient, Reject };

/// The interval predicate of the subdivision: accept on the value clause,
/// the gradient clause, or reject (subdivide).
BoxTest box_predicate(const AffinePoly& f, double Q, const Box& b);

/// 2^n children of width w/2 and centers m +- w/4 per axis, in lexicographic
/// sign order (all minus first).
std::vector<Box> standard_subdivision(const Box& b);

/// Subdivision loop over [-a, a]^n. One certified sup-norm computation (at
/// accuracy k_norm) happens up front; boxes are split until every box passes
/// the predicate or the depth cap is reached (completed = false then, with
/// the offending boxes attached).
PVResult pv_subdivide(const AffinePoly& f, double a, int k_norm, int max_depth);

/// Local size bound 1 / (2^{3/2} d^{3/2} sqrt(n) K(f^h, IO(x)))^n.
double local_size_bound(const AffinePoly& f, const CertifiedNorm& norm,
                        const Eigen::VectorXd& x);

}  // namespace nag
