#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "nag/condition.hpp"
#include "nag/polynomial.hpp"
#include "nag/sphere_grid.hpp"

namespace nag {

/// Near-zero grid points selected by the construction-selection step.
struct SelectedCloud {
  std::vector<Eigen::VectorXd> points;  // after cover-preserving thinning
  double threshold = 0.0;               // sqrt(q) D Q delta
  double epsilon = 0.0;                 // ball radius the pipeline will use
  double source_mesh = 0.0;             // delta
  std::int64_t raw_size = 0;            // selected points before thinning
  double thin_radius = 0.0;             // 0 when no thinning was applied
};

/// Simplicial complex with GF(2) boundary structure. simplices[d] lists the
/// d-simplices as ascending vertex tuples, in lexicographic order.
struct SimplicialComplexGF2 {
  int vertex_count = 0;
  std::vector<std::vector<std::vector<int>>> simplices;

  std::int64_t count(int dim) const {
    return dim < static_cast<int>(simplices.size())
               ? static_cast<std::int64_t>(simplices[static_cast<std::size_t>(dim)].size())
               : 0;
  }
};

struct BettiVector {
  std::vector<std::int64_t> betti;
};

/// Radius of the smallest ball enclosing the given points (Welzl).
struct MiniBall {
  Eigen::VectorXd center;
  double radius = 0.0;
};
MiniBall miniball(const std::vector<const Eigen::VectorXd*>& pts);

/// {x in net : ||f(x)|| / (sqrt(q) Q) < D delta}, streamed from the net spec
/// (the materialized points of `net` are ignored if empty but spec is set).
SelectedCloud select_points(const PolySystem& f, const GridSpec& net, double Q, double delta);

/// Exact Cech criterion: a simplex on centers is included iff their smallest
/// enclosing ball has radius <= eps. Guarded at 5000 input points.
SimplicialComplexGF2 cech_nerve(const std::vector<Eigen::VectorXd>& points, double eps,
                                int max_dim);

/// beta_m = dim ker d_m - rank d_{m+1} over GF(2), by Gaussian elimination on
/// bit matrices.
BettiVector betti_numbers(const SimplicialComplexGF2& complex);

struct PolybettiResult {
  BettiVector betti;
  double Q = 0.0;
  double K_hat = 0.0;
  int ell = 0;
  double delta = 0.0;
  double epsilon = 0.0;
  std::int64_t cloud_size = 0;
  std::int64_t raw_cloud_size = 0;
  SelectedCloud cloud;
};

/// POLYBETTI with the full algorithm parameters; refuses instances whose
/// predicted grid exceeds 10^7 points, pointing at the relaxed mode.
PolybettiResult polybetti(const PolySystem& f);

/// Relaxed mode: user-chosen grid exponent and ball radius, accepted only
/// after the homotopy-window hypotheses 90 D^2 K^2 delta < 1 and
/// eps in (6 D K delta, 1/(14 D K)) are verified numerically.
PolybettiResult polybetti_relaxed(const PolySystem& f, int ell0, double eps0);

/// Symmetric Hausdorff estimate between two point clouds on the sphere
/// (geodesic); +inf when exactly one side is empty.
double hausdorff_estimate(const std::vector<Eigen::VectorXd>& a,
                          const std::vector<Eigen::VectorXd>& b);

/// One step of Newton's method for f restricted to the tangent space at z,
/// mapped back to the sphere. Real systems with q <= n (least-squares step).
Eigen::VectorXd real_tangent_newton(const PolySystem& f, const Eigen::VectorXd& z);

}  // namespace nag
