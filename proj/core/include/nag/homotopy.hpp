#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nag/polynomial.hpp"

namespace nag {

/// Initial pair for the linear homotopy, drawn from the standard distribution
/// on the solution variety.
struct StandardPair {
  PolySystem g;
  UnitPoint zeta;
};

struct HomotopyStep {
  double t = 0.0;
  double dt = 0.0;
  double M = 0.0;              // condition value used for the step rule
  double norm_lower = 0.0;     // lower surrogate of ||q_t||_inf
  double norm_upper = 0.0;     // upper surrogate of ||q_t||_inf
};

struct HomotopyTrace {
  std::vector<HomotopyStep> steps;
  CVector final_z;
  std::int64_t iterations = 0;
  bool accepted = false;          // Newton-contraction + residual certificate
  double final_residual = 0.0;    // ||f(z)|| / ||f||_W after cleanup
  int cleanup_steps = 0;
  double path_norm_upper = 0.0;   // U(f - g) used by the step rule
};

/// Complex symmetric quadratic system q_i = X^T A_i X.
struct QuadraticSystem {
  std::vector<CMatrix> mats;  // each (n+1) x (n+1), A = A^T

  int n() const { return static_cast<int>(mats[0].rows()) - 1; }
  int q() const { return static_cast<int>(mats.size()); }
};

QuadraticSystem quadratic_from_system(const PolySystem& f);
PolySystem system_from_quadratic(const QuadraticSystem& qs);

/// One projective Newton step z -> normalize(z - (D_z q|T_z)^{-1} q(z)).
UnitPoint projective_newton(const PolySystem& q, const UnitPoint& z);

/// Beltran-Pardo sampling of (g, zeta): a kernel pair of a Gaussian matrix
/// plus a conditioned KSS remainder, so that g is KSS-distributed and
/// Delta^{-1/2} Dbar_zeta g is an iid complex Gaussian matrix.
StandardPair bp_sample(int n, const std::vector<int>& degrees, std::uint64_t seed);

/// Per-step sup-norm surrogates: a certified lower bound (numerator of the
/// step rule) and an upper bound (inside M^2), both cheap per step.
struct StepNorms {
  double lower = 0.0;
  double upper = 0.0;
};
using NormOracle = std::function<StepNorms(const PolySystem& qt, double t)>;

struct AlhOptions {
  double dt_min = 1e-15;
  std::int64_t max_iterations = 2'000'000;
  int cleanup_newton_steps = 3;
  double residual_accept = 1e-10;
};

/// ALH linear homotopy from (g, zeta) to f with the 0.03 step rule.
/// norm_upper_fg must bound ||f - g||_inf^C from above.
HomotopyTrace alh(const PolySystem& f, const PolySystem& g, const UnitPoint& zeta,
                  double norm_upper_fg, const NormOracle& oracle, const AlhOptions& opts = {});

enum class QuadraticFastPath { Auto, On, Off };

struct SolveResult {
  CVector zero;
  double residual = 0.0;
  std::int64_t iterations = 0;
  HomotopyTrace trace;
  StandardPair pair;
  bool used_fast_path = false;
};

/// SOLVE: Beltran-Pardo start pair then ALH. The general path computes the
/// certified complex sup-norms once per run; the quadratic fast path replaces
/// them with the Hermitian-sum surrogate of quadratic_inf_norm.
SolveResult solve(const PolySystem& f, std::uint64_t seed,
                  QuadraticFastPath mode = QuadraticFastPath::Auto, const AlhOptions& opts = {});

struct QuadraticNorm {
  double surrogate = 0.0;                 // sqrt(lambda_max(sum A_i^* A_i))
  std::vector<double> exact_components;   // sigma_max(A_i) = ||q_i||_inf^C
};

/// ||q||_inf^C <= surrogate <= sqrt(n) ||q||_inf^C.
QuadraticNorm quadratic_inf_norm(const QuadraticSystem& qs);

SolveResult solve_quadratic(const QuadraticSystem& f, std::uint64_t seed,
                            const AlhOptions& opts = {});

}  // namespace nag
