#pragma once

#include <optional>
#include <string>

#include "nag/norms.hpp"
#include "nag/polynomial.hpp"

namespace nag {

/// Result of a local condition-number evaluation. value is +inf exactly when
/// the residual and the smallest singular value both vanish (within
/// tolerance); for K and M the finite values always satisfy value >= 1.
struct ConditionReport {
  double value = 0.0;
  std::string residual_branch;  // "value", "sigma" or "singular"
  double sigma_q = 0.0;
  double denominator = 0.0;     // the max / sqrt-sum the value divides by
  double norm_upper = 0.0;      // sup-norm bound (or exact Weyl norm) used
  double norm_lower = 0.0;
};

/// Smallest singular value of the row-scaled tangent derivative; rows of the
/// full derivative are divided by d_i^exponent (exponent 0.5 or 1).
double scaled_sigma_q(const PolySystem& f, const UnitPoint& x, double exponent);

/// Weyl-scaled local condition number. Scale-invariant by construction: the
/// input is normalized by its largest coefficient first, so inputs that are
/// exact scalar multiples produce bit-identical values.
ConditionReport kappa_local(const PolySystem& f, const UnitPoint& x);

/// Sup-norm-scaled local condition number; norm certifies ||f||_inf^R.
ConditionReport K_local(const PolySystem& f, const UnitPoint& x, const CertifiedNorm& norm);

/// Shub-Smale mu_norm (complex, q <= n).
ConditionReport mu_norm(const PolySystem& f, const UnitPoint& z);

/// Complex sup-norm condition number M; norm_upper bounds ||f||_inf^C.
ConditionReport M_local(const PolySystem& f, const UnitPoint& z, double norm_upper,
                        double norm_lower = 0.0);

/// K-ESTIMATE. On success K_hat over-estimates: 0.99 K_hat <= K(f) <= K_hat
/// for k = 7. On fail, K(f) >= 2^b is guaranteed. b < 0 means unbounded.
struct KEstimate {
  bool failed = false;
  double K_hat = 0.0;
  double K_raw = 0.0;       // the grid maximum before the (1-2^-k)^{-1} factor
  int ell_stop = 0;
  CertifiedNorm norm;       // the k+1 certified sup-norm used throughout
};
KEstimate K_estimate(const PolySystem& f, int k, int b);

/// Smale's projective gamma, estimated from below by random probing of the
/// multilinear operator norms plus alternating-ascent refinement.
double smale_gamma(const PolySystem& f, const UnitPoint& x, int probes = 1000,
                   std::uint64_t seed = 0);

/// Closed-form distance to the systems singular at x (structured / Weyl):
/// sqrt(||f(x)||^2 + sigma_q(Delta^{-1/2} D_x f)^2).
double dist_to_sigma(const PolySystem& f, const UnitPoint& x);

/// Same closed form without the degree scaling (the C^1 variant).
double dist_to_sigma_c1(const PolySystem& f, const UnitPoint& x);

/// Explicit minimizer: g with g(x) = 0, sigma_q(Delta^{-1/2} D_x g) = 0 and
/// ||f - g||_W = dist_to_sigma(f, x). Returns f itself when sigma_q is
/// already zero.
PolySystem construct_minimizer(const PolySystem& f, const UnitPoint& x);

/// Grid-max estimates of the C^1 sup functionals (lower bounds on the sups):
/// max over grid(n, ell) of sqrt(||f(x)||^2 + op-norm(D_x f)^2), optionally
/// with Delta^{-1/2} row scaling.
double c1_sup_estimate(const PolySystem& f, int ell, bool degree_weighted);

}  // namespace nag
