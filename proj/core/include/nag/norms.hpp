#pragma once

#include <cstdint>
#include <vector>

#include "nag/polynomial.hpp"
#include "nag/sphere_grid.hpp"

namespace nag {

/// Certified bracket (1 - 2^-k) * upper = lower <= ||f||_inf <= upper.
struct CertifiedNorm {
  double upper = 0.0;
  double lower = 0.0;
  int k = 0;
  std::int64_t grid_size = 0;
};

/// NORMAPPROX over R: evaluates f on grid(n, ceil((k-1)/2 + log2 D)) and
/// scales the grid maximum by (1 - 2^-k)^{-1}. Streaming, never materializes
/// the net. k >= 1.
CertifiedNorm linf_norm_real(const PolySystem& f, int k);

/// Same sweep, but returns one certified bracket per component (all brackets
/// share the grid, which only depends on n and the maximal degree).
std::vector<CertifiedNorm> linf_norm_real_components(const PolySystem& f, int k);

/// Complex sup-norm over P^n via the real/imaginary expansion of |f_i|^2 on
/// S^{2n+1}, componentwise square root. Guarded at n <= 3.
CertifiedNorm linf_norm_complex(const PolySystem& f, int k);
std::vector<CertifiedNorm> linf_norm_complex_components(const PolySystem& f, int k);

/// |f_i|^2 as a real homogeneous polynomial of degree 2 d_i in the 2n+2 real
/// variables (Re z_0..Re z_n, Im z_0..Im z_n).
HomogeneousPoly expand_abs_squared(const HomogeneousPoly& p);

/// Monte-Carlo L_p estimate with jackknife standard error.
struct LpEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double p = 0.0;
  std::int64_t samples = 0;
};
LpEstimate lp_norm_mc(const PolySystem& f, double p, std::int64_t samples, std::uint64_t seed);

/// The tuple (1/d_i) * Dbar f_i . v of degree d_i - 1 (degree-1 components
/// map to constants, kept as degree-0 polynomials).
PolySystem scaled_directional_system(const PolySystem& f, const CVector& v);

/// Exact sup-norm of a linear system: max row 2-norm of the coefficient
/// matrix. Throws InputError when any component is non-linear.
double linear_inf_norm(const PolySystem& f);

/// Grid exponent used by linf_norm_real for accuracy k and max degree D.
int norm_grid_exponent(int k, int max_degree);

/// Componentwise grid maxima of |f_i| over grid(n, ell); the low-level sweep
/// behind the certified norms. f must have real coefficients.
std::vector<double> grid_componentwise_max(const PolySystem& f, int ell);

}  // namespace nag
