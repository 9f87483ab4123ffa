#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nag/polynomial.hpp"

namespace nag {

enum class EnsembleLaw { KssReal, KssComplex, WeylUniform };

/// Coefficient-law descriptor of a dobro ensemble: psi_2 bound K and
/// anti-concentration constant rho; K*rho is the scale-invariant product the
/// probabilistic bounds depend on. 6 K rho >= 1 always.
struct EnsembleSpec {
  EnsembleLaw law = EnsembleLaw::KssReal;
  double K = 0.0;
  double rho = 0.0;

  double Krho() const { return K * rho; }

  static EnsembleSpec kss_real();
  static EnsembleSpec kss_complex();
  static EnsembleSpec weyl_uniform();
  static EnsembleSpec from_name(const std::string& name);
  std::string name() const;
};

/// Random tuple with coefficients C(d_i, a)^{1/2} c_{i,a}, c iid by law.
PolySystem sample_dobro(int n, const std::vector<int>& degrees, const EnsembleSpec& spec,
                        std::uint64_t seed);

struct RatioStats {
  double mean = 0.0;
  double std_error = 0.0;
  double median = 0.0;
  double q90 = 0.0;
  double bound = 0.0;  // moment bound at ell = 1
  std::int64_t trials = 0;
  bool pass = false;
  std::vector<double> samples;
};
/// ||f||_inf^R / ||f||_W with the certified upper bound in the numerator.
RatioStats ratio_statistics(int n, const std::vector<int>& degrees, const EnsembleSpec& spec,
                            std::int64_t trials, std::uint64_t seed, int k_norm = 2);

struct TailRow {
  double threshold = 0.0;
  double empirical = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // 3-sigma binomial margin at the bound
  bool vacuous = false; // bound >= 1: skipped
  bool pass = true;
};
/// Exceedance frequencies of ||f||_inf against the subgaussian tail bounds
/// (real dobro / complex KSS).
std::vector<TailRow> tail_statistics(int n, const std::vector<int>& degrees,
                                     const EnsembleSpec& spec, std::int64_t trials,
                                     const std::vector<double>& thresholds, std::uint64_t seed);

struct CondRatioStats {
  double mean = 0.0;
  double bound = 0.0;
  std::int64_t trials = 0;
  std::int64_t sandwich_violations = 0;
  bool pass = false;
  std::vector<double> samples;
};
/// Local K/kappa ratios at random sphere points, checked against the
/// norm-ratio sandwich per sample and the first-moment bound.
CondRatioStats condition_ratio_statistics(int n, const std::vector<int>& degrees,
                                          const EnsembleSpec& spec, std::int64_t trials,
                                          std::uint64_t seed);

struct PvCountStats {
  double mean_boxes = 0.0;
  double bound = 0.0;       // sup-norm-version expected-count bound
  double weyl_bound = 0.0;  // Weyl-version bound, reported for comparison
  std::int64_t trials = 0;
  bool pass = false;
  std::vector<double> samples;
};
/// Mean final-subdivision size on random dobro inputs over [-a,a]^n.
PvCountStats pv_box_count_experiment(int n, int d, const EnsembleSpec& spec, std::int64_t trials,
                                     double a, std::uint64_t seed);

struct HomotopyStepsStats {
  double mean_iterations = 0.0;
  double shape_constant = 0.0;  // mean / (n^3 D^2 ln(eD))
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  std::vector<double> samples;
};
/// Iteration counts of the quadratic fast-path solver on KSS systems.
HomotopyStepsStats homotopy_steps_experiment(int n, std::int64_t trials, std::uint64_t seed);

}  // namespace nag
