#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace nag {

/// Binomial coefficient as an exact double (arguments stay far below the
/// 2^53 integer range at desk scale).
double binomial(int n, int k);

/// Multinomial coefficient d! / (alpha_0! ... alpha_m!), with sum(alpha) = d.
double multinomial(int d, const std::vector<int>& alpha);

/// Number of exponent vectors alpha ∈ N^nvars with |alpha| = d.
std::int64_t simplex_size(int nvars, int d);

/// Rank of an exponent vector in the fixed-degree basis ordering.
/// The ordering is lexicographic with the first variable most significant
/// and exponents descending: (d,0,...,0) has rank 0, (0,...,0,d) rank N-1.
std::int64_t monomial_rank(int nvars, int d, const int* alpha);

/// Dense monomial tables for all degrees 0..maxdeg over nvars variables.
///
/// For each degree the table stores the exponent rows plus a
/// (parent, axis) pair per monomial: monomial r of degree d equals monomial
/// parent[r] of degree d-1 times variable axis[r]. Evaluating the full
/// monomial vector of degree d therefore costs one multiplication per entry.
class MonoTable {
 public:
  int nvars() const { return nvars_; }
  int maxdeg() const { return maxdeg_; }
  std::int64_t size(int d) const { return static_cast<std::int64_t>(parent_[d].size()); }

  /// Exponent rows of degree d, flattened N_d x nvars.
  const std::vector<int>& exps(int d) const { return exps_[d]; }
  const std::vector<std::int64_t>& parent(int d) const { return parent_[d]; }
  const std::vector<int>& axis(int d) const { return axis_[d]; }

  int exponent(int d, std::int64_t rank, int var) const {
    return exps_[d][static_cast<std::size_t>(rank) * nvars_ + var];
  }

  /// Fills mono[d][r] for all degrees 0..deg at the point x (length nvars).
  /// scratch must hold one vector per degree; vectors are resized as needed.
  void eval_all(const double* x, int deg, std::vector<std::vector<double>>& scratch) const;
  void eval_all_complex(const std::complex<double>* x, int deg,
                        std::vector<std::vector<std::complex<double>>>& scratch) const;

  /// Shared cache; building a table is idempotent and thread-safe.
  static std::shared_ptr<const MonoTable> get(int nvars, int maxdeg);

 private:
  MonoTable(int nvars, int maxdeg);

  int nvars_;
  int maxdeg_;
  std::vector<std::vector<int>> exps_;
  std::vector<std::vector<std::int64_t>> parent_;
  std::vector<std::vector<int>> axis_;
};

}  // namespace nag
