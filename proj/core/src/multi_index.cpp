#include "nag/multi_index.hpp"

#include <complex>
#include <map>
#include <mutex>

namespace nag {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  // Arguments at desk scale keep the quotient chain exact; round defensively.
  return static_cast<double>(static_cast<std::int64_t>(r + 0.5));
}

double multinomial(int d, const std::vector<int>& alpha) {
  double r = 1.0;
  int rest = d;
  for (int a : alpha) {
    r *= binomial(rest, a);
    rest -= a;
  }
  return r;
}

std::int64_t simplex_size(int nvars, int d) {
  return static_cast<std::int64_t>(binomial(nvars - 1 + d, d));
}

std::int64_t monomial_rank(int nvars, int d, const int* alpha) {
  std::int64_t rank = 0;
  int rest = d;
  for (int v = 0; v < nvars - 1; ++v) {
    // Indices whose exponent at position v exceeds alpha[v] come first.
    for (int b = rest; b > alpha[v]; --b) rank += simplex_size(nvars - 1 - v, rest - b);
    rest -= alpha[v];
  }
  return rank;
}

MonoTable::MonoTable(int nvars, int maxdeg) : nvars_(nvars), maxdeg_(maxdeg) {
  exps_.resize(maxdeg + 1);
  parent_.resize(maxdeg + 1);
  axis_.resize(maxdeg + 1);

  exps_[0] = std::vector<int>(nvars, 0);
  parent_[0] = {0};
  axis_[0] = {0};

  std::vector<int> alpha(nvars);
  for (int d = 1; d <= maxdeg; ++d) {
    const std::int64_t n = simplex_size(nvars, d);
    exps_[d].resize(static_cast<std::size_t>(n) * nvars);
    parent_[d].resize(static_cast<std::size_t>(n));
    axis_[d].resize(static_cast<std::size_t>(n));

    // Enumerate in rank order: descending lexicographic on exponents.
    std::fill(alpha.begin(), alpha.end(), 0);
    alpha[0] = d;
    for (std::int64_t r = 0;; ++r) {
      for (int v = 0; v < nvars; ++v) exps_[d][static_cast<std::size_t>(r) * nvars + v] = alpha[v];
      int j = nvars - 1;
      while (alpha[j] == 0) --j;
      axis_[d][static_cast<std::size_t>(r)] = j;
      alpha[j] -= 1;
      parent_[d][static_cast<std::size_t>(r)] = monomial_rank(nvars, d - 1, alpha.data());
      alpha[j] += 1;
      // Advance to the next exponent vector, if any.
      if (alpha[nvars - 1] == d) break;
      int k = nvars - 2;
      while (alpha[k] == 0) --k;
      const int tail = alpha[nvars - 1];
      alpha[k] -= 1;
      alpha[nvars - 1] = 0;
      alpha[k + 1] = tail + 1;
    }
  }
}

void MonoTable::eval_all(const double* x, int deg,
                         std::vector<std::vector<double>>& scratch) const {
  scratch.resize(static_cast<std::size_t>(deg) + 1);
  scratch[0].assign(1, 1.0);
  for (int d = 1; d <= deg; ++d) {
    const auto& par = parent_[d];
    const auto& ax = axis_[d];
    const std::size_t n = par.size();
    scratch[d].resize(n);
    const double* prev = scratch[d - 1].data();
    double* cur = scratch[d].data();
    for (std::size_t r = 0; r < n; ++r) cur[r] = prev[par[r]] * x[ax[r]];
  }
}

void MonoTable::eval_all_complex(const std::complex<double>* x, int deg,
                                 std::vector<std::vector<std::complex<double>>>& scratch) const {
  scratch.resize(static_cast<std::size_t>(deg) + 1);
  scratch[0].assign(1, std::complex<double>(1.0, 0.0));
  for (int d = 1; d <= deg; ++d) {
    const auto& par = parent_[d];
    const auto& ax = axis_[d];
    const std::size_t n = par.size();
    scratch[d].resize(n);
    const std::complex<double>* prev = scratch[d - 1].data();
    std::complex<double>* cur = scratch[d].data();
    for (std::size_t r = 0; r < n; ++r) cur[r] = prev[par[r]] * x[ax[r]];
  }
}

std::shared_ptr<const MonoTable> MonoTable::get(int nvars, int maxdeg) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonoTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, maxdeg}];
  if (!slot) slot = std::shared_ptr<const MonoTable>(new MonoTable(nvars, maxdeg));
  return slot;
}

}  // namespace nag
