#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

namespace nag {

/// Uniform-cell hash over R^dim for neighbor queries on small point clouds.
/// Cell keys are hashed to 64 bits; key collisions merely merge candidate
/// lists, so callers always re-check true distances.
class SpatialHash {
 public:
  SpatialHash(int dim, double cell) : dim_(dim), cell_(cell) {}

  void insert(const Eigen::VectorXd& p, std::size_t id) {
    buckets_[key_of(p)].push_back(id);
    ++size_;
  }

  std::size_t size() const { return size_; }

  /// Smallest dist2(id) over all stored ids; +inf when empty. The search
  /// expands Chebyshev shells until no unscanned cell can beat the best.
  double nearest_squared(const Eigen::VectorXd& q,
                         const std::function<double(std::size_t)>& dist2) const {
    if (size_ == 0) return std::numeric_limits<double>::infinity();
    std::vector<int> base = cell_of(q);
    double best = std::numeric_limits<double>::infinity();
    for (int shell = 0; shell < 1024; ++shell) {
      if (best <= square(static_cast<double>(shell) * cell_)) break;
      visit_shell(base, shell, [&](std::uint64_t key) {
        auto it = buckets_.find(key);
        if (it == buckets_.end()) return;
        for (std::size_t id : it->second) best = std::min(best, dist2(id));
      });
      if (shell > 8 && best == std::numeric_limits<double>::infinity() &&
          square(static_cast<double>(shell) * cell_) > 16.0)
        break;  // beyond any pair of points in [-2,2]^dim
    }
    return best;
  }

  /// Visits every id stored in a cell intersecting the L2 ball B(q, radius).
  void for_each_in_ball(const Eigen::VectorXd& q, double radius,
                        const std::function<void(std::size_t)>& fn) const {
    const int span = static_cast<int>(std::ceil(radius / cell_)) + 1;
    std::vector<int> base = cell_of(q);
    std::vector<int> delta(static_cast<std::size_t>(dim_), -span);
    for (;;) {
      std::vector<int> cell(static_cast<std::size_t>(dim_));
      for (int i = 0; i < dim_; ++i) cell[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i)] + delta[static_cast<std::size_t>(i)];
      auto it = buckets_.find(hash_cell(cell));
      if (it != buckets_.end())
        for (std::size_t id : it->second) fn(id);
      int axis = dim_ - 1;
      while (axis >= 0) {
        if (++delta[static_cast<std::size_t>(axis)] <= span) break;
        delta[static_cast<std::size_t>(axis)] = -span;
        --axis;
      }
      if (axis < 0) break;
    }
  }

 private:
  static double square(double v) { return v * v; }

  std::vector<int> cell_of(const Eigen::VectorXd& p) const {
    std::vector<int> c(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i)
      c[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(p[i] / cell_));
    return c;
  }

  static std::uint64_t hash_cell(const std::vector<int>& cell) {
    std::uint64_t h = 1469598103934665603ULL;
    for (int v : cell) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
      h *= 1099511628211ULL;
    }
    return h;
  }

  std::uint64_t key_of(const Eigen::VectorXd& p) const { return hash_cell(cell_of(p)); }

  template <typename F>
  void visit_shell(const std::vector<int>& base, int shell, F&& fn) const {
    std::vector<int> delta(static_cast<std::size_t>(dim_), -shell);
    if (shell == 0) {
      fn(hash_cell(base));
      return;
    }
    for (;;) {
      int cheb = 0;
      for (int i = 0; i < dim_; ++i) cheb = std::max(cheb, std::abs(delta[static_cast<std::size_t>(i)]));
      if (cheb == shell) {
        std::vector<int> cell(static_cast<std::size_t>(dim_));
        for (int i = 0; i < dim_; ++i)
          cell[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i)] + delta[static_cast<std::size_t>(i)];
        fn(hash_cell(cell));
      }
      int axis = dim_ - 1;
      while (axis >= 0) {
        if (++delta[static_cast<std::size_t>(axis)] <= shell) break;
        delta[static_cast<std::size_t>(axis)] = -shell;
        --axis;
      }
      if (axis < 0) break;
    }
  }

  int dim_;
  double cell_;
  std::size_t size_ = 0;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

}  // namespace nag
