#include "nag/pv.hpp"

#include <algorithm>
#include <cmath>

#include "nag/condition.hpp"
#include "nag/parallel.hpp"

namespace nag {

UnitPoint io_map(const Eigen::VectorXd& x) {
  Eigen::VectorXd y(x.size() + 1);
  y[0] = 1.0;
  y.tail(x.size()) = x;
  y /= std::sqrt(1.0 + x.squaredNorm());
  return UnitPoint::real(y);
}

std::pair<double, double> hat_values(const AffinePoly& f, double Q, const Eigen::VectorXd& x) {
  const int d = f.degree_bound;
  const double r2 = 1.0 + x.squaredNorm();
  const double fv = f.eval_real(x) / (Q * std::pow(r2, 0.5 * (d - 1)));
  const double gv =
      f.gradient_real(x).norm() / (d * Q * std::pow(r2, 0.5 * d - 1.0));
  return {fv, gv};
}

BoxTest box_predicate(const AffinePoly& f, double Q, const Box& b) {
  const int d = f.degree_bound;
  const int n = f.nvars;
  const double sn = std::sqrt(static_cast<double>(n));
  const double r2 = 1.0 + b.center.squaredNorm();
  const double fv = std::abs(f.eval_real(b.center));
  if (fv > 2.0 * d * sn * b.width * Q * std::pow(r2, 0.5 * (d - 1))) return BoxTest::AcceptValue;
  const double gv = f.gradient_real(b.center).norm();
  if (gv > 2.0 * std::sqrt(2.0) * d * sn * b.width * Q * std::pow(r2, 0.5 * d - 1.0))
    return BoxTest::AcceptGradient;
  return BoxTest::Reject;
}

std::vector<Box> standard_subdivision(const Box& b) {
  const int n = static_cast<int>(b.center.size());
  const double w = b.width / 2.0;
  const double off = b.width / 4.0;
  std::vector<Box> out;
  out.reserve(static_cast<std::size_t>(1) << n);
  for (std::int64_t mask = 0; mask < (std::int64_t(1) << n); ++mask) {
    Box child;
    child.center = b.center;
    child.width = w;
    for (int i = 0; i < n; ++i)
      child.center[i] += ((mask >> i) & 1) ? off : -off;
    out.push_back(std::move(child));
  }
  return out;
}

PVResult pv_subdivide(const AffinePoly& f, double a, int k_norm, int max_depth) {
  if (f.nvars < 1) throw InputError("pv_subdivide: empty polynomial");
  if (a <= 0.0) throw InputError("pv_subdivide: a must be positive");
  bool nonzero = false;
  for (const auto& t : f.terms)
    if (t.second != Complex(0.0, 0.0)) nonzero = true;
  if (!nonzero) throw InputError("pv_subdivide: zero polynomial");

  PVResult res;
  const HomogeneousPoly fh = homogenize(f, f.degree_bound);
  const PolySystem sys(Field::Real, {fh});
  res.norm = linf_norm_real(sys, k_norm);
  res.Q = res.norm.upper;

  std::vector<Box> level;
  {
    Box root;
    root.center = Eigen::VectorXd::Zero(f.nvars);
    root.width = 2.0 * a;
    level.push_back(std::move(root));
  }

  int depth = 0;
  while (!level.empty()) {
    res.max_depth_reached = depth;
    if (depth > max_depth) {
      res.completed = false;
      res.unresolved = std::move(level);
      break;
    }
    res.boxes_processed += static_cast<std::int64_t>(level.size());

    // Evaluate the predicate for the whole level, then split rejects.
    std::vector<BoxTest> verdict(level.size());
    const std::int64_t blocks =
        std::min<std::int64_t>(static_cast<std::int64_t>(level.size()), 8 * thread_count());
    const std::int64_t per =
        (static_cast<std::int64_t>(level.size()) + blocks - 1) / std::max<std::int64_t>(blocks, 1);
    parallel_blocks(std::max<std::int64_t>(blocks, 1), [&](std::int64_t blk) {
      const std::int64_t first = blk * per;
      const std::int64_t last =
          std::min<std::int64_t>(static_cast<std::int64_t>(level.size()), first + per);
      for (std::int64_t i = first; i < last; ++i)
        verdict[static_cast<std::size_t>(i)] = box_predicate(f, res.Q, level[static_cast<std::size_t>(i)]);
    });

    std::vector<Box> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (verdict[i] == BoxTest::Reject) {
        for (auto& child : standard_subdivision(level[i])) next.push_back(std::move(child));
      } else {
        res.accepted.push_back(
            {std::move(level[i]),
             verdict[i] == BoxTest::AcceptValue ? BoxClause::Value : BoxClause::Gradient});
      }
    }
    level = std::move(next);
    ++depth;
  }

  std::sort(res.accepted.begin(), res.accepted.end(), [](const AcceptedBox& x, const AcceptedBox& y) {
    for (int i = 0; i < x.box.center.size(); ++i) {
      if (x.box.center[i] != y.box.center[i]) return x.box.center[i] < y.box.center[i];
    }
    return x.box.width < y.box.width;
  });
  return res;
}

double local_size_bound(const AffinePoly& f, const CertifiedNorm& norm,
                        const Eigen::VectorXd& x) {
  const int d = f.degree_bound;
  const int n = f.nvars;
  const PolySystem sys(Field::Real, {homogenize(f, d)});
  const ConditionReport rep = K_local(sys, io_map(x), norm);
  const double base = std::pow(2.0, 1.5) * std::pow(static_cast<double>(d), 1.5) *
                      std::sqrt(static_cast<double>(n)) * rep.value;
  return std::pow(1.0 / base, n);
}

}  // namespace nag
