#include "nag/homology.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "nag/parallel.hpp"
#include "nag/spatial_hash.hpp"

namespace nag {

namespace {

constexpr std::int64_t kNerveGuard = 5000;
constexpr std::int64_t kRawCloudGuard = 5'000'000;
constexpr std::int64_t kDefaultGridGuard = 10'000'000;

MiniBall ball_of_support(const std::vector<const Eigen::VectorXd*>& support) {
  MiniBall b;
  if (support.empty()) {
    b.radius = -1.0;
    return b;
  }
  const int dim = static_cast<int>(support[0]->size());
  if (support.size() == 1) {
    b.center = *support[0];
    b.radius = 0.0;
    return b;
  }
  const int k = static_cast<int>(support.size()) - 1;
  Eigen::MatrixXd g(k, k);
  Eigen::VectorXd rhs(k);
  const Eigen::VectorXd& p0 = *support[0];
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXd di = *support[static_cast<std::size_t>(i) + 1] - p0;
    rhs[i] = 0.5 * di.squaredNorm();
    for (int j = 0; j < k; ++j)
      g(i, j) = di.dot(*support[static_cast<std::size_t>(j) + 1] - p0);
  }
  Eigen::VectorXd lambda = g.completeOrthogonalDecomposition().solve(rhs);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j < k; ++j) c += lambda[j] * (*support[static_cast<std::size_t>(j) + 1] - p0);
  b.center = p0 + c;
  double r2 = 0.0;
  for (const auto* p : support) r2 = std::max(r2, (*p - b.center).squaredNorm());
  b.radius = std::sqrt(r2);
  return b;
}

MiniBall welzl(const std::vector<const Eigen::VectorXd*>& pts, std::size_t limit,
               std::vector<const Eigen::VectorXd*>& support, int dim) {
  if (limit == 0 || static_cast<int>(support.size()) == dim + 1)
    return ball_of_support(support);
  MiniBall b = welzl(pts, limit - 1, support, dim);
  const Eigen::VectorXd& p = *pts[limit - 1];
  if (b.radius >= 0.0 && (p - b.center).squaredNorm() <= b.radius * b.radius * (1.0 + 1e-12) + 1e-300)
    return b;
  support.push_back(pts[limit - 1]);
  MiniBall out = welzl(pts, limit - 1, support, dim);
  support.pop_back();
  return out;
}

}  // namespace

MiniBall miniball(const std::vector<const Eigen::VectorXd*>& pts) {
  if (pts.empty()) return {};
  std::vector<const Eigen::VectorXd*> support;
  return welzl(pts, pts.size(), support, static_cast<int>(pts[0]->size()));
}

SelectedCloud select_points(const PolySystem& f, const GridSpec& spec, double Q, double delta) {
  if (f.field() != Field::Real) throw InputError("select_points expects a real system");
  SelectedCloud cloud;
  const double sq = std::sqrt(static_cast<double>(f.q()));
  const int dmax = f.max_degree();
  cloud.threshold = sq * dmax * Q * delta;
  cloud.source_mesh = delta;

  GridSweep sweep(spec);
  const std::int64_t blocks = sweep.default_blocks();
  std::vector<std::vector<Eigen::VectorXd>> parts(static_cast<std::size_t>(blocks));

  // Stream the grid; only near-zero points are retained.
  const double thr = cloud.threshold;
  auto table = MonoTable::get(f.nvars(), std::max(1, dmax));
  std::vector<Eigen::VectorXd> coef;
  for (int i = 0; i < f.q(); ++i) coef.push_back(f.component(i).coefficients().real());
  const auto degrees = f.degrees();

  sweep.run_points(blocks, [&](std::int64_t b, const Eigen::VectorXd& x) {
    thread_local std::vector<std::vector<double>> mono;
    table->eval_all(x.data(), std::max(1, dmax), mono);
    double a2 = 0.0;
    for (int i = 0; i < f.q(); ++i) {
      const auto& c = coef[static_cast<std::size_t>(i)];
      const auto& m = mono[static_cast<std::size_t>(degrees[static_cast<std::size_t>(i)])];
      double acc = 0.0;
      for (std::int64_t r = 0; r < c.size(); ++r) acc += c[r] * m[static_cast<std::size_t>(r)];
      a2 += acc * acc;
    }
    if (a2 < thr * thr) {
      auto& part = parts[static_cast<std::size_t>(b)];
      if (static_cast<std::int64_t>(part.size()) > kRawCloudGuard)
        throw ResourceError("select_points: selection exceeded " +
                            std::to_string(kRawCloudGuard) + " points");
      part.push_back(x);
    }
  });

  for (auto& p : parts)
    for (auto& x : p) cloud.points.push_back(std::move(x));
  cloud.raw_size = static_cast<std::int64_t>(cloud.points.size());
  return cloud;
}

SimplicialComplexGF2 cech_nerve(const std::vector<Eigen::VectorXd>& points, double eps,
                                int max_dim) {
  SimplicialComplexGF2 complex;
  complex.vertex_count = static_cast<int>(points.size());
  if (points.empty()) return complex;
  if (static_cast<std::int64_t>(points.size()) > kNerveGuard)
    throw ResourceError("cech_nerve: " + std::to_string(points.size()) +
                        " points exceed the guard " + std::to_string(kNerveGuard));
  const int n_pts = static_cast<int>(points.size());
  const int dim = static_cast<int>(points[0].size());

  complex.simplices.resize(static_cast<std::size_t>(std::max(max_dim, 0)) + 1);
  auto& verts = complex.simplices[0];
  verts.reserve(static_cast<std::size_t>(n_pts));
  for (int i = 0; i < n_pts; ++i) verts.push_back({i});
  if (max_dim == 0) return complex;

  // Edges by pairwise distance <= 2 eps (the two-point miniball criterion).
  SpatialHash hash(dim, std::max(2.0 * eps, 1e-12));
  for (int i = 0; i < n_pts; ++i) hash.insert(points[static_cast<std::size_t>(i)], static_cast<std::size_t>(i));
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_pts));
  const double lim2 = 4.0 * eps * eps;
  for (int i = 0; i < n_pts; ++i) {
    hash.for_each_in_ball(points[static_cast<std::size_t>(i)], 2.0 * eps, [&](std::size_t j) {
      if (static_cast<int>(j) <= i) return;
      if ((points[static_cast<std::size_t>(i)] - points[j]).squaredNorm() <= lim2)
        adj[static_cast<std::size_t>(i)].push_back(static_cast<int>(j));
    });
    std::sort(adj[static_cast<std::size_t>(i)].begin(), adj[static_cast<std::size_t>(i)].end());
    adj[static_cast<std::size_t>(i)].erase(
        std::unique(adj[static_cast<std::size_t>(i)].begin(), adj[static_cast<std::size_t>(i)].end()),
        adj[static_cast<std::size_t>(i)].end());
  }
  auto& edges = complex.simplices[1];
  for (int i = 0; i < n_pts; ++i)
    for (int j : adj[static_cast<std::size_t>(i)]) edges.push_back({i, j});

  // Higher simplices: extend by a vertex adjacent to every member, then apply
  // the exact miniball criterion.
  for (int d = 2; d <= max_dim; ++d) {
    const auto& prev = complex.simplices[static_cast<std::size_t>(d) - 1];
    auto& cur = complex.simplices[static_cast<std::size_t>(d)];
    std::vector<int> cand, tmp;
    for (const auto& simplex : prev) {
      cand = adj[static_cast<std::size_t>(simplex.back())];
      for (std::size_t t = 0; t + 1 < simplex.size() && !cand.empty(); ++t) {
        const auto& a = adj[static_cast<std::size_t>(simplex[t])];
        tmp.clear();
        std::set_intersection(cand.begin(), cand.end(), a.begin(), a.end(),
                              std::back_inserter(tmp));
        cand.swap(tmp);
      }
      for (int w : cand) {
        if (w <= simplex.back()) continue;
        std::vector<const Eigen::VectorXd*> pts;
        pts.reserve(simplex.size() + 1);
        for (int v : simplex) pts.push_back(&points[static_cast<std::size_t>(v)]);
        pts.push_back(&points[static_cast<std::size_t>(w)]);
        if (miniball(pts).radius <= eps) {
          std::vector<int> s = simplex;
          s.push_back(w);
          cur.push_back(std::move(s));
        }
      }
    }
  }
  return complex;
}

namespace {

/// Rank of a GF(2) boundary matrix d_m: columns are m-simplices, rows are
/// (m-1)-simplices, eliminated column by column on 64-bit words.
std::int64_t boundary_rank(const SimplicialComplexGF2& complex, int m) {
  if (m < 1 || complex.count(m) == 0 || complex.count(m - 1) == 0) return 0;
  const auto& cols_simplices = complex.simplices[static_cast<std::size_t>(m)];
  const auto& row_simplices = complex.simplices[static_cast<std::size_t>(m) - 1];
  const std::int64_t rows = static_cast<std::int64_t>(row_simplices.size());
  const std::int64_t cols = static_cast<std::int64_t>(cols_simplices.size());
  const std::int64_t words = (rows + 63) / 64;
  if (rows * cols > (std::int64_t(1) << 33))
    throw ResourceError("betti_numbers: boundary matrix too large (" + std::to_string(rows) +
                        " x " + std::to_string(cols) + ")");

  auto row_index = [&](const std::vector<int>& s) -> std::int64_t {
    auto it = std::lower_bound(row_simplices.begin(), row_simplices.end(), s);
    return static_cast<std::int64_t>(it - row_simplices.begin());
  };

  std::vector<std::vector<std::uint64_t>> pivots;  // reduced columns
  std::vector<std::int64_t> pivot_row;
  std::vector<std::uint64_t> col(static_cast<std::size_t>(words));
  std::int64_t rank = 0;
  std::vector<int> face;
  for (std::int64_t c = 0; c < cols; ++c) {
    std::fill(col.begin(), col.end(), 0);
    const auto& s = cols_simplices[static_cast<std::size_t>(c)];
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      face.clear();
      for (std::size_t t = 0; t < s.size(); ++t)
        if (t != drop) face.push_back(s[t]);
      const std::int64_t r = row_index(face);
      col[static_cast<std::size_t>(r >> 6)] ^= (std::uint64_t(1) << (r & 63));
    }
    // Reduce against existing pivots.
    for (;;) {
      std::int64_t top = -1;
      for (std::int64_t w = words - 1; w >= 0; --w) {
        if (col[static_cast<std::size_t>(w)]) {
          top = (w << 6) + (63 - static_cast<std::int64_t>(
                                     __builtin_clzll(col[static_cast<std::size_t>(w)])));
          break;
        }
      }
      if (top < 0) break;
      bool reduced = false;
      for (std::size_t p = 0; p < pivots.size(); ++p) {
        if (pivot_row[p] == top) {
          for (std::int64_t w = 0; w < words; ++w)
            col[static_cast<std::size_t>(w)] ^= pivots[p][static_cast<std::size_t>(w)];
          reduced = true;
          break;
        }
      }
      if (!reduced) {
        pivots.push_back(col);
        pivot_row.push_back(top);
        ++rank;
        break;
      }
    }
  }
  return rank;
}

}  // namespace

BettiVector betti_numbers(const SimplicialComplexGF2& complex) {
  BettiVector out;
  const int top = static_cast<int>(complex.simplices.size()) - 1;
  std::vector<std::int64_t> ranks(static_cast<std::size_t>(std::max(top, 0)) + 2, 0);
  for (int m = 1; m <= top; ++m) ranks[static_cast<std::size_t>(m)] = boundary_rank(complex, m);
  for (int m = 0; m <= top; ++m) {
    const std::int64_t dim_ker =
        complex.count(m) - ranks[static_cast<std::size_t>(m)];
    out.betti.push_back(dim_ker - ranks[static_cast<std::size_t>(m) + 1]);
  }
  return out;
}

namespace {

PolybettiResult run_pipeline(const PolySystem& f, double Q, double K_hat, int ell, double eps,
                             bool relaxed) {
  const int dmax = f.max_degree();
  const double delta = std::ldexp(1.0, -ell);

  // Window sanity (Thm hypotheses). The defaults satisfy these identically;
  // the relaxed mode has already validated user input, so a violation here is
  // a pipeline bug and aborts loudly rather than emitting wrong numbers.
  const double lo = 6.0 * dmax * K_hat * delta;
  const double hi = 1.0 / (14.0 * dmax * K_hat);
  if (!(90.0 * dmax * dmax * K_hat * K_hat * delta < 1.0) || !(eps > lo) || !(eps < hi))
    throw NumericalError("polybetti: (delta, epsilon) left the admissible window: delta=" +
                         std::to_string(delta) + " eps=" + std::to_string(eps) + " window=(" +
                         std::to_string(lo) + "," + std::to_string(hi) + ")");

  const GridSpec spec = make_grid_spec(f.n(), ell);
  if (!relaxed && spec.point_count > kDefaultGridGuard)
    throw ResourceError("polybetti: predicted grid size " + std::to_string(spec.point_count) +
                        " exceeds 10^7; use the relaxed mode with explicit parameters");
  if (spec.point_count > max_stream_points())
    throw ResourceError("polybetti: predicted grid size " + std::to_string(spec.point_count) +
                        " exceeds the streaming cap");

  SelectedCloud cloud = select_points(f, spec, Q, delta);
  cloud.epsilon = eps;

  // Cover-preserving thinning: removing points within thin_radius of a kept
  // point moves the cloud's Hausdorff distance to the zero set from
  // 2 D K delta to at most 2 D K delta + thin_radius, and the radius is
  // chosen so 3 * (that) stays below eps. Keeps the nerve tractable.
  const double headroom = eps / 3.0 - 2.0 * dmax * K_hat * delta;
  const double rho = 0.9 * headroom;
  if (rho > 0.0 && cloud.points.size() > 1) {
    SpatialHash kept_hash(f.nvars(), rho);
    std::vector<Eigen::VectorXd> kept;
    for (const auto& x : cloud.points) {
      bool covered = false;
      kept_hash.for_each_in_ball(x, rho, [&](std::size_t id) {
        if (!covered && (kept[id] - x).norm() <= rho) covered = true;
      });
      if (!covered) {
        kept_hash.insert(x, kept.size());
        kept.push_back(x);
      }
    }
    cloud.points.swap(kept);
    cloud.thin_radius = rho;
  }

  PolybettiResult res;
  res.Q = Q;
  res.K_hat = K_hat;
  res.ell = ell;
  res.delta = delta;
  res.epsilon = eps;
  res.raw_cloud_size = cloud.raw_size;
  res.cloud_size = static_cast<std::int64_t>(cloud.points.size());

  const SimplicialComplexGF2 nerve = cech_nerve(cloud.points, eps, f.n() + 1);
  BettiVector betti = betti_numbers(nerve);
  betti.betti.resize(static_cast<std::size_t>(f.n()) + 1, 0);
  res.betti = std::move(betti);
  res.cloud = std::move(cloud);
  return res;
}

}  // namespace

PolybettiResult polybetti(const PolySystem& f) {
  if (f.field() != Field::Real) throw InputError("polybetti expects a real system");
  if (f.q() > f.n()) throw InputError("polybetti requires q <= n");
  const CertifiedNorm norm = linf_norm_real(f, 7);
  if (norm.upper == 0.0) throw InputError("polybetti: zero system");
  const KEstimate kest = K_estimate(f, 7, -1);
  if (kest.failed) throw NumericalError("polybetti: K-estimate failed (singular input)");
  const int dmax = f.max_degree();
  const int ell =
      7 + static_cast<int>(std::ceil(2.0 * std::log2(static_cast<double>(dmax)) +
                                     2.0 * std::log2(std::max(1.0, kest.K_hat))));
  const double eps = 3.0 / (50.0 * dmax * kest.K_hat);
  return run_pipeline(f, norm.upper, kest.K_hat, ell, eps, /*relaxed=*/false);
}

PolybettiResult polybetti_relaxed(const PolySystem& f, int ell0, double eps0) {
  if (f.field() != Field::Real) throw InputError("polybetti expects a real system");
  if (f.q() > f.n()) throw InputError("polybetti requires q <= n");
  const CertifiedNorm norm = linf_norm_real(f, 7);
  if (norm.upper == 0.0) throw InputError("polybetti: zero system");
  const KEstimate kest = K_estimate(f, 7, -1);
  if (kest.failed) throw NumericalError("polybetti: K-estimate failed (singular input)");
  const int dmax = f.max_degree();
  const double delta = std::ldexp(1.0, -ell0);
  const double lo = 6.0 * dmax * kest.K_hat * delta;
  const double hi = 1.0 / (14.0 * dmax * kest.K_hat);
  if (!(90.0 * dmax * dmax * kest.K_hat * kest.K_hat * delta < 1.0))
    throw InputError("polybetti --relaxed: hypothesis 90 D^2 K^2 delta < 1 fails (delta=" +
                     std::to_string(delta) + ", K_hat=" + std::to_string(kest.K_hat) + ")");
  if (!(eps0 > lo && eps0 < hi))
    throw InputError("polybetti --relaxed: eps=" + std::to_string(eps0) +
                     " outside the admissible window (" + std::to_string(lo) + "," +
                     std::to_string(hi) + ")");
  return run_pipeline(f, norm.upper, kest.K_hat, ell0, eps0, /*relaxed=*/true);
}

double hausdorff_estimate(const std::vector<Eigen::VectorXd>& a,
                          const std::vector<Eigen::VectorXd>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto directed = [](const std::vector<Eigen::VectorXd>& from,
                     const std::vector<Eigen::VectorXd>& to) {
    double worst = 0.0;
    for (const auto& x : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : to) best = std::min(best, (x - y).squaredNorm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  const double chord = std::sqrt(std::max(directed(a, b), directed(b, a)));
  return 2.0 * std::asin(std::min(1.0, chord / 2.0));
}

Eigen::VectorXd real_tangent_newton(const PolySystem& f, const Eigen::VectorXd& z) {
  const UnitPoint x = UnitPoint::normalized(Field::Real, z.cast<Complex>());
  const CMatrix basis = tangent_basis(x);
  const Eigen::MatrixXd t = (full_derivative(f, x) * basis).real();
  const Eigen::VectorXd vals = evaluate(f, x).real();
  // Minimal-norm Newton step on the tangent space.
  Eigen::VectorXd w = t.completeOrthogonalDecomposition().solve(vals);
  Eigen::VectorXd znew = x.real_coords() - basis.real() * w;
  const double nn = znew.norm();
  if (nn == 0.0) throw NumericalError("tangent Newton step collapsed to the origin");
  return znew / nn;
}

}  // namespace nag
