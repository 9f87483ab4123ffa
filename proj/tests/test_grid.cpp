#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <set>

#include "nag/rng.hpp"
#include "nag/sphere_grid.hpp"
#include "oracles.hpp"

using namespace nag;

namespace {

double brute_nearest_geodesic(const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) best = std::min(best, (x - p).squaredNorm());
  const double chord = std::sqrt(best);
  return 2.0 * std::asin(std::min(1.0, chord / 2.0));
}

}  // namespace

TEST_CASE("grid(1,0): certified mesh <= 1 and unit points") {
  const SphericalNet net = grid(1, 0);
  CHECK(net.mesh <= 1.0);
  CHECK(net.mesh > 0.0);
  for (const auto& p : net.points) CHECK(std::abs(p.norm() - 1.0) <= 1e-12);
}

TEST_CASE("grid(1,3): random circle points lie within 2^-3 of the net") {
  const SphericalNet net = grid(1, 3);
  Rng rng(101);
  for (int s = 0; s < 10000; ++s) {
    const auto xv = rng.sphere_point(2);
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(xv.data(), 2);
    CHECK(brute_nearest_geodesic(x, net.points) < std::ldexp(1.0, -3));
  }
}

TEST_CASE("grid(2,2): deduplicated count matches the boundary-lattice oracle") {
  const SphericalNet net = grid(2, 2);
  const int m = net.spec.m;
  // Independent enumeration: distinct lattice tuples on the cube boundary.
  std::int64_t expected = 0;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j)
      for (int k = 0; k <= m; ++k)
        if (i == 0 || i == m || j == 0 || j == m || k == 0 || k == m) ++expected;
  CHECK(static_cast<std::int64_t>(net.points.size()) == expected);
  CHECK(net.spec.point_count == expected);

  // No duplicates after normalization either.
  std::set<std::array<double, 3>> seen;
  for (const auto& p : net.points) seen.insert({p[0], p[1], p[2]});
  CHECK(seen.size() == net.points.size());
}

TEST_CASE("net_cover_check examples") {
  const SphericalNet net = grid(2, 3);
  CHECK(net_cover_check(net, 0, 5) == 0.0);
  CHECK(net_cover_check(net, 100000, 5) < std::ldexp(1.0, -3));

  SphericalNet single;
  single.k = 0;
  single.mesh = M_PI;
  Eigen::VectorXd e0(2);
  e0 << 1.0, 0.0;
  single.points.push_back(e0);
  CHECK(net_cover_check(single, 1000, 7) <= M_PI);
}

TEST_CASE("cover property across dimensions") {
  struct Case {
    int n, k;
  };
  for (const Case c : {Case{1, 6}, Case{2, 4}, Case{3, 2}}) {
    const SphericalNet net = grid(c.n, c.k);
    const double observed = net_cover_check(net, 100000, 13);
    CHECK(observed < std::ldexp(1.0, -c.k));
    CHECK(observed < net.mesh);
    CHECK(net.mesh <= std::ldexp(1.0, -c.k));
  }
}

TEST_CASE("monotone growth in k") {
  for (int n = 1; n <= 2; ++n)
    for (int k = 0; k < 4; ++k)
      CHECK(make_grid_spec(n, k + 1).point_count > make_grid_spec(n, k).point_count);
}

TEST_CASE("size bound against the 2^{n log n + nk} shape") {
  const double C = 1024.0;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 0; k <= 4; ++k) {
      const GridSpec spec = make_grid_spec(n, k);
      const double bound = C * std::pow(2.0, n * std::log2(static_cast<double>(n)) + n * k);
      CHECK(static_cast<double>(spec.point_count) <= bound);
    }
  }
}

TEST_CASE("resource guard names the predicted point count") {
  try {
    grid(8, 24);
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("points") != std::string::npos);
  }
  CHECK_THROWS_AS(make_grid_spec(9, 1), ResourceError);
  CHECK_THROWS_AS(make_grid_spec(1, 25), ResourceError);
}

TEST_CASE("streamed sweep visits every materialized point in order") {
  const GridSpec spec = make_grid_spec(2, 1);
  GridSweep sweep(spec);
  std::vector<Eigen::VectorXd> streamed;
  sweep.run_points(1, [&](std::int64_t, const Eigen::VectorXd& x) { streamed.push_back(x); });
  const SphericalNet net = grid(2, 1);
  REQUIRE(streamed.size() == net.points.size());
  for (std::size_t i = 0; i < streamed.size(); ++i)
    CHECK((streamed[i] - net.points[i]).norm() == 0.0);
}

TEST_CASE("csv export round-trips at 17 digits") {
  const SphericalNet net = grid(1, 1);
  const std::string path = "/tmp/nag_test_net.csv";
  write_net_csv(net, path);
  FILE* fp = std::fopen(path.c_str(), "r");
  REQUIRE(fp != nullptr);
  char line[256];
  std::size_t row = 0;
  while (std::fgets(line, sizeof(line), fp)) {
    double a = 0.0, b = 0.0;
    REQUIRE(std::sscanf(line, "%lf,%lf", &a, &b) == 2);
    CHECK(a == net.points[row][0]);
    CHECK(b == net.points[row][1]);
    ++row;
  }
  std::fclose(fp);
  CHECK(row == net.points.size());
}
