#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "nag/errors.hpp"

namespace nag {

/// Geometry of the cube-boundary grid projected onto S^n.
///
/// The grid places axis values v_i = (2i - m)/m, i = 0..m on every free axis
/// of each of the 2(n+1) faces of the cube [-1,1]^{n+1} and normalizes onto
/// the sphere. Points shared by several faces are owned by the face with the
/// lowest fixed-axis index, detected exactly on the lattice indices, so every
/// point is produced exactly once.
struct GridSpec {
  int n = 0;                    // grid lives on S^n in R^{n+1}
  int k = 0;                    // requested mesh exponent
  int m = 0;                    // axis subdivisions; spacing 2/m <= 2^-k / (pi sqrt(n+1))
  double mesh = 0.0;            // certified mesh bound, always <= 2^-k
  std::int64_t point_count = 0; // (m+1)^{n+1} - (m-1)^{n+1}
};

GridSpec make_grid_spec(int n, int k);

/// Default cap on materialized nets; NAG_MAX_GRID overrides.
std::int64_t max_net_points();
/// Default cap on streamed sweeps; NAG_MAX_GRID overrides when larger.
std::int64_t max_stream_points();

/// Spherical 2^{-k}-net produced by GRID.
struct SphericalNet {
  std::vector<Eigen::VectorXd> points;
  double mesh = 0.0;  // certified bound: every x in S^n is within mesh of the net
  int k = 0;
  GridSpec spec;
};

/// Builds the net, materialized. Guards: n <= 8, k <= 24 and the predicted
/// point count against max_net_points(); the error names the predicted count.
SphericalNet grid(int n, int k);

/// Statistical validation: max over `samples` uniform sphere points of the
/// geodesic distance to the net. Deterministic in (net, samples, seed).
double net_cover_check(const SphericalNet& net, std::int64_t samples, std::uint64_t seed);

/// CSV export, one unit vector per row, 17 significant digits.
void write_net_csv(const SphericalNet& net, const std::string& path);

/// One contiguous run of grid points: all coordinates of y are fixed except
/// y[row_axis], which sweeps values[i] for i in [i_begin, i_end).
/// prefix_r2 = 1 + sum of the squared fixed free coordinates, so the squared
/// norm of the cube point at index i is prefix_r2 + values[i]^2.
struct GridRow {
  Eigen::VectorXd* y = nullptr;  // length n+1 scratch; entry row_axis is stale
  int row_axis = 0;
  const double* values = nullptr;
  int i_begin = 0;
  int i_end = 0;
  double prefix_r2 = 1.0;
};

/// Deterministic streaming sweep over the whole grid, no materialization.
/// Rows are split into `blocks` batches of consecutive rows; fn(block, row)
/// is invoked for every row, with blocks distributed over the worker pool.
/// Per-block state indexed by `block` makes reductions order-independent.
class GridSweep {
 public:
  explicit GridSweep(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  std::int64_t total_rows() const { return total_rows_; }
  const std::vector<double>& axis_values() const { return values_; }

  void run(std::int64_t blocks,
           const std::function<void(std::int64_t block, const GridRow& row)>& fn) const;

  /// Convenience: visits every grid point as a normalized sphere point.
  void run_points(std::int64_t blocks,
                  const std::function<void(std::int64_t block, const Eigen::VectorXd& x)>& fn) const;

  /// A sensible block count for the worker pool.
  std::int64_t default_blocks() const;

 private:
  struct Face {
    int fixed_axis;
    double sign;
    std::vector<int> lead_axes;   // all free axes except the row axis
    std::vector<int> lead_sizes;  // per lead axis: m+1 or m-1 (interior only)
    int row_axis;
    int row_i0, row_i1;
    std::int64_t rows;
  };

  GridSpec spec_;
  std::vector<double> values_;
  std::vector<Face> faces_;
  std::vector<std::int64_t> face_row_offset_;
  std::int64_t total_rows_ = 0;
};

}  // namespace nag
