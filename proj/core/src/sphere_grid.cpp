#include "nag/sphere_grid.hpp"

#include <cmath>
#include <limits>
#include <cstdlib>
#include <fstream>

#include "nag/json_writer.hpp"
#include "nag/parallel.hpp"
#include "nag/rng.hpp"
#include "nag/spatial_hash.hpp"

namespace nag {

namespace {

std::int64_t ipow_saturating(std::int64_t base, int e) {
  const std::int64_t cap = std::numeric_limits<std::int64_t>::max();
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (base != 0 && r > cap / base) return cap;
    r *= base;
  }
  return r;
}

std::int64_t env_cap(const char* name, std::int64_t fallback) {
  const char* s = std::getenv(name);
  if (!s) return fallback;
  const long long v = std::atoll(s);
  return v > 0 ? static_cast<std::int64_t>(v) : fallback;
}

}  // namespace

std::int64_t max_net_points() { return env_cap("NAG_MAX_GRID", 10'000'000); }

std::int64_t max_stream_points() {
  const std::int64_t def = std::int64_t(1) << 33;
  const std::int64_t env = env_cap("NAG_MAX_GRID", 0);
  return env > def ? env : def;
}

GridSpec make_grid_spec(int n, int k) {
  if (n < 1 || n > 8) throw ResourceError("grid: n out of supported range [1,8]");
  if (k < 0 || k > 24) throw ResourceError("grid: k out of supported range [0,24]");
  GridSpec s;
  s.n = n;
  s.k = k;
  const double h = std::ldexp(1.0, -k) / (M_PI * std::sqrt(static_cast<double>(n + 1)));
  s.m = static_cast<int>(std::ceil(2.0 / h));
  const double h_actual = 2.0 / static_cast<double>(s.m);
  // Chain from the construction: cube-cell diameter h*sqrt(n), normalization
  // expands chords by at most 2, geodesic <= (pi/2) * chord.
  s.mesh = M_PI * h_actual * std::sqrt(static_cast<double>(n));
  s.point_count = ipow_saturating(s.m + 1, n + 1) - ipow_saturating(s.m - 1, n + 1);
  if (s.point_count <= 0) s.point_count = std::numeric_limits<std::int64_t>::max();
  return s;
}

GridSweep::GridSweep(const GridSpec& spec) : spec_(spec) {
  const int m = spec_.m;
  const int nv = spec_.n + 1;
  values_.resize(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i)
    values_[static_cast<std::size_t>(i)] = static_cast<double>(2 * i - m) / static_cast<double>(m);

  for (int j = 0; j < nv; ++j) {
    for (double sign : {1.0, -1.0}) {
      Face f;
      f.fixed_axis = j;
      f.sign = sign;
      for (int v = 0; v < nv; ++v)
        if (v != j) f.lead_axes.push_back(v);
      f.row_axis = f.lead_axes.back();
      f.lead_axes.pop_back();
      // A point is owned by this face only if no lower-index axis sits on the
      // lattice boundary, so axes below j are restricted to interior indices.
      f.rows = 1;
      for (int axis : f.lead_axes) {
        const int size = axis < j ? m - 1 : m + 1;
        f.lead_sizes.push_back(size);
        f.rows *= size;
      }
      if (f.row_axis < j) {
        f.row_i0 = 1;
        f.row_i1 = m;
      } else {
        f.row_i0 = 0;
        f.row_i1 = m + 1;
      }
      face_row_offset_.push_back(total_rows_);
      total_rows_ += f.rows;
      faces_.push_back(std::move(f));
    }
  }
}

std::int64_t GridSweep::default_blocks() const {
  const std::int64_t target = std::max<std::int64_t>(4 * thread_count(), 16);
  return std::min(total_rows_, target * 8);
}

void GridSweep::run(std::int64_t blocks,
                    const std::function<void(std::int64_t, const GridRow&)>& fn) const {
  if (total_rows_ == 0) return;
  blocks = std::max<std::int64_t>(1, std::min(blocks, total_rows_));
  const std::int64_t per = (total_rows_ + blocks - 1) / blocks;
  const int nv = spec_.n + 1;

  parallel_blocks(blocks, [&](std::int64_t b) {
    const std::int64_t first = b * per;
    const std::int64_t last = std::min(total_rows_, first + per);
    if (first >= last) return;

    Eigen::VectorXd y(nv);
    GridRow row;
    row.y = &y;
    row.values = values_.data();

    std::size_t face_idx = 0;
    while (face_idx + 1 < faces_.size() && face_row_offset_[face_idx + 1] <= first) ++face_idx;

    std::int64_t global = first;
    std::vector<std::int64_t> digits;
    while (global < last) {
      const Face& f = faces_[face_idx];
      std::int64_t local = global - face_row_offset_[face_idx];
      const std::int64_t face_end = face_row_offset_[face_idx] + f.rows;

      // Decode the mixed-radix lead indices for the first row of this run.
      const std::size_t nlead = f.lead_axes.size();
      digits.assign(nlead, 0);
      {
        std::int64_t rem = local;
        for (std::size_t t = nlead; t-- > 0;) {
          digits[t] = rem % f.lead_sizes[t];
          rem /= f.lead_sizes[t];
        }
      }

      const std::int64_t run_end = std::min(last, face_end);
      for (; global < run_end; ++global) {
        y[f.fixed_axis] = f.sign;
        double prefix = 1.0;
        for (std::size_t t = 0; t < nlead; ++t) {
          const int axis = f.lead_axes[t];
          const int base = axis < f.fixed_axis ? 1 : 0;
          const double v = values_[static_cast<std::size_t>(base + digits[t])];
          y[axis] = v;
          prefix += v * v;
        }
        row.row_axis = f.row_axis;
        row.i_begin = f.row_i0;
        row.i_end = f.row_i1;
        row.prefix_r2 = prefix;
        fn(b, row);

        // Advance the mixed-radix counter.
        for (std::size_t t = nlead; t-- > 0;) {
          if (++digits[t] < f.lead_sizes[t]) break;
          digits[t] = 0;
        }
      }
      if (global >= last) break;
      ++face_idx;
    }
  });
}

void GridSweep::run_points(
    std::int64_t blocks,
    const std::function<void(std::int64_t, const Eigen::VectorXd&)>& fn) const {
  const int nv = spec_.n + 1;
  run(blocks, [&, nv](std::int64_t b, const GridRow& row) {
    thread_local Eigen::VectorXd x;
    x.resize(nv);
    for (int i = row.i_begin; i < row.i_end; ++i) {
      const double v = row.values[i];
      (*row.y)[row.row_axis] = v;
      const double inv = 1.0 / std::sqrt(row.prefix_r2 + v * v);
      x = *row.y * inv;
      fn(b, x);
    }
  });
}

SphericalNet grid(int n, int k) {
  const GridSpec spec = make_grid_spec(n, k);
  if (spec.point_count > max_net_points())
    throw ResourceError("grid(" + std::to_string(n) + "," + std::to_string(k) +
                        ") would materialize " + std::to_string(spec.point_count) +
                        " points, above the cap " + std::to_string(max_net_points()) +
                        " (set NAG_MAX_GRID to raise)");
  GridSweep sweep(spec);
  const std::int64_t blocks = sweep.default_blocks();
  std::vector<std::vector<Eigen::VectorXd>> parts(static_cast<std::size_t>(blocks));
  sweep.run_points(blocks, [&](std::int64_t b, const Eigen::VectorXd& x) {
    parts[static_cast<std::size_t>(b)].push_back(x);
  });
  SphericalNet net;
  net.k = k;
  net.mesh = spec.mesh;
  net.spec = spec;
  net.points.reserve(static_cast<std::size_t>(spec.point_count));
  for (auto& p : parts)
    for (auto& x : p) net.points.push_back(std::move(x));
  return net;
}

double net_cover_check(const SphericalNet& net, std::int64_t samples, std::uint64_t seed) {
  if (samples <= 0) return 0.0;
  if (net.points.empty()) throw InputError("net_cover_check: empty net");
  const int nv = static_cast<int>(net.points[0].size());

  // Chordal cell size; nearest-point search expands shells until provably done.
  const double chord = 2.0 * std::sin(std::min(net.mesh, M_PI) / 2.0);
  SpatialHash hash(nv, std::max(chord, 1e-9));
  for (std::size_t i = 0; i < net.points.size(); ++i) hash.insert(net.points[i], i);

  const std::int64_t blocks = std::min<std::int64_t>(samples, 4 * thread_count());
  const std::int64_t per = (samples + blocks - 1) / blocks;
  std::vector<double> best(static_cast<std::size_t>(blocks), 0.0);

  parallel_blocks(blocks, [&](std::int64_t b) {
    double local = 0.0;
    const std::int64_t first = b * per;
    const std::int64_t last = std::min(samples, first + per);
    for (std::int64_t s = first; s < last; ++s) {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(s));
      const auto xv = rng.sphere_point(nv);
      Eigen::Map<const Eigen::VectorXd> x(xv.data(), nv);
      double c2 = hash.nearest_squared(x, [&](std::size_t idx) {
        return (net.points[idx] - x).squaredNorm();
      });
      // geodesic from chord
      const double c = std::sqrt(c2);
      const double geo = 2.0 * std::asin(std::min(1.0, c / 2.0));
      local = std::max(local, geo);
    }
    best[static_cast<std::size_t>(b)] = local;
  });

  double out = 0.0;
  for (double v : best) out = std::max(out, v);
  return out;
}

void write_net_csv(const SphericalNet& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open file for writing: " + path);
  for (const auto& p : net.points) {
    for (int i = 0; i < p.size(); ++i) {
      if (i) out << ',';
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", p[i]);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace nag
