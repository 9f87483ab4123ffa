#include "nag/norms.hpp"

#include <cmath>

#include "nag/parallel.hpp"
#include "nag/rng.hpp"

namespace nag {

int norm_grid_exponent(int k, int max_degree) {
  const int d = std::max(1, max_degree);
  const double v = 0.5 * static_cast<double>(k - 1) + std::log2(static_cast<double>(d));
  int ell = static_cast<int>(std::ceil(v));
  if (ell < 0) ell = 0;
  return ell;
}

namespace {

int pow_u(double base, int e, double odd_factor, double& out) {
  // out = odd_factor * base^e
  double r = odd_factor;
  for (int i = 0; i < e; ++i) r *= base;
  out = r;
  return 0;
}

struct SweepSetup {
  int nvars = 0;
  int q = 0;
  int maxd = 0;
  std::vector<int> degrees;
  std::vector<const double*> row_exp;        // filled per row-axis
  std::shared_ptr<const MonoTable> table;
  std::vector<Eigen::VectorXd> coef;         // real coefficient vectors
  bool any_odd = false;
};

struct SweepBlock {
  std::vector<double> mx;
  std::vector<std::vector<double>> mono;
  std::vector<double> r2, t, st;
  std::vector<std::vector<double>> horner;   // per component, d_i + 1 coeffs
  std::vector<std::vector<double>> scale;    // per degree value, per i
  bool ready = false;
};

}  // namespace

namespace {

/// Fast sweep for systems whose components are single monomials. On a grid
/// row only the row-axis value varies, so each |c x^alpha| factors into a
/// per-component prefix times g(v) = |v|^e (P + v^2)^{-d/2}, and g is
/// unimodal in |v| with its maximum at v^2 = eP/(d-e). The row maximum is
/// therefore attained at one of O(1) candidate indices.
std::vector<double> monomial_sweep(const PolySystem& f, const GridSpec& spec) {
  const int nv = f.nvars();
  const int q = f.q();

  struct Mono {
    double c_abs = 0.0;
    std::vector<int> alpha;
    int degree = 0;
  };
  std::vector<Mono> monos(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) {
    const auto& p = f.component(i);
    auto table = MonoTable::get(nv, std::max(1, p.degree()));
    Mono& m = monos[static_cast<std::size_t>(i)];
    m.degree = p.degree();
    m.alpha.assign(static_cast<std::size_t>(nv), 0);
    for (std::int64_t r = 0; r < p.coefficients().size(); ++r) {
      if (p.coefficients()[r] == Complex(0.0, 0.0)) continue;
      m.c_abs = std::abs(p.coefficients()[r]);
      const int* e = table->exps(p.degree()).data() + static_cast<std::size_t>(r) * nv;
      m.alpha.assign(e, e + nv);
    }
  }

  GridSweep sweep(spec);
  const std::int64_t blocks = sweep.default_blocks();
  std::vector<std::vector<double>> mx(static_cast<std::size_t>(blocks));
  const int m_sub = spec.m;

  sweep.run(blocks, [&](std::int64_t b, const GridRow& row) {
    auto& best = mx[static_cast<std::size_t>(b)];
    if (best.empty()) best.assign(static_cast<std::size_t>(q), 0.0);
    const double* vals = row.values;
    const double P = row.prefix_r2;
    const int i0 = row.i_begin, i1 = row.i_end;

    // g evaluated at candidate grid indices only.
    auto g_at = [&](int i, int e, int d) {
      const double v = std::abs(vals[i]);
      double num = 1.0;
      for (int rep = 0; rep < e; ++rep) num *= v;
      const double t = 1.0 / (P + v * v);
      double s;
      if (d % 2 == 0) {
        s = 1.0;
        for (int rep = 0; rep < d / 2; ++rep) s *= t;
      } else {
        s = std::sqrt(t);
        for (int rep = 0; rep < (d - 1) / 2; ++rep) s *= t;
      }
      return num * s;
    };
    auto row_max = [&](int e, int d) {
      double out = 0.0;
      auto consider = [&](int i) {
        for (int j = i - 2; j <= i + 2; ++j) {
          if (j < i0 || j >= i1) continue;
          out = std::max(out, g_at(j, e, d));
        }
      };
      consider(i0);
      consider(i1 - 1);
      consider(m_sub / 2);  // smallest |v|
      if (e > 0 && e < d) {
        const double vstar = std::sqrt(e * P / static_cast<double>(d - e));
        const int ipos = static_cast<int>(std::floor(0.5 * (1.0 + vstar) * m_sub));
        const int ineg = static_cast<int>(std::floor(0.5 * (1.0 - vstar) * m_sub));
        consider(ipos);
        consider(ineg);
      }
      return out;
    };

    // Row maxima per (e, d) are shared across components.
    thread_local std::vector<double> cache;
    const int maxd = std::max(1, f.max_degree());
    cache.assign(static_cast<std::size_t>((maxd + 1) * (maxd + 1)), -1.0);

    for (int i = 0; i < q; ++i) {
      const Mono& mono = monos[static_cast<std::size_t>(i)];
      if (mono.c_abs == 0.0) continue;
      const int e = mono.alpha[static_cast<std::size_t>(row.row_axis)];
      const int key = e * (maxd + 1) + mono.degree;
      if (cache[static_cast<std::size_t>(key)] < 0.0)
        cache[static_cast<std::size_t>(key)] = row_max(e, mono.degree);
      double prefix = mono.c_abs;
      for (int v = 0; v < nv; ++v) {
        if (v == row.row_axis) continue;
        const double av = std::abs((*row.y)[v]);
        for (int rep = 0; rep < mono.alpha[static_cast<std::size_t>(v)]; ++rep) prefix *= av;
      }
      double& slot = best[static_cast<std::size_t>(i)];
      slot = std::max(slot, prefix * cache[static_cast<std::size_t>(key)]);
    }
  });

  std::vector<double> out(static_cast<std::size_t>(q), 0.0);
  for (const auto& part : mx) {
    if (part.empty()) continue;
    for (int i = 0; i < q; ++i)
      out[static_cast<std::size_t>(i)] =
          std::max(out[static_cast<std::size_t>(i)], part[static_cast<std::size_t>(i)]);
  }
  return out;
}

bool all_monomials(const PolySystem& f) {
  for (int i = 0; i < f.q(); ++i) {
    int nonzero = 0;
    const auto& c = f.component(i).coefficients();
    for (std::int64_t r = 0; r < c.size(); ++r)
      if (c[r] != Complex(0.0, 0.0)) ++nonzero;
    if (nonzero > 1) return false;
  }
  return true;
}

}  // namespace

std::vector<double> grid_componentwise_max(const PolySystem& f, int ell) {
  const int nv = f.nvars();
  const int n = f.n();
  const GridSpec spec = make_grid_spec(n, ell);
  if (spec.point_count > max_stream_points())
    throw ResourceError("norm sweep over grid(" + std::to_string(n) + "," + std::to_string(ell) +
                        ") needs " + std::to_string(spec.point_count) +
                        " evaluations, above the streaming cap " +
                        std::to_string(max_stream_points()) + " (set NAG_MAX_GRID to raise)");
  if (all_monomials(f)) return monomial_sweep(f, spec);

  SweepSetup setup;
  setup.nvars = nv;
  setup.q = f.q();
  setup.maxd = std::max(1, f.max_degree());
  setup.degrees = f.degrees();
  setup.table = MonoTable::get(nv, setup.maxd);
  for (int i = 0; i < f.q(); ++i) {
    const auto& c = f.component(i).coefficients();
    Eigen::VectorXd re(c.size());
    for (std::int64_t r = 0; r < c.size(); ++r) re[r] = c[r].real();
    setup.coef.push_back(std::move(re));
    if (f.component(i).degree() % 2 == 1) setup.any_odd = true;
  }

  GridSweep sweep(spec);
  const std::int64_t blocks = sweep.default_blocks();
  std::vector<SweepBlock> state(static_cast<std::size_t>(blocks));
  const int m = spec.m;

  sweep.run(blocks, [&](std::int64_t b, const GridRow& row) {
    SweepBlock& s = state[static_cast<std::size_t>(b)];
    if (!s.ready) {
      s.mx.assign(static_cast<std::size_t>(setup.q), 0.0);
      s.r2.resize(static_cast<std::size_t>(m) + 1);
      s.t.resize(static_cast<std::size_t>(m) + 1);
      s.st.resize(static_cast<std::size_t>(m) + 1);
      s.horner.resize(static_cast<std::size_t>(setup.q));
      for (int i = 0; i < setup.q; ++i)
        s.horner[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(setup.degrees[i]) + 1);
      s.scale.assign(static_cast<std::size_t>(setup.maxd) + 1, {});
      for (int i = 0; i < setup.q; ++i)
        s.scale[static_cast<std::size_t>(setup.degrees[i])].resize(static_cast<std::size_t>(m) + 1);
      s.ready = true;
    }

    Eigen::VectorXd& y = *row.y;
    y[row.row_axis] = 1.0;
    setup.table->eval_all(y.data(), setup.maxd, s.mono);

    // Collapse each component into a univariate polynomial in the row value.
    for (int i = 0; i < setup.q; ++i) {
      const int d = setup.degrees[i];
      auto& R = s.horner[static_cast<std::size_t>(i)];
      std::fill(R.begin(), R.end(), 0.0);
      const auto& exps = setup.table->exps(d);
      const double* c = setup.coef[static_cast<std::size_t>(i)].data();
      const double* mono = s.mono[static_cast<std::size_t>(d)].data();
      const std::int64_t nc = setup.coef[static_cast<std::size_t>(i)].size();
      const int* ax = exps.data() + row.row_axis;
      for (std::int64_t r = 0; r < nc; ++r)
        R[static_cast<std::size_t>(ax[r * setup.nvars])] += c[r] * mono[r];
    }

    const int i0 = row.i_begin, i1 = row.i_end;
    const double* vals = row.values;
    double* r2 = s.r2.data();
    double* t = s.t.data();
    double* st = s.st.data();
    const double prefix = row.prefix_r2;
    for (int i = i0; i < i1; ++i) {
      const double v = vals[i];
      r2[i] = prefix + v * v;
    }
    for (int i = i0; i < i1; ++i) t[i] = 1.0 / r2[i];
    if (setup.any_odd)
      for (int i = i0; i < i1; ++i) st[i] = std::sqrt(t[i]);

    for (int d = 0; d <= setup.maxd; ++d) {
      auto& sc = s.scale[static_cast<std::size_t>(d)];
      if (sc.empty()) continue;
      if (d % 2 == 0) {
        const int e = d / 2;
        for (int i = i0; i < i1; ++i) pow_u(t[i], e, 1.0, sc[static_cast<std::size_t>(i)]);
      } else {
        const int e = (d - 1) / 2;
        for (int i = i0; i < i1; ++i) pow_u(t[i], e, st[i], sc[static_cast<std::size_t>(i)]);
      }
    }

    for (int c = 0; c < setup.q; ++c) {
      const int d = setup.degrees[c];
      const double* R = s.horner[static_cast<std::size_t>(c)].data();
      const double* sc = s.scale[static_cast<std::size_t>(d)].data();
      double mx = s.mx[static_cast<std::size_t>(c)];
      for (int i = i0; i < i1; ++i) {
        const double v = vals[i];
        double acc = R[d];
        for (int e = d - 1; e >= 0; --e) acc = acc * v + R[e];
        const double val = std::abs(acc) * sc[i];
        mx = std::max(mx, val);
      }
      s.mx[static_cast<std::size_t>(c)] = mx;
    }
  });

  std::vector<double> out(static_cast<std::size_t>(f.q()), 0.0);
  for (const auto& s : state) {
    if (!s.ready) continue;
    for (int i = 0; i < f.q(); ++i)
      out[static_cast<std::size_t>(i)] = std::max(out[static_cast<std::size_t>(i)],
                                                  s.mx[static_cast<std::size_t>(i)]);
  }
  return out;
}

namespace {

std::vector<CertifiedNorm> certify(const std::vector<double>& maxima, int k,
                                   std::int64_t grid_size) {
  const double slack = 1.0 / (1.0 - std::ldexp(1.0, -k));
  std::vector<CertifiedNorm> out;
  out.reserve(maxima.size());
  for (double m : maxima) out.push_back({m * slack, m, k, grid_size});
  return out;
}

}  // namespace

std::vector<CertifiedNorm> linf_norm_real_components(const PolySystem& f, int k) {
  if (f.field() != Field::Real) throw InputError("linf_norm_real expects a real system");
  if (k < 1) throw InputError("linf_norm_real: k >= 1 required");
  const int ell = norm_grid_exponent(k, f.max_degree());
  const GridSpec spec = make_grid_spec(f.n(), ell);
  const auto maxima = grid_componentwise_max(f, ell);
  return certify(maxima, k, spec.point_count);
}

CertifiedNorm linf_norm_real(const PolySystem& f, int k) {
  auto per = linf_norm_real_components(f, k);
  CertifiedNorm out = per[0];
  for (const auto& c : per) {
    if (c.lower > out.lower) {
      out.lower = c.lower;
      out.upper = c.upper;
    }
  }
  out.k = k;
  return out;
}

HomogeneousPoly expand_abs_squared(const HomogeneousPoly& p) {
  const int nv = p.nvars();
  const int rv = 2 * nv;  // u_0..u_n, v_0..v_n
  const int d = p.degree();

  // Linear forms z_j = u_j + i v_j over the real variables.
  std::vector<HomogeneousPoly> zs;
  zs.reserve(static_cast<std::size_t>(nv));
  for (int j = 0; j < nv; ++j) {
    HomogeneousPoly lin(rv, 1);
    std::vector<int> e(static_cast<std::size_t>(rv), 0);
    e[static_cast<std::size_t>(j)] = 1;
    lin.set_coefficient(e, Complex(1.0, 0.0));
    e[static_cast<std::size_t>(j)] = 0;
    e[static_cast<std::size_t>(nv + j)] = 1;
    lin.set_coefficient(e, Complex(0.0, 1.0));
    zs.push_back(std::move(lin));
  }

  auto table = MonoTable::get(nv, std::max(1, d));
  const auto& exps = table->exps(d);
  HomogeneousPoly expanded(rv, d);
  for (std::int64_t r = 0; r < p.coefficients().size(); ++r) {
    const Complex c = p.coefficients()[r];
    if (c == Complex(0.0, 0.0)) continue;
    HomogeneousPoly term(rv, 0);
    term.coefficients()[0] = c;
    const int* alpha = exps.data() + static_cast<std::size_t>(r) * nv;
    for (int j = 0; j < nv; ++j)
      for (int rep = 0; rep < alpha[j]; ++rep) term = poly_mul(term, zs[static_cast<std::size_t>(j)]);
    expanded.coefficients() += term.coefficients();
  }

  HomogeneousPoly sq = poly_mul(expanded, expanded.conjugate_coefficients());
  // |p|^2 is real; drop rounding-level imaginary parts.
  for (std::int64_t r = 0; r < sq.coefficients().size(); ++r)
    sq.coefficients()[r] = Complex(sq.coefficients()[r].real(), 0.0);
  return sq;
}

std::vector<CertifiedNorm> linf_norm_complex_components(const PolySystem& f, int k) {
  if (f.field() != Field::Complex) throw InputError("linf_norm_complex expects a complex system");
  if (k < 1) throw InputError("linf_norm_complex: k >= 1 required");
  if (f.n() > 3)
    throw ResourceError("linf_norm_complex guarded at n <= 3 (grids on S^{2n+1} grow fast)");
  std::vector<HomogeneousPoly> comps;
  comps.reserve(static_cast<std::size_t>(f.q()));
  for (int i = 0; i < f.q(); ++i) comps.push_back(expand_abs_squared(f.component(i)));
  PolySystem squared(Field::Real, std::move(comps));
  auto per = linf_norm_real_components(squared, k);
  for (auto& c : per) {
    c.upper = std::sqrt(c.upper);
    c.lower = std::sqrt(c.lower);
    c.k = k;
  }
  return per;
}

CertifiedNorm linf_norm_complex(const PolySystem& f, int k) {
  auto per = linf_norm_complex_components(f, k);
  CertifiedNorm out = per[0];
  for (const auto& c : per)
    if (c.lower > out.lower) out = c;
  return out;
}

LpEstimate lp_norm_mc(const PolySystem& f, double p, std::int64_t samples, std::uint64_t seed) {
  if (p < 1.0 || !std::isfinite(p)) throw InputError("lp_norm_mc: p must be in [1, inf)");
  if (samples < 100) throw InputError("lp_norm_mc: samples >= 100 required");
  const int nv = f.nvars();

  const std::int64_t blocks = std::min<std::int64_t>(samples, 8 * thread_count());
  const std::int64_t per = (samples + blocks - 1) / blocks;
  std::vector<std::vector<double>> parts(static_cast<std::size_t>(blocks));

  parallel_blocks(blocks, [&](std::int64_t b) {
    auto& out = parts[static_cast<std::size_t>(b)];
    const std::int64_t first = b * per;
    const std::int64_t last = std::min(samples, first + per);
    for (std::int64_t s = first; s < last; ++s) {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(s));
      CVector z(nv);
      if (f.field() == Field::Real) {
        const auto x = rng.sphere_point(nv);
        for (int i = 0; i < nv; ++i) z[i] = Complex(x[static_cast<std::size_t>(i)], 0.0);
      } else {
        const auto x = rng.complex_sphere_point(nv);
        for (int i = 0; i < nv; ++i) z[i] = x[static_cast<std::size_t>(i)];
      }
      const UnitPoint pt(f.field(), z);
      const CVector vals = evaluate(f, pt);
      double acc = 0.0;
      for (int i = 0; i < f.q(); ++i) acc += std::pow(std::abs(vals[i]), p);
      out.push_back(acc);
    }
  });

  std::vector<double> tvals;
  tvals.reserve(static_cast<std::size_t>(samples));
  for (const auto& part : parts) tvals.insert(tvals.end(), part.begin(), part.end());

  const double m = static_cast<double>(tvals.size());
  double sum = 0.0;
  for (double v : tvals) sum += v;
  const double mean = sum / m;
  const double value = std::pow(mean, 1.0 / p);

  // Jackknife over the p-th root.
  double jsum = 0.0;
  std::vector<double> theta(tvals.size());
  for (std::size_t i = 0; i < tvals.size(); ++i) {
    theta[i] = std::pow((sum - tvals[i]) / (m - 1.0), 1.0 / p);
    jsum += theta[i];
  }
  const double jmean = jsum / m;
  double var = 0.0;
  for (double th : theta) var += (th - jmean) * (th - jmean);
  const double se = std::sqrt((m - 1.0) / m * var);

  return {value, se, p, static_cast<std::int64_t>(tvals.size())};
}

PolySystem scaled_directional_system(const PolySystem& f, const CVector& v) {
  if (v.size() != f.nvars()) throw InputError("direction dimension mismatch");
  if (v.norm() == 0.0) throw InputError("scaled_directional_system: zero direction");
  std::vector<HomogeneousPoly> comps;
  comps.reserve(static_cast<std::size_t>(f.q()));
  for (int i = 0; i < f.q(); ++i) {
    HomogeneousPoly g = f.component(i).directional_derivative(v);
    g *= Complex(1.0 / static_cast<double>(f.component(i).degree()), 0.0);
    comps.push_back(std::move(g));
  }
  return PolySystem(f.field(), std::move(comps));
}

double linear_inf_norm(const PolySystem& f) {
  double best = 0.0;
  for (int i = 0; i < f.q(); ++i) {
    if (f.component(i).degree() != 1)
      throw InputError("linear_inf_norm requires all degrees equal to 1");
    best = std::max(best, f.component(i).coefficients().norm());
  }
  return best;
}

}  // namespace nag
