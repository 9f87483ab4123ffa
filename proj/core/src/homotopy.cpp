#include "nag/homotopy.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "nag/condition.hpp"
#include "nag/norms.hpp"
#include "nag/rng.hpp"

namespace nag {

namespace {

double projective_distance(const CVector& a, const CVector& b) {
  const double c = std::min(1.0, std::abs(a.dot(b)) / (a.norm() * b.norm()));
  return std::acos(c);
}

CVector random_complex_unit(Rng& rng, int m) {
  auto z = rng.complex_sphere_point(m);
  CVector v(m);
  for (int i = 0; i < m; ++i) v[i] = z[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

QuadraticSystem quadratic_from_system(const PolySystem& f) {
  if (f.max_degree() != 2) throw InputError("quadratic_from_system: degrees must all be 2");
  const int nv = f.nvars();
  QuadraticSystem out;
  for (int i = 0; i < f.q(); ++i) {
    if (f.component(i).degree() != 2) throw InputError("quadratic_from_system: degree != 2");
    CMatrix a = CMatrix::Zero(nv, nv);
    std::vector<int> alpha(static_cast<std::size_t>(nv), 0);
    for (int j = 0; j < nv; ++j) {
      for (int k = j; k < nv; ++k) {
        std::fill(alpha.begin(), alpha.end(), 0);
        alpha[static_cast<std::size_t>(j)] += 1;
        alpha[static_cast<std::size_t>(k)] += 1;
        const Complex c = f.component(i).coefficient(alpha);
        if (j == k)
          a(j, j) = c;
        else {
          a(j, k) = c / 2.0;
          a(k, j) = c / 2.0;
        }
      }
    }
    out.mats.push_back(std::move(a));
  }
  return out;
}

PolySystem system_from_quadratic(const QuadraticSystem& qs) {
  const int nv = qs.n() + 1;
  std::vector<HomogeneousPoly> comps;
  for (const auto& a : qs.mats) {
    HomogeneousPoly p(nv, 2);
    std::vector<int> alpha(static_cast<std::size_t>(nv), 0);
    for (int j = 0; j < nv; ++j) {
      for (int k = j; k < nv; ++k) {
        std::fill(alpha.begin(), alpha.end(), 0);
        alpha[static_cast<std::size_t>(j)] += 1;
        alpha[static_cast<std::size_t>(k)] += 1;
        p.set_coefficient(alpha, j == k ? a(j, j) : a(j, k) + a(k, j));
      }
    }
    comps.push_back(std::move(p));
  }
  return PolySystem(Field::Complex, std::move(comps));
}

UnitPoint projective_newton(const PolySystem& q, const UnitPoint& z) {
  if (q.q() != q.n()) throw InputError("projective_newton requires a square system (q = n)");
  const CMatrix basis = tangent_basis(z);
  const CMatrix t = full_derivative(q, z) * basis;
  Eigen::JacobiSVD<CMatrix> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sn = svd.singularValues()(q.q() - 1);
  if (sn <= 1e-14)
    throw NumericalError("projective_newton: tangent derivative singular (sigma_n = " +
                         std::to_string(sn) + ")");
  const CVector vals = evaluate(q, z);
  CVector c = svd.matrixU().adjoint() * vals;
  for (int i = 0; i < q.q(); ++i) c[i] /= svd.singularValues()(i);
  const CVector w = svd.matrixV() * c;
  CVector znew = z.coords() - basis * w;
  return UnitPoint::normalized(Field::Complex, std::move(znew));
}

StandardPair bp_sample(int n, const std::vector<int>& degrees, std::uint64_t seed) {
  if (static_cast<int>(degrees.size()) != n)
    throw InputError("bp_sample: needs q = n degrees");
  const int nv = n + 1;

  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt > 32) throw NumericalError("bp_sample: repeated kernel degeneracy");
    Rng rng = Rng::stream(seed, attempt);

    CMatrix m(n, nv);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < nv; ++j) m(i, j) = rng.complex_normal();
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    if (svd.singularValues()(n - 1) <= 1e-8 * svd.singularValues()(0)) continue;
    CVector zeta = svd.matrixV().col(n);
    const double phase_angle = 2.0 * M_PI * rng.uniform();
    zeta *= Complex(std::cos(phase_angle), std::sin(phase_angle));

    // Linear form L(X) = <X, conj(zeta)> with L(zeta) = 1.
    HomogeneousPoly lform(nv, 1);
    for (int j = 0; j < nv; ++j) {
      std::vector<int> e(static_cast<std::size_t>(nv), 0);
      e[static_cast<std::size_t>(j)] = 1;
      lform.set_coefficient(e, std::conj(zeta[j]));
    }

    std::vector<HomogeneousPoly> comps;
    comps.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const int d = degrees[static_cast<std::size_t>(i)];
      HomogeneousPoly lpow(nv, 0);
      lpow.coefficients()[0] = 1.0;
      for (int rep = 0; rep < d - 1; ++rep) lpow = poly_mul(lpow, lform);

      HomogeneousPoly row(nv, 1);
      for (int j = 0; j < nv; ++j) {
        std::vector<int> e(static_cast<std::size_t>(nv), 0);
        e[static_cast<std::size_t>(j)] = 1;
        row.set_coefficient(e, m(i, j));
      }
      HomogeneousPoly first = poly_mul(lpow, row);
      first *= Complex(std::sqrt(static_cast<double>(d)), 0.0);

      // KSS draw conditioned to vanish to second order at zeta: project out
      // the Weyl components along L^{d-1} X_k.
      HomogeneousPoly h(nv, d);
      {
        auto table = MonoTable::get(nv, d);
        const auto& exps = table->exps(d);
        std::vector<int> alpha(static_cast<std::size_t>(nv));
        for (std::int64_t r = 0; r < h.coefficients().size(); ++r) {
          const int* e = exps.data() + static_cast<std::size_t>(r) * nv;
          alpha.assign(e, e + nv);
          h.coefficients()[r] = std::sqrt(multinomial(d, alpha)) * rng.complex_normal();
        }
      }
      CVector b(nv);
      for (int kvar = 0; kvar < nv; ++kvar)
        b[kvar] = h.partial(kvar).eval(zeta) / static_cast<double>(d);
      Complex zb(0.0, 0.0);
      for (int kvar = 0; kvar < nv; ++kvar) zb += zeta[kvar] * b[kvar];
      CVector c(nv);
      for (int kvar = 0; kvar < nv; ++kvar)
        c[kvar] = static_cast<double>(d) * b[kvar] -
                  static_cast<double>(d - 1) * std::conj(zeta[kvar]) * zb;
      HomogeneousPoly corr_lin(nv, 1);
      for (int j = 0; j < nv; ++j) {
        std::vector<int> e(static_cast<std::size_t>(nv), 0);
        e[static_cast<std::size_t>(j)] = 1;
        corr_lin.set_coefficient(e, c[j]);
      }
      HomogeneousPoly corr = poly_mul(lpow, corr_lin);
      HomogeneousPoly gi(nv, d);
      gi.coefficients() = first.coefficients() + h.coefficients() - corr.coefficients();
      comps.push_back(std::move(gi));
    }

    PolySystem g(Field::Complex, std::move(comps));
    UnitPoint zp = UnitPoint::normalized(Field::Complex, zeta);
    const double residual = evaluate(g, zp).norm();
    if (residual > 1e-10 * weyl_norm(g)) continue;
    if (scaled_sigma_q(g, zp, 0.5) <= 1e-12) continue;
    return {std::move(g), std::move(zp)};
  }
}

HomotopyTrace alh(const PolySystem& f, const PolySystem& g, const UnitPoint& zeta,
                  double norm_upper_fg, const NormOracle& oracle, const AlhOptions& opts) {
  if (f.q() != f.n() || g.q() != g.n()) throw InputError("alh requires square systems");
  HomotopyTrace trace;
  trace.path_norm_upper = norm_upper_fg;

  if (norm_upper_fg == 0.0) {
    trace.final_z = zeta.coords();
    trace.iterations = 0;
    trace.accepted = true;
    trace.final_residual = evaluate(f, zeta).norm() / std::max(weyl_norm(f), 1e-300);
    return trace;
  }

  const int dmax = f.max_degree();
  const double sqn = std::sqrt(static_cast<double>(f.q()));
  double t = 0.0;
  PolySystem qt = g;
  UnitPoint z = zeta;

  while (t < 1.0) {
    if (trace.iterations >= opts.max_iterations)
      throw NumericalError("alh: iteration cap reached (near-singular path?)");
    const StepNorms norms = oracle(qt, t);
    const double sigma = scaled_sigma_q(qt, z, 1.0);
    if (sigma <= 0.0) throw NumericalError("alh: M = infinity (singular tangent derivative)");
    const double m_val = sqn * norms.upper / sigma;
    const double dt = 0.03 * norms.lower / (norm_upper_fg * dmax * m_val * m_val);
    if (!(dt > opts.dt_min))
      throw NumericalError("alh: step underflow (dt = " + std::to_string(dt) +
                           "), near-singular path");
    t = std::min(1.0, t + dt);
    qt = segment_point(f, g, t);
    z = projective_newton(qt, z);
    trace.steps.push_back({t, dt, m_val, norms.lower, norms.upper});
    ++trace.iterations;
  }

  // Newton cleanup and the contraction/residual acceptance certificate.
  std::vector<double> disp;
  for (int j = 0; j < opts.cleanup_newton_steps; ++j) {
    UnitPoint znext = projective_newton(f, z);
    disp.push_back(projective_distance(z.coords(), znext.coords()));
    z = znext;
  }
  trace.cleanup_steps = opts.cleanup_newton_steps;
  trace.final_z = z.coords();
  const double wnorm = weyl_norm(f);
  trace.final_residual = evaluate(f, z).norm() / std::max(wnorm, 1e-300);

  bool contracting = true;
  if (disp.size() >= 2) {
    // Quadratic pattern (1/2)^{2^j - 1} with slack 4, floored at noise level.
    if (disp[1] > std::max(2.0 * disp[0], 1e-13)) contracting = false;
    if (disp.size() >= 3 && disp[2] > std::max(0.5 * disp[0], 1e-13)) contracting = false;
  }
  trace.accepted = contracting && trace.final_residual < opts.residual_accept;
  return trace;
}

QuadraticNorm quadratic_inf_norm(const QuadraticSystem& qs) {
  QuadraticNorm out;
  const int nv = qs.n() + 1;
  CMatrix sum = CMatrix::Zero(nv, nv);
  for (const auto& a : qs.mats) sum += a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(sum);
  out.surrogate = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  for (const auto& a : qs.mats) {
    Eigen::JacobiSVD<CMatrix> svd(a);
    out.exact_components.push_back(svd.singularValues()(0));
  }
  return out;
}

namespace {

SolveResult run_solve(const PolySystem& f, std::uint64_t seed, bool fast_path,
                      const AlhOptions& opts) {
  StandardPair pair = bp_sample(f.n(), f.degrees(), seed);
  const PolySystem& g = pair.g;
  const PolySystem diff = f - g;

  double u_fg = 0.0;
  NormOracle oracle;
  if (fast_path) {
    u_fg = quadratic_inf_norm(quadratic_from_system(diff)).surrogate;
    const double sqn = std::sqrt(static_cast<double>(f.n()));
    oracle = [sqn](const PolySystem& qt, double) {
      const double s = quadratic_inf_norm(quadratic_from_system(qt)).surrogate;
      return StepNorms{s / sqn, s};
    };
  } else {
    u_fg = std_norm(diff) == 0.0 ? 0.0 : linf_norm_complex(diff, 3).upper;
    const double uf = linf_norm_complex(f, 3).upper;
    const double ug = linf_norm_complex(g, 3).upper;
    // Cached unit sample: any evaluation is a valid lower bound for the sup.
    auto sample_pts = std::make_shared<std::vector<CVector>>();
    Rng rng = Rng::stream(seed, 0x6c6f776572ULL);
    for (int s = 0; s < 64; ++s) sample_pts->push_back(random_complex_unit(rng, f.nvars()));
    oracle = [sample_pts, uf, ug](const PolySystem& qt, double t) {
      double lo = 0.0;
      for (const auto& y : *sample_pts) {
        const UnitPoint p(Field::Complex, y);
        lo = std::max(lo, evaluate(qt, p).cwiseAbs().maxCoeff());
      }
      return StepNorms{lo, t * uf + (1.0 - t) * ug};
    };
  }

  HomotopyTrace trace = alh(f, g, pair.zeta, u_fg, oracle, opts);
  CVector zero = trace.final_z;
  const double residual = trace.final_residual;
  const std::int64_t iterations = trace.iterations;
  return SolveResult{std::move(zero), residual, iterations, std::move(trace), std::move(pair),
                     fast_path};
}

}  // namespace

SolveResult solve(const PolySystem& f, std::uint64_t seed, QuadraticFastPath mode,
                  const AlhOptions& opts) {
  if (f.field() != Field::Complex) throw InputError("solve expects a complex system");
  if (f.q() != f.n()) throw InputError("solve requires q = n");
  if (std_norm(f) == 0.0) throw InputError("solve: zero system");
  bool all_quadratic = true;
  for (int d : f.degrees())
    if (d != 2) all_quadratic = false;
  bool fast = false;
  switch (mode) {
    case QuadraticFastPath::Auto: fast = all_quadratic; break;
    case QuadraticFastPath::On:
      if (!all_quadratic) throw InputError("quadratic fast path requires all degrees = 2");
      fast = true;
      break;
    case QuadraticFastPath::Off: fast = false; break;
  }
  return run_solve(f, seed, fast, opts);
}

SolveResult solve_quadratic(const QuadraticSystem& f, std::uint64_t seed, const AlhOptions& opts) {
  return solve(system_from_quadratic(f), seed, QuadraticFastPath::On, opts);
}

}  // namespace nag
