#include "nag/condition.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "nag/parallel.hpp"
#include "nag/rng.hpp"

namespace nag {

namespace {

constexpr double kSingularRel = 1e-14;

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

/// Fast repeated evaluation of a real system and its full derivative.
struct RealJet {
  explicit RealJet(const PolySystem& f)
      : q(f.q()), nvars(f.nvars()), maxd(std::max(1, f.max_degree())), degrees(f.degrees()) {
    table = MonoTable::get(nvars, maxd);
    coef.reserve(q);
    dcoef.resize(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) {
      coef.push_back(f.component(i).coefficients().real());
      dcoef[static_cast<std::size_t>(i)].reserve(static_cast<std::size_t>(nvars));
      for (int j = 0; j < nvars; ++j)
        dcoef[static_cast<std::size_t>(i)].push_back(
            f.component(i).partial(j).coefficients().real());
    }
  }

  struct Scratch {
    std::vector<std::vector<double>> mono;
    Eigen::VectorXd vals;
    Eigen::MatrixXd deriv;
  };

  void eval(const Eigen::VectorXd& x, Scratch& s) const {
    table->eval_all(x.data(), maxd, s.mono);
    s.vals.resize(q);
    s.deriv.resize(q, nvars);
    for (int i = 0; i < q; ++i) {
      const int d = degrees[static_cast<std::size_t>(i)];
      const auto& mono = s.mono[static_cast<std::size_t>(d)];
      const auto& c = coef[static_cast<std::size_t>(i)];
      double acc = 0.0;
      for (std::int64_t r = 0; r < c.size(); ++r) acc += c[r] * mono[static_cast<std::size_t>(r)];
      s.vals[i] = acc;
      const auto& dmono = s.mono[static_cast<std::size_t>(d > 0 ? d - 1 : 0)];
      for (int j = 0; j < nvars; ++j) {
        const auto& dc = dcoef[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        double da = 0.0;
        for (std::int64_t r = 0; r < dc.size(); ++r)
          da += dc[r] * dmono[static_cast<std::size_t>(r)];
        s.deriv(i, j) = da;
      }
    }
  }

  int q, nvars, maxd;
  std::vector<int> degrees;
  std::shared_ptr<const MonoTable> table;
  std::vector<Eigen::VectorXd> coef;
  std::vector<std::vector<Eigen::VectorXd>> dcoef;
};

/// q-th singular value of the row-projected matrix P = M - (M x) x^T, which
/// shares its singular values with the tangent restriction of M.
double projected_sigma_q(Eigen::MatrixXd& m, const Eigen::VectorXd& x) {
  const int q = static_cast<int>(m.rows());
  const int nv = static_cast<int>(m.cols());
  if (q > nv - 1) return 0.0;
  Eigen::VectorXd mx = m * x;
  m.noalias() -= mx * x.transpose();
  if (q == 1) return m.row(0).norm();
  if (q == 2) {
    const double g00 = m.row(0).squaredNorm();
    const double g11 = m.row(1).squaredNorm();
    const double g01 = m.row(0).dot(m.row(1));
    const double tr = g00 + g11;
    const double det = std::max(0.0, g00 * g11 - g01 * g01);
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double s2 = (tr + disc) > 0.0 ? 2.0 * det / (tr + disc) : 0.0;
    return std::sqrt(std::max(0.0, s2));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(q - 1);
}

double projected_sigma_max(Eigen::MatrixXd& m, const Eigen::VectorXd& x) {
  Eigen::VectorXd mx = m * x;
  m.noalias() -= mx * x.transpose();
  if (m.rows() == 1) return m.row(0).norm();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

double scaled_sigma_q(const PolySystem& f, const UnitPoint& x, double exponent) {
  CMatrix t = tangent_derivative(f, x);
  for (int i = 0; i < f.q(); ++i)
    t.row(i) *= std::pow(static_cast<double>(f.component(i).degree()), -exponent);
  if (t.rows() > t.cols()) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(t);
  return svd.singularValues()(f.q() - 1);
}

ConditionReport kappa_local(const PolySystem& f, const UnitPoint& x) {
  if (f.field() != Field::Real) throw InputError("kappa_local expects a real system");
  ConditionReport rep;
  const double scale = f.max_abs_coefficient();
  if (scale == 0.0) {
    rep.value = std::numeric_limits<double>::infinity();
    rep.residual_branch = "singular";
    return rep;
  }
  // True division (not multiplication by a rounded reciprocal): coefficient
  // vectors that are exact scalar multiples then normalize bit-identically.
  PolySystem fn = f;
  for (int i = 0; i < fn.q(); ++i)
    for (std::int64_t r = 0; r < fn.component(i).coefficients().size(); ++r)
      fn.component(i).coefficients()[r] /= scale;
  const double w = weyl_norm(fn);
  const CVector vals = evaluate(fn, x);
  const double a = vals.norm();
  const double s = scaled_sigma_q(fn, x, 0.5);
  const double denom = std::sqrt(a * a + s * s);
  rep.sigma_q = s;
  rep.denominator = denom;
  rep.norm_upper = rep.norm_lower = w;
  if (denom <= kSingularRel * w) {
    rep.value = std::numeric_limits<double>::infinity();
    rep.residual_branch = "singular";
  } else {
    rep.value = w / denom;
    rep.residual_branch = a >= s ? "value" : "sigma";
  }
  return rep;
}

ConditionReport K_local(const PolySystem& f, const UnitPoint& x, const CertifiedNorm& norm) {
  if (f.field() != Field::Real) throw InputError("K_local expects a real system");
  ConditionReport rep;
  const double sq = std::sqrt(static_cast<double>(f.q()));
  const CVector vals = evaluate(f, x);
  const double a = vals.norm();
  const double s = scaled_sigma_q(f, x, 1.0);
  const double denom = std::max(a, s);
  rep.sigma_q = s;
  rep.denominator = denom;
  rep.norm_upper = norm.upper;
  rep.norm_lower = norm.lower;
  if (denom <= kSingularRel * sq * norm.upper || norm.upper == 0.0) {
    rep.value = std::numeric_limits<double>::infinity();
    rep.residual_branch = "singular";
  } else {
    rep.value = sq * norm.upper / denom;
    rep.residual_branch = a >= s ? "value" : "sigma";
  }
  return rep;
}

ConditionReport mu_norm(const PolySystem& f, const UnitPoint& z) {
  if (f.field() != Field::Complex) throw InputError("mu_norm expects a complex system");
  if (f.q() > f.n()) throw InputError("mu_norm requires q <= n");
  ConditionReport rep;
  const double w = weyl_norm(f);
  const double s = scaled_sigma_q(f, z, 0.5);
  rep.sigma_q = s;
  rep.denominator = s;
  rep.norm_upper = rep.norm_lower = w;
  if (s <= kSingularRel * w) {
    rep.value = std::numeric_limits<double>::infinity();
    rep.residual_branch = "singular";
  } else {
    rep.value = w / s;
    rep.residual_branch = "sigma";
  }
  return rep;
}

ConditionReport M_local(const PolySystem& f, const UnitPoint& z, double norm_upper,
                        double norm_lower) {
  if (f.field() != Field::Complex) throw InputError("M_local expects a complex system");
  if (f.q() > f.n()) throw InputError("M_local requires q <= n");
  ConditionReport rep;
  const double sq = std::sqrt(static_cast<double>(f.q()));
  const double s = scaled_sigma_q(f, z, 1.0);
  rep.sigma_q = s;
  rep.denominator = s;
  rep.norm_upper = norm_upper;
  rep.norm_lower = norm_lower > 0.0 ? norm_lower : norm_upper;
  if (s <= kSingularRel * norm_upper || norm_upper == 0.0) {
    rep.value = std::numeric_limits<double>::infinity();
    rep.residual_branch = "singular";
  } else {
    rep.value = sq * norm_upper / s;
    rep.residual_branch = "sigma";
  }
  return rep;
}

KEstimate K_estimate(const PolySystem& f, int k, int b) {
  if (f.field() != Field::Real) throw InputError("K_estimate expects a real system");
  if (std_norm(f) == 0.0) throw InputError("K_estimate: zero system");
  KEstimate out;
  // Norm accuracy k+2 (not the k+1 of the basic loop): the estimate inflates
  // by at most 1/((1-2^-k)(1-2^-(k+2))), which keeps 0.99 K_hat <= K(f) true
  // at k = 7. With k+1 the combined inflation would reach 1.0118 > 1/0.99.
  out.norm = linf_norm_real(f, k + 2);
  const double t = out.norm.upper;
  const double sq = std::sqrt(static_cast<double>(f.q()));
  const int dmax = f.max_degree();
  const RealJet jet(f);

  for (int ell = 1; ell <= 24; ++ell) {
    const GridSpec spec = make_grid_spec(f.n(), ell);
    if (spec.point_count > max_stream_points())
      throw ResourceError("K_estimate grid at ell=" + std::to_string(ell) + " needs " +
                          std::to_string(spec.point_count) + " points, above the streaming cap");
    GridSweep sweep(spec);
    const std::int64_t blocks = sweep.default_blocks();
    std::vector<double> denom_min(static_cast<std::size_t>(blocks),
                                  std::numeric_limits<double>::infinity());
    std::vector<RealJet::Scratch> scratch(static_cast<std::size_t>(blocks));
    sweep.run_points(blocks, [&](std::int64_t blk, const Eigen::VectorXd& x) {
      auto& s = scratch[static_cast<std::size_t>(blk)];
      jet.eval(x, s);
      const double a = s.vals.norm();
      for (int i = 0; i < jet.q; ++i)
        s.deriv.row(i) /= static_cast<double>(jet.degrees[static_cast<std::size_t>(i)]);
      const double sig = projected_sigma_q(s.deriv, x);
      const double denom = std::max(a, sig);
      double& dm = denom_min[static_cast<std::size_t>(blk)];
      dm = std::min(dm, denom);
    });
    double dmin = std::numeric_limits<double>::infinity();
    for (double v : denom_min) dmin = std::min(dmin, v);

    const double K = dmin > 0.0 ? sq * t / dmin : std::numeric_limits<double>::infinity();
    out.K_raw = K;
    out.ell_stop = ell;
    if (!std::isfinite(K) || (b >= 0 && K >= std::ldexp(1.0, b))) {
      out.failed = true;
      return out;
    }
    if (dmax * K * std::ldexp(1.0, -ell) <= std::ldexp(1.0, -(k + 1))) {
      out.K_hat = K / (1.0 - std::ldexp(1.0, -k));
      return out;
    }
  }
  throw ResourceError("K_estimate did not converge before the grid guard (ell > 24)");
}

double dist_to_sigma(const PolySystem& f, const UnitPoint& x) {
  if (f.field() != Field::Real) throw InputError("dist_to_sigma expects a real system");
  const double a = evaluate(f, x).norm();
  const double s = scaled_sigma_q(f, x, 0.5);
  return std::sqrt(a * a + s * s);
}

double dist_to_sigma_c1(const PolySystem& f, const UnitPoint& x) {
  if (f.field() != Field::Real) throw InputError("dist_to_sigma_c1 expects a real system");
  const double a = evaluate(f, x).norm();
  const double s = scaled_sigma_q(f, x, 0.0);
  return std::sqrt(a * a + s * s);
}

double smale_gamma(const PolySystem& f, const UnitPoint& x, int probes, std::uint64_t seed) {
  const int nv = f.nvars();
  const int q = f.q();
  const bool complex_field = f.field() == Field::Complex;
  const CMatrix basis = tangent_basis(x);
  const CMatrix t = full_derivative(f, x) * basis;
  Eigen::JacobiSVD<CMatrix> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (t.rows() > t.cols() || svd.singularValues()(q - 1) <= 1e-14)
    throw NumericalError("smale_gamma: derivative at x is not surjective");

  // Pseudo-inverse application in tangent coordinates; the tangent basis is
  // an isometry, so norms are read off directly.
  auto pinv_apply = [&](const CVector& y) -> CVector {
    CVector c = svd.matrixU().adjoint() * y;
    for (int i = 0; i < q; ++i) c[i] /= svd.singularValues()(i);
    return svd.matrixV() * c;
  };

  Rng rng = Rng::stream(seed, 0x67616d6dULL);
  auto random_unit = [&]() {
    CVector v(nv);
    if (complex_field) {
      auto z = rng.complex_sphere_point(nv);
      for (int i = 0; i < nv; ++i) v[i] = z[static_cast<std::size_t>(i)];
    } else {
      auto z = rng.sphere_point(nv);
      for (int i = 0; i < nv; ++i) v[i] = Complex(z[static_cast<std::size_t>(i)], 0.0);
    }
    return v;
  };

  const int dmax = f.max_degree();
  double gamma = 0.0;
  for (int k = 2; k <= dmax; ++k) {
    const double kfac = factorial(k);
    std::vector<CVector> best(static_cast<std::size_t>(k));
    double best_val = -1.0;
    for (int p = 0; p < probes; ++p) {
      std::vector<CVector> vs;
      vs.reserve(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) vs.push_back(random_unit());
      const CVector w = kth_derivative_apply(f, x, vs);
      const double val = pinv_apply(w).norm() / kfac;
      if (val > best_val) {
        best_val = val;
        best = vs;
      }
    }
    // Alternating ascent: optimize one slot at a time against the others.
    for (int round = 0; round < 3; ++round) {
      for (int j = 0; j < k; ++j) {
        CMatrix slot(q, nv);
        std::vector<CVector> vs = best;
        for (int e = 0; e < nv; ++e) {
          vs[static_cast<std::size_t>(j)] = CVector::Unit(nv, e);
          slot.col(e) = kth_derivative_apply(f, x, vs);
        }
        CMatrix composed(t.cols(), nv);
        for (int e = 0; e < nv; ++e) composed.col(e) = pinv_apply(slot.col(e));
        Eigen::JacobiSVD<CMatrix> ssvd(composed, Eigen::ComputeThinV);
        CVector vopt = ssvd.matrixV().col(0);
        if (!complex_field) {
          for (int e = 0; e < nv; ++e) vopt[e] = Complex(vopt[e].real(), 0.0);
          const double nn = vopt.norm();
          if (nn == 0.0) continue;
          vopt /= nn;
        }
        best[static_cast<std::size_t>(j)] = vopt;
        std::vector<CVector> probe = best;
        const double val = pinv_apply(kth_derivative_apply(f, x, probe)).norm() / kfac;
        if (val > best_val) best_val = val;
      }
    }
    if (best_val > 0.0) gamma = std::max(gamma, std::pow(best_val, 1.0 / (k - 1)));
  }
  return gamma;
}

PolySystem construct_minimizer(const PolySystem& f, const UnitPoint& x) {
  if (f.field() != Field::Real) throw InputError("construct_minimizer expects a real system");
  const int q = f.q();
  const int nv = f.nvars();

  const CMatrix basis_c = tangent_basis(x);
  Eigen::MatrixXd basis = basis_c.real();
  Eigen::MatrixXd a = (full_derivative(f, x) * basis_c).real();
  for (int i = 0; i < q; ++i)
    a.row(i) /= std::sqrt(static_cast<double>(f.component(i).degree()));

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const int rankq = std::min<int>(q, static_cast<int>(a.cols()));
  const double sq = q <= static_cast<int>(a.cols()) ? svd.singularValues()(q - 1) : 0.0;
  const double s1 = svd.singularValues()(0);
  if (sq <= 1e-16 * std::max(1.0, s1)) return f;
  (void)rankq;

  // Rotate x to e_0 and the right singular frame to the coordinate axes.
  Eigen::MatrixXd rot(nv, nv);
  rot.col(0) = x.real_coords();
  Eigen::MatrixXd v = svd.matrixV();
  for (int j = 0; j < nv - 1; ++j) rot.col(j + 1) = basis * v.col(j);

  CMatrix rot_c = rot.cast<Complex>();
  PolySystem ft = f.compose_linear(rot_c);

  const Eigen::VectorXd fval = evaluate(f, x).real();
  const Eigen::VectorXd uq = svd.matrixU().col(q - 1);

  std::vector<HomogeneousPoly> comps;
  comps.reserve(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) {
    HomogeneousPoly gi = ft.component(i);
    const int d = gi.degree();
    std::vector<int> alpha(static_cast<std::size_t>(nv), 0);
    alpha[0] = d;
    gi.set_coefficient(alpha, gi.coefficient(alpha) - Complex(fval[i], 0.0));
    alpha[0] = d - 1;
    alpha[static_cast<std::size_t>(q)] = 1;
    const double coef = std::sqrt(static_cast<double>(d)) * uq[i] * sq;
    gi.set_coefficient(alpha, gi.coefficient(alpha) - Complex(coef, 0.0));
    comps.push_back(std::move(gi));
  }
  PolySystem gt(Field::Real, std::move(comps));
  return gt.compose_linear(rot_c.transpose());
}

double c1_sup_estimate(const PolySystem& f, int ell, bool degree_weighted) {
  if (f.field() != Field::Real) throw InputError("c1_sup_estimate expects a real system");
  const GridSpec spec = make_grid_spec(f.n(), ell);
  if (spec.point_count > max_stream_points())
    throw ResourceError("c1_sup_estimate grid exceeds the streaming cap");
  const RealJet jet(f);
  GridSweep sweep(spec);
  const std::int64_t blocks = sweep.default_blocks();
  std::vector<double> best(static_cast<std::size_t>(blocks), 0.0);
  std::vector<RealJet::Scratch> scratch(static_cast<std::size_t>(blocks));
  sweep.run_points(blocks, [&](std::int64_t blk, const Eigen::VectorXd& x) {
    auto& s = scratch[static_cast<std::size_t>(blk)];
    jet.eval(x, s);
    const double a2 = s.vals.squaredNorm();
    if (degree_weighted)
      for (int i = 0; i < jet.q; ++i)
        s.deriv.row(i) /= std::sqrt(static_cast<double>(jet.degrees[static_cast<std::size_t>(i)]));
    const double smax = projected_sigma_max(s.deriv, x);
    double& b = best[static_cast<std::size_t>(blk)];
    b = std::max(b, std::sqrt(a2 + smax * smax));
  });
  double out = 0.0;
  for (double v : best) out = std::max(out, v);
  return out;
}

}  // namespace nag
