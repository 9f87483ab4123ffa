#include <doctest.h>

#include <cmath>

#include "nag/condition.hpp"
#include "nag/rng.hpp"
#include "oracles.hpp"

using namespace nag;

namespace {

PolySystem coordinate_system(int n) {
  std::vector<HomogeneousPoly> comps;
  for (int i = 1; i <= n; ++i) {
    HomogeneousPoly p(n + 1, 1);
    std::vector<int> a(static_cast<std::size_t>(n) + 1, 0);
    a[static_cast<std::size_t>(i)] = 1;
    p.set_coefficient(a, 1.0);
    comps.push_back(std::move(p));
  }
  return PolySystem(Field::Real, std::move(comps));
}

UnitPoint e0(int nvars) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nvars);
  x[0] = 1.0;
  return UnitPoint::real(x);
}

/// Coefficients quantized to 2^-20 so that multiplication by small integers
/// is exact in double precision.
PolySystem dyadic_system(int n, const std::vector<int>& degrees, Rng& rng) {
  std::vector<HomogeneousPoly> comps;
  for (int d : degrees) {
    HomogeneousPoly p(n + 1, d);
    for (std::int64_t r = 0; r < p.coefficients().size(); ++r)
      p.coefficients()[r] =
          Complex(std::round(rng.normal() * 1048576.0) / 1048576.0, 0.0);
    comps.push_back(std::move(p));
  }
  return PolySystem(Field::Real, std::move(comps));
}

}  // namespace

TEST_CASE("kappa_local: coordinate system, singular input, exact scaling") {
  for (int n = 1; n <= 3; ++n) {
    const ConditionReport rep = kappa_local(coordinate_system(n), e0(n + 1));
    CHECK(rep.value == doctest::Approx(std::sqrt(static_cast<double>(n))).epsilon(1e-12));
  }

  // X_1^2 on the circle: value and derivative both vanish at e_0.
  const PolySystem sing = monomial_system(Field::Real, {0, 2});
  const ConditionReport s = kappa_local(sing, e0(2));
  CHECK(std::isinf(s.value));
  CHECK(s.residual_branch == "singular");

  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const PolySystem f = dyadic_system(n, {2}, rng);
    if (std_norm(f) == 0.0) continue;
    const UnitPoint x = oracle::random_real_point(n + 1, rng);
    const PolySystem f3 = Complex(3.0, 0.0) * f;
    CHECK(kappa_local(f, x).value == kappa_local(f3, x).value);
  }
}

TEST_CASE("K_local: linear case, cosine extremum, K >= 1") {
  const int k = 7;
  const double up = 1.0 / (1.0 - std::ldexp(1.0, -k));
  for (int n = 1; n <= 3; ++n) {
    const PolySystem f = coordinate_system(n);
    const CertifiedNorm norm = linf_norm_real(f, k);
    const ConditionReport rep = K_local(f, e0(n + 1), norm);
    const double sn = std::sqrt(static_cast<double>(n));
    CHECK(rep.value >= sn * (1.0 - 1e-12));
    CHECK(rep.value <= sn * up * (1.0 + 1e-12));
    CHECK(rep.sigma_q == doctest::Approx(1.0).epsilon(1e-12));
  }

  for (int d = 2; d <= 5; ++d) {
    const PolySystem cd(Field::Real, {circle_cosine(d)});
    const CertifiedNorm norm = linf_norm_real(cd, k);
    const ConditionReport rep = K_local(cd, e0(2), norm);
    CHECK(rep.value >= 1.0);
    CHECK(rep.value <= up * (1.0 + 1e-12));
    CHECK(rep.residual_branch == "value");
  }

  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const int q = 1 + static_cast<int>(rng.next_u64() % 2);
    std::vector<int> degrees;
    for (int i = 0; i < q; ++i) degrees.push_back(1 + static_cast<int>(rng.next_u64() % 3));
    const PolySystem f = oracle::random_real_system(n, degrees, rng);
    const UnitPoint x = oracle::random_real_point(n + 1, rng);
    const CertifiedNorm norm = linf_norm_real(f, 4);
    const ConditionReport rep = K_local(f, x, norm);
    CHECK(rep.value >= 1.0);
    // Regularity: the reported branch is the max, and value * denominator
    // reproduces sqrt(q) * Q exactly.
    CHECK(rep.value == std::sqrt(static_cast<double>(q)) * norm.upper / rep.denominator);
    if (rep.residual_branch == "sigma") CHECK(rep.denominator == rep.sigma_q);
  }
}

TEST_CASE("mu_norm: linear case, rank deficiency, unitary invariance") {
  std::vector<HomogeneousPoly> comps;
  const int n = 3;
  for (int i = 1; i <= n; ++i) {
    HomogeneousPoly p(n + 1, 1);
    std::vector<int> a(static_cast<std::size_t>(n) + 1, 0);
    a[static_cast<std::size_t>(i)] = 1;
    p.set_coefficient(a, 1.0);
    comps.push_back(std::move(p));
  }
  const PolySystem f(Field::Complex, std::move(comps));
  CVector z = CVector::Zero(n + 1);
  z[0] = 1.0;
  const UnitPoint zp(Field::Complex, z);
  CHECK(mu_norm(f, zp).value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

  // Rank-deficient derivative.
  std::vector<HomogeneousPoly> dc;
  dc.push_back(f.component(0));
  dc.push_back(f.component(0));
  const PolySystem fdef(Field::Complex, std::move(dc));
  CHECK(std::isinf(mu_norm(fdef, zp).value));

  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int nn = 2;
    const PolySystem g = oracle::random_complex_system(nn, {2, 3}, rng);
    const UnitPoint w = oracle::random_complex_point(nn + 1, rng);
    const CMatrix u = oracle::random_unitary(nn + 1, rng);
    const PolySystem gu = g.compose_linear(u);
    const UnitPoint wu =
        UnitPoint::normalized(Field::Complex, u.adjoint() * w.coords());
    const double a = mu_norm(g, w).value;
    const double b = mu_norm(gu, wu).value;
    CHECK(std::abs(a - b) <= 1e-8 * a);
  }
}

TEST_CASE("M_local: linear case, M >= 1, M/mu sandwich") {
  const int n = 3;
  std::vector<HomogeneousPoly> comps;
  for (int i = 1; i <= n; ++i) {
    HomogeneousPoly p(n + 1, 1);
    std::vector<int> a(static_cast<std::size_t>(n) + 1, 0);
    a[static_cast<std::size_t>(i)] = 1;
    p.set_coefficient(a, 1.0);
    comps.push_back(std::move(p));
  }
  const PolySystem f(Field::Complex, std::move(comps));
  CVector z = CVector::Zero(n + 1);
  z[0] = 1.0;
  const UnitPoint zp(Field::Complex, z);
  const double exact_norm = 1.0;  // max row 2-norm of the identity rows
  const ConditionReport rep = M_local(f, zp, exact_norm);
  CHECK(rep.value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const int nn = 1;  // certified complex norms are desk-feasible on S^3 only
    std::vector<int> degrees = {1 + static_cast<int>(rng.next_u64() % 2)};
    const PolySystem g = oracle::random_complex_system(nn, degrees, rng);
    const UnitPoint w = oracle::random_complex_point(nn + 1, rng);
    const CertifiedNorm norm = linf_norm_complex(g, 3);
    const ConditionReport m = M_local(g, w, norm.upper, norm.lower);
    CHECK(m.value >= 1.0 - 1e-12);

    // Sandwich against mu_norm: sqrt(q) r <= M/mu <= sqrt(q) sqrt(D) r with
    // r = ||g||_inf^C / ||g||_W, via the certified brackets for r.
    const ConditionReport mu = mu_norm(g, w);
    if (std::isfinite(m.value) && std::isfinite(mu.value)) {
      const double w_norm = weyl_norm(g);
      const double q = static_cast<double>(g.q());
      const double dmax = static_cast<double>(g.max_degree());
      const double ratio = m.value / mu.value;
      CHECK(ratio >= std::sqrt(q) * norm.lower / w_norm * (1.0 - 1e-9));
      CHECK(ratio <= std::sqrt(q * dmax) * norm.upper / w_norm * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("K_estimate: coordinate system matches the dense-scan oracle") {
  for (int n = 1; n <= 2; ++n) {
    const PolySystem f = coordinate_system(n);
    const KEstimate est = K_estimate(f, 7, -1);
    REQUIRE(!est.failed);
    // Oracle: K(f) = sqrt(2n) (max{sqrt(1-t^2), t} is minimized at 1/sqrt 2),
    // confirmed by a dense scan below.
    const double truth = std::sqrt(2.0 * n);
    CHECK(0.99 * est.K_hat <= truth * 1.001);
    CHECK(truth <= est.K_hat * 1.001);

    double scan = 0.0;
    Rng rng(13);
    const CertifiedNorm norm = linf_norm_real(f, 8);
    for (int s = 0; s < 20000; ++s) {
      const UnitPoint x = oracle::random_real_point(n + 1, rng);
      scan = std::max(scan, K_local(f, x, norm).value);
    }
    CHECK(scan <= est.K_hat * 1.001);
  }
}

TEST_CASE("K_estimate: singular zero fails for any finite b") {
  const PolySystem sing = monomial_system(Field::Real, {0, 2});
  const KEstimate est = K_estimate(sing, 4, 6);
  CHECK(est.failed);
}

TEST_CASE("K_estimate: cosine polynomial against the circle-scan oracle") {
  const PolySystem c3(Field::Real, {circle_cosine(3)});
  const KEstimate est = K_estimate(c3, 7, -1);
  REQUIRE(!est.failed);
  // Dense scan: K(c_3) = max_theta 1 / max{|cos 3t|, |sin 3t|} = sqrt(2).
  double scan = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const double th = 2.0 * M_PI * i / 1000000.0;
    const double denom = std::max(std::abs(std::cos(3 * th)), std::abs(std::sin(3 * th)));
    scan = std::max(scan, 1.0 / denom);
  }
  CHECK(scan <= est.K_hat * (1.0 + 1e-6));
  CHECK(0.99 * est.K_hat <= scan * (1.0 + 0.02));
}

TEST_CASE("smale_gamma: linear systems and the bilinear example") {
  const PolySystem lin = coordinate_system(2);
  CHECK(smale_gamma(lin, e0(3)) == 0.0);

  // X_0 X_1 at e_0 (q = 1, n = 1): gamma = 1/2 from the explicit Hessian.
  const PolySystem b = monomial_system(Field::Real, {1, 1});
  const double g = smale_gamma(b, e0(2), 400, 1);
  CHECK(g == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("higher derivative estimate") {
  Rng rng(17);
  int tested = 0;
  for (int trial = 0; trial < 60 && tested < 15; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const int d = 2 + static_cast<int>(rng.next_u64() % 2);
    const PolySystem f = oracle::random_real_system(n, {d}, rng);
    const UnitPoint x = oracle::random_real_point(n + 1, rng);
    const CertifiedNorm norm = linf_norm_real(f, 5);
    const ConditionReport K = K_local(f, x, norm);
    if (!std::isfinite(K.value)) continue;
    const double resid = evaluate(f, x).norm();
    // Hypothesis as printed (no sqrt(q)), with the certified lower bound.
    if (K.value * resid / norm.lower >= 1.0) continue;
    ++tested;
    const double gamma = smale_gamma(f, x, 200, 100 + trial);
    CHECK(gamma <= 0.5 * (d - 1) * K.value * (1.0 + 1e-9));
  }
  CHECK(tested >= 10);
}

TEST_CASE("dist_to_sigma: examples") {
  // Singular input: distance zero.
  const PolySystem sing = monomial_system(Field::Real, {0, 2});
  CHECK(dist_to_sigma(sing, e0(2)) <= 1e-12);

  for (int n = 1; n <= 3; ++n)
    CHECK(dist_to_sigma(coordinate_system(n), e0(n + 1)) == doctest::Approx(1.0).epsilon(1e-12));

  // One-component model a X_0^d + sqrt(d) b X_0^{d-1} X_1.
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng.next_u64() % 3);
    const double a = rng.normal();
    const double b = rng.normal();
    HomogeneousPoly p(2, d);
    std::vector<int> ai(2, 0);
    ai[0] = d;
    p.set_coefficient(ai, a);
    ai[0] = d - 1;
    ai[1] = 1;
    p.set_coefficient(ai, std::sqrt(static_cast<double>(d)) * b);
    const PolySystem m(Field::Real, {std::move(p)});
    const double dist = dist_to_sigma(m, e0(2));
    CHECK(dist == doctest::Approx(std::hypot(a, b)).epsilon(1e-10));
    CHECK(weyl_norm(m) == doctest::Approx(std::hypot(a, b)).epsilon(1e-10));
  }

  // dist = ||f||_W / kappa by construction.
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const PolySystem f = oracle::random_real_system(n, {2}, rng);
    const UnitPoint x = oracle::random_real_point(n + 1, rng);
    const ConditionReport kap = kappa_local(f, x);
    if (!std::isfinite(kap.value)) continue;
    CHECK(dist_to_sigma(f, x) == doctest::Approx(weyl_norm(f) / kap.value).epsilon(1e-9));
  }
}

TEST_CASE("construct_minimizer: exactness and optimality search") {
  Rng rng(23);
  // Singular at x already: returns f.
  const PolySystem sing = monomial_system(Field::Real, {0, 2});
  const PolySystem same = construct_minimizer(sing, e0(2));
  CHECK((same.component(0).coefficients() - sing.component(0).coefficients()).norm() == 0.0);

  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const int q = 1 + static_cast<int>(rng.next_u64() % std::min(2, n));
    std::vector<int> degrees;
    for (int i = 0; i < q; ++i) degrees.push_back(1 + static_cast<int>(rng.next_u64() % 3));
    const PolySystem f = oracle::random_real_system(n, degrees, rng);
    const UnitPoint x = oracle::random_real_point(n + 1, rng);
    const PolySystem g = construct_minimizer(f, x);
    const double resid = evaluate(g, x).norm();
    CHECK(resid <= 1e-9 * std::max(1.0, std_norm(f)));
    CHECK(scaled_sigma_q(g, x, 0.5) <= 1e-9 * std::max(1.0, std_norm(f)));
    const double dist = dist_to_sigma(f, x);
    CHECK(weyl_norm(f - g) == doctest::Approx(dist).epsilon(1e-9));

    // No random singular perturbation does better.
    for (int probe = 0; probe < 25; ++probe) {
      const PolySystem h = oracle::random_real_system(n, degrees, rng);
      const PolySystem hs = construct_minimizer(h, x);
      CHECK(weyl_norm(f - hs) >= dist * (1.0 - 1e-9));
    }
  }

  // Linear case: distance 1 with rank-deficient derivative at e_0.
  const PolySystem lin = coordinate_system(2);
  const PolySystem glin = construct_minimizer(lin, e0(3));
  CHECK(weyl_norm(lin - glin) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(evaluate(glin, e0(3)).norm() <= 1e-10);
}

TEST_CASE("Lipschitz properties of K") {
  Rng rng(29);
  const int k = 5;
  const double slack = 1.0 + std::ldexp(1.0, -5);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const int q = 1 + static_cast<int>(rng.next_u64() % 2);
    std::vector<int> degrees;
    for (int i = 0; i < q; ++i) degrees.push_back(1 + static_cast<int>(rng.next_u64() % 3));
    const PolySystem f = oracle::random_real_system(n, degrees, rng);
    const PolySystem g = oracle::random_real_system(n, degrees, rng);
    const UnitPoint x = oracle::random_real_point(n + 1, rng);
    const UnitPoint y = oracle::random_real_point(n + 1, rng);
    const CertifiedNorm nf = linf_norm_real(f, k);
    const CertifiedNorm ng = linf_norm_real(g, k);
    const CertifiedNorm nfg = linf_norm_real(f - g, k);

    // 1st: |Q_f/K_f - Q_g/K_g| = |den_f - den_g| / sqrt(q) <= ||f-g||_inf.
    const ConditionReport kf = K_local(f, x, nf);
    const ConditionReport kg = K_local(g, x, ng);
    const double lhs1 = std::abs(nf.upper / kf.value - ng.upper / kg.value);
    CHECK(lhs1 <= nfg.upper * slack);

    // 2nd: |1/K(f,x) - 1/K(f,y)| <= D dist_S(x,y).
    const ConditionReport kfy = K_local(f, y, nf);
    const double chord = (x.real_coords() - y.real_coords()).norm();
    const double geo = 2.0 * std::asin(std::min(1.0, chord / 2.0));
    const int dmax = f.max_degree();
    CHECK(std::abs(1.0 / kf.value - 1.0 / kfy.value) <= dmax * geo * slack);
  }
}

TEST_CASE("Prop 3.6 perturbation sandwich for M") {
  Rng rng(31);
  const int knorm = 3;
  const double cert = 1.0 + std::ldexp(1.0, -knorm);
  const double eps = 0.5;
  int done = 0;
  for (int trial = 0; trial < 12 && done < 6; ++trial) {
    const int n = 1;
    const PolySystem f = oracle::random_complex_system(n, {2}, rng);
    const UnitPoint z = oracle::random_complex_point(n + 1, rng);
    const CertifiedNorm nf = linf_norm_complex(f, knorm);
    const ConditionReport m0 = M_local(f, z, nf.upper, nf.lower);
    if (!std::isfinite(m0.value) || m0.value > 50.0) continue;

    // Perturbation sized from the hypothesis, with certified slack to spare.
    const PolySystem dir = oracle::random_complex_system(n, {2}, rng);
    const double du = linf_norm_complex(dir, knorm).upper;
    const double scale = eps / 4.0 * nf.lower / (2.0 * du * m0.value) * 0.5;
    const PolySystem ft = f + Complex(scale, 0.0) * dir;

    const double move = eps / (4.0 * 2.0 * m0.value) * 0.5;
    CVector tangent = oracle::random_complex_point(n + 1, rng).coords();
    tangent -= z.coords() * (z.coords().dot(tangent));
    if (tangent.norm() < 1e-6) continue;
    tangent.normalize();
    const UnitPoint zt = UnitPoint::normalized(
        Field::Complex, std::cos(move) * z.coords() + std::sin(move) * tangent);

    const CertifiedNorm nft = linf_norm_complex(ft, knorm);
    const ConditionReport m1 = M_local(ft, zt, nft.upper, nft.lower);
    if (!std::isfinite(m1.value)) continue;
    ++done;
    CHECK(m1.value <= (1.0 + eps) * m0.value * cert * cert);
    CHECK(m1.value >= m0.value / (1.0 + eps) / (cert * cert));
  }
  CHECK(done >= 4);
}

TEST_CASE("Prop 4.27 sandwich for K/kappa") {
  Rng rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const int q = 1 + static_cast<int>(rng.next_u64() % 2);
    std::vector<int> degrees;
    for (int i = 0; i < q; ++i) degrees.push_back(1 + static_cast<int>(rng.next_u64() % 4));
    const PolySystem f = oracle::random_real_system(n, degrees, rng);
    const UnitPoint x = oracle::random_real_point(n + 1, rng);
    const int k = 4;
    const CertifiedNorm norm = linf_norm_real(f, k);
    const ConditionReport K = K_local(f, x, norm);
    const ConditionReport kap = kappa_local(f, x);
    if (!std::isfinite(K.value) || !std::isfinite(kap.value)) continue;
    const double w = weyl_norm(f);
    const double ratio = K.value / kap.value;
    const int dmax = f.max_degree();
    const double kslack = 1.0 / (1.0 - std::ldexp(1.0, -k));
    CHECK(ratio >= norm.lower / w * (1.0 - 1e-9));
    CHECK(ratio <= std::sqrt(2.0 * q * dmax) * norm.upper * kslack / w * (1.0 + 1e-9));
  }
}

TEST_CASE("C1 functional chains (pointwise closed forms)") {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const int q = 1 + static_cast<int>(rng.next_u64() % 2);
    std::vector<int> degrees;
    for (int i = 0; i < q; ++i) degrees.push_back(1 + static_cast<int>(rng.next_u64() % 3));
    const PolySystem f = oracle::random_real_system(n, degrees, rng);
    const UnitPoint x = oracle::random_real_point(n + 1, rng);
    const int dmax = f.max_degree();

    // Thm 6.8 chain at the point.
    const double dw = dist_to_sigma(f, x);
    const double dc = dist_to_sigma_c1(f, x);
    CHECK(dc / std::sqrt(static_cast<double>(dmax)) <= dw * (1.0 + 1e-12));
    CHECK(dw <= dc * (1.0 + 1e-12));
  }

  // Grid-max functional chain: sup-norm <= weighted C1 <= plain C1, and the
  // weighted estimate stays below the Weyl norm.
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 1;
    const int q = 1 + static_cast<int>(rng.next_u64() % 2);
    std::vector<int> degrees;
    for (int i = 0; i < q; ++i) degrees.push_back(1 + static_cast<int>(rng.next_u64() % 3));
    const PolySystem f = oracle::random_real_system(n, degrees, rng);
    const int ell = 6;
    const double est_c1 = c1_sup_estimate(f, ell, false);
    const double est_c1d = c1_sup_estimate(f, ell, true);
    const double sup_lower = linf_norm_real(f, 5).lower;
    const int dmax = f.max_degree();
    const int qq = f.q();
    CHECK(est_c1 / std::sqrt(2.0 * qq * dmax) <= sup_lower * (1.0 + 0.05) + 1e-12);
    CHECK(est_c1d <= est_c1 * (1.0 + 1e-12));
    CHECK(est_c1d <= weyl_norm(f) * (1.0 + 1e-12));
    CHECK(sup_lower <= est_c1d * (1.0 + 0.05));
  }
}

TEST_CASE("Prop 3.4 one-sided lower inequality") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const PolySystem f = oracle::random_real_system(n, {2}, rng);
    const UnitPoint x = oracle::random_real_point(n + 1, rng);
    const CertifiedNorm nf = linf_norm_real(f, 5);
    const ConditionReport K = K_local(f, x, nf);
    if (!std::isfinite(K.value)) continue;
    const PolySystem g = construct_minimizer(f, x);
    const CertifiedNorm diff = linf_norm_real(f - g, 5);
    if (diff.upper == 0.0) continue;
    CHECK(K.value * (1.0 + 1e-9) >= nf.lower / diff.upper);
  }
}
