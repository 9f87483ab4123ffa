#include <doctest.h>

#include <cmath>

#include "nag/norms.hpp"
#include "nag/rng.hpp"
#include "oracles.hpp"

using namespace nag;

namespace {

double monomial_sup(const std::vector<int>& alpha) {
  int d = 0;
  for (int a : alpha) d += a;
  double t = 1.0;
  for (int a : alpha)
    for (int e = 0; e < a; ++e) t *= static_cast<double>(a) / d;
  return std::sqrt(t);
}

PolySystem sum_of_squares(Field field, int n) {
  HomogeneousPoly p(n + 1, 2);
  for (int i = 0; i <= n; ++i) {
    std::vector<int> a(static_cast<std::size_t>(n) + 1, 0);
    a[static_cast<std::size_t>(i)] = 2;
    p.set_coefficient(a, 1.0);
  }
  return PolySystem(field, {std::move(p)});
}

}  // namespace

TEST_CASE("linf_norm_real: cosine family brackets 1") {
  for (int d = 2; d <= 6; ++d) {
    const PolySystem cd(Field::Real, {circle_cosine(d)});
    const CertifiedNorm norm = linf_norm_real(cd, 7);
    CHECK(norm.lower <= 1.0 + 1e-9);
    CHECK(norm.upper >= 1.0 - 1e-9);
    CHECK(norm.upper <= 1.0 / (1.0 - std::ldexp(1.0, -7)) + 1e-9);
    CHECK(norm.lower == doctest::Approx((1.0 - std::ldexp(1.0, -7)) * norm.upper));
  }
}

TEST_CASE("linf_norm_real: monomial closed form at small scale") {
  Rng rng(3);
  for (int n = 1; n <= 2; ++n) {
    for (int d = 1; d <= 4; ++d) {
      auto table = MonoTable::get(n + 1, d);
      for (std::int64_t r = 0; r < table->size(d); ++r) {
        std::vector<int> alpha(table->exps(d).begin() + r * (n + 1),
                               table->exps(d).begin() + (r + 1) * (n + 1));
        const PolySystem f = monomial_system(Field::Real, alpha);
        const CertifiedNorm norm = linf_norm_real(f, 7);
        const double truth = monomial_sup(alpha);
        CHECK(norm.lower <= truth * (1.0 + 1e-12));
        CHECK(norm.upper >= truth * (1.0 - 1e-12));
      }
    }
  }
  // X_0 X_1: exact value 1/2.
  const CertifiedNorm m = linf_norm_real(monomial_system(Field::Real, {1, 1}), 7);
  CHECK(m.lower <= 0.5);
  CHECK(m.upper >= 0.5);
}

TEST_CASE("linf_norm_real: zero polynomial and k'-scaling") {
  HomogeneousPoly zero(3, 3);
  const PolySystem f(Field::Real, {std::move(zero)});
  const CertifiedNorm norm = linf_norm_real(f, 5);
  CHECK(norm.upper == 0.0);
  CHECK(norm.lower == 0.0);
  CHECK_THROWS_AS(linf_norm_real(f, 0), InputError);
}

TEST_CASE("monomial fast path agrees with the dense sweep") {
  // Same system evaluated monomially and with a masking epsilon term that
  // forces the generic path; the brackets must agree to rounding.
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const int d = 1 + static_cast<int>(rng.next_u64() % 4);
    auto table = MonoTable::get(n + 1, d);
    const std::int64_t r =
        static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(table->size(d)));
    std::vector<int> alpha(table->exps(d).begin() + r * (n + 1),
                           table->exps(d).begin() + (r + 1) * (n + 1));
    const double c = rng.uniform(0.5, 2.0);
    const PolySystem mono = monomial_system(Field::Real, alpha, c);

    HomogeneousPoly dense(n + 1, d);
    dense.set_coefficient(alpha, c);
    // A second, zero-valued coefficient defeats the single-monomial check.
    HomogeneousPoly shadow = dense;
    std::vector<HomogeneousPoly> comps = {dense, shadow};
    comps[1].coefficients()[(r + 1) % table->size(d)] = 1e-300;
    const PolySystem densified(Field::Real, std::move(comps));

    const auto fast = linf_norm_real_components(mono, 6);
    const auto slow = linf_norm_real_components(densified, 6);
    CHECK(fast[0].upper == doctest::Approx(slow[1].upper).epsilon(1e-12));
  }
}

TEST_CASE("linf_norm_complex: monomial and cosine values") {
  const PolySystem f = monomial_system(Field::Complex, {1, 1});
  const CertifiedNorm norm = linf_norm_complex(f, 5);
  CHECK(norm.lower <= 0.5 * (1.0 + 1e-9));
  CHECK(norm.upper >= 0.5 * (1.0 - 1e-9));

  for (int d = 2; d <= 3; ++d) {
    const PolySystem cd(Field::Complex, {circle_cosine(d)});
    const CertifiedNorm c = linf_norm_complex(cd, 4);
    const double truth = std::pow(2.0, 0.5 * d - 1.0);
    CHECK(c.lower <= truth * (1.0 + 1e-9));
    CHECK(c.upper >= truth * (1.0 - 1e-9));
  }

  const PolySystem sq = sum_of_squares(Field::Complex, 1);
  const CertifiedNorm s = linf_norm_complex(sq, 4);
  CHECK(s.lower <= 1.0 + 1e-9);
  CHECK(s.upper >= 1.0 - 1e-9);
}

TEST_CASE("expand_abs_squared evaluates to |f(z)|^2") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const int d = 1 + static_cast<int>(rng.next_u64() % 3);
    const PolySystem f = oracle::random_complex_system(n, {d}, rng);
    const HomogeneousPoly sq = expand_abs_squared(f.component(0));
    const UnitPoint z = oracle::random_complex_point(n + 1, rng);
    CVector real_coords(2 * (n + 1));
    for (int j = 0; j <= n; ++j) {
      real_coords[j] = Complex(z.coords()[j].real(), 0.0);
      real_coords[n + 1 + j] = Complex(z.coords()[j].imag(), 0.0);
    }
    const double expect = std::norm(oracle::naive_eval(f.component(0), z.coords()));
    const double got = oracle::naive_eval(sq, real_coords).real();
    CHECK(got == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("lp_norm_mc: constant integrand and frozen integrals") {
  const PolySystem f = sum_of_squares(Field::Real, 2);
  const LpEstimate est = lp_norm_mc(f, 3.0, 500, 11);
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-12));

  const PolySystem fc = sum_of_squares(Field::Complex, 2);
  const LpEstimate c2 = lp_norm_mc(fc, 2.0, 4000, 13);
  const double truth = std::sqrt(2.0 / 4.0);
  CHECK(std::abs(c2.value - truth) <= 3.0 * c2.std_error + 1e-3);

  // E cos^2 = 1/2 on the circle.
  const PolySystem x0 = monomial_system(Field::Real, {1, 0});
  const LpEstimate l2 = lp_norm_mc(x0, 2.0, 4000, 17);
  CHECK(std::abs(l2.value - 1.0 / std::sqrt(2.0)) <= 3.0 * l2.std_error + 1e-3);

  CHECK_THROWS_AS(lp_norm_mc(f, 2.0, 50, 1), InputError);
}

TEST_CASE("scaled_directional_system: cosine identity") {
  Rng rng(19);
  for (int d = 2; d <= 5; ++d) {
    const PolySystem cd(Field::Real, {circle_cosine(d)});
    CVector v(2);
    v << Complex(rng.normal(), 0.0), Complex(rng.normal(), 0.0);
    const PolySystem g = scaled_directional_system(cd, v);
    HomogeneousPoly want(2, d - 1);
    want.coefficients() =
        v[0] * circle_cosine(d - 1).coefficients() - v[1] * circle_sine(d - 1).coefficients();
    CHECK((g.component(0).coefficients() - want.coefficients()).norm() <= 1e-12);
  }

  const PolySystem xd = monomial_system(Field::Real, {4, 0});
  CVector e0(2);
  e0 << 1.0, 0.0;
  const PolySystem gx = scaled_directional_system(xd, e0);
  CHECK(gx.component(0).degree() == 3);
  CHECK(gx.component(0).coefficient({3, 0}).real() == doctest::Approx(1.0));

  // Degree-1 inputs map to degree-0 constants.
  const PolySystem lin = monomial_system(Field::Real, {0, 1});
  const PolySystem glin = scaled_directional_system(lin, e0);
  CHECK(glin.component(0).degree() == 0);
  CHECK(std::abs(glin.component(0).coefficients()[0]) == 0.0);
}

TEST_CASE("Kellogg bound via certified norms") {
  Rng rng(23);
  const int k = 6;
  const double slack = (1.0 + std::ldexp(1.0, -k)) * (1.0 + std::ldexp(1.0, -k));
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const int q = 1 + static_cast<int>(rng.next_u64() % 2);
    std::vector<int> degrees;
    for (int i = 0; i < q; ++i) degrees.push_back(1 + static_cast<int>(rng.next_u64() % 3));
    const PolySystem f = oracle::random_real_system(n, degrees, rng);
    const auto vv = rng.sphere_point(n + 1);
    CVector v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = Complex(vv[static_cast<std::size_t>(i)] * 1.7, 0.0);
    const PolySystem g = scaled_directional_system(f, v);
    const double uf = linf_norm_real(f, k).upper;
    const double ug = linf_norm_real(g, k).upper;
    CHECK(ug <= uf * v.norm() * slack);
  }
}

TEST_CASE("linear_inf_norm: exact row norms") {
  const int n = 3;
  std::vector<HomogeneousPoly> comps;
  for (int i = 1; i <= n; ++i) {
    HomogeneousPoly p(n + 1, 1);
    std::vector<int> a(static_cast<std::size_t>(n) + 1, 0);
    a[static_cast<std::size_t>(i)] = 1;
    p.set_coefficient(a, 1.0);
    comps.push_back(std::move(p));
  }
  CHECK(linear_inf_norm(PolySystem(Field::Real, std::move(comps))) == doctest::Approx(1.0));

  HomogeneousPoly row(2, 1);
  row.set_coefficient({1, 0}, 3.0);
  row.set_coefficient({0, 1}, 4.0);
  CHECK(linear_inf_norm(PolySystem(Field::Real, {std::move(row)})) == doctest::Approx(5.0));

  CHECK_THROWS_AS(linear_inf_norm(monomial_system(Field::Real, {2, 0})), InputError);

  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const int nn = 1 + static_cast<int>(rng.next_u64() % 3);
    const PolySystem f = oracle::random_real_system(nn, {1, 1}, rng);
    const double exact = linear_inf_norm(f);
    const CertifiedNorm cert = linf_norm_real(f, 6);
    CHECK(cert.lower <= exact * (1.0 + 1e-12));
    CHECK(cert.upper >= exact * (1.0 - 1e-12));
  }
}

TEST_CASE("Prop 2.8 chain of p-means") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1;
    const int q = 1 + static_cast<int>(rng.next_u64() % 2);
    std::vector<int> degrees(static_cast<std::size_t>(q), 2);
    const PolySystem fr = oracle::random_real_system(n, degrees, rng);
    const double p1 = 2.0, p2 = 4.0;
    const LpEstimate a = lp_norm_mc(fr, p1, 3000, 100 + trial);
    const LpEstimate b = lp_norm_mc(fr, p2, 3000, 200 + trial);
    const double qa = std::pow(static_cast<double>(q), -1.0 / p1);
    const double qb = std::pow(static_cast<double>(q), -1.0 / p2);
    CHECK(qa * a.value <= qb * b.value + 3.0 * (qa * a.std_error + qb * b.std_error) + 1e-6);
    const CertifiedNorm inf_r = linf_norm_real(fr, 5);
    CHECK(qb * (b.value - 3.0 * b.std_error) <= inf_r.upper);

    // Real sup <= complex sup for the same coefficients.
    std::vector<HomogeneousPoly> comps = fr.components();
    const PolySystem fc(Field::Complex, std::move(comps));
    const CertifiedNorm inf_c = linf_norm_complex(fc, 3);
    CHECK(inf_r.lower <= inf_c.upper * (1.0 + 1e-9));
  }
}

TEST_CASE("Prop 2.9: Weyl norm is the scaled complex L2") {
  Rng rng(37);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const int d = 1 + static_cast<int>(rng.next_u64() % 2);
    const PolySystem f = oracle::random_complex_system(n, {d}, rng);
    const LpEstimate l2 = lp_norm_mc(f, 2.0, 20000, 300 + trial);
    const double scaled = std::sqrt(static_cast<double>(simplex_size(n + 1, d))) * l2.value;
    const double tol =
        3.0 * std::sqrt(static_cast<double>(simplex_size(n + 1, d))) * l2.std_error + 1e-6;
    CHECK(std::abs(scaled - weyl_norm(f)) <= tol + 0.02 * weyl_norm(f));
  }
}

TEST_CASE("Prop 2.10 and 2.11: sup-norm vs Weyl sandwiches") {
  Rng rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 3);
    const int d = 1 + static_cast<int>(rng.next_u64() % 4);
    const PolySystem f = oracle::random_real_system(n, {d}, rng);
    const CertifiedNorm norm = linf_norm_real(f, 5);
    const double w = weyl_norm(f);
    CHECK(norm.lower <= w * (1.0 + 1e-12));
    CHECK(w <= std::pow(static_cast<double>(n + 1), 0.5 * d) * norm.upper * (1.0 + 1e-12));
  }
}

TEST_CASE("Cor 2.20: scaled higher derivatives bounded by the sup-norm") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const int d = 2 + static_cast<int>(rng.next_u64() % 3);
    const PolySystem f = oracle::random_real_system(n, {d}, rng);
    const CertifiedNorm norm = linf_norm_real(f, 5);
    const UnitPoint x = oracle::random_real_point(n + 1, rng);
    const auto vv = rng.sphere_point(n + 1);
    CVector v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = Complex(vv[static_cast<std::size_t>(i)], 0.0);
    for (int k = 1; k <= d; ++k) {
      std::vector<CVector> vs(static_cast<std::size_t>(k), v);
      const CVector val = kth_derivative_apply(f, x, vs);
      double kfac = 1.0;
      for (int i = 2; i <= k; ++i) kfac *= i;
      const double lhs = std::abs(val[0]) / (kfac * d);
      const double rhs = (1.0 / k) * binomial(d - 1, k - 1) * norm.upper;
      CHECK(lhs <= rhs * (1.0 + 1e-9));
    }
  }
}
