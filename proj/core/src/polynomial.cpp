#include "nag/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace nag {

namespace {

std::shared_ptr<const MonoTable> table_for(int nvars, int deg) {
  return MonoTable::get(nvars, std::max(deg, 1));
}

}  // namespace

// --- UnitPoint ---------------------------------------------------------------

UnitPoint::UnitPoint(Field field, CVector coords) : field_(field), coords_(std::move(coords)) {
  if (coords_.size() < 2) throw InputError("UnitPoint needs at least 2 coordinates");
  const double nrm = coords_.norm();
  if (std::abs(nrm - 1.0) > 1e-12)
    throw InputError("UnitPoint norm deviates from 1 beyond 1e-12: " + std::to_string(nrm));
  if (field_ == Field::Real && coords_.imag().cwiseAbs().maxCoeff() != 0.0)
    throw InputError("real UnitPoint has nonzero imaginary part");
}

UnitPoint UnitPoint::real(const Eigen::VectorXd& x) {
  CVector z(x.size());
  z.real() = x;
  z.imag().setZero();
  return UnitPoint(Field::Real, std::move(z));
}

UnitPoint UnitPoint::normalized(Field field, CVector coords) {
  const double nrm = coords.norm();
  if (nrm == 0.0) throw InputError("cannot normalize the zero vector");
  coords /= nrm;
  return UnitPoint(field, std::move(coords));
}

// --- HomogeneousPoly ---------------------------------------------------------

HomogeneousPoly::HomogeneousPoly(int nvars, int degree) : nvars_(nvars), degree_(degree) {
  if (nvars < 1 || degree < 0) throw InputError("invalid polynomial shape");
  coef_ = CVector::Zero(simplex_size(nvars, degree));
}

Complex HomogeneousPoly::coefficient(const std::vector<int>& alpha) const {
  if (static_cast<int>(alpha.size()) != nvars_) throw InputError("exponent length mismatch");
  int sum = 0;
  for (int a : alpha) sum += a;
  if (sum != degree_) throw InputError("exponent degree mismatch");
  return coef_[monomial_rank(nvars_, degree_, alpha.data())];
}

void HomogeneousPoly::set_coefficient(const std::vector<int>& alpha, Complex value) {
  if (static_cast<int>(alpha.size()) != nvars_) throw InputError("exponent length mismatch");
  int sum = 0;
  for (int a : alpha) {
    if (a < 0) throw InputError("negative exponent");
    sum += a;
  }
  if (sum != degree_) throw InputError("exponent degree mismatch");
  coef_[monomial_rank(nvars_, degree_, alpha.data())] = value;
}

Complex HomogeneousPoly::eval(const CVector& x) const {
  if (x.size() != nvars_) throw InputError("evaluation point dimension mismatch");
  auto table = table_for(nvars_, degree_);
  thread_local std::vector<std::vector<Complex>> scratch;
  table->eval_all_complex(x.data(), degree_, scratch);
  const auto& mono = scratch[degree_];
  Complex acc(0.0, 0.0);
  for (std::int64_t r = 0; r < coef_.size(); ++r) acc += coef_[r] * mono[static_cast<std::size_t>(r)];
  return acc;
}

double HomogeneousPoly::eval_real(const Eigen::VectorXd& x) const {
  if (x.size() != nvars_) throw InputError("evaluation point dimension mismatch");
  auto table = table_for(nvars_, degree_);
  thread_local std::vector<std::vector<double>> scratch;
  table->eval_all(x.data(), degree_, scratch);
  const auto& mono = scratch[degree_];
  double acc = 0.0;
  for (std::int64_t r = 0; r < coef_.size(); ++r)
    acc += coef_[r].real() * mono[static_cast<std::size_t>(r)];
  return acc;
}

HomogeneousPoly HomogeneousPoly::partial(int j) const {
  if (degree_ == 0) return HomogeneousPoly(nvars_, 0);
  HomogeneousPoly out(nvars_, degree_ - 1);
  auto table = table_for(nvars_, degree_);
  const auto& exps = table->exps(degree_);
  std::vector<int> beta(nvars_);
  for (std::int64_t r = 0; r < coef_.size(); ++r) {
    const int* alpha = exps.data() + static_cast<std::size_t>(r) * nvars_;
    if (alpha[j] == 0) continue;
    for (int v = 0; v < nvars_; ++v) beta[v] = alpha[v];
    beta[j] -= 1;
    out.coef_[monomial_rank(nvars_, degree_ - 1, beta.data())] +=
        coef_[r] * static_cast<double>(alpha[j]);
  }
  return out;
}

HomogeneousPoly HomogeneousPoly::directional_derivative(const CVector& v) const {
  HomogeneousPoly out(nvars_, degree_ > 0 ? degree_ - 1 : 0);
  for (int j = 0; j < nvars_; ++j) {
    if (v[j] == Complex(0.0, 0.0)) continue;
    HomogeneousPoly pj = partial(j);
    out.coef_ += v[j] * pj.coef_;
  }
  return out;
}

HomogeneousPoly poly_mul(const HomogeneousPoly& a, const HomogeneousPoly& b) {
  if (a.nvars() != b.nvars()) throw InputError("poly_mul variable mismatch");
  const int nvars = a.nvars();
  const int dc = a.degree() + b.degree();
  HomogeneousPoly out(nvars, dc);
  auto ta = table_for(nvars, a.degree());
  auto tb = table_for(nvars, b.degree());
  const auto& ea = ta->exps(a.degree());
  const auto& eb = tb->exps(b.degree());
  std::vector<int> gamma(nvars);
  for (std::int64_t ra = 0; ra < a.coefficients().size(); ++ra) {
    const Complex ca = a.coefficients()[ra];
    if (ca == Complex(0.0, 0.0)) continue;
    const int* aa = ea.data() + static_cast<std::size_t>(ra) * nvars;
    for (std::int64_t rb = 0; rb < b.coefficients().size(); ++rb) {
      const Complex cb = b.coefficients()[rb];
      if (cb == Complex(0.0, 0.0)) continue;
      const int* ab = eb.data() + static_cast<std::size_t>(rb) * nvars;
      for (int v = 0; v < nvars; ++v) gamma[v] = aa[v] + ab[v];
      out.coefficients()[monomial_rank(nvars, dc, gamma.data())] += ca * cb;
    }
  }
  return out;
}

HomogeneousPoly HomogeneousPoly::compose_linear(const CMatrix& a) const {
  if (a.rows() != nvars_ || a.cols() != nvars_) throw InputError("compose_linear shape mismatch");
  // Row polynomials L_j(X) = sum_k a(j,k) X_k; substitute and expand.
  std::vector<HomogeneousPoly> rows;
  rows.reserve(nvars_);
  for (int j = 0; j < nvars_; ++j) {
    HomogeneousPoly lin(nvars_, 1);
    for (int k = 0; k < nvars_; ++k) {
      std::vector<int> e(nvars_, 0);
      e[k] = 1;
      lin.set_coefficient(e, a(j, k));
    }
    rows.push_back(std::move(lin));
  }
  HomogeneousPoly out(nvars_, degree_);
  auto table = table_for(nvars_, degree_);
  const auto& exps = table->exps(degree_);
  for (std::int64_t r = 0; r < coef_.size(); ++r) {
    if (coef_[r] == Complex(0.0, 0.0)) continue;
    const int* alpha = exps.data() + static_cast<std::size_t>(r) * nvars_;
    HomogeneousPoly term(nvars_, 0);
    term.coefficients()[0] = coef_[r];
    for (int j = 0; j < nvars_; ++j)
      for (int rep = 0; rep < alpha[j]; ++rep) term = poly_mul(term, rows[j]);
    out.coef_ += term.coefficients();
  }
  return out;
}

HomogeneousPoly HomogeneousPoly::conjugate_coefficients() const {
  HomogeneousPoly out(nvars_, degree_);
  out.coef_ = coef_.conjugate();
  return out;
}

// --- PolySystem ---------------------------------------------------------------

PolySystem::PolySystem(Field field, std::vector<HomogeneousPoly> components)
    : field_(field), components_(std::move(components)) {
  if (components_.empty()) throw InputError("PolySystem needs q >= 1 components");
  const int nv = components_[0].nvars();
  for (const auto& c : components_)
    if (c.nvars() != nv) throw InputError("PolySystem components must share variables");
}

std::vector<int> PolySystem::degrees() const {
  std::vector<int> d;
  d.reserve(components_.size());
  for (const auto& c : components_) d.push_back(c.degree());
  return d;
}

int PolySystem::max_degree() const {
  int d = 0;
  for (const auto& c : components_) d = std::max(d, c.degree());
  return d;
}

std::int64_t PolySystem::basis_dimension() const {
  std::int64_t n = 0;
  for (const auto& c : components_) n += simplex_size(nvars(), c.degree());
  return n;
}

PolySystem PolySystem::compose_linear(const CMatrix& a) const {
  std::vector<HomogeneousPoly> comps;
  comps.reserve(components_.size());
  for (const auto& c : components_) comps.push_back(c.compose_linear(a));
  return PolySystem(field_, std::move(comps));
}

double PolySystem::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& c : components_)
    for (std::int64_t r = 0; r < c.coefficients().size(); ++r)
      m = std::max(m, std::abs(c.coefficients()[r]));
  return m;
}

PolySystem operator*(Complex s, const PolySystem& f) {
  std::vector<HomogeneousPoly> comps = f.components();
  for (auto& c : comps) c *= s;
  return PolySystem(f.field(), std::move(comps));
}

namespace {
PolySystem combine(const PolySystem& a, const PolySystem& b, Complex ca, Complex cb) {
  if (a.q() != b.q() || a.nvars() != b.nvars()) throw InputError("system shape mismatch");
  std::vector<HomogeneousPoly> comps;
  comps.reserve(a.q());
  for (int i = 0; i < a.q(); ++i) {
    if (a.component(i).degree() != b.component(i).degree())
      throw InputError("system degree mismatch");
    HomogeneousPoly c(a.nvars(), a.component(i).degree());
    c.coefficients() =
        ca * a.component(i).coefficients() + cb * b.component(i).coefficients();
    comps.push_back(std::move(c));
  }
  return PolySystem(a.field(), std::move(comps));
}
}  // namespace

PolySystem operator+(const PolySystem& a, const PolySystem& b) { return combine(a, b, 1.0, 1.0); }
PolySystem operator-(const PolySystem& a, const PolySystem& b) { return combine(a, b, 1.0, -1.0); }
PolySystem segment_point(const PolySystem& f, const PolySystem& g, double t) {
  return combine(f, g, t, 1.0 - t);
}

// --- operations ----------------------------------------------------------------

CVector evaluate(const PolySystem& f, const UnitPoint& x) {
  if (x.coords().size() != f.nvars()) throw InputError("point dimension does not match system");
  auto table = table_for(f.nvars(), f.max_degree());
  thread_local std::vector<std::vector<Complex>> scratch;
  table->eval_all_complex(x.coords().data(), f.max_degree(), scratch);
  CVector out(f.q());
  for (int i = 0; i < f.q(); ++i) {
    const auto& c = f.component(i).coefficients();
    const auto& mono = scratch[f.component(i).degree()];
    Complex acc(0.0, 0.0);
    for (std::int64_t r = 0; r < c.size(); ++r) acc += c[r] * mono[static_cast<std::size_t>(r)];
    out[i] = acc;
  }
  return out;
}

CMatrix full_derivative(const PolySystem& f, const UnitPoint& x) {
  if (x.coords().size() != f.nvars()) throw InputError("point dimension does not match system");
  CMatrix out(f.q(), f.nvars());
  for (int i = 0; i < f.q(); ++i)
    for (int j = 0; j < f.nvars(); ++j)
      out(i, j) = f.component(i).partial(j).eval(x.coords());
  return out;
}

CMatrix tangent_basis(const UnitPoint& x) {
  const int nv = static_cast<int>(x.coords().size());
  const CVector& z = x.coords();
  Complex phase(1.0, 0.0);
  if (z[0] != Complex(0.0, 0.0)) phase = z[0] / std::abs(z[0]);
  CVector u = z;
  u[0] += phase;
  const double u2 = u.squaredNorm();
  CMatrix basis(nv, nv - 1);
  for (int j = 1; j < nv; ++j) {
    CVector col = CVector::Zero(nv);
    col[j] = 1.0;
    col -= (2.0 * std::conj(u[j]) / u2) * u;
    basis.col(j - 1) = col;
  }
  return basis;
}

CMatrix tangent_derivative(const PolySystem& f, const UnitPoint& x) {
  return full_derivative(f, x) * tangent_basis(x);
}

CVector kth_derivative_apply(const PolySystem& f, const UnitPoint& x,
                             const std::vector<CVector>& vectors) {
  std::vector<HomogeneousPoly> cur = f.components();
  for (const auto& v : vectors) {
    if (v.size() != f.nvars()) throw InputError("direction dimension mismatch");
    for (auto& c : cur) c = c.directional_derivative(v);
  }
  CVector out(f.q());
  for (int i = 0; i < f.q(); ++i) out[i] = cur[i].eval(x.coords());
  return out;
}

double weyl_norm(const HomogeneousPoly& p) {
  auto table = table_for(p.nvars(), p.degree());
  const auto& exps = table->exps(p.degree());
  std::vector<int> alpha(p.nvars());
  double acc = 0.0;
  for (std::int64_t r = 0; r < p.coefficients().size(); ++r) {
    const int* a = exps.data() + static_cast<std::size_t>(r) * p.nvars();
    alpha.assign(a, a + p.nvars());
    acc += std::norm(p.coefficients()[r]) / multinomial(p.degree(), alpha);
  }
  return std::sqrt(acc);
}

double weyl_norm(const PolySystem& f) {
  double acc = 0.0;
  for (const auto& c : f.components()) {
    const double w = weyl_norm(c);
    acc += w * w;
  }
  return std::sqrt(acc);
}

Complex weyl_inner(const HomogeneousPoly& a, const HomogeneousPoly& b) {
  if (a.nvars() != b.nvars() || a.degree() != b.degree())
    throw InputError("weyl_inner shape mismatch");
  auto table = table_for(a.nvars(), a.degree());
  const auto& exps = table->exps(a.degree());
  std::vector<int> alpha(a.nvars());
  Complex acc(0.0, 0.0);
  for (std::int64_t r = 0; r < a.coefficients().size(); ++r) {
    const int* e = exps.data() + static_cast<std::size_t>(r) * a.nvars();
    alpha.assign(e, e + a.nvars());
    acc += a.coefficients()[r] * std::conj(b.coefficients()[r]) /
           multinomial(a.degree(), alpha);
  }
  return acc;
}

double std_norm(const HomogeneousPoly& p) { return p.coefficients().norm(); }

double std_norm(const PolySystem& f) {
  double acc = 0.0;
  for (const auto& c : f.components()) acc += c.coefficients().squaredNorm();
  return std::sqrt(acc);
}

// --- affine --------------------------------------------------------------------

double AffinePoly::eval_real(const Eigen::VectorXd& x) const {
  double acc = 0.0;
  for (const auto& [beta, c] : terms) {
    double t = c.real();
    for (int v = 0; v < nvars; ++v)
      for (int rep = 0; rep < beta[v]; ++rep) t *= x[v];
    acc += t;
  }
  return acc;
}

Eigen::VectorXd AffinePoly::gradient_real(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(nvars);
  for (const auto& [beta, c] : terms) {
    for (int j = 0; j < nvars; ++j) {
      if (beta[j] == 0) continue;
      double t = c.real() * beta[j];
      for (int v = 0; v < nvars; ++v) {
        const int e = v == j ? beta[v] - 1 : beta[v];
        for (int rep = 0; rep < e; ++rep) t *= x[v];
      }
      g[j] += t;
    }
  }
  return g;
}

HomogeneousPoly homogenize(const AffinePoly& p, int d) {
  HomogeneousPoly out(p.nvars + 1, d);
  std::vector<int> alpha(p.nvars + 1);
  for (const auto& [beta, c] : p.terms) {
    int total = 0;
    for (int b : beta) total += b;
    if (total > d) throw InputError("homogenize: term degree exceeds requested degree");
    alpha[0] = d - total;
    for (int v = 0; v < p.nvars; ++v) alpha[v + 1] = beta[v];
    out.coefficients()[monomial_rank(p.nvars + 1, d, alpha.data())] += c;
  }
  return out;
}

AffinePoly dehomogenize(const HomogeneousPoly& h) {
  AffinePoly out;
  out.nvars = h.nvars() - 1;
  out.degree_bound = h.degree();
  auto table = table_for(h.nvars(), h.degree());
  const auto& exps = table->exps(h.degree());
  for (std::int64_t r = 0; r < h.coefficients().size(); ++r) {
    const Complex c = h.coefficients()[r];
    if (c == Complex(0.0, 0.0)) continue;
    const int* alpha = exps.data() + static_cast<std::size_t>(r) * h.nvars();
    std::vector<int> beta(alpha + 1, alpha + h.nvars());
    out.terms.emplace_back(std::move(beta), c);
  }
  return out;
}

// --- named families --------------------------------------------------------------

HomogeneousPoly circle_cosine(int d) {
  HomogeneousPoly out(2, d);
  for (int k = 0; 2 * k <= d; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    out.set_coefficient({d - 2 * k, 2 * k}, sign * binomial(d, 2 * k));
  }
  return out;
}

HomogeneousPoly circle_sine(int d) {
  HomogeneousPoly out(2, d);
  for (int k = 0; 2 * k + 1 <= d; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    out.set_coefficient({d - 2 * k - 1, 2 * k + 1}, sign * binomial(d, 2 * k + 1));
  }
  return out;
}

PolySystem monomial_system(Field field, const std::vector<int>& alpha, Complex c) {
  int d = 0;
  for (int a : alpha) d += a;
  HomogeneousPoly p(static_cast<int>(alpha.size()), d);
  p.set_coefficient(alpha, c);
  return PolySystem(field, {std::move(p)});
}

}  // namespace nag
