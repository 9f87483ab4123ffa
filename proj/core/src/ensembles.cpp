#include "nag/ensembles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "nag/condition.hpp"
#include "nag/homotopy.hpp"
#include "nag/norms.hpp"
#include "nag/parallel.hpp"
#include "nag/pv.hpp"
#include "nag/rng.hpp"

namespace nag {

namespace {

double log2d(double x) { return std::log2(x); }

void check_spec(const EnsembleSpec& s) {
  if (6.0 * s.Krho() < 1.0) throw InputError("EnsembleSpec violates 6 K rho >= 1");
}

std::vector<double> gather(std::int64_t trials, std::uint64_t seed,
                           const std::function<double(Rng&)>& one) {
  const std::int64_t blocks = std::min<std::int64_t>(trials, 8 * thread_count());
  const std::int64_t per = (trials + blocks - 1) / std::max<std::int64_t>(1, blocks);
  std::vector<std::vector<double>> parts(static_cast<std::size_t>(std::max<std::int64_t>(1, blocks)));
  parallel_blocks(std::max<std::int64_t>(1, blocks), [&](std::int64_t b) {
    const std::int64_t first = b * per;
    const std::int64_t last = std::min(trials, first + per);
    for (std::int64_t s = first; s < last; ++s) {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(s));
      parts[static_cast<std::size_t>(b)].push_back(one(rng));
    }
  });
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(trials));
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / (static_cast<double>(v.size()) - 1.0) / static_cast<double>(v.size()));
}

double quantile_of(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t idx = std::min(v.size() - 1, static_cast<std::size_t>(q * static_cast<double>(v.size())));
  return v[idx];
}

}  // namespace

EnsembleSpec EnsembleSpec::kss_real() {
  // Standard normal coefficients: density bound 1/sqrt(2 pi), K rho = 2/sqrt(pi).
  EnsembleSpec s;
  s.law = EnsembleLaw::KssReal;
  s.rho = 1.0 / std::sqrt(2.0 * M_PI);
  s.K = (2.0 / std::sqrt(M_PI)) / s.rho;
  return s;
}

EnsembleSpec EnsembleSpec::kss_complex() {
  EnsembleSpec s;
  s.law = EnsembleLaw::KssComplex;
  s.rho = 1.0 / std::sqrt(M_PI);  // density bound of Re/Im at variance 1/2
  s.K = 1.0 / s.rho;
  return s;
}

EnsembleSpec EnsembleSpec::weyl_uniform() {
  EnsembleSpec s;
  s.law = EnsembleLaw::WeylUniform;
  s.rho = 0.5;
  s.K = 1.0;
  return s;
}

EnsembleSpec EnsembleSpec::from_name(const std::string& name) {
  if (name == "kss-real") return kss_real();
  if (name == "kss-complex") return kss_complex();
  if (name == "weyl-uniform") return weyl_uniform();
  throw InputError("unknown ensemble law: " + name +
                   " (expected kss-real, kss-complex or weyl-uniform)");
}

std::string EnsembleSpec::name() const {
  switch (law) {
    case EnsembleLaw::KssReal: return "kss-real";
    case EnsembleLaw::KssComplex: return "kss-complex";
    case EnsembleLaw::WeylUniform: return "weyl-uniform";
  }
  return "?";
}

PolySystem sample_dobro(int n, const std::vector<int>& degrees, const EnsembleSpec& spec,
                        std::uint64_t seed) {
  check_spec(spec);
  Rng rng(seed);
  rng.next_u64();
  const int nv = n + 1;
  std::vector<HomogeneousPoly> comps;
  comps.reserve(degrees.size());
  for (int d : degrees) {
    HomogeneousPoly p(nv, d);
    auto table = MonoTable::get(nv, d);
    const auto& exps = table->exps(d);
    std::vector<int> alpha(static_cast<std::size_t>(nv));
    for (std::int64_t r = 0; r < p.coefficients().size(); ++r) {
      const int* e = exps.data() + static_cast<std::size_t>(r) * nv;
      alpha.assign(e, e + nv);
      const double w = std::sqrt(multinomial(d, alpha));
      Complex c;
      switch (spec.law) {
        case EnsembleLaw::KssReal: c = Complex(rng.normal(), 0.0); break;
        case EnsembleLaw::WeylUniform: c = Complex(rng.uniform(-1.0, 1.0), 0.0); break;
        case EnsembleLaw::KssComplex: c = rng.complex_normal(); break;
      }
      p.coefficients()[r] = w * c;
    }
    comps.push_back(std::move(p));
  }
  return PolySystem(spec.law == EnsembleLaw::KssComplex ? Field::Complex : Field::Real,
                    std::move(comps));
}

RatioStats ratio_statistics(int n, const std::vector<int>& degrees, const EnsembleSpec& spec,
                            std::int64_t trials, std::uint64_t seed, int k_norm) {
  check_spec(spec);
  if (trials < 50) throw InputError("ratio_statistics: trials >= 50 required");
  if (spec.law == EnsembleLaw::KssComplex)
    throw InputError("ratio_statistics is a real-ensemble experiment");

  RatioStats out;
  out.trials = trials;
  out.samples = gather(trials, seed, [&](Rng& rng) {
    const PolySystem f = sample_dobro(n, degrees, spec, rng.next_u64());
    const CertifiedNorm norm = linf_norm_real(f, k_norm);
    return norm.upper / weyl_norm(f);
  });
  out.mean = mean_of(out.samples);
  out.std_error = stderr_of(out.samples, out.mean);
  out.median = quantile_of(out.samples, 0.5);
  out.q90 = quantile_of(out.samples, 0.9);

  const std::int64_t bigN = [&] {
    std::int64_t acc = 0;
    for (int d : degrees) acc += simplex_size(n + 1, d);
    return acc;
  }();
  if (bigN <= 2) throw InputError("ratio_statistics: N > 2 required");
  const int dmax = *std::max_element(degrees.begin(), degrees.end());
  out.bound = 890.0 * std::sqrt(2.0) * spec.Krho() *
              std::sqrt(static_cast<double>(n) * std::log(M_E * dmax)) /
              std::sqrt(static_cast<double>(bigN - 2));
  out.pass = out.mean <= out.bound + 3.0 * out.std_error;
  return out;
}

std::vector<TailRow> tail_statistics(int n, const std::vector<int>& degrees,
                                     const EnsembleSpec& spec, std::int64_t trials,
                                     const std::vector<double>& thresholds, std::uint64_t seed) {
  check_spec(spec);
  const int dmax = *std::max_element(degrees.begin(), degrees.end());
  const int q = static_cast<int>(degrees.size());
  const bool complex_law = spec.law == EnsembleLaw::KssComplex;
  bool all_quadratic = true;
  for (int d : degrees)
    if (d != 2) all_quadratic = false;

  std::vector<double> norms = gather(trials, seed, [&](Rng& rng) {
    const PolySystem f = sample_dobro(n, degrees, spec, rng.next_u64());
    if (!complex_law) return linf_norm_real(f, 2).upper;
    if (all_quadratic) return quadratic_inf_norm(quadratic_from_system(f)).surrogate;
    return linf_norm_complex(f, 2).upper;
  });

  std::vector<TailRow> rows;
  for (double t : thresholds) {
    TailRow row;
    row.threshold = t;
    if (complex_law) {
      row.bound = 2.0 * n * std::pow(1.5 * dmax, 2.0 * n) * std::exp(-(t / 3.0) * (t / 3.0));
    } else {
      row.bound = q * std::sqrt(2.0 * M_PI) * std::sqrt(static_cast<double>(n + 1)) *
                  std::pow(M_E * dmax / 2.0, n) * std::exp(-t * t / (17.0 * spec.K * spec.K));
    }
    if (row.bound >= 1.0) {
      row.vacuous = true;
      rows.push_back(row);
      continue;
    }
    std::int64_t exceed = 0;
    for (double v : norms)
      if (v >= t) ++exceed;
    row.empirical = static_cast<double>(exceed) / static_cast<double>(norms.size());
    const double pb = row.bound;
    row.margin = 3.0 * std::sqrt(pb * (1.0 - pb) / static_cast<double>(norms.size()));
    row.pass = row.empirical <= row.bound + row.margin;
    rows.push_back(row);
  }
  return rows;
}

CondRatioStats condition_ratio_statistics(int n, const std::vector<int>& degrees,
                                          const EnsembleSpec& spec, std::int64_t trials,
                                          std::uint64_t seed) {
  check_spec(spec);
  if (spec.law == EnsembleLaw::KssComplex)
    throw InputError("condition_ratio_statistics is a real-ensemble experiment");
  CondRatioStats out;
  out.trials = trials;
  const int k_norm = 2;
  const double kslack = 1.0 / (1.0 - std::ldexp(1.0, -k_norm));
  const int q = static_cast<int>(degrees.size());
  const int dmax = *std::max_element(degrees.begin(), degrees.end());

  std::atomic<std::int64_t> violations{0};
  std::vector<double> samples = gather(trials, seed, [&](Rng& rng) {
    const PolySystem f = sample_dobro(n, degrees, spec, rng.next_u64());
    const auto xv = rng.sphere_point(n + 1);
    const UnitPoint x = UnitPoint::real(Eigen::Map<const Eigen::VectorXd>(xv.data(), n + 1));
    const CertifiedNorm norm = linf_norm_real(f, k_norm);
    const ConditionReport K = K_local(f, x, norm);
    const ConditionReport kap = kappa_local(f, x);
    const double w = weyl_norm(f);
    const double ratio = K.value / kap.value;
    const double lo = norm.lower / w;
    const double hi = std::sqrt(2.0 * q * dmax) * norm.upper * kslack / w;
    if (!(ratio >= lo * (1.0 - 1e-9) && ratio <= hi * (1.0 + 1e-9))) ++violations;
    return ratio;
  });
  out.samples = std::move(samples);
  out.sandwich_violations = violations.load();
  out.mean = mean_of(out.samples);

  const std::int64_t bigN = [&] {
    std::int64_t acc = 0;
    for (int d : degrees) acc += simplex_size(n + 1, d);
    return acc;
  }();
  out.bound = 1780.0 * spec.Krho() *
              std::sqrt(static_cast<double>(q) * n * dmax * std::log(M_E * dmax)) /
              std::sqrt(static_cast<double>(bigN - 2));
  const double se = stderr_of(out.samples, out.mean);
  out.pass = violations == 0 && out.mean <= out.bound + 3.0 * se;
  return out;
}

PvCountStats pv_box_count_experiment(int n, int d, const EnsembleSpec& spec, std::int64_t trials,
                                     double a, std::uint64_t seed) {
  check_spec(spec);
  if (n > 3) throw ResourceError("pv_box_count_experiment guarded at n <= 3");
  if (spec.law == EnsembleLaw::KssComplex)
    throw InputError("pv_box_count_experiment is a real-ensemble experiment");
  PvCountStats out;
  out.trials = trials;
  out.samples = gather(trials, seed, [&](Rng& rng) {
    const PolySystem fh = sample_dobro(n, {d}, spec, rng.next_u64());
    AffinePoly f = dehomogenize(fh.component(0));
    f.degree_bound = d;
    const PVResult pv = pv_subdivide(f, a, 7, 30);
    if (!pv.completed) throw NumericalError("pv_box_count_experiment: depth cap reached");
    return static_cast<double>(pv.accepted.size());
  });
  out.mean_boxes = mean_of(out.samples);

  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  out.bound = std::pow(a, nn) * std::pow(dd, 1.5 * nn) *
              std::pow(std::log(M_E * dd), 0.5 * (nn + 1.0)) *
              std::pow(2.0, 1.5 * nn * log2d(nn) + 13.0 * nn + 2.0 * log2d(nn) + 7.0) *
              std::pow(spec.Krho(), nn + 1.0);
  const std::int64_t bigN = simplex_size(n + 1, d);
  out.weyl_bound = std::pow(a, nn) * std::pow(dd, nn) *
                   std::pow(static_cast<double>(bigN), 0.5 * (nn + 1.0)) *
                   std::pow(2.0, nn * log2d(nn) + 13.0 * nn + 1.5 * log2d(nn) + 8.5) *
                   std::pow(spec.Krho(), nn + 1.0);
  const double se = stderr_of(out.samples, out.mean_boxes);
  out.pass = out.mean_boxes <= out.bound + 3.0 * se;
  return out;
}

HomotopyStepsStats homotopy_steps_experiment(int n, std::int64_t trials, std::uint64_t seed) {
  HomotopyStepsStats out;
  out.trials = trials;
  std::int64_t failures = 0;
  out.samples = gather(trials, seed, [&](Rng& rng) {
    const std::vector<int> degrees(static_cast<std::size_t>(n), 2);
    const PolySystem f = sample_dobro(n, degrees, EnsembleSpec::kss_complex(), rng.next_u64());
    const SolveResult res = solve(f, rng.next_u64(), QuadraticFastPath::On);
    if (!res.trace.accepted) ++failures;
    return static_cast<double>(res.iterations);
  });
  out.failures = failures;
  out.mean_iterations = mean_of(out.samples);
  out.shape_constant =
      out.mean_iterations /
      (std::pow(static_cast<double>(n), 3.0) * 4.0 * std::log(M_E * 2.0));
  return out;
}

}  // namespace nag
