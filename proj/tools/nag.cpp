// Command-line front end: norm, condition, betti, pv, solve, experiment.
//
// Exit codes: 0 success, 2 input error, 3 resource guard, 4 numerical failure.
// Every run can emit a manifest with the full configuration; re-running from
// a manifest reproduces the output byte-identically.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "nag/condition.hpp"
#include "nag/ensembles.hpp"
#include "nag/errors.hpp"
#include "nag/homology.hpp"
#include "nag/homotopy.hpp"
#include "nag/json_writer.hpp"
#include "nag/norms.hpp"
#include "nag/parallel.hpp"
#include "nag/poly_io.hpp"
#include "nag/pv.hpp"

namespace {

using nag::JsonWriter;

struct RunConfig {
  std::string command;
  std::string poly_path;
  int k = 7;
  std::string point;
  bool global_mode = false;
  int b_exponent = -1;
  bool relaxed = false;
  int relaxed_ell = 0;
  double relaxed_eps = 0.0;
  std::string dump_cloud;
  double a = 1.0;
  int knorm = 7;
  int max_depth = 24;
  std::string boxes_csv;
  std::uint64_t seed = 0;
  std::string fastpath = "auto";
  std::string trace_csv;
  std::string kind;
  int n = 2;
  std::string d_list = "2";
  std::string law = "kss-real";
  std::int64_t trials = 100;
  std::string thresholds;
  std::string csv_path;
  int threads = 0;
  std::string out_path;
  std::string manifest_path;
};

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(std::stoi(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  if (out.empty()) throw nag::InputError("empty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(std::stod(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  if (out.empty()) throw nag::InputError("empty number list");
  return out;
}

void write_config(JsonWriter& w, const RunConfig& c) {
  w.key("config").begin_object();
  w.kv("poly", c.poly_path);
  w.kv("k", c.k);
  w.kv("point", c.point);
  w.kv("global", c.global_mode);
  w.kv("b", c.b_exponent);
  w.kv("relaxed", c.relaxed);
  w.kv("relaxed_ell", c.relaxed_ell);
  w.kv("relaxed_eps", c.relaxed_eps);
  w.kv("dump_cloud", c.dump_cloud);
  w.kv("a", c.a);
  w.kv("knorm", c.knorm);
  w.kv("max_depth", c.max_depth);
  w.kv("boxes_csv", c.boxes_csv);
  w.kv("seed", c.seed);
  w.kv("fastpath", c.fastpath);
  w.kv("trace_csv", c.trace_csv);
  w.kv("kind", c.kind);
  w.kv("n", c.n);
  w.kv("d", c.d_list);
  w.kv("law", c.law);
  w.kv("trials", c.trials);
  w.kv("thresholds", c.thresholds);
  w.kv("csv", c.csv_path);
  w.kv("threads", c.threads);
  w.end_object();
}

std::string run_norm(const RunConfig& c) {
  const nag::PolySystem f = nag::load_system(c.poly_path);
  const nag::CertifiedNorm norm = f.field() == nag::Field::Real
                                      ? nag::linf_norm_real(f, c.k)
                                      : nag::linf_norm_complex(f, c.k);
  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.kv("command", "norm");
  w.kv("norm", norm.upper);
  w.kv("lower", norm.lower);
  w.kv("upper", norm.upper);
  w.kv("k", norm.k);
  w.kv("grid_size", norm.grid_size);
  w.end_object();
  return w.str();
}

std::string run_condition(const RunConfig& c) {
  const nag::PolySystem f = nag::load_system(c.poly_path);
  if (f.field() != nag::Field::Real)
    throw nag::InputError("condition: real systems only (kappa and K are real quantities)");
  if (c.point.empty() && !c.global_mode)
    throw nag::InputError("condition: --point required unless --global");

  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.kv("command", "condition");

  const nag::CertifiedNorm norm = nag::linf_norm_real(f, c.k);
  if (!c.point.empty()) {
    const auto coords = parse_double_list(c.point);
    if (static_cast<int>(coords.size()) != f.nvars())
      throw nag::InputError("condition: point needs " + std::to_string(f.nvars()) +
                            " coordinates");
    Eigen::VectorXd x(f.nvars());
    for (int i = 0; i < f.nvars(); ++i) x[i] = coords[static_cast<std::size_t>(i)];
    x /= x.norm();
    const nag::UnitPoint pt = nag::UnitPoint::real(x);
    const nag::ConditionReport kap = nag::kappa_local(f, pt);
    const nag::ConditionReport K = nag::K_local(f, pt, norm);
    w.kv("kappa", kap.value);
    w.kv("K", K.value);
    w.kv("branch", K.residual_branch);
    w.kv("sigma_q", K.sigma_q);
    w.key("point").begin_array();
    for (int i = 0; i < f.nvars(); ++i) w.value(x[i]);
    w.end_array();
  }
  if (c.global_mode) {
    const nag::KEstimate est = nag::K_estimate(f, c.k, c.b_exponent);
    if (est.failed) {
      w.kv("K_hat", "fail");
      w.kv("K_lower_bound", std::ldexp(1.0, c.b_exponent));
    } else {
      w.kv("K_hat", est.K_hat);
      w.kv("ell_stop", est.ell_stop);
    }
  } else {
    w.key("K_hat").null_value();
  }
  w.kv("norm_upper", norm.upper);
  w.kv("norm_lower", norm.lower);
  w.end_object();
  return w.str();
}

std::string run_betti(const RunConfig& c) {
  const nag::PolySystem f = nag::load_system(c.poly_path);
  const nag::PolybettiResult res = c.relaxed
                                       ? nag::polybetti_relaxed(f, c.relaxed_ell, c.relaxed_eps)
                                       : nag::polybetti(f);
  if (!c.dump_cloud.empty()) {
    std::string csv;
    for (const auto& p : res.cloud.points) {
      for (int i = 0; i < p.size(); ++i) {
        if (i) csv += ',';
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", p[i]);
        csv += buf;
      }
      csv += '\n';
    }
    nag::write_file(c.dump_cloud, csv);
  }
  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.kv("command", "betti");
  w.key("betti").begin_array();
  for (auto b : res.betti.betti) w.value(b);
  w.end_array();
  w.kv("Q", res.Q);
  w.kv("K_hat", res.K_hat);
  w.kv("ell", res.ell);
  w.kv("delta", res.delta);
  w.kv("epsilon", res.epsilon);
  w.kv("cloud_size", res.cloud_size);
  w.kv("raw_cloud_size", res.raw_cloud_size);
  w.end_object();
  return w.str();
}

std::string run_pv(const RunConfig& c) {
  const nag::PolySystem fh = nag::load_system(c.poly_path);
  if (fh.field() != nag::Field::Real || fh.q() != 1)
    throw nag::InputError("pv: expects a single real polynomial (interpreted as f^h)");
  nag::AffinePoly f = nag::dehomogenize(fh.component(0));
  f.degree_bound = fh.component(0).degree();
  const nag::PVResult res = nag::pv_subdivide(f, c.a, c.knorm, c.max_depth);
  if (!res.completed)
    throw nag::NumericalError("pv: max depth " + std::to_string(c.max_depth) + " exceeded with " +
                              std::to_string(res.unresolved.size()) +
                              " unresolved boxes (near-singular input?)");
  if (!c.boxes_csv.empty()) {
    std::string csv;
    for (const auto& ab : res.accepted) {
      for (int i = 0; i < ab.box.center.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", ab.box.center[i]);
        csv += buf;
        csv += ',';
      }
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", ab.box.width);
      csv += buf;
      csv += ',';
      csv += ab.clause == nag::BoxClause::Value ? "value" : "gradient";
      csv += '\n';
    }
    nag::write_file(c.boxes_csv, csv);
  }
  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.kv("command", "pv");
  w.kv("accepted", static_cast<std::int64_t>(res.accepted.size()));
  w.kv("boxes_processed", res.boxes_processed);
  w.kv("max_depth_reached", res.max_depth_reached);
  w.kv("Q", res.Q);
  w.kv("norm_lower", res.norm.lower);
  std::int64_t value_boxes = 0;
  for (const auto& ab : res.accepted)
    if (ab.clause == nag::BoxClause::Value) ++value_boxes;
  w.kv("value_clause_boxes", value_boxes);
  w.kv("gradient_clause_boxes", static_cast<std::int64_t>(res.accepted.size()) - value_boxes);
  w.end_object();
  return w.str();
}

std::string run_solve(const RunConfig& c) {
  const nag::PolySystem f = nag::load_system(c.poly_path);
  nag::QuadraticFastPath mode = nag::QuadraticFastPath::Auto;
  if (c.fastpath == "on")
    mode = nag::QuadraticFastPath::On;
  else if (c.fastpath == "off")
    mode = nag::QuadraticFastPath::Off;
  else if (c.fastpath != "auto")
    throw nag::InputError("solve: --quadratic-fastpath must be auto, on or off");

  const nag::SolveResult res = nag::solve(f, c.seed, mode);
  if (!c.trace_csv.empty()) {
    std::string csv = "t,dt,M,norm_lower,norm_upper\n";
    for (const auto& s : res.trace.steps) {
      char buf[220];
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.dt, s.M,
                    s.norm_lower, s.norm_upper);
      csv += buf;
    }
    nag::write_file(c.trace_csv, csv);
  }
  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.kv("command", "solve");
  w.key("zero").begin_array();
  for (int i = 0; i < res.zero.size(); ++i) {
    w.value(res.zero[i].real());
    w.value(res.zero[i].imag());
  }
  w.end_array();
  w.kv("residual", res.residual);
  w.kv("iterations", res.iterations);
  w.kv("accepted", res.trace.accepted);
  w.kv("fast_path", res.used_fast_path);
  if (c.trace_csv.empty())
    w.key("trace_file").null_value();
  else
    w.kv("trace_file", c.trace_csv);
  w.end_object();
  return w.str();
}

std::string run_experiment(const RunConfig& c) {
  const auto degrees = parse_int_list(c.d_list);
  const nag::EnsembleSpec spec = nag::EnsembleSpec::from_name(c.law);
  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.kv("command", "experiment");
  w.kv("kind", c.kind);
  w.kv("law", spec.name());
  w.kv("n", c.n);
  w.key("d").begin_array();
  for (int d : degrees) w.value(d);
  w.end_array();
  w.kv("trials", c.trials);
  w.kv("seed", c.seed);

  std::string csv;
  if (c.kind == "ratio") {
    const auto st = nag::ratio_statistics(c.n, degrees, spec, c.trials, c.seed);
    w.kv("mean", st.mean);
    w.kv("std_error", st.std_error);
    w.kv("median", st.median);
    w.kv("q90", st.q90);
    w.kv("bound", st.bound);
    w.kv("pass", st.pass);
    csv = "trial,ratio\n";
    for (std::size_t i = 0; i < st.samples.size(); ++i)
      csv += std::to_string(i) + "," + JsonWriter::format_double(st.samples[i]) + "\n";
  } else if (c.kind == "tail") {
    const auto thresholds = parse_double_list(c.thresholds);
    const auto rows = nag::tail_statistics(c.n, degrees, spec, c.trials, thresholds, c.seed);
    w.key("rows").begin_array();
    bool all_pass = true;
    for (const auto& r : rows) {
      w.begin_object();
      w.kv("threshold", r.threshold);
      w.kv("empirical", r.empirical);
      w.kv("bound", r.bound);
      w.kv("margin", r.margin);
      w.kv("vacuous", r.vacuous);
      w.kv("pass", r.pass);
      w.end_object();
      all_pass = all_pass && (r.vacuous || r.pass);
    }
    w.end_array();
    w.kv("pass", all_pass);
    csv = "threshold,empirical,bound\n";
    for (const auto& r : rows)
      csv += JsonWriter::format_double(r.threshold) + "," +
             JsonWriter::format_double(r.empirical) + "," + JsonWriter::format_double(r.bound) +
             "\n";
  } else if (c.kind == "cond-ratio") {
    const auto st = nag::condition_ratio_statistics(c.n, degrees, spec, c.trials, c.seed);
    w.kv("mean", st.mean);
    w.kv("bound", st.bound);
    w.kv("sandwich_violations", st.sandwich_violations);
    w.kv("pass", st.pass);
    csv = "trial,ratio\n";
    for (std::size_t i = 0; i < st.samples.size(); ++i)
      csv += std::to_string(i) + "," + JsonWriter::format_double(st.samples[i]) + "\n";
  } else if (c.kind == "pv-count") {
    if (degrees.size() != 1) throw nag::InputError("pv-count: single degree expected");
    const auto st = nag::pv_box_count_experiment(c.n, degrees[0], spec, c.trials, c.a, c.seed);
    w.kv("mean_boxes", st.mean_boxes);
    w.kv("bound", st.bound);
    w.kv("weyl_bound", st.weyl_bound);
    w.kv("pass", st.pass);
    csv = "trial,boxes\n";
    for (std::size_t i = 0; i < st.samples.size(); ++i)
      csv += std::to_string(i) + "," + JsonWriter::format_double(st.samples[i]) + "\n";
  } else if (c.kind == "homotopy-steps") {
    const auto st = nag::homotopy_steps_experiment(c.n, c.trials, c.seed);
    w.kv("mean_iterations", st.mean_iterations);
    w.kv("shape_constant", st.shape_constant);
    w.kv("failures", st.failures);
    csv = "trial,iterations\n";
    for (std::size_t i = 0; i < st.samples.size(); ++i)
      csv += std::to_string(i) + "," + JsonWriter::format_double(st.samples[i]) + "\n";
  } else {
    throw nag::InputError("experiment: unknown kind " + c.kind);
  }
  w.end_object();
  if (!c.csv_path.empty()) nag::write_file(c.csv_path, csv);
  return w.str();
}

std::string dispatch(const RunConfig& c) {
  if (c.command == "norm") return run_norm(c);
  if (c.command == "condition") return run_condition(c);
  if (c.command == "betti") return run_betti(c);
  if (c.command == "pv") return run_pv(c);
  if (c.command == "solve") return run_solve(c);
  if (c.command == "experiment") return run_experiment(c);
  throw nag::InputError("unknown command: " + c.command);
}

void write_manifest(const RunConfig& c, double wall_s) {
  if (c.manifest_path.empty()) return;
  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.kv("command", c.command);
  write_config(w, c);
  w.kv("seed", c.seed);
  w.kv("library_version", nag::kVersion);
  w.kv("wall_time_s", wall_s);
  w.end_object();
  nag::write_file(c.manifest_path, w.str() + "\n");
}

RunConfig config_from_manifest(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(nag::read_file(path));
  } catch (const std::exception& e) {
    throw nag::InputError(std::string("manifest parse error: ") + e.what());
  }
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  const auto& cfg = j.at("config");
  c.poly_path = cfg.value("poly", "");
  c.k = cfg.value("k", 7);
  c.point = cfg.value("point", "");
  c.global_mode = cfg.value("global", false);
  c.b_exponent = cfg.value("b", -1);
  c.relaxed = cfg.value("relaxed", false);
  c.relaxed_ell = cfg.value("relaxed_ell", 0);
  c.relaxed_eps = cfg.value("relaxed_eps", 0.0);
  c.dump_cloud = cfg.value("dump_cloud", "");
  c.a = cfg.value("a", 1.0);
  c.knorm = cfg.value("knorm", 7);
  c.max_depth = cfg.value("max_depth", 24);
  c.boxes_csv = cfg.value("boxes_csv", "");
  c.seed = cfg.value("seed", std::uint64_t(0));
  c.fastpath = cfg.value("fastpath", "auto");
  c.trace_csv = cfg.value("trace_csv", "");
  c.kind = cfg.value("kind", "");
  c.n = cfg.value("n", 2);
  c.d_list = cfg.value("d", "2");
  c.law = cfg.value("law", "kss-real");
  c.trials = cfg.value("trials", std::int64_t(100));
  c.thresholds = cfg.value("thresholds", "");
  c.csv_path = cfg.value("csv", "");
  c.threads = cfg.value("threads", 0);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L-infinity numerical algebraic geometry toolkit"};
  app.require_subcommand(0, 1);

  RunConfig c;
  std::string from_manifest;
  app.add_option("--from-manifest", from_manifest, "re-run a recorded configuration");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", c.threads, "worker pool size (0 = hardware)");
    sub->add_option("--out", c.out_path, "write the JSON result here instead of stdout");
    sub->add_option("--manifest", c.manifest_path, "write a run manifest here");
  };

  auto* norm = app.add_subcommand("norm", "certified sup-norm of a polynomial system");
  norm->add_option("--poly", c.poly_path, "polynomial JSON file")->required();
  norm->add_option("--k", c.k, "accuracy exponent (gap 2^-k)");
  add_common(norm);

  auto* cond = app.add_subcommand("condition", "condition numbers kappa and K");
  cond->add_option("--poly", c.poly_path)->required();
  cond->add_option("--point", c.point, "comma-separated coordinates (normalized)");
  cond->add_option("--k", c.k, "norm accuracy exponent");
  cond->add_flag("--global", c.global_mode, "run the global K-ESTIMATE");
  cond->add_option("--b", c.b_exponent, "failure threshold exponent (-1 = unbounded)");
  add_common(cond);

  auto* betti = app.add_subcommand("betti", "Betti numbers of the spherical zero set");
  betti->add_option("--poly", c.poly_path)->required();
  auto* relax =
      betti->add_option("--relaxed", [&c](const CLI::results_t& res) {
        if (res.size() != 2) return false;
        c.relaxed = true;
        c.relaxed_ell = std::stoi(res[0]);
        c.relaxed_eps = std::stod(res[1]);
        return true;
      },
      "ELL EPS: user grid exponent and ball radius (window-verified)");
  relax->type_size(2);
  betti->add_option("--dump-cloud", c.dump_cloud, "write selected points to CSV");
  add_common(betti);

  auto* pv = app.add_subcommand("pv", "Plantinga-Vegter subdivision (sup-norm predicate)");
  pv->add_option("--poly", c.poly_path, "homogenized input f^h")->required();
  pv->add_option("--a", c.a, "box half-width");
  pv->add_option("--knorm", c.knorm, "norm accuracy exponent");
  pv->add_option("--max-depth", c.max_depth);
  pv->add_option("--boxes", c.boxes_csv, "write accepted boxes to CSV");
  add_common(pv);

  auto* solve = app.add_subcommand("solve", "linear homotopy for a complex zero");
  solve->add_option("--poly", c.poly_path)->required();
  solve->add_option("--seed", c.seed);
  solve->add_option("--quadratic-fastpath", c.fastpath, "auto|on|off");
  solve->add_option("--trace", c.trace_csv, "write the step trace to CSV");
  add_common(solve);

  auto* exp = app.add_subcommand("experiment", "random-ensemble experiments");
  exp->add_option("--kind", c.kind, "ratio|tail|cond-ratio|pv-count|homotopy-steps")->required();
  exp->add_option("--n", c.n);
  exp->add_option("--d", c.d_list, "comma-separated degrees");
  exp->add_option("--law", c.law, "kss-real|kss-complex|weyl-uniform");
  exp->add_option("--trials", c.trials);
  exp->add_option("--seed", c.seed);
  exp->add_option("--a", c.a, "pv-count box half-width");
  exp->add_option("--thresholds", c.thresholds, "comma-separated tail thresholds");
  exp->add_option("--csv", c.csv_path, "write per-trial rows to CSV");
  add_common(exp);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!from_manifest.empty()) {
      const std::string out_path = c.out_path;
      const std::string manifest_path = c.manifest_path;
      c = config_from_manifest(from_manifest);
      c.out_path = out_path;
      c.manifest_path = manifest_path;
    } else {
      for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
      if (c.command.empty()) {
        std::cerr << app.help() << std::endl;
        return 2;
      }
    }

    nag::set_thread_count(c.threads);
    const auto t0 = std::chrono::steady_clock::now();
    const std::string result = dispatch(c);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.out_path.empty())
      std::cout << result << std::endl;
    else
      nag::write_file(c.out_path, result + "\n");
    write_manifest(c, wall);
    return 0;
  } catch (const nag::InputError& e) {
    std::cerr << "input error: " << e.what() << std::endl;
    return nag::InputError::exit_code;
  } catch (const nag::ResourceError& e) {
    std::cerr << "resource guard: " << e.what() << std::endl;
    return nag::ResourceError::exit_code;
  } catch (const nag::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << std::endl;
    return nag::NumericalError::exit_code;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << std::endl;
    return nag::InputError::exit_code;
  }
}
