#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spectralset/bounds.hpp"
#include "spectralset/io.hpp"
#include "spectralset/search.hpp"
#include "spectralset/verify.hpp"

namespace ss = spectralset;
using ordered_json = nlohmann::ordered_json;

namespace {

struct CommonOpts {
  std::string matrix_path;
  int grid_n = 512;
  int fourier_k = 64;
  std::optional<double> q_abs;
  int degree = 4;
  int restarts = 32;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  ss::Tolerances tol;
};

void add_run_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--grid", o.grid_n,
                  "Boundary mesh node count; power of two, at least 16")
      ->capture_default_str();
  cmd->add_option("--fourier-k", o.fourier_k,
                  "Support-function Fourier degree; below grid/2")
      ->capture_default_str();
  cmd->add_option("--degree", o.degree, "Polynomial degree for searches")
      ->capture_default_str();
  cmd->add_option("--restarts", o.restarts, "Optimizer restart count")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Base seed; fixes every random choice")
      ->capture_default_str();
  cmd->add_option("--eig-tol", o.tol.eig_tol, "Eigen/Hermiticity tolerance");
  cmd->add_option("--quad-tol", o.tol.quad_tol, "Quadrature identity tolerance");
  cmd->add_option("--psd-tol", o.tol.psd_tol, "Positivity slack");
  cmd->add_option("--curvature-tol", o.tol.curvature_tol, "Convexity slack");
  cmd->add_option("--cond-cap", o.tol.cond_cap, "Resolvent condition cap");
}

void validate_run_config(const CommonOpts& o) {
  if (o.grid_n < 16 || (o.grid_n & (o.grid_n - 1)) != 0) {
    throw ss::InputError("--grid must be a power of two, at least 16");
  }
  if (o.fourier_k < 1 || 2 * o.fourier_k >= o.grid_n) {
    throw ss::InputError("--fourier-k must satisfy 1 <= fourier-k < grid/2");
  }
  if (o.degree < 0) throw ss::InputError("--degree must be nonnegative");
  if (o.restarts < 1) throw ss::InputError("--restarts must be positive");
  if (o.q_abs && !(*o.q_abs > 0 && *o.q_abs <= 1)) {
    throw ss::InputError("--q must lie in (0, 1]");
  }
  o.tol.validate();
}

ss::Operator load_matrix(const std::string& path) {
  if (path.empty()) throw ss::InputError("--matrix is required");
  return ss::read_matrix_file(path);
}

/// "disk:cx,cy,r" (or "disk:cx,r" with cy = 0) and "qrange"; anything else
/// is rejected. An absent flag means Omega = W(A).
ss::OmegaSpec parse_omega(const std::string& arg) {
  if (arg.empty()) return ss::OmegaSpec::numerical_range();
  if (arg == "qrange") return ss::OmegaSpec::scaled_qrange();
  if (arg.rfind("disk:", 0) == 0) {
    std::vector<double> parts;
    std::istringstream in(arg.substr(5));
    std::string piece;
    while (std::getline(in, piece, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(piece, &used);
        if (used != piece.size()) throw std::invalid_argument(piece);
        parts.push_back(v);
      } catch (const std::exception&) {
        throw ss::InputError("--omega disk: expects numbers, got '" + piece + "'");
      }
    }
    if (parts.size() == 3) {
      return ss::OmegaSpec::disk(ss::Complex(parts[0], parts[1]), parts[2]);
    }
    if (parts.size() == 2) {
      return ss::OmegaSpec::disk(ss::Complex(parts[0], 0), parts[1]);
    }
    throw ss::InputError("--omega disk: expects cx,cy,r (or cx,r)");
  }
  throw ss::InputError("--omega must be 'disk:cx,cy,r' or 'qrange'");
}

std::string boundary_csv(const ss::BoundaryMesh& mesh) {
  std::ostringstream os;
  ss::write_boundary_csv(os, mesh);
  return os.str();
}

int cmd_range(const CommonOpts& o) {
  validate_run_config(o);
  const ss::Operator a = load_matrix(o.matrix_path);
  const std::string base = o.out.empty() ? std::string("range") : o.out;

  const ss::SupportFn w = ss::numrange_body(a, o.grid_n, o.fourier_k, o.tol);
  const std::string w_path = base + "_w.csv";
  ss::atomic_write_text(w_path, boundary_csv(ss::boundary_mesh(w, o.grid_n, o.tol)));

  ordered_json summary;
  summary["w_csv"] = w_path;
  summary["perimeter"] = ss::perimeter(w);
  summary["w_omega"] = ss::farthest_point_modulus(w);
  summary["rho_min"] = ss::min_radius_of_curvature(w, o.tol);

  if (o.q_abs) {
    const ss::QParameter q(ss::Complex(*o.q_abs, 0));
    const ss::AscentOptions ascent{o.restarts, o.seed, 400};
    // |q| = 1 degenerates Omega_q to W(A); reuse the fit already in hand.
    const ss::SupportFn oq =
        q.t() == 0 ? w
                   : ss::qrange_body(a, q, o.grid_n, o.fourier_k, o.tol, ascent);
    const std::string q_path = base + "_omega_q.csv";
    ss::atomic_write_text(q_path,
                          boundary_csv(ss::boundary_mesh(oq, o.grid_n, o.tol)));
    summary["q_abs"] = *o.q_abs;
    summary["omega_q_csv"] = q_path;
    summary["omega_q_perimeter"] = ss::perimeter(oq);
    summary["omega_q_w"] = ss::farthest_point_modulus(oq);
    summary["omega_q_rho_min"] = ss::min_radius_of_curvature(oq, o.tol);
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

std::string report_as_csv(const std::string& report_json) {
  const ordered_json j = ordered_json::parse(report_json);
  std::ostringstream os;
  os << "key,value\n";
  for (const auto& [key, value] : j.items()) {
    if (key == "meta") continue;
    os << key << "," << value.dump() << "\n";
  }
  for (const auto& [key, value] : j.at("meta").items()) {
    os << "meta." << key << "," << value.dump() << "\n";
  }
  return os.str();
}

int cmd_bounds(const CommonOpts& o, const std::string& omega_arg) {
  validate_run_config(o);
  const ss::Operator a = load_matrix(o.matrix_path);
  const ss::OmegaSpec spec = parse_omega(omega_arg);

  ss::PipelineParams params;
  params.grid_n = o.grid_n;
  params.fourier_k = o.fourier_k;
  params.q_abs = o.q_abs;
  params.restarts = o.restarts;
  params.seed = o.seed;
  params.tol = o.tol;

  const ss::BoundsReport report = ss::assemble_report(a, spec, params);
  const std::string text =
      o.format == "csv" ? report_as_csv(report.to_json()) : report.to_json() + "\n";
  if (!o.out.empty()) ss::atomic_write_text(o.out, text);
  std::cout << text;
  return 0;
}

ss::EnsembleKind parse_ensemble(const std::string& name) {
  if (name == "ginibre") return ss::EnsembleKind::ginibre;
  if (name == "jordan") return ss::EnsembleKind::jordan;
  if (name == "nilpotent_shift") return ss::EnsembleKind::nilpotent_shift;
  if (name == "perturbed_normal") return ss::EnsembleKind::perturbed_normal;
  throw ss::InputError(
      "--ensemble must be one of ginibre, jordan, nilpotent_shift, "
      "perturbed_normal");
}

int cmd_conjecture(const CommonOpts& o, const std::string& ensemble_name, int n,
                   int trials, std::vector<double> q_list, double smooth_eps) {
  validate_run_config(o);
  if (q_list.empty()) q_list.push_back(1.0);
  for (double q : q_list) {
    if (!(q > 0 && q <= 1)) throw ss::InputError("--q must lie in (0, 1]");
  }
  if (trials < 1) throw ss::InputError("--trials must be positive");
  if (n < 1) throw ss::InputError("--n must be positive");
  const bool from_file = !o.matrix_path.empty();
  if (from_file == !ensemble_name.empty()) {
    throw ss::InputError("pass exactly one of --matrix and --ensemble");
  }

  const std::string findings_path =
      o.out.empty() ? std::string("findings.jsonl") : o.out;
  ss::FindingsLog log(findings_path);

  std::vector<double> max_ratio(q_list.size(), 0.0);
  std::vector<double> bound(q_list.size(), 0.0);
  std::vector<int> violations(q_list.size(), 0);

  std::optional<ss::Operator> fixed;
  if (from_file) fixed = load_matrix(o.matrix_path);
  const ss::EnsembleKind kind =
      from_file ? ss::EnsembleKind::ginibre : parse_ensemble(ensemble_name);

  for (int i = 0; i < trials; ++i) {
    const std::uint64_t trial_salt =
        o.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(i + 1);
    const ss::Operator a = from_file ? *fixed : ss::make_ensemble(kind, n, trial_salt);
    for (std::size_t qi = 0; qi < q_list.size(); ++qi) {
      ss::TrialParams params;
      params.degree = o.degree;
      params.restarts = o.restarts;
      params.seed = trial_salt + 0x9e3779b97f4a7c15ULL * (qi + 1);
      params.grid_n = o.grid_n;
      params.fourier_k = o.fourier_k;
      params.tol = o.tol;
      params.smooth_eps = smooth_eps;
      const ss::TrialResult r =
          ss::conjecture_trial(a, ss::QParameter(ss::Complex(q_list[qi], 0)),
                               params, &log);
      max_ratio[qi] = std::max(max_ratio[qi], r.max_ratio);
      bound[qi] = r.bound;
      if (r.violation) ++violations[qi];
    }
  }

  ordered_json summary;
  summary["trials"] = trials;
  summary["source"] = from_file ? o.matrix_path : ensemble_name;
  summary["findings"] = findings_path;
  summary["per_q"] = ordered_json::array();
  int total_violations = 0;
  for (std::size_t qi = 0; qi < q_list.size(); ++qi) {
    ordered_json row;
    row["q_abs"] = q_list[qi];
    row["max_ratio"] = max_ratio[qi];
    row["bound"] = bound[qi];
    row["violations"] = violations[qi];
    summary["per_q"].push_back(row);
    total_violations += violations[qi];
  }
  summary["total_violations"] = total_violations;
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_verify(const CommonOpts& o, std::vector<int> criteria) {
  ss::VerifyOptions opts;
  opts.grid_n = o.grid_n;
  // Coarse grids are allowed (documented: quadrature criteria then fail);
  // keep the fit degree legal rather than rejecting the run.
  opts.fourier_k = std::min(o.fourier_k, o.grid_n / 2 - 1);
  opts.seed = o.seed;

  if (criteria.empty()) {
    for (int i = 1; i <= ss::criterion_count(); ++i) criteria.push_back(i);
  }
  std::printf("%3s  %-22s  %12s  %6s  %9s  %7s  %s\n", "#", "criterion",
              "measured", "target", "tolerance", "time", "status");
  bool all_passed = true;
  for (int index : criteria) {
    const ss::CriterionResult r = ss::run_criterion(index, opts);
    std::printf("%3d  %-22s  %12.4e  %6g  %9.0e  %6.1fs  %s\n", r.index,
                r.name.c_str(), r.measured, 0.0, r.tolerance, r.seconds,
                r.passed ? "PASS" : "FAIL");
    if (!r.detail.empty()) std::printf("     %s\n", r.detail.c_str());
    all_passed = all_passed && r.passed;
  }
  std::printf("%s\n", all_passed ? "ALL PASS" : "FAILURES PRESENT");
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Spectral-constant bounds for convex domains containing a matrix "
      "spectrum: numerical range and scaled q-range geometry, double-layer "
      "potential profiles, gamma(1) estimates, and conjecture stress tests."};
  app.require_subcommand(1);

  CommonOpts range_opts;
  auto* range_cmd = app.add_subcommand(
      "range", "Boundary polylines and geometry summary for W(A) and Omega_q");
  range_cmd->add_option("--matrix", range_opts.matrix_path, "Matrix JSON file")
      ->required();
  range_cmd->add_option("--q", range_opts.q_abs,
                        "Also emit the scaled q-range for this |q| in (0, 1]");
  range_cmd->add_option("--out", range_opts.out,
                        "Output base path (default 'range')");
  add_run_flags(range_cmd, range_opts);

  CommonOpts bounds_opts;
  std::string omega_arg;
  auto* bounds_cmd =
      app.add_subcommand("bounds", "Full pipeline report for one matrix");
  bounds_cmd->add_option("--matrix", bounds_opts.matrix_path, "Matrix JSON file")
      ->required();
  bounds_cmd->add_option("--q", bounds_opts.q_abs, "|q| in (0, 1]");
  bounds_cmd->add_option(
      "--omega", omega_arg,
      "Domain: default W(A); 'disk:cx,cy,r' (or 'disk:cx,r'); 'qrange'");
  bounds_cmd->add_option("--out", bounds_opts.out, "Also write the report here");
  bounds_cmd->add_option("--format", bounds_opts.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  add_run_flags(bounds_cmd, bounds_opts);

  CommonOpts conj_opts;
  std::string ensemble_name;
  int ensemble_n = 3;
  int trials = 1;
  std::vector<double> q_list;
  auto* conj_cmd = app.add_subcommand(
      "conjecture", "Ratio-maximization trials against the conjectured constant");
  conj_cmd->add_option("--matrix", conj_opts.matrix_path, "Matrix JSON file");
  conj_cmd->add_option(
      "--ensemble", ensemble_name,
      "ginibre | jordan | nilpotent_shift | perturbed_normal");
  conj_cmd->add_option("--n", ensemble_n, "Ensemble dimension")
      ->capture_default_str();
  conj_cmd->add_option("--trials", trials, "Number of trials")
      ->capture_default_str();
  conj_cmd->add_option("--q", q_list, "|q| values in (0, 1]; repeatable")
      ->delimiter(',');
  conj_cmd->add_option("--out", conj_opts.out,
                       "Findings JSONL path (default 'findings.jsonl')");
  double smooth_eps = 0;
  conj_cmd
      ->add_option("--smooth-eps", smooth_eps,
                   "Minkowski-smooth the domain by this margin (h <- h + eps) "
                   "when the fitted boundary is not convex; default off")
      ->check(CLI::NonNegativeNumber);
  add_run_flags(conj_cmd, conj_opts);

  CommonOpts verify_opts;
  std::vector<int> criteria;
  auto* verify_cmd =
      app.add_subcommand("verify", "Run the acceptance suite and print a table");
  verify_cmd
      ->add_option("--criteria", criteria,
                   "Subset of criterion indices, e.g. 1,4,12")
      ->delimiter(',');
  add_run_flags(verify_cmd, verify_opts);

  int rc = 0;
  range_cmd->callback([&] { rc = cmd_range(range_opts); });
  bounds_cmd->callback([&] { rc = cmd_bounds(bounds_opts, omega_arg); });
  conj_cmd->callback([&] {
    rc = cmd_conjecture(conj_opts, ensemble_name, ensemble_n, trials, q_list,
                        smooth_eps);
  });
  verify_cmd->callback([&] { rc = cmd_verify(verify_opts, criteria); });

  try {
    app.parse(argc, argv);
    return rc;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  } catch (const ss::InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const ss::ContractError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const ss::NonSmoothBoundary& e) {
    std::fprintf(stderr, "nonsmooth boundary: %s (flat direction theta=%.6f)\n",
                 e.what(), e.theta());
    return 3;
  } catch (const ss::Error& e) {
    std::fprintf(stderr, "pipeline failure: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pipeline failure: %s\n", e.what());
    return 4;
  }
}
