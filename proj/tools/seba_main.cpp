// Command-line front end: SEBA runs, eigengap and scan heuristics, hard
// thresholding, Cheeger level-set selection, and the demo generators.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seba/basis.hpp"
#include "seba/bickley.hpp"
#include "seba/cheeger.hpp"
#include "seba/demos.hpp"
#include "seba/grid.hpp"
#include "seba/heuristics.hpp"
#include "seba/io.hpp"
#include "seba/kmeans.hpp"
#include "seba/linalg.hpp"
#include "seba/matrix.hpp"
#include "seba/seba.hpp"
#include "seba/svg.hpp"
#include "seba/thresholding.hpp"
#include "seba/ulam.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
  std::string out;
  std::string config;
  int threads = seba::default_threads();
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out, "output directory")
      ->envname("SEBA_OUT")
      ->required();
  cmd->add_option("--threads", c.threads, "worker threads (default: machine parallelism)");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--config", c.config, "optional key=value config file; flags override it");
}

// Expands `--config <file>` into explicit long options ahead of parsing, so
// config values behave exactly like flags while command-line flags keep
// precedence.  Unknown keys surface as ordinary parse errors.
std::vector<std::string> with_config_expanded(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::vector<std::string> present;
  for (const auto& a : args)
    if (a.rfind("--", 0) == 0) present.push_back(a.substr(0, a.find('=')));
  for (const auto& [k, v] : seba::read_kv(path)) {
    const std::string flag = "--" + k;
    if (std::find(present.begin(), present.end(), flag) != present.end()) continue;
    args.push_back(flag);
    args.push_back(v);
  }
  return args;
}

// Every command writes its resolved configuration next to its outputs.
void write_resolved_config(CLI::App* cmd, const std::string& out_dir) {
  fs::create_directories(out_dir);
  seba::write_text_file(out_dir + "/config.kv", cmd->config_to_str(true, false));
}

std::string fmt(double v) { return seba::format_double(v); }

seba::KvPairs seba_sidecar(const seba::SparseBasis& sb, double tol, bool orthonormalized) {
  seba::KvPairs kv;
  kv.emplace_back("mu", fmt(sb.mu));
  kv.emplace_back("tol", fmt(tol));
  kv.emplace_back("iterations", std::to_string(sb.iterations));
  kv.emplace_back("converged", sb.converged ? "1" : "0");
  kv.emplace_back("orthonormalized_input", orthonormalized ? "1" : "0");
  std::string ms;
  for (std::size_t j = 0; j < sb.m.size(); ++j) {
    if (j) ms.push_back(',');
    ms += fmt(sb.m[j]);
  }
  kv.emplace_back("m", ms);
  kv.emplace_back("subspace_error", fmt(sb.metrics.subspace_error));
  kv.emplace_back("absolute_sparsity", fmt(sb.metrics.absolute_sparsity));
  kv.emplace_back("relative_sparsity", fmt(sb.metrics.relative_sparsity));
  kv.emplace_back("objective", fmt(sb.objective_trace.empty() ? 0.0 : sb.objective_trace.back()));
  return kv;
}

seba::GridField load_grid_field(const std::string& manifest_path,
                                const std::vector<double>& values,
                                const std::string& image_points_path) {
  const seba::KvPairs kv = seba::read_kv(manifest_path);
  seba::GridField f;
  f.nx = std::stoi(seba::kv_get(kv, "nx"));
  f.ny = std::stoi(seba::kv_get(kv, "ny"));
  f.x0 = std::stod(seba::kv_get(kv, "x0"));
  f.x1 = std::stod(seba::kv_get(kv, "x1"));
  f.y0 = std::stod(seba::kv_get(kv, "y0"));
  f.y1 = std::stod(seba::kv_get(kv, "y1"));
  f.x_periodic = seba::kv_get_or(kv, "x_periodic", "0") == "1";
  f.values = values;
  if (!image_points_path.empty()) {
    const seba::DenseMatrix pts = seba::read_matrix(image_points_path);
    if (pts.cols() != 2) throw seba::IoError("image points file must have 2 columns");
    f.image_points.resize(pts.rows());
    for (std::size_t i = 0; i < pts.rows(); ++i)
      f.image_points[i] = {pts(i, 0), pts(i, 1)};
  } else {
    // Identity map: static Cheeger ratio.
    f.image_points.resize(values.size());
    for (int iy = 0; iy < f.ny; ++iy)
      for (int ix = 0; ix < f.nx; ++ix)
        f.image_points[f.node(ix, iy)] = {f.node_x(ix), f.node_y(iy)};
  }
  f.validate();
  return f;
}

void write_assignment(const std::string& out_dir, const seba::FeatureAssignment& fa,
                      const std::vector<double>& super) {
  std::string acsv;
  for (std::size_t i = 0; i < fa.a.size(); ++i)
    acsv += std::to_string(i) + "," + std::to_string(fa.a[i]) + "\n";
  seba::write_text_file(out_dir + "/assignment.csv", acsv);
  seba::write_seba1(out_dir + "/thresholded_S.seba1", fa.thresholded_S);
  seba::write_value_column(out_dir + "/superposition.csv", super);
  seba::KvPairs kv;
  kv.emplace_back("method", seba::method_name(fa.method));
  kv.emplace_back("tau", fmt(fa.tau));
  if (!fa.column_taus.empty()) {
    std::string ts;
    for (std::size_t j = 0; j < fa.column_taus.size(); ++j) {
      if (j) ts.push_back(',');
      ts += fmt(fa.column_taus[j]);
    }
    kv.emplace_back("column_taus", ts);
  }
  seba::write_kv(out_dir + "/threshold.kv", kv);
}

void write_cheeger_outputs(const std::string& out_dir, const std::string& stem,
                           const seba::CheegerResult& res) {
  std::string hcsv;
  for (const auto& lev : res.levels) {
    if (lev.empty) continue;
    hcsv += fmt(lev.tau) + "," + fmt(lev.h) + "," + fmt(lev.length) + "," +
            fmt(lev.image_length) + "," + fmt(lev.area_min) + "\n";
  }
  seba::write_text_file(out_dir + "/" + stem + "_hcurve.csv", hcsv);
  std::string ccsv;
  for (std::size_t pl = 0; pl < res.contour.size(); ++pl)
    for (const auto& pt : res.contour[pl])
      ccsv += std::to_string(pl) + "," + fmt(pt[0]) + "," + fmt(pt[1]) + "\n";
  seba::write_text_file(out_dir + "/" + stem + "_contour.csv", ccsv);
  seba::KvPairs kv;
  kv.emplace_back("tau_star", fmt(res.tau_star));
  kv.emplace_back("h_star", fmt(res.h_star));
  kv.emplace_back("flat_lo", fmt(res.flat_lo));
  kv.emplace_back("flat_hi", fmt(res.flat_hi));
  seba::write_kv(out_dir + "/" + stem + ".kv", kv);
  seba::write_cheeger_curve_svg(out_dir + "/" + stem + "_hcurve.svg", res);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse eigenbasis approximation toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default(true);
  int exit_code = 0;

  // ---- run -------------------------------------------------------------
  auto run_cmd = app.add_subcommand("run", "run the sparse basis iteration");
  CommonOpts run_common;
  std::string run_input, run_weights;
  int run_r = 0;
  double run_mu = 0.0, run_tol = 1e-14;
  int run_max_iter = 5000;
  run_cmd->add_option("--input", run_input, "eigenvector matrix (CSV or SEBA1)")->required();
  run_cmd->add_option("--weights", run_weights, "per-row weight column");
  run_cmd->add_option("--r", run_r, "use only the first r columns");
  run_cmd->add_option("--mu", run_mu, "sparsity parameter (default 0.99/sqrt(p))");
  run_cmd->add_option("--tol", run_tol, "rotation convergence tolerance");
  run_cmd->add_option("--max-iter", run_max_iter, "iteration cap");
  add_common(run_cmd, run_common);
  run_cmd->callback([&] {
    write_resolved_config(run_cmd, run_common.out);
    seba::DenseMatrix v = seba::read_matrix(run_input);
    if (run_r > 0) v = v.first_cols(static_cast<std::size_t>(run_r));
    std::optional<seba::WeightVector> nu;
    if (!run_weights.empty()) nu = seba::WeightVector(seba::read_value_column(run_weights));

    bool reorthonormalized = false;
    const double defect =
        nu ? seba::orthonormality_error_w(v, *nu) : seba::orthonormality_error(v);
    if (defect > 1e-8) {
      v = nu ? seba::qr_orthonormalize_w(v, *nu) : seba::qr_orthonormalize(v);
      reorthonormalized = true;
      std::fprintf(stderr, "note: input columns were not orthonormal (defect %.2e); "
                           "applied QR\n", defect);
    }
    seba::EigenBasis basis(std::move(v), seba::OperatorKind::markov, 2, std::nullopt,
                           std::move(nu));
    seba::SebaConfig cfg;
    if (run_mu > 0.0) cfg.mu = run_mu;
    cfg.tol = run_tol;
    cfg.max_iter = run_max_iter;
    const seba::SparseBasis sb =
        basis.weights ? seba::seba_weighted(basis, cfg) : seba::seba(basis, cfg);
    seba::write_seba1(run_common.out + "/S.seba1", sb.S);
    seba::write_seba1(run_common.out + "/R.seba1", sb.R);
    seba::write_kv(run_common.out + "/metrics.kv", seba_sidecar(sb, run_tol, reorthonormalized));
    if (!sb.converged) {
      std::fprintf(stderr, "warning: rotation did not converge in %d iterations; "
                           "outputs written\n", sb.iterations);
      exit_code = 3;
    }
  });

  // ---- eigengap ----------------------------------------------------------
  auto gap_cmd = app.add_subcommand("eigengap", "Weyl-rescaled eigengap plot");
  CommonOpts gap_common;
  std::string gap_input, gap_kind = "neumann";
  int gap_d = 2;
  gap_cmd->add_option("--input", gap_input, "eigenvalue column (CSV)")->required();
  gap_cmd->add_option("--kind", gap_kind, "operator kind: neumann|dirichlet|markov");
  gap_cmd->add_option("--d", gap_d, "manifold dimension");
  add_common(gap_cmd, gap_common);
  gap_cmd->callback([&] {
    write_resolved_config(gap_cmd, gap_common.out);
    const auto lambda = seba::read_value_column(gap_input);
    const auto spec = seba::weyl_rescale(lambda, seba::parse_kind(gap_kind), gap_d);
    std::string vcsv;
    for (const auto& [r, v] : spec.values) vcsv += std::to_string(r) + "," + fmt(v) + "\n";
    seba::write_text_file(gap_common.out + "/rescaled.csv", vcsv);
    std::string dcsv;
    for (const auto& [r, d] : spec.drops) dcsv += std::to_string(r) + "," + fmt(d) + "\n";
    seba::write_text_file(gap_common.out + "/drops.csv", dcsv);
    seba::write_spectrum_svg(gap_common.out + "/spectrum.svg", spec);
    for (int r : spec.skipped)
      std::fprintf(stderr, "warning: lambda_%d <= 0 skipped in the Markov rescaling\n", r);
  });

  // ---- scan ----------------------------------------------------------------
  auto scan_cmd = app.add_subcommand("scan", "stacked (k,r) minimum-value scan");
  CommonOpts scan_common;
  std::string scan_input, scan_weights;
  int scan_rmax = 0;
  double scan_mu = 0.0, scan_tol = 1e-14;
  int scan_max_iter = 5000;
  scan_cmd->add_option("--input", scan_input, "eigenvector matrix (CSV or SEBA1)")->required();
  scan_cmd->add_option("--weights", scan_weights, "per-row weight column");
  scan_cmd->add_option("--r-max", scan_rmax, "largest basis size")->required();
  scan_cmd->add_option("--mu", scan_mu, "sparsity parameter override");
  scan_cmd->add_option("--tol", scan_tol, "rotation convergence tolerance");
  scan_cmd->add_option("--max-iter", scan_max_iter, "iteration cap");
  add_common(scan_cmd, scan_common);
  scan_cmd->callback([&] {
    write_resolved_config(scan_cmd, scan_common.out);
    seba::DenseMatrix v = seba::read_matrix(scan_input);
    std::optional<seba::WeightVector> nu;
    if (!scan_weights.empty()) nu = seba::WeightVector(seba::read_value_column(scan_weights));
    if ((nu ? seba::orthonormality_error_w(v, *nu) : seba::orthonormality_error(v)) > 1e-8) {
      v = nu ? seba::qr_orthonormalize_w(v, *nu) : seba::qr_orthonormalize(v);
      std::fprintf(stderr, "note: input columns were not orthonormal; applied QR\n");
    }
    seba::EigenBasis basis(std::move(v), seba::OperatorKind::markov, 2, std::nullopt,
                           std::move(nu));
    seba::SebaConfig cfg;
    if (scan_mu > 0.0) cfg.mu = scan_mu;
    cfg.tol = scan_tol;
    cfg.max_iter = scan_max_iter;
    const seba::ScanTable table = seba::scan(basis, scan_rmax, cfg, scan_common.threads);
    for (const auto& [r, why] : table.warnings)
      std::fprintf(stderr, "warning: r=%d failed: %s\n", r, why.c_str());

    std::string mcsv;
    for (const auto& [r, col] : table.minval)
      for (std::size_t k = 0; k < col.size(); ++k)
        mcsv += std::to_string(r) + "," + std::to_string(k + 1) + "," + fmt(col[k]) + "\n";
    seba::write_text_file(scan_common.out + "/scan.csv", mcsv);
    std::string rcsv;
    for (const auto& [k, r] : table.r_min_of_k)
      rcsv += std::to_string(k) + "," + std::to_string(r) + "\n";
    seba::write_text_file(scan_common.out + "/rmin.csv", rcsv);
    const auto pairs = seba::select_kr(table);
    std::string pcsv;
    for (const auto& [k, r] : pairs) pcsv += std::to_string(k) + "," + std::to_string(r) + "\n";
    seba::write_text_file(scan_common.out + "/pairs.csv", pcsv);
    seba::write_scan_svg(scan_common.out + "/scan.svg", table);
    seba::write_rmin_svg(scan_common.out + "/rmin.svg", table);
    // Persist the sparse bases at the recommended r so thresholding can run
    // directly on the scan output.
    std::vector<int> written;
    for (const auto& [k, r] : pairs) {
      if (std::find(written.begin(), written.end(), r) != written.end()) continue;
      written.push_back(r);
      const seba::SparseBasis sb =
          basis.weights ? seba::seba_weighted(basis.truncated(r), cfg)
                        : seba::seba(basis.truncated(r), cfg);
      seba::write_seba1(scan_common.out + "/S_r" + std::to_string(r) + ".seba1", sb.S);
      seba::write_kv(scan_common.out + "/metrics_r" + std::to_string(r) + ".kv",
                     seba_sidecar(sb, scan_tol, false));
    }
  });

  // ---- threshold -------------------------------------------------------------
  auto thr_cmd = app.add_subcommand("threshold", "hard feature extraction");
  CommonOpts thr_common;
  std::string thr_input, thr_method = "disjoint", thr_grid, thr_image;
  int thr_levels = 256, thr_upsample = 1;
  thr_cmd->add_option("--input", thr_input, "sparse matrix S (CSV or SEBA1)")->required();
  thr_cmd->add_option("--method", thr_method,
                      "partition-unity|disjoint|maxlike|manual:<tau>|cheeger");
  thr_cmd->add_option("--grid", thr_grid, "grid manifest (cheeger method)");
  thr_cmd->add_option("--image-points", thr_image, "mapped node positions (cheeger method)");
  thr_cmd->add_option("--levels", thr_levels, "cheeger level count");
  thr_cmd->add_option("--upsample", thr_upsample, "cheeger grid refinement factor");
  add_common(thr_cmd, thr_common);
  thr_cmd->callback([&] {
    write_resolved_config(thr_cmd, thr_common.out);
    const seba::DenseMatrix s = seba::read_matrix(thr_input);
    seba::FeatureAssignment fa;
    if (thr_method == "partition-unity") {
      fa = seba::partition_unity(s);
    } else if (thr_method == "disjoint") {
      fa = seba::disjoint_support(s);
    } else if (thr_method == "maxlike") {
      fa = seba::max_likelihood(s);
    } else if (thr_method.rfind("manual:", 0) == 0) {
      fa = seba::manual_threshold(s, std::stod(thr_method.substr(7)));
    } else if (thr_method == "cheeger") {
      if (thr_grid.empty())
        throw seba::InvalidArgument("threshold --method cheeger requires --grid");
      // A separate level-set threshold per column, then maximum likelihood.
      fa.method = seba::AssignMethod::cheeger;
      fa.thresholded_S = s;
      fa.column_taus.resize(s.cols());
      for (std::size_t j = 0; j < s.cols(); ++j) {
        std::vector<double> col(s.col(j), s.col(j) + s.rows());
        seba::GridField f = load_grid_field(thr_grid, col, thr_image);
        if (thr_upsample > 1) f = f.refined(thr_upsample);
        const seba::CheegerResult res =
            seba::cheeger_threshold(f, thr_levels, thr_common.threads);
        fa.column_taus[j] = res.tau_star;
        for (std::size_t i = 0; i < s.rows(); ++i)
          fa.thresholded_S(i, j) = seba::hard_threshold(std::max(s(i, j), 0.0), res.tau_star);
      }
      for (std::size_t i = 0; i < s.rows(); ++i) {
        int arg = 0;
        double best = 0.0;
        for (std::size_t j = 0; j < s.cols(); ++j)
          if (fa.thresholded_S(i, j) > best) {
            best = fa.thresholded_S(i, j);
            arg = static_cast<int>(j) + 1;
          }
        fa.a.push_back(arg);
      }
    } else {
      throw seba::InvalidArgument("unknown threshold method: " + thr_method);
    }
    const auto super = seba::superposition(s);
    write_assignment(thr_common.out, fa, super);
    if (!thr_grid.empty()) {
      // Superposition heatmap over the grid, with the thresholded features on top.
      seba::GridField f = load_grid_field(thr_grid, super, thr_image);
      seba::write_field_svg(thr_common.out + "/superposition.svg", f);
    }
  });

  // ---- cheeger ------------------------------------------------------------------
  auto ch_cmd = app.add_subcommand("cheeger", "scale-invariant Cheeger level selection");
  CommonOpts ch_common;
  std::string ch_input, ch_grid, ch_image;
  int ch_levels = 256, ch_upsample = 1;
  ch_cmd->add_option("--input", ch_input, "field value column (one value per node)")
      ->required();
  ch_cmd->add_option("--grid", ch_grid, "grid manifest")->required();
  ch_cmd->add_option("--image-points", ch_image, "mapped node positions (default: identity)");
  ch_cmd->add_option("--levels", ch_levels, "number of thresholds swept");
  ch_cmd->add_option("--upsample", ch_upsample, "grid refinement factor");
  add_common(ch_cmd, ch_common);
  ch_cmd->callback([&] {
    write_resolved_config(ch_cmd, ch_common.out);
    seba::GridField f = load_grid_field(ch_grid, seba::read_value_column(ch_input), ch_image);
    if (ch_upsample > 1) f = f.refined(ch_upsample);
    const seba::CheegerResult res = seba::cheeger_threshold(f, ch_levels, ch_common.threads);
    write_cheeger_outputs(ch_common.out, "cheeger", res);
    seba::write_field_svg(ch_common.out + "/field.svg", f, res.contour);
    std::printf("tau_star=%s h_star=%s flat=[%s,%s]\n", fmt(res.tau_star).c_str(),
                fmt(res.h_star).c_str(), fmt(res.flat_lo).c_str(), fmt(res.flat_hi).c_str());
  });

  // ---- demo ---------------------------------------------------------------------
  auto demo_cmd = app.add_subcommand("demo", "generate a demonstration eigenbasis");
  CommonOpts demo_common;
  std::string demo_name;
  int demo_nx = 120, demo_ny = 36, demo_samples = 100, demo_r = 16;
  double demo_t0 = 0.0, demo_t1 = 40.0, demo_step = 0.1, demo_eps = 0.05;
  double demo_radius = 0.35;
  std::vector<int> demo_blocks{50, 30, 20};
  int demo_ndisk = 240, demo_nblob = 40;
  demo_cmd->add_option("name", demo_name, "bickley|blocks|blobs")->required();
  demo_cmd->add_option("--grid-nx", demo_nx, "Ulam boxes in x");
  demo_cmd->add_option("--grid-ny", demo_ny, "Ulam boxes in y");
  demo_cmd->add_option("--samples", demo_samples, "sample points per box");
  demo_cmd->add_option("--t0", demo_t0, "flow start time (days)");
  demo_cmd->add_option("--t1", demo_t1, "flow end time (days)");
  demo_cmd->add_option("--step", demo_step, "RK4 step (days)");
  demo_cmd->add_option("--r", demo_r, "number of vectors to export");
  demo_cmd->add_option("--eps", demo_eps, "block leak probability");
  demo_cmd->add_option("--blocks", demo_blocks, "block sizes")->delimiter(',');
  demo_cmd->add_option("--radius", demo_radius, "graph connectivity radius");
  demo_cmd->add_option("--n-disk", demo_ndisk, "points in the central disk");
  demo_cmd->add_option("--n-blob", demo_nblob, "points per peripheral blob");
  add_common(demo_cmd, demo_common);
  demo_cmd->callback([&] {
    write_resolved_config(demo_cmd, demo_common.out);
    const std::string& out = demo_common.out;
    if (demo_name == "bickley") {
      seba::BickleyFlow flow;
      seba::UlamGrid grid{demo_nx, demo_ny, flow.x0, flow.x1, flow.y0, flow.y1, true};
      const auto vel = [&flow](double x, double y, double t) {
        return flow.velocity(x, y, t);
      };
      const seba::UlamOperator op = seba::ulam_build(
          vel, grid, demo_t0, demo_t1, demo_samples, demo_common.seed, demo_step,
          demo_common.threads);
      const seba::EigenBasis basis = seba::ulam_eigenbasis(op, demo_r, demo_common.threads);
      seba::write_seba1(out + "/V.seba1", basis.V);
      seba::write_value_column(out + "/eigenvalues.csv", *basis.eigenvalues);
      // Image of the box centers under the flow, wrapped into the domain.
      std::vector<std::array<double, 2>> centers(static_cast<std::size_t>(op.boxes()));
      for (int b = 0; b < op.boxes(); ++b) centers[static_cast<std::size_t>(b)] = op.box_center(b);
      auto image = seba::flow_map(vel, centers, demo_t0, demo_t1, demo_step,
                                  demo_common.threads);
      seba::DenseMatrix img(image.size(), 2);
      for (std::size_t i = 0; i < image.size(); ++i) {
        double x = std::fmod(image[i][0] - flow.x0, flow.x1 - flow.x0);
        if (x < 0) x += flow.x1 - flow.x0;
        img(i, 0) = x + flow.x0;
        img(i, 1) = image[i][1];
      }
      seba::write_csv_matrix(out + "/image_points.csv", img);
      seba::KvPairs kv;
      kv.emplace_back("demo", "bickley");
      kv.emplace_back("kind", "markov");
      kv.emplace_back("d", "2");
      kv.emplace_back("nx", std::to_string(demo_nx));
      kv.emplace_back("ny", std::to_string(demo_ny));
      kv.emplace_back("x0", fmt(flow.x0));
      kv.emplace_back("x1", fmt(flow.x1));
      kv.emplace_back("y0", fmt(flow.y0));
      kv.emplace_back("y1", fmt(flow.y1));
      kv.emplace_back("x_periodic", "1");
      kv.emplace_back("samples_per_box", std::to_string(demo_samples));
      kv.emplace_back("t0", fmt(demo_t0));
      kv.emplace_back("t1", fmt(demo_t1));
      kv.emplace_back("rk4_step", fmt(demo_step));
      kv.emplace_back("seed", std::to_string(demo_common.seed));
      kv.emplace_back("r", std::to_string(demo_r));
      seba::write_kv(out + "/manifest.kv", kv);
    } else if (demo_name == "blocks") {
      const seba::BlockMarkov bm =
          seba::block_markov_demo(demo_blocks, demo_eps, demo_common.seed);
      seba::write_seba1(out + "/V.seba1", bm.basis.V);
      seba::write_value_column(out + "/eigenvalues.csv", *bm.basis.eigenvalues);
      std::string tcsv;
      for (std::size_t i = 0; i < bm.truth.size(); ++i)
        tcsv += std::to_string(i) + "," + std::to_string(bm.truth[i]) + "\n";
      seba::write_text_file(out + "/truth.csv", tcsv);
      seba::KvPairs kv;
      kv.emplace_back("demo", "blocks");
      kv.emplace_back("kind", "markov");
      kv.emplace_back("d", "1");
      std::string bs;
      for (std::size_t i = 0; i < demo_blocks.size(); ++i) {
        if (i) bs.push_back(',');
        bs += std::to_string(demo_blocks[i]);
      }
      kv.emplace_back("blocks", bs);
      kv.emplace_back("eps", fmt(demo_eps));
      kv.emplace_back("seed", std::to_string(demo_common.seed));
      seba::write_kv(out + "/manifest.kv", kv);
    } else if (demo_name == "blobs") {
      const seba::BlobCloud cloud =
          seba::blob_disk_cloud(demo_common.seed, demo_ndisk, demo_nblob);
      const seba::EigenBasis basis =
          seba::graph_laplacian_demo(cloud.points, demo_radius, demo_r);
      seba::write_seba1(out + "/V.seba1", basis.V);
      seba::write_value_column(out + "/eigenvalues.csv", *basis.eigenvalues);
      seba::DenseMatrix pts(cloud.points.size(), 2);
      for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        pts(i, 0) = cloud.points[i][0];
        pts(i, 1) = cloud.points[i][1];
      }
      seba::write_csv_matrix(out + "/points.csv", pts);
      std::string tcsv;
      for (std::size_t i = 0; i < cloud.truth.size(); ++i)
        tcsv += std::to_string(i) + "," + std::to_string(cloud.truth[i]) + "\n";
      seba::write_text_file(out + "/truth.csv", tcsv);
      seba::KvPairs kv;
      kv.emplace_back("demo", "blobs");
      kv.emplace_back("kind", "neumann");
      kv.emplace_back("d", "2");
      kv.emplace_back("radius", fmt(demo_radius));
      kv.emplace_back("n_disk", std::to_string(demo_ndisk));
      kv.emplace_back("n_blob", std::to_string(demo_nblob));
      kv.emplace_back("seed", std::to_string(demo_common.seed));
      kv.emplace_back("r", std::to_string(demo_r));
      seba::write_kv(out + "/manifest.kv", kv);
    } else {
      throw seba::InvalidArgument("unknown demo: " + demo_name);
    }
  });

  try {
    std::vector<std::string> args =
        with_config_expanded(std::vector<std::string>(argv + 1, argv + argc));
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const seba::NoConvergence& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const seba::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return exit_code;
}
