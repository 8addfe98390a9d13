// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Criterion 9 exercises the CLI binary passed via --cli.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "seba/basis.hpp"
#include "seba/bickley.hpp"
#include "seba/cheeger.hpp"
#include "seba/demos.hpp"
#include "seba/grid.hpp"
#include "seba/heuristics.hpp"
#include "seba/io.hpp"
#include "seba/linalg.hpp"
#include "seba/matrix.hpp"
#include "seba/parallel.hpp"
#include "seba/seba.hpp"
#include "seba/thresholding.hpp"
#include "seba/ulam.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using seba::DenseMatrix;
using seba::EigenBasis;
using seba::OperatorKind;

namespace {

std::string g_cli;
int g_threads = seba::default_threads();

struct Criterion {
  int id;
  std::string name;
  std::function<void(std::string&)> body;  // throws or appends detail on failure
};

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure(what);
}

double objective_of_output(const EigenBasis& basis, const seba::SparseBasis& sb) {
  DenseMatrix s = sb.S;
  for (std::size_t j = 0; j < s.cols(); ++j) {
    double* c = s.col(j);
    double n = 0.0;
    for (std::size_t i = 0; i < s.rows(); ++i) n += c[i] * c[i];
    n = std::sqrt(n);
    for (std::size_t i = 0; i < s.rows(); ++i) c[i] /= n;
  }
  return seba::seba_objective(basis.V, s, sb.R, sb.mu);
}

// ---- 1: SO(2) brute-force equivalence ------------------------------------------

void criterion_brute_force(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  seba::SplitMix64 rng(101);
  double worst = 0.0;
  int trapped = 0;
  std::string first_trap;
  for (int t = 0; t < 50; ++t) {
    const EigenBasis basis(oracles::random_orthonormal(6, 2, rng),
                           OperatorKind::laplace_neumann, 2);
    const auto sb = seba::seba(basis);
    const double got = objective_of_output(basis, sb);
    const double best = oracles::best_objective_over_o2(basis.V, sb.mu, 1e-4);
    worst = std::max(worst, std::abs(got - best));
    if (std::abs(got - best) > 1e-6) {
      ++trapped;
      if (first_trap.empty())
        first_trap = "case " + std::to_string(t) + " converged to a local minimum " +
                     seba::format_double(got - best) + " above the grid optimum";
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  require(secs < 10.0, "runtime " + std::to_string(secs) + " s exceeds 10 s");
  // The iteration is nonconvex; from the fixed identity start a small
  // fraction of bases converge to a genuine (perturbation-stable) local
  // minimum.  The count makes that visible instead of hiding it in a seed.
  require(trapped == 0, std::to_string(50 - trapped) + "/50 within 1e-6; " + first_trap);
  detail = "max |objective - grid min| = " + seba::format_double(worst) + ", " +
           std::to_string(secs).substr(0, 4) + " s";
}

// ---- 2: monotone objective -------------------------------------------------------

void criterion_monotone(std::string& detail) {
  seba::SplitMix64 rng(202);
  double worst_slack = 0.0, worst_orth = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t p = 4 + rng.below(497);           // p <= 500
    const std::size_t r = 2 + rng.below(std::min<std::uint64_t>(9, p - 1));  // r <= 10
    const EigenBasis basis(oracles::random_orthonormal(p, r, rng),
                           OperatorKind::laplace_neumann, 2);
    const auto sb = seba::seba(basis);
    for (std::size_t i = 1; i < sb.objective_trace.size(); ++i) {
      const double rise = sb.objective_trace[i] - sb.objective_trace[i - 1];
      worst_slack = std::max(worst_slack, rise);
      require(rise <= 1e-12, "objective rose by " + seba::format_double(rise) +
                                 " at iteration " + std::to_string(i));
    }
    worst_orth = std::max(worst_orth, sb.max_rotation_orthogonality_error);
    require(sb.max_rotation_orthogonality_error <= 1e-10,
            "rotation orthogonality error " +
                seba::format_double(sb.max_rotation_orthogonality_error));
  }
  detail = "max rise = " + seba::format_double(worst_slack) +
           ", max |RᵀR-I| = " + seba::format_double(worst_orth);
}

// ---- 3: threshold order -----------------------------------------------------------

void criterion_threshold_order(std::string& detail) {
  seba::SplitMix64 rng(303);
  int equal_cases = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t p = 2 + rng.below(60), r = 1 + rng.below(6);
    DenseMatrix s(p, r);
    for (auto& v : s.data()) {
      v = rng.uniform(-0.5, 1.0);
      if (rng.uniform() < 0.35) v = 0.0;
    }
    for (std::size_t j = 0; j < r; ++j) {
      double* c = s.col(j);
      double mx = *std::max_element(c, c + p);
      if (mx <= 0.05) {
        c[rng.below(p)] = 1.0;
        mx = 1.0;
      }
      for (std::size_t i = 0; i < p; ++i) c[i] /= mx;
    }
    const double tau_pu = seba::partition_unity(s).tau;
    const double tau_dp = seba::disjoint_support(s).tau;
    require(tau_dp >= tau_pu - 1e-12,
            "tau_dp < tau_pu: " + seba::format_double(tau_dp) + " vs " +
                seba::format_double(tau_pu));
    if (tau_dp >= 0.5) {
      ++equal_cases;
      require(std::abs(tau_dp - tau_pu) <= 1e-12,
              "tau_dp >= 0.5 but differs from tau_pu by " +
                  seba::format_double(std::abs(tau_dp - tau_pu)));
    }
  }
  detail = std::to_string(equal_cases) + "/500 cases hit the tau_dp >= 0.5 branch";
}

// ---- 4: weighted reduction and mu bound -------------------------------------------

void criterion_weighted(std::string& detail) {
  seba::SplitMix64 rng(404);

  // unit weights reproduce the unweighted run entrywise
  {
    const DenseMatrix v = oracles::random_orthonormal(40, 4, rng);
    const auto plain = seba::seba(EigenBasis(v, OperatorKind::laplace_neumann, 2));
    const auto weighted = seba::seba_weighted(
        EigenBasis(v, OperatorKind::laplace_neumann, 2, std::nullopt,
                   seba::WeightVector(std::vector<double>(40, 1.0))));
    require(seba::max_abs_diff(plain.S, weighted.S) <= 1e-12,
            "unit-weight S differs by " +
                seba::format_double(seba::max_abs_diff(plain.S, weighted.S)));
    require(seba::max_abs_diff(plain.R, weighted.R) <= 1e-12, "unit-weight R differs");
  }

  // the constant l2,nu-unit vector dies exactly at the bound and survives below
  {
    std::vector<double> w(17);
    for (auto& x : w) x = rng.uniform(0.2, 3.0);
    const seba::WeightVector nu(w);
    const double c = 1.0 / std::sqrt(nu.l1());
    bool dead_at_bound = true, alive_below = false;
    for (std::size_t i = 0; i < nu.size(); ++i) {
      const double root = std::sqrt(nu[i]);
      if (seba::soft_threshold(root * c, (1.0 / std::sqrt(nu.l1())) * root) != 0.0)
        dead_at_bound = false;
      if (seba::soft_threshold(root * c, (0.99 / std::sqrt(nu.l1())) * root) != 0.0)
        alive_below = true;
    }
    require(dead_at_bound, "C'_{mu,nu} did not annihilate the constant vector at the bound");
    require(alive_below, "C'_{mu,nu} annihilated the constant vector below the bound");
  }

  // duplicate-row oracle on 20 random fixtures
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t p0 = 6 + rng.below(6), r = 2 + rng.below(2);
    std::vector<int> mult(p0);
    std::size_t p_dup = 0;
    for (auto& m : mult) {
      m = 1 + static_cast<int>(rng.below(4));
      p_dup += static_cast<std::size_t>(m);
    }
    const seba::WeightVector nu(std::vector<double>(mult.begin(), mult.end()));
    const DenseMatrix v0 =
        seba::qr_orthonormalize_w(oracles::random_gaussian(p0, r, rng), nu);
    DenseMatrix vdup(p_dup, r);
    std::size_t at = 0;
    for (std::size_t i = 0; i < p0; ++i)
      for (int k = 0; k < mult[i]; ++k, ++at)
        for (std::size_t j = 0; j < r; ++j) vdup(at, j) = v0(i, j);
    seba::SebaConfig cfg;
    cfg.mu = 0.9 / std::sqrt(nu.l1());
    const auto weighted = seba::seba_weighted(
        EigenBasis(v0, OperatorKind::laplace_neumann, 2, std::nullopt, nu), cfg);
    const auto duplicated =
        seba::seba(EigenBasis(vdup, OperatorKind::laplace_neumann, 2), cfg);
    at = 0;
    for (std::size_t i = 0; i < p0; ++i) {
      for (std::size_t j = 0; j < r; ++j) {
        const double d = std::abs(duplicated.S(at, j) - weighted.S(i, j));
        worst = std::max(worst, d);
        require(d <= 1e-8, "duplicate-row mismatch " + seba::format_double(d));
      }
      at += static_cast<std::size_t>(mult[i]);
    }
  }
  detail = "duplicate-row max mismatch = " + seba::format_double(worst);
}

// ---- 5: block Markov recovery ------------------------------------------------------

double block_recovery(const seba::BlockMarkov& bm, const std::vector<int>& labels) {
  // best fraction over feature->block label permutations (3 features)
  std::vector<int> perm{1, 2, 3};
  double best = 0.0;
  std::sort(perm.begin(), perm.end());
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < bm.truth.size(); ++i)
      if (labels[i] == perm[static_cast<std::size_t>(bm.truth[i])]) ++hits;
    best = std::max(best, double(hits) / double(bm.truth.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void criterion_block_markov(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto leaky = seba::block_markov_demo({50, 30, 20}, 0.05, 42);
  const auto sb = seba::seba(leaky.basis);
  for (double m : sb.m)
    require(m == 0.0 || std::abs(m) <= 1e-12, "m_j = " + seba::format_double(m) + " != 0");
  const auto fa = seba::disjoint_support(sb);
  const double frac = block_recovery(leaky, fa.a);
  require(frac >= 0.95, "recovery " + std::to_string(frac) + " below 0.95");

  const auto exact = seba::block_markov_demo({50, 30, 20}, 0.0, 42);
  const auto sb0 = seba::seba(exact.basis);
  require(sb0.metrics.subspace_error <= 1e-6,
          "subspace error " + seba::format_double(sb0.metrics.subspace_error));
  const double frac0 = block_recovery(exact, seba::disjoint_support(sb0).a);
  require(frac0 == 1.0, "eps=0 recovery " + std::to_string(frac0) + " below 1");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  require(secs < 5.0, "runtime " + std::to_string(secs) + " s exceeds 5 s");
  detail = "recovery " + std::to_string(frac).substr(0, 6) + " at eps=0.05, exact at 0";
}

// ---- 6: Weyl exactness ---------------------------------------------------------------

void criterion_weyl(std::string& detail) {
  for (double c : {0.5, 1.0, 7.0}) {
    for (int d : {1, 2, 3}) {
      std::vector<double> lam;
      for (int r = 1; r <= 24; ++r) lam.push_back(-c * std::pow(double(r - 1), 2.0 / d));
      const auto spec = seba::weyl_rescale(lam, OperatorKind::laplace_neumann, d);
      for (const auto& [r, v] : spec.values)
        require(std::abs(v + c) <= 1e-12, "C=" + std::to_string(c) + " d=" +
                                              std::to_string(d) + ": rescaled value " +
                                              seba::format_double(v) + " at r=" +
                                              std::to_string(r));
      for (const auto& [r, drop] : spec.drops)
        require(std::abs(drop) <= 1e-12, "drop " + seba::format_double(drop) +
                                             " flagged at r=" + std::to_string(r));
    }
  }
  detail = "constant within 1e-12 for C in {0.5,1,7}, d in {1,2,3}";
}

// ---- 7: Cheeger analytic circle -------------------------------------------------------

seba::GridField acceptance_bump(int n) {
  std::vector<double> vals(std::size_t(n) * n);
  std::vector<std::array<double, 2>> img(vals.size());
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double x = -1.0 + 2.0 * ix / (n - 1);
      const double y = -1.0 + 2.0 * iy / (n - 1);
      vals[std::size_t(iy) * n + ix] = std::exp(-3.0 * (x * x + y * y));
      img[std::size_t(iy) * n + ix] = {x, y};
    }
  return seba::GridField(n, n, -1, 1, -1, 1, false, std::move(vals), std::move(img));
}

void criterion_cheeger(std::string& detail) {
  const double target = 2.0 * std::sqrt(3.14159265358979323846);
  auto field = acceptance_bump(400);
  const auto id = seba::cheeger_threshold(field, 256, g_threads);
  require(std::abs(id.h_star - target) <= 0.02 * target,
          "identity-map h = " + seba::format_double(id.h_star) + " vs " +
              seba::format_double(target));
  const double ang = 0.7;
  for (auto& p : field.image_points)
    p = {std::cos(ang) * p[0] - std::sin(ang) * p[1],
         std::sin(ang) * p[0] + std::cos(ang) * p[1]};
  const auto rot = seba::cheeger_threshold(field, 256, g_threads);
  require(std::abs(rot.h_star - id.h_star) <= 0.02 * id.h_star,
          "rotated h = " + seba::format_double(rot.h_star) + " vs identity " +
              seba::format_double(id.h_star));
  detail = "h = " + seba::format_double(id.h_star) + " (target " +
           seba::format_double(target) + "), rotation matches";
}

// ---- 8: Bickley coarse pipeline ---------------------------------------------------------

struct FeatureGeometry {
  double mean_y = 0.0;
  double extent_x = 0.0;  // circular support extent over the 20 Mm period
  double center_x = 0.0;  // circular mean
  std::size_t support = 0;
};

FeatureGeometry feature_geometry(const seba::UlamOperator& op, const DenseMatrix& s,
                                 std::size_t col) {
  FeatureGeometry g;
  const double period = op.x1 - op.x0;
  std::vector<double> xs;
  double sy = 0.0, cx = 0.0, sx = 0.0;
  for (int b = 0; b < op.boxes(); ++b) {
    if (s(static_cast<std::size_t>(b), col) < 0.5) continue;
    const auto c = op.box_center(b);
    xs.push_back(c[0]);
    sy += c[1];
    const double ang = 2.0 * 3.14159265358979323846 * (c[0] - op.x0) / period;
    cx += std::cos(ang);
    sx += std::sin(ang);
  }
  g.support = xs.size();
  if (xs.empty()) return g;
  g.mean_y = sy / double(xs.size());
  g.center_x = op.x0 + std::fmod(std::atan2(sx, cx) / (2.0 * 3.14159265358979323846) + 1.0,
                                 1.0) * period;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double max_gap = xs.front() + period - xs.back();
  for (std::size_t i = 1; i < xs.size(); ++i) max_gap = std::max(max_gap, xs[i] - xs[i - 1]);
  g.extent_x = period - max_gap;
  return g;
}

double circular_distance(double a, double b, double period) {
  double d = std::abs(a - b);
  d = std::fmod(d, period);
  return std::min(d, period - d);
}

void criterion_bickley(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  seba::BickleyFlow flow;
  const auto vel = [&flow](double x, double y, double t) { return flow.velocity(x, y, t); };
  const seba::UlamGrid grid{120, 36, flow.x0, flow.x1, flow.y0, flow.y1, true};
  const auto op = seba::ulam_build(vel, grid, 0.0, 40.0, 100, 1, 0.1, g_threads);
  // Spectrum under consideration: r <= 15.
  const auto basis = seba::ulam_eigenbasis(op, 15, g_threads);

  // Weyl-rescaled Markov spectrum: the two largest drops land at r = 2 and
  // r = 8.
  const auto spec = seba::weyl_rescale(*basis.eigenvalues, OperatorKind::markov, 2);
  require(spec.drops.size() >= 2, "not enough drops computed");
  const int d1 = spec.drops[0].first, d2 = spec.drops[1].first;
  require((d1 == 2 && d2 == 8) || (d1 == 8 && d2 == 2),
          "two largest drops at r=" + std::to_string(d1) + "," + std::to_string(d2) +
              " (want 2 and 8)");

  // SEBA at r = 8: at least 6 reliable columns.
  const auto sb = seba::seba(basis.truncated(8));
  int reliable = 0;
  for (double m : sb.m)
    if (m >= -0.1) ++reliable;
  require(reliable >= 6, "only " + std::to_string(reliable) + " columns with m_j >= -0.1");

  // Support geometry: two zonal jet-side features (one per sign of y) and six
  // compact vortices, three per side, spaced one wavelength (20/3 Mm) apart.
  std::vector<FeatureGeometry> geom;
  for (std::size_t j = 0; j < 8; ++j) geom.push_back(feature_geometry(op, sb.S, j));
  std::vector<std::size_t> jets, vortices;
  for (std::size_t j = 0; j < 8; ++j) {
    if (geom[j].support == 0) continue;
    if (geom[j].extent_x > 12.0) jets.push_back(j);
    else if (geom[j].extent_x < 6.0) vortices.push_back(j);
  }
  require(jets.size() == 2, std::to_string(jets.size()) + " jet-side features (want 2)");
  require(geom[jets[0]].mean_y * geom[jets[1]].mean_y < 0,
          "jet sides do not separate by sign of y");
  require(vortices.size() == 6,
          std::to_string(vortices.size()) + " vortex features (want 6)");
  std::vector<std::size_t> upper, lower;
  for (std::size_t j : vortices) {
    require(std::abs(geom[j].mean_y) > 0.3 && std::abs(geom[j].mean_y) < 2.5,
            "vortex mean y = " + seba::format_double(geom[j].mean_y));
    (geom[j].mean_y > 0 ? upper : lower).push_back(j);
  }
  require(upper.size() == 3 && lower.size() == 3, "vortices not split 3 + 3 by y sign");
  const double wavelength = 20.0 / 3.0;
  for (const auto& side : {upper, lower})
    for (std::size_t a = 0; a < side.size(); ++a)
      for (std::size_t b = a + 1; b < side.size(); ++b) {
        const double d =
            circular_distance(geom[side[a]].center_x, geom[side[b]].center_x, 20.0);
        const double to_wave = std::min(std::abs(d - wavelength),
                                        std::abs(d - 2.0 * wavelength));
        require(to_wave < 1.6, "vortex spacing " + seba::format_double(d) +
                                   " off the wavelength grid");
      }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  require(secs < 180.0, "runtime " + std::to_string(secs) + " s exceeds 3 min");
  detail = "drops at {2,8}, " + std::to_string(reliable) + "/8 reliable, 2 jets + 6 vortices, " +
           std::to_string(secs).substr(0, 5) + " s";
}

// ---- 9: CLI determinism -------------------------------------------------------------------

int run_cli(const std::string& args) {
  const int rc = std::system((g_cli + " " + args + " >/dev/null 2>&1").c_str());
  return rc < 0 ? rc : WEXITSTATUS(rc);
}

void compare_trees(const fs::path& a, const fs::path& b) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename());
  std::sort(names.begin(), names.end());
  for (const auto& n : names) {
    if (n == "config.kv") continue;  // records the differing --out path
    require(fs::exists(b / n), "missing " + n + " on rerun");
    require(seba::read_binary_file((a / n).string()) ==
                seba::read_binary_file((b / n).string()),
            n + " differs between identical runs");
  }
}

void criterion_determinism(std::string& detail) {
  require(!g_cli.empty(), "no --cli path given");
  const fs::path work = fs::temp_directory_path() / "seba_acceptance_cli";
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string w = work.string();

  const std::string demo_args = "demo bickley --grid-nx 24 --grid-ny 8 --samples 10 "
                                "--t1 8 --step 0.2 --r 5 --seed 7 --threads 2 --out ";
  require(run_cli(demo_args + w + "/demo1") == 0, "bickley demo failed");
  require(run_cli(demo_args + w + "/demo2") == 0, "bickley demo rerun failed");
  compare_trees(work / "demo1", work / "demo2");

  require(run_cli("demo blocks --blocks 30,20,10 --eps 0.04 --seed 3 --out " + w +
                  "/blk1") == 0, "blocks demo failed");
  require(run_cli("demo blocks --blocks 30,20,10 --eps 0.04 --seed 3 --out " + w +
                  "/blk2") == 0, "blocks demo rerun failed");
  compare_trees(work / "blk1", work / "blk2");

  for (const char* suffix : {"1", "2"}) {
    require(run_cli("run --input " + w + "/demo1/V.seba1 --r 4 --out " + w + "/run" +
                    suffix) == 0, "run failed");
    require(run_cli("scan --input " + w + "/demo1/V.seba1 --r-max 5 --threads 2 --out " +
                    w + "/scan" + suffix) == 0, "scan failed");
    require(run_cli("threshold --input " + w + "/run1/S.seba1 --method partition-unity "
                    "--out " + w + "/thr" + suffix) == 0, "threshold failed");
    require(run_cli("eigengap --input " + w + "/demo1/eigenvalues.csv --kind markov --d 2 "
                    "--out " + w + "/gap" + suffix) == 0, "eigengap failed");
    const auto s = seba::read_seba1(w + "/run1/S.seba1");
    seba::write_csv_matrix(w + "/field.csv", s.first_cols(1));
    require(run_cli("cheeger --input " + w + "/field.csv --grid " + w +
                    "/demo1/manifest.kv --image-points " + w +
                    "/demo1/image_points.csv --levels 64 --threads 2 --out " + w +
                    "/ch" + suffix) == 0, "cheeger failed");
  }
  compare_trees(work / "run1", work / "run2");
  compare_trees(work / "scan1", work / "scan2");
  compare_trees(work / "thr1", work / "thr2");
  compare_trees(work / "gap1", work / "gap2");
  compare_trees(work / "ch1", work / "ch2");
  detail = "demo, run, scan, threshold, eigengap, cheeger byte-identical on rerun";
}

// ---- 10: linear-algebra self-consistency ------------------------------------------------

void criterion_linalg(std::string& detail) {
  seba::SplitMix64 rng(1010);
  double worst_polar = 0.0, worst_eig = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int pick = t % 4;
    if (pick == 0) {
      // polar vs the Newton iteration on well-conditioned full-rank input
      const std::size_t r = 2 + rng.below(5);
      const DenseMatrix q1 = oracles::random_orthonormal(r, r, rng);
      const DenseMatrix q2 = oracles::random_orthonormal(r, r, rng);
      DenseMatrix d(r, r);
      for (std::size_t i = 0; i < r; ++i) d(i, i) = rng.uniform(0.4, 2.5);
      const DenseMatrix a = seba::matmul(seba::matmul(q1, d), q2);
      const double diff =
          seba::max_abs_diff(seba::polar_orthonormal(a), oracles::newton_polar(a));
      worst_polar = std::max(worst_polar, diff);
      require(diff <= 1e-9, "polar vs Newton differs by " + seba::format_double(diff));
    } else if (pick == 1) {
      const std::size_t n = 2 + rng.below(24);
      DenseMatrix a(n, n);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i <= j; ++i) {
          const double v = rng.gaussian();
          a(i, j) = v;
          a(j, i) = v;
        }
      const auto eig = seba::symmetric_eig(a);
      const double scale = seba::frobenius_norm(a);
      for (std::size_t k = 0; k < n; ++k) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          double av = 0.0;
          for (std::size_t j = 0; j < n; ++j) av += a(i, j) * eig.vectors(j, k);
          const double dd = av - eig.values[k] * eig.vectors(i, k);
          rss += dd * dd;
        }
        const double res = std::sqrt(rss) / (scale > 0 ? scale : 1.0);
        worst_eig = std::max(worst_eig, res);
        require(res <= 1e-9, "eigen residual " + seba::format_double(res));
      }
    } else if (pick == 2) {
      const std::size_t n = 2 + rng.below(10);
      DenseMatrix a(n, n);
      for (auto& v : a.data()) v = rng.gaussian();
      const auto svd = seba::svd_small(a);
      require(seba::orthonormality_error(svd.u) <= 1e-12, "U not orthogonal");
      require(seba::orthonormality_error(svd.v) <= 1e-12, "V not orthogonal");
      DenseMatrix rec(n, n);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t i = 0; i < n; ++i)
            rec(i, j) += svd.u(i, k) * svd.sigma[k] * svd.v(j, k);
      require(seba::max_abs_diff(rec, a) <= 1e-10 * seba::frobenius_norm(a),
              "SVD reconstruction error too large");
    } else {
      const std::size_t p = 4 + rng.below(30);
      const std::size_t r = 1 + rng.below(std::min<std::uint64_t>(6, p));
      const DenseMatrix m = oracles::random_gaussian(p, r, rng);
      const DenseMatrix q = seba::qr_orthonormalize(m);
      require(seba::orthonormality_error(q) <= 1e-12, "QR not orthonormal");
      require(seba::max_abs_diff(oracles::projector(q),
                                 oracles::projector(oracles::gram_schmidt(m))) <= 1e-8,
              "QR span drifted from the oracle");
    }
  }
  detail = "max polar-Newton gap = " + seba::format_double(worst_polar) +
           ", max eig residual = " + seba::format_double(worst_eig);
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") g_cli = argv[i + 1];
    if (flag == "--threads") g_threads = std::atoi(argv[i + 1]);
  }

  const std::vector<Criterion> criteria{
      {1, "SEBA brute-force equivalence (r=2)", criterion_brute_force},
      {2, "monotone objective and rotation orthogonality", criterion_monotone},
      {3, "threshold-order theorem", criterion_threshold_order},
      {4, "weighted reduction and mu bound", criterion_weighted},
      {5, "block-Markov recovery", criterion_block_markov},
      {6, "Weyl exactness", criterion_weyl},
      {7, "Cheeger analytic circle", criterion_cheeger},
      {8, "Bickley coarse pipeline", criterion_bickley},
      {9, "CLI determinism", criterion_determinism},
      {10, "linear-algebra self-consistency", criterion_linalg},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      c.body(detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", c.id,
                c.name.c_str(), secs, detail.empty() ? "" : " - ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  if (failed) std::printf("%d criterion(s) FAILED\n", failed);
  else std::printf("all %zu criteria passed\n", criteria.size());
  return failed == 0 ? 0 : 1;
}
