#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "seba/basis.hpp"
#include "seba/bickley.hpp"
#include "seba/error.hpp"
#include "seba/linalg.hpp"
#include "seba/matrix.hpp"
#include "seba/parallel.hpp"
#include "seba/rng.hpp"

namespace seba {

// Ulam discretization of the transfer operator: P_ij is the fraction of the
// uniform sample points of box i carried into box j by the flow map.  L is
// the normalized operator whose singular vectors are computed; with uniform
// reference measure on equal-area boxes this is the column reweighting
// L = P diag(colsum)^{-1/2}, which pins the leading singular value to exactly
// 1 with a constant left singular vector.
struct UlamOperator {
  int nx = 0, ny = 0;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool x_periodic = false;
  int samples_per_box = 0;
  std::uint64_t seed = 0;
  DenseMatrix P;
  DenseMatrix L;
  std::vector<double> col_mass;  // column sums of P

  int boxes() const { return nx * ny; }
  std::array<double, 2> box_center(int b) const {
    const int ix = b % nx, iy = b / nx;
    return {x0 + (ix + 0.5) * (x1 - x0) / nx, y0 + (iy + 0.5) * (y1 - y0) / ny};
  }
};

struct UlamGrid {
  int nx = 0, ny = 0;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool x_periodic = false;
};

template <class Vel>
UlamOperator ulam_build(const Vel& vel, const UlamGrid& grid, double t0, double t1,
                        int samples_per_box, std::uint64_t seed, double rk4_step,
                        int threads = 1) {
  if (grid.nx < 1 || grid.ny < 1) throw InvalidArgument("ulam_build: empty grid");
  if (samples_per_box < 1) throw InvalidArgument("ulam_build: samples_per_box must be >= 1");
  const int n = grid.nx * grid.ny;
  const double bw = (grid.x1 - grid.x0) / grid.nx;
  const double bh = (grid.y1 - grid.y0) / grid.ny;

  // Sample points are drawn sequentially from one stream, then advected in
  // parallel; the transition counts never depend on the thread count.
  std::vector<std::array<double, 2>> pts(static_cast<std::size_t>(n) * samples_per_box);
  SplitMix64 rng(seed);
  for (int b = 0; b < n; ++b) {
    const int ix = b % grid.nx, iy = b / grid.nx;
    for (int s = 0; s < samples_per_box; ++s) {
      const double x = grid.x0 + (ix + rng.uniform()) * bw;
      const double y = grid.y0 + (iy + rng.uniform()) * bh;
      pts[static_cast<std::size_t>(b) * samples_per_box + s] = {x, y};
    }
  }
  const auto mapped = flow_map(vel, pts, t0, t1, rk4_step, threads);

  UlamOperator op;
  op.nx = grid.nx;
  op.ny = grid.ny;
  op.x0 = grid.x0;
  op.x1 = grid.x1;
  op.y0 = grid.y0;
  op.y1 = grid.y1;
  op.x_periodic = grid.x_periodic;
  op.samples_per_box = samples_per_box;
  op.seed = seed;
  op.P = DenseMatrix(n, n);
  // Integer counts, one division at the end: P entries are exact multiples of
  // 1/samples and rows sum to 1 to full precision.
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(n) * n, 0);
  for (int b = 0; b < n; ++b) {
    for (int s = 0; s < samples_per_box; ++s) {
      const auto& q = mapped[static_cast<std::size_t>(b) * samples_per_box + s];
      double qx = q[0];
      if (grid.x_periodic) {
        qx = std::fmod(qx - grid.x0, grid.x1 - grid.x0);
        if (qx < 0) qx += grid.x1 - grid.x0;
        qx += grid.x0;
      }
      int jx = static_cast<int>(std::floor((qx - grid.x0) / bw));
      int jy = static_cast<int>(std::floor((q[1] - grid.y0) / bh));
      jx = std::min(std::max(jx, 0), grid.nx - 1);
      jy = std::min(std::max(jy, 0), grid.ny - 1);
      ++counts[static_cast<std::size_t>(jy * grid.nx + jx) * n + b];
    }
  }
  for (int j = 0; j < n; ++j) {
    double* pj = op.P.col(j);
    const std::uint32_t* cj = counts.data() + static_cast<std::size_t>(j) * n;
    for (int i = 0; i < n; ++i)
      if (cj[i]) pj[i] = static_cast<double>(cj[i]) / samples_per_box;
  }

  op.col_mass.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double* cj = op.P.col(j);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += cj[i];
    op.col_mass[j] = s;
  }
  op.L = op.P;
  for (int j = 0; j < n; ++j) {
    if (op.col_mass[j] <= 0.0) continue;  // box never hit; column stays zero
    const double inv = 1.0 / std::sqrt(op.col_mass[j]);
    double* cj = op.L.col(j);
    for (int i = 0; i < n; ++i) cj[i] *= inv;
  }
  return op;
}

struct UlamSpectrum {
  std::vector<double> singular_values;  // descending, sigma_1 = 1
  DenseMatrix left_vectors;             // orthonormal, one column per value
};

// Leading left singular pairs of L via the eigenproblem of L Lᵀ.  The Gram
// matrix is assembled from the sparse columns of L (each box reaches few
// boxes), then handed to block subspace iteration.
inline UlamSpectrum ulam_singular_vectors(const UlamOperator& op, int k, int threads = 1,
                                          double tol = 1e-9, int max_iter = 3000) {
  const std::size_t n = static_cast<std::size_t>(op.boxes());
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw InvalidArgument("ulam_singular_vectors: bad k");
  DenseMatrix gram(n, n);
  std::vector<std::pair<std::size_t, double>> nz;
  for (std::size_t j = 0; j < n; ++j) {
    nz.clear();
    const double* cj = op.L.col(j);
    for (std::size_t i = 0; i < n; ++i)
      if (cj[i] != 0.0) nz.emplace_back(i, cj[i]);
    for (const auto& [i1, v1] : nz) {
      double* gcol = gram.col(i1);
      for (const auto& [i2, v2] : nz) gcol[i2] += v1 * v2;
    }
  }

  TopkOptions opts;
  opts.threads = threads;
  opts.tol = tol;
  opts.max_iter = max_iter;
  opts.seed = op.seed ^ 0x9e3779b9;
  EigResult eig = symmetric_topk(gram, static_cast<std::size_t>(k), opts);
  UlamSpectrum spec;
  spec.singular_values.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    spec.singular_values[static_cast<std::size_t>(i)] =
        std::sqrt(std::max(eig.values[static_cast<std::size_t>(i)], 0.0));
  spec.left_vectors = std::move(eig.vectors);
  return spec;
}

inline EigenBasis ulam_eigenbasis(const UlamOperator& op, int k, int threads = 1) {
  UlamSpectrum spec = ulam_singular_vectors(op, k, threads);
  // Clamp the tiny positive drift of sigma_1 so the basis passes its own
  // markov-kind validation.
  if (!spec.singular_values.empty() && spec.singular_values[0] > 1.0)
    for (double& s : spec.singular_values) s = std::min(s, 1.0);
  return EigenBasis(std::move(spec.left_vectors), OperatorKind::markov, 2,
                    std::move(spec.singular_values));
}

}  // namespace seba
