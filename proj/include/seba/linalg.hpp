#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "seba/error.hpp"
#include "seba/matrix.hpp"
#include "seba/parallel.hpp"
#include "seba/rng.hpp"

namespace seba {

// ---- QR orthonormalization --------------------------------------------------
//
// Modified Gram-Schmidt with one reorthogonalization pass.  Column order is
// preserved.  tol is relative to the largest input column norm; a pivot norm
// below it signals dependent columns.

namespace detail {

inline double col_dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double col_dot_w(const double* a, const double* b, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

inline DenseMatrix mgs_orthonormalize(const DenseMatrix& m, double tol,
                                      const double* weights) {
  const std::size_t p = m.rows(), r = m.cols();
  if (r > p) throw InvalidArgument("qr_orthonormalize: more columns than rows");
  DenseMatrix q = m;
  double max_norm = 0.0;
  for (std::size_t j = 0; j < r; ++j) {
    const double* c = m.col(j);
    const double n2 = weights ? col_dot_w(c, c, weights, p) : col_dot(c, c, p);
    max_norm = std::max(max_norm, std::sqrt(n2));
  }
  if (max_norm == 0.0) throw RankDeficient("qr_orthonormalize: zero input");
  for (std::size_t j = 0; j < r; ++j) {
    double* v = q.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        const double* qi = q.col(i);
        const double d = weights ? col_dot_w(qi, v, weights, p) : col_dot(qi, v, p);
        for (std::size_t k = 0; k < p; ++k) v[k] -= d * qi[k];
      }
    }
    const double nrm =
        std::sqrt(weights ? col_dot_w(v, v, weights, p) : col_dot(v, v, p));
    if (!(nrm > tol * max_norm))
      throw RankDeficient("qr_orthonormalize: column " + std::to_string(j) +
                          " dependent up to tolerance");
    for (std::size_t k = 0; k < p; ++k) v[k] /= nrm;
  }
  return q;
}

}  // namespace detail

inline DenseMatrix qr_orthonormalize(const DenseMatrix& m, double tol = 1e-10) {
  return detail::mgs_orthonormalize(m, tol, nullptr);
}

// Orthonormalize in the nu-weighted inner product.
inline DenseMatrix qr_orthonormalize_w(const DenseMatrix& m, const WeightVector& nu,
                                       double tol = 1e-10) {
  if (nu.size() != m.rows()) throw WeightMismatch("weight length != rows");
  return detail::mgs_orthonormalize(m, tol, nu.values().data());
}

// ---- symmetric eigendecomposition -------------------------------------------

struct EigResult {
  std::vector<double> values;  // descending
  DenseMatrix vectors;         // columns match values; orthonormal
};

namespace detail {

// Deterministic sign convention: the entry of largest magnitude (first index
// on ties) is made nonnegative.
inline void fix_column_signs(DenseMatrix& v) {
  for (std::size_t j = 0; j < v.cols(); ++j) {
    double* c = v.col(j);
    std::size_t arg = 0;
    double best = std::abs(c[0]);
    for (std::size_t i = 1; i < v.rows(); ++i) {
      if (std::abs(c[i]) > best) {
        best = std::abs(c[i]);
        arg = i;
      }
    }
    if (c[arg] < 0.0)
      for (std::size_t i = 0; i < v.rows(); ++i) c[i] = -c[i];
  }
}

inline double offdiag_frobenius(const DenseMatrix& a) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace detail

// Cyclic Jacobi sweeps.  Deterministic, accurate at desk scale; intended for
// n up to a few thousand.
inline EigResult symmetric_eig(const DenseMatrix& a, double sym_tol = 1e-10,
                               int max_sweeps = 64) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw InvalidArgument("symmetric_eig: matrix not square");
  const double nrm = frobenius_norm(a);
  {
    double asym = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i) {
        const double d = a(i, j) - a(j, i);
        asym += d * d;
      }
    asym = std::sqrt(2.0 * asym);
    if (nrm > 0.0 && asym > sym_tol * nrm)
      throw NotSymmetric("symmetric_eig: asymmetry above tolerance");
  }

  DenseMatrix w(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) w(i, j) = 0.5 * (a(i, j) + a(j, i));
  DenseMatrix v = DenseMatrix::identity(n);

  const double stop = 1e-14 * (nrm > 0.0 ? nrm : 1.0);
  bool converged = (n == 1) || detail::offdiag_frobenius(w) <= stop;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (apq == 0.0) continue;
        const double app = w(p, p), aqq = w(q, q);
        // Skip rotations that cannot move the off-diagonal mass.
        if (std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq) + 1e-300)) continue;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // W <- JᵀWJ on rows/cols p,q.
        for (std::size_t k = 0; k < n; ++k) {
          const double wkp = w(k, p), wkq = w(k, q);
          w(k, p) = c * wkp - s * wkq;
          w(k, q) = s * wkp + c * wkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double wpk = w(p, k), wqk = w(q, k);
          w(p, k) = c * wpk - s * wqk;
          w(q, k) = s * wpk + c * wqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = detail::offdiag_frobenius(w) <= stop;
  }
  if (!converged) throw NoConvergence("symmetric_eig: Jacobi sweep cap reached");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return w(i, i) > w(j, j); });
  EigResult out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = w(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  detail::fix_column_signs(out.vectors);
  return out;
}

// ---- small SVD ---------------------------------------------------------------

struct SvdResult {
  DenseMatrix u;                // r x r orthogonal
  std::vector<double> sigma;    // nonnegative, descending
  DenseMatrix v;                // r x r orthogonal
};

// SVD of a square matrix through the eigendecomposition of AᵀA, with the left
// factor rebuilt from A·q_i and re-orthonormalized.  Null directions get a
// deterministic completion from identity columns so that downstream polar
// factors are reproducible run to run.
inline SvdResult svd_small(const DenseMatrix& a, int max_sweeps = 64) {
  const std::size_t r = a.rows();
  if (a.cols() != r) throw InvalidArgument("svd_small: matrix not square");
  DenseMatrix ata = matmul_at_b(a, a);
  // Symmetrize exactly; AᵀA is symmetric up to roundoff.
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      const double m = 0.5 * (ata(i, j) + ata(j, i));
      ata(i, j) = m;
      ata(j, i) = m;
    }
  EigResult eig = symmetric_eig(ata, 1e-6, max_sweeps);

  SvdResult out;
  out.sigma.resize(r);
  for (std::size_t i = 0; i < r; ++i) out.sigma[i] = std::sqrt(std::max(eig.values[i], 0.0));
  out.v = eig.vectors;
  out.u = DenseMatrix(r, r);

  const double cutoff =
      out.sigma[0] * static_cast<double>(r) * std::numeric_limits<double>::epsilon() * 16.0;
  std::vector<std::size_t> null_cols;
  for (std::size_t j = 0; j < r; ++j) {
    if (out.sigma[j] > cutoff && out.sigma[j] > 0.0) {
      double* uj = out.u.col(j);
      const double* qj = out.v.col(j);
      for (std::size_t i = 0; i < r; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < r; ++k) s += a(i, k) * qj[k];
        uj[i] = s / out.sigma[j];
      }
      // Clean against earlier columns; tiny singular values contaminate.
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < j; ++i) {
          const double* ui = out.u.col(i);
          const double d = detail::col_dot(ui, uj, r);
          for (std::size_t k = 0; k < r; ++k) uj[k] -= d * ui[k];
        }
      }
      const double nrm = std::sqrt(detail::col_dot(uj, uj, r));
      if (nrm > 0.5) {
        for (std::size_t k = 0; k < r; ++k) uj[k] /= nrm;
        continue;
      }
      // Numerically null after cleanup: treat as a zero singular value.
      out.sigma[j] = 0.0;
    } else {
      out.sigma[j] = 0.0;
    }
    null_cols.push_back(j);
  }
  // Identity-convention completion for null directions: each empty slot takes
  // the identity axis with the largest residual after projection (first index
  // on ties), which is deterministic and always well conditioned.
  std::vector<bool> axis_used(r, false);
  std::vector<double> work(r);
  for (std::size_t j : null_cols) {
    double* uj = out.u.col(j);
    std::size_t best_axis = r;
    double best_nrm = -1.0;
    for (std::size_t axis = 0; axis < r; ++axis) {
      if (axis_used[axis]) continue;
      std::fill(work.begin(), work.end(), 0.0);
      work[axis] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < r; ++i) {
          if (i == j) continue;
          const double* ui = out.u.col(i);
          const double d = detail::col_dot(ui, work.data(), r);
          if (d != 0.0)
            for (std::size_t k = 0; k < r; ++k) work[k] -= d * ui[k];
        }
      }
      const double nrm = std::sqrt(detail::col_dot(work.data(), work.data(), r));
      if (nrm > best_nrm + 1e-12) {
        best_nrm = nrm;
        best_axis = axis;
        std::copy(work.begin(), work.end(), uj);
      }
    }
    axis_used[best_axis] = true;
    for (std::size_t k = 0; k < r; ++k) uj[k] /= best_nrm;
  }
  return out;
}

// Orthonormal polar factor R = U Vᵀ of A = U D Vᵀ; the closest orthogonal
// matrix to A, and the Procrustes maximizer of tr(RᵀA).
inline DenseMatrix polar_orthonormal(const DenseMatrix& a) {
  SvdResult s = svd_small(a);
  return matmul_a_bt(s.u, s.v);
}

// Matrix 2-norm (largest singular value) of a small square matrix.
inline double matrix_2norm(const DenseMatrix& a) {
  SvdResult s = svd_small(a);
  return s.sigma.empty() ? 0.0 : s.sigma[0];
}

// ---- leading eigenpairs by subspace iteration --------------------------------
//
// Block orthogonal iteration with a Rayleigh-Ritz projection each step.  Used
// for operators too large for full Jacobi (the Ulam demo at 120x36 boxes);
// this is plain power iteration on a block, not a Krylov method.

struct TopkOptions {
  std::size_t block_extra = 12;  // buffer vectors beyond k
  double tol = 1e-9;             // residual tolerance relative to |theta_1|
  int max_iter = 3000;
  std::uint64_t seed = 0x5eba;
  int threads = 1;
};

// y = A x for a symmetric A stored densely; parallel over output rows.
inline void sym_matmul_block(const DenseMatrix& a, const DenseMatrix& x, DenseMatrix& y,
                             int threads) {
  const std::size_t n = a.rows(), b = x.cols();
  parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double* ai = a.col(i);  // row i == column i by symmetry
      for (std::size_t j = 0; j < b; ++j) {
        const double* xj = x.col(j);
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += ai[k] * xj[k];
        y(i, j) = s;
      }
    }
  });
}

namespace detail {

// MGS for the iteration blocks: a collapsing column (operator rank below the
// block size) is replaced by a fresh random direction instead of failing.
inline void block_orthonormalize(DenseMatrix& x, SplitMix64& rng) {
  const std::size_t p = x.rows(), r = x.cols();
  for (std::size_t j = 0; j < r; ++j) {
    double* v = x.col(j);
    for (int attempt = 0; attempt < 64; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < j; ++i) {
          const double* qi = x.col(i);
          const double d = col_dot(qi, v, p);
          for (std::size_t k = 0; k < p; ++k) v[k] -= d * qi[k];
        }
      }
      const double nrm = std::sqrt(col_dot(v, v, p));
      if (nrm > 1e-150) {
        for (std::size_t k = 0; k < p; ++k) v[k] /= nrm;
        break;
      }
      for (std::size_t k = 0; k < p; ++k) v[k] = rng.gaussian();
    }
  }
}

}  // namespace detail

// Apply must fill out (n x block) with A * in.  Returns the k leading
// eigenpairs of the symmetric operator, eigenvalues descending.
template <class Apply>
EigResult symmetric_topk_apply(Apply&& apply, std::size_t n, std::size_t k,
                               const TopkOptions& opts = {}) {
  if (k == 0 || k > n) throw InvalidArgument("symmetric_topk: bad k");
  const std::size_t b = std::min(n, k + opts.block_extra);
  SplitMix64 rng(opts.seed);
  DenseMatrix x(n, b);
  for (std::size_t j = 0; j < b; ++j)
    for (std::size_t i = 0; i < n; ++i) x(i, j) = rng.gaussian();
  detail::block_orthonormalize(x, rng);

  DenseMatrix y(n, b);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    apply(x, y);
    DenseMatrix h = matmul_at_b(x, y);
    for (std::size_t j = 0; j < b; ++j)
      for (std::size_t i = 0; i < j; ++i) {
        const double m = 0.5 * (h(i, j) + h(j, i));
        h(i, j) = m;
        h(j, i) = m;
      }
    EigResult ritz = symmetric_eig(h, 1e-3);
    // Residual of Ritz pair i: ||Y w_i - theta_i X w_i||.
    const double scale = std::max(std::abs(ritz.values[0]), 1e-300);
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      const double* wi = ritz.vectors.col(i);
      double rss = 0.0;
      for (std::size_t row = 0; row < n; ++row) {
        double yv = 0.0, xv = 0.0;
        for (std::size_t j = 0; j < b; ++j) {
          yv += y(row, j) * wi[j];
          xv += x(row, j) * wi[j];
        }
        const double d = yv - ritz.values[i] * xv;
        rss += d * d;
      }
      if (std::sqrt(rss) > opts.tol * scale) ok = false;
    }
    if (ok) {
      DenseMatrix z = matmul(x, ritz.vectors);
      EigResult out;
      out.values.assign(ritz.values.begin(), ritz.values.begin() + static_cast<std::ptrdiff_t>(k));
      out.vectors = z.first_cols(k);
      detail::fix_column_signs(out.vectors);
      return out;
    }
    x = y;
    detail::block_orthonormalize(x, rng);
  }
  throw NoConvergence("symmetric_topk: iteration cap reached");
}

inline EigResult symmetric_topk(const DenseMatrix& a, std::size_t k,
                                const TopkOptions& opts = {}) {
  if (a.cols() != a.rows()) throw InvalidArgument("symmetric_topk: matrix not square");
  const int threads = opts.threads;
  return symmetric_topk_apply(
      [&](const DenseMatrix& in, DenseMatrix& out) { sym_matmul_block(a, in, out, threads); },
      a.rows(), k, opts);
}

}  // namespace seba
