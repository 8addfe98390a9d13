#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "seba/basis.hpp"
#include "seba/error.hpp"
#include "seba/linalg.hpp"
#include "seba/matrix.hpp"

namespace seba {

// C_mu(z) = sign(z) max{|z| - mu, 0}
inline double soft_threshold(double z, double mu) {
  const double a = std::abs(z) - mu;
  if (a <= 0.0) return 0.0;
  return z < 0.0 ? -a : a;
}

struct SebaConfig {
  // Default when unset: 0.99/sqrt(p), or 0.99/sqrt(|nu|_1) for weighted runs.
  std::optional<double> mu;
  double tol = 1e-14;  // on the matrix 2-norm of successive rotation differences
  int max_iter = 5000;

  void validate() const {
    if (mu && (!(*mu > 0.0) || !std::isfinite(*mu)))
      throw InvalidArgument("SebaConfig: mu must be positive and finite");
    if (!(tol > 0.0)) throw InvalidArgument("SebaConfig: tol must be positive");
    if (max_iter < 1) throw InvalidArgument("SebaConfig: max_iter must be >= 1");
  }
};

struct SebaMetrics {
  double subspace_error = 0.0;     // (1/r) |V - S R|_F^2 with unit-norm S
  double absolute_sparsity = 0.0;  // |S|_{0,1} / (p r)
  double relative_sparsity = 0.0;  // |S|_{1,1} / |V|_{1,1}
};

// Output of the alternating soft-threshold / rotation iteration.  S has
// max-entry-1 columns ordered by descending column minimum m_j; R is the
// converged rotation with its rows sign-flipped and permuted to match the
// final column order (so it stays orthogonal).  Metrics and the objective
// trace are computed on the unit-norm S before the final sign/scale/sort.
struct SparseBasis {
  DenseMatrix S;
  DenseMatrix R;
  std::vector<double> m;  // m_j = min_i S_ij, descending
  int iterations = 0;
  bool converged = false;
  double mu = 0.0;
  SebaMetrics metrics;
  std::vector<double> objective_trace;            // one value per full iteration
  double max_rotation_orthogonality_error = 0.0;  // max |RᵀR - I| over iterations
};

// (1/2) |V - SR|_F^2 + mu |S|_{1,1}; the quantity the iteration descends.
inline double seba_objective(const DenseMatrix& v, const DenseMatrix& s,
                             const DenseMatrix& r, double mu) {
  const DenseMatrix sr = matmul(s, r);
  double quad = 0.0;
  for (std::size_t k = 0; k < v.data().size(); ++k) {
    const double d = v.data()[k] - sr.data()[k];
    quad += d * d;
  }
  return 0.5 * quad + mu * l11_norm(s);
}

namespace detail {

struct SebaProblem {
  DenseMatrix v;                    // effective orthonormal input
  double mu = 0.0;
  std::vector<double> thr_scale;    // per-row multiplier on mu inside C
  std::vector<double> sign_weight;  // per-row weight in the step-5 sign sum
  std::vector<double> l11_weight;   // per-row weight in the sparsity penalty
};

inline SparseBasis finalize(const SebaProblem& prob, SparseBasis&& out, DenseMatrix&& s,
                            DenseMatrix&& rot);

inline SparseBasis run_seba(const SebaProblem& prob, const SebaConfig& cfg) {
  const std::size_t p = prob.v.rows(), r = prob.v.cols();
  const DenseMatrix& v = prob.v;

  SparseBasis out;
  out.mu = prob.mu;
  DenseMatrix rot = DenseMatrix::identity(r);
  DenseMatrix s(p, r);

  auto weighted_l11 = [&](const DenseMatrix& a) {
    double total = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double* c = a.col(j);
      for (std::size_t i = 0; i < p; ++i) total += prob.l11_weight[i] * std::abs(c[i]);
    }
    return total;
  };

  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    // S-step: threshold the rotated basis columnwise and renormalize.
    const DenseMatrix t = matmul_a_bt(v, rot);
    for (std::size_t j = 0; j < r; ++j) {
      const double* tj = t.col(j);
      double* sj = s.col(j);
      double nrm2 = 0.0;
      for (std::size_t i = 0; i < p; ++i) {
        sj[i] = soft_threshold(tj[i], prob.mu * prob.thr_scale[i]);
        nrm2 += sj[i] * sj[i];
      }
      if (nrm2 == 0.0)
        throw DegenerateColumn("seba: column " + std::to_string(j + 1) +
                               " vanished under thresholding (mu too large)");
      const double inv = 1.0 / std::sqrt(nrm2);
      for (std::size_t i = 0; i < p; ++i) sj[i] *= inv;
    }

    // R-step: Procrustes rotation via the orthonormal polar factor.
    const DenseMatrix rot_new = polar_orthonormal(matmul_at_b(s, v));
    out.max_rotation_orthogonality_error =
        std::max(out.max_rotation_orthogonality_error, orthonormality_error(rot_new));

    double quad = 0.0;
    {
      const DenseMatrix sr = matmul(s, rot_new);
      for (std::size_t k = 0; k < v.data().size(); ++k) {
        const double d = v.data()[k] - sr.data()[k];
        quad += d * d;
      }
    }
    out.objective_trace.push_back(0.5 * quad + prob.mu * weighted_l11(s));
    out.iterations = iter;

    DenseMatrix diff(r, r);
    for (std::size_t k = 0; k < diff.data().size(); ++k)
      diff.data()[k] = rot_new.data()[k] - rot.data()[k];
    rot = rot_new;
    if (matrix_2norm(diff) <= cfg.tol) {
      out.converged = true;
      break;
    }
  }

  // Metrics on the unit-norm S paired with the converged rotation.
  out.metrics.subspace_error =
      out.objective_trace.empty()
          ? 0.0
          : 2.0 * (out.objective_trace.back() - prob.mu * weighted_l11(s)) /
                static_cast<double>(r);
  out.metrics.absolute_sparsity =
      static_cast<double>(l01_count(s)) / static_cast<double>(p * r);
  out.metrics.relative_sparsity = weighted_l11(s) / weighted_l11(v);
  return finalize(prob, std::move(out), std::move(s), std::move(rot));
}

inline SparseBasis finalize(const SebaProblem& prob, SparseBasis&& out, DenseMatrix&& s,
                            DenseMatrix&& rot) {
  const std::size_t p = s.rows(), r = s.cols();

  // Step 5: make columns predominantly nonnegative; sign(0) := +1.
  for (std::size_t j = 0; j < r; ++j) {
    double* sj = s.col(j);
    double total = 0.0;
    for (std::size_t i = 0; i < p; ++i) total += prob.sign_weight[i] * sj[i];
    if (total < 0.0) {
      for (std::size_t i = 0; i < p; ++i) sj[i] = -sj[i];
      for (std::size_t k = 0; k < r; ++k) rot(j, k) = -rot(j, k);
    }
  }

  // Undo the diagonal substitution (identity scale in the unweighted case).
  for (std::size_t j = 0; j < r; ++j) {
    double* sj = s.col(j);
    for (std::size_t i = 0; i < p; ++i)
      if (prob.thr_scale[i] != 1.0) sj[i] /= prob.thr_scale[i];
  }

  // Step 6: scale each column so its maximum entry is 1.
  for (std::size_t j = 0; j < r; ++j) {
    double* sj = s.col(j);
    double mx = sj[0];
    for (std::size_t i = 1; i < p; ++i) mx = std::max(mx, sj[i]);
    if (mx <= 0.0)
      throw DegenerateColumn("seba: column " + std::to_string(j + 1) +
                             " has no positive entry after sign fixing");
    for (std::size_t i = 0; i < p; ++i) sj[i] /= mx;
  }

  // Step 7: order columns by descending m_j, ties by original index.
  std::vector<double> m(r);
  for (std::size_t j = 0; j < r; ++j) {
    const double* sj = s.col(j);
    m[j] = *std::min_element(sj, sj + p);
  }
  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return m[a] > m[b]; });

  out.S = DenseMatrix(p, r);
  out.R = DenseMatrix(r, r);
  out.m.resize(r);
  for (std::size_t j = 0; j < r; ++j) {
    const std::size_t src = order[j];
    out.m[j] = m[src];
    std::copy(s.col(src), s.col(src) + p, out.S.col(j));
    for (std::size_t k = 0; k < r; ++k) out.R(j, k) = rot(src, k);
  }
  return std::move(out);
}

}  // namespace detail

// The unweighted iteration; requires a standard-orthonormal basis.
inline SparseBasis seba(const EigenBasis& basis, const SebaConfig& cfg = {}) {
  cfg.validate();
  if (basis.weights)
    throw InvalidArgument("seba: basis carries weights, use seba_weighted");
  const std::size_t p = basis.p();
  const double bound = 1.0 / std::sqrt(static_cast<double>(p));
  const double mu = cfg.mu.value_or(0.99 * bound);
  if (mu > bound)
    throw InvalidArgument("seba: mu must be < 1/sqrt(p) = " + std::to_string(bound));
  detail::SebaProblem prob;
  prob.v = basis.V;
  prob.mu = mu;
  prob.thr_scale.assign(p, 1.0);
  prob.sign_weight.assign(p, 1.0);
  prob.l11_weight.assign(p, 1.0);
  return detail::run_seba(prob, cfg);
}

// Weighted generalization: substitute V' = D^{1/2} V, threshold row i at
// mu sqrt(nu_i), take the step-5 sign from the nu-weighted column sum of the
// unsubstituted S, and map back.  Output columns are unit in the nu-weighted
// l2 norm before the final rescaling.
inline SparseBasis seba_weighted(const EigenBasis& basis, const SebaConfig& cfg = {}) {
  cfg.validate();
  if (!basis.weights) throw InvalidArgument("seba_weighted: basis has no weights");
  const WeightVector& nu = *basis.weights;
  if (nu.size() != basis.p()) throw WeightMismatch("seba_weighted: weight length != p");
  const std::size_t p = basis.p();
  const double bound = 1.0 / std::sqrt(nu.l1());
  const double mu = cfg.mu.value_or(0.99 * bound);
  if (mu > bound)
    throw InvalidArgument("seba_weighted: mu must be < 1/sqrt(|nu|_1) = " +
                          std::to_string(bound));
  detail::SebaProblem prob;
  prob.mu = mu;
  prob.thr_scale.resize(p);
  prob.sign_weight.resize(p);
  prob.l11_weight.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    const double root = std::sqrt(nu[i]);
    prob.thr_scale[i] = root;
    prob.sign_weight[i] = root;  // nu_i * (nu_i^{-1/2} S'_ij) summed over i
    prob.l11_weight[i] = root;   // |S|_{1,1,nu} = sum nu_i^{1/2} |S'_ij|
  }
  prob.v = basis.V;
  for (std::size_t j = 0; j < prob.v.cols(); ++j) {
    double* c = prob.v.col(j);
    for (std::size_t i = 0; i < p; ++i) c[i] *= prob.thr_scale[i];
  }
  return detail::run_seba(prob, cfg);
}

}  // namespace seba
