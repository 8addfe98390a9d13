#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "seba/error.hpp"
#include "seba/matrix.hpp"
#include "seba/seba.hpp"

namespace seba {

// H_mu(z) = z if |z| > mu, else 0.  Strict inequality: the boundary is zeroed.
inline double hard_threshold(double z, double mu) {
  return std::abs(z) > mu ? z : 0.0;
}

enum class AssignMethod { partition_unity, disjoint_support, max_likelihood, manual, cheeger };

inline std::string method_name(AssignMethod m) {
  switch (m) {
    case AssignMethod::partition_unity: return "partition-unity";
    case AssignMethod::disjoint_support: return "disjoint";
    case AssignMethod::max_likelihood: return "maxlike";
    case AssignMethod::manual: return "manual";
    case AssignMethod::cheeger: return "cheeger";
  }
  return "?";
}

// Hard feature extraction result: a_i in {0,...,r} with 0 meaning unassigned,
// the thresholded array, and the threshold(s) that produced it.
struct FeatureAssignment {
  std::vector<int> a;  // length p, 1-based feature ids, 0 = unassigned
  DenseMatrix thresholded_S;
  double tau = 0.0;                 // uniform threshold (pu / dp / manual)
  std::vector<double> column_taus;  // per-column thresholds (cheeger); else empty
  AssignMethod method = AssignMethod::max_likelihood;
};

namespace detail {

inline DenseMatrix clamp_nonnegative(const DenseMatrix& s) {
  DenseMatrix c = s;
  for (double& v : c.data()) v = std::max(v, 0.0);
  return c;
}

// Maximum-likelihood labels: argmax over columns, ties to the smallest j,
// unassigned when the row maximum is not positive.
inline std::vector<int> argmax_labels(const DenseMatrix& s) {
  const std::size_t p = s.rows(), r = s.cols();
  std::vector<int> a(p, 0);
  for (std::size_t i = 0; i < p; ++i) {
    std::size_t best = 0;
    double bv = s(i, 0);
    for (std::size_t j = 1; j < r; ++j)
      if (s(i, j) > bv) {
        bv = s(i, j);
        best = j;
      }
    a[i] = bv > 0.0 ? static_cast<int>(best) + 1 : 0;
  }
  return a;
}

inline DenseMatrix apply_hard(const DenseMatrix& s, double tau) {
  DenseMatrix t = s;
  for (double& v : t.data()) v = hard_threshold(v, tau);
  return t;
}

}  // namespace detail

// Smallest uniform threshold making the clamped columns a sub-partition of
// unity: tau = max{ sorted row value whose prefix sum exceeds 1 }, 0 when no
// row sum exceeds 1.
inline FeatureAssignment partition_unity(const DenseMatrix& s) {
  const std::size_t p = s.rows(), r = s.cols();
  DenseMatrix c = detail::clamp_nonnegative(s);
  double tau = 0.0;
  std::vector<double> row(r);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < r; ++j) row[j] = c(i, j);
    std::sort(row.begin(), row.end(), std::greater<double>());
    double prefix = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
      prefix += row[j];
      if (prefix > 1.0) tau = std::max(tau, row[j]);
    }
  }
  FeatureAssignment out;
  out.method = AssignMethod::partition_unity;
  out.tau = tau;
  out.thresholded_S = detail::apply_hard(c, tau);
  out.a = detail::argmax_labels(out.thresholded_S);
  return out;
}

// Smallest uniform threshold making the clamped columns disjointly supported:
// tau = the largest second-largest row value (0 when r = 1).
inline FeatureAssignment disjoint_support(const DenseMatrix& s) {
  const std::size_t p = s.rows(), r = s.cols();
  DenseMatrix c = detail::clamp_nonnegative(s);
  double tau = 0.0;
  if (r >= 2) {
    for (std::size_t i = 0; i < p; ++i) {
      double first = -1.0, second = -1.0;
      for (std::size_t j = 0; j < r; ++j) {
        const double v = c(i, j);
        if (v > first) {
          second = first;
          first = v;
        } else if (v > second) {
          second = v;
        }
      }
      tau = std::max(tau, second);
    }
  }
  FeatureAssignment out;
  out.method = AssignMethod::disjoint_support;
  out.tau = tau;
  out.thresholded_S = detail::apply_hard(c, tau);
  out.a = detail::argmax_labels(out.thresholded_S);
  return out;
}

// Maximum likelihood on the raw array, no thresholding.
inline FeatureAssignment max_likelihood(const DenseMatrix& s) {
  FeatureAssignment out;
  out.method = AssignMethod::max_likelihood;
  out.tau = 0.0;
  out.thresholded_S = s;
  out.a = detail::argmax_labels(s);
  return out;
}

// Pass-through threshold chosen by the caller (e.g. by inspecting a plot).
inline FeatureAssignment manual_threshold(const DenseMatrix& s, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("manual_threshold: tau must be >= 0");
  FeatureAssignment out;
  out.method = AssignMethod::manual;
  out.tau = tau;
  out.thresholded_S = detail::apply_hard(detail::clamp_nonnegative(s), tau);
  out.a = detail::argmax_labels(out.thresholded_S);
  return out;
}

// s_i = min{1, sum_j max{S_ij, 0}}: the likelihood that index i belongs to
// some feature.
inline std::vector<double> superposition(const DenseMatrix& s) {
  std::vector<double> super(s.rows(), 0.0);
  for (std::size_t j = 0; j < s.cols(); ++j) {
    const double* c = s.col(j);
    for (std::size_t i = 0; i < s.rows(); ++i) super[i] += std::max(c[i], 0.0);
  }
  for (double& v : super) v = std::min(v, 1.0);
  return super;
}

inline FeatureAssignment partition_unity(const SparseBasis& s) { return partition_unity(s.S); }
inline FeatureAssignment disjoint_support(const SparseBasis& s) { return disjoint_support(s.S); }
inline FeatureAssignment max_likelihood(const SparseBasis& s) { return max_likelihood(s.S); }
inline FeatureAssignment manual_threshold(const SparseBasis& s, double tau) {
  return manual_threshold(s.S, tau);
}
inline std::vector<double> superposition(const SparseBasis& s) { return superposition(s.S); }

}  // namespace seba
