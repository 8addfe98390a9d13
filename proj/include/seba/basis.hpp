#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "seba/error.hpp"
#include "seba/matrix.hpp"

namespace seba {

enum class OperatorKind { laplace_neumann, laplace_dirichlet, markov };

inline std::string kind_name(OperatorKind k) {
  switch (k) {
    case OperatorKind::laplace_neumann: return "neumann";
    case OperatorKind::laplace_dirichlet: return "dirichlet";
    case OperatorKind::markov: return "markov";
  }
  return "?";
}

inline OperatorKind parse_kind(const std::string& s) {
  if (s == "neumann" || s == "laplace_neumann") return OperatorKind::laplace_neumann;
  if (s == "dirichlet" || s == "laplace_dirichlet") return OperatorKind::laplace_dirichlet;
  if (s == "markov") return OperatorKind::markov;
  throw InvalidArgument("unknown operator kind: " + s);
}

// Orthonormal eigenvector array plus spectral metadata.  When weights are
// present, orthonormality holds in the nu-weighted inner product.
struct EigenBasis {
  DenseMatrix V;
  std::optional<std::vector<double>> eigenvalues;  // descending, one per column
  OperatorKind kind = OperatorKind::laplace_neumann;
  int manifold_dim = 2;
  std::optional<WeightVector> weights;

  EigenBasis(DenseMatrix v, OperatorKind k, int d,
             std::optional<std::vector<double>> lambda = std::nullopt,
             std::optional<WeightVector> nu = std::nullopt)
      : V(std::move(v)), eigenvalues(std::move(lambda)), kind(k), manifold_dim(d),
        weights(std::move(nu)) {
    validate();
  }

  std::size_t p() const { return V.rows(); }
  std::size_t r() const { return V.cols(); }

  // First r columns and eigenvalues, metadata preserved.
  EigenBasis truncated(std::size_t r_new) const {
    std::optional<std::vector<double>> lambda;
    if (eigenvalues)
      lambda = std::vector<double>(eigenvalues->begin(),
                                   eigenvalues->begin() + static_cast<std::ptrdiff_t>(r_new));
    return EigenBasis(V.first_cols(r_new), kind, manifold_dim, std::move(lambda), weights);
  }

  void validate() const {
    V.require_finite();
    if (V.cols() > V.rows()) throw InvalidArgument("EigenBasis: more columns than rows");
    if (manifold_dim < 1) throw InvalidArgument("EigenBasis: manifold_dim must be >= 1");
    if (weights && weights->size() != V.rows())
      throw WeightMismatch("EigenBasis: weight length != rows");
    const double defect =
        weights ? orthonormality_error_w(V, *weights) : orthonormality_error(V);
    if (defect > 1e-8)
      throw InvalidArgument("EigenBasis: columns not orthonormal (defect " +
                            std::to_string(defect) + ")");
    if (!eigenvalues) return;
    const auto& lam = *eigenvalues;
    if (lam.size() != V.cols())
      throw InvalidArgument("EigenBasis: eigenvalue count != column count");
    for (std::size_t i = 0; i + 1 < lam.size(); ++i)
      if (lam[i] < lam[i + 1] - 1e-9)
        throw InvalidArgument("EigenBasis: eigenvalues not descending");
    switch (kind) {
      case OperatorKind::markov:
        if (std::abs(lam[0] - 1.0) > 1e-6)
          throw KindMismatch("markov spectrum must lead with 1");
        for (double l : lam)
          if (std::abs(l) > 1.0 + 1e-8) throw KindMismatch("markov eigenvalue outside unit disk");
        break;
      case OperatorKind::laplace_neumann:
        if (std::abs(lam[0]) > 1e-6) throw KindMismatch("Neumann spectrum must lead with 0");
        for (double l : lam)
          if (l > 1e-8) throw KindMismatch("Neumann eigenvalues must be <= 0");
        break;
      case OperatorKind::laplace_dirichlet:
        if (lam[0] > 1e-6) throw KindMismatch("Dirichlet spectrum must be negative");
        break;
    }
  }
};

}  // namespace seba
