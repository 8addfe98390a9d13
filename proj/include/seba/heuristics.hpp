#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "seba/basis.hpp"
#include "seba/error.hpp"
#include "seba/parallel.hpp"
#include "seba/seba.hpp"

namespace seba {

// Weyl-rescaled spectrum.  Dividing lambda_r by the Weyl growth (r-1)^{2/d}
// (or r^{2/d} under Dirichlet conditions) flattens the asymptotic trend so
// gaps become comparable along the whole spectrum.
struct RescaledSpectrum {
  OperatorKind kind = OperatorKind::laplace_neumann;
  int manifold_dim = 2;
  std::vector<std::pair<int, double>> values;  // (r, rescaled value), r is 1-based
  // (r, value(r) - value(r+1)) for consecutive plotted r, largest drop first.
  std::vector<std::pair<int, double>> drops;
  std::vector<int> skipped;  // markov ranks with lambda_r <= 0 (warned, not plotted)
};

inline RescaledSpectrum weyl_rescale(const std::vector<double>& eigenvalues,
                                     OperatorKind kind, int d) {
  if (eigenvalues.empty()) throw InvalidArgument("weyl_rescale: empty spectrum");
  if (d < 1) throw InvalidArgument("weyl_rescale: d must be >= 1");
  for (std::size_t i = 0; i + 1 < eigenvalues.size(); ++i)
    if (eigenvalues[i] < eigenvalues[i + 1] - 1e-9)
      throw InvalidArgument("weyl_rescale: eigenvalues not descending");

  switch (kind) {
    case OperatorKind::markov:
      if (std::abs(eigenvalues[0] - 1.0) > 1e-6)
        throw KindMismatch("weyl_rescale: markov spectrum must lead with 1");
      break;
    case OperatorKind::laplace_neumann:
      if (std::abs(eigenvalues[0]) > 1e-6)
        throw KindMismatch("weyl_rescale: Neumann spectrum must lead with 0");
      break;
    case OperatorKind::laplace_dirichlet:
      if (eigenvalues[0] > 1e-6)
        throw KindMismatch("weyl_rescale: Dirichlet spectrum must be negative");
      break;
  }

  RescaledSpectrum out;
  out.kind = kind;
  out.manifold_dim = d;
  const double expo = 2.0 / static_cast<double>(d);
  const int n = static_cast<int>(eigenvalues.size());
  for (int r = 1; r <= n; ++r) {
    const double lam = eigenvalues[r - 1];
    switch (kind) {
      case OperatorKind::laplace_neumann:
        if (r >= 2)
          out.values.emplace_back(r, lam / std::pow(static_cast<double>(r - 1), expo));
        break;
      case OperatorKind::laplace_dirichlet:
        out.values.emplace_back(r, lam / std::pow(static_cast<double>(r), expo));
        break;
      case OperatorKind::markov:
        if (r >= 2) {
          if (lam <= 0.0) {
            out.skipped.push_back(r);
          } else {
            out.values.emplace_back(
                r, std::log(lam) / std::pow(static_cast<double>(r - 1), expo));
          }
        }
        break;
    }
  }
  for (std::size_t i = 0; i + 1 < out.values.size(); ++i) {
    if (out.values[i + 1].first != out.values[i].first + 1) continue;
    out.drops.emplace_back(out.values[i].first,
                           out.values[i].second - out.values[i + 1].second);
  }
  std::stable_sort(out.drops.begin(), out.drops.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

// ---- cumulative minimum value -------------------------------------------------

struct MinValueProfile {
  std::vector<double> m;  // descending, as stored in the SparseBasis
  double total = 0.0;     // Min(S) = sum_j -m_j
};

inline MinValueProfile min_value_profile(const SparseBasis& s) {
  MinValueProfile out;
  out.m = s.m;
  for (double mj : s.m) out.total -= mj;
  return out;
}

// ---- stacked (k, r) scan --------------------------------------------------------

// Min(S^{(r)}, k) over 2 <= r <= r_max and k <= r, plus the per-k optimum.
struct ScanTable {
  int r_max = 0;
  // minval[r] holds Min(S^{(r)}, k) for k = 1..r; absent keys are failed runs.
  std::map<int, std::vector<double>> minval;
  std::map<int, int> r_min_of_k;                // k -> argmin_r, smallest-r ties
  std::vector<std::pair<int, int>> optimal_pairs;  // (k, r_min(k)), k ascending
  std::vector<std::pair<int, std::string>> warnings;  // (r, reason) for failed runs

  bool has(int r, int k) const {
    auto it = minval.find(r);
    return it != minval.end() && k >= 1 && k <= static_cast<int>(it->second.size());
  }
  double at(int r, int k) const {
    auto it = minval.find(r);
    if (it == minval.end() || k < 1 || k > static_cast<int>(it->second.size()))
      throw InvalidArgument("ScanTable: no entry (" + std::to_string(r) + "," +
                            std::to_string(k) + ")");
    return it->second[static_cast<std::size_t>(k - 1)];
  }
};

// Runs the sparse approximation independently on the first r columns for each
// r, each seeded from the identity rotation.
inline ScanTable scan(const EigenBasis& basis, int r_max, const SebaConfig& cfg = {},
                      int threads = 1) {
  if (r_max < 2) throw InvalidArgument("scan: r_max must be >= 2");
  if (static_cast<std::size_t>(r_max) > basis.r())
    throw InvalidArgument("scan: r_max exceeds basis column count");

  ScanTable table;
  table.r_max = r_max;
  const int runs = r_max - 1;
  std::vector<std::vector<double>> results(runs);
  std::vector<std::string> errors(runs);
  parallel_for(static_cast<std::size_t>(runs), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t idx = lo; idx < hi; ++idx) {
      const int r = static_cast<int>(idx) + 2;
      try {
        const EigenBasis sub = basis.truncated(static_cast<std::size_t>(r));
        const SparseBasis sb =
            basis.weights ? seba_weighted(sub, cfg) : seba(sub, cfg);
        std::vector<double> partial(static_cast<std::size_t>(r));
        double acc = 0.0;
        for (int k = 1; k <= r; ++k) {
          acc -= sb.m[static_cast<std::size_t>(k - 1)];
          partial[static_cast<std::size_t>(k - 1)] = acc;
        }
        results[idx] = std::move(partial);
      } catch (const Error& e) {
        errors[idx] = e.what();
      }
    }
  });
  for (int idx = 0; idx < runs; ++idx) {
    const int r = idx + 2;
    if (!errors[static_cast<std::size_t>(idx)].empty())
      table.warnings.emplace_back(r, errors[static_cast<std::size_t>(idx)]);
    else
      table.minval[r] = std::move(results[static_cast<std::size_t>(idx)]);
  }

  for (int k = 1; k <= r_max; ++k) {
    int best_r = -1;
    double best = 0.0;
    for (int r = std::max(k, 2); r <= r_max; ++r) {
      if (!table.has(r, k)) continue;
      const double v = table.at(r, k);
      if (best_r < 0 || v < best) {  // strict: smallest r wins ties
        best_r = r;
        best = v;
      }
    }
    if (best_r >= 0) {
      table.r_min_of_k[k] = best_r;
      table.optimal_pairs.emplace_back(k, best_r);
    }
  }
  return table;
}

// One recommendation per vertical strip: a strip is a maximal run of
// consecutive k sharing the same r_min(k); its smallest k is reported.
inline std::vector<std::pair<int, int>> select_kr(const ScanTable& table) {
  if (table.optimal_pairs.empty()) throw EmptyTable("select_kr: no optimal pairs");
  std::vector<std::pair<int, int>> strips;  // (k_min, r)
  for (std::size_t i = 0; i < table.optimal_pairs.size(); ++i) {
    const auto [k, r] = table.optimal_pairs[i];
    if (i > 0 && table.optimal_pairs[i - 1].second == r &&
        table.optimal_pairs[i - 1].first == k - 1)
      continue;
    strips.emplace_back(k, r);
  }
  std::stable_sort(strips.begin(), strips.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  return strips;
}

}  // namespace seba
