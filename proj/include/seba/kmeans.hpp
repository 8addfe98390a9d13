#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "seba/error.hpp"
#include "seba/matrix.hpp"
#include "seba/rng.hpp"

namespace seba {

struct KMeansResult {
  std::vector<int> labels;  // 0-based cluster ids
  DenseMatrix centroids;    // k x d, one centroid per row
  double wcss = 0.0;        // within-cluster sum of squares
  int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding, best of `restarts` by WCSS.
// Points are the rows of `points`.  Deterministic given the seed; ties in
// assignment go to the smallest cluster index.
inline KMeansResult kmeans(const DenseMatrix& points, int k, int restarts = 5,
                           std::uint64_t seed = 0, int max_iter = 300) {
  const std::size_t n = points.rows(), d = points.cols();
  if (k < 1) throw InvalidArgument("kmeans: k must be >= 1");
  if (static_cast<std::size_t>(k) > n) throw InvalidArgument("kmeans: k exceeds point count");
  if (restarts < 1) throw InvalidArgument("kmeans: restarts must be >= 1");

  auto dist2_to = [&](std::size_t i, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t f = 0; f < d; ++f) {
      const double diff = points(i, f) - c[f];
      s += diff * diff;
    }
    return s;
  };

  SplitMix64 rng(seed);
  KMeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();

  for (int attempt = 0; attempt < restarts; ++attempt) {
    // k-means++ seeding.
    std::vector<std::vector<double>> centers;
    centers.reserve(static_cast<std::size_t>(k));
    {
      std::vector<double> c(d);
      const std::size_t first = rng.below(n);
      for (std::size_t f = 0; f < d; ++f) c[f] = points(first, f);
      centers.push_back(c);
    }
    std::vector<double> mind2(n);
    while (centers.size() < static_cast<std::size_t>(k)) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double m = dist2_to(i, centers[0]);
        for (std::size_t c = 1; c < centers.size(); ++c)
          m = std::min(m, dist2_to(i, centers[c]));
        mind2[i] = m;
        total += m;
      }
      std::size_t pick = 0;
      if (total > 0.0) {
        const double target = rng.uniform() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          acc += mind2[i];
          if (acc >= target) {
            pick = i;
            break;
          }
        }
      } else {
        pick = rng.below(n);  // all points coincide with existing centers
      }
      std::vector<double> c(d);
      for (std::size_t f = 0; f < d; ++f) c[f] = points(pick, f);
      centers.push_back(std::move(c));
    }

    std::vector<int> labels(n, -1);
    int iters = 0;
    for (; iters < max_iter; ++iters) {
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        int arg = 0;
        double bd = dist2_to(i, centers[0]);
        for (int c = 1; c < k; ++c) {
          const double dd = dist2_to(i, centers[static_cast<std::size_t>(c)]);
          if (dd < bd) {
            bd = dd;
            arg = c;
          }
        }
        if (labels[i] != arg) {
          labels[i] = arg;
          changed = true;
        }
      }
      if (!changed && iters > 0) break;

      std::vector<std::size_t> count(static_cast<std::size_t>(k), 0);
      std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                            std::vector<double>(d, 0.0));
      for (std::size_t i = 0; i < n; ++i) {
        ++count[static_cast<std::size_t>(labels[i])];
        for (std::size_t f = 0; f < d; ++f)
          sums[static_cast<std::size_t>(labels[i])][f] += points(i, f);
      }
      for (int c = 0; c < k; ++c) {
        const auto cc = static_cast<std::size_t>(c);
        if (count[cc] == 0) {
          // Empty cluster: reseat on the point farthest from its center.
          std::size_t far = 0;
          double fd = -1.0;
          for (std::size_t i = 0; i < n; ++i) {
            const double dd = dist2_to(i, centers[static_cast<std::size_t>(labels[i])]);
            if (dd > fd) {
              fd = dd;
              far = i;
            }
          }
          for (std::size_t f = 0; f < d; ++f) centers[cc][f] = points(far, f);
          continue;
        }
        for (std::size_t f = 0; f < d; ++f) centers[cc][f] = sums[cc][f] / count[cc];
      }
    }

    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      wcss += dist2_to(i, centers[static_cast<std::size_t>(labels[i])]);
    if (wcss < best.wcss) {
      best.wcss = wcss;
      best.labels = labels;
      best.iterations = iters;
      best.centroids = DenseMatrix(static_cast<std::size_t>(k), d);
      for (int c = 0; c < k; ++c)
        for (std::size_t f = 0; f < d; ++f)
          best.centroids(static_cast<std::size_t>(c), f) = centers[static_cast<std::size_t>(c)][f];
    }
  }
  return best;
}

}  // namespace seba
