#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "seba/basis.hpp"
#include "seba/error.hpp"
#include "seba/linalg.hpp"
#include "seba/matrix.hpp"
#include "seba/rng.hpp"

namespace seba {

// ---- geometric graph Laplacian ------------------------------------------------

// Unnormalized graph Laplacian eigenpairs of the radius graph on a planar
// point cloud, returned as a Laplace-Neumann basis (eigenvalues negated so
// the spectrum is 0 = lambda_1 >= lambda_2 >= ...).
inline EigenBasis graph_laplacian_demo(const std::vector<std::array<double, 2>>& pts,
                                       double radius, int r, int manifold_dim = 2) {
  const std::size_t n = pts.size();
  if (n < 2) throw InvalidArgument("graph_laplacian_demo: need at least 2 points");
  if (r < 1 || static_cast<std::size_t>(r) > n)
    throw InvalidArgument("graph_laplacian_demo: bad r");
  if (!(radius > 0.0)) throw InvalidArgument("graph_laplacian_demo: radius must be positive");

  std::vector<std::vector<std::size_t>> adj(n);
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = pts[i][0] - pts[j][0], dy = pts[i][1] - pts[j][1];
      if (dx * dx + dy * dy <= r2) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }

  // Connectivity first: a second zero eigenvalue would silently break the
  // Neumann convention.
  {
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = true;
    std::size_t visited = 1;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : adj[u])
        if (!seen[v]) {
          seen[v] = true;
          ++visited;
          q.push(v);
        }
    }
    if (visited != n)
      throw Disconnected("graph_laplacian_demo: radius graph is disconnected");
  }

  DenseMatrix neg_lap(n, n);  // -(D - A)
  for (std::size_t i = 0; i < n; ++i) {
    neg_lap(i, i) = -static_cast<double>(adj[i].size());
    for (std::size_t j : adj[i]) neg_lap(i, j) = 1.0;
  }
  EigResult eig = symmetric_eig(neg_lap);
  std::vector<double> lambda(eig.values.begin(),
                             eig.values.begin() + static_cast<std::ptrdiff_t>(r));
  lambda[0] = 0.0;  // exact by construction, clean the roundoff
  return EigenBasis(eig.vectors.first_cols(static_cast<std::size_t>(r)),
                    OperatorKind::laplace_neumann, manifold_dim, std::move(lambda));
}

// Disk with four peripheral blobs joined by narrow bridges: the classic
// picture of features entangled across leading Laplace eigenvectors.
struct BlobCloud {
  std::vector<std::array<double, 2>> points;
  std::vector<int> truth;  // 0 = central disk, 1..4 = blobs
};

inline BlobCloud blob_disk_cloud(std::uint64_t seed, int n_disk = 240, int n_blob = 40,
                                 int n_bridge = 6) {
  BlobCloud cloud;
  SplitMix64 rng(seed);
  auto disk_point = [&](double cx, double cy, double rad) -> std::array<double, 2> {
    while (true) {
      const double x = rng.uniform(-1.0, 1.0), y = rng.uniform(-1.0, 1.0);
      if (x * x + y * y <= 1.0) return {cx + rad * x, cy + rad * y};
    }
  };
  for (int i = 0; i < n_disk; ++i) {
    cloud.points.push_back(disk_point(0.0, 0.0, 1.0));
    cloud.truth.push_back(0);
  }
  const double blob_dist = 1.7, blob_rad = 0.32;
  for (int b = 0; b < 4; ++b) {
    const double ang = b * 1.5707963267948966;
    const double cx = blob_dist * std::cos(ang), cy = blob_dist * std::sin(ang);
    for (int i = 0; i < n_blob; ++i) {
      cloud.points.push_back(disk_point(cx, cy, blob_rad));
      cloud.truth.push_back(b + 1);
    }
    // A thin chain of points forming the connecting channel.
    for (int i = 0; i < n_bridge; ++i) {
      const double t = (i + 0.5) / n_bridge;
      const double px = (1.0 + t * (blob_dist - blob_rad - 1.0)) * std::cos(ang);
      const double py = (1.0 + t * (blob_dist - blob_rad - 1.0)) * std::sin(ang);
      cloud.points.push_back({px + rng.uniform(-0.02, 0.02), py + rng.uniform(-0.02, 0.02)});
      cloud.truth.push_back(0);
    }
  }
  return cloud;
}

// ---- block Markov chains --------------------------------------------------------

struct BlockMarkov {
  EigenBasis basis;
  std::vector<int> truth;  // block index per row
  DenseMatrix P;
};

// Row-stochastic chain with k nearly decoupled blocks: within-block mass
// 1 - eps spread uniformly, leak eps spread over the complement.  Returns the
// leading k left singular vectors of the normalized operator; at eps = 0 they
// span the block indicators exactly.
inline BlockMarkov block_markov_demo(const std::vector<int>& block_sizes, double eps,
                                     std::uint64_t seed = 0) {
  (void)seed;  // the construction is deterministic; kept for interface parity
  if (block_sizes.empty()) throw InvalidArgument("block_markov_demo: no blocks");
  if (!(eps >= 0.0) || eps >= 0.5)
    throw InvalidArgument("block_markov_demo: eps must lie in [0, 0.5)");
  int n = 0;
  for (int b : block_sizes) {
    if (b < 1) throw InvalidArgument("block_markov_demo: block sizes must be >= 1");
    n += b;
  }
  const int k = static_cast<int>(block_sizes.size());

  std::vector<int> truth(static_cast<std::size_t>(n));
  {
    int at = 0;
    for (int b = 0; b < k; ++b)
      for (int i = 0; i < block_sizes[static_cast<std::size_t>(b)]; ++i) truth[at++] = b;
  }

  DenseMatrix P(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int b = truth[static_cast<std::size_t>(i)];
    const int size_b = block_sizes[static_cast<std::size_t>(b)];
    const double inside = (k == 1 ? 1.0 : 1.0 - eps) / size_b;
    const double outside = (k == 1 || n == size_b) ? 0.0 : eps / (n - size_b);
    for (int j = 0; j < n; ++j)
      P(i, j) = truth[static_cast<std::size_t>(j)] == b ? inside : outside;
  }

  // Same normalization as the Ulam operator; at eps = 0 the column sums are 1
  // and L = P.
  DenseMatrix L = P;
  for (int j = 0; j < n; ++j) {
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += P(i, j);
    if (c <= 0.0) continue;
    const double inv = 1.0 / std::sqrt(c);
    double* cj = L.col(j);
    for (int i = 0; i < n; ++i) cj[i] *= inv;
  }
  EigResult eig = symmetric_eig(matmul_a_bt(L, L));
  std::vector<double> sigma(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    sigma[static_cast<std::size_t>(i)] =
        std::min(1.0, std::sqrt(std::max(eig.values[static_cast<std::size_t>(i)], 0.0)));
  return BlockMarkov{EigenBasis(eig.vectors.first_cols(static_cast<std::size_t>(k)),
                                OperatorKind::markov, 1, std::move(sigma)),
                     std::move(truth), std::move(P)};
}

}  // namespace seba
