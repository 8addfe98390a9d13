#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "seba/error.hpp"
#include "seba/grid.hpp"
#include "seba/parallel.hpp"

namespace seba {

// Scale-invariant dynamic Cheeger ratio of a level set (d = 2):
//   h(Gamma) = (len(Gamma) + len(T(Gamma))) / (2 sqrt(min(area_1, area_2))).
// Small values mean short, filament-free boundaries at both time endpoints.

struct CheegerLevel {
  double tau = 0.0;
  double h = 0.0;
  double length = 0.0;
  double image_length = 0.0;
  double area_min = 0.0;
  bool empty = true;
};

struct CheegerResult {
  double tau_star = 0.0;
  double h_star = 0.0;
  std::vector<CheegerLevel> levels;
  std::vector<std::vector<std::array<double, 2>>> contour;  // polylines at tau_star
  // tau range whose h stays within 1% of the minimum; flags flat minima.
  double flat_lo = 0.0, flat_hi = 0.0;
};

// Sweeps n_levels thresholds uniformly over the open value range and returns
// the level minimizing h, ties to the smaller tau.  Requires image points
// (use the node positions themselves for a static ratio).
inline CheegerResult cheeger_threshold(const GridField& field, int n_levels = 256,
                                       int threads = 1) {
  field.validate();
  if (field.image_points.empty())
    throw InvalidArgument("cheeger_threshold: field has no image points");
  if (n_levels < 1) throw InvalidArgument("cheeger_threshold: n_levels must be >= 1");
  const auto [umin_it, umax_it] =
      std::minmax_element(field.values.begin(), field.values.end());
  const double umin = *umin_it, umax = *umax_it;
  if (!(umax - umin > 1e-12))
    throw DegenerateField("cheeger_threshold: field value range below 1e-12");

  CheegerResult out;
  out.levels.resize(static_cast<std::size_t>(n_levels));
  parallel_for(static_cast<std::size_t>(n_levels), threads,
               [&](std::size_t lo, std::size_t hi) {
                 for (std::size_t l = lo; l < hi; ++l) {
                   const double tau =
                       umin + (umax - umin) * static_cast<double>(l + 1) /
                                  static_cast<double>(n_levels + 1);
                   CheegerLevel& lev = out.levels[l];
                   lev.tau = tau;
                   const LevelSet ls = extract_level_set(field, tau);
                   lev.length = ls.length;
                   lev.image_length = ls.image_length;
                   lev.area_min = std::min(ls.area_super, ls.area_sub);
                   if (ls.segments.empty() || !(lev.area_min > 0.0)) continue;
                   lev.h = (ls.length + ls.image_length) / (2.0 * std::sqrt(lev.area_min));
                   lev.empty = false;
                 }
               });

  const CheegerLevel* best = nullptr;
  for (const auto& lev : out.levels)
    if (!lev.empty && (best == nullptr || lev.h < best->h)) best = &lev;
  if (best == nullptr)
    throw DegenerateField("cheeger_threshold: every level was empty");
  out.tau_star = best->tau;
  out.h_star = best->h;
  out.flat_lo = out.flat_hi = best->tau;
  for (const auto& lev : out.levels) {
    if (lev.empty || lev.h > 1.01 * best->h) continue;
    out.flat_lo = std::min(out.flat_lo, lev.tau);
    out.flat_hi = std::max(out.flat_hi, lev.tau);
  }
  out.contour = chain_polylines(extract_level_set(field, out.tau_star).segments);
  return out;
}

}  // namespace seba
