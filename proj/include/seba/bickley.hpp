#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "seba/error.hpp"
#include "seba/parallel.hpp"

namespace seba {

// Bickley jet: a meandering zonal jet with three travelling Rossby-wave
// perturbations, a standard test flow for coherent-set detection.  Stream
// function
//   psi(x,y,t) = -U0 L0 tanh(y/L0) + sum_i A_i U0 L0 sech^2(y/L0) cos(k_i (x - c_i t)),
// evaluated here in megameters and days on [0,20] x [-3,3], x-periodic.
struct BickleyFlow {
  // 62.66 m/s and 1770 km converted to Mm/day and Mm.
  double U0 = 62.66 * 0.0864;
  double L0 = 1.77;
  std::array<double, 3> A{0.0075, 0.15, 0.3};
  std::array<double, 3> c{0.1446 * 62.66 * 0.0864, 0.205 * 62.66 * 0.0864,
                          0.461 * 62.66 * 0.0864};
  std::array<double, 3> k{2.0 / 6.371, 4.0 / 6.371, 6.0 / 6.371};
  double x0 = 0.0, x1 = 20.0, y0 = -3.0, y1 = 3.0;

  template <class T>
  std::pair<T, T> velocity_at(T x, T y, T t) const {
    // The flow is treated as 20-Mm periodic; evaluate on the fundamental domain.
    T xw = std::fmod(x - static_cast<T>(x0), static_cast<T>(x1 - x0));
    if (xw < T(0)) xw += static_cast<T>(x1 - x0);
    xw += static_cast<T>(x0);
    const T yy = y / static_cast<T>(L0);
    const T sech = T(1) / std::cosh(yy);
    const T sech2 = sech * sech;
    const T th = std::tanh(yy);
    T wave = T(0), dwave = T(0);
    for (int i = 0; i < 3; ++i) {
      const T phase = static_cast<T>(k[i]) * (xw - static_cast<T>(c[i]) * t);
      wave += static_cast<T>(A[i]) * std::cos(phase);
      dwave += static_cast<T>(A[i]) * static_cast<T>(k[i]) * std::sin(phase);
    }
    // u = -d(psi)/dy, v = d(psi)/dx, both closed form.
    const T u = static_cast<T>(U0) * sech2 * (T(1) + T(2) * th * wave);
    const T v = -static_cast<T>(U0) * static_cast<T>(L0) * sech2 * dwave;
    return {u, v};
  }

  std::pair<double, double> velocity(double x, double y, double t) const {
    return velocity_at<double>(x, y, t);
  }
  std::pair<double, double> operator()(double x, double y, double t) const {
    return velocity_at<double>(x, y, t);
  }
};

// Classical fixed-step RK4 for a single point under a velocity field
// vel(x, y, t) -> (u, v).  The step count is ceil(|t1-t0|/step) so the
// integration lands exactly on t1; deterministic for a fixed step.
template <class Vel>
std::array<double, 2> rk4_advect_point(const Vel& vel, double x, double y, double t0,
                                       double t1, double step) {
  if (!(step > 0.0)) throw InvalidArgument("rk4_advect_point: step must be positive");
  const double span = t1 - t0;
  if (span == 0.0) return {x, y};
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(span) / step)));
  const double h = span / n;
  double t = t0;
  for (int s = 0; s < n; ++s) {
    const auto [u1, v1] = vel(x, y, t);
    const auto [u2, v2] = vel(x + 0.5 * h * u1, y + 0.5 * h * v1, t + 0.5 * h);
    const auto [u3, v3] = vel(x + 0.5 * h * u2, y + 0.5 * h * v2, t + 0.5 * h);
    const auto [u4, v4] = vel(x + h * u3, y + h * v3, t + h);
    x += h / 6.0 * (u1 + 2.0 * u2 + 2.0 * u3 + u4);
    y += h / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
    t = t0 + (s + 1) * h;
  }
  return {x, y};
}

// Advects a batch of points; parallel over points, output independent of the
// thread count.
template <class Vel>
std::vector<std::array<double, 2>> flow_map(const Vel& vel,
                                            const std::vector<std::array<double, 2>>& pts,
                                            double t0, double t1, double step,
                                            int threads = 1) {
  std::vector<std::array<double, 2>> out(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      out[i] = rk4_advect_point(vel, pts[i][0], pts[i][1], t0, t1, step);
  });
  return out;
}

// Bickley overload: inputs are first wrapped into the fundamental domain and
// the integer-period offset restored afterwards, so points 20 Mm apart map to
// outputs exactly 20 Mm apart.
inline std::vector<std::array<double, 2>> flow_map(const BickleyFlow& flow,
                                                   const std::vector<std::array<double, 2>>& pts,
                                                   double t0, double t1, double step,
                                                   int threads = 1) {
  const double period = flow.x1 - flow.x0;
  std::vector<std::array<double, 2>> wrapped(pts.size());
  std::vector<double> offset(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double w = std::fmod(pts[i][0] - flow.x0, period);
    if (w < 0) w += period;
    w += flow.x0;
    offset[i] = pts[i][0] - w;
    wrapped[i] = {w, pts[i][1]};
  }
  auto out = flow_map(
      [&flow](double x, double y, double t) { return flow.velocity(x, y, t); }, wrapped,
      t0, t1, step, threads);
  for (std::size_t i = 0; i < pts.size(); ++i) out[i][0] += offset[i];
  return out;
}

}  // namespace seba
