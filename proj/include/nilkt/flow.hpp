#pragma once

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "nilkt/errors.hpp"
#include "nilkt/liealg.hpp"
#include "nilkt/oracle.hpp"

// Geodesic flow through the identity frame, in float mode only.
//
// A geodesic is written exp(w(t)) with left-trivialized velocity y(t).
//   * Velocity: the connection bilinear map is
//       a(u, x) = 1/2 [u, x] - 1/2 j(u_z) x - 1/2 j(x_z) u,
//     so the geodesic equation ydot = -a(y, y) collapses to ydot = j(y_z) y.
//     Its central component vanishes (j lands in the complement of the center
//     and kills the center), so y_z is a constant of the motion and the
//     velocity equation is linear with the fixed matrix j(y_z).
//   * Position: on a 2-step algebra the left-trivialized differential of exp
//     is u -> u - 1/2 [w, u], a terminating series, and it inverts exactly:
//     substituting wdot = y + 1/2 [w, y] back gives y + 1/4 [w, [w, y]] = y.
// Both right-hand sides are polynomial in (w, y); a classical fixed-step
// 4th-order scheme integrates them with an O(h^4) error budget, and the
// velocity additionally has the closed form y(t) = exp(t j(y_z)) y(0).

namespace nilkt {

struct GeodesicState {
  Vec<double> w;  // position in exponential coordinates
  Vec<double> y;  // left-trivialized velocity
  double t = 0;
};

struct Trajectory {
  double h = 0;
  std::vector<GeodesicState> samples;  // uniform step, samples[i].t = i * h
};

/// Matrix exponential by scaling and squaring: halve until the row-sum norm
/// is at most 1/2, run 24 series terms (remainder far below double
/// round-off), square back.
inline Mat<double> expm(const Mat<double>& a) {
  if (a.rows() != a.cols()) throw dimension_mismatch("matrix exponential needs a square matrix");
  const int n = a.rows();
  double norm = 0;
  for (int i = 0; i < n; ++i) {
    double row = 0;
    for (int j = 0; j < n; ++j) row += std::abs(a(i, j));
    norm = std::max(norm, row);
  }
  if (!std::isfinite(norm)) throw user_error("matrix exponential needs finite entries");
  int s = 0;
  while (norm > 0.5) {
    norm *= 0.5;
    ++s;
  }
  Mat<double> b = s > 0 ? a.scaled(std::ldexp(1.0, -s)) : a;
  Mat<double> e = Mat<double>::identity(n);
  for (int k = 24; k >= 1; --k) {
    e = (b * e).scaled(1.0 / k) + Mat<double>::identity(n);
  }
  for (int i = 0; i < s; ++i) e = e * e;
  return e;
}

/// Closed-form velocity y(t) = exp(t j(y0)) y0; the central part is fixed and
/// the complement rotates.
inline Vec<double> exact_velocity(const LieAlgebra<double>& alg, const Vec<double>& y0,
                                  double t) {
  if (int(y0.size()) != alg.n) throw dimension_mismatch("state size does not match the algebra");
  return expm(alg.j(y0).scaled(t)).apply(y0);
}

template <typename T>
Vec<double> exact_velocity(const LieAlgebra<T>&, const Vec<T>&, double) {
  throw non_float_mode("the closed-form velocity runs in float mode only; convert the algebra to doubles first");
}

/// Integrates wdot = y + 1/2 [w, y], ydot = j(y_z) y from (w0, y0) with a
/// classical 4th-order one-step scheme at uniform step t_max / steps,
/// recording every step.  The central velocity components are exactly
/// constant in the scheme's vector field.
inline Trajectory integrate(const LieAlgebra<double>& alg, const Vec<double>& y0,
                            const Vec<double>& w0, double t_max, int steps) {
  const int n = alg.n;
  if (int(alg.c.size()) != n) throw dimension_mismatch("malformed structure constants");
  for (const auto& m : alg.c)
    if (m.rows() != n || m.cols() != n) throw dimension_mismatch("malformed structure constants");
  if (int(y0.size()) != n || int(w0.size()) != n)
    throw dimension_mismatch("initial state size does not match the algebra");
  if (steps < 1) throw user_error("integration needs at least one step");
  if (!(t_max > 0)) throw user_error("integration needs a positive time horizon");

  // j(y) sees only the central component of y, which the flow preserves, so
  // the velocity matrix is fixed along the trajectory.
  const Mat<double> j0 = alg.j(y0);
  // Sparse structure constants for the position bracket.
  struct Entry {
    int l, i, j;
    double v;
  };
  std::vector<Entry> nz;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (alg.c[l](i, j) != 0) nz.push_back({l, i, j, alg.c[l](i, j)});

  auto deriv = [&](const Vec<double>& wv, const Vec<double>& yv, Vec<double>& dw,
                   Vec<double>& dy) {
    for (int r = 0; r < n; ++r) {
      double acc = 0;
      for (int q = 0; q < n; ++q) acc += j0(r, q) * yv[q];
      dy[r] = acc;
      dw[r] = yv[r];
    }
    for (const auto& e : nz) dw[e.l] += 0.5 * e.v * wv[e.i] * yv[e.j];
  };

  const double h = t_max / steps;
  Trajectory traj;
  traj.h = h;
  traj.samples.reserve(steps + 1);
  Vec<double> w = w0, y = y0;
  traj.samples.push_back({w, y, 0.0});
  Vec<double> kw1(n), ky1(n), kw2(n), ky2(n), kw3(n), ky3(n), kw4(n), ky4(n), tw(n), ty(n);
  for (int i = 1; i <= steps; ++i) {
    deriv(w, y, kw1, ky1);
    for (int q = 0; q < n; ++q) {
      tw[q] = w[q] + 0.5 * h * kw1[q];
      ty[q] = y[q] + 0.5 * h * ky1[q];
    }
    deriv(tw, ty, kw2, ky2);
    for (int q = 0; q < n; ++q) {
      tw[q] = w[q] + 0.5 * h * kw2[q];
      ty[q] = y[q] + 0.5 * h * ky2[q];
    }
    deriv(tw, ty, kw3, ky3);
    for (int q = 0; q < n; ++q) {
      tw[q] = w[q] + h * kw3[q];
      ty[q] = y[q] + h * ky3[q];
    }
    deriv(tw, ty, kw4, ky4);
    for (int q = 0; q < n; ++q) {
      w[q] += h / 6 * (kw1[q] + 2 * kw2[q] + 2 * kw3[q] + kw4[q]);
      y[q] += h / 6 * (ky1[q] + 2 * ky2[q] + 2 * ky3[q] + ky4[q]);
    }
    traj.samples.push_back({w, y, i * h});
  }
  return traj;
}

template <typename T>
Trajectory integrate(const LieAlgebra<T>&, const Vec<T>&, const Vec<T>&, double, int) {
  throw non_float_mode("geodesic integration runs in float mode only; convert the algebra to doubles first");
}

/// Quadratic function of the velocity alone: F = y^T S y.
inline double first_integral(const Mat<double>& s, const GeodesicState& st) {
  const int n = int(st.y.size());
  if (s.rows() != n || s.cols() != n)
    throw dimension_mismatch("tensor size does not match the state");
  return dot(st.y, s.apply(st.y));
}

/// Position-dependent quadratic function F = y^T S(w) y.
inline double first_integral(const OmegaPolynomial<double>& f, const GeodesicState& st) {
  if (int(st.y.size()) != f.n || int(st.w.size()) != f.n)
    throw dimension_mismatch("polynomial size does not match the state");
  return dot(st.y, omega_evaluate(f, st.w).apply(st.y));
}

/// Linear momentum of a Killing field: F = <field(w), y>.
inline double first_integral(const OmegaVectorPoly<double>& f, const GeodesicState& st) {
  if (int(st.y.size()) != f.n || int(st.w.size()) != f.n)
    throw dimension_mismatch("polynomial size does not match the state");
  return dot(omega_evaluate(f, st.w), st.y);
}

/// Worst deviation of F from its initial value along the trajectory.
template <typename F>
double drift(const F& f, const Trajectory& traj) {
  if (traj.samples.empty()) throw user_error("drift needs a nonempty trajectory");
  const double f0 = first_integral(f, traj.samples.front());
  double worst = 0;
  for (const auto& st : traj.samples)
    worst = std::max(worst, std::abs(first_integral(f, st) - f0));
  return worst;
}

/// Deterministic seeded initial states with coordinates in [-1, 1); the raw
/// engine words are mapped by hand so every platform draws the same sequence.
inline std::vector<GeodesicState> random_states(int n, int count, unsigned seed) {
  std::mt19937 eng(seed);
  auto coord = [&eng]() { return double(eng()) * (2.0 / 4294967296.0) - 1.0; };
  std::vector<GeodesicState> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    GeodesicState st;
    st.w.assign(n, 0.0);
    st.y.assign(n, 0.0);
    for (auto& c : st.w) c = coord();
    for (auto& c : st.y) c = coord();
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace nilkt
