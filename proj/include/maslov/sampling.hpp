#pragma once

// Seeded random instances: symplectic matrices, lagrangian frames with a
// prescribed intersection, gauges, closed loops of lines and coboundaries.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "maslov/cech.hpp"
#include "maslov/symplectic.hpp"

namespace maslov::sampling {

using Rng = std::mt19937_64;

inline Scalar gaussian(Rng& rng, Field field) {
  std::normal_distribution<double> nd(0.0, 1.0);
  return field == Field::real ? Scalar(nd(rng), 0.0) : Scalar(nd(rng), nd(rng)) / std::sqrt(2.0);
}

inline Matrix gaussian_matrix(Rng& rng, int rows, int cols, Field field) {
  Matrix M(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) M(r, c) = gaussian(rng, field);
  return M;
}

inline Matrix symmetric_matrix(Rng& rng, int n, Field field, double scale) {
  const Matrix G = gaussian_matrix(rng, n, n, field);
  return scale * 0.5 * (G + G.transpose());
}

/// Well-conditioned element of GL(n).
inline Matrix random_gauge(Rng& rng, int n, Field field) {
  for (;;) {
    const Matrix g = Matrix::Identity(n, n) + 0.6 * gaussian_matrix(rng, n, n, field);
    Eigen::JacobiSVD<Matrix> svd(g);
    const auto& s = svd.singularValues();
    if (s(n - 1) > 0.2 && s(0) / s(n - 1) < 50.0) return g;
  }
}

/// Product of shears [[I,S],[0,I]], [[I,0],[T,I]] and a block [[A,0],[0,A^-T]],
/// all symplectic for the standard form.
inline Matrix random_symplectic(Rng& rng, int n, Field field) {
  Matrix upper = Matrix::Identity(2 * n, 2 * n);
  upper.topRightCorner(n, n) = symmetric_matrix(rng, n, field, 0.7);
  Matrix lower = Matrix::Identity(2 * n, 2 * n);
  lower.bottomLeftCorner(n, n) = symmetric_matrix(rng, n, field, 0.7);
  const Matrix A = random_gauge(rng, n, field);
  Matrix block = Matrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = A;
  block.bottomRightCorner(n, n) = A.inverse().transpose();
  return upper * lower * block;
}

/// Uniform real lagrangian: columns of [Re U; Im U] for a Haar unitary U.
inline LagrangianFrame random_real_lagrangian(Rng& rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rng, n, n, Field::complex));
  const Matrix U = qr.householderQ() * Matrix::Identity(n, n);
  Matrix Z(2 * n, n);
  Z.topRows(n) = U.real().cast<Scalar>();
  Z.bottomRows(n) = U.imag().cast<Scalar>();
  return LagrangianFrame(Z, standard_space(n, Field::real));
}

inline LagrangianFrame random_lagrangian(Rng& rng, int n, Field field) {
  if (field == Field::real) return random_real_lagrangian(rng, n);
  Matrix Z = Matrix::Zero(2 * n, n);
  Z.topRows(n) = Matrix::Identity(n, n);
  return LagrangianFrame(random_symplectic(rng, n, field) * Z, standard_space(n, field));
}

/// A pair (L, L0) with dim(L n L0) = k for generic draws: in coordinates where
/// L0 is the q-plane, L = span(q_1..q_k) + (a generic lagrangian of the rest),
/// then both moved by the same random symplectic map and regauged.
struct FramePair {
  LagrangianFrame L;
  LagrangianFrame L0;
  int intersection = 0;
};

inline FramePair random_pair_with_intersection(Rng& rng, int n, int k, Field field) {
  const Matrix M = random_symplectic(rng, n, field);
  Matrix Z0 = Matrix::Zero(2 * n, n);
  Z0.topRows(n) = Matrix::Identity(n, n);
  Matrix Z = Matrix::Zero(2 * n, n);
  for (int c = 0; c < k; ++c) Z(c, c) = 1.0;
  const int rest = n - k;
  if (rest > 0) {
    // Graph q = S p over the remaining coordinates with S invertible symmetric
    // keeps the rest transverse to the q-plane.
    Matrix S;
    for (;;) {
      S = symmetric_matrix(rng, rest, field, 1.0);
      if (Eigen::JacobiSVD<Matrix>(S).singularValues()(rest - 1) > 0.2) break;
    }
    for (int c = 0; c < rest; ++c) {
      for (int r = 0; r < rest; ++r) Z(k + r, k + c) = S(r, c);
      Z(n + k + c, k + c) = 1.0;
    }
  }
  const SymplecticSpace sp = standard_space(n, field);
  return {LagrangianFrame(M * Z * random_gauge(rng, n, field), sp),
          LagrangianFrame(M * Z0 * random_gauge(rng, n, field), sp), k};
}

/// Closed loop of lines in the real plane: a biased random walk of the line
/// angle, closed up to the nearest multiple of pi. Returns the loop and the
/// number of half-turns, which is its index under the counterclockwise
/// convention.
struct PlaneLoop {
  LagrangianLoop loop;
  long half_turns = 0;
};

inline PlaneLoop random_closed_plane_loop(Rng& rng) {
  std::uniform_real_distribution<double> start(0.0, std::numbers::pi);
  std::uniform_real_distribution<double> bias_dist(-0.12, 0.12);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  std::uniform_int_distribution<int> length(30, 160);
  const double a0 = start(rng);
  const double bias = bias_dist(rng);
  std::vector<double> angles{a0};
  const int steps = length(rng);
  for (int s = 0; s < steps; ++s) angles.push_back(angles.back() + bias + jitter(rng));
  const long turns = std::lround((angles.back() - a0) / std::numbers::pi);
  const double target = a0 + std::numbers::pi * static_cast<double>(turns);
  const double gap = target - angles.back();
  const int closing = std::max(1, static_cast<int>(std::ceil(std::abs(gap) / 0.3)));
  const double from = angles.back();
  for (int s = 1; s <= closing; ++s) angles.push_back(from + gap * s / closing);

  const SymplecticSpace plane = standard_space(1, Field::real);
  std::uniform_real_distribution<double> len(0.3, 3.0);
  std::bernoulli_distribution flip(0.3);
  std::vector<LagrangianFrame> frames;
  for (double a : angles) {
    const double scale = len(rng) * (flip(rng) ? -1.0 : 1.0);
    Matrix Z(2, 1);
    Z << scale * std::cos(a), scale * std::sin(a);
    frames.emplace_back(Z, plane);
  }
  return {LagrangianLoop(std::move(frames), true), turns};
}

/// b_i(w) = exp(c_i0 + c_i1 Re w + c_i2 Im w + c_i3 |w|^2 / 4) with complex
/// coefficients: smooth and nonvanishing on every set.
struct RandomCoboundary {
  std::vector<std::array<Scalar, 4>> coeffs;

  Scalar operator()(std::size_t set, BasePoint w) const {
    const auto& c = coeffs.at(set);
    return std::exp(c[0] + c[1] * w.real() + c[2] * w.imag() + c[3] * std::norm(w) * 0.25);
  }
};

inline RandomCoboundary random_coboundary(Rng& rng, std::size_t sets, double amplitude = 0.5) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  RandomCoboundary b;
  for (std::size_t s = 0; s < sets; ++s) {
    std::array<Scalar, 4> c;
    for (auto& x : c) x = Scalar(u(rng), u(rng));
    b.coeffs.push_back(c);
  }
  return b;
}

}  // namespace maslov::sampling
