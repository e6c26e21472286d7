#pragma once

// Scalar maps on the lagrangian grassmannian: slope charts of the plane,
// the det^2 map to U(1) and its winding (the Maslov index of a loop), and
// the determinant section whose zero set is the Maslov cycle of L0.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>

#include "maslov/symplectic.hpp"

namespace maslov {

enum class Chart { slope, inverse_slope };

struct ChartValue {
  Chart chart = Chart::slope;
  Scalar value{0.0, 0.0};
  bool valid = false;
};

struct SlopeCoordinates {
  ChartValue slope;          // a with p = a q
  ChartValue inverse_slope;  // b with q = b p
};

/// Chart coordinates of a line in a symplectic plane. A chart is valid when
/// its denominator is nonzero relative to the spanning vector's length.
inline SlopeCoordinates slope_coords(const LagrangianFrame& L) {
  if (L.n() != 1) throw InvalidArgument("slope_coords: needs a line in a 2-dimensional space");
  const LagrangianFrame s = L.in_standard_coordinates();
  const Scalar q = s.matrix()(0, 0), p = s.matrix()(1, 0);
  const double len = std::hypot(std::abs(q), std::abs(p));
  constexpr double rel = 1e-12;
  SlopeCoordinates out;
  out.slope.chart = Chart::slope;
  out.inverse_slope.chart = Chart::inverse_slope;
  if (std::abs(q) > rel * len) {
    out.slope.valid = true;
    out.slope.value = p / q;
  }
  if (std::abs(p) > rel * len) {
    out.inverse_slope.valid = true;
    out.inverse_slope.value = q / p;
  }
  return out;
}

/// det(X + iY)^2 for an orthonormal frame of a real lagrangian, a point of
/// U(1). Gauge changes multiply det by +-1, which squaring removes.
inline Scalar det_squared(const LagrangianFrame& L) {
  if (L.field() != Field::real) throw FieldError("det_squared: defined for real lagrangians only");
  const LagrangianFrame s = L.in_standard_coordinates();
  const int n = s.n();
  const Matrix Q = s.orthonormal_basis();
  const Matrix U = Q.topRows(n).real().cast<Scalar>() + Scalar(0.0, 1.0) * Q.bottomRows(n).real().cast<Scalar>();
  const Scalar d = U.determinant();
  const Scalar unit = d / std::abs(d);
  return unit * unit;
}

/// Winding number of det^2 along a closed real loop. Each increment is the
/// principal argument of consecutive det^2 ratios; the sum of principal
/// angles per step must keep 2*sum < pi for the lift to be unique.
inline long maslov_index(const LagrangianLoop& loop) {
  if (loop.space().field() != Field::real)
    throw FieldError("maslov_index: complex lagrangian grassmannians carry no degree-1 index");
  if (!loop.closed()) throw InvalidArgument("maslov_index: loop is not closed");
  double total = 0.0;
  Scalar prev = det_squared(loop[0]);
  for (std::size_t i = 1; i < loop.size(); ++i) {
    const double spread = 2.0 * principal_angles(loop[i - 1], loop[i]).sum();
    if (spread >= std::numbers::pi)
      throw AliasingError("maslov_index: step " + std::to_string(i - 1) + "->" + std::to_string(i) +
                          " can move det^2 by " + std::to_string(spread) + " >= pi");
    const Scalar cur = det_squared(loop[i]);
    total += std::arg(cur / prev);
    prev = cur;
  }
  const double turns = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-6)
    throw IntegralityError("maslov_index: accumulated winding " + std::to_string(turns) + " is not an integer");
  return static_cast<long>(rounded);
}

struct SectionValue {
  Scalar value{0.0, 0.0};
  /// Hadamard bound |det(phi Z)| <= ||phi||^n * prod ||z_j||.
  double scale = 1.0;
};

/// Rows spanning the functionals that vanish on L0: the adjoint of an
/// orthonormal basis of the hermitian complement (dq for L0 = p-axis).
inline Matrix default_annihilator(const LagrangianFrame& L0) {
  const int n = L0.n();
  Eigen::HouseholderQR<Matrix> qr(L0.matrix());
  const Matrix full = qr.householderQ() * Matrix::Identity(2 * n, 2 * n);
  return full.rightCols(n).adjoint();
}

/// det(phi * Z_L): the pullback of a top covector on E/L0 to L. Vanishes
/// exactly when L meets L0.
inline SectionValue maslov_section(const LagrangianFrame& L, const LagrangianFrame& L0, const Matrix& phi) {
  require_same_space(L, L0, "maslov_section");
  const int n = L.n();
  if (phi.rows() != n || phi.cols() != 2 * n)
    throw InvalidArgument("maslov_section: phi must be n x 2n");
  const double phi_norm = Eigen::JacobiSVD<Matrix>(phi).singularValues()(0);
  if (!(phi_norm > 0.0) || detail::rank_ratio(phi) <= tolerance::rank)
    throw InvalidArgument("maslov_section: phi must have rank n");
  const double annihilation = (phi * detail::unit_columns(L0.matrix())).cwiseAbs().maxCoeff();
  if (annihilation > 1e-9 * phi_norm)
    throw InvalidArgument("maslov_section: phi does not annihilate L0 (residual " + std::to_string(annihilation) + ")");
  SectionValue out;
  out.value = (phi * L.matrix()).determinant();
  out.scale = std::pow(phi_norm, n);
  for (Eigen::Index c = 0; c < L.matrix().cols(); ++c) out.scale *= L.matrix().col(c).norm();
  return out;
}

inline SectionValue maslov_section(const LagrangianFrame& L, const LagrangianFrame& L0) {
  return maslov_section(L, L0, default_annihilator(L0));
}

/// dim(L intersect L0), counted as principal angles with sine below
/// tolerance::intersection.
inline int transversality_defect(const LagrangianFrame& L, const LagrangianFrame& L0) {
  require_same_space(L, L0, "transversality_defect");
  const Matrix Q0 = L0.orthonormal_basis();
  const Matrix QL = L.orthonormal_basis();
  const Matrix residual = QL - Q0 * (Q0.adjoint() * QL);
  const Eigen::VectorXd sines = Eigen::JacobiSVD<Matrix>(residual).singularValues();
  int count = 0;
  for (Eigen::Index i = 0; i < sines.size(); ++i)
    if (sines(i) < tolerance::intersection) ++count;
  return count;
}

}  // namespace maslov
