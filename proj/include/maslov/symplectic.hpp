#pragma once

// Symplectic vector spaces in canonical coordinates, lagrangian frames and
// sampled loops of lagrangian subspaces.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "maslov/errors.hpp"

namespace maslov {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Field { real, complex };

inline const char* to_string(Field f) { return f == Field::real ? "real" : "complex"; }

/// Layout of the symplectic form in the coordinates a frame is written in.
///  - standard:     (q_1..q_n, p_1..p_n), J = [[0, I], [-I, 0]].
///  - opposite_sum: V + V-bar for a standard V of half-dimension n/2, in
///                  coordinates (q, p, q', p') with form  w(q,p) - w(q',p').
enum class FormKind { standard, opposite_sum };

namespace tolerance {
/// Smallest singular value over largest singular value for full rank.
inline constexpr double rank = 1e-8;
/// Max |Z^T J Z| entry for unit-normalized columns.
inline constexpr double isotropy = 1e-9;
/// Max principal angle between consecutive loop samples (radians).
inline constexpr double loop_step = 0.4;
/// Max principal angle between first and last sample of a closed loop.
inline constexpr double closure = 1e-8;
/// Sine of a principal angle below which two directions are identified.
inline constexpr double intersection = 1e-8;
}  // namespace tolerance

class SymplecticSpace {
 public:
  SymplecticSpace(int n, Field field, FormKind form = FormKind::standard)
      : n_(n), field_(field), form_(form) {
    if (n < 1) throw InvalidArgument("symplectic space needs half-dimension n >= 1");
    if (form == FormKind::opposite_sum && n % 2 != 0)
      throw InvalidArgument("opposite-sum space needs an even half-dimension");
  }

  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  Field field() const { return field_; }
  FormKind form() const { return form_; }

  /// Matrix J of the form, w(x, y) = x^T J y.
  Matrix form_matrix() const {
    if (form_ == FormKind::standard) return standard_block(n_);
    const int m = n_ / 2;
    Matrix J = Matrix::Zero(dim(), dim());
    J.topLeftCorner(2 * m, 2 * m) = standard_block(m);
    J.bottomRightCorner(2 * m, 2 * m) = -standard_block(m);
    return J;
  }

  /// Linear map P into standard coordinates with P^T J_std P = J.
  /// For the opposite sum, (q, p, q', p') is sent to Q = (q, p'), P = (p, q').
  Matrix to_standard() const {
    if (form_ == FormKind::standard) return Matrix::Identity(dim(), dim());
    const int m = n_ / 2;
    Matrix P = Matrix::Zero(dim(), dim());
    for (int r = 0; r < m; ++r) {
      P(r, r) = 1.0;                  // Q_r     <- q_r
      P(m + r, 3 * m + r) = 1.0;      // Q_{m+r} <- p'_r
      P(2 * m + r, m + r) = 1.0;      // P_r     <- p_r
      P(3 * m + r, 2 * m + r) = 1.0;  // P_{m+r} <- q'_r
    }
    return P;
  }

  SymplecticSpace standard_equivalent() const { return SymplecticSpace(n_, field_); }

  bool operator==(const SymplecticSpace&) const = default;

 private:
  static Matrix standard_block(int n) {
    Matrix J = Matrix::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = Matrix::Identity(n, n);
    J.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
    return J;
  }

  int n_;
  Field field_;
  FormKind form_;
};

inline SymplecticSpace standard_space(int n, Field field) {
  if (n < 1) throw InvalidArgument("standard_space: n must be >= 1");
  return SymplecticSpace(n, field);
}

/// V + V-bar where V is the standard space of half-dimension `n_v`.
inline SymplecticSpace opposite_sum_space(int n_v, Field field) {
  if (n_v < 1) throw InvalidArgument("opposite_sum_space: n must be >= 1");
  return SymplecticSpace(2 * n_v, field, FormKind::opposite_sum);
}

struct LagrangianCheck {
  bool lagrangian = false;
  bool full_rank = false;
  double isotropy_defect = 0.0;  // max |Z^T J Z| for unit columns
  double rank_ratio = 0.0;       // sigma_min / sigma_max
  std::string diagnostic;
};

namespace detail {

inline Matrix unit_columns(const Matrix& Z) {
  Matrix U = Z;
  for (Eigen::Index c = 0; c < U.cols(); ++c) {
    const double nrm = U.col(c).norm();
    if (nrm > 0.0) U.col(c) /= nrm;
  }
  return U;
}

inline double max_abs(const Matrix& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

inline double rank_ratio(const Matrix& Z) {
  Eigen::JacobiSVD<Matrix> svd(Z);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

/// Orthonormal basis of the column span (thin Householder Q).
inline Matrix orthonormal_basis(const Matrix& Z) {
  Eigen::HouseholderQR<Matrix> qr(Z);
  return qr.householderQ() * Matrix::Identity(Z.rows(), Z.cols());
}

}  // namespace detail

/// Membership test for Lag(E): numerical rank n and isotropy.
inline LagrangianCheck is_lagrangian(const Matrix& Z, const SymplecticSpace& space) {
  if (Z.rows() != space.dim() || Z.cols() != space.n())
    throw InvalidArgument("is_lagrangian: expected a " + std::to_string(space.dim()) + "x" +
                          std::to_string(space.n()) + " frame, got " + std::to_string(Z.rows()) +
                          "x" + std::to_string(Z.cols()));
  LagrangianCheck out;
  if (space.field() == Field::real && Z.size() > 0 &&
      Z.imag().cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, detail::max_abs(Z))) {
    out.diagnostic = "real space but frame has imaginary entries";
    return out;
  }
  out.rank_ratio = detail::rank_ratio(Z);
  out.full_rank = out.rank_ratio > tolerance::rank;
  const Matrix U = detail::unit_columns(Z);
  out.isotropy_defect = detail::max_abs(U.transpose() * space.form_matrix() * U);
  out.lagrangian = out.full_rank && out.isotropy_defect < tolerance::isotropy;
  if (!out.full_rank)
    out.diagnostic = "rank deficient (sigma_min/sigma_max = " + std::to_string(out.rank_ratio) + ")";
  else if (!out.lagrangian)
    out.diagnostic = "not isotropic (max |Z^T J Z| = " + std::to_string(out.isotropy_defect) + ")";
  return out;
}

/// A 2n x n full-rank isotropic frame. Frames with equal column span are the
/// same point of Lag(E); every quantity that matters downstream is compared
/// through spans or gauge-covariant scalars.
class LagrangianFrame {
 public:
  LagrangianFrame(Matrix Z, SymplecticSpace space) : Z_(std::move(Z)), space_(space) {
    const LagrangianCheck chk = is_lagrangian(Z_, space_);
    if (!chk.lagrangian) throw InvalidArgument("not a lagrangian frame: " + chk.diagnostic);
    if (space_.field() == Field::real) Z_ = Z_.real().cast<Scalar>();
  }

  const Matrix& matrix() const { return Z_; }
  const SymplecticSpace& space() const { return space_; }
  int n() const { return space_.n(); }
  Field field() const { return space_.field(); }

  Matrix orthonormal_basis() const { return detail::orthonormal_basis(Z_); }

  /// Same subspace written in the standard coordinates of the space.
  LagrangianFrame in_standard_coordinates() const {
    if (space_.form() == FormKind::standard) return *this;
    return LagrangianFrame(space_.to_standard() * Z_, space_.standard_equivalent());
  }

  /// Right action of GL(n): same subspace, different frame.
  LagrangianFrame regauged(const Matrix& g) const {
    if (g.rows() != n() || g.cols() != n()) throw InvalidArgument("gauge must be n x n");
    return LagrangianFrame(Z_ * g, space_);
  }

 private:
  Matrix Z_;
  SymplecticSpace space_;
};

inline void require_same_space(const LagrangianFrame& a, const LagrangianFrame& b, const char* what) {
  if (!(a.space() == b.space())) throw InvalidArgument(std::string(what) + ": frames live in different spaces");
}

/// Principal angles between the two spans, ascending, from sines of the
/// residual of one orthonormal basis against the other (accurate near 0).
inline Eigen::VectorXd principal_angles(const LagrangianFrame& a, const LagrangianFrame& b) {
  require_same_space(a, b, "principal_angles");
  const Matrix Qa = a.orthonormal_basis();
  const Matrix Qb = b.orthonormal_basis();
  const Matrix residual = Qb - Qa * (Qa.adjoint() * Qb);
  Eigen::JacobiSVD<Matrix> svd(residual);
  Eigen::VectorXd s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::asin(std::min(1.0, s(i)));
  std::sort(s.data(), s.data() + s.size());
  return s;
}

inline double max_principal_angle(const LagrangianFrame& a, const LagrangianFrame& b) {
  const Eigen::VectorXd th = principal_angles(a, b);
  return th.size() ? th.maxCoeff() : 0.0;
}

inline bool same_subspace(const LagrangianFrame& a, const LagrangianFrame& b,
                          double tol = tolerance::closure) {
  return max_principal_angle(a, b) < tol;
}

/// Ordered samples of a path in Lag(E), consecutive samples within the step
/// bound. A closed loop repeats its first subspace as its last sample.
class LagrangianLoop {
 public:
  LagrangianLoop(std::vector<LagrangianFrame> samples, bool closed = true)
      : samples_(std::move(samples)), closed_(closed) {
    if (samples_.size() < 2) throw InvalidArgument("a loop needs at least 2 samples");
    const SymplecticSpace& sp = samples_.front().space();
    for (std::size_t i = 1; i < samples_.size(); ++i) {
      if (!(samples_[i].space() == sp)) throw InvalidArgument("loop samples live in different spaces");
      const double step = max_principal_angle(samples_[i - 1], samples_[i]);
      if (step > tolerance::loop_step + 1e-12)
        throw InvalidArgument("loop step " + std::to_string(i - 1) + "->" + std::to_string(i) +
                              " has principal angle " + std::to_string(step) + " > " +
                              std::to_string(tolerance::loop_step));
    }
    if (closed_ && !same_subspace(samples_.front(), samples_.back()))
      throw InvalidArgument("closed loop: first and last samples span different subspaces");
  }

  const std::vector<LagrangianFrame>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool closed() const { return closed_; }
  const SymplecticSpace& space() const { return samples_.front().space(); }
  const LagrangianFrame& operator[](std::size_t i) const { return samples_[i]; }

 private:
  std::vector<LagrangianFrame> samples_;
  bool closed_;
};

inline LagrangianLoop reversed(const LagrangianLoop& loop) {
  std::vector<LagrangianFrame> s(loop.samples().rbegin(), loop.samples().rend());
  return LagrangianLoop(std::move(s), loop.closed());
}

/// `a` followed by `b`; the last sample of `a` must span the first of `b`.
inline LagrangianLoop concatenate(const LagrangianLoop& a, const LagrangianLoop& b) {
  if (!same_subspace(a.samples().back(), b.samples().front()))
    throw InvalidArgument("concatenate: end of first path is not the start of the second");
  std::vector<LagrangianFrame> s = a.samples();
  s.insert(s.end(), b.samples().begin() + 1, b.samples().end());
  const bool closed = same_subspace(s.front(), s.back());
  return LagrangianLoop(std::move(s), closed);
}

/// Same closed loop started at sample `shift`.
inline LagrangianLoop cyclically_shifted(const LagrangianLoop& loop, std::size_t shift) {
  if (!loop.closed()) throw InvalidArgument("cyclic shift needs a closed loop");
  const std::size_t m = loop.size() - 1;  // distinct samples
  shift %= m;
  std::vector<LagrangianFrame> s;
  s.reserve(m + 1);
  for (std::size_t i = 0; i <= m; ++i) s.push_back(loop[(shift + i) % m]);
  return LagrangianLoop(std::move(s), true);
}

/// Every sample right-multiplied by its own gauge matrix.
template <class GaugeFn>
LagrangianLoop regauged(const LagrangianLoop& loop, GaugeFn&& gauge_for_sample) {
  std::vector<LagrangianFrame> s;
  s.reserve(loop.size());
  for (std::size_t i = 0; i < loop.size(); ++i) s.push_back(loop[i].regauged(gauge_for_sample(i)));
  return LagrangianLoop(std::move(s), loop.closed());
}

/// Line span{(cos k*pi*t, sin k*pi*t)} in the standard real plane, t in [0,1],
/// m samples. Counterclockwise for k > 0.
inline LagrangianLoop rotation_line_loop(int k, std::size_t m) {
  const std::size_t ak = static_cast<std::size_t>(std::abs(k));
  if (m < 4 * ak + 2 || m < 2) throw InvalidArgument("rotation_line_loop: need m >= 4|k| + 2");
  const double step = std::numbers::pi * static_cast<double>(ak) / static_cast<double>(m - 1);
  if (step > tolerance::loop_step)
    throw InvalidArgument("rotation_line_loop: m = " + std::to_string(m) + " too small for the step bound at k = " +
                          std::to_string(k));
  const SymplecticSpace plane = standard_space(1, Field::real);
  std::vector<LagrangianFrame> s;
  s.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double angle = std::numbers::pi * k * static_cast<double>(j) / static_cast<double>(m - 1);
    Matrix Z(2, 1);
    Z << std::cos(angle), std::sin(angle);
    s.emplace_back(std::move(Z), plane);
  }
  return LagrangianLoop(std::move(s), true);
}

/// Block-diagonal sum of two lagrangian frames, in standard coordinates of
/// the sum: (q_a, q_b, p_a, p_b).
inline LagrangianFrame direct_sum(const LagrangianFrame& a, const LagrangianFrame& b) {
  if (a.field() != b.field()) throw InvalidArgument("direct_sum: field mismatch");
  const LagrangianFrame sa = a.in_standard_coordinates();
  const LagrangianFrame sb = b.in_standard_coordinates();
  const int na = sa.n(), nb = sb.n(), n = na + nb;
  Matrix Z = Matrix::Zero(2 * n, n);
  Z.block(0, 0, na, na) = sa.matrix().topRows(na);
  Z.block(na, na, nb, nb) = sb.matrix().topRows(nb);
  Z.block(n, 0, na, na) = sa.matrix().bottomRows(na);
  Z.block(n + na, na, nb, nb) = sb.matrix().bottomRows(nb);
  return LagrangianFrame(std::move(Z), standard_space(n, a.field()));
}

inline LagrangianLoop direct_sum_loop(const LagrangianLoop& planar, const LagrangianFrame& fixed) {
  if (planar.space().field() != fixed.field()) throw InvalidArgument("direct_sum_loop: field mismatch");
  std::vector<LagrangianFrame> s;
  s.reserve(planar.size());
  for (const auto& f : planar.samples()) s.push_back(direct_sum(f, fixed));
  return LagrangianLoop(std::move(s), planar.closed());
}

/// Graphs {(A v, v)} of the rotations A(t) by angle 2*pi*t of the standard
/// real plane V, as a loop in Lag(V + V-bar).
inline LagrangianLoop sp_graph_loop(std::size_t m) {
  if (m < 8) throw InvalidArgument("sp_graph_loop: need m >= 8");
  // Consecutive graphs of rotations differing by d have principal angles d/2.
  if (std::numbers::pi / static_cast<double>(m - 1) > tolerance::loop_step)
    throw InvalidArgument("sp_graph_loop: m = " + std::to_string(m) + " too small for the step bound");
  const SymplecticSpace space = opposite_sum_space(1, Field::real);
  std::vector<LagrangianFrame> s;
  s.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m - 1);
    const double c = std::cos(t), sn = std::sin(t);
    Matrix Z(4, 2);
    Z << c, -sn,
         sn, c,
         1, 0,
         0, 1;
    s.emplace_back(std::move(Z), space);
  }
  return LagrangianLoop(std::move(s), true);
}

}  // namespace maslov
