#pragma once

// The Z4 Maslov line bundle over real Lag(R^2) with its explicit holonomy,
// and the Maslov gerbe over Lag(C^2) = CP^1 on a tetrahedral cover.
//
// Sign conventions used throughout:
//  - the counterclockwise rotation loop of a line has Maslov index +1;
//  - the square root of arg(a) on {a < 0} is +i by default, making the
//    holonomy of that loop +i;
//  - CP^1 carries its complex orientation; the cover is drawn in the
//    coordinate w of the rotated canonical coordinates below, where the
//    equator |w| = 1 is exactly the set of real lagrangian lines, traversed
//    counterclockwise (increasing real slope).

#include <array>
#include <compare>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "maslov/cech.hpp"
#include "maslov/gerbe.hpp"
#include "maslov/grassmannian.hpp"
#include "maslov/groups.hpp"
#include "maslov/symplectic.hpp"

namespace maslov {

struct BranchConvention {
  enum class NegativeRoot { plus_i, minus_i };
  NegativeRoot sqrt_on_negative = NegativeRoot::plus_i;

  /// sqrt(arg(a)) for a real slope a != 0.
  RootOfUnity<4> sqrt_arg(double a) const {
    if (a > 0) return RootOfUnity<4>(0);
    return RootOfUnity<4>(sqrt_on_negative == NegativeRoot::plus_i ? 1 : 3);
  }
  int sign() const { return sqrt_on_negative == NegativeRoot::plus_i ? 1 : -1; }
};

inline BranchConvention plus_i_branch() { return {BranchConvention::NegativeRoot::plus_i}; }
inline BranchConvention minus_i_branch() { return {BranchConvention::NegativeRoot::minus_i}; }

struct ChartJump {
  std::size_t sample = 0;
  Chart from = Chart::slope;
  Chart to = Chart::slope;
  double slope = 0.0;
  RootOfUnity<4> factor;
};

struct HolonomyResult {
  RootOfUnity<4> value;
  std::vector<ChartJump> jumps;
};

/// Which flat bundle over Lag(R^2) to transport in: the square root of
/// arg(eta*) (transition sqrt(arg a)) or arg(eta*) itself (transition sign a).
enum class TransportBundle { sqrt_arg, arg };

/// Where chart switches happen: `balanced` keeps the chart whose coordinate
/// has modulus <= 1; `lazy` stays in a chart until it is about to fail.
enum class SwitchPolicy { balanced, lazy };

/// Parallel transport of a section coefficient around a closed loop of
/// lines, with bases sqrt(arg(dq)) on the slope chart and sqrt(arg(dp)) on
/// the inverse-slope chart, sqrt(arg(dp)) = sqrt(arg(a)) sqrt(arg(dq)).
inline HolonomyResult transport_holonomy(const LagrangianLoop& loop, BranchConvention convention,
                                         TransportBundle bundle = TransportBundle::sqrt_arg,
                                         SwitchPolicy policy = SwitchPolicy::balanced) {
  if (loop.space().field() != Field::real) throw FieldError("transport_holonomy: needs a real loop");
  if (loop.space().n() != 1) throw InvalidArgument("transport_holonomy: needs a loop of lines in a plane");
  if (!loop.closed()) throw InvalidArgument("transport_holonomy: loop is not closed");

  struct Line {
    double q, p;
    bool slope_ok, inverse_ok;
  };
  std::vector<Line> lines;
  lines.reserve(loop.size());
  for (const auto& f : loop.samples()) {
    const SlopeCoordinates c = slope_coords(f);
    const Matrix Z = f.in_standard_coordinates().matrix();
    lines.push_back({Z(0, 0).real(), Z(1, 0).real(), c.slope.valid, c.inverse_slope.valid});
  }

  auto factor = [&](double a) {
    return bundle == TransportBundle::sqrt_arg ? convention.sqrt_arg(a) : RootOfUnity<4>(a > 0 ? 0 : 2);
  };
  auto valid = [&](std::size_t s, Chart c) { return c == Chart::slope ? lines[s].slope_ok : lines[s].inverse_ok; };
  // The short arc from sample s-1 to s stays in a chart when the chart's
  // denominator keeps its sign along sign-aligned spanning vectors.
  auto segment_ok = [&](std::size_t s, Chart c) {
    if (!valid(s - 1, c) || !valid(s, c)) return false;
    const Line& a = lines[s - 1];
    const Line& b = lines[s];
    const double align = a.q * b.q + a.p * b.p < 0 ? -1.0 : 1.0;
    return c == Chart::slope ? a.q * b.q * align > 0 : a.p * b.p * align > 0;
  };
  auto preferred = [&](std::size_t s) {
    return std::abs(lines[s].p) <= std::abs(lines[s].q) ? Chart::slope : Chart::inverse_slope;
  };
  auto other = [](Chart c) { return c == Chart::slope ? Chart::inverse_slope : Chart::slope; };

  HolonomyResult out;
  RootOfUnity<4> coeff;
  auto switch_at = [&](std::size_t s, Chart from) {
    if (!lines[s].slope_ok || !lines[s].inverse_ok)
      throw AliasingError("transport_holonomy: consecutive samples near " + std::to_string(s) + " share no chart");
    const double a = lines[s].p / lines[s].q;
    // Coefficient w.r.t. sqrt(arg dq) is sqrt(arg a) times the one w.r.t. sqrt(arg dp).
    const RootOfUnity<4> f = from == Chart::slope ? factor(a).inverse() : factor(a);
    coeff = coeff * f;
    out.jumps.push_back({s, from, other(from), a, f});
    return other(from);
  };

  const Chart start = policy == SwitchPolicy::balanced ? preferred(0)
                                                       : (lines[0].slope_ok ? Chart::slope : Chart::inverse_slope);
  Chart current = start;
  for (std::size_t s = 1; s < lines.size(); ++s) {
    if (!segment_ok(s, current)) {
      current = switch_at(s - 1, current);
      if (!segment_ok(s, current))
        throw AliasingError("transport_holonomy: step " + std::to_string(s - 1) + "->" + std::to_string(s) +
                            " leaves both charts");
    } else if (policy == SwitchPolicy::balanced && preferred(s) != current) {
      current = switch_at(s, current);
    }
  }
  if (current != start) switch_at(lines.size() - 1, current);
  out.value = coeff;
  return out;
}

/// Holonomy of the Z4 Maslov bundle around a loop in real Lag(R^2).
inline HolonomyResult maslov_holonomy(const LagrangianLoop& loop, BranchConvention convention = {}) {
  return transport_holonomy(loop, convention, TransportBundle::sqrt_arg, SwitchPolicy::balanced);
}

/// Any real dimension: the plane transport for n = 1, otherwise
/// i^{+-index mod 4} through the direct-sum reduction to a plane.
inline HolonomyResult maslov_holonomy_general(const LagrangianLoop& loop, BranchConvention convention = {}) {
  if (loop.space().field() != Field::real) throw FieldError("maslov_holonomy_general: complex loops are rejected");
  if (loop.space().n() == 1 && loop.space().form() == FormKind::standard) return maslov_holonomy(loop, convention);
  const long index = maslov_index(loop);
  return HolonomyResult{RootOfUnity<4>(static_cast<int>((convention.sign() * index) % 4)), {}};
}

// ---------------------------------------------------------------------------
// CP^1 = Lag(C^2)

/// Canonical coordinates (q', p') = C (q, p) with q' = mu (i q + p),
/// p' = mu (-i q + p), mu^2 = -i/2, so det C = 1. The slope of span(1, a)
/// in these coordinates is w = (a - i) / (a + i): real lines land on |w| = 1.
inline Matrix rotated_coordinates() {
  const Scalar mu = std::polar(1.0 / std::sqrt(2.0), -std::numbers::pi / 4.0);
  const Scalar i(0.0, 1.0);
  Matrix C(2, 2);
  C << mu * i, mu,
       -mu * i, mu;
  return C;
}

/// The complex lagrangian line whose rotated slope is w.
inline LagrangianFrame line_at(BasePoint w) {
  Matrix v(2, 1);
  v << 1.0, w;
  return LagrangianFrame(rotated_coordinates().inverse() * v, standard_space(1, Field::complex));
}

inline LagrangianFrame in_rotated_coordinates(const LagrangianFrame& L) {
  if (L.n() != 1) throw InvalidArgument("in_rotated_coordinates: needs a line in a plane");
  const LagrangianFrame s = L.in_standard_coordinates();
  return LagrangianFrame(rotated_coordinates() * s.matrix(), standard_space(1, Field::complex));
}

struct Cp1MaslovCover {
  CoverNerve nerve;
  TransitionData transitions;         // eta* in the trivializations dp' (U0), dq' (U1..U3)
  std::vector<BasePoint> equator;     // w = e^{i phi}, phi from 0 to 2 pi, closed
  LagrangianLoop equator_loop;        // the same points as real lines
};

namespace detail {

struct GridKey {
  int radius = 0;  // index into cp1_radii
  int angle = 0;   // degrees index, point at (angle + 0.5) degrees
  auto operator<=>(const GridKey&) const = default;
};

inline constexpr std::array<double, 10> cp1_radii{0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 1.0, 1.25, 1.6, 1.9};
inline constexpr double cp1_south_radius = 0.5;  // U0 = {|w| > 1/2} u {w = inf}
inline constexpr double cp1_north_radius = 2.0;  // U1..U3 inside {|w| < 2}
inline constexpr double cp1_cap_radius = 0.25;   // north cap shared by U1..U3
inline constexpr double cp1_half_width = 80.0;   // sector half-width in degrees

inline BasePoint grid_point(GridKey k) {
  const double phi = (k.angle + 0.5) * std::numbers::pi / 180.0;
  return std::polar(cp1_radii[static_cast<std::size_t>(k.radius)], phi);
}

inline double angular_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

/// Sector centre of northern set k = 1, 2, 3 (counterclockwise from above).
inline double sector_center(std::size_t k) { return 120.0 * static_cast<double>(k - 1); }

inline bool cp1_contains(std::size_t set, GridKey key) {
  const double r = cp1_radii[static_cast<std::size_t>(key.radius)];
  if (set == 0) return r > cp1_south_radius;
  const double deg = key.angle + 0.5;
  return r < cp1_north_radius && (r < cp1_cap_radius || angular_distance(deg, sector_center(set)) < cp1_half_width);
}

/// Angle indices of an arc, counterclockwise from `from` for `count` degrees.
inline std::vector<int> arc(int from, int count) {
  std::vector<int> out;
  for (int d = 0; d < count; ++d) out.push_back(((from + d) % 360 + 360) % 360);
  return out;
}

/// Rows of grid points walked back and forth (serpentine), so consecutive
/// samples are neighbours.
inline std::vector<GridKey> serpentine(const std::vector<std::pair<int, std::vector<int>>>& rows) {
  std::vector<GridKey> path;
  bool forward = true;
  for (const auto& [radius, angles] : rows) {
    if (forward)
      for (int a : angles) path.push_back({radius, a});
    else
      for (auto it = angles.rbegin(); it != angles.rend(); ++it) path.push_back({radius, *it});
    forward = !forward;
  }
  return path;
}

}  // namespace detail

/// Tetrahedral cover of CP^1: U0 a neighbourhood of the southern hemisphere
/// |w| >= 1, U1..U3 overlapping sectors of |w| < 2 that share the north cap,
/// numbered counterclockwise. Faces (123), (032), (013), (021).
inline Cp1MaslovCover build_cp1_maslov_cover(std::size_t equator_samples = 720) {
  using detail::GridKey;
  if (equator_samples < 9) throw InvalidArgument("build_cp1_maslov_cover: need at least 9 equator samples");

  // Pair paths over the polar grid.
  auto sector_arc = [](std::size_t k) {
    return detail::arc(static_cast<int>(detail::sector_center(k) - detail::cp1_half_width), 160);
  };
  auto south_pair = [&](std::size_t k) {
    std::vector<std::pair<int, std::vector<int>>> rows;
    for (int r = 0; r < static_cast<int>(detail::cp1_radii.size()); ++r)
      if (detail::cp1_radii[static_cast<std::size_t>(r)] > detail::cp1_south_radius) rows.push_back({r, sector_arc(k)});
    return detail::serpentine(rows);
  };
  auto north_pair = [&](std::size_t j, std::size_t k) {
    // Wedge where the two sectors overlap: 40 degrees centred between them.
    const double cj = detail::sector_center(j), ck = detail::sector_center(k);
    double mid = std::fmod((cj + ck) / 2.0 + (std::abs(cj - ck) > 180.0 ? 180.0 : 0.0), 360.0);
    const int wedge_from = static_cast<int>(mid) - 20;
    const int mid_index = static_cast<int>(mid);
    std::vector<std::pair<int, std::vector<int>>> rows;
    for (int r = 0; r < static_cast<int>(detail::cp1_radii.size()); ++r) {
      const double rad = detail::cp1_radii[static_cast<std::size_t>(r)];
      if (rad < detail::cp1_cap_radius) rows.push_back({r, detail::arc(mid_index, 360)});
      else if (rad < detail::cp1_north_radius) rows.push_back({r, detail::arc(wedge_from, 40)});
    }
    return detail::serpentine(rows);
  };

  const std::vector<std::string> ids{"U0", "U1", "U2", "U3"};
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}, {3, 1}};
  std::vector<std::vector<GridKey>> paths;
  std::vector<OverlapComponent> overlaps;
  std::vector<std::map<GridKey, std::size_t>> where(pairs.size());
  for (std::size_t o = 0; o < pairs.size(); ++o) {
    const auto [i, j] = pairs[o];
    paths.push_back(i == 0 ? south_pair(j) : north_pair(i, j));
    OverlapComponent ov{i, j, 0, {}};
    for (std::size_t s = 0; s < paths[o].size(); ++s) {
      const GridKey key = paths[o][s];
      if (!detail::cp1_contains(i, key) || !detail::cp1_contains(j, key))
        throw StructuralError("build_cp1_maslov_cover: path point outside its overlap");
      ov.samples.push_back(detail::grid_point(key));
      where[o][key] = s;
    }
    overlaps.push_back(std::move(ov));
  }

  auto locate = [&](std::size_t a, std::size_t b, GridKey key) -> std::optional<SampleRef> {
    for (std::size_t o = 0; o < pairs.size(); ++o) {
      const bool fwd = pairs[o].first == a && pairs[o].second == b;
      const bool bwd = pairs[o].first == b && pairs[o].second == a;
      if (!fwd && !bwd) continue;
      const auto it = where[o].find(key);
      if (it == where[o].end()) return std::nullopt;
      return SampleRef{o, it->second, bwd};
    }
    return std::nullopt;
  };

  using Ids = std::array<std::size_t, 3>;
  const std::vector<Ids> faces_ids{{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
  std::vector<TripleComponent> triples;
  std::vector<OrientedFace> faces;
  for (const Ids& v : faces_ids) {
    TripleComponent tc{v, 0, {}};
    for (int r = 0; r < static_cast<int>(detail::cp1_radii.size()); ++r)
      for (int a = 0; a < 360; ++a) {
        const GridKey key{r, a};
        const auto r01 = locate(v[0], v[1], key);
        const auto r12 = locate(v[1], v[2], key);
        const auto r20 = locate(v[2], v[0], key);
        if (r01 && r12 && r20) tc.samples.push_back({detail::grid_point(key), {*r01, *r12, *r20}});
      }
    triples.push_back(std::move(tc));
    faces.push_back({v, 1, 0});
  }
  CoverNerve nerve(ids, std::move(overlaps), std::move(triples), std::move(faces));

  // Transition functions of eta* from genuine frames: e0 = dp', ek = dq',
  // r_ij = e_j / e_i on the line, so r_0k = q'/p' is the inverse slope and
  // r_jk = 1 between northern sets.
  TransitionData t{Field::complex, {}};
  for (const auto& ov : nerve.overlaps()) {
    std::vector<Scalar> vals;
    vals.reserve(ov.samples.size());
    for (const BasePoint w : ov.samples) {
      const SlopeCoordinates c = slope_coords(in_rotated_coordinates(line_at(w)));
      if (ov.i == 0) {
        if (!c.inverse_slope.valid) throw StructuralError("build_cp1_maslov_cover: dp' vanishes inside U0");
        vals.push_back(c.inverse_slope.value);
      } else {
        if (!c.slope.valid) throw StructuralError("build_cp1_maslov_cover: dq' vanishes inside the north");
        vals.emplace_back(1.0, 0.0);
      }
    }
    t.values.push_back(std::move(vals));
  }

  // Equator: the real line at angle phi/2 - pi/2 has rotated slope e^{i phi}.
  std::vector<BasePoint> equator;
  std::vector<LagrangianFrame> lines;
  const SymplecticSpace plane = standard_space(1, Field::real);
  for (std::size_t m = 0; m < equator_samples; ++m) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(equator_samples - 1);
    const double alpha = 0.5 * phi - 0.5 * std::numbers::pi;
    Matrix Z(2, 1);
    Z << std::cos(alpha), std::sin(alpha);
    lines.emplace_back(Z, plane);
    equator.push_back(m + 1 == equator_samples ? equator.front() : std::polar(1.0, phi));
  }
  return Cp1MaslovCover{std::move(nerve), std::move(t), std::move(equator), LagrangianLoop(std::move(lines), true)};
}

/// Bundle eta*^{(x) degree} on the same cover.
inline TransitionData synthetic_degree_bundle(const Cp1MaslovCover& cover, int degree) {
  return power(cover.transitions, degree);
}

struct HemisphereObjects {
  GerbeObject plus;   // canonical object of U1..U3 (iota = dq'^d)
  GerbeObject minus;  // canonical object of U0 (iota = dp'^d)
};

/// Hemisphere objects of sqrt(eta*^d) along the equator, read off the real
/// equator lines, written in the reference trivialization dq' + 0.3 dp'
/// (which does not vanish on the equator).
inline HemisphereObjects hemisphere_objects(const Cp1MaslovCover& cover, int degree = 1) {
  HemisphereObjects out{{"U+", {}}, {"U-", {}}};
  for (const auto& f : cover.equator_loop.samples()) {
    const Matrix complex_frame = f.matrix();  // already complex-typed with zero imaginary part
    const LagrangianFrame L(complex_frame, standard_space(1, Field::complex));
    const Matrix v = in_rotated_coordinates(L).matrix();
    const Scalar dq = v(0, 0), dp = v(1, 0);
    const Scalar ref = dq + 0.3 * dp;
    out.plus.square.push_back(std::pow(dq / ref, degree));
    out.minus.square.push_back(std::pow(dp / ref, degree));
  }
  return out;
}

struct FaceEntry {
  std::array<std::size_t, 3> ids{};
  long chern = 0;
  RootOfUnity<2> giraud;
};

struct GerbeClassReport {
  int degree = 1;
  std::size_t set_count = 0, overlap_samples = 0, triple_samples = 0;
  TransitionCocycleReport transition_check;
  std::vector<FaceEntry> faces;
  long chern_evaluation = 0;
  RootOfUnity<2> giraud_evaluation;
  EquatorTheoremReport theorem;
  HolonomyResult equator_maslov;      // Z4 holonomy of the real equator loop
  RootOfUnity<4> equator_maslov_power;  // its 2*degree-th power
  bool pointwise_mod2 = false;          // gamma_ijk == (-1)^{c_ijk} on every face
  bool structure_group_relation = false;
  bool consistent = false;
  Scalar value{1.0, 0.0};
};

/// Runs the CP^1 pipeline for eta*^d through the Cech/Giraud route and the
/// equator route and cross-checks them.
inline GerbeClassReport maslov_gerbe_class(int degree = 1, std::size_t equator_samples = 720,
                                           BranchConvention convention = {}) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(equator_samples);
  const TransitionData t = synthetic_degree_bundle(cover, degree);

  GerbeClassReport rep;
  rep.degree = degree;
  rep.set_count = cover.nerve.set_count();
  for (const auto& ov : cover.nerve.overlaps()) rep.overlap_samples += ov.samples.size();
  for (const auto& tr : cover.nerve.triples()) rep.triple_samples += tr.samples.size();
  rep.transition_check = check_transition_cocycle(t, cover.nerve);

  const LogLift lift = lift_logs(t, cover.nerve);
  const CechCocycle<IntegerGroup> c = chern_cocycle(lift, cover.nerve);
  const GerbeIsomorphisms isos = sqrt_gerbe_isos(lift, cover.nerve);
  const CechCocycle<Z2> gamma = giraud_cocycle(isos, cover.nerve);
  rep.chern_evaluation = evaluate_fundamental(c, cover.nerve);
  rep.giraud_evaluation = evaluate_fundamental(gamma, cover.nerve);

  rep.pointwise_mod2 = true;
  for (const auto& f : cover.nerve.faces()) {
    FaceEntry e{f.ids, c.at(cover.nerve, f.ids), gamma.at(cover.nerve, f.ids)};
    rep.pointwise_mod2 = rep.pointwise_mod2 && e.giraud == RootOfUnity<2>(static_cast<int>(e.chern % 2));
    rep.faces.push_back(e);
  }

  const HemisphereObjects obj = hemisphere_objects(cover, degree);
  rep.theorem = verify_equator_theorem(cover.nerve, isos, obj.plus, obj.minus, cover.equator);

  rep.equator_maslov = maslov_holonomy(cover.equator_loop, convention);
  rep.equator_maslov_power = rep.equator_maslov.value.pow(2L * degree);
  rep.structure_group_relation = rep.equator_maslov_power.to_complex() == rep.theorem.equator_holonomy;

  rep.value = rep.giraud_evaluation.to_complex();
  rep.consistent = rep.transition_check.pass && rep.theorem.equal && rep.pointwise_mod2 &&
                   rep.giraud_evaluation == RootOfUnity<2>(static_cast<int>(rep.chern_evaluation % 2)) &&
                   rep.structure_group_relation;
  return rep;
}

}  // namespace maslov
