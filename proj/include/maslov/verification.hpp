#pragma once

// The verification suite behind `maslov verify`: numbered acceptance checks
// C1..C10 followed by per-module property checks. All randomness derives
// from one seed; each check gets its own stream keyed by its position.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "maslov/bundles.hpp"
#include "maslov/cech.hpp"
#include "maslov/gerbe.hpp"
#include "maslov/grassmannian.hpp"
#include "maslov/json_io.hpp"
#include "maslov/sampling.hpp"
#include "maslov/symplectic.hpp"

namespace maslov::verify {

using Json = nlohmann::json;
using sampling::Rng;

enum class Status { pass, fail, skipped };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    default: return "skipped";
  }
}

struct Report {
  std::string id;
  std::string title;
  Status status = Status::skipped;
  Json values = Json::object();
  Json tolerance = Json::object();
  double runtime = 0.0;  // seconds
  std::string detail;
};

struct Options {
  std::uint64_t seed = 20240917;
  std::size_t samples = 720;
  /// Multiply one transition value by 1.001 before C5 runs.
  bool inject_fault = false;
};

inline Json to_json(const Report& r) {
  Json j{{"id", r.id},           {"title", r.title},        {"status", to_string(r.status)},
         {"values", r.values},   {"tolerance", r.tolerance}, {"runtime_s", r.runtime}};
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

using CheckFn = std::function<void(Report&, Rng&, const Options&)>;

struct Check {
  std::string id;
  std::string title;
  CheckFn run;
};

namespace detail {

inline Json complex_json(Scalar z) { return io::to_json(z); }

inline void require(Report& r, bool ok, const std::string& what) {
  if (!ok) {
    r.status = Status::fail;
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += what;
  }
}

inline LagrangianLoop json_roundtrip(const LagrangianLoop& loop) {
  return io::loop_from_json(Json::parse(io::loop_to_json(loop).dump()));
}

/// exp(a + b cos phi + c sin phi): smooth, nonvanishing and of winding zero
/// along the equator.
struct EquatorGauge {
  Scalar a, b, c;
  Scalar operator()(BasePoint w) const {
    const double phi = std::arg(w);
    return std::exp(a + b * std::cos(phi) + c * std::sin(phi));
  }
};

inline EquatorGauge random_equator_gauge(Rng& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  return {{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
}

inline GerbeObject regauge_object(GerbeObject o, const EquatorGauge& f, const std::vector<BasePoint>& equator) {
  for (std::size_t s = 0; s < o.square.size(); ++s) {
    const Scalar v = f(equator[s]);
    o.square[s] *= v * v;
  }
  return o;
}

/// Midpoints inserted between consecutive plane samples.
inline LagrangianLoop doubled(const LagrangianLoop& loop) {
  std::vector<LagrangianFrame> out;
  const SymplecticSpace sp = loop.space();
  for (std::size_t s = 0; s < loop.size(); ++s) {
    if (s > 0) {
      Matrix a = loop[s - 1].matrix().normalized();
      Matrix b = loop[s].matrix().normalized();
      if ((a.adjoint() * b)(0, 0).real() < 0) b = -b;
      out.emplace_back(Matrix(a + b), sp);
    }
    out.push_back(loop[s]);
  }
  return LagrangianLoop(std::move(out), loop.closed());
}

struct CoverRun {
  long chern = 0;
  RootOfUnity<2> giraud;
};

inline CoverRun classes_of(const TransitionData& t, const CoverNerve& nerve) {
  const LogLift lift = lift_logs(t, nerve);
  return {evaluate_fundamental(chern_cocycle(lift, nerve), nerve),
          evaluate_fundamental(giraud_cocycle(sqrt_gerbe_isos(lift, nerve), nerve), nerve)};
}

inline RootOfUnity<2> parity(long c) { return RootOfUnity<2>(static_cast<int>(((c % 2) + 2) % 2)); }

}  // namespace detail

// ---------------------------------------------------------------------------
// acceptance checks

inline void check_index_generator(Report& r, Rng&, const Options& o) {
  Json ks = Json::array(), idx = Json::array(), times = Json::array();
  double worst = 0.0;
  for (int k = -5; k <= 5; ++k) {
    const LagrangianLoop loop = rotation_line_loop(k, o.samples);
    const auto t0 = std::chrono::steady_clock::now();
    const long v = maslov_index(detail::json_roundtrip(loop));
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    worst = std::max(worst, dt);
    ks.push_back(k);
    idx.push_back(v);
    times.push_back(dt);
    detail::require(r, v == k, "index " + std::to_string(v) + " for k = " + std::to_string(k));
  }
  detail::require(r, worst < 1.0, "a loop took longer than 1 s");
  r.values = {{"k", ks}, {"index", idx}, {"runtime_s", times}, {"samples", o.samples}};
  r.tolerance = {{"index", "exact"}, {"runtime_per_loop_s", 1.0}};
}

inline void check_sp_embedding(Report& r, Rng&, const Options& o) {
  const LagrangianLoop loop = detail::json_roundtrip(sp_graph_loop(o.samples));
  const long idx = maslov_index(loop);
  const HolonomyResult h = maslov_holonomy_general(loop);
  detail::require(r, idx == 2, "index " + std::to_string(idx));
  detail::require(r, h.value == RootOfUnity<4>(2), "holonomy " + to_string(h.value));
  r.values = {{"index", idx}, {"holonomy", to_string(h.value)}};
  r.tolerance = {{"index", "exact"}, {"holonomy", "exact in Z4"}};
}

inline void check_holonomy_law(Report& r, Rng& rng, const Options&) {
  int bad_index = 0, bad_law = 0, bad_square = 0;
  Json hist = Json::object();
  const auto t0 = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 50; ++trial) {
    const auto pl = sampling::random_closed_plane_loop(rng);
    const long idx = maslov_index(pl.loop);
    const RootOfUnity<4> h = maslov_holonomy(pl.loop).value;
    const RootOfUnity<4> a = transport_holonomy(pl.loop, {}, TransportBundle::arg).value;
    if (idx != pl.half_turns) ++bad_index;
    if (!(h == RootOfUnity<4>(static_cast<int>(idx % 4)))) ++bad_law;
    if (!(a == h.pow(2)) || !(a == RootOfUnity<4>(static_cast<int>(2 * (idx % 2))))) ++bad_square;
    hist[std::to_string(idx)] = hist.value(std::to_string(idx), 0) + 1;
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail::require(r, bad_index == 0, std::to_string(bad_index) + " index mismatches against the angle count");
  detail::require(r, bad_law == 0, std::to_string(bad_law) + " loops violate holonomy = i^index");
  detail::require(r, bad_square == 0, std::to_string(bad_square) + " loops violate arg holonomy = square");
  detail::require(r, dt < 5.0, "runtime above 5 s");
  r.values = {{"loops", 50},          {"index_histogram", hist}, {"index_mismatches", bad_index},
              {"law_failures", bad_law}, {"square_failures", bad_square}, {"total_runtime_s", dt}};
  r.tolerance = {{"holonomy", "exact in Z4"}, {"runtime_total_s", 5.0}};
}

inline void check_rotation_holonomy(Report& r, Rng&, const Options& o) {
  const LagrangianLoop loop = rotation_line_loop(1, o.samples);
  const HolonomyResult plus = maslov_holonomy(loop, plus_i_branch());
  const HolonomyResult minus = maslov_holonomy(loop, minus_i_branch());
  detail::require(r, plus.value == RootOfUnity<4>(1), "+i branch gives " + to_string(plus.value));
  detail::require(r, minus.value == RootOfUnity<4>(3), "-i branch gives " + to_string(minus.value));
  r.values = {{"plus_i", to_string(plus.value)},
              {"minus_i", to_string(minus.value)},
              {"jumps_plus_i", io::to_json(plus)["jumps"]}};
  r.tolerance = {{"holonomy", "exact in Z4"}};
}

inline void check_cech_pipeline(Report& r, Rng&, const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Cp1MaslovCover cover = build_cp1_maslov_cover(o.samples);
  TransitionData t = cover.transitions;
  if (o.inject_fault) {
    const SampleRef ref = cover.nerve.triples()[0].samples[0].refs[0];
    t.values[ref.overlap][ref.sample] *= 1.001;
  }
  const TransitionCocycleReport tc = check_transition_cocycle(t, cover.nerve);
  detail::require(r, tc.pass, "transition cocycle deviation " + std::to_string(tc.max_deviation) + " at " + tc.worst_key);
  const LogLift lift = lift_logs(t, cover.nerve);
  double residual = 0.0;
  for (const auto& tr : cover.nerve.triples())
    for (const auto& s : tr.samples) {
      const Scalar sum = lift.at(s.refs[0]) + lift.at(s.refs[1]) + lift.at(s.refs[2]);
      residual = std::max({residual, std::abs(sum.real() - std::round(sum.real())), std::abs(sum.imag())});
    }
  detail::require(r, residual < tolerance::integer_round, "c_ijk off an integer by " + std::to_string(residual));
  long value = 0;
  Json table = Json::object();
  try {
    const CechCocycle<IntegerGroup> c = chern_cocycle(lift, cover.nerve);
    value = evaluate_fundamental(c, cover.nerve);
    for (const auto& f : cover.nerve.faces()) table[io::ids_name(cover.nerve, f.ids)] = c.at(cover.nerve, f.ids);
  } catch (const Error& e) {
    detail::require(r, false, e.what());
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail::require(r, value == 1, "fundamental evaluation " + std::to_string(value));
  detail::require(r, dt < 2.0, "runtime above 2 s");
  r.values = {{"transition_deviation", tc.max_deviation},
              {"worst_key", tc.worst_key},
              {"integrality_residual", residual},
              {"chern_faces", table},
              {"evaluation", value},
              {"runtime_s", dt}};
  r.tolerance = {{"transition_deviation", tolerance::transition_cocycle},
                 {"integrality", tolerance::integer_round},
                 {"runtime_s", 2.0}};
}

inline void check_mod2_reduction(Report& r, Rng&, const Options& o) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(o.samples);
  int mismatches = 0;
  double snap = 0.0;
  Json per_degree = Json::object();
  for (int d = -3; d <= 3; ++d) {
    const LogLift lift = lift_logs(synthetic_degree_bundle(cover, d), cover.nerve);
    const CechCocycle<IntegerGroup> c = chern_cocycle(lift, cover.nerve);
    const GiraudCocycle g = giraud_cocycle_with_residual(sqrt_gerbe_isos(lift, cover.nerve), cover.nerve);
    snap = std::max(snap, g.max_snap_deviation);
    Json faces = Json::array();
    for (std::size_t k = 0; k < c.values().size(); ++k) {
      const bool ok = g.cocycle.values()[k] == detail::parity(c.values()[k]);
      if (!ok) ++mismatches;
      faces.push_back({{"triple", cover.nerve.triple_name(k)},
                       {"c", c.values()[k]},
                       {"gamma", to_string(g.cocycle.values()[k])}});
    }
    per_degree[std::to_string(d)] = faces;
  }
  detail::require(r, mismatches == 0, std::to_string(mismatches) + " faces with gamma != (-1)^c");
  r.values = {{"faces_by_degree", per_degree}, {"mismatches", mismatches}, {"max_snap_deviation", snap}};
  r.tolerance = {{"gamma", "exact after snapping"}, {"snap", tolerance::root_snap}};
}

inline void check_equator_theorem(Report& r, Rng& rng, const Options& o) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(o.samples);
  int failures = 0, regauged = 0;
  double deviation = 0.0;
  Json rows = Json::array();
  for (int d = -3; d <= 3; ++d) {
    const TransitionData t = synthetic_degree_bundle(cover, d);
    const HemisphereObjects obj = hemisphere_objects(cover, d);
    const Scalar expected = d % 2 == 0 ? Scalar(1.0) : Scalar(-1.0);
    const EquatorTheoremReport base =
        verify_equator_theorem(cover.nerve, sqrt_gerbe_isos(lift_logs(t, cover.nerve), cover.nerve), obj.plus,
                               obj.minus, cover.equator);
    deviation = std::max(deviation, base.max_deviation);
    const bool ok = base.equal && base.giraud_evaluation == expected;
    if (!ok) ++failures;
    rows.push_back({{"degree", d},
                    {"giraud", detail::complex_json(base.giraud_evaluation)},
                    {"equator", detail::complex_json(base.equator_holonomy)}});
    for (int trial = 0; trial < 10; ++trial) {
      const auto b = sampling::random_coboundary(rng, cover.nerve.set_count(), 0.4);
      const LogLift lift = lift_logs(perturb_by_coboundary(t, cover.nerve, b), cover.nerve);
      std::vector<bool> flips(cover.nerve.overlaps().size());
      std::bernoulli_distribution coin(0.5);
      for (std::size_t e = 0; e < flips.size(); ++e) flips[e] = coin(rng);
      const GerbeIsomorphisms isos = flip_isomorphisms(sqrt_gerbe_isos(lift, cover.nerve), flips);
      const GerbeObject plus = detail::regauge_object(obj.plus, detail::random_equator_gauge(rng), cover.equator);
      const GerbeObject minus = detail::regauge_object(obj.minus, detail::random_equator_gauge(rng), cover.equator);
      const EquatorTheoremReport rep = verify_equator_theorem(cover.nerve, isos, plus, minus, cover.equator);
      deviation = std::max(deviation, std::abs(rep.giraud_evaluation - rep.equator_holonomy));
      if (!(rep.equal && rep.giraud_evaluation == base.giraud_evaluation)) ++failures;
      ++regauged;
    }
  }
  detail::require(r, failures == 0, std::to_string(failures) + " disagreements");
  r.values = {{"degrees", rows}, {"regauged_runs", regauged}, {"failures", failures}, {"max_deviation", deviation}};
  r.tolerance = {{"equality", "exact after snapping"}, {"snap", tolerance::root_snap}};
}

inline void check_gerbe_class(Report& r, Rng&, const Options& o) {
  Json rows = Json::array();
  for (int d : {1, 2, -2, 3}) {
    const GerbeClassReport rep = maslov_gerbe_class(d, o.samples);
    const Scalar expected = d % 2 == 0 ? Scalar(1.0) : Scalar(-1.0);
    detail::require(r, rep.consistent, "degree " + std::to_string(d) + " routes inconsistent");
    detail::require(r, rep.value == expected, "degree " + std::to_string(d) + " value off");
    detail::require(r, rep.chern_evaluation == d, "degree " + std::to_string(d) + " chern evaluation off");
    rows.push_back({{"degree", d},
                    {"chern", rep.chern_evaluation},
                    {"value", detail::complex_json(rep.value)},
                    {"consistent", rep.consistent}});
  }
  const Cp1MaslovCover cover = build_cp1_maslov_cover(o.samples);
  const auto sq = detail::classes_of(square(cover.transitions), cover.nerve);
  detail::require(r, sq.giraud == RootOfUnity<2>(0), "square bundle has a nontrivial gerbe");
  r.values = {{"runs", rows}, {"square_bundle_giraud", to_string(sq.giraud)}, {"square_bundle_chern", sq.chern}};
  r.tolerance = {{"value", "exact"}};
}

inline void check_divisor(Report& r, Rng& rng, const Options&) {
  Json rows = Json::array();
  int mis = 0, dim_mismatch = 0;
  double worst_zero = 0.0, best_nonzero = INFINITY;
  for (int n = 1; n <= 3; ++n) {
    std::uniform_int_distribution<int> kd(0, n);
    int zeros = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const Field field = trial % 2 == 0 ? Field::real : Field::complex;
      const int k = kd(rng);
      const auto pair = sampling::random_pair_with_intersection(rng, n, k, field);
      const SectionValue sv = maslov_section(pair.L, pair.L0);
      const int defect = transversality_defect(pair.L, pair.L0);
      const double rel = std::abs(sv.value) / sv.scale;
      const bool zero = std::abs(sv.value) < 1e-9 * sv.scale;
      if (zero != (defect > 0)) ++mis;
      if (defect != k) ++dim_mismatch;
      if (zero) ++zeros;
      if (defect > 0) worst_zero = std::max(worst_zero, rel);
      else best_nonzero = std::min(best_nonzero, rel);
    }
    rows.push_back({{"n", n}, {"frames", 200}, {"zeros", zeros}});
  }
  detail::require(r, mis == 0, std::to_string(mis) + " misclassifications");
  detail::require(r, dim_mismatch == 0, std::to_string(dim_mismatch) + " intersection dimensions off the construction");
  r.values = {{"by_n", rows},
              {"misclassifications", mis},
              {"dimension_mismatches", dim_mismatch},
              {"max_relative_value_on_cycle", worst_zero},
              {"min_relative_value_off_cycle", best_nonzero}};
  r.tolerance = {{"zero", "|value| < 1e-9 * scale"}, {"intersection_sine", tolerance::intersection}};
}

inline void check_class_invariance(Report& r, Rng& rng, const Options& o) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(o.samples);
  const auto base = detail::classes_of(cover.transitions, cover.nerve);
  int changed = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto b = sampling::random_coboundary(rng, cover.nerve.set_count());
    const TransitionData t = perturb_by_coboundary(cover.transitions, cover.nerve, b);
    const auto v = detail::classes_of(t, cover.nerve);
    if (v.chern != base.chern || !(v.giraud == base.giraud)) ++changed;
    if (trial % 10 == 0) {
      const auto u = detail::classes_of(unitarize(t), cover.nerve);
      if (u.chern != base.chern || !(u.giraud == base.giraud)) ++changed;
    }
  }
  const auto u = detail::classes_of(unitarize(cover.transitions), cover.nerve);
  detail::require(r, changed == 0, std::to_string(changed) + " perturbations changed a class");
  detail::require(r, u.chern == base.chern && u.giraud == base.giraud, "unitarize changed a class");
  r.values = {{"chern", base.chern},
              {"giraud", to_string(base.giraud)},
              {"perturbations", 50},
              {"changed", changed},
              {"unitarized_chern", u.chern},
              {"unitarized_giraud", to_string(u.giraud)}};
  r.tolerance = {{"classes", "exact"}};
}

// ---------------------------------------------------------------------------
// module properties

inline void check_loops_lagrangian(Report& r, Rng& rng, const Options& o) {
  std::size_t checked = 0, bad = 0;
  auto scan = [&](const LagrangianLoop& loop) {
    for (const auto& f : loop.samples()) {
      ++checked;
      if (!is_lagrangian(f.matrix(), f.space()).lagrangian) ++bad;
    }
  };
  for (int k = -3; k <= 3; ++k) scan(rotation_line_loop(k, o.samples));
  scan(sp_graph_loop(o.samples));
  for (int n = 1; n <= 3; ++n) scan(direct_sum_loop(rotation_line_loop(1, 64), sampling::random_real_lagrangian(rng, n)));
  detail::require(r, bad == 0, std::to_string(bad) + " samples fail is_lagrangian");
  r.values = {{"samples", checked}, {"failures", bad}};
  r.tolerance = {{"isotropy", tolerance::isotropy}, {"rank", tolerance::rank}};
}

inline void check_rotation_cancel(Report& r, Rng&, const Options& o) {
  Json idx = Json::array();
  for (int k = 1; k <= 5; ++k) {
    const long v = maslov_index(concatenate(rotation_line_loop(k, o.samples), rotation_line_loop(-k, o.samples)));
    idx.push_back(v);
    detail::require(r, v == 0, "k = " + std::to_string(k) + " gives " + std::to_string(v));
  }
  r.values = {{"k", {1, 2, 3, 4, 5}}, {"index", idx}};
  r.tolerance = {{"index", "exact"}};
}

inline void check_direct_sum_index(Report& r, Rng& rng, const Options&) {
  int bad = 0;
  std::uniform_int_distribution<int> nd(1, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pl = sampling::random_closed_plane_loop(rng);
    const auto fixed = sampling::random_real_lagrangian(rng, nd(rng));
    if (maslov_index(direct_sum_loop(pl.loop, fixed)) != maslov_index(pl.loop)) ++bad;
  }
  detail::require(r, bad == 0, std::to_string(bad) + " sums change the index");
  r.values = {{"trials", 20}, {"failures", bad}};
  r.tolerance = {{"index", "exact"}};
}

inline void check_chart_consistency(Report& r, Rng& rng, const Options&) {
  double worst = 0.0;
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Field field = trial % 2 == 0 ? Field::real : Field::complex;
    Matrix Z(2, 1);
    Z << sampling::gaussian(rng, field), sampling::gaussian(rng, field);
    const SlopeCoordinates c = slope_coords(LagrangianFrame(Z, standard_space(1, field)));
    if (!c.slope.valid || !c.inverse_slope.valid) continue;
    worst = std::max(worst, std::abs(c.inverse_slope.value * c.slope.value - 1.0));
  }
  detail::require(r, worst < 1e-12, "relative error " + std::to_string(worst));
  r.values = {{"lines", 500}, {"max_relative_error", worst}};
  r.tolerance = {{"relative_error", 1e-12}};
}

inline void check_index_invariance(Report& r, Rng& rng, const Options&) {
  int bad = 0;
  std::uniform_int_distribution<std::size_t> shift(0, 1000);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = sampling::random_closed_plane_loop(rng);
    const auto b = sampling::random_closed_plane_loop(rng);
    const long ia = maslov_index(a.loop);
    const LagrangianLoop g = regauged(a.loop, [&](std::size_t) { return sampling::random_gauge(rng, 1, Field::real); });
    if (maslov_index(g) != ia) ++bad;
    if (maslov_index(detail::doubled(a.loop)) != ia) ++bad;
    if (maslov_index(cyclically_shifted(a.loop, shift(rng))) != ia) ++bad;
    if (maslov_index(reversed(a.loop)) != -ia) ++bad;
    if (maslov_index(concatenate(a.loop, a.loop)) != 2 * ia) ++bad;
    const long ib = maslov_index(b.loop);
    const auto sum_loop = direct_sum_loop(b.loop, sampling::random_real_lagrangian(rng, 2));
    if (maslov_index(regauged(sum_loop, [&](std::size_t) { return sampling::random_gauge(rng, 3, Field::real); })) != ib)
      ++bad;
  }
  detail::require(r, bad == 0, std::to_string(bad) + " invariance failures");
  r.values = {{"trials", 20}, {"failures", bad}};
  r.tolerance = {{"index", "exact"}};
}

inline void check_degree_additivity(Report& r, Rng& rng, const Options& o) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(o.samples);
  int bad = 0;
  for (int d1 = -3; d1 <= 3; ++d1)
    for (int d2 = -3; d2 <= 3; ++d2) {
      const TransitionData t = tensor(synthetic_degree_bundle(cover, d1), synthetic_degree_bundle(cover, d2));
      if (detail::classes_of(t, cover.nerve).chern != d1 + d2) ++bad;
    }
  const auto inv = detail::classes_of(inverse(cover.transitions), cover.nerve);
  const auto sq = detail::classes_of(square(cover.transitions), cover.nerve);
  if (inv.chern != -1 || sq.chern != 2) ++bad;
  std::uniform_int_distribution<long> off(-3, 3);
  const LogLift lift = lift_logs(cover.transitions, cover.nerve);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<long> offsets(cover.nerve.overlaps().size());
    for (auto& x : offsets) x = off(rng);
    if (evaluate_fundamental(chern_cocycle(shift_branches(lift, offsets), cover.nerve), cover.nerve) != 1) ++bad;
  }
  detail::require(r, bad == 0, std::to_string(bad) + " failures");
  r.values = {{"pairs", 49}, {"branch_shifts", 20}, {"inverse", inv.chern}, {"square", sq.chern}, {"failures", bad}};
  r.tolerance = {{"evaluation", "exact"}};
}

inline void check_antisymmetry(Report& r, Rng&, const Options& o) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(o.samples);
  const LogLift lift = lift_logs(cover.transitions, cover.nerve);
  const CechCocycle<IntegerGroup> c = chern_cocycle(lift, cover.nerve);
  const CechCocycle<Z2> g = giraud_cocycle(sqrt_gerbe_isos(lift, cover.nerve), cover.nerve);
  int bad = 0;
  for (const auto& tr : cover.nerve.triples()) {
    std::array<std::size_t, 3> p = tr.ids;
    std::sort(p.begin(), p.end());
    const long c0 = c.at(cover.nerve, tr.ids);
    do {
      const int s = *CoverNerve::permutation_sign(tr.ids, p);
      if (c.at(cover.nerve, p) != s * c0) ++bad;
      if (!(g.at(cover.nerve, p) == g.at(cover.nerve, tr.ids))) ++bad;
    } while (std::next_permutation(p.begin(), p.end()));
  }
  detail::require(r, bad == 0, std::to_string(bad) + " permutation failures");
  r.values = {{"triples", cover.nerve.triples().size()}, {"failures", bad}};
  r.tolerance = {{"values", "exact"}};
}

inline void check_squares_trivial(Report& r, Rng& rng, const Options& o) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(o.samples);
  int bad = 0;
  for (int d = -3; d <= 3; ++d) {
    const auto b = sampling::random_coboundary(rng, cover.nerve.set_count());
    const TransitionData t = perturb_by_coboundary(synthetic_degree_bundle(cover, d), cover.nerve, b);
    if (!(detail::classes_of(square(t), cover.nerve).giraud == RootOfUnity<2>(0))) ++bad;
    const auto v = detail::classes_of(t, cover.nerve);
    if (!(v.giraud == detail::parity(v.chern))) ++bad;
  }
  detail::require(r, bad == 0, std::to_string(bad) + " failures");
  r.values = {{"degrees", 7}, {"failures", bad}};
  r.tolerance = {{"giraud", "exact"}};
}

inline void check_convention_flip(Report& r, Rng& rng, const Options& o) {
  int bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto pl = sampling::random_closed_plane_loop(rng);
    if (!(maslov_holonomy(pl.loop, minus_i_branch()).value == maslov_holonomy(pl.loop, plus_i_branch()).value.inverse()))
      ++bad;
  }
  const GerbeClassReport a = maslov_gerbe_class(1, o.samples, plus_i_branch());
  const GerbeClassReport b = maslov_gerbe_class(1, o.samples, minus_i_branch());
  detail::require(r, bad == 0, std::to_string(bad) + " loops not conjugated");
  detail::require(r, a.value == b.value && a.consistent && b.consistent, "gerbe value depends on the branch");
  r.values = {{"loops", 50}, {"failures", bad}, {"gerbe_plus_i", detail::complex_json(a.value)},
              {"gerbe_minus_i", detail::complex_json(b.value)}};
  r.tolerance = {{"holonomy", "exact in Z4"}};
}

inline void check_switch_independence(Report& r, Rng& rng, const Options&) {
  int bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto pl = sampling::random_closed_plane_loop(rng);
    const auto shifted = cyclically_shifted(pl.loop, static_cast<std::size_t>(trial * 7));
    const auto a = transport_holonomy(pl.loop, {}, TransportBundle::sqrt_arg, SwitchPolicy::balanced).value;
    const auto b = transport_holonomy(pl.loop, {}, TransportBundle::sqrt_arg, SwitchPolicy::lazy).value;
    const auto c = transport_holonomy(shifted, {}, TransportBundle::sqrt_arg, SwitchPolicy::lazy).value;
    if (!(a == b) || !(a == c)) ++bad;
  }
  detail::require(r, bad == 0, std::to_string(bad) + " loops depend on the switch points");
  r.values = {{"loops", 50}, {"failures", bad}};
  r.tolerance = {{"holonomy", "exact in Z4"}};
}

inline void check_fault_injection(Report& r, Rng&, const Options& o) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(o.samples);
  // Perturb the value at a triple sample so the fault is visible.
  const SampleRef ref = cover.nerve.triples()[0].samples[0].refs[0];
  TransitionData t = cover.transitions;
  t.values[ref.overlap][ref.sample] *= 1.001;
  const TransitionCocycleReport rep = check_transition_cocycle(t, cover.nerve);
  const std::string expected = cover.nerve.triple_name(0);
  detail::require(r, !rep.pass, "perturbed data pass the cocycle check");
  detail::require(r, rep.worst_key.rfind(expected, 0) == 0, "fault located at " + rep.worst_key);
  r.values = {{"perturbed_overlap", cover.nerve.overlap_name(ref.overlap)},
              {"pass", rep.pass},
              {"max_deviation", rep.max_deviation},
              {"worst_key", rep.worst_key}};
  r.tolerance = {{"transition_deviation", tolerance::transition_cocycle}};
}

inline std::vector<Check> all_checks() {
  return {
      {"C1", "index of rotation loops is k", check_index_generator},
      {"C2", "graph loop of Sp(V) has index 2", check_sp_embedding},
      {"C3", "holonomy is i^index and its square is the arg holonomy", check_holonomy_law},
      {"C4", "rotation loop holonomy under both branches", check_rotation_holonomy},
      {"C5", "Cech pipeline on CP1", check_cech_pipeline},
      {"C6", "gamma = (-1)^c on every face", check_mod2_reduction},
      {"C7", "Giraud evaluation equals equator holonomy", check_equator_theorem},
      {"C8", "Maslov gerbe class and square bundles", check_gerbe_class},
      {"C9", "section vanishes exactly on the Maslov cycle", check_divisor},
      {"C10", "classes invariant under coboundaries and unitarization", check_class_invariance},
      {"symplectic.loops_lagrangian", "generated loop samples are lagrangian", check_loops_lagrangian},
      {"symplectic.rotation_cancel", "k loop followed by -k loop has index 0", check_rotation_cancel},
      {"symplectic.direct_sum_index", "direct sums keep the planar index", check_direct_sum_index},
      {"grassmannian.chart_consistency", "inverse slope is 1/slope", check_chart_consistency},
      {"grassmannian.index_invariance", "index under gauge, resampling, shifts, reversal, concatenation",
       check_index_invariance},
      {"cech.degree_additivity", "evaluations add under tensor and ignore branch shifts", check_degree_additivity},
      {"cech.antisymmetry", "cocycles are antisymmetric", check_antisymmetry},
      {"gerbe.squares_trivial", "square bundles carry trivial gerbes", check_squares_trivial},
      {"bundles.convention_flip", "the -i branch conjugates holonomy", check_convention_flip},
      {"bundles.switch_independence", "holonomy ignores where charts switch", check_switch_independence},
      {"cli.fault_injection", "a perturbed transition value is located", check_fault_injection},
  };
}

inline Report run_check(const Check& c, std::size_t position, const Options& o) {
  Report r{c.id, c.title, Status::pass, Json::object(), Json::object(), 0.0, {}};
  std::seed_seq seq{static_cast<std::uint32_t>(o.seed), static_cast<std::uint32_t>(o.seed >> 32),
                    static_cast<std::uint32_t>(position)};
  Rng rng(seq);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.run(r, rng, o);
  } catch (const std::exception& e) {
    r.status = Status::fail;
    r.detail = std::string("exception: ") + e.what();
  }
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Runs the checks whose id starts with `prefix` (all when empty), in
/// suite order.
inline std::vector<Report> run_suite(const Options& o, const std::string& prefix = "") {
  const auto checks = all_checks();
  std::vector<Report> out;
  for (std::size_t i = 0; i < checks.size(); ++i)
    if (prefix.empty() || checks[i].id.rfind(prefix, 0) == 0) out.push_back(run_check(checks[i], i, o));
  return out;
}

}  // namespace maslov::verify
