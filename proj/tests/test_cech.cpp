#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "maslov/bundles.hpp"
#include "maslov/cech.hpp"
#include "maslov/sampling.hpp"
#include "oracles.hpp"

using namespace maslov;

namespace {

/// Three sets meeting in one triple point; each pair overlap is a short path
/// whose last sample is that point.
CoverNerve triangle_nerve(std::size_t samples = 5) {
  const BasePoint hub(0.0, 0.0);
  std::vector<OverlapComponent> overlaps;
  const std::array<std::pair<std::size_t, std::size_t>, 3> pairs{{{0, 1}, {1, 2}, {2, 0}}};
  for (std::size_t e = 0; e < 3; ++e) {
    OverlapComponent o{pairs[e].first, pairs[e].second, 0, {}};
    for (std::size_t s = 0; s < samples; ++s)
      o.samples.push_back(std::polar(1.0 - static_cast<double>(s) / static_cast<double>(samples - 1), 2.0 * e));
    overlaps.push_back(o);
  }
  TripleComponent t{{0, 1, 2}, 0, {}};
  t.samples.push_back({hub, {SampleRef{0, samples - 1, false}, SampleRef{1, samples - 1, false},
                             SampleRef{2, samples - 1, false}}});
  return CoverNerve({"A", "B", "C"}, overlaps, {t}, {});
}

LogLift constant_lift(const CoverNerve& nerve, std::array<Scalar, 3> theta) {
  LogLift lift;
  for (std::size_t o = 0; o < 3; ++o) lift.values.emplace_back(nerve.overlaps()[o].samples.size(), theta[o]);
  return lift;
}

TransitionData constant_data(const CoverNerve& nerve, Scalar v) {
  TransitionData t;
  for (const auto& o : nerve.overlaps()) t.values.emplace_back(o.samples.size(), v);
  return t;
}

long evaluation(const TransitionData& t, const CoverNerve& nerve) {
  return evaluate_fundamental(chern_cocycle(lift_logs(t, nerve), nerve), nerve);
}

}  // namespace

TEST(CoverNerve, RejectsUnclosedFaces) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(90);
  auto faces = cover.nerve.faces();
  faces.pop_back();
  EXPECT_THROW(CoverNerve(cover.nerve.set_ids(), cover.nerve.overlaps(), cover.nerve.triples(), faces),
               StructuralError);
}

TEST(CoverNerve, RejectsMisplacedTriplePoints) {
  CoverNerve good = triangle_nerve();
  auto triples = good.triples();
  triples[0].samples[0].point = BasePoint(0.5, 0.5);
  EXPECT_THROW(CoverNerve(good.set_ids(), good.overlaps(), triples, {}), StructuralError);
}

TEST(TransitionCocycle, TrivialBundle) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(90);
  const auto rep = check_transition_cocycle(trivial_transitions(cover.nerve), cover.nerve);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.max_deviation, 0.0);
}

TEST(TransitionCocycle, Cp1CoverPasses) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover();
  const auto rep = check_transition_cocycle(cover.transitions, cover.nerve);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.max_deviation, 1e-9);
}

TEST(TransitionCocycle, LocatesAPerturbedValue) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover();
  TransitionData t = cover.transitions;
  const std::size_t k = 2;
  const SampleRef ref = cover.nerve.triples()[k].samples[3].refs[1];
  t.values[ref.overlap][ref.sample] *= 1.001;
  const auto rep = check_transition_cocycle(t, cover.nerve);
  EXPECT_FALSE(rep.pass);
  // the value may be read through a reversed ref, as 1/1.001
  EXPECT_NEAR(rep.max_deviation, 1e-3, 2e-6);
  EXPECT_EQ(rep.worst_triple, k);
  EXPECT_EQ(rep.worst_sample, 3u);
  EXPECT_NE(rep.worst_key.find(cover.nerve.triple_name(k)), std::string::npos);
}

TEST(TransitionCocycle, MissingSamplesAreListed) {
  const CoverNerve nerve = triangle_nerve();
  TransitionData t = constant_data(nerve, 1.0);
  t.values[1].pop_back();
  try {
    check_transition_cocycle(t, nerve);
    FAIL() << "expected a structural error";
  } catch (const StructuralError& e) {
    EXPECT_NE(std::string(e.what()).find(nerve.overlap_name(1)), std::string::npos);
  }
}

TEST(LiftLogs, OneGivesZero) {
  const CoverNerve nerve = triangle_nerve();
  const LogLift lift = lift_logs(constant_data(nerve, 1.0), nerve);
  for (const auto& path : lift.values)
    for (Scalar th : path) EXPECT_EQ(th, Scalar(0.0));
}

TEST(LiftLogs, MinusOneGivesHalf) {
  const CoverNerve nerve = triangle_nerve();
  const LogLift lift = lift_logs(constant_data(nerve, -1.0), nerve);
  for (const auto& path : lift.values)
    for (Scalar th : path) EXPECT_NEAR(std::abs(th - 0.5), 0.0, 1e-15);
}

TEST(LiftLogs, FullTurnAddsOne) {
  const CoverNerve nerve = triangle_nerve(33);
  TransitionData t = constant_data(nerve, 1.0);
  for (std::size_t s = 0; s < 33; ++s) t.values[0][s] = std::polar(1.0, 2.0 * std::numbers::pi * s / 32.0);
  const LogLift lift = lift_logs(t, nerve);
  EXPECT_NEAR(std::abs(lift.values[0].back() - lift.values[0].front() - 1.0), 0.0, 1e-12);
}

TEST(LiftLogs, MagnitudeGoesToTheImaginaryPart) {
  const CoverNerve nerve = triangle_nerve();
  const LogLift lift = lift_logs(constant_data(nerve, std::exp(1.0)), nerve);
  const Scalar th = lift.values[0][0];
  EXPECT_NEAR(std::abs(std::exp(Scalar(0, 2 * std::numbers::pi) * th) - std::exp(1.0)), 0.0, 1e-12);
}

TEST(LiftLogs, AliasingNamesTheComponent) {
  const CoverNerve nerve = triangle_nerve(4);
  TransitionData t = constant_data(nerve, 1.0);
  t.values[2] = {1.0, Scalar(0, 1), -1.0, Scalar(0, 1)};
  t.values[2][2] = std::polar(1.0, 3.0);
  t.values[2][3] = std::polar(1.0, 3.0 + std::numbers::pi);
  try {
    lift_logs(t, nerve);
    FAIL() << "expected an aliasing error";
  } catch (const AliasingError& e) {
    EXPECT_NE(std::string(e.what()).find(nerve.overlap_name(2)), std::string::npos);
  }
}

TEST(ChernCocycle, QuarterHalfQuarter) {
  const CoverNerve nerve = triangle_nerve();
  const auto c = chern_cocycle(constant_lift(nerve, {0.25, 0.5, 0.25}), nerve);
  EXPECT_EQ(c.values()[0], 1);
}

TEST(ChernCocycle, TrivialLift) {
  const CoverNerve nerve = triangle_nerve();
  EXPECT_EQ(chern_cocycle(constant_lift(nerve, {0.0, 0.0, 0.0}), nerve).values()[0], 0);
}

TEST(ChernCocycle, NonIntegerSumThrows) {
  const CoverNerve nerve = triangle_nerve();
  EXPECT_THROW(chern_cocycle(constant_lift(nerve, {0.25, 0.5, 0.3}), nerve), IntegralityError);
}

TEST(ChernCocycle, Cp1EvaluationMatchesClutchingDegree) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover();
  EXPECT_EQ(evaluation(cover.transitions, cover.nerve), 1);
  EXPECT_EQ(evaluation(cover.transitions, cover.nerve), oracle::clutching_degree());
}

TEST(ChernCocycle, AntisymmetricUnderPermutation) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover();
  const auto c = chern_cocycle(lift_logs(cover.transitions, cover.nerve), cover.nerve);
  for (const auto& f : cover.nerve.faces()) {
    const auto& [i, j, k] = f.ids;
    EXPECT_EQ(c.at(cover.nerve, {i, j, k}), c.at(cover.nerve, {j, k, i}));
    EXPECT_EQ(c.at(cover.nerve, {i, j, k}), -c.at(cover.nerve, {j, i, k}));
    EXPECT_EQ(c.at(cover.nerve, {i, j, k}), -c.at(cover.nerve, {i, k, j}));
  }
}

TEST(ChernCocycle, BranchShiftsKeepTheClass) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover();
  const LogLift lift = lift_logs(cover.transitions, cover.nerve);
  sampling::Rng rng(1);
  std::uniform_int_distribution<long> off(-4, 4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<long> offsets(lift.values.size());
    for (auto& x : offsets) x = off(rng);
    EXPECT_EQ(evaluate_fundamental(chern_cocycle(shift_branches(lift, offsets), cover.nerve), cover.nerve), 1);
  }
}

TEST(EvaluateFundamental, NeedsFaces) {
  const CoverNerve nerve = triangle_nerve();
  const auto c = chern_cocycle(constant_lift(nerve, {0.0, 0.0, 0.0}), nerve);
  EXPECT_THROW(evaluate_fundamental(c, nerve), StructuralError);
}

TEST(EvaluateFundamental, IdentityAndFourMinusOnes) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(90);
  const std::size_t n = cover.nerve.triples().size();
  EXPECT_EQ(evaluate_fundamental(CechCocycle<Z2>(std::vector<RootOfUnity<2>>(n)), cover.nerve), RootOfUnity<2>(0));
  EXPECT_EQ(evaluate_fundamental(CechCocycle<Z2>(std::vector<RootOfUnity<2>>(n, RootOfUnity<2>(1))), cover.nerve),
            RootOfUnity<2>(0));
  EXPECT_EQ(evaluate_fundamental(CechCocycle<IntegerGroup>(std::vector<long>(n, 0)), cover.nerve), 0);
}

TEST(Coboundary, OneLeavesDataUnchanged) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(90);
  const auto t = perturb_by_coboundary(cover.transitions, cover.nerve, [](std::size_t, BasePoint) { return Scalar(1.0); });
  EXPECT_EQ(t.values, cover.transitions.values);
}

TEST(Coboundary, ScalingOneSet) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(90);
  const auto t = perturb_by_coboundary(cover.transitions, cover.nerve,
                                       [](std::size_t set, BasePoint) { return Scalar(set == 0 ? 2.0 : 1.0); });
  for (std::size_t o = 0; o < t.values.size(); ++o) {
    const auto& ov = cover.nerve.overlaps()[o];
    const double factor = ov.i == 0 ? 2.0 : (ov.j == 0 ? 0.5 : 1.0);
    for (std::size_t s = 0; s < t.values[o].size(); ++s)
      EXPECT_NEAR(std::abs(t.values[o][s] - factor * cover.transitions.values[o][s]), 0.0, 1e-15);
  }
}

TEST(Coboundary, RandomPerturbationsKeepTheClass) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover();
  sampling::Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto b = sampling::random_coboundary(rng, 4);
    const auto t = perturb_by_coboundary(cover.transitions, cover.nerve, b);
    EXPECT_TRUE(check_transition_cocycle(t, cover.nerve).pass);
    EXPECT_EQ(evaluation(t, cover.nerve), 1) << trial;
  }
}

TEST(Coboundary, VanishingFunctionRejected) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(90);
  EXPECT_THROW(perturb_by_coboundary(cover.transitions, cover.nerve, [](std::size_t, BasePoint) { return Scalar(0.0); }),
               InvalidArgument);
}

TEST(Unitarize, Examples) {
  const CoverNerve nerve = triangle_nerve();
  EXPECT_EQ(unitarize(constant_data(nerve, 3.0)).values[0][0], Scalar(1.0));
  EXPECT_EQ(unitarize(constant_data(nerve, -2.0)).values[0][0], Scalar(-1.0));
}

TEST(Unitarize, KeepsCocycleAndClass) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover();
  sampling::Rng rng(2);
  const auto t = perturb_by_coboundary(cover.transitions, cover.nerve, sampling::random_coboundary(rng, 4));
  const auto u = unitarize(t);
  EXPECT_TRUE(check_transition_cocycle(u, cover.nerve).pass);
  for (const auto& path : u.values)
    for (Scalar z : path) EXPECT_NEAR(std::abs(z), 1.0, 1e-12);
  EXPECT_EQ(evaluation(u, cover.nerve), 1);
}

TEST(Tensor, WithInverseIsTrivial) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(90);
  const auto t = tensor(cover.transitions, inverse(cover.transitions));
  for (const auto& path : t.values)
    for (Scalar z : path) EXPECT_NEAR(std::abs(z - 1.0), 0.0, 1e-14);
}

TEST(Tensor, SquareAndInverseClasses) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover();
  EXPECT_EQ(evaluation(square(cover.transitions), cover.nerve), 2);
  EXPECT_EQ(evaluation(inverse(cover.transitions), cover.nerve), -1);
}

TEST(Tensor, DegreesAdd) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover();
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      EXPECT_EQ(evaluation(tensor(power(cover.transitions, a), power(cover.transitions, b)), cover.nerve), a + b);
}

TEST(Tensor, KeyMismatch) {
  const CoverNerve nerve = triangle_nerve();
  TransitionData a = constant_data(nerve, 1.0), b = constant_data(nerve, 1.0);
  b.values[0].pop_back();
  EXPECT_THROW(tensor(a, b), StructuralError);
}
