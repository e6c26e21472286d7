#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "maslov/bundles.hpp"
#include "maslov/sampling.hpp"
#include "oracles.hpp"

using namespace maslov;

namespace {

RootOfUnity<4> i_pow(long k) { return RootOfUnity<4>(static_cast<int>(k % 4)); }

}  // namespace

TEST(MaslovHolonomy, ConstantLoop) {
  EXPECT_EQ(maslov_holonomy(rotation_line_loop(0, 20)).value, RootOfUnity<4>(0));
}

TEST(MaslovHolonomy, HalfTurnUnderBothBranches) {
  const LagrangianLoop loop = rotation_line_loop(1, 720);
  EXPECT_EQ(to_string(maslov_holonomy(loop, plus_i_branch()).value), "i");
  EXPECT_EQ(to_string(maslov_holonomy(loop, minus_i_branch()).value), "-i");
}

TEST(MaslovHolonomy, FullTurnIsMinusOne) {
  EXPECT_EQ(to_string(maslov_holonomy(rotation_line_loop(2, 720)).value), "-1");
  EXPECT_EQ(to_string(maslov_holonomy(rotation_line_loop(-1, 720)).value), "-i");
  EXPECT_EQ(to_string(maslov_holonomy(rotation_line_loop(4, 720)).value), "1");
}

TEST(MaslovHolonomy, JumpFactorsMultiplyToTheValue) {
  for (int k = -3; k <= 3; ++k) {
    const HolonomyResult h = maslov_holonomy(rotation_line_loop(k, 360));
    RootOfUnity<4> prod;
    for (const auto& j : h.jumps) {
      prod = prod * j.factor;
      EXPECT_NE(j.from, j.to);
    }
    EXPECT_EQ(prod, h.value) << k;
  }
}

TEST(MaslovHolonomy, Rejections) {
  Matrix Z(2, 1);
  Z << 1.0, 0.0;
  const auto sp = standard_space(1, Field::complex);
  Matrix W(2, 1);
  W << 1.0, Scalar(0.1, 0.1);
  const LagrangianLoop complex_loop({LagrangianFrame(Z, sp), LagrangianFrame(W, sp), LagrangianFrame(Z, sp)}, true);
  EXPECT_THROW(maslov_holonomy(complex_loop), FieldError);
  EXPECT_THROW(maslov_holonomy_general(complex_loop), FieldError);
  sampling::Rng rng(1);
  const auto sum = direct_sum_loop(rotation_line_loop(1, 100), sampling::random_real_lagrangian(rng, 1));
  EXPECT_THROW(maslov_holonomy(sum), InvalidArgument);
}

TEST(MaslovHolonomy, GeneralDimension) {
  sampling::Rng rng(2);
  const auto sum = direct_sum_loop(rotation_line_loop(1, 720), sampling::random_real_lagrangian(rng, 2));
  EXPECT_EQ(to_string(maslov_holonomy_general(sum).value), "i");
  EXPECT_EQ(to_string(maslov_holonomy_general(sum, minus_i_branch()).value), "-i");
  EXPECT_EQ(to_string(maslov_holonomy_general(sp_graph_loop(720)).value), "-1");
  EXPECT_EQ(to_string(maslov_holonomy_general(direct_sum_loop(rotation_line_loop(0, 12),
                                                              sampling::random_real_lagrangian(rng, 2)))
                          .value),
            "1");
  EXPECT_EQ(to_string(maslov_holonomy_general(rotation_line_loop(1, 100)).value), "i");
}

TEST(MaslovHolonomy, RandomLoopsMatchHalfTurnCount) {
  sampling::Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pl = sampling::random_closed_plane_loop(rng);
    const long turns = oracle::line_half_turns(pl.loop);
    const HolonomyResult h = maslov_holonomy(pl.loop);
    EXPECT_EQ(h.value.to_complex(), oracle::i_power(turns)) << trial;
    EXPECT_EQ(maslov_holonomy(pl.loop, minus_i_branch()).value, h.value.inverse()) << trial;
    const auto arg = transport_holonomy(pl.loop, {}, TransportBundle::arg);
    EXPECT_EQ(arg.value, h.value.pow(2)) << trial;
    EXPECT_EQ(arg.value.to_complex(), turns % 2 ? oracle::cd(-1) : oracle::cd(1)) << trial;
  }
}

TEST(MaslovHolonomy, SwitchPolicyDoesNotMatter) {
  sampling::Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pl = sampling::random_closed_plane_loop(rng);
    const auto a = transport_holonomy(pl.loop, {}, TransportBundle::sqrt_arg, SwitchPolicy::balanced);
    const auto b = transport_holonomy(pl.loop, {}, TransportBundle::sqrt_arg, SwitchPolicy::lazy);
    EXPECT_EQ(a.value, b.value) << trial;
    EXPECT_LE(b.jumps.size(), a.jumps.size()) << trial;
  }
}

TEST(MaslovHolonomy, ShiftAndGaugeDoNotMatter) {
  const LagrangianLoop loop = rotation_line_loop(3, 300);
  sampling::Rng rng(9);
  const auto expected = maslov_holonomy(loop).value;
  EXPECT_EQ(maslov_holonomy(cyclically_shifted(loop, 37)).value, expected);
  EXPECT_EQ(maslov_holonomy(regauged(loop, [&](std::size_t) { return sampling::random_gauge(rng, 1, Field::real); }))
                .value,
            expected);
  EXPECT_EQ(maslov_holonomy(reversed(loop)).value, expected.inverse());
}

TEST(MaslovHolonomy, MatchesIndexPower) {
  for (int k = -5; k <= 5; ++k) EXPECT_EQ(maslov_holonomy(rotation_line_loop(k, 720)).value, i_pow(k)) << k;
}

TEST(Cp1Cover, Structure) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover();
  EXPECT_EQ(cover.nerve.set_count(), 4u);
  EXPECT_EQ(cover.nerve.triples().size(), 4u);
  EXPECT_EQ(cover.nerve.faces().size(), 4u);
  for (const auto& f : cover.nerve.faces()) EXPECT_TRUE(cover.nerve.find_triple(f.ids, f.component));
  EXPECT_TRUE(is_tetrahedral_sphere_nerve(cover.nerve));
  EXPECT_EQ(cover.equator.size(), 720u);
  EXPECT_EQ(cover.equator.front(), cover.equator.back());
}

TEST(Cp1Cover, EquatorIsTheRealLines) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(90);
  for (std::size_t s = 0; s < cover.equator.size(); ++s) {
    EXPECT_NEAR(std::abs(cover.equator[s]), 1.0, 1e-12);
    const Matrix Z = cover.equator_loop[s].in_standard_coordinates().matrix();
    const oracle::cd q = Z(0, 0), p = Z(1, 0);
    EXPECT_NEAR(std::abs((p - oracle::cd(0, 1) * q) / (p + oracle::cd(0, 1) * q) - cover.equator[s]), 0.0, 1e-12) << s;
  }
}

TEST(Cp1Cover, TransitionsAreACocycleOfDegreeOne) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover();
  const auto rep = check_transition_cocycle(cover.transitions, cover.nerve);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(evaluate_fundamental(chern_cocycle(lift_logs(cover.transitions, cover.nerve), cover.nerve), cover.nerve),
            oracle::clutching_degree());
}

TEST(Cp1Cover, EquatorMaslovHolonomy) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover();
  EXPECT_EQ(maslov_index(cover.equator_loop), 1);
  EXPECT_EQ(to_string(maslov_holonomy(cover.equator_loop).value), "i");
}

TEST(Cp1Cover, TooFewSamples) { EXPECT_THROW(build_cp1_maslov_cover(8), InvalidArgument); }

TEST(GerbeClass, DegreeOne) {
  const GerbeClassReport rep = maslov_gerbe_class(1);
  EXPECT_TRUE(rep.consistent);
  EXPECT_EQ(rep.chern_evaluation, 1);
  EXPECT_EQ(rep.giraud_evaluation, RootOfUnity<2>(1));
  EXPECT_EQ(rep.value, Scalar(-1.0));
  EXPECT_EQ(rep.theorem.equator_holonomy, Scalar(-1.0));
  EXPECT_EQ(to_string(rep.equator_maslov_power), "-1");
  EXPECT_TRUE(rep.pointwise_mod2);
  EXPECT_EQ(rep.faces.size(), 4u);
}

TEST(GerbeClass, DegreeTwoIsTrivial) {
  const GerbeClassReport rep = maslov_gerbe_class(2);
  EXPECT_TRUE(rep.consistent);
  EXPECT_EQ(rep.chern_evaluation, 2);
  EXPECT_EQ(rep.value, Scalar(1.0));
}

TEST(GerbeClass, BranchDoesNotChangeTheValue) {
  const GerbeClassReport a = maslov_gerbe_class(1, 720, plus_i_branch());
  const GerbeClassReport b = maslov_gerbe_class(1, 720, minus_i_branch());
  EXPECT_EQ(to_string(a.equator_maslov.value), "i");
  EXPECT_EQ(to_string(b.equator_maslov.value), "-i");
  EXPECT_EQ(a.value, b.value);
  EXPECT_TRUE(b.consistent);
}

TEST(GerbeClass, NegativeDegrees) {
  for (int d : {-1, -2, -3}) {
    const GerbeClassReport rep = maslov_gerbe_class(d);
    EXPECT_TRUE(rep.consistent) << d;
    EXPECT_EQ(rep.chern_evaluation, d);
  }
}
