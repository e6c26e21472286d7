#pragma once

// Square-root gerbes of line bundles through their cocycle data: local
// isomorphisms sigma_ij between the canonical local objects, the Giraud
// cocycle gamma_ijk = sigma_ij sigma_jk sigma_ki, and the holonomy of the
// ratio of two hemisphere objects around an equator.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "maslov/cech.hpp"
#include "maslov/groups.hpp"

namespace maslov {

/// Isomorphism from the canonical object over U_j to the one over U_i,
/// sampled along the stored overlap (i, j). sigma^2 = r_ij.
struct GerbeIsomorphism {
  std::size_t overlap = 0;
  std::size_t source = 0;  // j
  std::size_t target = 0;  // i
  std::vector<Scalar> sigma;
};

/// One isomorphism per stored overlap, indexed like the nerve's overlaps.
struct GerbeIsomorphisms {
  std::vector<GerbeIsomorphism> isos;

  Scalar at(const SampleRef& r) const {
    const Scalar v = isos[r.overlap].sigma[r.sample];
    return r.reversed ? 1.0 / v : v;
  }
};

/// sigma_ij = exp(pi i theta_ij).
inline GerbeIsomorphisms sqrt_gerbe_isos(const LogLift& lift, const CoverNerve& nerve) {
  require_keys(nerve, lift.values, "sqrt_gerbe_isos");
  GerbeIsomorphisms out;
  out.isos.reserve(lift.values.size());
  for (std::size_t o = 0; o < lift.values.size(); ++o) {
    GerbeIsomorphism g{o, nerve.overlaps()[o].j, nerve.overlaps()[o].i, {}};
    g.sigma.reserve(lift.values[o].size());
    for (const Scalar theta : lift.values[o]) g.sigma.push_back(std::exp(Scalar(0.0, std::numbers::pi) * theta));
    out.isos.push_back(std::move(g));
  }
  return out;
}

/// Max relative deviation |sigma^2 - r| / |r|: how far the isomorphisms are
/// from intertwining the canonical square roots of `t`.
inline double intertwining_defect(const GerbeIsomorphisms& g, const TransitionData& t, const CoverNerve& nerve) {
  require_keys(nerve, t.values, "intertwining_defect");
  if (g.isos.size() != t.values.size()) throw StructuralError("intertwining_defect: one isomorphism per overlap");
  double worst = 0.0;
  for (std::size_t o = 0; o < t.values.size(); ++o) {
    if (g.isos[o].sigma.size() != t.values[o].size())
      throw StructuralError("intertwining_defect: isomorphism samples do not match " + nerve.overlap_name(o));
    for (std::size_t s = 0; s < t.values[o].size(); ++s) {
      const Scalar sg = g.isos[o].sigma[s];
      worst = std::max(worst, std::abs(sg * sg - t.values[o][s]) / std::abs(t.values[o][s]));
    }
  }
  return worst;
}

/// Multiplies sigma on each overlap by +-1 (flips[o] true means -1). The
/// Giraud cocycle changes by a coboundary.
inline GerbeIsomorphisms flip_isomorphisms(GerbeIsomorphisms g, const std::vector<bool>& flips) {
  if (flips.size() != g.isos.size()) throw StructuralError("flip_isomorphisms: one flag per overlap");
  for (std::size_t o = 0; o < flips.size(); ++o)
    if (flips[o])
      for (auto& s : g.isos[o].sigma) s = -s;
  return g;
}

struct GiraudCocycle {
  CechCocycle<Z2> cocycle;
  double max_snap_deviation = 0.0;
};

/// gamma_ijk = sigma_ij sigma_jk sigma_ki at every triple sample, snapped to
/// {+1, -1} and required constant on each triple component.
inline GiraudCocycle giraud_cocycle_with_residual(const GerbeIsomorphisms& g, const CoverNerve& nerve) {
  if (g.isos.size() != nerve.overlaps().size()) throw StructuralError("giraud_cocycle: one isomorphism per overlap");
  for (std::size_t o = 0; o < g.isos.size(); ++o)
    if (g.isos[o].sigma.size() != nerve.overlaps()[o].samples.size())
      throw StructuralError("giraud_cocycle: isomorphism samples do not match " + nerve.overlap_name(o));
  GiraudCocycle out;
  std::vector<RootOfUnity<2>> values;
  values.reserve(nerve.triples().size());
  for (std::size_t k = 0; k < nerve.triples().size(); ++k) {
    const auto& tr = nerve.triples()[k];
    std::optional<RootOfUnity<2>> value;
    for (std::size_t s = 0; s < tr.samples.size(); ++s) {
      const auto& refs = tr.samples[s].refs;
      const Scalar gamma = g.at(refs[0]) * g.at(refs[1]) * g.at(refs[2]);
      const auto snapped = RootOfUnity<2>::snap(gamma);
      out.max_snap_deviation = std::max(out.max_snap_deviation, std::abs(gamma - snapped.to_complex()));
      if (value && !(*value == snapped))
        throw ConnectivityError("giraud_cocycle: gamma changes sign inside " + nerve.triple_name(k));
      value = snapped;
    }
    values.push_back(*value);
  }
  out.cocycle = CechCocycle<Z2>(std::move(values));
  return out;
}

inline CechCocycle<Z2> giraud_cocycle(const GerbeIsomorphisms& g, const CoverNerve& nerve) {
  return giraud_cocycle_with_residual(g, nerve).cocycle;
}

/// An object (tau, iota) over a hemisphere neighbourhood with trivial tau,
/// recorded along the equator path by iota(u x u) for the unit section u of
/// tau, written in a fixed reference trivialization of the line bundle.
struct GerbeObject {
  std::string domain;
  std::vector<Scalar> square;
};

struct HolonomyValue {
  Scalar value{1.0, 0.0};  // snapped to a root of unity
  Scalar raw{1.0, 0.0};
};

/// Holonomy of O+ (x) O-^{-1} around the closed equator path. Flat sections
/// are c * (u+ (x) u-^{-1}) with c^2 = square(O-) / square(O+); transporting
/// c continuously around the path multiplies it by the holonomy.
inline HolonomyValue equator_holonomy(const GerbeObject& plus, const GerbeObject& minus,
                                      const std::vector<BasePoint>& equator, int band = 2) {
  const std::size_t m = equator.size();
  if (m < 3) throw InvalidArgument("equator_holonomy: equator needs at least 3 samples");
  if (std::abs(equator.front() - equator.back()) > 1e-9)
    throw InvalidArgument("equator_holonomy: equator path is not closed");
  if (plus.square.size() != m || minus.square.size() != m)
    throw StructuralError("equator_holonomy: objects are not defined at every equator sample");
  std::vector<Scalar> ratio(m);
  for (std::size_t s = 0; s < m; ++s) {
    if (!(std::abs(plus.square[s]) > 0.0) || !(std::abs(minus.square[s]) > 0.0))
      throw InvalidArgument("equator_holonomy: object data vanish at equator sample " + std::to_string(s));
    ratio[s] = minus.square[s] / plus.square[s];
  }
  const std::vector<double> args = lift_arguments(ratio, "equator_holonomy");
  const double half_turn = 0.5 * (args.back() - args.front());
  HolonomyValue out;
  out.raw = std::polar(std::sqrt(std::abs(ratio.back()) / std::abs(ratio.front())), half_turn);
  if (band == 2) {
    out.value = RootOfUnity<2>::snap(out.raw).to_complex();
  } else if (band == 4) {
    out.value = RootOfUnity<4>::snap(out.raw).to_complex();
  } else {
    throw InvalidArgument("equator_holonomy: band must be 2 or 4");
  }
  return out;
}

struct EquatorTheoremReport {
  Scalar giraud_evaluation{1.0, 0.0};
  Scalar equator_holonomy{1.0, 0.0};
  bool equal = false;
  double max_deviation = 0.0;
};

/// True when the nerve is the boundary of a tetrahedron on sets 0..3 with
/// fundamental cycle (123) + (032) + (013) + (021).
inline bool is_tetrahedral_sphere_nerve(const CoverNerve& nerve) {
  if (nerve.set_count() != 4 || nerve.faces().size() != 4) return false;
  using Ids = std::array<std::size_t, 3>;
  constexpr std::array<Ids, 4> expected{{{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}}};
  for (const Ids& e : expected) {
    bool found = false;
    for (const auto& f : nerve.faces()) {
      const auto s = CoverNerve::permutation_sign(f.ids, e);
      if (s && *s * f.sign == 1) found = true;
    }
    if (!found) return false;
  }
  return true;
}

/// Giraud class on the fundamental cycle and the equator holonomy of
/// O+ (x) O-^{-1}, computed independently and compared.
inline EquatorTheoremReport verify_equator_theorem(const CoverNerve& nerve, const GerbeIsomorphisms& isos,
                                                   const GerbeObject& plus, const GerbeObject& minus,
                                                   const std::vector<BasePoint>& equator) {
  if (!is_tetrahedral_sphere_nerve(nerve))
    throw StructuralError("verify_equator_theorem: nerve is not the tetrahedral sphere with faces (123),(032),(013),(021)");
  const GiraudCocycle gc = giraud_cocycle_with_residual(isos, nerve);
  const HolonomyValue hol = equator_holonomy(plus, minus, equator);
  EquatorTheoremReport out;
  out.giraud_evaluation = evaluate_fundamental(gc.cocycle, nerve).to_complex();
  out.equator_holonomy = hol.value;
  out.equal = out.giraud_evaluation == out.equator_holonomy;
  out.max_deviation = std::max({gc.max_snap_deviation, std::abs(hol.raw - hol.value),
                                std::abs(hol.raw - out.giraud_evaluation)});
  return out;
}

}  // namespace maslov
