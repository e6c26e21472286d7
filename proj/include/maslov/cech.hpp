#pragma once

// Cech machinery for line bundles over a finite cover: nerves with sampled
// overlaps, transition data r_ij, logarithm lifts theta_ij, the integer
// 2-cocycle c_ijk = theta_ij + theta_jk + theta_ki, and evaluation of
// 2-cocycles on an oriented fundamental cycle.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "maslov/errors.hpp"
#include "maslov/groups.hpp"
#include "maslov/symplectic.hpp"

namespace maslov {

/// Coordinate of a sample point in a chart of the (2-dimensional) base.
using BasePoint = std::complex<double>;

namespace tolerance {
inline constexpr double transition_cocycle = 1e-9;
inline constexpr double integer_round = 1e-6;
inline constexpr double unit_modulus = 1e-9;
/// Principal-argument increments along a path must stay below pi - this.
inline constexpr double lift_margin = 1e-6;
inline constexpr double point_match = 1e-12;
}  // namespace tolerance

/// One connected component of U_i n U_j with an ordered sample path.
/// Data keyed by this component is stored for the ordered pair (i, j).
struct OverlapComponent {
  std::size_t i = 0, j = 0;
  int component = 0;
  std::vector<BasePoint> samples;
};

/// Position of a triple sample on a pair path. `reversed` means the
/// triple's ordered pair is (j, i) of the stored overlap.
struct SampleRef {
  std::size_t overlap = 0;
  std::size_t sample = 0;
  bool reversed = false;
};

/// A point of U_i n U_j n U_k located on the three pair paths for the
/// ordered pairs (i,j), (j,k), (k,i).
struct TripleSample {
  BasePoint point;
  std::array<SampleRef, 3> refs;
};

struct TripleComponent {
  std::array<std::size_t, 3> ids{};
  int component = 0;
  std::vector<TripleSample> samples;
};

struct OrientedFace {
  std::array<std::size_t, 3> ids{};
  int sign = 1;
  int component = 0;
};

/// Finite cover with overlap and triple-overlap combinatorics. Immutable;
/// the constructor checks every structural invariant.
class CoverNerve {
 public:
  CoverNerve(std::vector<std::string> set_ids, std::vector<OverlapComponent> overlaps,
             std::vector<TripleComponent> triples, std::vector<OrientedFace> faces)
      : set_ids_(std::move(set_ids)),
        overlaps_(std::move(overlaps)),
        triples_(std::move(triples)),
        faces_(std::move(faces)) {
    validate();
  }

  const std::vector<std::string>& set_ids() const { return set_ids_; }
  const std::vector<OverlapComponent>& overlaps() const { return overlaps_; }
  const std::vector<TripleComponent>& triples() const { return triples_; }
  const std::vector<OrientedFace>& faces() const { return faces_; }
  std::size_t set_count() const { return set_ids_.size(); }

  /// Index of the stored overlap for the unordered pair {i, j}, plus whether
  /// (i, j) is the reverse of its stored orientation.
  std::optional<std::pair<std::size_t, bool>> find_overlap(std::size_t i, std::size_t j, int component = 0) const {
    for (std::size_t o = 0; o < overlaps_.size(); ++o) {
      const auto& ov = overlaps_[o];
      if (ov.component != component) continue;
      if (ov.i == i && ov.j == j) return std::pair{o, false};
      if (ov.i == j && ov.j == i) return std::pair{o, true};
    }
    return std::nullopt;
  }

  /// Stored triple component with the same vertex set, and the sign of the
  /// permutation taking the stored order to (i, j, k).
  std::optional<std::pair<std::size_t, int>> find_triple(std::array<std::size_t, 3> ids, int component = 0) const {
    for (std::size_t t = 0; t < triples_.size(); ++t) {
      if (triples_[t].component != component) continue;
      if (const auto s = permutation_sign(triples_[t].ids, ids)) return std::pair{t, *s};
    }
    return std::nullopt;
  }

  std::string overlap_name(std::size_t o) const {
    const auto& ov = overlaps_[o];
    return "(" + set_ids_[ov.i] + "," + set_ids_[ov.j] + ")#" + std::to_string(ov.component);
  }
  std::string triple_name(std::size_t t) const {
    const auto& tr = triples_[t];
    return "(" + set_ids_[tr.ids[0]] + "," + set_ids_[tr.ids[1]] + "," + set_ids_[tr.ids[2]] + ")#" +
           std::to_string(tr.component);
  }

  /// Sign of the permutation from `from` to `to`, or nothing if the vertex
  /// sets differ.
  static std::optional<int> permutation_sign(const std::array<std::size_t, 3>& from,
                                             const std::array<std::size_t, 3>& to) {
    std::array<int, 3> pos{};
    for (int a = 0; a < 3; ++a) {
      int found = -1;
      for (int b = 0; b < 3; ++b)
        if (from[b] == to[a]) found = b;
      if (found < 0) return std::nullopt;
      pos[a] = found;
    }
    if (pos[0] == pos[1] || pos[1] == pos[2] || pos[0] == pos[2]) return std::nullopt;
    int inversions = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        if (pos[a] > pos[b]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
  }

 private:
  void validate() const {
    const std::size_t n = set_ids_.size();
    std::set<std::tuple<std::size_t, std::size_t, int>> seen_pairs;
    for (std::size_t o = 0; o < overlaps_.size(); ++o) {
      const auto& ov = overlaps_[o];
      if (ov.i >= n || ov.j >= n || ov.i == ov.j)
        throw StructuralError("overlap " + std::to_string(o) + " has invalid set indices");
      if (ov.samples.empty()) throw StructuralError("overlap " + overlap_name(o) + " has no samples");
      const auto key = std::tuple{std::min(ov.i, ov.j), std::max(ov.i, ov.j), ov.component};
      if (!seen_pairs.insert(key).second)
        throw StructuralError("overlap " + overlap_name(o) + " listed twice (pair data must be stored once)");
    }
    for (std::size_t t = 0; t < triples_.size(); ++t) {
      const auto& tr = triples_[t];
      const auto& v = tr.ids;
      if (v[0] >= n || v[1] >= n || v[2] >= n || v[0] == v[1] || v[1] == v[2] || v[0] == v[2])
        throw StructuralError("triple " + std::to_string(t) + " has invalid set indices");
      if (tr.samples.empty()) throw StructuralError("triple " + triple_name(t) + " has no samples");
      const std::array<std::pair<std::size_t, std::size_t>, 3> pairs{{{v[0], v[1]}, {v[1], v[2]}, {v[2], v[0]}}};
      for (std::size_t s = 0; s < tr.samples.size(); ++s) {
        const auto& ts = tr.samples[s];
        for (int e = 0; e < 3; ++e) {
          const SampleRef& r = ts.refs[e];
          if (r.overlap >= overlaps_.size())
            throw StructuralError("triple " + triple_name(t) + " sample " + std::to_string(s) + " refers to a missing overlap");
          const auto& ov = overlaps_[r.overlap];
          const bool forward = ov.i == pairs[e].first && ov.j == pairs[e].second;
          const bool backward = ov.i == pairs[e].second && ov.j == pairs[e].first;
          if (!(forward && !r.reversed) && !(backward && r.reversed))
            throw StructuralError("triple " + triple_name(t) + " sample " + std::to_string(s) +
                                  " refers to overlap " + overlap_name(r.overlap) + " with the wrong orientation");
          if (r.sample >= ov.samples.size())
            throw StructuralError("triple " + triple_name(t) + " sample " + std::to_string(s) + " is off the path of " +
                                  overlap_name(r.overlap));
          if (std::abs(ov.samples[r.sample] - ts.point) > tolerance::point_match)
            throw StructuralError("triple " + triple_name(t) + " sample " + std::to_string(s) +
                                  " does not lie on the path of " + overlap_name(r.overlap));
        }
      }
    }
    // Faces must refer to existing triples and form a cycle.
    std::map<std::pair<std::size_t, std::size_t>, int> boundary;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      const auto& face = faces_[f];
      if (face.sign != 1 && face.sign != -1) throw StructuralError("face sign must be +1 or -1");
      if (!find_triple(face.ids, face.component))
        throw StructuralError("face " + std::to_string(f) + " has no triple-overlap data");
      const auto& v = face.ids;
      for (int e = 0; e < 3; ++e) {
        std::size_t a = v[e], b = v[(e + 1) % 3];
        int s = face.sign;
        if (a > b) {
          std::swap(a, b);
          s = -s;
        }
        boundary[{a, b}] += s;
      }
    }
    for (const auto& [edge, mult] : boundary)
      if (mult != 0)
        throw StructuralError("oriented faces do not close up: edge (" + set_ids_[edge.first] + "," +
                              set_ids_[edge.second] + ") has boundary multiplicity " + std::to_string(mult));
  }

  std::vector<std::string> set_ids_;
  std::vector<OverlapComponent> overlaps_;
  std::vector<TripleComponent> triples_;
  std::vector<OrientedFace> faces_;
};

/// Sampled values on each overlap path; values[o][s] belongs to the stored
/// orientation (i, j) of overlap o, and r_ji = 1 / r_ij.
struct TransitionData {
  Field field = Field::complex;
  std::vector<std::vector<Scalar>> values;

  Scalar at(const SampleRef& r) const {
    const Scalar v = values[r.overlap][r.sample];
    return r.reversed ? 1.0 / v : v;
  }
};

/// theta with exp(2 pi i theta) = r, continuous along every path, stored for
/// the same orientation as the transition data (theta_ji = -theta_ij).
struct LogLift {
  std::vector<std::vector<Scalar>> values;

  Scalar at(const SampleRef& r) const {
    const Scalar v = values[r.overlap][r.sample];
    return r.reversed ? -v : v;
  }
};

/// Lists every overlap/sample key of `nerve` missing from `values`.
template <class T>
void require_keys(const CoverNerve& nerve, const std::vector<std::vector<T>>& values, const char* what) {
  std::string missing;
  for (std::size_t o = 0; o < nerve.overlaps().size(); ++o) {
    const std::size_t want = nerve.overlaps()[o].samples.size();
    const std::size_t have = o < values.size() ? values[o].size() : 0;
    if (have < want)
      missing += " " + nerve.overlap_name(o) + "[" + std::to_string(have) + ".." + std::to_string(want) + ")";
  }
  if (!missing.empty()) throw StructuralError(std::string(what) + ": missing samples at" + missing);
  if (values.size() > nerve.overlaps().size())
    throw StructuralError(std::string(what) + ": data for overlaps the nerve does not have");
  for (std::size_t o = 0; o < values.size(); ++o)
    if (values[o].size() != nerve.overlaps()[o].samples.size())
      throw StructuralError(std::string(what) + ": extra samples on " + nerve.overlap_name(o));
}

struct TransitionCocycleReport {
  double max_deviation = 0.0;
  bool pass = true;
  std::size_t worst_triple = 0;
  std::size_t worst_sample = 0;
  std::string worst_key;  // e.g. "(U0,U1,U2)#0 sample 17"
};

/// max |r_ij r_jk r_ki - 1| over all triple samples.
inline TransitionCocycleReport check_transition_cocycle(const TransitionData& t, const CoverNerve& nerve) {
  require_keys(nerve, t.values, "check_transition_cocycle");
  TransitionCocycleReport out;
  for (std::size_t k = 0; k < nerve.triples().size(); ++k) {
    const auto& tr = nerve.triples()[k];
    for (std::size_t s = 0; s < tr.samples.size(); ++s) {
      const auto& refs = tr.samples[s].refs;
      const double dev = std::abs(t.at(refs[0]) * t.at(refs[1]) * t.at(refs[2]) - 1.0);
      if (dev > out.max_deviation || !std::isfinite(dev)) {
        out.max_deviation = std::isfinite(dev) ? dev : INFINITY;
        out.worst_triple = k;
        out.worst_sample = s;
        out.worst_key = nerve.triple_name(k) + " sample " + std::to_string(s);
      }
    }
  }
  out.pass = out.max_deviation < tolerance::transition_cocycle;
  return out;
}

/// Continuous lift of arg(z) along a path, starting on the principal branch.
/// Throws AliasingError (naming `where`) if an increment reaches pi.
inline std::vector<double> lift_arguments(const std::vector<Scalar>& path, const std::string& where) {
  std::vector<double> out(path.size());
  if (path.empty()) return out;
  out[0] = std::arg(path[0]);
  for (std::size_t s = 1; s < path.size(); ++s) {
    const double inc = std::arg(path[s] / path[s - 1]);
    if (std::abs(inc) >= std::numbers::pi - tolerance::lift_margin || !std::isfinite(inc))
      throw AliasingError(where + ": argument jumps by " + std::to_string(inc) + " between samples " +
                          std::to_string(s - 1) + " and " + std::to_string(s));
    out[s] = out[s - 1] + inc;
  }
  return out;
}

/// theta_ij = log(r_ij) / (2 pi i), principal branch at each path's first
/// sample and continued along the path.
inline LogLift lift_logs(const TransitionData& t, const CoverNerve& nerve) {
  require_keys(nerve, t.values, "lift_logs");
  LogLift out;
  out.values.resize(t.values.size());
  for (std::size_t o = 0; o < t.values.size(); ++o) {
    const auto& path = t.values[o];
    for (std::size_t s = 0; s < path.size(); ++s)
      if (!(std::abs(path[s]) > 0.0) || !std::isfinite(std::abs(path[s])))
        throw InvalidArgument("lift_logs: transition value on " + nerve.overlap_name(o) + " sample " +
                              std::to_string(s) + " is not in GL(1)");
    const std::vector<double> args = lift_arguments(path, "lift_logs on " + nerve.overlap_name(o));
    auto& theta = out.values[o];
    theta.resize(path.size());
    for (std::size_t s = 0; s < path.size(); ++s) {
      // log r = ln|r| + i arg r, divided by 2 pi i.
      theta[s] = Scalar(args[s], -std::log(std::abs(path[s]))) / (2.0 * std::numbers::pi);
    }
  }
  return out;
}

/// Adds an integer to theta on every sample of each overlap component; any
/// valid lift is one of these shifts of the principal one.
inline LogLift shift_branches(LogLift lift, const std::vector<long>& offsets) {
  if (offsets.size() != lift.values.size()) throw StructuralError("shift_branches: one offset per overlap");
  for (std::size_t o = 0; o < offsets.size(); ++o)
    for (auto& v : lift.values[o]) v += static_cast<double>(offsets[o]);
  return lift;
}

/// Triple-indexed values in a coefficient group, one per triple component,
/// stored for the triple's recorded order. Other orders follow by total
/// antisymmetry.
template <class G>
class CechCocycle {
 public:
  using value_type = typename G::value_type;

  CechCocycle() = default;
  explicit CechCocycle(std::vector<value_type> values) : values_(std::move(values)) {}

  const std::vector<value_type>& values() const { return values_; }

  /// Value on the ordered triple (i, j, k); odd permutations invert.
  value_type at(const CoverNerve& nerve, std::array<std::size_t, 3> ids, int component = 0) const {
    const auto hit = nerve.find_triple(ids, component);
    if (!hit) throw StructuralError("cocycle has no value on the requested triple");
    const value_type v = values_.at(hit->first);
    return hit->second > 0 ? v : G::inverse(v);
  }

 private:
  std::vector<value_type> values_;
};

/// Integer cocycle c_ijk = theta_ij + theta_jk + theta_ki. Every triple
/// sample must be within tolerance of an integer, and that integer must be
/// the same across each triple component.
inline CechCocycle<IntegerGroup> chern_cocycle(const LogLift& lift, const CoverNerve& nerve) {
  require_keys(nerve, lift.values, "chern_cocycle");
  std::vector<long> out;
  out.reserve(nerve.triples().size());
  for (std::size_t k = 0; k < nerve.triples().size(); ++k) {
    const auto& tr = nerve.triples()[k];
    std::optional<long> value;
    for (std::size_t s = 0; s < tr.samples.size(); ++s) {
      const auto& refs = tr.samples[s].refs;
      const Scalar sum = lift.at(refs[0]) + lift.at(refs[1]) + lift.at(refs[2]);
      const double rounded = std::round(sum.real());
      if (std::abs(sum.real() - rounded) > tolerance::integer_round || std::abs(sum.imag()) > tolerance::integer_round)
        throw IntegralityError("chern_cocycle: theta sum (" + std::to_string(sum.real()) + ", " +
                               std::to_string(sum.imag()) + ") on " + nerve.triple_name(k) + " sample " +
                               std::to_string(s) + " is not an integer");
      const long c = static_cast<long>(rounded);
      if (value && *value != c)
        throw ConnectivityError("chern_cocycle: value changes from " + std::to_string(*value) + " to " +
                                std::to_string(c) + " inside " + nerve.triple_name(k));
      value = c;
    }
    out.push_back(*value);
  }
  return CechCocycle<IntegerGroup>(std::move(out));
}

/// Signed sum (or product) of the cocycle over the oriented faces.
template <class G>
typename G::value_type evaluate_fundamental(const CechCocycle<G>& c, const CoverNerve& nerve) {
  if (nerve.faces().empty()) throw StructuralError("evaluate_fundamental: nerve has no fundamental cycle");
  auto acc = G::identity();
  for (const auto& face : nerve.faces()) {
    const auto v = c.at(nerve, face.ids, face.component);
    acc = G::combine(acc, face.sign > 0 ? v : G::inverse(v));
  }
  return acc;
}

namespace detail {

inline void require_same_shape(const TransitionData& a, const TransitionData& b, const char* what) {
  bool ok = a.values.size() == b.values.size();
  for (std::size_t o = 0; ok && o < a.values.size(); ++o) ok = a.values[o].size() == b.values[o].size();
  if (!ok) throw StructuralError(std::string(what) + ": transition data are keyed differently");
}

template <class Fn>
TransitionData map_values(const TransitionData& t, Field field, Fn&& fn) {
  TransitionData out{field, t.values};
  for (auto& path : out.values)
    for (auto& v : path) v = fn(v);
  return out;
}

}  // namespace detail

/// r'_ij = b_i r_ij / b_j with b(set, point) sampled at each overlap sample.
template <class Fn>
TransitionData perturb_by_coboundary(const TransitionData& t, const CoverNerve& nerve, Fn&& b) {
  require_keys(nerve, t.values, "perturb_by_coboundary");
  TransitionData out = t;
  for (std::size_t o = 0; o < t.values.size(); ++o) {
    const auto& ov = nerve.overlaps()[o];
    for (std::size_t s = 0; s < ov.samples.size(); ++s) {
      const Scalar bi = b(ov.i, ov.samples[s]);
      const Scalar bj = b(ov.j, ov.samples[s]);
      if (!(std::abs(bi) > 0.0) || !(std::abs(bj) > 0.0))
        throw InvalidArgument("perturb_by_coboundary: b vanishes on " + nerve.overlap_name(o) + " sample " +
                              std::to_string(s));
      out.values[o][s] = bi * t.values[o][s] / bj;
    }
  }
  if (t.field == Field::real)
    for (const auto& path : out.values)
      for (const auto& v : path)
        if (v.imag() != 0.0) {
          out.field = Field::complex;
          break;
        }
  return out;
}

/// z -> z / |z| on every value.
inline TransitionData unitarize(const TransitionData& t) {
  return detail::map_values(t, t.field, [](Scalar z) { return z / std::abs(z); });
}

inline TransitionData tensor(const TransitionData& a, const TransitionData& b) {
  detail::require_same_shape(a, b, "tensor");
  TransitionData out = a;
  if (b.field == Field::complex) out.field = Field::complex;
  for (std::size_t o = 0; o < a.values.size(); ++o)
    for (std::size_t s = 0; s < a.values[o].size(); ++s) out.values[o][s] *= b.values[o][s];
  return out;
}

inline TransitionData inverse(const TransitionData& t) {
  return detail::map_values(t, t.field, [](Scalar z) { return 1.0 / z; });
}

inline TransitionData square(const TransitionData& t) { return tensor(t, t); }

/// d-th tensor power; negative d uses the inverse bundle.
inline TransitionData power(const TransitionData& t, int d) {
  return detail::map_values(t, t.field, [d](Scalar z) {
    Scalar acc(1.0, 0.0);
    const Scalar base = d >= 0 ? z : 1.0 / z;
    for (int k = 0; k < std::abs(d); ++k) acc *= base;
    return acc;
  });
}

/// All-ones data on every sample of the nerve.
inline TransitionData trivial_transitions(const CoverNerve& nerve) {
  TransitionData out{Field::complex, {}};
  for (const auto& ov : nerve.overlaps()) out.values.emplace_back(ov.samples.size(), Scalar(1.0, 0.0));
  return out;
}

}  // namespace maslov
