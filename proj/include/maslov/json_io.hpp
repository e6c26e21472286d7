#pragma once

// JSON for frames, loops, nerves, transition data and reports. Every
// scalar is written as [re, im].

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "maslov/bundles.hpp"
#include "maslov/cech.hpp"
#include "maslov/gerbe.hpp"
#include "maslov/symplectic.hpp"

namespace maslov::io {

using Json = nlohmann::json;

/// Malformed or schema-violating JSON input.
class FormatError : public Error {
 public:
  using Error::Error;
};

inline Json to_json(Scalar z) { return Json::array({z.real(), z.imag()}); }

inline Scalar scalar_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError(where + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <class T>
T field_as(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(where + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw FormatError(where + ": bad \"" + key + "\": " + e.what());
  }
}

inline Field field_from_string(const std::string& s) {
  if (s == "real") return Field::real;
  if (s == "complex") return Field::complex;
  throw FormatError("unknown field \"" + s + "\"");
}

inline const char* to_string(FormKind f) { return f == FormKind::standard ? "standard" : "opposite_sum"; }

inline SymplecticSpace space_from_json(const Json& j) {
  const auto field = field_from_string(field_as<std::string>(j, "field", "space"));
  const int n = field_as<int>(j, "n", "space");
  FormKind form = FormKind::standard;
  if (j.contains("form")) {
    const auto f = field_as<std::string>(j, "form", "space");
    if (f == "opposite_sum") form = FormKind::opposite_sum;
    else if (f != "standard") throw FormatError("unknown form \"" + f + "\"");
  }
  return SymplecticSpace(n, field, form);
}

inline void put_space(Json& j, const SymplecticSpace& sp) {
  j["field"] = to_string(sp.field());
  j["n"] = sp.n();
  if (sp.form() != FormKind::standard) j["form"] = to_string(sp.form());
}

/// Row-major list of 2n*n entries.
inline Json matrix_to_json(const Matrix& Z) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < Z.rows(); ++r)
    for (Eigen::Index c = 0; c < Z.cols(); ++c) out.push_back(to_json(Z(r, c)));
  return out;
}

/// Accepts the flat row-major form or a list of rows.
inline Matrix matrix_from_json(const Json& j, int rows, int cols, const std::string& where) {
  if (!j.is_array()) throw FormatError(where + ": expected an array of entries");
  std::vector<Scalar> flat;
  const bool nested = !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array();
  if (nested) {
    for (const auto& row : j) {
      if (!row.is_array()) throw FormatError(where + ": rows must be arrays");
      for (const auto& e : row) flat.push_back(scalar_from_json(e, where));
    }
  } else {
    for (const auto& e : j) flat.push_back(scalar_from_json(e, where));
  }
  if (flat.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw FormatError(where + ": expected " + std::to_string(rows * cols) + " entries, got " +
                      std::to_string(flat.size()));
  Matrix Z(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) Z(r, c) = flat[static_cast<std::size_t>(r * cols + c)];
  return Z;
}

inline LagrangianFrame frame_from_json(const Json& j, const SymplecticSpace& sp, const std::string& where) {
  Matrix Z = matrix_from_json(j, sp.dim(), sp.n(), where);
  if (sp.field() == Field::real) {
    for (Eigen::Index k = 0; k < Z.size(); ++k)
      if (Z.data()[k].imag() != 0.0) throw FieldError(where + ": imaginary entry in a real frame");
  }
  return LagrangianFrame(std::move(Z), sp);
}

inline Json loop_to_json(const LagrangianLoop& loop) {
  Json j;
  put_space(j, loop.space());
  j["closed"] = loop.closed();
  Json samples = Json::array();
  for (const auto& f : loop.samples()) samples.push_back(matrix_to_json(f.matrix()));
  j["samples"] = std::move(samples);
  return j;
}

inline LagrangianLoop loop_from_json(const Json& j) {
  const SymplecticSpace sp = space_from_json(j);
  const auto& samples = j.contains("samples") ? j.at("samples") : throw FormatError("loop: missing \"samples\"");
  if (!samples.is_array()) throw FormatError("loop: \"samples\" must be an array");
  std::vector<LagrangianFrame> frames;
  frames.reserve(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s)
    frames.push_back(frame_from_json(samples[s], sp, "loop sample " + std::to_string(s)));
  const bool closed = j.contains("closed") ? field_as<bool>(j, "closed", "loop") : true;
  return LagrangianLoop(std::move(frames), closed);
}

inline Json frame_to_json(const LagrangianFrame& f) {
  Json j;
  put_space(j, f.space());
  j["frame"] = matrix_to_json(f.matrix());
  return j;
}

inline LagrangianFrame frame_from_json(const Json& j) {
  const SymplecticSpace sp = space_from_json(j);
  if (!j.contains("frame")) throw FormatError("frame: missing \"frame\"");
  return frame_from_json(j.at("frame"), sp, "frame");
}

// ---------------------------------------------------------------------------
// nerves and transition data

inline Json nerve_to_json(const CoverNerve& nerve) {
  Json j;
  j["sets"] = nerve.set_ids();
  Json overlaps = Json::array();
  for (const auto& o : nerve.overlaps()) {
    Json samples = Json::array();
    for (const auto& p : o.samples) samples.push_back(to_json(p));
    overlaps.push_back({{"pair", {o.i, o.j}}, {"component", o.component}, {"samples", std::move(samples)}});
  }
  j["overlaps"] = std::move(overlaps);
  Json triples = Json::array();
  for (const auto& t : nerve.triples()) {
    Json samples = Json::array();
    for (const auto& s : t.samples) {
      Json refs = Json::array();
      for (const auto& r : s.refs) refs.push_back({r.overlap, r.sample, r.reversed});
      samples.push_back({{"point", to_json(s.point)}, {"refs", std::move(refs)}});
    }
    triples.push_back({{"ids", t.ids}, {"component", t.component}, {"samples", std::move(samples)}});
  }
  j["triples"] = std::move(triples);
  Json faces = Json::array();
  for (const auto& f : nerve.faces()) faces.push_back({{"ids", f.ids}, {"sign", f.sign}, {"component", f.component}});
  j["faces"] = std::move(faces);
  return j;
}

inline CoverNerve nerve_from_json(const Json& j) {
  try {
    auto sets = field_as<std::vector<std::string>>(j, "sets", "nerve");
    std::vector<OverlapComponent> overlaps;
    for (const auto& o : j.at("overlaps")) {
      const auto pair = field_as<std::vector<std::size_t>>(o, "pair", "overlap");
      if (pair.size() != 2) throw FormatError("overlap: \"pair\" needs two ids");
      OverlapComponent oc{pair[0], pair[1], o.value("component", 0), {}};
      for (const auto& p : o.at("samples")) oc.samples.push_back(scalar_from_json(p, "overlap sample"));
      overlaps.push_back(std::move(oc));
    }
    std::vector<TripleComponent> triples;
    for (const auto& t : j.value("triples", Json::array())) {
      TripleComponent tc{field_as<std::array<std::size_t, 3>>(t, "ids", "triple"), t.value("component", 0), {}};
      for (const auto& s : t.at("samples")) {
        TripleSample ts{scalar_from_json(s.at("point"), "triple point"), {}};
        const auto& refs = s.at("refs");
        if (!refs.is_array() || refs.size() != 3) throw FormatError("triple sample: needs three refs");
        for (std::size_t r = 0; r < 3; ++r)
          ts.refs[r] = {refs[r].at(0).get<std::size_t>(), refs[r].at(1).get<std::size_t>(), refs[r].at(2).get<bool>()};
        tc.samples.push_back(ts);
      }
      triples.push_back(std::move(tc));
    }
    std::vector<OrientedFace> faces;
    for (const auto& f : j.value("faces", Json::array()))
      faces.push_back({field_as<std::array<std::size_t, 3>>(f, "ids", "face"), f.value("sign", 1), f.value("component", 0)});
    return CoverNerve(std::move(sets), std::move(overlaps), std::move(triples), std::move(faces));
  } catch (const Json::exception& e) {
    throw FormatError(std::string("nerve: ") + e.what());
  }
}

inline Json transitions_to_json(const TransitionData& t) {
  Json values = Json::array();
  for (const auto& path : t.values) {
    Json row = Json::array();
    for (const Scalar z : path) row.push_back(to_json(z));
    values.push_back(std::move(row));
  }
  return {{"field", to_string(t.field)}, {"values", std::move(values)}};
}

inline TransitionData transitions_from_json(const Json& j) {
  TransitionData t;
  t.field = j.contains("field") ? field_from_string(field_as<std::string>(j, "field", "transitions")) : Field::complex;
  if (!j.contains("values") || !j.at("values").is_array()) throw FormatError("transitions: missing \"values\"");
  for (const auto& path : j.at("values")) {
    if (!path.is_array()) throw FormatError("transitions: each overlap needs an array of values");
    std::vector<Scalar> row;
    for (const auto& z : path) row.push_back(scalar_from_json(z, "transition value"));
    t.values.push_back(std::move(row));
  }
  return t;
}

/// {"nerve": ..., "transitions": ...}
struct BundleFile {
  CoverNerve nerve;
  TransitionData transitions;
};

inline Json bundle_to_json(const CoverNerve& nerve, const TransitionData& t) {
  return {{"nerve", nerve_to_json(nerve)}, {"transitions", transitions_to_json(t)}};
}

inline BundleFile bundle_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("nerve") || !j.contains("transitions"))
    throw FormatError("bundle: expected {\"nerve\": ..., \"transitions\": ...}");
  return {nerve_from_json(j.at("nerve")), transitions_from_json(j.at("transitions"))};
}

// ---------------------------------------------------------------------------
// reports

inline std::string ids_name(const CoverNerve& nerve, const std::array<std::size_t, 3>& ids) {
  return "(" + nerve.set_ids()[ids[0]] + "," + nerve.set_ids()[ids[1]] + "," + nerve.set_ids()[ids[2]] + ")";
}

inline Json to_json(const TransitionCocycleReport& r) {
  return {{"max_deviation", r.max_deviation}, {"pass", r.pass}, {"worst_key", r.worst_key}};
}

inline Json to_json(const EquatorTheoremReport& r) {
  return {{"giraud_evaluation", to_json(r.giraud_evaluation)},
          {"equator_holonomy", to_json(r.equator_holonomy)},
          {"equal", r.equal},
          {"max_deviation", r.max_deviation}};
}

inline const char* to_string(Chart c) { return c == Chart::slope ? "slope" : "inverse_slope"; }

inline Json to_json(const HolonomyResult& h) {
  Json jumps = Json::array();
  for (const auto& j : h.jumps)
    jumps.push_back({{"sample", j.sample},
                     {"from", to_string(j.from)},
                     {"to", to_string(j.to)},
                     {"slope", j.slope},
                     {"factor", maslov::to_string(j.factor)}});
  return {{"value", to_json(h.value.to_complex())}, {"display", maslov::to_string(h.value)}, {"jumps", std::move(jumps)}};
}

inline Json to_json(const GerbeClassReport& r, const CoverNerve& nerve) {
  Json faces = Json::array();
  for (const auto& f : r.faces)
    faces.push_back({{"face", ids_name(nerve, f.ids)}, {"chern", f.chern}, {"giraud", to_json(f.giraud.to_complex())}});
  return {{"degree", r.degree},
          {"nerve", {{"sets", r.set_count},
                     {"overlaps", nerve.overlaps().size()},
                     {"triples", nerve.triples().size()},
                     {"overlap_samples", r.overlap_samples},
                     {"triple_samples", r.triple_samples},
                     {"faces", nerve.faces().size()}}},
          {"transition_check", to_json(r.transition_check)},
          {"faces", std::move(faces)},
          {"chern_evaluation", r.chern_evaluation},
          {"giraud_evaluation", to_json(r.giraud_evaluation.to_complex())},
          {"theorem", to_json(r.theorem)},
          {"equator_maslov_holonomy", to_json(r.equator_maslov)},
          {"equator_maslov_power", to_json(r.equator_maslov_power.to_complex())},
          {"pointwise_mod2", r.pointwise_mod2},
          {"structure_group_relation", r.structure_group_relation},
          {"consistent", r.consistent},
          {"value", to_json(r.value)}};
}

}  // namespace maslov::io
