#pragma once

// The `maslov` command line. `run` parses argv and dispatches; output goes
// to the given streams so tests can drive it in-process.
//
// Exit codes: 0 success, 1 verification failure, 2 malformed input,
// 3 complex field where a real one is required, 4 route mismatch,
// 5 numerical failure (aliasing, integrality, connectivity).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "maslov/bundles.hpp"
#include "maslov/grassmannian.hpp"
#include "maslov/json_io.hpp"
#include "maslov/verification.hpp"

namespace maslov::cli {

using Json = nlohmann::json;

enum ExitCode : int {
  ok = 0,
  verify_failed = 1,
  bad_input = 2,
  wrong_field = 3,
  route_mismatch = 4,
  numerical = 5,
};

struct Settings {
  std::string input;
  std::string branch = "+i";
  std::uint64_t seed = verify::Options{}.seed;
  std::size_t samples = 720;
  int degree = 1;
  bool json = false;
  // verify
  bool inject_fault = false;
  std::string only;
  // loop
  std::string kind = "rotation";
  int k = 1;
  int fixed_n = 2;
};

inline Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::FormatError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw io::FormatError(path + ": " + e.what());
  }
}

inline BranchConvention parse_branch(const std::string& b) {
  if (b == "+i" || b == "i" || b == "plus") return plus_i_branch();
  if (b == "-i" || b == "minus") return minus_i_branch();
  throw io::FormatError("--branch must be +i or -i");
}

inline int cmd_index(const Settings& s, std::ostream& out) {
  const LagrangianLoop loop = io::loop_from_json(read_json(s.input));
  const long idx = maslov_index(loop);
  if (s.json)
    out << Json{{"index", idx}, {"samples", loop.size()}, {"n", loop.space().n()}}.dump(2) << "\n";
  else
    out << idx << "\n";
  return ok;
}

inline int cmd_holonomy(const Settings& s, std::ostream& out) {
  const LagrangianLoop loop = io::loop_from_json(read_json(s.input));
  const HolonomyResult h = maslov_holonomy_general(loop, parse_branch(s.branch));
  if (s.json) {
    Json j = io::to_json(h);
    j["branch"] = s.branch;
    out << j.dump(2) << "\n";
  } else {
    out << to_string(h.value) << "\n";
  }
  return ok;
}

/// Input: {"field", "n", "L": frame, "L0": frame, "phi": optional n x 2n}.
inline int cmd_section(const Settings& s, std::ostream& out) {
  const Json j = read_json(s.input);
  const SymplecticSpace sp = io::space_from_json(j);
  if (!j.contains("L") || !j.contains("L0")) throw io::FormatError("section: needs \"L\" and \"L0\"");
  const LagrangianFrame L = io::frame_from_json(j.at("L"), sp, "L");
  const LagrangianFrame L0 = io::frame_from_json(j.at("L0"), sp, "L0");
  const SectionValue v = j.contains("phi") ? maslov_section(L, L0, io::matrix_from_json(j.at("phi"), sp.n(), sp.dim(), "phi"))
                                           : maslov_section(L, L0);
  const int defect = transversality_defect(L, L0);
  const bool zero = std::abs(v.value) < 1e-9 * v.scale;
  if (s.json)
    out << Json{{"value", io::to_json(v.value)}, {"scale", v.scale}, {"vanishes", zero}, {"intersection_dim", defect}}
               .dump(2)
        << "\n";
  else
    out << v.value.real() << " " << v.value.imag() << (zero ? " (vanishes, dim " : " (transverse, dim ") << defect
        << ")\n";
  return ok;
}

inline io::BundleFile bundle_input(const Settings& s) {
  if (!s.input.empty()) {
    io::BundleFile b = io::bundle_from_json(read_json(s.input));
    if (s.degree != 1) b.transitions = power(b.transitions, s.degree);
    return b;
  }
  const Cp1MaslovCover cover = build_cp1_maslov_cover(s.samples);
  return {cover.nerve, synthetic_degree_bundle(cover, s.degree)};
}

inline int cmd_chern(const Settings& s, std::ostream& out) {
  const io::BundleFile b = bundle_input(s);
  const TransitionCocycleReport tc = check_transition_cocycle(b.transitions, b.nerve);
  const CechCocycle<IntegerGroup> c = chern_cocycle(lift_logs(b.transitions, b.nerve), b.nerve);
  Json faces = Json::object();
  for (std::size_t k = 0; k < c.values().size(); ++k) faces[b.nerve.triple_name(k)] = c.values()[k];
  Json j{{"transition_check", io::to_json(tc)}, {"cocycle", faces}};
  if (!b.nerve.faces().empty()) j["evaluation"] = evaluate_fundamental(c, b.nerve);
  if (s.json) {
    out << j.dump(2) << "\n";
  } else {
    if (j.contains("evaluation")) out << j["evaluation"].get<long>() << "\n";
    else out << faces.dump() << "\n";
  }
  return tc.pass ? ok : numerical;
}

inline int cmd_giraud(const Settings& s, std::ostream& out) {
  const io::BundleFile b = bundle_input(s);
  const GiraudCocycle g =
      giraud_cocycle_with_residual(sqrt_gerbe_isos(lift_logs(b.transitions, b.nerve), b.nerve), b.nerve);
  Json faces = Json::object();
  for (std::size_t k = 0; k < g.cocycle.values().size(); ++k)
    faces[b.nerve.triple_name(k)] = to_string(g.cocycle.values()[k]);
  Json j{{"cocycle", faces}, {"max_snap_deviation", g.max_snap_deviation}};
  std::optional<RootOfUnity<2>> value;
  if (!b.nerve.faces().empty()) {
    value = evaluate_fundamental(g.cocycle, b.nerve);
    j["evaluation"] = io::to_json(value->to_complex());
  }
  if (s.json) out << j.dump(2) << "\n";
  else out << (value ? to_string(*value) : faces.dump()) << "\n";
  return ok;
}

inline int cmd_gerbe(const Settings& s, std::ostream& out) {
  const GerbeClassReport rep = maslov_gerbe_class(s.degree, s.samples, parse_branch(s.branch));
  const Cp1MaslovCover cover = build_cp1_maslov_cover(s.samples);
  out << io::to_json(rep, cover.nerve).dump(2) << "\n";
  return rep.consistent ? ok : route_mismatch;
}

inline int cmd_verify(const Settings& s, std::ostream& out) {
  verify::Options o;
  o.seed = s.seed;
  o.samples = s.samples;
  o.inject_fault = s.inject_fault;
  const auto reports = verify::run_suite(o, s.only);
  bool all = true;
  Json arr = Json::array();
  for (const auto& r : reports) {
    all = all && r.status != verify::Status::fail;
    arr.push_back(verify::to_json(r));
  }
  if (s.json) {
    out << Json{{"seed", s.seed}, {"samples", s.samples}, {"checks", arr}, {"pass", all}}.dump(2) << "\n";
  } else {
    for (const auto& r : reports) {
      out << (r.status == verify::Status::pass ? "PASS " : r.status == verify::Status::fail ? "FAIL " : "SKIP ")
          << r.id << "  " << r.title;
      if (!r.detail.empty()) out << "  [" << r.detail << "]";
      out << "\n";
    }
    out << (all ? "all checks passed" : "some checks failed") << "\n";
  }
  return all ? ok : verify_failed;
}

/// Writes generated inputs: rotation, sp-graph, constant and direct-sum loops.
inline int cmd_loop(const Settings& s, std::ostream& out) {
  LagrangianLoop loop = [&]() {
    if (s.kind == "rotation") return rotation_line_loop(s.k, s.samples);
    if (s.kind == "sp-graph") return sp_graph_loop(s.samples);
    if (s.kind == "constant") return rotation_line_loop(0, s.samples);
    if (s.kind == "direct-sum") {
      Matrix Z = Matrix::Zero(2 * s.fixed_n, s.fixed_n);
      Z.topRows(s.fixed_n) = Matrix::Identity(s.fixed_n, s.fixed_n);
      return direct_sum_loop(rotation_line_loop(s.k, s.samples),
                             LagrangianFrame(Z, standard_space(s.fixed_n, Field::real)));
    }
    throw io::FormatError("--kind must be rotation, sp-graph, constant or direct-sum");
  }();
  out << io::loop_to_json(loop).dump() << "\n";
  return ok;
}

inline int cmd_cover(const Settings& s, std::ostream& out) {
  const Cp1MaslovCover cover = build_cp1_maslov_cover(s.samples);
  out << io::bundle_to_json(cover.nerve, synthetic_degree_bundle(cover, s.degree)).dump() << "\n";
  return ok;
}

/// Maps library errors to exit codes.
template <class Fn>
int guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const io::FormatError& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return bad_input;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return bad_input;
  } catch (const FieldError& e) {
    err << "error: " << e.what() << "\n";
    return wrong_field;
  } catch (const RouteMismatch& e) {
    err << "error: " << e.what() << "\n";
    return route_mismatch;
  } catch (const InvalidArgument& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return bad_input;
  } catch (const StructuralError& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return bad_input;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return numerical;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Maslov indices, Cech cocycles and the Maslov gerbe"};
  app.require_subcommand(1);
  Settings s;

  auto add_json = [&](CLI::App* c) { c->add_flag("--json", s.json, "JSON output"); };
  auto add_branch = [&](CLI::App* c) {
    c->add_option("--branch", s.branch, "square root of arg on negative slopes: +i or -i")->capture_default_str();
  };
  auto add_samples = [&](CLI::App* c) {
    c->add_option("--samples", s.samples, "samples on equators and generated loops")
        ->capture_default_str()
        ->check(CLI::Range(9, 1000000));
  };
  auto add_degree = [&](CLI::App* c) {
    c->add_option("--degree", s.degree, "tensor power of the bundle")->capture_default_str();
  };

  auto* index = app.add_subcommand("index", "Maslov index of a closed real loop");
  index->add_option("loop", s.input, "loop JSON file")->required();
  add_json(index);

  auto* holonomy = app.add_subcommand("holonomy", "Z4 holonomy of the Maslov line bundle around a real loop");
  holonomy->add_option("loop", s.input, "loop JSON file")->required();
  add_branch(holonomy);
  add_json(holonomy);

  auto* section = app.add_subcommand("section", "determinant section of L against L0");
  section->add_option("pair", s.input, "JSON with field, n, L, L0 and optional phi")->required();
  add_json(section);

  auto* chern = app.add_subcommand("chern", "Chern cocycle and its evaluation");
  chern->add_option("bundle", s.input, "bundle JSON (default: the CP1 Maslov cover)");
  add_degree(chern);
  add_samples(chern);
  add_json(chern);

  auto* giraud = app.add_subcommand("giraud", "Giraud cocycle of the square-root gerbe");
  giraud->add_option("bundle", s.input, "bundle JSON (default: the CP1 Maslov cover)");
  add_degree(giraud);
  add_samples(giraud);
  add_json(giraud);

  auto* gerbe = app.add_subcommand("gerbe", "Maslov gerbe class on Lag(C^2) by both routes");
  add_degree(gerbe);
  add_samples(gerbe);
  add_branch(gerbe);
  add_json(gerbe);

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--seed", s.seed, "random seed")->capture_default_str();
  add_samples(verify);
  add_json(verify);
  verify->add_flag("--inject-fault", s.inject_fault, "perturb one transition value before the Cech check");
  verify->add_option("--only", s.only, "run checks whose id starts with this prefix");

  auto* loop = app.add_subcommand("loop", "write a generated loop as JSON");
  loop->add_option("--kind", s.kind, "rotation, sp-graph, constant or direct-sum")->capture_default_str();
  loop->add_option("--k", s.k, "half-turns of the rotating line")->capture_default_str();
  loop->add_option("--fixed-n", s.fixed_n, "dimension of the fixed summand")->capture_default_str();
  add_samples(loop);

  auto* cover = app.add_subcommand("cover", "write the CP1 cover and transition data as JSON");
  add_degree(cover);
  add_samples(cover);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? ok : bad_input;
  }

  return guarded(
      [&]() -> int {
        if (*index) return cmd_index(s, out);
        if (*holonomy) return cmd_holonomy(s, out);
        if (*section) return cmd_section(s, out);
        if (*chern) return cmd_chern(s, out);
        if (*giraud) return cmd_giraud(s, out);
        if (*gerbe) return cmd_gerbe(s, out);
        if (*verify) return cmd_verify(s, out);
        if (*loop) return cmd_loop(s, out);
        return cmd_cover(s, out);
      },
      err);
}

}  // namespace maslov::cli
