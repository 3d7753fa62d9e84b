#pragma once

// Command-line driver.  run() is the whole program; tools/afspec.cpp only
// forwards argv and the standard streams.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "afspec/algebra_expr.hpp"
#include "afspec/behncke_leptin.hpp"
#include "afspec/bratteli.hpp"
#include "afspec/errors.hpp"
#include "afspec/homology.hpp"
#include "afspec/limits.hpp"
#include "afspec/poset.hpp"
#include "afspec/poset_to_af.hpp"
#include "afspec/quotient.hpp"

namespace afspec::cli {

enum ExitCode { Ok = 0, DomainError = 1, UsageError = 2 };

struct Config {
  Limits limits;
  bool ascii = false;
};

class UsageProblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageProblem("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// {"limits": {"closed_sets": 20, ...}, "ascii": false}
inline Config load_config(const std::string& text, Config base = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageProblem(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageProblem("config must be a JSON object");
  static const std::map<std::string, std::size_t Limits::*> fields{
      {"closed_sets", &Limits::closed_sets},   {"automorphisms", &Limits::automorphisms},
      {"period_nodes", &Limits::period_nodes}, {"simplices", &Limits::simplices},
      {"truncation_depth", &Limits::truncation_depth}};
  for (const auto& [key, value] : j.items()) {
    if (key == "ascii") {
      if (!value.is_boolean()) throw UsageProblem("config 'ascii' must be true or false");
      base.ascii = value.get<bool>();
    } else if (key == "limits") {
      if (!value.is_object()) throw UsageProblem("config 'limits' must be an object");
      for (const auto& [name, v] : value.items()) {
        const auto it = fields.find(name);
        if (it == fields.end()) throw UsageProblem("unknown limit '" + name + "'");
        if (!v.is_number_integer() || v.get<long long>() <= 0)
          throw UsageProblem("limit '" + name + "' must be a positive integer");
        base.limits.*(it->second) = v.get<std::size_t>();
      }
    } else {
      throw UsageProblem("unknown config key '" + key + "'");
    }
  }
  return base;
}

/// Plain-ASCII spelling of the symbols used in algebra output.
inline std::string ascii_fallback(std::string s) {
  const std::vector<std::pair<std::string, std::string>> table{
      {"ℂ", "C"}, {" ⊕ ", " (+) "}, {" ⊗ ", " (x) "}, {"·", "*"}, {"⊕", "(+)"}, {"⊗", "(x)"}};
  for (const auto& [from, to] : table)
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
      s.replace(pos, from.size(), to);
  return s;
}

// ---------------------------------------------------------------------------
// Reports

inline std::string poset_show(const Poset& p) {
  std::string out = to_text(p);
  out += "# " + std::to_string(p.size()) + " points, " + std::to_string(p.covers().size()) + " covers\n";
  out += "# minimal: " + format_set(p, minimal_points(p)) + "\n";
  out += "# maximal: " + format_set(p, maximal_points(p)) + "\n";
  return out;
}

inline std::string poset_closed(const Poset& p, const Limits& limits) {
  std::string out;
  for (const auto& s : all_closed_sets(p, limits)) out += format_set(p, s) + "\n";
  return out;
}

inline std::string poset_chains(const Poset& p) {
  std::string out;
  for (const auto& c : maximal_chains(p)) {
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? " < " : "") + p.label(c[i]);
    out += "\n";
  }
  return out;
}

inline std::string poset_autos(const Poset& p, const Limits& limits) {
  const auto autos = automorphisms(p, limits);
  std::string out = std::to_string(autos.size()) + " automorphisms\n";
  for (const auto& perm : autos) {
    for (std::size_t x = 0; x < perm.size(); ++x) out += (x ? " " : "") + p.label(x) + "->" + p.label(perm[x]);
    out += "\n";
  }
  return out;
}

inline std::string quotient_report(const CoveredSpace& space, const std::map<std::string, std::string>& renames) {
  const auto q = quotient_poset(space);
  const auto p = renames.empty() ? q.poset : relabel(q.poset, renames);
  std::string out = to_text(p);
  for (std::size_t c = 0; c < p.size(); ++c) {
    std::vector<std::string> pts;
    for (std::size_t x = 0; x < space.size(); ++x)
      if (q.projection[x] == c) pts.push_back(space.points()[x]);
    out += "# " + p.label(c) + " = {";
    for (std::size_t i = 0; i < pts.size(); ++i) out += (i ? ", " : "") + pts[i];
    out += "}\n";
  }
  out += "# " + std::to_string(topology_of(space).size()) + " opens generated by the cover\n";
  return out;
}

inline std::string matrix_rows(const EdgeMatrix& m, const std::string& indent) {
  std::string out;
  for (const auto& row : m) {
    out += indent;
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? " " : "") + std::to_string(row[j]);
    out += "\n";
  }
  return out;
}

inline std::string dims_rows(const BratteliDiagram& d) {
  std::string out;
  for (std::size_t n = 0; n < d.levels.size(); ++n) {
    out += "  level " + std::to_string(n + 1) + ":";
    for (auto v : d.levels[n]) out += " " + std::to_string(v);
    out += "\n";
  }
  return out;
}

/// n0, the stable partition table, the stable edge matrix and the
/// dimensions of the first `levels` levels.
inline std::string af_build_report(const Poset& p, const AfConstruction& c, std::size_t levels) {
  std::string out = "n0 = " + std::to_string(c.n0) + "\n";
  out += "stored levels = " + std::to_string(c.last) + ", level " + std::to_string(c.last) + " repeats\n\n";
  out += "stable partition:\n" + stable_partition_table(p, c) + "\n";
  out += "stable edges (row: node at n+1, column: node at n):\n" + matrix_rows(c.diagram.edges.back(), "  ") + "\n";
  out += "dimensions:\n" + dims_rows(unfold(c.diagram, levels));
  return out;
}

inline std::string validate_report(const ValidationReport& r) {
  std::string out;
  for (const auto& e : r.errors) out += "error: " + e + "\n";
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  if (r.ok()) out += "valid\n";
  return out;
}

inline std::string ideals_report(const BratteliDiagram& d, const Limits& limits) {
  std::string out;
  std::size_t prim = 0;
  for (const auto& m : enumerate_ideals(d, limits)) {
    out += format_mark(m);
    if (is_full(m))
      out += "   full\n";
    else if (is_primitive(d, m))
      out += "   primitive I" + std::to_string(prim++) + "\n";
    else
      out += "   not primitive\n";
  }
  return out;
}

inline std::string prim_report(const BratteliDiagram& d, const Limits& limits) {
  if (!d.tail) {
    const auto depth = limits.truncation_depth;
    const auto u = unfold(d, depth);
    const bool zero_primitive = is_primitive(u, empty_mark(u));
    return "# no periodic tail: only the zero ideal is examined, on the first " + std::to_string(depth) +
           " levels\nzero ideal primitive: " + (zero_primitive ? "yes" : "no") + "\n";
  }
  const auto ps = prim_space(d, limits);
  std::string out = to_text(ps.poset);
  for (std::size_t i = 0; i < ps.marks.size(); ++i) out += "# " + ps.poset.label(i) + " = " + format_mark(ps.marks[i]) + "\n";
  return out;
}

inline std::string bl_report(const PosetAlgebra& a, bool expanded) {
  const auto& p = a.poset;
  const RenderOptions opts{false, !expanded};
  std::string out = "defector: " + format_defector(p, a.defector) + "\n";
  if (!positive_on_maximal(p, a.defector)) out += "# the defector vanishes on a maximal point\n";
  out += "\ncomponents:\n" + component_legend(a.hilbert) + "H = " + render(a.hilbert.total) + "\n";
  out += "\ngenerators:\n";
  for (std::size_t x = 0; x < p.size(); ++x) {
    out += "R_" + p.label(x) + " = ";
    if (!a.generators[x]) {
      out += "0\n";
      continue;
    }
    const auto single = AlgebraExpr{{*a.generators[x]}};
    out += render(single, opts) + "   [" + render_indexed(to_components(single, !expanded)) + "]\n";
  }
  out += "\nblocks:\n";
  for (std::size_t x = 0; x < p.size(); ++x)
    out += "A_" + p.label(x) + " = " + render_indexed(to_components(a.blocks[x], false)) + "\n";
  out += "\nalgebra:\n" + render(a.algebra, opts) + "\n";
  out += render_indexed(to_components(a.algebra, !expanded), expanded ? " + " : " ⊕ ") + "\n";
  return out;
}

inline std::string equiv_report(const Poset& p, const EquivalenceResult& r) {
  if (r.verdict == Equivalence::Yes) {
    std::string out = "equivalent: yes\n";
    for (const auto& d : r.path) out += "  " + format_defector(p, d) + "\n";
    return out;
  }
  return "equivalent: not found within bound " + std::to_string(r.bound) + " (" + std::to_string(r.explored) +
         " defectors explored)\n";
}

inline std::map<std::string, std::string> parse_renames(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = std::string(detail::trim(item));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageProblem("rename entries look like old=new, got '" + t + "'");
    out[std::string(detail::trim(t.substr(0, eq)))] = std::string(detail::trim(t.substr(eq + 1)));
  }
  return out;
}

/// A diagram from JSON, or built from a poset file (any other extension).
inline BratteliDiagram load_diagram(const std::string& path, const Limits& limits) {
  const auto text = read_file(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return parse_diagram(text);
  return build_diagram(parse_poset(text), limits);
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite posets, Bratteli diagrams and the C*-algebras they describe"};
  app.name("afspec");
  app.require_subcommand(1);
  std::string config_path;
  bool ascii = false;
  std::optional<std::size_t> depth;
  app.add_option("--config", config_path, "JSON file with limits and output options")->check(CLI::ExistingFile);
  app.add_flag("--ascii", ascii, "ASCII output instead of Unicode symbols");
  app.add_option("--depth", depth, "levels used for diagrams without a periodic tail")->check(CLI::PositiveNumber);

  Config cfg;
  std::string file;
  std::function<std::string()> action;

  auto with_file = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("file", file, what)->required()->check(CLI::ExistingFile);
  };

  auto* poset = app.add_subcommand("poset", "inspect a poset file")->require_subcommand(1);
  auto* p_show = poset->add_subcommand("show", "print the poset");
  auto* p_dot = poset->add_subcommand("dot", "Hasse diagram in DOT");
  auto* p_closed = poset->add_subcommand("closed", "all closed sets");
  auto* p_chains = poset->add_subcommand("chains", "maximal chains");
  auto* p_autos = poset->add_subcommand("autos", "automorphisms");
  for (auto* s : {p_show, p_dot, p_closed, p_chains, p_autos}) with_file(s, "poset file");
  p_show->callback([&] { action = [&] { return poset_show(parse_poset(read_file(file))); }; });
  p_dot->callback([&] { action = [&] { return hasse_dot(parse_poset(read_file(file))); }; });
  p_closed->callback([&] { action = [&] { return poset_closed(parse_poset(read_file(file)), cfg.limits); }; });
  p_chains->callback([&] { action = [&] { return poset_chains(parse_poset(read_file(file))); }; });
  p_autos->callback([&] { action = [&] { return poset_autos(parse_poset(read_file(file)), cfg.limits); }; });

  std::string renames;
  auto* quot = app.add_subcommand("quotient", "T0 quotient of a covered space");
  with_file(quot, "covered-space file");
  quot->add_option("--rename", renames, "old=new,... applied to the quotient's labels");
  quot->callback([&] {
    action = [&] { return quotient_report(parse_covered_space(read_file(file)), parse_renames(renames)); };
  });

  auto* af = app.add_subcommand("af", "Bratteli diagrams")->require_subcommand(1);
  std::optional<std::size_t> levels;
  bool as_dot = false, as_json = false, nonunital = false;
  auto* af_build = af->add_subcommand("build", "diagram of a poset");
  with_file(af_build, "poset file");
  af_build->add_option("--levels", levels, "levels to print")->check(CLI::PositiveNumber);
  auto* fmt = af_build->add_option_group("format");
  fmt->add_flag("--dot", as_dot, "print DOT");
  fmt->add_flag("--json", as_json, "print JSON");
  fmt->require_option(0, 1);
  af_build->callback([&] {
    action = [&] {
      const auto p = parse_poset(read_file(file));
      const auto c = build_construction(p, cfg.limits);
      const auto k = levels.value_or(c.last + 3);
      if (as_json) return to_json(c.diagram).dump(2) + "\n";
      if (as_dot) return diagram_dot(c.diagram, k);
      return af_build_report(p, c, k);
    };
  });
  auto* af_validate = af->add_subcommand("validate", "check shapes and the dimension rule");
  with_file(af_validate, "diagram JSON or poset file");
  af_validate->add_flag("--nonunital", nonunital, "dimension rule violations are warnings");
  auto* af_ideals = af->add_subcommand("ideals", "all ideals of a tailed diagram");
  with_file(af_ideals, "diagram JSON or poset file");
  auto* af_prim = af->add_subcommand("prim", "primitive ideal space");
  with_file(af_prim, "diagram JSON or poset file");
  auto* af_comm = af->add_subcommand("commutative", "is the algebra commutative");
  with_file(af_comm, "diagram JSON or poset file");
  auto* af_dot = af->add_subcommand("dot", "diagram in DOT");
  with_file(af_dot, "diagram JSON or poset file");
  af_dot->add_option("--levels", levels, "levels to draw")->check(CLI::PositiveNumber);
  bool validate_failed = false;
  af_validate->callback([&] {
    action = [&] {
      const auto r = validate(load_diagram(file, cfg.limits), !nonunital);
      validate_failed = !r.ok();
      return validate_report(r);
    };
  });
  af_ideals->callback([&] { action = [&] { return ideals_report(load_diagram(file, cfg.limits), cfg.limits); }; });
  af_prim->callback([&] { action = [&] { return prim_report(load_diagram(file, cfg.limits), cfg.limits); }; });
  af_comm->callback([&] {
    action = [&] { return std::string(is_commutative(load_diagram(file, cfg.limits)) ? "true\n" : "false\n"); };
  });
  af_dot->callback([&] {
    action = [&] { return diagram_dot(load_diagram(file, cfg.limits), levels.value_or(cfg.limits.truncation_depth)); };
  });

  auto* bl = app.add_subcommand("bl", "algebras with a given finite spectrum")->require_subcommand(1);
  std::string defector, d1, d2;
  bool override51 = false, expanded = false;
  std::optional<std::uint64_t> bound;
  auto* bl_construct = bl->add_subcommand("construct", "build A(P,d)");
  with_file(bl_construct, "poset file");
  bl_construct->add_option("--defector", defector, "x=n,... (default: 1 on maximal points, 0 elsewhere)");
  bl_construct->add_flag("--allow-zero-maximal,--override-51", override51, "accept a defector that vanishes on a maximal point");
  bl_construct->add_flag("--expanded", expanded, "list coupled generators part by part");
  bl_construct->callback([&] {
    action = [&] {
      const auto p = parse_poset(read_file(file));
      const auto d = defector.empty() ? canonical_defector(p) : parse_defector(p, defector);
      return bl_report(poset_algebra(p, d, override51), expanded);
    };
  });
  auto* bl_equiv = bl->add_subcommand("equiv", "search for a chain of immediate equivalences");
  with_file(bl_equiv, "poset file");
  bl_equiv->add_option("--d1", d1, "first defector")->required();
  bl_equiv->add_option("--d2", d2, "second defector")->required();
  bl_equiv->add_option("--bound", bound, "largest finite value explored");
  bl_equiv->callback([&] {
    action = [&] {
      const auto p = parse_poset(read_file(file));
      return equiv_report(p, equivalent_defectors(parse_defector(p, d1), parse_defector(p, d2), p, bound, cfg.limits));
    };
  });

  auto* hom = app.add_subcommand("homology", "integral homology of the order complex");
  with_file(hom, "poset file");
  hom->callback([&] {
    action = [&] { return homology_table(homology(parse_poset(read_file(file)), cfg.limits), cfg.ascii); };
  });

  try {
    app.parse(argc, argv);
    if (!config_path.empty()) cfg = load_config(read_file(config_path));
    cfg.ascii = cfg.ascii || ascii;
    if (depth) cfg.limits.truncation_depth = *depth;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return UsageError;
  } catch (const UsageProblem& e) {
    err << "usage error: " << e.what() << "\n";
    return UsageError;
  }

  try {
    auto text = action();
    out << (cfg.ascii ? ascii_fallback(text) : text);
    return validate_failed ? DomainError : Ok;
  } catch (const Error& e) {
    err << "error: " << e.name() << ": " << e.what() << "\n";
    return DomainError;
  } catch (const UsageProblem& e) {
    err << "usage error: " << e.what() << "\n";
    return UsageError;
  }
}

}  // namespace afspec::cli
