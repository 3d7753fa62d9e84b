#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "afspec/cli.hpp"

using namespace afspec;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run afspec_run(std::vector<std::string> args) {
  args.insert(args.begin(), "afspec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(AFSPEC_DATA_DIR) + "/" + name; }

std::string golden(const std::string& name) { return cli::read_file(std::string(AFSPEC_GOLDEN_DIR) + "/" + name); }

}  // namespace

TEST_CASE("af build on the vee poset", "[cli]") {
  const auto r = afspec_run({"af", "build", data("vee.poset")});
  REQUIRE(r.code == 0);
  CHECK(r.out == golden("af_build_vee.txt"));
  CHECK(r.out.find("n0 = 3\n") == 0);
  CHECK(r.out.find("level 4: 1 4 1") != std::string::npos);
  CHECK(r.out.find("level 6: 1 8 1") != std::string::npos);
}

TEST_CASE("af build emits parseable JSON and DOT", "[cli]") {
  const auto json = afspec_run({"af", "build", data("vee.poset"), "--json"});
  REQUIRE(json.code == 0);
  CHECK(parse_diagram(json.out) == build_diagram(parse_poset(cli::read_file(data("vee.poset")))));
  const auto dot = afspec_run({"af", "build", data("vee.poset"), "--dot", "--levels", "4"});
  REQUIRE(dot.code == 0);
  CHECK(dot.out.rfind("digraph", 0) == 0);
}

TEST_CASE("prim of the stored vee diagram is the vee", "[cli]") {
  const auto r = afspec_run({"af", "prim", data("vee-algebra.json")});
  REQUIRE(r.code == 0);
  CHECK(r.out == golden("prim_vee.txt"));
  const auto prim = parse_poset(r.out);
  CHECK(prim.size() == 3);
  CHECK(prim.covers().size() == 2);
  CHECK(is_isomorphic(prim, parse_poset(cli::read_file(data("vee.poset")))));
}

TEST_CASE("homology of the six-point sphere", "[cli]") {
  const auto r = afspec_run({"homology", data("p6s2.poset")});
  REQUIRE(r.code == 0);
  CHECK(r.out == golden("homology_p6s2.txt"));
  CHECK(r.out == "H0 = Z   betti 1\nH1 = 0   betti 0\nH2 = Z   betti 1\n");
}

TEST_CASE("quotient of the covered circle", "[cli]") {
  const auto r = afspec_run({"quotient", data("circle-cover.space"), "--rename", "n=x1,s=x3,e=x2,w=x4"});
  REQUIRE(r.code == 0);
  CHECK(r.out == golden("quotient_circle.txt"));
  CHECK(is_isomorphic(parse_poset(r.out), parse_poset(cli::read_file(data("p4s1.poset")))));
}

TEST_CASE("bl construct on the circle", "[cli]") {
  const auto r = afspec_run({"bl", "construct", data("p4s1.poset")});
  REQUIRE(r.code == 0);
  CHECK(r.out == golden("bl_circle.txt"));
  CHECK(r.out.find(golden("circle_fused.txt")) != std::string::npos);

  const auto literal = std::vector<std::string>{"bl", "construct", data("p4s1.poset"), "--defector", "x1=1,x2=1,x3=0,x4=0"};
  const auto refused = afspec_run(literal);
  CHECK(refused.code == 1);
  CHECK(refused.err.find("error: InvalidDefector:") == 0);
  auto with_override = literal;
  with_override.push_back("--allow-zero-maximal");
  const auto forced = afspec_run(with_override);
  CHECK(forced.code == 0);
  CHECK(forced.out.find("A_x4 = 0\n") != std::string::npos);
}

TEST_CASE("bl equiv finds the one-move vee pair", "[cli]") {
  const auto yes = afspec_run({"bl", "equiv", data("vee.poset"), "--d1", "q=0,p1=1,p2=1", "--d2", "q=1,p1=1,p2=1"});
  REQUIRE(yes.code == 0);
  CHECK(yes.out == "equivalent: yes\n  q=0,p1=1,p2=1\n  q=1,p1=1,p2=1\n");
  const auto no = afspec_run({"bl", "equiv", data("vee.poset"), "--d1", "q=0,p1=1,p2=1", "--d2", "q=0,p1=2,p2=1",
                              "--bound", "3"});
  REQUIRE(no.code == 0);
  CHECK(no.out.rfind("equivalent: not found within bound 3", 0) == 0);
}

TEST_CASE("poset subcommands", "[cli]") {
  const auto show = afspec_run({"poset", "show", data("p4s1.poset")});
  REQUIRE(show.code == 0);
  CHECK(parse_poset(show.out) == parse_poset(cli::read_file(data("p4s1.poset"))));
  CHECK(show.out.find("# minimal: {x1, x3}") != std::string::npos);
  const auto closed = afspec_run({"poset", "closed", data("vee.poset")});
  CHECK(closed.out == "{}\n{p1}\n{p2}\n{p1, p2}\n{p1, p2, q}\n");
  const auto autos = afspec_run({"poset", "autos", data("p4s1.poset")});
  CHECK(autos.out.rfind("4 automorphisms\n", 0) == 0);
  const auto chains = afspec_run({"poset", "chains", data("p4s1.poset")});
  CHECK(chains.out == "x1 < x2\nx1 < x4\nx3 < x2\nx3 < x4\n");
  CHECK(afspec_run({"poset", "dot", data("vee.poset")}).out.rfind("digraph", 0) == 0);
}

TEST_CASE("diagram subcommands", "[cli]") {
  CHECK(afspec_run({"af", "validate", data("penrose.json")}).out == "valid\n");
  CHECK(afspec_run({"af", "commutative", data("vee.poset")}).out == "false\n");
  CHECK(afspec_run({"af", "commutative", data("penrose.json")}).out == "false\n");
  const auto cantor = afspec_run({"af", "prim", data("cantor.json")});
  REQUIRE(cantor.code == 0);
  CHECK(cantor.out.find("zero ideal primitive: no") != std::string::npos);
  const auto ideals = afspec_run({"af", "ideals", data("vee-algebra.json")});
  CHECK(ideals.out.find("not primitive") != std::string::npos);
  CHECK(afspec_run({"af", "dot", data("penrose.json"), "--levels", "3"}).code == 0);
}

TEST_CASE("exit codes", "[cli]") {
  CHECK(afspec_run({}).code == 2);
  CHECK(afspec_run({"frobnicate"}).code == 2);
  CHECK(afspec_run({"poset", "show", data("missing.poset")}).code == 2);
  CHECK(afspec_run({"af", "build", data("vee.poset"), "--dot", "--json"}).code == 2);
  CHECK(afspec_run({"--help"}).code == 0);

  const auto bad = afspec_run({"af", "build", data("penrose.json")});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("error: ParseError:") == 0);
  CHECK(afspec_run({"af", "ideals", data("cantor.json")}).code == 1);
  CHECK(afspec_run({"bl", "construct", data("vee.poset"), "--defector", "q=0,zz=1"}).code == 1);
}

TEST_CASE("config files and ascii output", "[cli]") {
  CHECK(cli::load_config(R"({"limits": {"closed_sets": 2}, "ascii": true})").limits.closed_sets == 2);
  CHECK(cli::load_config(R"({"ascii": true})").ascii);
  CHECK_THROWS_AS(cli::load_config(R"({"limits": {"closed_sets": 0}})"), cli::UsageProblem);
  CHECK_THROWS_AS(cli::load_config(R"({"colour": 1})"), cli::UsageProblem);
  CHECK_THROWS_AS(cli::load_config("{"), cli::UsageProblem);

  const auto path = std::string(AFSPEC_BINARY_DIR) + "/tiny-limits.json";
  std::ofstream(path) << R"({"limits": {"closed_sets": 2}})";
  const auto limited = afspec_run({"--config", path, "poset", "closed", data("vee.poset")});
  CHECK(limited.code == 1);
  CHECK(limited.err.find("TooLarge") != std::string::npos);

  const auto ascii = afspec_run({"--ascii", "bl", "construct", data("vee.poset")});
  CHECK(ascii.out.find("C*I(lq) (+) C*I(lq) (+) K(lq (+) lq)\n") != std::string::npos);
  for (unsigned char c : ascii.out) CHECK(c < 128);
  CHECK(cli::ascii_fallback("ℂI1 ⊕ K(a ⊗ b)") == "CI1 (+) K(a (x) b)");
}

TEST_CASE("output is deterministic", "[cli]") {
  for (const auto& args : std::vector<std::vector<std::string>>{{"bl", "construct", data("p6s2.poset")},
                                                                {"af", "build", data("p4s1.poset")},
                                                                {"af", "ideals", data("p4s1.poset")}}) {
    const auto a = afspec_run(args), b = afspec_run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}
