#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "troplef/commands.hpp"

using namespace troplef;

namespace {

std::string golden_path(const std::string& name) { return std::string(GOLDEN_DIR) + "/" + name; }

void compare_golden(const std::string& name, const std::string& got) {
    if (std::getenv("REGEN_GOLDEN")) {
        std::ofstream out(golden_path(name), std::ios::binary);
        out << got;
        return;
    }
    std::ifstream in(golden_path(name), std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing golden file ", name);
    std::string want((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK_MESSAGE(got == want, "output drifted from golden file ", name);
}

std::string write_temp(const std::string& name, const std::string& body) {
    std::string path = "/tmp/troplef_test_" + name;
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("validate") {
    CmdOptions opt;
    compare_golden("validate_triangle.txt", cmd_validate("fixture:triangle-p112", opt).report.text);
    compare_golden("validate_octahedron.txt", cmd_validate("fixture:octahedron", opt).report.text);
    opt.strict = true;
    CHECK(cmd_validate("fixture:square-22", opt).exit_code == 0);
}

TEST_CASE("subdivide") {
    CmdOptions opt;
    compare_golden("subdivide_segment_barycentric.json",
                   cmd_subdivide("fixture:segment", "barycentric", opt).report.json_text());
    compare_golden("subdivide_segment_dihomologic.json",
                   cmd_subdivide("fixture:segment", "dihomologic", opt).report.json_text());
    CHECK_THROWS_AS(cmd_subdivide("fixture:segment", "nope", opt), Error);
}

TEST_CASE("homology") {
    CmdOptions opt;
    compare_golden("homology_octahedron_Z.txt", cmd_homology("fixture:octahedron", "constant", opt).report.text);
    opt.ring = CoeffRing::Fp(2);
    compare_golden("homology_octahedron_F2.json",
                   cmd_homology("fixture:octahedron", "constant", opt).report.json_text());
    // cosheaf from a file: the constant rank-one cosheaf on the segment fixture
    std::string path = write_temp("cosheaf.json", R"({
      "ranks": [1,1,1,1,1],
      "extensions": [
        {"face":0,"cell":3,"matrix":[[1]]}, {"face":1,"cell":3,"matrix":[[1]]},
        {"face":1,"cell":4,"matrix":[[1]]}, {"face":2,"cell":4,"matrix":[[1]]}
      ]
    })");
    opt.ring = CoeffRing::Z();
    CmdResult r = cmd_homology("fixture:segment", path, opt);
    compare_golden("homology_segment_file.txt", r.report.text);
}

TEST_CASE("tropical invariants and diamonds") {
    CmdOptions opt;
    compare_golden("invariants_triangle.txt", cmd_tropical_invariants("fixture:triangle-p112", opt).report.text);
    compare_golden("invariants_cube.txt", cmd_tropical_invariants("fixture:cube-222", opt).report.text);
    opt.threads = 2;
    compare_golden("hodge_triangle_Z.json", cmd_tropical_hodge("fixture:triangle-p112", opt).report.json_text());
    compare_golden("hodge_cube_Z.txt", cmd_tropical_hodge("fixture:cube-222", opt).report.text);
}

TEST_CASE("tropical dual") {
    CmdOptions opt;
    std::string path = write_temp("points.json", R"({
      "ambient_rank": 2,
      "points": [[0,0],[1,0],[0,1],[0,2]],
      "lifts": [0, 0, 1, 0]
    })");
    CmdResult r = cmd_tropical_dual(path, "", opt);
    compare_golden("dual_triangle.json", r.report.json_text());
    // the emitted complex parses back to the same canonical form
    ParsedInput round = parse_complex_json(nlohmann::json::parse(r.report.json_text()));
    CHECK(nlohmann::ordered_json(emit_complex(round)).dump() == r.report.data.dump());
    // --lift overrides the file
    CmdResult r2 = cmd_tropical_dual(path, "0,0,0,0", opt);
    CHECK(r2.report.data["cells"].size() < r.report.data["cells"].size());
}

TEST_CASE("verify pl") {
    CmdOptions opt;
    compare_golden("pl_octahedron.txt", cmd_verify_pl("fixture:octahedron", "constant", 0, opt).report.text);
    opt.ring = CoeffRing::Q();
    CmdResult r = cmd_verify_pl("fixture:triangle-p112", "f0", 1, opt);
    CHECK(r.exit_code == 0);
    // the hypothesis failure is an error, reported with the offending cell
    opt.ring = CoeffRing::Z();
    CHECK_THROWS_WITH_AS(cmd_verify_pl("fixture:triangle-p112", "f0", 1, opt),
                         doctest::Contains("HypothesisFailed"), Error);
}

TEST_CASE("lefschetz") {
    CmdOptions opt;
    opt.ring = CoeffRing::Fp(3);
    compare_golden("lefschetz_triangle_F3.txt", cmd_lefschetz("fixture:triangle-p112", opt).report.text);
    CmdResult ok = cmd_lefschetz("fixture:triangle-p112", opt);
    CHECK(ok.exit_code == 0);
}

TEST_CASE("parse errors carry the field") {
    CmdOptions opt;
    std::string bad = write_temp("bad_sign.json", R"({
      "mode": "cw",
      "cells": [{"id":0,"dim":0},{"id":1,"dim":0},{"id":2,"dim":1}],
      "incidence": [[0,2,1],[1,2,2]]
    })");
    CHECK_THROWS_WITH_AS(cmd_validate(bad, opt), doctest::Contains("incidence.sign"), Error);
    std::string garbled = write_temp("garbled.json", "{ not json");
    CHECK_THROWS_WITH_AS(cmd_validate(garbled, opt), doctest::Contains("ParseError"), Error);
}

TEST_CASE("fixture shapes") {
    Fixture tri = fixture("triangle-p112");
    CHECK(tri.setup.k.cells_of_dim(0).size() == 4);
    CHECK(tri.setup.k.cells_of_dim(1).size() == 5);
    CHECK(tri.setup.k.cells_of_dim(2).size() == 2);

    Fixture cube = fixture("cube-222");
    CHECK(cube.setup.k.cells_of_dim(0).size() == 16);
    CHECK(cube.setup.k.cells_of_dim(3).size() == 5);

    Fixture sq = fixture("square-22");
    CHECK(sq.setup.k.cells_of_dim(2).size() == 4);

    Fixture seg = fixture("segment");
    CHECK(seg.setup.k.cells_of_dim(1).size() == 2);

    CHECK(fixture("simplex-3").setup.k.cells_of_dim(3).size() == 1);
    CHECK(fixture("octahedron").complex.cells_of_dim(2).size() == 8);
    CHECK_THROWS_WITH_AS(fixture("nope"), doctest::Contains("UnknownFixture"), Error);
}

TEST_CASE("fixtures round-trip byte-identically") {
    for (const auto& name : fixture_names()) {
        ParsedInput in = from_fixture(fixture(name));
        std::string once = emit_complex(in).dump();
        ParsedInput again = parse_complex_json(nlohmann::json::parse(once));
        CHECK(emit_complex(again).dump() == once);
    }
}

TEST_CASE("reports are byte-stable across runs") {
    CmdOptions opt;
    opt.threads = 2;
    std::string a = cmd_tropical_hodge("fixture:square-22", opt).report.json_text();
    std::string b = cmd_tropical_hodge("fixture:square-22", opt).report.json_text();
    CHECK(a == b);
}

TEST_SUITE_END();
