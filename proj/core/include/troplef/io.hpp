#pragma once

#include <json.hpp>
#include <string>

#include "troplef/fixtures.hpp"

namespace troplef {

/// A parsed input: either a bare complex or a full tropical setup.
struct ParsedInput {
    bool tropical = false;
    TropicalSetup setup;
    Complex complex;

    const Complex& k() const { return tropical ? setup.k : complex; }
};

ParsedInput from_fixture(const Fixture& f);

/// Parse the JSON complex format. Throws Error("ParseError") naming the field,
/// or forwards validation errors with cell ids.
ParsedInput parse_complex_json(const nlohmann::json& j, bool strict = false);

/// Load from a file path or a "fixture:<name>" reference.
ParsedInput load_input(const std::string& source, bool strict = false);

/// Canonical serialization; emit(parse(emit(x))) == emit(x) byte for byte.
nlohmann::ordered_json emit_complex(const ParsedInput& in);

/// Cosheaf file: {"ranks": [...], "extensions": [{"face": f, "cell": c,
/// "matrix": [[...]]}]}. The result is validated on the given base.
Cosheaf parse_cosheaf_json(const nlohmann::json& j, const Complex& base);

/// Tropical-dual input: {"ambient_rank": n, "points": [[...]], "lifts": [...]}
/// with lifts given as integers, "a/b" strings, or null for absent points.
struct DualInput {
    int n = 0;
    std::vector<std::vector<Int>> points;
    std::vector<std::optional<mpq_class>> lifts;
};
DualInput parse_dual_json(const nlohmann::json& j);

mpq_class parse_rational(const std::string& s);

}  // namespace troplef
