#include "troplef/io.hpp"

#include <fstream>

namespace troplef {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw Error("ParseError", "field '" + field + "': " + what);
}

int get_int(const json& j, const std::string& field) {
    if (!j.is_number_integer()) fail(field, "expected an integer");
    return j.get<int>();
}

std::vector<std::vector<Int>> get_vertices(const json& j, int ambient, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array of coordinate rows");
    std::vector<std::vector<Int>> out;
    for (const auto& row : j) {
        if (!row.is_array() || int(row.size()) != ambient) fail(field, "coordinate row of wrong width");
        std::vector<Int> v;
        for (const auto& x : row) {
            if (!x.is_number_integer()) fail(field, "coordinates must be integers");
            v.push_back(Int(x.get<long>()));
        }
        out.push_back(v);
    }
    return out;
}

std::vector<std::pair<int, std::vector<int>>> get_cells(const json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array of cells");
    std::vector<std::pair<int, std::vector<int>>> out;
    for (const auto& c : j) {
        if (!c.contains("dim") || !c.contains("vertices")) fail(field, "cell needs 'dim' and 'vertices'");
        std::vector<int> verts;
        for (const auto& v : c["vertices"]) verts.push_back(get_int(v, field + ".vertices"));
        out.push_back({get_int(c["dim"], field + ".dim"), verts});
    }
    return out;
}

}  // namespace

ParsedInput from_fixture(const Fixture& f) {
    ParsedInput in;
    in.tropical = f.tropical;
    in.setup = f.setup;
    in.complex = f.complex;
    return in;
}

ParsedInput parse_complex_json(const json& j, bool strict) {
    if (!j.contains("mode")) fail("mode", "missing");
    std::string mode = j["mode"].get<std::string>();
    ParsedInput in;
    if (mode == "cw") {
        if (!j.contains("cells") || !j.contains("incidence")) fail("cells", "cw mode needs cells and incidence");
        std::vector<int> dims;
        std::map<int, int> id_to_index;
        for (const auto& c : j["cells"]) {
            int id = get_int(c.value("id", json(int(dims.size()))), "cells.id");
            if (id_to_index.count(id)) fail("cells.id", "duplicate id " + std::to_string(id));
            id_to_index[id] = int(dims.size());
            dims.push_back(get_int(c["dim"], "cells.dim"));
        }
        std::vector<SignedCover> covers;
        for (const auto& t : j["incidence"]) {
            if (!t.is_array() || t.size() != 3) fail("incidence", "expected [face, cell, sign] triples");
            int sign = get_int(t[2], "incidence.sign");
            if (sign != 1 && sign != -1) fail("incidence.sign", "must be +1 or -1");
            auto fi = id_to_index.find(get_int(t[0], "incidence.face"));
            auto ci = id_to_index.find(get_int(t[1], "incidence.cell"));
            if (fi == id_to_index.end() || ci == id_to_index.end()) fail("incidence", "unknown cell id");
            covers.push_back({fi->second, ci->second, sign});
        }
        in.complex = build_abstract_cw(dims, covers);
        return in;
    }
    if (mode != "polyhedral") fail("mode", "expected 'polyhedral' or 'cw'");
    if (!j.contains("ambient_rank")) fail("ambient_rank", "missing");
    int ambient = get_int(j["ambient_rank"], "ambient_rank");
    auto vertices = get_vertices(j.value("vertices", json::array()), ambient, "vertices");
    Complex k = build_polyhedral(ambient, vertices, get_cells(j.value("cells", json::array()), "cells"), strict);
    if (!j.contains("polytope")) {
        in.complex = std::move(k);
        return in;
    }
    Complex p = build_polyhedral(ambient, vertices,
                                 get_cells(j["polytope"].value("cells", json::array()), "polytope.cells"),
                                 strict);
    if (j.contains("carrier")) {
        const auto& car = j["carrier"];
        if (!car.is_array() || int(car.size()) != k.num_cells())
            fail("carrier", "expected one polytope face index per cell");
        for (int c = 0; c < k.num_cells(); ++c) {
            int idx = get_int(car[c], "carrier");
            if (idx < 0 || idx >= p.num_cells()) fail("carrier", "face index out of range");
            k.cells[c].carrier = idx;
        }
    }
    in.tropical = true;
    in.setup = make_setup(std::move(p), std::move(k));
    return in;
}

ParsedInput load_input(const std::string& source, bool strict) {
    if (source.rfind("fixture:", 0) == 0) return from_fixture(fixture(source.substr(8)));
    std::ifstream f(source);
    if (!f) throw Error("ParseError", "cannot open '" + source + "'");
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw Error("ParseError", std::string("invalid JSON: ") + e.what());
    }
    return parse_complex_json(j, strict);
}

ordered_json emit_complex(const ParsedInput& in) {
    ordered_json out;
    const Complex& k = in.k();
    if (!k.polyhedral) {
        out["mode"] = "cw";
        ordered_json cells = ordered_json::array();
        for (int c = 0; c < k.num_cells(); ++c) cells.push_back({{"id", c}, {"dim", k.cells[c].dim}});
        out["cells"] = cells;
        ordered_json inc = ordered_json::array();
        for (int c = 0; c < k.num_cells(); ++c)
            for (const auto& [f, s] : k.faces[c]) inc.push_back({f, c, s});
        out["incidence"] = inc;
        return out;
    }
    out["mode"] = "polyhedral";
    out["ambient_rank"] = k.ambient;
    ordered_json verts = ordered_json::array();
    for (const auto& v : k.vertex_coords) {
        ordered_json row = ordered_json::array();
        for (const auto& x : v) row.push_back(x.get_si());
        verts.push_back(row);
    }
    out["vertices"] = verts;
    auto cell_array = [](const Complex& c) {
        ordered_json cells = ordered_json::array();
        for (int i = 0; i < c.num_cells(); ++i)
            cells.push_back({{"dim", c.cells[i].dim}, {"vertices", c.cells[i].vertices}});
        return cells;
    };
    out["cells"] = cell_array(k);
    if (in.tropical) {
        out["polytope"] = ordered_json{{"cells", cell_array(in.setup.p)}};
        ordered_json car = ordered_json::array();
        for (int c = 0; c < k.num_cells(); ++c) car.push_back(k.cells[c].carrier);
        out["carrier"] = car;
    }
    return out;
}

Cosheaf parse_cosheaf_json(const json& j, const Complex& base) {
    Cosheaf f;
    f.base = &base;
    if (!j.contains("ranks")) fail("ranks", "missing");
    if (int(j["ranks"].size()) != base.num_cells()) fail("ranks", "one rank per cell required");
    for (const auto& r : j["ranks"]) f.rank.push_back(get_int(r, "ranks"));
    f.embedding.assign(base.num_cells(), std::nullopt);
    for (const auto& e : j.value("extensions", json::array())) {
        int face = get_int(e["face"], "extensions.face");
        int cell = get_int(e["cell"], "extensions.cell");
        if (face < 0 || face >= base.num_cells() || cell < 0 || cell >= base.num_cells())
            fail("extensions", "unknown cell id");
        const auto& rows = e["matrix"];
        IntMatrix m(f.rank[cell], f.rank[face]);
        if (int(rows.size()) != m.rows()) fail("extensions.matrix", "wrong row count");
        for (int i = 0; i < m.rows(); ++i) {
            if (int(rows[i].size()) != m.cols()) fail("extensions.matrix", "wrong column count");
            for (int c = 0; c < m.cols(); ++c) m.at(i, c) = Int(rows[i][c].get<long>());
        }
        f.ext[{face, cell}] = m;
    }
    for (int c = 0; c < base.num_cells(); ++c)
        for (const auto& [fe, s] : base.faces[c])
            if (!f.ext.count({fe, c})) fail("extensions", "missing extension for a cover pair");
    f.validate();
    return f;
}

mpq_class parse_rational(const std::string& s) {
    try {
        mpq_class q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw Error("ParseError", "invalid rational '" + s + "'");
    }
}

DualInput parse_dual_json(const json& j) {
    DualInput d;
    if (!j.contains("ambient_rank")) fail("ambient_rank", "missing");
    d.n = get_int(j["ambient_rank"], "ambient_rank");
    d.points = get_vertices(j.value("points", json::array()), d.n, "points");
    for (const auto& l : j.value("lifts", json::array())) {
        if (l.is_null()) d.lifts.push_back(std::nullopt);
        else if (l.is_number_integer()) d.lifts.push_back(mpq_class(l.get<long>()));
        else if (l.is_string()) d.lifts.push_back(parse_rational(l.get<std::string>()));
        else fail("lifts", "expected integer, rational string or null");
    }
    return d;
}

}  // namespace troplef
