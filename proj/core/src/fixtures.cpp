#include "troplef/fixtures.hpp"

namespace troplef {

namespace {

std::vector<std::vector<Int>> pts(const std::vector<std::vector<int>>& v) {
    std::vector<std::vector<Int>> out;
    for (const auto& p : v) out.push_back(std::vector<Int>(p.begin(), p.end()));
    return out;
}

Fixture segment_fixture() {
    Fixture f;
    f.name = "segment";
    f.tropical = true;
    auto coords = pts({{0}, {1}, {2}});
    Complex p = build_polyhedral_closure(1, coords, {{0, 2}});
    Complex k = build_polyhedral_closure(1, coords, {{0, 1}, {1, 2}});
    f.setup = make_setup(std::move(p), std::move(k));
    return f;
}

Fixture octahedron_fixture() {
    Fixture f;
    f.name = "octahedron";
    auto coords = pts({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
    std::vector<std::vector<int>> tris;
    for (int x : {0, 1})
        for (int y : {2, 3})
            for (int z : {4, 5}) tris.push_back({x, y, z});
    f.complex = build_polyhedral_closure(3, coords, tris);
    return f;
}

Fixture triangle_p112_fixture() {
    Fixture f;
    f.name = "triangle-p112";
    f.tropical = true;
    auto coords = pts({{0, 0}, {1, 0}, {0, 1}, {0, 2}});
    Complex p = build_polyhedral_closure(2, coords, {{0, 1, 3}});
    Complex k = build_polyhedral_closure(2, coords, {{0, 1, 2}, {1, 2, 3}});
    f.setup = make_setup(std::move(p), std::move(k));
    return f;
}

Fixture square_22_fixture() {
    Fixture f;
    f.name = "square-22";
    f.tropical = true;
    auto coords = pts({{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {0, 2}, {2, 2}});
    Complex p = build_polyhedral_closure(2, coords, {{0, 2, 5, 6}});
    Complex k = build_polyhedral_closure(2, coords, {{0, 1, 3, 4}, {3, 4, 5}, {4, 5, 6}, {1, 2, 4, 6}});
    f.setup = make_setup(std::move(p), std::move(k));
    return f;
}

Fixture cube_222_fixture() {
    Fixture f;
    f.name = "cube-222";
    f.tropical = true;
    std::vector<std::vector<int>> raw;
    for (int x : {0, 2})
        for (int y : {0, 2})
            for (int z : {0, 2}) raw.push_back({x, y, z});
    // the rotated square swept along y
    for (int y : {0, 2})
        for (auto xz : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {1, 2}, {2, 1}})
            raw.push_back({xz.first, y, xz.second});
    auto coords = pts(raw);
    auto id_of = [&](int x, int y, int z) {
        for (size_t i = 0; i < raw.size(); ++i)
            if (raw[i][0] == x && raw[i][1] == y && raw[i][2] == z) return int(i);
        throw Error("UnknownCell", "missing fixture coordinate");
    };
    std::vector<std::vector<int>> tops;
    {
        std::vector<int> prism;
        for (int y : {0, 2})
            for (auto xz : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {1, 2}, {2, 1}})
                prism.push_back(id_of(xz.first, y, xz.second));
        tops.push_back(prism);
        std::vector<std::vector<std::pair<int, int>>> corners = {
            {{0, 0}, {1, 0}, {0, 1}}, {{2, 0}, {1, 0}, {2, 1}}, {{2, 2}, {1, 2}, {2, 1}}, {{0, 2}, {0, 1}, {1, 2}}};
        for (const auto& tri : corners) {
            std::vector<int> cells;
            for (int y : {0, 2})
                for (auto xz : tri) cells.push_back(id_of(xz.first, y, xz.second));
            tops.push_back(cells);
        }
    }
    std::vector<int> cube;
    for (int i = 0; i < 8; ++i) cube.push_back(i);
    Complex p = build_polyhedral_closure(3, coords, {cube});
    Complex k = build_polyhedral_closure(3, coords, tops);
    f.setup = make_setup(std::move(p), std::move(k));
    return f;
}

Fixture simplex_fixture(int n) {
    Fixture f;
    f.name = "simplex-" + std::to_string(n);
    f.tropical = true;
    std::vector<std::vector<int>> raw(1, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 1;
        raw.push_back(e);
    }
    auto coords = pts(raw);
    std::vector<int> all(n + 1);
    for (int i = 0; i <= n; ++i) all[i] = i;
    Complex p = build_polyhedral_closure(n, coords, {all});
    Complex k = build_polyhedral_closure(n, coords, {all});
    f.setup = make_setup(std::move(p), std::move(k));
    return f;
}

}  // namespace

Fixture fixture(const std::string& name) {
    if (name == "segment") return segment_fixture();
    if (name == "octahedron") return octahedron_fixture();
    if (name == "triangle-p112") return triangle_p112_fixture();
    if (name == "square-22") return square_22_fixture();
    if (name == "cube-222") return cube_222_fixture();
    if (name.rfind("simplex-", 0) == 0) {
        try {
            size_t pos = 0;
            int n = std::stoi(name.substr(8), &pos);
            if (pos == name.size() - 8 && n >= 1 && n <= 3) return simplex_fixture(n);
        } catch (const std::logic_error&) {}
    }
    throw Error("UnknownFixture", "no fixture named '" + name + "'");
}

std::vector<std::string> fixture_names() {
    return {"segment", "octahedron", "triangle-p112", "square-22", "cube-222", "simplex-1", "simplex-2",
            "simplex-3"};
}

}  // namespace troplef
