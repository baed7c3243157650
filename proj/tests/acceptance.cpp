// Acceptance suite: one pass/fail line per criterion, details on failure.
// Exits nonzero when any criterion fails.

#include <iostream>
#include <random>
#include <sstream>

#include "troplef/fixtures.hpp"
#include "troplef/io.hpp"

using namespace troplef;

namespace {

int g_failed_criteria = 0;

struct Criterion {
    int id;
    std::string title;
    bool ok = true;
    std::vector<std::string> notes;

    Criterion(int id, std::string title) : id(id), title(std::move(title)) {}

    void check(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
    void info(const std::string& what) { notes.push_back(what); }

    ~Criterion() {
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << title << "\n";
        for (const auto& n : notes) std::cout << "       - " << n << "\n";
        if (!ok) ++g_failed_criteria;
    }
};

GroupStructure z(int r) { return GroupStructure{r, {}}; }
GroupStructure ztor(int r, long t) { return GroupStructure{r, {Int(t)}}; }

std::optional<mpq_class> q(long v) { return mpq_class(v); }

void criterion1() {
    Criterion c(1, "P(1,1,2) invariants: delta(P) = 2, theta(K) = 1");
    Fixture f = fixture("triangle-p112");
    c.check(delta_invariant(f.setup.p) == 2, "delta(P) != 2");
    c.check(theta_complex(f.setup.k) == 1, "theta(K) != 1");
}

void criterion2() {
    Criterion c(2, "cube invariants: delta(P) = 1, theta(K) = 2, theta(rotated square) = 2");
    Fixture f = fixture("cube-222");
    c.check(delta_invariant(f.setup.p) == 1, "delta(P) != 1");
    c.check(theta_complex(f.setup.k) == 2, "theta(K) != 2");
    std::vector<std::vector<Int>> rot{{Int(1), Int(0), Int(0)},
                                      {Int(0), Int(0), Int(1)},
                                      {Int(1), Int(0), Int(2)},
                                      {Int(2), Int(0), Int(1)}};
    c.check(theta_cell(rot, {0, 1, 2, 3}) == 2, "theta(rotated square in the xz-plane) != 2");
}

void criterion3() {
    Criterion c(3, "P(1,1,2) diamonds over Z against the source figure");
    Fixture f = fixture("triangle-p112");
    HodgeDiamond x = hodge_diamond(f.setup, 'X', CoeffRing::Z(), 2);
    HodgeDiamond y = hodge_diamond(f.setup, 'Y', CoeffRing::Z(), 2);
    for (int p = 0; p <= 2; ++p)
        for (int qq = 0; qq <= 2; ++qq) {
            GroupStructure want = (p == qq && p <= 1) ? z(1) : z(0);
            c.check(x.at(p, qq) == want, "X(" + std::to_string(p) + "," + std::to_string(qq) + ") = " +
                                             x.at(p, qq).str() + ", expected " + want.str());
        }
    for (int p = 0; p <= 2; ++p)
        c.check(y.at(p, p) == z(1),
                "Y(" + std::to_string(p) + "," + std::to_string(p) + ") = " + y.at(p, p).str());
    // figure-literal clause: exactly one Z/2 inside the p+q = 1 row of Y
    int row_torsion = 0;
    for (int p = 0; p <= 1; ++p)
        if (!y.at(p, 1 - p).torsion.empty()) ++row_torsion;
    c.check(row_torsion == 1,
            "no Z/2 entry exists in the p+q = 1 row of Y: Y(0,1) = " + y.at(0, 1).str() + ", Y(1,0) = " +
                y.at(1, 0).str() + " (see the decisions ledger: the figure conflicts with the definitions)");
    // computed placement of the unique Z/2 obstruction: the cokernel of the
    // inclusion-induced map, which is not surjective there
    LefschetzReport r = lefschetz_analysis(f.setup, CoeffRing::Z(), 2);
    std::vector<const LefschetzEntry*> defects;
    for (const auto& e : r.entries)
        if (!e.cokernel.torsion.empty()) defects.push_back(&e);
    c.check(defects.size() == 1 && defects[0]->cokernel == ztor(0, 2) && !defects[0]->surjective,
            "expected a unique Z/2 cokernel obstruction");
    if (defects.size() == 1)
        c.info("computed placement of the Z/2: coker(i_{" + std::to_string(defects[0]->p) + "," +
               std::to_string(defects[0]->q) + "}) = " + defects[0]->cokernel.str() + ", map not surjective");
}

void criterion4() {
    Criterion c(4, "cube diamonds over Z against the source figure");
    Fixture f = fixture("cube-222");
    HodgeDiamond x = hodge_diamond(f.setup, 'X', CoeffRing::Z(), 2);
    HodgeDiamond y = hodge_diamond(f.setup, 'Y', CoeffRing::Z(), 2);
    std::vector<GroupStructure> want_x{z(1), z(3), z(2), z(0)};
    for (int p = 0; p <= 3; ++p)
        for (int qq = 0; qq <= 3; ++qq) {
            GroupStructure want = p == qq ? want_x[p] : z(0);
            c.check(x.at(p, qq) == want, "X(" + std::to_string(p) + "," + std::to_string(qq) + ") = " +
                                             x.at(p, qq).str() + ", expected " + want.str());
        }
    std::vector<GroupStructure> want_y{z(1), z(3), z(3), z(1)};
    for (int p = 0; p <= 3; ++p)
        for (int qq = 0; qq <= 3; ++qq) {
            GroupStructure want = p == qq ? want_y[p] : z(0);
            c.check(y.at(p, qq) == want, "Y(" + std::to_string(p) + "," + std::to_string(qq) + ") = " +
                                             y.at(p, qq).str() + ", expected " + want.str());
        }
    LefschetzReport r = lefschetz_analysis(f.setup, CoeffRing::Z(), 2);
    const auto& e11 = r.at(1, 1);
    c.check(e11.cokernel == ztor(0, 2),
            "coker(i_{1,1}) = " + e11.cokernel.str() + ", expected Z/2 (see the decisions ledger)");
    c.info("computed i_{1,1}: " + e11.x_group.str() + " -> " + e11.y_group.str() + ", " + e11.cls() +
           "; integral defects sit at (2,2) [ker " + r.at(2, 2).kernel.str() + ", coker " +
           r.at(2, 2).cokernel.str() + "] and (3,3)");
}

void criterion5() {
    Criterion c(5, "hyperplane-section maps comply over F3 and Q on both fixtures");
    for (std::string name : {std::string("triangle-p112"), std::string("cube-222")}) {
        Fixture f = fixture(name);
        for (auto ring : {CoeffRing::Fp(3), CoeffRing::Q()}) {
            LefschetzReport r = lefschetz_analysis(f.setup, ring, 2);
            c.check(r.compliant, name + " over " + ring.str() + " is not compliant");
            for (const auto& e : r.entries) {
                if (e.p + e.q < r.n - 1)
                    c.check(e.iso(), name + " " + ring.str() + ": i_{" + std::to_string(e.p) + "," +
                                         std::to_string(e.q) + "} is not an isomorphism");
                if (e.p + e.q == r.n - 1)
                    c.check(e.surjective, name + " " + ring.str() + ": i_{" + std::to_string(e.p) + "," +
                                              std::to_string(e.q) + "} is not surjective");
            }
        }
    }
}

void criterion6() {
    Criterion c(6, "h-numbers match the rational diamond diagonal");
    std::vector<std::pair<std::string, std::vector<int>>> want{
        {"segment", {1, 1}}, {"square-22", {1, 2, 1}}, {"cube-222", {1, 3, 3, 1}}, {"triangle-p112", {1, 1, 1}}};
    for (const auto& [name, h] : want) {
        Fixture f = fixture(name);
        HodgeDiamond y = hodge_diamond(f.setup, 'Y', CoeffRing::Q(), 2);
        for (int p = 0; p <= f.setup.n; ++p) {
            c.check(h_number_formula(f.setup.p, p) == h[p],
                    name + ": h_" + std::to_string(p) + " formula value is off");
            for (int qq = 0; qq <= f.setup.n; ++qq) {
                GroupStructure want_g = (p == qq) ? z(h[p]) : z(0);
                c.check(y.at(p, qq) == want_g, name + ": rank H_" + std::to_string(qq) + "(K;F0_" +
                                                   std::to_string(p) + " x Q) = " + y.at(p, qq).str() +
                                                   ", expected " + want_g.str());
            }
        }
    }
}

void criterion7() {
    Criterion c(7, "Poincare-Lefschetz verification");
    // constant integral coefficients on the sphere and on balls
    Fixture oct = fixture("octahedron");
    PlReport r1 = pl_verify(oct.complex, dihom_subdivide(constant_cosheaf(oct.complex, 1), oct.complex), 2);
    c.check(r1.all_equal(), "octahedron with constant Z coefficients");
    c.check(r1.vanishing_above_n, "octahedron: homology above the top degree");

    Fixture seg = fixture("segment");
    PlReport r2 = pl_verify(seg.setup.k, dihom_subdivide(constant_cosheaf(seg.setup.k, 1), seg.setup.k), 2);
    c.check(r2.all_equal(), "segment (ball rel boundary) with constant Z coefficients");

    for (std::string name : {std::string("segment"), std::string("simplex-1"), std::string("simplex-2"),
                             std::string("simplex-3"), std::string("triangle-p112"), std::string("square-22"),
                             std::string("cube-222")}) {
        Fixture f = fixture(name);
        for (int p = 0; p <= f.setup.n; ++p) {
            F1Data d = f1_cosheaf(f.setup, p);
            PlReport r0 = pl_verify(f.setup.k, tensor_ring(d.f0, CoeffRing::Q()), 2);
            c.check(r0.all_equal() && r0.vanishing_above_n,
                    name + " F0_" + std::to_string(p) + " over Q fails");
            PlReport rr1 = pl_verify(f.setup.k, tensor_ring(d.f1, CoeffRing::Q()), 2);
            c.check(rr1.all_equal() && rr1.vanishing_above_n,
                    name + " F1_" + std::to_string(p) + " over Q fails");
        }
    }
}

void criterion8() {
    Criterion c(8, "property suites (exhaustive on fixtures, randomized at small sizes)");
    std::vector<std::string> tropical_names{"segment",   "simplex-1", "simplex-2",    "simplex-3",
                                            "square-22", "cube-222",  "triangle-p112"};
    // dd = 0 and the bicomplex anticommutation on every fixture
    for (const auto& name : fixture_names()) {
        Fixture f = fixture(name);
        DihomCosheaf fd = dihom_subdivide(constant_cosheaf(f.k(), 1), f.k());
        try {
            bicomplex(f.k(), fd).check();
            dihom_chain_complex(f.k(), fd).check();
        } catch (const Error& e) {
            c.check(false, name + std::string(": ") + e.what());
        }
    }
    // DIAMOND sign cancellation: validated on construction; a flipped sign is caught
    {
        Fixture oct = fixture("octahedron");
        std::vector<int> dims;
        std::vector<SignedCover> covers;
        for (int cc = 0; cc < oct.complex.num_cells(); ++cc) {
            dims.push_back(oct.complex.cells[cc].dim);
            for (auto [fe, s] : oct.complex.faces[cc]) covers.push_back({fe, cc, s});
        }
        bool threw = false;
        auto bad = covers;
        bad[7].sign = -bad[7].sign;
        try {
            build_abstract_cw(dims, bad);
        } catch (const Error& e) {
            threw = std::string(e.what()).find("DiamondViolation") != std::string::npos;
        }
        c.check(threw, "a flipped incidence sign was not caught by the diamond validation");
    }
    // Phi block bijectivity and its two commutation identities
    for (std::string name : {std::string("segment"), std::string("triangle-p112"), std::string("square-22"),
                             std::string("octahedron"), std::string("cube-222")}) {
        Fixture f = fixture(name);
        const Complex& k = f.k();
        DihomCosheaf fd = dihom_subdivide(constant_cosheaf(k, 1), k);
        Bicomplex b = bicomplex(k, fd);
        for (int p = 0; p <= k.dim(); ++p)
            for (int qq = p; qq <= k.dim(); ++qq) {
                IntMatrix phi = phi_map(b, p, qq);
                c.check(phi.rows() == b.block_rank(p, qq) && abs(det(phi)) == (phi.rows() ? 1 : 1),
                        "phi is not a signed bijection");
                if (qq > p) {
                    IntMatrix lhs = phi * localized_boundary(k, fd, p, qq);
                    IntMatrix rhs = b.d2_at(p, qq) * phi_map(b, p, qq - 1);
                    if ((qq - p) % 2 != 0) rhs = -rhs;
                    c.check(lhs == rhs, name + ": phi and d2 do not commute at (" + std::to_string(p) + "," +
                                            std::to_string(qq) + ")");
                }
                if (p < qq && p + 1 <= k.dim()) {
                    IntMatrix lhs = b.d1_at(p, qq) * phi_map(b, p + 1, qq);
                    IntMatrix rhs = phi * localized_cochain_step(k, fd, p, qq);
                    c.check(lhs == rhs, name + ": phi and d1 do not commute at (" + std::to_string(p) + "," +
                                            std::to_string(qq) + ")");
                }
            }
    }
    // subdivision and dihomologic-subdivision chain maps are quasi-isomorphisms
    auto expect_iso = [&](const ChainMap& cm, const std::string& what) {
        HomologyMap hm = induced_map(cm);
        for (const auto& d : hm.degree) c.check(d.iso(), what);
    };
    for (std::string name :
         {std::string("segment"), std::string("simplex-2"), std::string("triangle-p112"),
          std::string("square-22"), std::string("octahedron")}) {
        Fixture f = fixture(name);
        Complex sd = barycentric_subdivision(f.k());
        expect_iso(subdivision_chain_map(f.k(), sd, constant_cosheaf(f.k(), 1)),
                   name + ": barycentric subdivision map is not a quasi-isomorphism");
        expect_iso(dihom_subdivision_chain_map(f.k(), constant_cosheaf(f.k(), 1)),
                   name + ": dihomologic subdivision map is not a quasi-isomorphism");
    }
    for (const auto& name : tropical_names) {
        Fixture f = fixture(name);
        expect_iso(dihom_subdivision_chain_map(f.setup.k, constant_cosheaf(f.setup.k, 1)),
                   name + ": dihomologic subdivision map is not a quasi-isomorphism");
        for (int p = 0; p <= std::min(f.setup.n, 2); ++p)
            expect_iso(subdivision_chain_map(f.setup.p, f.setup.k, f0_face_cosheaf(f.setup, p)),
                       name + ": face-to-K subdivision map is not a quasi-isomorphism for F0_" +
                           std::to_string(p));
    }
    // double localization on triangle-p112, every (e, e') pair
    {
        Fixture tri = fixture("triangle-p112");
        const Complex& pi = tri.setup.p;
        const Complex& k = tri.setup.k;
        for (int p = 0; p <= 1; ++p) {
            Cosheaf f = p == 0 ? constant_cosheaf(pi, 1) : f0_face_cosheaf(tri.setup, p);
            Cosheaf fk = subdivide_cosheaf(f, pi, k);
            for (int e = 0; e < pi.num_cells(); ++e) {
                HomologyResult coarse = homology(chain_complex(pi, localize(f, e).first));
                for (int ep = 0; ep < k.num_cells(); ++ep) {
                    if (k.cells[ep].carrier != e) continue;
                    HomologyResult fine = homology(chain_complex(k, localize(fk, ep).first));
                    for (int d = 0; d <= std::max(coarse.top(), fine.top()); ++d)
                        c.check(coarse.group(d) == fine.group(d), "double localization differs on pair (" +
                                                                      std::to_string(e) + "," +
                                                                      std::to_string(ep) + ")");
                }
            }
        }
    }
    // Koszul resolution exactness for independent generating sets (randomized)
    {
        std::mt19937 rng(2024);
        std::uniform_int_distribution<int> pick(-2, 2);
        for (int it = 0; it < 500; ++it) {
            int n = 2 + it % 2, g = 1 + it % std::min(2, n), p = it % (n + 1);
            IntMatrix u = IntMatrix::identity(n);
            for (int step = 0; step < 5; ++step) {
                int a = int(rng() % n), b = int(rng() % n);
                if (a == b) continue;
                Int cc = pick(rng);
                for (int j = 0; j < n; ++j) u.at(a, j) += cc * u.at(b, j);
            }
            std::vector<std::vector<Int>> gens;
            for (int i = 0; i < g; ++i) gens.push_back(u.row(i));
            KoszulComplex kc = koszul_resolution(n, gens, p);
            HomologyResult hr = homology(kc.complex);
            for (int d = 1; d <= hr.top(); ++d)
                c.check(hr.group(d).trivial(), "Koszul complex not exact in positive degrees");
            c.check(hr.group(0) == z(int(binom(n - g, p))), "Koszul H_0 has the wrong rank");
        }
    }
    // contraction pairing identity, exhaustive for n <= 4
    {
        long checked = 0;
        for (int n = 1; n <= 4; ++n)
            for (int r = 0; r <= n; ++r)
                for (int p = 0; p <= std::min(4, n); ++p) {
                    long nr = binom(n, r), np = binom(n, p), nm = binom(n, p - r);
                    for (int oi = 0; oi < nr; ++oi) {
                        std::vector<Int> omega(nr, 0);
                        omega[oi] = 1;
                        IntMatrix cm = contraction_map(omega, r, n, p);
                        for (int vi = 0; vi < np; ++vi)
                            for (int ai = 0; ai < nm; ++ai) {
                                // alpha(omega . v) = (alpha ^ omega)(v) on basis elements
                                const auto& alpha = lex_subsets(n, p - r)[ai];
                                const auto& vv = lex_subsets(n, p)[vi];
                                const auto& om = lex_subsets(n, r)[oi];
                                std::vector<int> merged = alpha;
                                bool overlap = false;
                                for (int x : om) {
                                    if (std::find(merged.begin(), merged.end(), x) != merged.end()) {
                                        overlap = true;
                                        break;
                                    }
                                    merged.push_back(x);
                                }
                                Int rhs = 0;
                                if (!overlap) {
                                    std::vector<int> sorted = merged;
                                    std::sort(sorted.begin(), sorted.end());
                                    if (sorted == vv) {
                                        long inv = 0;
                                        for (int x : om)
                                            for (int y : alpha)
                                                if (y > x) ++inv;
                                        rhs = inv % 2 ? -1 : 1;
                                    }
                                }
                                c.check(cm.at(vi, ai) == rhs, "contraction pairing identity fails");
                                ++checked;
                            }
                    }
                }
        c.info("contraction pairing identity checked on " + std::to_string(checked) + " basis triples");
    }
    // theta_triangle = theta_cell on every integer triangle in [0,4]^2
    {
        std::vector<std::vector<Int>> grid;
        for (int x = 0; x <= 4; ++x)
            for (int y = 0; y <= 4; ++y) grid.push_back({Int(x), Int(y)});
        long count = 0;
        for (size_t a = 0; a < grid.size(); ++a)
            for (size_t b = a + 1; b < grid.size(); ++b)
                for (size_t cc = b + 1; cc < grid.size(); ++cc) {
                    std::vector<int> ids{int(a), int(b), int(cc)};
                    if (affine_rank(grid, ids) != 2) continue;
                    ++count;
                    if (theta_triangle(grid, ids) != theta_cell(grid, ids))
                        c.check(false, "theta formula mismatch on a triangle");
                }
        c.info("theta cross-validation on " + std::to_string(count) + " triangles");
    }
}

void criterion9() {
    Criterion c(9, "negative controls");
    Fixture tri = fixture("triangle-p112");
    bool hypothesis_failed = false;
    try {
        pl_verify(tri.setup.k, f0_cosheaf(tri.setup, 1), 2);
    } catch (const Error& e) {
        hypothesis_failed = std::string(e.what()).find("HypothesisFailed") != std::string::npos;
    }
    c.check(hypothesis_failed, "pl_verify on F0_1 over Z did not report HypothesisFailed");

    Fixture oct = fixture("octahedron");
    std::vector<int> dims;
    std::vector<SignedCover> covers;
    for (int cc = 0; cc < oct.complex.num_cells(); ++cc) {
        dims.push_back(oct.complex.cells[cc].dim);
        for (auto [fe, s] : oct.complex.faces[cc]) covers.push_back({fe, cc, s});
    }
    covers[11].sign = -covers[11].sign;
    bool caught = false;
    try {
        build_abstract_cw(dims, covers);
    } catch (const Error& e) {
        caught = std::string(e.what()).find("DiamondViolation") != std::string::npos;
    }
    c.check(caught, "a flipped incidence sign slipped past the diamond validation");
}

void criterion10() {
    Criterion c(10, "regular subdivisions from tropical coefficients");
    std::vector<std::vector<Int>> tpoints{{Int(0), Int(0)}, {Int(1), Int(0)}, {Int(0), Int(1)}, {Int(0), Int(2)}};
    TropicalSetup p112 = regular_subdivision(2, tpoints, {q(0), q(0), q(1), q(0)});
    Fixture want = fixture("triangle-p112");
    bool same = p112.k.num_cells() == want.setup.k.num_cells();
    if (same)
        for (int cc = 0; cc < p112.k.num_cells(); ++cc)
            if (p112.k.cells[cc].vertices != want.setup.k.cells[cc].vertices ||
                p112.k.cells[cc].dim != want.setup.k.cells[cc].dim)
                same = false;
    c.check(same, "lifts (0,0,1,0) did not reproduce the triangle-p112 subdivision");

    std::vector<std::vector<Int>> spoints{{Int(0)}, {Int(1)}, {Int(2)}};
    TropicalSetup seg = regular_subdivision(1, spoints, {q(0), q(1), q(0)});
    c.check(seg.k.cells_of_dim(1).size() == 2 && seg.k.cells_of_dim(0).size() == 3,
            "lifts (0,1,0) did not break [0,2] into two segments");

    TropicalSetup triv = regular_subdivision(1, spoints, {q(3), q(3), q(3)});
    c.check(triv.k.cells_of_dim(1).size() == 1, "a trivial lift did not give the trivial subdivision");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (g_failed_criteria > 0) {
        std::cout << g_failed_criteria << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
