#include "troplef/cosheaf.hpp"

#include <algorithm>

#include "troplef/fpfield.hpp"

namespace troplef {

namespace {

IntMatrix reduce_ring(const IntMatrix& m, const CoeffRing& ring) {
    if (ring.tag != CoeffRing::MODP) return m;
    return fp_to_int(fp_from(m, ring.p));
}

bool is_subcomplex(const Complex& k, const std::vector<int>& ids) {
    return smallest_subcomplex(k, ids) == ids;
}

}  // namespace

// ---------------------------------------------------------------------------
// Cosheaf

const IntMatrix& Cosheaf::elementary(int face, int cell) const {
    auto it = ext.find({face, cell});
    if (it == ext.end()) throw Error("NotAdjacent", "no elementary extension for that pair");
    return it->second;
}

IntMatrix Cosheaf::extension(int face, int cell) const {
    base->check_cell(face);
    base->check_cell(cell);
    if (!base->leq(face, cell)) throw Error("NotAdjacent", "extension requires face <= cell");
    if (face == cell) return IntMatrix::identity(rank[cell]);
    // walk any descending chain of covers; functoriality makes it path-independent
    int cur = cell;
    IntMatrix acc = IntMatrix::identity(rank[cell]);
    while (cur != face) {
        int next = -1;
        for (const auto& [f, s] : base->faces[cur])
            if (base->leq(face, f)) { next = f; break; }
        acc = acc * elementary(next, cur);
        cur = next;
    }
    return reduce_ring(acc, ring);
}

void Cosheaf::validate() const {
    const Complex& k = *base;
    if (int(rank.size()) != k.num_cells()) throw Error("UngradedPoset", "cosheaf rank table size mismatch");
    for (int c = 0; c < k.num_cells(); ++c)
        for (const auto& [f, s] : k.faces[c]) {
            const IntMatrix& m = elementary(f, c);
            if (m.rows() != rank[c] || m.cols() != rank[f])
                throw Error("FunctorialityViolation", "extension matrix shape mismatch");
        }
    for (int c = 0; c < k.num_cells(); ++c) {
        if (k.cells[c].dim < 2) continue;
        std::map<int, std::optional<IntMatrix>> composite;
        for (const auto& [f, s1] : k.faces[c])
            for (const auto& [g, s2] : k.faces[f]) {
                IntMatrix m = reduce_ring(elementary(f, c) * elementary(g, f), ring);
                auto& slot = composite[g];
                if (!slot) slot = m;
                else if (*slot != m)
                    throw Error("FunctorialityViolation", "square over cells " + std::to_string(g) +
                                                              " <= " + std::to_string(c) + " does not commute");
            }
    }
}

void CosheafMorphism::validate() const {
    const Complex& k = *source.base;
    if (int(component.size()) != k.num_cells())
        throw Error("NaturalityViolation", "component table size mismatch");
    for (int c = 0; c < k.num_cells(); ++c) {
        if (component[c].rows() != source.rank[c] || component[c].cols() != target.rank[c])
            throw Error("NaturalityViolation", "component shape mismatch at cell " + std::to_string(c));
        for (const auto& [f, s] : k.faces[c]) {
            IntMatrix lhs = reduce_ring(source.elementary(f, c) * component[f], source.ring);
            IntMatrix rhs = reduce_ring(component[c] * target.elementary(f, c), source.ring);
            if (lhs != rhs)
                throw Error("NaturalityViolation", "components do not commute with extensions over (" +
                                                       std::to_string(f) + "," + std::to_string(c) + ")");
        }
    }
}

// ---------------------------------------------------------------------------
// DihomCosheaf

const IntMatrix& DihomCosheaf::first(int from, int to) const {
    auto it = ext_first.find({from, to});
    if (it == ext_first.end()) throw Error("NotAdjacent", "no raise-first extension for that pair");
    return it->second;
}

const IntMatrix& DihomCosheaf::second(int from, int to) const {
    auto it = ext_second.find({from, to});
    if (it == ext_second.end()) throw Error("NotAdjacent", "no lower-second extension for that pair");
    return it->second;
}

void DihomCosheaf::validate() const {
    const Complex& k = *base;
    if (rank.size() != ix.cells.size()) throw Error("UngradedPoset", "dihomologic rank table size mismatch");
    for (size_t i = 0; i < ix.cells.size(); ++i) {
        auto [lo, hi] = ix.cells[i];
        for (const auto& [m, s] : k.cofaces[lo]) {
            if (!k.leq(m, hi)) continue;
            const IntMatrix& e = first(int(i), ix.at(m, hi));
            if (e.rows() != rank[i] || e.cols() != rank[ix.at(m, hi)])
                throw Error("FunctorialityViolation", "raise-first matrix shape mismatch");
        }
        for (const auto& [m, s] : k.faces[hi]) {
            if (!k.leq(lo, m)) continue;
            const IntMatrix& e = second(int(i), ix.at(lo, m));
            if (e.rows() != rank[i] || e.cols() != rank[ix.at(lo, m)])
                throw Error("FunctorialityViolation", "lower-second matrix shape mismatch");
        }
    }
    for (size_t i = 0; i < ix.cells.size(); ++i) {
        auto [lo, hi] = ix.cells[i];
        // mixed square: raise the first coordinate, lower the second
        for (const auto& [l2, s1] : k.cofaces[lo]) {
            if (!k.leq(l2, hi)) continue;
            for (const auto& [h2, s2] : k.faces[hi]) {
                if (!k.leq(l2, h2)) continue;
                int a = ix.at(l2, hi), b = ix.at(lo, h2), d = ix.at(l2, h2);
                IntMatrix p1 = reduce_ring(first(int(i), a) * second(a, d), ring);
                IntMatrix p2 = reduce_ring(second(int(i), b) * first(b, d), ring);
                if (p1 != p2)
                    throw Error("FunctorialityViolation", "dihomologic elementary square does not commute");
            }
        }
        // two raises reaching the same pseudo-cell must agree
        for (const auto& [m1, s1] : k.cofaces[lo]) {
            if (!k.leq(m1, hi)) continue;
            for (const auto& [l2, s2] : k.cofaces[m1]) {
                if (!k.leq(l2, hi)) continue;
                std::optional<IntMatrix> seen;
                for (const auto& [mid, s3] : k.cofaces[lo]) {
                    if (!k.leq(mid, l2) || !k.leq(mid, hi)) continue;
                    IntMatrix m =
                        reduce_ring(first(int(i), ix.at(mid, hi)) * first(ix.at(mid, hi), ix.at(l2, hi)), ring);
                    if (!seen) seen = m;
                    else if (*seen != m)
                        throw Error("FunctorialityViolation", "raise-first squares do not commute");
                }
            }
        }
        // and two lowers
        for (const auto& [m1, s1] : k.faces[hi]) {
            if (!k.leq(lo, m1)) continue;
            for (const auto& [h2, s2] : k.faces[m1]) {
                if (!k.leq(lo, h2)) continue;
                std::optional<IntMatrix> seen;
                for (const auto& [mid, s3] : k.faces[hi]) {
                    if (!k.leq(lo, mid) || !k.leq(h2, mid)) continue;
                    IntMatrix m =
                        reduce_ring(second(int(i), ix.at(lo, mid)) * second(ix.at(lo, mid), ix.at(lo, h2)), ring);
                    if (!seen) seen = m;
                    else if (*seen != m)
                        throw Error("FunctorialityViolation", "lower-second squares do not commute");
                }
            }
        }
    }
}

void DihomMorphism::validate() const {
    const auto& ix = source.ix;
    const Complex& k = *source.base;
    if (component.size() != ix.cells.size()) throw Error("NaturalityViolation", "component table size mismatch");
    for (size_t i = 0; i < ix.cells.size(); ++i) {
        if (component[i].rows() != source.rank[i] || component[i].cols() != target.rank[i])
            throw Error("NaturalityViolation", "component shape mismatch at pseudo-cell " + std::to_string(i));
        auto [lo, hi] = ix.cells[i];
        for (const auto& [m, s] : k.cofaces[lo]) {
            if (!k.leq(m, hi)) continue;
            int j = ix.at(m, hi);
            if (reduce_ring(source.first(int(i), j) * component[j], source.ring) !=
                reduce_ring(component[i] * target.first(int(i), j), source.ring))
                throw Error("NaturalityViolation", "components do not commute with raise-first extensions");
        }
        for (const auto& [m, s] : k.faces[hi]) {
            if (!k.leq(lo, m)) continue;
            int j = ix.at(lo, m);
            if (reduce_ring(source.second(int(i), j) * component[j], source.ring) !=
                reduce_ring(component[i] * target.second(int(i), j), source.ring))
                throw Error("NaturalityViolation", "components do not commute with lower-second extensions");
        }
    }
}

// ---------------------------------------------------------------------------
// Sheaf

const IntMatrix& Sheaf::elementary(int face, int cell) const {
    auto it = res.find({face, cell});
    if (it == res.end()) throw Error("NotAdjacent", "no restriction for that pair");
    return it->second;
}

void Sheaf::validate() const {
    const Complex& k = *base;
    for (int c = 0; c < k.num_cells(); ++c) {
        if (k.cells[c].dim < 2) continue;
        std::map<int, std::optional<IntMatrix>> composite;
        for (const auto& [f, s1] : k.faces[c])
            for (const auto& [g, s2] : k.faces[f]) {
                IntMatrix m = reduce_ring(elementary(g, f) * elementary(f, c), ring);
                auto& slot = composite[g];
                if (!slot) slot = m;
                else if (*slot != m) throw Error("FunctorialityViolation", "sheaf square does not commute");
            }
    }
}

// ---------------------------------------------------------------------------
// constructions

Cosheaf constant_cosheaf(const Complex& k, int rank, CoeffRing ring) {
    Cosheaf f;
    f.base = &k;
    f.ring = ring;
    f.rank.assign(k.num_cells(), rank);
    f.embedding.assign(k.num_cells(), std::nullopt);
    for (int c = 0; c < k.num_cells(); ++c)
        for (const auto& [fe, s] : k.faces[c]) f.ext[{fe, c}] = IntMatrix::identity(rank);
    return f;
}

Sheaf constant_sheaf(const Complex& k, int rank, CoeffRing ring) {
    Sheaf g;
    g.base = &k;
    g.ring = ring;
    g.rank.assign(k.num_cells(), rank);
    for (int c = 0; c < k.num_cells(); ++c)
        for (const auto& [fe, s] : k.faces[c]) g.res[{fe, c}] = IntMatrix::identity(rank);
    return g;
}

Cosheaf characteristic_cosheaf(const Complex& k, const std::vector<int>& sub1,
                               const std::vector<int>& sub2, int rank, CoeffRing ring) {
    if (!is_subcomplex(k, sub1) || !is_subcomplex(k, sub2))
        throw Error("NotNested", "arguments must be subcomplexes");
    if (!std::includes(sub1.begin(), sub1.end(), sub2.begin(), sub2.end()))
        throw Error("NotNested", "second subcomplex not contained in the first");
    std::vector<char> supp(k.num_cells(), 0);
    for (int c : sub1) supp[c] = 1;
    for (int c : sub2) supp[c] = 0;
    Cosheaf f;
    f.base = &k;
    f.ring = ring;
    f.rank.assign(k.num_cells(), 0);
    f.embedding.assign(k.num_cells(), std::nullopt);
    for (int c = 0; c < k.num_cells(); ++c) f.rank[c] = supp[c] ? rank : 0;
    for (int c = 0; c < k.num_cells(); ++c)
        for (const auto& [fe, s] : k.faces[c])
            f.ext[{fe, c}] = (supp[c] && supp[fe]) ? IntMatrix::identity(rank) : IntMatrix(f.rank[c], f.rank[fe]);
    return f;
}

std::pair<Cosheaf, CosheafMorphism> localize(const Cosheaf& f, int e) {
    const Complex& k = *f.base;
    k.check_cell(e);
    Cosheaf loc;
    loc.base = f.base;
    loc.ring = f.ring;
    loc.rank.assign(k.num_cells(), 0);
    loc.embedding.assign(k.num_cells(), std::nullopt);
    for (int c = 0; c < k.num_cells(); ++c)
        if (k.leq(e, c)) {
            loc.rank[c] = f.rank[c];
            loc.embedding[c] = f.embedding[c];
        }
    for (int c = 0; c < k.num_cells(); ++c)
        for (const auto& [fe, s] : k.faces[c]) {
            if (loc.rank[c] > 0 && loc.rank[fe] > 0) loc.ext[{fe, c}] = f.elementary(fe, c);
            else loc.ext[{fe, c}] = IntMatrix(loc.rank[c], loc.rank[fe]);
        }
    CosheafMorphism proj;
    proj.source = f;
    proj.target = loc;
    proj.component.resize(k.num_cells());
    for (int c = 0; c < k.num_cells(); ++c)
        proj.component[c] =
            loc.rank[c] > 0 ? IntMatrix::identity(f.rank[c]) : IntMatrix(f.rank[c], 0);
    return {loc, proj};
}

CosheafMorphism localization_morphism(const Cosheaf& f, int e, int eprime) {
    const Complex& k = *f.base;
    k.check_cell(e);
    k.check_cell(eprime);
    if (!k.leq(e, eprime)) throw Error("NotAdjacent", "localisation morphism requires e <= e'");
    CosheafMorphism m;
    m.source = localize(f, e).first;
    m.target = localize(f, eprime).first;
    m.component.resize(k.num_cells());
    for (int c = 0; c < k.num_cells(); ++c)
        m.component[c] = m.target.rank[c] > 0 ? IntMatrix::identity(m.source.rank[c])
                                              : IntMatrix(m.source.rank[c], 0);
    return m;
}

Cosheaf subdivide_cosheaf(const Cosheaf& f, const Complex& k, const Complex& kprime) {
    Cosheaf g;
    g.base = &kprime;
    g.ring = f.ring;
    g.rank.assign(kprime.num_cells(), 0);
    g.embedding.assign(kprime.num_cells(), std::nullopt);
    for (int c = 0; c < kprime.num_cells(); ++c) {
        int car = kprime.cells[c].carrier;
        if (car < 0 || car >= k.num_cells())
            throw Error("MissingCarrier", "cell " + std::to_string(c) + " has no carrier");
        g.rank[c] = f.rank[car];
        g.embedding[c] = f.embedding[car];
    }
    for (int c = 0; c < kprime.num_cells(); ++c)
        for (const auto& [fe, s] : kprime.faces[c]) {
            int cc = kprime.cells[c].carrier, cf = kprime.cells[fe].carrier;
            g.ext[{fe, c}] = (cc == cf) ? IntMatrix::identity(g.rank[c]) : f.extension(cf, cc);
        }
    return g;
}

DihomCosheaf dihom_subdivide(const Cosheaf& f, const Complex& k) {
    DihomCosheaf g;
    g.base = &k;
    g.ix = dihom_index(k);
    g.ring = f.ring;
    g.rank.resize(g.ix.cells.size());
    g.embedding.resize(g.ix.cells.size());
    for (size_t i = 0; i < g.ix.cells.size(); ++i) {
        g.rank[i] = f.rank[g.ix.cells[i].hi];
        g.embedding[i] = f.embedding[g.ix.cells[i].hi];
    }
    for (size_t i = 0; i < g.ix.cells.size(); ++i) {
        auto [lo, hi] = g.ix.cells[i];
        for (const auto& [m, s] : k.cofaces[lo])
            if (k.leq(m, hi)) g.ext_first[{int(i), g.ix.at(m, hi)}] = IntMatrix::identity(g.rank[i]);
        for (const auto& [m, s] : k.faces[hi])
            if (k.leq(lo, m)) g.ext_second[{int(i), g.ix.at(lo, m)}] = f.elementary(m, hi);
    }
    return g;
}

Cosheaf fix_first_localize(const DihomCosheaf& f, int e) {
    const Complex& k = *f.base;
    k.check_cell(e);
    Cosheaf g;
    g.base = &k;
    g.ring = f.ring;
    g.rank.assign(k.num_cells(), 0);
    g.embedding.assign(k.num_cells(), std::nullopt);
    for (int c = 0; c < k.num_cells(); ++c)
        if (k.leq(e, c)) {
            int i = f.ix.at(e, c);
            g.rank[c] = f.rank[i];
            g.embedding[c] = f.embedding[i];
        }
    for (int c = 0; c < k.num_cells(); ++c)
        for (const auto& [fe, s] : k.faces[c]) {
            if (g.rank[c] > 0 && g.rank[fe] > 0)
                g.ext[{fe, c}] = f.second(f.ix.at(e, c), f.ix.at(e, fe));
            else
                g.ext[{fe, c}] = IntMatrix(g.rank[c], g.rank[fe]);
        }
    return g;
}

Cosheaf tensor_ring(const Cosheaf& f, const CoeffRing& ring) {
    Cosheaf g = f;
    g.ring = ring;
    for (auto& [key, m] : g.ext) m = reduce_ring(m, ring);
    return g;
}

DihomCosheaf tensor_ring(const DihomCosheaf& f, const CoeffRing& ring) {
    DihomCosheaf g = f;
    g.ring = ring;
    for (auto& [key, m] : g.ext_first) m = reduce_ring(m, ring);
    for (auto& [key, m] : g.ext_second) m = reduce_ring(m, ring);
    return g;
}

// ---------------------------------------------------------------------------
// cokernel (field coefficients)

namespace {

struct CokernelData {
    int rank = 0;
    IntMatrix proj;  // target rank x rank
    IntMatrix lift;  // rank x target rank
};

CokernelData cokernel_data(const IntMatrix& component, int target_rank, const CoeffRing& ring) {
    CokernelData out;
    if (ring.tag == CoeffRing::RAT) {
        // integral model of the rational cokernel: quotient by the saturation
        Lattice sat = saturation(row_span(component, target_rank));
        QuotientBasis q = quotient_basis(sat);
        out.rank = q.rank;
        out.proj = q.proj;
        out.lift = q.lift;
        return out;
    }
    FpMatrix img = fp_from(component, ring.p);
    std::vector<int> pivots = fp_rref(img);
    std::vector<char> is_pivot(target_rank, 0);
    for (int p : pivots) is_pivot[p] = 1;
    std::vector<int> free_cols;
    for (int j = 0; j < target_rank; ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    out.rank = int(free_cols.size());
    out.proj = IntMatrix(target_rank, out.rank);
    out.lift = IntMatrix(out.rank, target_rank);
    for (int i = 0; i < target_rank; ++i) {
        std::vector<long long> v(target_rank, 0);
        v[i] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) {
            long long c = v[pivots[r]];
            if (c == 0) continue;
            for (int j = 0; j < target_rank; ++j)
                v[j] = ((v[j] - c * img.at(int(r), j)) % ring.p + ring.p) % ring.p;
        }
        for (int j = 0; j < out.rank; ++j) out.proj.at(i, j) = long(v[free_cols[j]]);
    }
    for (int j = 0; j < out.rank; ++j) out.lift.at(j, free_cols[j]) = 1;
    return out;
}

}  // namespace

Cosheaf morphism_cokernel(const CosheafMorphism& f) {
    if (f.source.ring.tag == CoeffRing::INT)
        throw Error("IntegerCokernelUnsupported", "cokernel requires field coefficients");
    f.validate();
    const Complex& k = *f.source.base;
    std::vector<CokernelData> data(k.num_cells());
    Cosheaf q;
    q.base = f.target.base;
    q.ring = f.target.ring;
    q.rank.assign(k.num_cells(), 0);
    q.embedding.assign(k.num_cells(), std::nullopt);
    for (int c = 0; c < k.num_cells(); ++c) {
        data[c] = cokernel_data(f.component[c], f.target.rank[c], f.source.ring);
        q.rank[c] = data[c].rank;
    }
    for (int c = 0; c < k.num_cells(); ++c)
        for (const auto& [fe, s] : k.faces[c])
            q.ext[{fe, c}] = reduce_ring(data[c].lift * f.target.elementary(fe, c) * data[fe].proj, q.ring);
    q.validate();
    return q;
}

}  // namespace troplef
