#include "troplef/tropical.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <thread>

#include "troplef/fpfield.hpp"

namespace troplef {

namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace

// ---------------------------------------------------------------------------
// carriers and setup validation

void assign_carriers(const Complex& faces, Complex& sub) {
    if (faces.vertex_coords != sub.vertex_coords)
        throw Error("MissingCarrier", "polytope and subdivision must share one vertex table");
    const int n = faces.ambient;
    int topcell = -1;
    for (int c = 0; c < faces.num_cells(); ++c)
        if (faces.cells[c].dim == n) {
            if (topcell >= 0) throw Error("DimMismatch", "face complex must have a single top cell");
            topcell = c;
        }
    if (topcell < 0) throw Error("DimMismatch", "face complex has no full-dimensional cell");
    auto functionals = polytope_facet_functionals(faces.vertex_coords, faces.cells[topcell].vertices);

    std::map<std::vector<int>, int> face_by_verts;
    for (int c = 0; c < faces.num_cells(); ++c) face_by_verts[faces.cells[c].vertices] = c;

    for (int c = 0; c < sub.num_cells(); ++c) {
        std::vector<const FacetFunctional*> active;
        for (const auto& f : functionals) {
            bool all_on = true;
            for (int vid : sub.cells[c].vertices) {
                Int val = -f.offset;
                for (int j = 0; j < n; ++j) val += f.normal[j] * sub.vertex_coords[vid][j];
                if (val != 0) { all_on = false; break; }
            }
            if (all_on) active.push_back(&f);
        }
        std::vector<int> carrier_verts;
        if (active.empty()) {
            carrier_verts = faces.cells[topcell].vertices;
        } else {
            for (int vid : faces.cells[topcell].vertices) {
                bool on_all = true;
                for (const auto* f : active) {
                    Int val = -f->offset;
                    for (int j = 0; j < n; ++j) val += f->normal[j] * faces.vertex_coords[vid][j];
                    if (val != 0) { on_all = false; break; }
                }
                if (on_all) carrier_verts.push_back(vid);
            }
        }
        auto it = face_by_verts.find(carrier_verts);
        if (it == face_by_verts.end())
            throw Error("MissingCarrier", "cell " + std::to_string(c) + " has no carrier face");
        sub.cells[c].carrier = it->second;
    }
}

TropicalSetup make_setup(Complex p, Complex k) {
    if (!p.polyhedral || !k.polyhedral) throw Error("DimMismatch", "tropical setups require polyhedral input");
    if (p.ambient != k.ambient) throw Error("DimMismatch", "ambient rank mismatch");
    TropicalSetup s;
    s.n = p.ambient;
    if (p.dim() != s.n) throw Error("DimMismatch", "polytope is not full-dimensional");
    std::vector<int> given(k.num_cells());
    bool has_given = false;
    for (int c = 0; c < k.num_cells(); ++c) {
        given[c] = k.cells[c].carrier;
        if (given[c] >= 0) has_given = true;
    }
    assign_carriers(p, k);
    if (has_given)
        for (int c = 0; c < k.num_cells(); ++c)
            if (given[c] >= 0 && given[c] != k.cells[c].carrier)
                throw Error("MissingCarrier",
                            "supplied carrier map disagrees with geometry at cell " + std::to_string(c));
    s.p = std::move(p);
    s.k = std::move(k);
    return s;
}

// ---------------------------------------------------------------------------
// sedentarity, delta, theta

bool validate_simple(const Complex& p) {
    const int n = p.dim();
    for (int c = 0; c < p.num_cells(); ++c) {
        int codim = n - p.cells[c].dim;
        if (codim == 0) continue;
        int count = 0;
        for (int f : p.cells_of_dim(n - 1))
            if (p.leq(c, f)) ++count;
        if (count != codim) return false;
    }
    return true;
}

SedData sedentarity(const Complex& p) {
    const int n = p.ambient;
    SedData out;
    out.sed.resize(p.num_cells());
    out.sed1.resize(p.num_cells());
    out.delta.resize(p.num_cells());
    for (int c = 0; c < p.num_cells(); ++c) {
        Lattice tq = tangent_lattice(p.vertex_coords, p.cells[c].vertices);
        out.sed[c] = kernel_lattice(tq.basis.transpose());
    }
    for (int c = 0; c < p.num_cells(); ++c) {
        Lattice acc = Lattice::zero(n);
        for (int f : p.cells_of_dim(p.dim() - 1))
            if (p.leq(c, f)) acc = lattice_sum(acc, out.sed[f]);
        out.sed1[c] = acc;
        out.delta[c] = quotient_structure(out.sed1[c], out.sed[c]);
    }
    return out;
}

Int delta_invariant(const Complex& p) {
    if (!validate_simple(p)) throw Error("NotSimple", "delta requires a simple polytope");
    SedData sd = sedentarity(p);
    Int d = 1;
    for (int v : p.cells_of_dim(0)) d = lcm(d, sd.delta[v].exponent());
    return d;
}

namespace {

// generator of the top exterior power of the saturated tangent lattice,
// sign-normalized so the first nonzero coordinate is positive
std::vector<Int> omega_of(const std::vector<std::vector<Int>>& coords, const std::vector<int>& ids, int& deg) {
    Lattice t = tangent_lattice(coords, ids);
    deg = t.rank();
    IntMatrix w = wedge_power_map(t.basis, deg);  // 1 x C(n, deg)
    std::vector<Int> omega = w.row(0);
    for (const auto& x : omega) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : omega) y = -y;
        break;
    }
    return omega;
}

}  // namespace

Int theta_cell(const std::vector<std::vector<Int>>& coords, const std::vector<int>& ids) {
    const int n = int(coords[ids[0]].size());
    int dim = affine_rank(coords, ids);
    if (dim <= 1) return 1;
    int r = 0;
    std::vector<Int> omega = omega_of(coords, ids, r);
    std::vector<std::vector<Int>> edge_omegas;
    for (const auto& [d, verts] : polytope_faces(coords, ids)) {
        if (d != 1) continue;
        int er = 0;
        edge_omegas.push_back(omega_of(coords, verts, er));
    }
    Int theta = 1;
    for (int p = 0; p <= n; ++p) {
        Lattice big = kernel_lattice(contraction_map(omega, r, n, p));
        Lattice sum = Lattice::zero(int(binom(n, p)));
        for (const auto& eo : edge_omegas)
            sum = lattice_sum(sum, kernel_lattice(contraction_map(eo, 1, n, p)));
        GroupStructure q = quotient_structure(sum, big);
        if (q.free_rank != 0)
            throw Error("NonIntegerVertices", "edge kernels do not span the cell kernel rationally");
        theta = lcm(theta, q.exponent());
    }
    return theta;
}

Int theta_complex(const Complex& k) {
    if (!k.polyhedral) throw Error("NonIntegerVertices", "theta requires integer polyhedral input");
    Int t = 1;
    for (int c = 0; c < k.num_cells(); ++c) t = lcm(t, theta_cell(k.vertex_coords, k.cells[c].vertices));
    return t;
}

Int theta_triangle(const std::vector<std::vector<Int>>& coords, const std::vector<int>& ids) {
    if (ids.size() != 3 || affine_rank(coords, ids) != 2)
        throw Error("DimMismatch", "theta_triangle expects an integer triangle");
    // 2 vol(T) = |det| of the edge vectors written in a tangent lattice basis
    Lattice t = tangent_lattice(coords, ids);
    const int n = int(coords[ids[0]].size());
    IntMatrix edges(2, n);
    for (int j = 0; j < n; ++j) {
        edges.at(0, j) = coords[ids[1]][j] - coords[ids[0]][j];
        edges.at(1, j) = coords[ids[2]][j] - coords[ids[0]][j];
    }
    IntMatrix x(2, 2);
    for (int i = 0; i < 2; ++i) {
        auto sol = solve_in_lattice(t, edges.row(i));
        if (!sol) throw Error("NonIntegerVertices", "edge not in the tangent lattice");
        x.set_row(i, *sol);
    }
    Int two_vol = abs(det(x));
    std::vector<Int> lens;
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            std::vector<Int> e(n);
            for (int j = 0; j < n; ++j) e[j] = coords[ids[b]][j] - coords[ids[a]][j];
            lens.push_back(gcd_of(e));  // lattice length
        }
    Int num = two_vol * gcd_of(lens);
    Int den = lens[0] * lens[1] * lens[2];
    Int q, rem;
    mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (rem != 0) throw Error("NonIntegerVertices", "triangle formula did not produce an integer");
    return q;
}

// ---------------------------------------------------------------------------
// tropical cosheaves

namespace {

struct QuotientTable {
    std::vector<QuotientBasis> q;  // coordinates on t(Z)/Sed(Q), per face of P
    std::vector<Lattice> sed;
};

QuotientTable quotient_table(const Complex& p) {
    QuotientTable t;
    SedData sd = sedentarity(p);
    t.sed = sd.sed;
    t.q.resize(p.num_cells());
    for (int c = 0; c < p.num_cells(); ++c) t.q[c] = quotient_basis(sd.sed[c]);
    return t;
}

// matrix of t(Z)/Sed(Qc) -> t(Z)/Sed(Qf) in the chosen quotient bases
IntMatrix quotient_step(const QuotientTable& t, int qc, int qf) {
    return t.q[qc].lift * t.q[qf].proj;
}

}  // namespace

Cosheaf f0_face_cosheaf(const TropicalSetup& s, int p) {
    const Complex& pc = s.p;
    QuotientTable t = quotient_table(pc);
    Cosheaf f;
    f.base = &pc;
    f.rank.assign(pc.num_cells(), 0);
    f.embedding.assign(pc.num_cells(), std::nullopt);
    for (int c = 0; c < pc.num_cells(); ++c) f.rank[c] = int(binom(t.q[c].rank, p));
    for (int c = 0; c < pc.num_cells(); ++c)
        for (const auto& [fe, sg] : pc.faces[c]) f.ext[{fe, c}] = wedge_power_map(quotient_step(t, c, fe), p);
    f.validate();
    return f;
}

DihomCosheaf f0_cosheaf(const TropicalSetup& s, int p) {
    Cosheaf f = f0_face_cosheaf(s, p);
    Cosheaf on_k = subdivide_cosheaf(f, s.p, s.k);
    DihomCosheaf out = dihom_subdivide(on_k, s.k);
    out.validate();
    return out;
}

F1Data f1_cosheaf(const TropicalSetup& s, int p) {
    const Complex& k = s.k;
    const Complex& pc = s.p;
    QuotientTable t = quotient_table(pc);
    DihomIndex ix = dihom_index(k);

    // integer annihilator of each K-edge direction
    std::map<int, Lattice> edge_perp;
    for (int e : k.cells_of_dim(1)) {
        IntMatrix d(s.n, 1);
        const auto& v = k.cells[e].vertices;
        for (int j = 0; j < s.n; ++j) d.at(j, 0) = k.vertex_coords[v[1]][j] - k.vertex_coords[v[0]][j];
        edge_perp[e] = kernel_lattice(d);
    }

    F1Data out;
    out.f0 = f0_cosheaf(s, p);
    DihomCosheaf& f1 = out.f1;
    f1.base = &k;
    f1.ix = ix;
    f1.rank.assign(ix.cells.size(), 0);
    f1.embedding.assign(ix.cells.size(), std::nullopt);

    // value lattice: sum over the edges of lo of the image of
    // /\^p of (edge-perp -> t(Z)/Sed(carrier(hi)))
    for (size_t i = 0; i < ix.cells.size(); ++i) {
        auto [lo, hi] = ix.cells[i];
        int qhi = k.cells[hi].carrier;
        int ambient = int(binom(t.q[qhi].rank, p));
        IntMatrix gens(0, ambient);
        for (int e : k.cells_of_dim(1)) {
            if (!k.leq(e, lo)) continue;
            IntMatrix map = edge_perp[e].basis * t.q[qhi].proj;
            gens = stack_rows(gens, wedge_power_map(map, p));
        }
        Lattice val = row_span(gens, ambient);
        f1.rank[i] = val.rank();
        f1.embedding[i] = val.basis;
    }

    for (size_t i = 0; i < ix.cells.size(); ++i) {
        auto [lo, hi] = ix.cells[i];
        // raise the first coordinate: inclusion of edge-kernel sums
        for (const auto& [mid, sg] : k.cofaces[lo]) {
            if (!k.leq(mid, hi)) continue;
            int j = ix.at(mid, hi);
            Lattice tgt{int(binom(t.q[k.cells[hi].carrier].rank, p)), *f1.embedding[j]};
            IntMatrix m(f1.rank[i], f1.rank[j]);
            for (int a = 0; a < f1.rank[i]; ++a) {
                auto x = solve_in_lattice(tgt, f1.embedding[i]->row(a));
                if (!x) throw Error("FunctorialityViolation", "edge-kernel sum is not monotone");
                m.set_row(a, *x);
            }
            f1.ext_first[{int(i), j}] = m;
        }
        // lower the second coordinate: reduction modulo the larger sedentarity
        for (const auto& [mid, sg] : k.faces[hi]) {
            if (!k.leq(lo, mid)) continue;
            int j = ix.at(lo, mid);
            IntMatrix amb = wedge_power_map(quotient_step(t, k.cells[hi].carrier, k.cells[mid].carrier), p);
            Lattice tgt{int(binom(t.q[k.cells[mid].carrier].rank, p)), *f1.embedding[j]};
            IntMatrix reduced = *f1.embedding[i] * amb;
            IntMatrix m(f1.rank[i], f1.rank[j]);
            for (int a = 0; a < f1.rank[i]; ++a) {
                auto x = solve_in_lattice(tgt, reduced.row(a));
                if (!x) throw Error("FunctorialityViolation", "reduction leaves the edge-kernel sum");
                m.set_row(a, *x);
            }
            f1.ext_second[{int(i), j}] = m;
        }
    }
    f1.validate();

    out.inclusion.source = f1;
    out.inclusion.target = out.f0;
    out.inclusion.component.resize(ix.cells.size());
    for (size_t i = 0; i < ix.cells.size(); ++i) out.inclusion.component[i] = *f1.embedding[i];
    out.inclusion.validate();
    return out;
}

// ---------------------------------------------------------------------------
// diamonds and the Lefschetz analysis

HodgeDiamond hodge_diamond(const TropicalSetup& s, char which, CoeffRing ring, int threads) {
    HodgeDiamond d;
    d.n = s.n;
    d.which = which;
    d.ring = ring;
    d.entry.assign(s.n + 1, std::vector<GroupStructure>(s.n + 1));
    parallel_for(s.n + 1, threads, [&](int p) {
        DihomCosheaf f = which == 'Y' ? f0_cosheaf(s, p) : f1_cosheaf(s, p).f1;
        HomologyResult h = homology(dihom_chain_complex(s.k, tensor_ring(f, ring)));
        for (int q = 0; q <= s.n; ++q) d.entry[p][q] = h.group(q);
    });
    return d;
}

const LefschetzEntry& LefschetzReport::at(int p, int q) const {
    for (const auto& e : entries)
        if (e.p == p && e.q == q) return e;
    throw Error("UnknownCell", "no Lefschetz entry for that bidegree");
}

LefschetzReport lefschetz_analysis(const TropicalSetup& s, CoeffRing ring, int threads) {
    LefschetzReport rep;
    rep.n = s.n;
    rep.ring = ring;
    std::vector<std::vector<LefschetzEntry>> rows(s.n + 1);
    parallel_for(s.n + 1, threads, [&](int p) {
        F1Data data = f1_cosheaf(s, p);
        DihomCosheaf f1 = tensor_ring(data.f1, ring);
        DihomCosheaf f0 = tensor_ring(data.f0, ring);
        ChainMap cm;
        cm.src = dihom_chain_complex(s.k, f1);
        cm.tgt = dihom_chain_complex(s.k, f0);
        cm.block.resize(std::max(cm.src.top(), cm.tgt.top()) + 1);
        for (int deg = 0; deg < int(cm.block.size()); ++deg) {
            // block-diagonal in the shared pseudo-cell ordering
            IntMatrix blk(cm.src.dim_at(deg), cm.tgt.dim_at(deg));
            int r0 = 0, c0 = 0;
            for (int pp = 0; pp + deg <= s.k.dim(); ++pp) {
                auto bit = f1.ix.blocks.find({pp, pp + deg});
                if (bit == f1.ix.blocks.end()) continue;
                for (int idx : bit->second) {
                    const IntMatrix& comp = data.inclusion.component[idx];
                    for (int a = 0; a < comp.rows(); ++a)
                        for (int b = 0; b < comp.cols(); ++b) blk.at(r0 + a, c0 + b) = comp.at(a, b);
                    r0 += comp.rows();
                    c0 += comp.cols();
                }
            }
            if (ring.tag == CoeffRing::MODP) blk = fp_to_int(fp_from(blk, ring.p));
            cm.block[deg] = blk;
        }
        HomologyMap hm = induced_map(cm);
        HomologyResult hx = homology(cm.src), hy = homology(cm.tgt);
        for (int q = 0; q <= s.n; ++q) {
            LefschetzEntry e;
            e.p = p;
            e.q = q;
            e.x_group = hx.group(q);
            e.y_group = hy.group(q);
            if (q < int(hm.degree.size())) {
                e.kernel = hm.degree[q].kernel;
                e.cokernel = hm.degree[q].cokernel;
                e.injective = hm.degree[q].injective;
                e.surjective = hm.degree[q].surjective;
            } else {
                e.injective = e.surjective = true;
            }
            rows[p].push_back(e);
        }
    });
    for (auto& r : rows)
        for (auto& e : r) rep.entries.push_back(e);
    for (const auto& e : rep.entries) {
        if (e.p + e.q < rep.n - 1 && !e.iso()) rep.compliant = false;
        if (e.p + e.q == rep.n - 1 && !e.surjective) rep.compliant = false;
    }
    return rep;
}

Int h_number_formula(const Complex& p, int idx) {
    if (!validate_simple(p)) throw Error("NotSimple", "h-numbers require a simple polytope");
    const int n = p.dim();
    Int h = 0;
    for (int k = 0; k <= idx; ++k) {
        Int term = Int(long(binom(n - k, idx - k))) * Int(long(p.cells_of_dim(n - k).size()));
        if ((idx - k) % 2 == 0) h += term;
        else h -= term;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Koszul-style resolution

KoszulComplex koszul_resolution(int n, const std::vector<std::vector<Int>>& gens, int p) {
    const int g = int(gens.size());
    // quotients are taken by the saturation so the chain groups stay free;
    // under the freeness hypotheses this is the plain quotient
    std::map<std::vector<int>, QuotientBasis> qb;
    for (int k = 0; k <= g; ++k)
        for (const auto& sub : lex_subsets(g, k)) {
            IntMatrix rows(k, n);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < n; ++j) rows.at(i, j) = gens[sub[i]][j];
            qb[sub] = quotient_basis(saturation(row_span(rows, n)));
        }
    KoszulComplex out;
    out.complex.ring = CoeffRing::Z();
    out.complex.dims.assign(g + 1, 0);
    out.complex.basis.assign(g + 1, {});
    std::map<std::vector<int>, int> offset;
    for (int k = 0; k <= g; ++k) {
        const auto& subs = lex_subsets(g, k);
        for (size_t si = 0; si < subs.size(); ++si) {
            offset[subs[si]] = out.complex.dims[k];
            int rank = p - k >= 0 ? int(binom(qb[subs[si]].rank, p - k)) : 0;
            out.complex.dims[k] += rank;
            for (int i = 0; i < rank; ++i) out.complex.basis[k].push_back({int(si), -1, i});
        }
    }
    out.complex.boundary.resize(g + 1);
    out.complex.boundary[0] = IntMatrix(out.complex.dims[0], 0);
    for (int k = 1; k <= g; ++k) {
        IntMatrix b(out.complex.dims[k], out.complex.dims[k - 1]);
        if (p - k >= 0) {
            for (const auto& sub : lex_subsets(g, k)) {
                const QuotientBasis& qs = qb[sub];
                for (int drop = 0; drop < k; ++drop) {
                    std::vector<int> rest = sub;
                    rest.erase(rest.begin() + drop);
                    const QuotientBasis& qt = qb[rest];
                    // v in /\^{p-k}(V/F)  |->  f ^ v in /\^{p-k+1}(V/(F minus f))
                    IntMatrix m = wedge_power_map(qs.lift, p - k) *
                                  wedge_by_vector(gens[sub[drop]], p - k, n) *
                                  wedge_power_map(qt.proj, p - k + 1);
                    for (int i = 0; i < m.rows(); ++i)
                        for (int j = 0; j < m.cols(); ++j)
                            b.at(offset[sub] + i, offset[rest] + j) += m.at(i, j);
                }
            }
        }
        out.complex.boundary[k] = b;
    }
    out.complex.check();
    std::vector<int> all(g);
    for (int i = 0; i < g; ++i) all[i] = i;
    out.quotient_rank = int(binom(qb[all].rank, p));
    out.augmentation =
        wedge_power_map(qb[std::vector<int>{}].lift, p) * wedge_power_map(qb[all].proj, p);
    return out;
}

// ---------------------------------------------------------------------------
// regular subdivisions

TropicalSetup regular_subdivision(int n, const std::vector<std::vector<Int>>& points,
                                  const std::vector<std::optional<mpq_class>>& lifts, bool min_convention) {
    if (points.size() != lifts.size()) throw Error("DegenerateSpan", "one lift per point required");
    std::vector<int> finite;
    for (size_t i = 0; i < points.size(); ++i)
        if (lifts[i]) finite.push_back(int(i));
    if (finite.empty()) throw Error("DegenerateSpan", "no finite lifts");
    if (affine_rank(points, finite) != n)
        throw Error("DegenerateSpan", "points with finite lifts must span the ambient space");

    // clear denominators: positive rescaling preserves the upper-face structure
    Int den = 1;
    for (int i : finite) den = lcm(den, Int(lifts[i]->get_den()));
    std::vector<std::vector<Int>> lifted;
    for (int i : finite) {
        std::vector<Int> v = points[i];
        mpq_class scaled = *lifts[i] * mpq_class(den);
        v.push_back(Int(scaled.get_num()));
        lifted.push_back(v);
    }
    std::vector<int> lifted_ids(lifted.size());
    for (size_t i = 0; i < lifted.size(); ++i) lifted_ids[i] = int(i);

    // Newton polytope
    std::vector<std::vector<int>> ptops;
    for (const auto& [d, verts] : polytope_faces(points, finite))
        if (d == n) ptops.push_back(verts);
    Complex p = build_polyhedral_closure(n, points, ptops);

    std::vector<std::vector<int>> tops;
    if (affine_rank(lifted, lifted_ids) == n) {
        // affine lift: the trivial subdivision by the polytope itself
        std::vector<int> ext;
        for (const auto& [d, verts] : polytope_faces(points, finite))
            if (d == 0) ext.push_back(verts[0]);
        std::sort(ext.begin(), ext.end());
        tops.push_back(ext);
    } else {
        for (const auto& fx : polytope_facet_functionals(lifted, lifted_ids)) {
            const Int& last = fx.normal[n];
            bool upper = min_convention ? last < 0 : last > 0;
            if (!upper) continue;
            // extreme points of the facet, pulled back to point indices
            std::vector<int> ext;
            for (const auto& [d, verts] : polytope_faces(lifted, fx.vertex_ids))
                if (d == 0) ext.push_back(finite[verts[0]]);
            std::sort(ext.begin(), ext.end());
            tops.push_back(ext);
        }
    }
    Complex k = build_polyhedral_closure(n, points, tops);
    return make_setup(std::move(p), std::move(k));
}

}  // namespace troplef
