#include "troplef/homology.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "troplef/fpfield.hpp"

namespace troplef {

namespace {

IntMatrix reduce_ring(const IntMatrix& m, const CoeffRing& ring) {
    if (ring.tag != CoeffRing::MODP) return m;
    return fp_to_int(fp_from(m, ring.p));
}

bool matrix_zero_over(const IntMatrix& m, const CoeffRing& ring) {
    if (ring.tag != CoeffRing::MODP) return m.is_zero();
    return reduce_ring(m, ring).is_zero();
}

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
// ChainComplex

IntMatrix ChainComplex::boundary_at(int k) const {
    if (k >= 1 && k < int(boundary.size())) return boundary[k];
    return IntMatrix(dim_at(k), dim_at(k - 1));
}

void ChainComplex::check() const {
    for (int k = 1; k <= top(); ++k) {
        if (boundary_at(k).rows() != dim_at(k) || boundary_at(k).cols() != dim_at(k - 1))
            throw Error("NotAComplex", "boundary shape mismatch in degree " + std::to_string(k));
        if (k >= 2 && !matrix_zero_over(boundary_at(k) * boundary_at(k - 1), ring))
            throw Error("NotAComplex", "dd != 0 between degrees " + std::to_string(k) + " and " +
                                           std::to_string(k - 2));
    }
}

const GroupStructure& HomologyResult::group(int k) const {
    static const GroupStructure zero{};
    if (k < 0 || k >= int(degree.size())) return zero;
    return degree[k].group;
}

// ---------------------------------------------------------------------------
// homology

namespace {

DegreeHomology homology_degree_int(const ChainComplex& c, int k, bool rational) {
    DegreeHomology out;
    Lattice cycles = kernel_lattice(c.boundary_at(k));
    Lattice bounds = row_span(c.boundary_at(k + 1), c.dim_at(k));
    IntMatrix coords(bounds.rank(), cycles.rank());
    for (int i = 0; i < bounds.rank(); ++i) {
        auto x = solve_in_lattice(cycles, bounds.basis.row(i));
        if (!x) throw Error("NotAComplex", "boundary is not a cycle");
        coords.set_row(i, *x);
    }
    SnfResult s = snf(coords);
    IntMatrix gens = inverse_unimodular(s.t);  // rows form a basis of cycle coordinates
    std::vector<std::vector<Int>> free_rows;
    for (int i = 0; i < cycles.rank(); ++i) {
        Int d = i < int(s.d.size()) ? s.d[i] : Int(0);
        std::vector<Int> rep = gens.row(i) * cycles.basis;
        if (d == 0) {
            free_rows.push_back(rep);
        } else if (d >= 2 && !rational) {
            out.torsion_orders.push_back(d);
            IntMatrix r(1, c.dim_at(k));
            r.set_row(0, rep);
            out.torsion_reps = out.torsion_reps.rows() == 0 ? r : stack_rows(out.torsion_reps, r);
        }
    }
    IntMatrix fr(int(free_rows.size()), c.dim_at(k));
    for (size_t i = 0; i < free_rows.size(); ++i) fr.set_row(int(i), free_rows[i]);
    out.free_reps = row_span(fr, c.dim_at(k)).basis;  // HNF-canonical representatives
    if (out.torsion_reps.rows() == 0) out.torsion_reps = IntMatrix(0, c.dim_at(k));
    out.group.free_rank = out.free_reps.rows();
    out.group.torsion = out.torsion_orders;
    out.cycle_rows = cycles.basis;
    out.boundary_rows = bounds.basis;
    return out;
}

DegreeHomology homology_degree_fp(const ChainComplex& c, int k) {
    const long long p = c.ring.p;
    DegreeHomology out;
    FpMatrix cycles = fp_kernel(fp_from(c.boundary_at(k), p));
    FpMatrix bounds = fp_from(c.boundary_at(k + 1), p);
    std::vector<int> bpiv = fp_rref(bounds);
    const int brank = int(bpiv.size());
    // reduce each cycle row modulo the image, keep an independent set
    FpMatrix reps(p, 0, c.dim_at(k));
    std::vector<std::vector<long long>> rows;
    for (int i = 0; i < cycles.rows; ++i) {
        std::vector<long long> v(c.dim_at(k));
        for (int j = 0; j < c.dim_at(k); ++j) v[j] = cycles.at(i, j);
        for (int r = 0; r < brank; ++r) {
            long long f = v[bpiv[r]];
            if (f == 0) continue;
            for (int j = 0; j < c.dim_at(k); ++j) v[j] = ((v[j] - f * bounds.at(r, j)) % p + p) % p;
        }
        rows.push_back(v);
    }
    FpMatrix cand(p, int(rows.size()), c.dim_at(k));
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < c.dim_at(k); ++j) cand.at(int(i), j) = rows[i][j];
    fp_rref(cand);
    std::vector<int> keep;
    for (int i = 0; i < cand.rows; ++i)
        for (int j = 0; j < cand.cols; ++j)
            if (cand.at(i, j) != 0) { keep.push_back(i); break; }
    FpMatrix fr(p, int(keep.size()), c.dim_at(k));
    for (size_t i = 0; i < keep.size(); ++i)
        for (int j = 0; j < c.dim_at(k); ++j) fr.at(int(i), j) = cand.at(keep[i], j);
    out.free_reps = fp_to_int(fr);
    out.torsion_reps = IntMatrix(0, c.dim_at(k));
    out.group.free_rank = fr.rows;
    out.cycle_rows = fp_to_int(cycles);
    FpMatrix bnz(p, brank, c.dim_at(k));
    for (int i = 0; i < brank; ++i)
        for (int j = 0; j < c.dim_at(k); ++j) bnz.at(i, j) = bounds.at(i, j);
    out.boundary_rows = fp_to_int(bnz);
    return out;
}

}  // namespace

HomologyResult homology(const ChainComplex& c) {
    c.check();
    HomologyResult out;
    out.ring = c.ring;
    out.degree.resize(c.top() + 1);
    for (int k = 0; k <= c.top(); ++k)
        out.degree[k] = c.ring.tag == CoeffRing::MODP ? homology_degree_fp(c, k)
                                                      : homology_degree_int(c, k, c.ring.tag == CoeffRing::RAT);
    return out;
}

// ---------------------------------------------------------------------------
// chain maps and induced maps

void ChainMap::check() const {
    int top = std::max(src.top(), tgt.top());
    auto blk = [&](int k) -> IntMatrix {
        if (k >= 0 && k < int(block.size())) return block[k];
        return IntMatrix(src.dim_at(k), tgt.dim_at(k));
    };
    for (int k = 0; k <= top; ++k) {
        IntMatrix bk = blk(k);
        if (bk.rows() != src.dim_at(k) || bk.cols() != tgt.dim_at(k))
            throw Error("NotChainMap", "block shape mismatch in degree " + std::to_string(k));
        if (k == 0) continue;
        IntMatrix lhs = src.boundary_at(k) * blk(k - 1);
        IntMatrix rhs = bk * tgt.boundary_at(k);
        if (!matrix_zero_over(lhs - rhs, src.ring))
            throw Error("NotChainMap", "does not commute with boundaries in degree " + std::to_string(k));
    }
}

namespace {

struct IntDegreeData {
    // generators: free then torsion
    int nfree = 0;
    std::vector<Int> orders;  // torsion orders
    IntMatrix reps;           // (nfree + torsion) x dim
    IntMatrix boundary_rows;
};

IntDegreeData degree_data(const DegreeHomology& h, int dim) {
    IntDegreeData d;
    d.nfree = h.group.free_rank;
    d.orders = h.torsion_orders;
    d.reps = stack_rows(h.free_reps, h.torsion_reps);
    d.boundary_rows = h.boundary_rows;
    if (d.reps.cols() != dim) d.reps = IntMatrix(0, dim);
    return d;
}

DegreeMap induced_degree_int(const IntMatrix& block, const IntDegreeData& a, const IntDegreeData& b) {
    const int nA = a.reps.rows(), nB = b.reps.rows();
    DegreeMap out;
    out.matrix = IntMatrix(nA, nB);
    IntMatrix solve_base = stack_rows(b.reps, b.boundary_rows);
    for (int i = 0; i < nA; ++i) {
        std::vector<Int> w = a.reps.row(i) * block;
        auto x = solve_left(solve_base, w);
        if (!x) throw Error("NotChainMap", "image class does not lie in the target cycle lattice");
        for (int j = 0; j < nB; ++j) {
            Int v = (*x)[j];
            if (j >= b.nfree) {
                const Int& d = b.orders[j - b.nfree];
                mpz_mod(v.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t());
            }
            out.matrix.at(i, j) = v;
        }
    }
    // relation rows: order * torsion generator
    auto relations = [](const IntDegreeData& d, int n) {
        IntMatrix r(int(d.orders.size()), n);
        for (size_t i = 0; i < d.orders.size(); ++i) r.at(int(i), d.nfree + int(i)) = d.orders[i];
        return r;
    };
    IntMatrix ra = relations(a, nA), rb = relations(b, nB);
    // cokernel: Z^nB / (image + target relations)
    SnfResult cs = snf(stack_rows(out.matrix, rb));
    GroupStructure coker;
    int nonzero = 0;
    for (const auto& d : cs.d)
        if (d != 0) {
            ++nonzero;
            if (d >= 2) coker.torsion.push_back(d);
        }
    coker.free_rank = nB - nonzero;
    out.cokernel = coker;
    // kernel: {x : x M in rowspace(rb)} / rowspace(ra)
    Lattice pairs = kernel_lattice(stack_rows(out.matrix, -rb));
    IntMatrix xs(pairs.rank(), nA);
    for (int i = 0; i < pairs.rank(); ++i)
        for (int j = 0; j < nA; ++j) xs.at(i, j) = pairs.basis.at(i, j);
    Lattice preimage = row_span(xs, nA);
    out.kernel = quotient_structure(row_span(ra, nA), preimage);
    out.injective = out.kernel.trivial();
    out.surjective = out.cokernel.trivial();
    return out;
}

DegreeMap rationalize(const DegreeMap& z, int nfree_a, int nfree_b) {
    DegreeMap out;
    out.matrix = IntMatrix(nfree_a, nfree_b);
    for (int i = 0; i < nfree_a; ++i)
        for (int j = 0; j < nfree_b; ++j) out.matrix.at(i, j) = z.matrix.at(i, j);
    out.kernel = GroupStructure{z.kernel.free_rank, {}};
    out.cokernel = GroupStructure{z.cokernel.free_rank, {}};
    out.injective = out.kernel.trivial();
    out.surjective = out.cokernel.trivial();
    return out;
}

DegreeMap induced_degree_fp(const IntMatrix& block, const DegreeHomology& a, const DegreeHomology& b,
                            long long p) {
    DegreeMap out;
    const int nA = a.free_reps.rows(), nB = b.free_reps.rows();
    out.matrix = IntMatrix(nA, nB);
    FpMatrix solve_base = fp_from(stack_rows(b.free_reps, b.boundary_rows), p);
    for (int i = 0; i < nA; ++i) {
        std::vector<long long> w(block.cols(), 0);
        for (int t = 0; t < block.cols(); ++t) {
            Int acc = 0;
            for (int s = 0; s < block.rows(); ++s) acc += a.free_reps.at(i, s) * block.at(s, t);
            Int m;
            mpz_mod(m.get_mpz_t(), acc.get_mpz_t(), Int(long(p)).get_mpz_t());
            w[t] = m.get_si();
        }
        auto x = fp_solve_left(solve_base, w);
        if (!x) throw Error("NotChainMap", "image class does not lie in the target cycles mod p");
        for (int j = 0; j < nB; ++j) out.matrix.at(i, j) = long((*x)[j]);
    }
    int r = fp_rank(out.matrix, p);
    out.kernel = GroupStructure{nA - r, {}};
    out.cokernel = GroupStructure{nB - r, {}};
    out.injective = out.kernel.trivial();
    out.surjective = out.cokernel.trivial();
    return out;
}

}  // namespace

HomologyMap induced_map(const ChainMap& f) {
    f.check();
    HomologyMap out;
    out.ring = f.src.ring;
    const int top = std::max(f.src.top(), f.tgt.top());
    if (f.src.ring.tag == CoeffRing::MODP) {
        HomologyResult hs = homology(f.src), ht = homology(f.tgt);
        out.degree.resize(top + 1);
        for (int k = 0; k <= top; ++k) {
            DegreeHomology za{{}, IntMatrix(0, f.src.dim_at(k)), IntMatrix(0, f.src.dim_at(k)), {},
                              IntMatrix(0, f.src.dim_at(k)), IntMatrix(0, f.src.dim_at(k))};
            DegreeHomology zb{{}, IntMatrix(0, f.tgt.dim_at(k)), IntMatrix(0, f.tgt.dim_at(k)), {},
                              IntMatrix(0, f.tgt.dim_at(k)), IntMatrix(0, f.tgt.dim_at(k))};
            const DegreeHomology& a = k <= hs.top() ? hs.degree[k] : za;
            const DegreeHomology& b = k <= ht.top() ? ht.degree[k] : zb;
            IntMatrix blk = k < int(f.block.size()) ? f.block[k] : IntMatrix(f.src.dim_at(k), f.tgt.dim_at(k));
            out.degree[k] = induced_degree_fp(blk, a, b, f.src.ring.p);
        }
        return out;
    }
    const bool rational = f.src.ring.tag == CoeffRing::RAT;
    ChainComplex zsrc = f.src, ztgt = f.tgt;
    zsrc.ring = ztgt.ring = CoeffRing::Z();
    HomologyResult hs = homology(zsrc), ht = homology(ztgt);
    out.degree.resize(top + 1);
    for (int k = 0; k <= top; ++k) {
        DegreeHomology empty_a{{}, IntMatrix(0, f.src.dim_at(k)), IntMatrix(0, f.src.dim_at(k)), {},
                               IntMatrix(0, f.src.dim_at(k)), IntMatrix(0, f.src.dim_at(k))};
        DegreeHomology empty_b{{}, IntMatrix(0, f.tgt.dim_at(k)), IntMatrix(0, f.tgt.dim_at(k)), {},
                               IntMatrix(0, f.tgt.dim_at(k)), IntMatrix(0, f.tgt.dim_at(k))};
        IntDegreeData a = degree_data(k <= hs.top() ? hs.degree[k] : empty_a, f.src.dim_at(k));
        IntDegreeData b = degree_data(k <= ht.top() ? ht.degree[k] : empty_b, f.tgt.dim_at(k));
        IntMatrix blk = k < int(f.block.size()) ? f.block[k] : IntMatrix(f.src.dim_at(k), f.tgt.dim_at(k));
        DegreeMap dm = induced_degree_int(blk, a, b);
        out.degree[k] = rational ? rationalize(dm, a.nfree, b.nfree) : dm;
    }
    return out;
}

// ---------------------------------------------------------------------------
// complexes from cosheaves

ChainComplex chain_complex(const Complex& k, const Cosheaf& f) {
    ChainComplex c;
    c.ring = f.ring;
    const int top = k.dim();
    c.dims.assign(top + 1, 0);
    c.basis.assign(top + 1, {});
    std::vector<int> offset(k.num_cells(), 0);
    for (int d = 0; d <= top; ++d)
        for (int cell : k.cells_of_dim(d)) {
            offset[cell] = c.dims[d];
            c.dims[d] += f.rank[cell];
            for (int i = 0; i < f.rank[cell]; ++i) c.basis[d].push_back({cell, -1, i});
        }
    c.boundary.resize(top + 1);
    c.boundary[0] = IntMatrix(c.dims[0], 0);
    for (int d = 1; d <= top; ++d) {
        IntMatrix b(c.dims[d], c.dims[d - 1]);
        for (int cell : k.cells_of_dim(d))
            for (const auto& [face, s] : k.faces[cell]) {
                const IntMatrix& e = f.elementary(face, cell);
                for (int i = 0; i < e.rows(); ++i)
                    for (int j = 0; j < e.cols(); ++j)
                        b.at(offset[cell] + i, offset[face] + j) += Int(s) * e.at(i, j);
            }
        c.boundary[d] = reduce_ring(b, c.ring);
    }
    return c;
}

namespace {

// column offsets of the pseudo-cells inside the block (p,q)
std::vector<int> block_offsets(const DihomCosheaf& f, const std::vector<int>& block, int& total) {
    std::vector<int> off(block.size(), 0);
    total = 0;
    for (size_t i = 0; i < block.size(); ++i) {
        off[i] = total;
        total += f.rank[block[i]];
    }
    return off;
}

}  // namespace

Bicomplex bicomplex(const Complex& k, const DihomCosheaf& f) {
    Bicomplex b;
    b.k = &k;
    b.ring = f.ring;
    b.maxdim = k.dim();
    for (const auto& [pq, blk] : f.ix.blocks) {
        b.blocks[pq] = blk;
        std::vector<BasisTag> tags;
        for (int i : blk)
            for (int c = 0; c < f.rank[i]; ++c) tags.push_back({f.ix.cells[i].lo, f.ix.cells[i].hi, c});
        b.basis[pq] = tags;
    }
    std::map<int, std::map<int, int>> position;  // pseudo-cell -> offset in its block
    std::map<std::pair<int, int>, int> rank_of;
    for (const auto& [pq, blk] : b.blocks) {
        int total = 0;
        auto off = block_offsets(f, blk, total);
        rank_of[pq] = total;
        for (size_t i = 0; i < blk.size(); ++i) position[blk[i]][0] = off[i];
    }
    for (const auto& [pq, blk] : b.blocks) {
        auto [p, q] = pq;
        int rows = rank_of[pq];
        // d1: raise the first coordinate, coefficient (-1)^{p+1} i(lo, lo')
        {
            auto it = b.blocks.find({p + 1, q});
            IntMatrix m(rows, it == b.blocks.end() ? 0 : rank_of[{p + 1, q}]);
            if (it != b.blocks.end()) {
                for (int i : blk) {
                    auto [lo, hi] = f.ix.cells[i];
                    for (const auto& [mid, s] : k.cofaces[lo]) {
                        if (!k.leq(mid, hi)) continue;
                        int j = f.ix.at(mid, hi);
                        const IntMatrix& e = f.first(i, j);
                        int coeff = (p % 2 == 0 ? -1 : 1) * s;
                        for (int a = 0; a < e.rows(); ++a)
                            for (int c2 = 0; c2 < e.cols(); ++c2)
                                m.at(position[i][0] + a, position[j][0] + c2) += Int(coeff) * e.at(a, c2);
                    }
                }
            }
            b.d1[pq] = reduce_ring(m, b.ring);
        }
        // d2: lower the second coordinate, coefficient (-1)^p i(hi', hi)
        {
            auto it = b.blocks.find({p, q - 1});
            IntMatrix m(rows, it == b.blocks.end() ? 0 : rank_of[{p, q - 1}]);
            if (it != b.blocks.end()) {
                for (int i : blk) {
                    auto [lo, hi] = f.ix.cells[i];
                    for (const auto& [mid, s] : k.faces[hi]) {
                        if (!k.leq(lo, mid)) continue;
                        int j = f.ix.at(lo, mid);
                        const IntMatrix& e = f.second(i, j);
                        int coeff = (p % 2 == 0 ? 1 : -1) * s;
                        for (int a = 0; a < e.rows(); ++a)
                            for (int c2 = 0; c2 < e.cols(); ++c2)
                                m.at(position[i][0] + a, position[j][0] + c2) += Int(coeff) * e.at(a, c2);
                    }
                }
            }
            b.d2[pq] = reduce_ring(m, b.ring);
        }
    }
    return b;
}

int Bicomplex::block_rank(int p, int q) const {
    auto it = basis.find({p, q});
    return it == basis.end() ? 0 : int(it->second.size());
}

const IntMatrix& Bicomplex::d1_at(int p, int q) const {
    static const IntMatrix zero;
    auto it = d1.find({p, q});
    return it == d1.end() ? zero : it->second;
}

const IntMatrix& Bicomplex::d2_at(int p, int q) const {
    static const IntMatrix zero;
    auto it = d2.find({p, q});
    return it == d2.end() ? zero : it->second;
}

void Bicomplex::check() const {
    for (const auto& [pq, m] : d1) {
        auto [p, q] = pq;
        if (block_rank(p + 1, q) > 0 && block_rank(p + 2, q) > 0) {
            if (!matrix_zero_over(d1_at(p, q) * d1_at(p + 1, q), ring))
                throw Error("NotAComplex", "d1 d1 != 0");
        }
        if (block_rank(p, q - 1) > 0 && block_rank(p, q - 2) > 0) {
            if (!matrix_zero_over(d2_at(p, q) * d2_at(p, q - 1), ring))
                throw Error("NotAComplex", "d2 d2 != 0");
        }
        if (block_rank(p + 1, q) > 0 || block_rank(p, q - 1) > 0) {
            IntMatrix a = d1_at(p, q) * d2_at(p + 1, q);
            IntMatrix bb = d2_at(p, q) * d1_at(p, q - 1);
            if (a.rows() == 0) a = IntMatrix(bb.rows(), bb.cols());
            if (bb.rows() == 0) bb = IntMatrix(a.rows(), a.cols());
            if (a.rows() > 0 && !matrix_zero_over(a + bb, ring))
                throw Error("NotAComplex", "d1 d2 + d2 d1 != 0");
        }
    }
}

ChainComplex dihom_chain_complex(const Complex& k, const DihomCosheaf& f) {
    Bicomplex b = bicomplex(k, f);
    ChainComplex c;
    c.ring = f.ring;
    const int top = k.dim();
    c.dims.assign(top + 1, 0);
    c.basis.assign(top + 1, {});
    // degree k basis: blocks (p, p+k), p ascending
    std::map<std::pair<int, int>, int> start;
    for (int deg = 0; deg <= top; ++deg)
        for (int p = 0; p + deg <= top; ++p) {
            start[{p, p + deg}] = c.dims[deg];
            c.dims[deg] += b.block_rank(p, p + deg);
            auto it = b.basis.find({p, p + deg});
            if (it != b.basis.end())
                for (const auto& t : it->second) c.basis[deg].push_back(t);
        }
    c.boundary.resize(top + 1);
    c.boundary[0] = IntMatrix(c.dims[0], 0);
    for (int deg = 1; deg <= top; ++deg) {
        IntMatrix m(c.dims[deg], c.dims[deg - 1]);
        for (int p = 0; p + deg <= top; ++p) {
            const IntMatrix& m1 = b.d1_at(p, p + deg);
            if (m1.cols() > 0) {
                int r0 = start[{p, p + deg}], c0 = start[{p + 1, p + deg}];
                for (int i = 0; i < m1.rows(); ++i)
                    for (int j = 0; j < m1.cols(); ++j) m.at(r0 + i, c0 + j) += m1.at(i, j);
            }
            const IntMatrix& m2 = b.d2_at(p, p + deg);
            if (m2.cols() > 0) {
                int r0 = start[{p, p + deg}], c0 = start[{p, p + deg - 1}];
                for (int i = 0; i < m2.rows(); ++i)
                    for (int j = 0; j < m2.cols(); ++j) m.at(r0 + i, c0 + j) += m2.at(i, j);
            }
        }
        c.boundary[deg] = reduce_ring(m, c.ring);
    }
    return c;
}

ChainComplex cochain_complex_compact(const Complex& k, const Sheaf& g) {
    ChainComplex c;
    c.ring = g.ring;
    const int n = k.dim();
    c.dims.assign(n + 1, 0);
    c.basis.assign(n + 1, {});
    std::vector<int> offset(k.num_cells(), 0);
    for (int j = 0; j <= n; ++j) {
        int d = n - j;  // stored degree j holds cochain degree d
        for (int cell : k.cells_of_dim(d)) {
            offset[cell] = c.dims[j];
            c.dims[j] += g.rank[cell];
            for (int i = 0; i < g.rank[cell]; ++i) c.basis[j].push_back({cell, -1, i});
        }
    }
    c.boundary.resize(n + 1);
    c.boundary[0] = IntMatrix(c.dims[0], 0);
    for (int j = 1; j <= n; ++j) {
        // stored degree j (cells of dim n-j) maps to stored j-1 (cells of dim n-j+1)
        IntMatrix m(c.dims[j], c.dims[j - 1]);
        for (int cell : k.cells_of_dim(n - j + 1))
            for (const auto& [face, s] : k.faces[cell]) {
                const IntMatrix& e = g.elementary(face, cell);  // rank(face) x rank(cell)
                for (int a = 0; a < e.rows(); ++a)
                    for (int b2 = 0; b2 < e.cols(); ++b2)
                        m.at(offset[face] + a, offset[cell] + b2) += Int(s) * e.at(a, b2);
            }
        c.boundary[j] = reduce_ring(m, c.ring);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Phi and the localized comparison complexes

IntMatrix phi_map(const Bicomplex& b, int p, int q) {
    int n = b.block_rank(p, q);
    IntMatrix m = IntMatrix::identity(n);
    long e = (long(p) * (p + 1)) / 2 + (long(q) * (q + 1)) / 2;
    if (e % 2 != 0) m = -m;
    return m;
}

IntMatrix localized_boundary(const Complex& k, const DihomCosheaf& f, int p, int q) {
    // block-diagonal over the p-cells; shares the Omega_{p,q} basis ordering
    std::vector<IntMatrix> blocks;
    int rows = 0, cols = 0;
    for (int lo : k.cells_of_dim(p)) {
        ChainComplex cc = chain_complex(k, fix_first_localize(f, lo));
        IntMatrix bq = cc.boundary_at(q);
        rows += bq.rows();
        cols += bq.cols();
        blocks.push_back(bq);
    }
    IntMatrix m(rows, cols);
    int r0 = 0, c0 = 0;
    for (const auto& blk : blocks) {
        for (int i = 0; i < blk.rows(); ++i)
            for (int j = 0; j < blk.cols(); ++j) m.at(r0 + i, c0 + j) = blk.at(i, j);
        r0 += blk.rows();
        c0 += blk.cols();
    }
    return m;
}

IntMatrix localized_cochain_step(const Complex& k, const DihomCosheaf& f, int p, int q) {
    auto offsets = [&](int pp) {
        std::map<std::pair<int, int>, int> off;
        int total = 0;
        for (int lo : k.cells_of_dim(pp))
            for (int hi : k.cells_of_dim(q)) {
                if (!k.leq(lo, hi)) continue;
                off[{lo, hi}] = total;
                total += f.rank[f.ix.at(lo, hi)];
            }
        off[{-1, -1}] = total;
        return off;
    };
    auto src = offsets(p), tgt = offsets(p + 1);
    IntMatrix m(src[{-1, -1}], tgt[{-1, -1}]);
    for (int lo : k.cells_of_dim(p))
        for (int hi : k.cells_of_dim(q)) {
            if (!k.leq(lo, hi)) continue;
            int i = f.ix.at(lo, hi);
            for (const auto& [lo2, s] : k.cofaces[lo]) {
                if (!k.leq(lo2, hi)) continue;
                int j = f.ix.at(lo2, hi);
                const IntMatrix& e = f.first(i, j);
                for (int a = 0; a < e.rows(); ++a)
                    for (int b2 = 0; b2 < e.cols(); ++b2)
                        m.at(src[{lo, hi}] + a, tgt[{lo2, hi}] + b2) += Int(s) * e.at(a, b2);
            }
        }
    return m;
}

// ---------------------------------------------------------------------------
// subdivision chain maps

ChainMap subdivision_chain_map(const Complex& k, const Complex& kprime, const Cosheaf& f) {
    Cosheaf fprime = subdivide_cosheaf(f, k, kprime);
    ChainMap cm;
    cm.src = chain_complex(k, f);
    cm.tgt = chain_complex(kprime, fprime);
    cm.block.resize(std::max(cm.src.top(), cm.tgt.top()) + 1);
    for (int d = 0; d < int(cm.block.size()); ++d) cm.block[d] = IntMatrix(cm.src.dim_at(d), cm.tgt.dim_at(d));
    // source offsets
    std::vector<int> soff(k.num_cells(), 0), toff(kprime.num_cells(), 0);
    {
        std::vector<int> acc(k.dim() + 1, 0);
        for (int d = 0; d <= k.dim(); ++d)
            for (int cell : k.cells_of_dim(d)) {
                soff[cell] = acc[d];
                acc[d] += f.rank[cell];
            }
        std::vector<int> acc2(kprime.dim() + 1, 0);
        for (int d = 0; d <= kprime.dim(); ++d)
            for (int cell : kprime.cells_of_dim(d)) {
                toff[cell] = acc2[d];
                acc2[d] += fprime.rank[cell];
            }
    }
    for (int d = 0; d <= kprime.dim(); ++d)
        for (int cp : kprime.cells_of_dim(d)) {
            int car = kprime.cells[cp].carrier;
            if (car < 0) throw Error("MissingCarrier", "cell " + std::to_string(cp));
            if (k.cells[car].dim != d) continue;  // only top-carrier cells receive the class
            int coeff = 1;
            if (!kprime.polyhedral) {
                // flag simplex of the barycentric subdivision: the complete flag sign
                const auto& flag = kprime.cells[cp].vertices;
                for (size_t i = 1; i < flag.size(); ++i) coeff *= k.incidence(flag[i - 1], flag[i]);
                if ((long(d) * (d + 1) / 2) % 2 != 0) coeff = -coeff;
            }
            for (int i = 0; i < f.rank[car]; ++i)
                cm.block[d].at(soff[car] + i, toff[cp] + i) = coeff;
        }
    cm.check();
    return cm;
}

ChainMap dihom_subdivision_chain_map(const Complex& k, const Cosheaf& f) {
    DihomCosheaf fd = dihom_subdivide(f, k);
    ChainMap cm;
    cm.src = chain_complex(k, f);
    cm.tgt = dihom_chain_complex(k, fd);
    cm.block.resize(std::max(cm.src.top(), cm.tgt.top()) + 1);
    for (int d = 0; d < int(cm.block.size()); ++d) cm.block[d] = IntMatrix(cm.src.dim_at(d), cm.tgt.dim_at(d));
    std::vector<int> soff(k.num_cells(), 0);
    std::vector<int> acc(k.dim() + 1, 0);
    for (int d = 0; d <= k.dim(); ++d)
        for (int cell : k.cells_of_dim(d)) {
            soff[cell] = acc[d];
            acc[d] += f.rank[cell];
        }
    // target offsets per degree, by basis tags
    for (int d = 0; d <= cm.tgt.top(); ++d) {
        std::map<std::pair<int, int>, int> toff;
        for (int pos = 0; pos < int(cm.tgt.basis[d].size()); ++pos) {
            const auto& tag = cm.tgt.basis[d][pos];
            if (!toff.count({tag.lo, tag.hi})) toff[{tag.lo, tag.hi}] = pos;
        }
        for (int cell : k.cells_of_dim(d))
            for (int v : k.cells_of_dim(0)) {
                if (!k.leq(v, cell) || f.rank[cell] == 0) continue;
                int base = toff.at({v, cell});
                for (int i = 0; i < f.rank[cell]; ++i) cm.block[d].at(soff[cell] + i, base + i) = 1;
            }
    }
    cm.check();
    return cm;
}

// ---------------------------------------------------------------------------
// Poincare-Lefschetz pipeline

std::vector<std::vector<int>> local_homology_profile(const Complex& k, const DihomCosheaf& f, int threads) {
    std::vector<std::vector<int>> profiles(k.num_cells());
    parallel_for(k.num_cells(), threads, [&](int e) {
        HomologyResult h = homology(chain_complex(k, fix_first_localize(f, e)));
        for (int d = 0; d <= h.top(); ++d)
            if (!h.group(d).trivial()) profiles[e].push_back(d);
    });
    return profiles;
}

PlDual pl_dual_complex(const Complex& k, const DihomCosheaf& f, int threads) {
    const int n = k.dim();
    auto profiles = local_homology_profile(k, f, threads);
    for (int e = 0; e < k.num_cells(); ++e)
        for (int d : profiles[e])
            if (d != n) {
                std::ostringstream os;
                os << "local homology at cell " << e << " lives in degrees {";
                for (size_t i = 0; i < profiles[e].size(); ++i) os << (i ? "," : "") << profiles[e][i];
                os << "}, expected {" << n << "}";
                throw Error("HypothesisFailed", os.str());
            }
    Bicomplex b = bicomplex(k, f);
    ChainComplex total = dihom_chain_complex(k, f);

    // per p-cell kernels of d2 inside Omega_{p,n}
    struct Block {
        int p = 0;
        IntMatrix kernel_rows;  // rows in Omega_{p,n} block coordinates
    };
    std::vector<Block> blocks(n + 1);
    for (int p = 0; p <= n; ++p) {
        blocks[p].p = p;
        const IntMatrix& d2 = b.d2_at(p, n);
        int rank_pn = b.block_rank(p, n);
        IntMatrix d2m = d2.cols() == 0 && rank_pn > 0 ? IntMatrix(rank_pn, 0) : d2;
        if (f.ring.tag == CoeffRing::MODP)
            blocks[p].kernel_rows = fp_to_int(fp_kernel(fp_from(d2m, f.ring.p)));
        else
            blocks[p].kernel_rows = kernel_lattice(d2m).basis;
    }

    PlDual out;
    out.dual.ring = f.ring;
    out.dual.dims.assign(n + 1, 0);
    out.dual.basis.assign(n + 1, {});
    for (int j = 0; j <= n; ++j) {
        int p = n - j;
        out.dual.dims[j] = blocks[p].kernel_rows.rows();
        for (int i = 0; i < out.dual.dims[j]; ++i) out.dual.basis[j].push_back({p, n, i});
    }
    out.dual.boundary.resize(n + 1);
    out.dual.boundary[0] = IntMatrix(out.dual.dims[0], 0);
    for (int j = 1; j <= n; ++j) {
        int p = n - j;  // stored degree j -> cochain block p, coboundary to p+1 (stored j-1)
        const IntMatrix& ker = blocks[p].kernel_rows;
        const IntMatrix& next = blocks[p + 1].kernel_rows;
        IntMatrix m(ker.rows(), next.rows());
        IntMatrix image = b.d1_at(p, n).rows() > 0 ? ker * b.d1_at(p, n) : IntMatrix(ker.rows(), 0);
        for (int i = 0; i < ker.rows(); ++i) {
            std::vector<Int> w = image.row(i);
            if (f.ring.tag == CoeffRing::MODP) {
                std::vector<long long> wl(w.size());
                for (size_t t = 0; t < w.size(); ++t) wl[t] = w[t].get_si();
                auto x = fp_solve_left(fp_from(next, f.ring.p), wl);
                if (!x) throw Error("HypothesisFailed", "coboundary does not preserve the d2-kernels");
                for (int t = 0; t < next.rows(); ++t) m.at(i, t) = long((*x)[t]);
            } else {
                auto x = solve_left(next, w);
                if (!x) throw Error("HypothesisFailed", "coboundary does not preserve the d2-kernels");
                for (int t = 0; t < next.rows(); ++t) m.at(i, t) = (*x)[t];
            }
        }
        out.dual.boundary[j] = reduce_ring(m, f.ring);
    }
    out.dual.check();

    // inclusion into the total complex: kernel vectors placed in the (p, n) block
    out.inclusion.src = out.dual;
    out.inclusion.tgt = total;
    out.inclusion.block.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        int p = n - j;
        IntMatrix blk(out.dual.dims[j], total.dim_at(j));
        // offset of block (p, n) inside total degree j = q - p with q = n
        int off = 0;
        for (int pp = 0; pp + j <= n; ++pp) {
            if (pp == p) break;
            off += b.block_rank(pp, pp + j);
        }
        const IntMatrix& ker = blocks[p].kernel_rows;
        for (int i = 0; i < ker.rows(); ++i)
            for (int c = 0; c < ker.cols(); ++c) blk.at(i, off + c) = ker.at(i, c);
        out.inclusion.block[j] = blk;
    }
    out.inclusion.check();
    return out;
}

bool PlReport::all_equal() const {
    for (bool e : equal)
        if (!e) return false;
    return vanishing_above_n;
}

PlReport pl_verify(const Complex& k, const DihomCosheaf& f, int threads) {
    PlReport rep;
    rep.n = k.dim();
    PlDual dual = pl_dual_complex(k, f, threads);
    HomologyResult ht = homology(dihom_chain_complex(k, f));
    HomologyResult hd = homology(dual.dual);
    for (int deg = 0; deg <= rep.n; ++deg) {
        rep.h_total.push_back(ht.group(deg));
        rep.h_dual.push_back(hd.group(deg));
        rep.equal.push_back(ht.group(deg) == hd.group(deg));
    }
    for (int deg = rep.n + 1; deg <= ht.top(); ++deg)
        if (!ht.group(deg).trivial()) rep.vanishing_above_n = false;
    return rep;
}

}  // namespace troplef
