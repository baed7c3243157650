#include "troplef/complex.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace troplef {

const std::vector<int> Complex::empty_{};

const std::vector<int>& Complex::cells_of_dim(int d) const {
    if (d < 0 || d >= int(by_dim_.size())) return empty_;
    return by_dim_[d];
}

int Complex::incidence(int face, int cell) const {
    for (const auto& [f, s] : faces[cell])
        if (f == face) return s;
    return 0;
}

void Complex::check_cell(int e) const {
    if (e < 0 || e >= num_cells()) throw Error("UnknownCell", "cell id " + std::to_string(e));
}

void Complex::finalize() {
    const int n = num_cells();
    dim_ = -1;
    for (const auto& c : cells) dim_ = std::max(dim_, c.dim);
    by_dim_.assign(dim_ + 1, {});
    for (int i = 0; i < n; ++i) by_dim_[cells[i].dim].push_back(i);

    if (int(faces.size()) != n) throw Error("UngradedPoset", "missing face lists");
    cofaces.assign(n, {});
    for (int c = 0; c < n; ++c) {
        std::set<int> distinct;
        for (const auto& [f, s] : faces[c]) {
            if (f < 0 || f >= n) throw Error("UnknownCell", "face id " + std::to_string(f));
            if (s != 1 && s != -1) throw Error("UngradedPoset", "incidence sign must be +1 or -1");
            if (cells[f].dim != cells[c].dim - 1)
                throw Error("UngradedPoset", "face of cell " + std::to_string(c) + " has wrong dimension");
            if (!distinct.insert(f).second)
                throw Error("UngradedPoset", "duplicate incidence between " + std::to_string(f) + " and " + std::to_string(c));
            cofaces[f].push_back({c, s});
        }
        if (cells[c].dim >= 1 && distinct.size() < 2)
            throw Error("UngradedPoset", "cell " + std::to_string(c) + " has fewer than 2 codimension-1 faces");
    }

    // reflexive-transitive closure of the cover relation, by dimension
    leq_.assign(size_t(n) * n, 0);
    for (int d = 0; d <= dim_; ++d)
        for (int c : by_dim_[d]) {
            char* row = &leq_[size_t(c) * n];
            row[c] = 1;
            for (const auto& [f, s] : faces[c]) {
                const char* frow = &leq_[size_t(f) * n];
                for (int j = 0; j < n; ++j) row[j] |= frow[j];
            }
        }

    // diamond condition: every codim-2 pair has exactly two intermediate
    // cells and the signed paths cancel
    for (int c = 0; c < n; ++c) {
        if (cells[c].dim < 2) continue;
        std::map<int, std::pair<int, int>> paths;  // grandface -> (count, signed sum)
        for (const auto& [f, s1] : faces[c])
            for (const auto& [g, s2] : faces[f]) {
                auto& p = paths[g];
                p.first += 1;
                p.second += s1 * s2;
            }
        for (const auto& [g, p] : paths) {
            if (p.first != 2)
                throw Error("DiamondViolation", "pair (" + std::to_string(g) + "," + std::to_string(c) + ") has " +
                                                    std::to_string(p.first) + " intermediate cells");
            if (p.second != 0)
                throw Error("DiamondViolation", "signs do not cancel over (" + std::to_string(g) + "," +
                                                    std::to_string(c) + ")");
        }
    }
}

// ---------------------------------------------------------------------------
// exact polytope geometry

namespace {

int lex_least_vertex(const std::vector<std::vector<Int>>& coords, const std::vector<int>& ids) {
    int best = ids[0];
    for (int id : ids)
        if (coords[id] < coords[best]) best = id;
    return best;
}

IntMatrix difference_matrix(const std::vector<std::vector<Int>>& coords, const std::vector<int>& ids) {
    int v0 = lex_least_vertex(coords, ids);
    const int n = int(coords[v0].size());
    IntMatrix d(int(ids.size()) - 1, n);
    int r = 0;
    for (int id : ids) {
        if (id == v0) continue;
        for (int j = 0; j < n; ++j) d.at(r, j) = coords[id][j] - coords[v0][j];
        ++r;
    }
    return d;
}

}  // namespace

int affine_rank(const std::vector<std::vector<Int>>& coords, const std::vector<int>& ids) {
    if (ids.size() <= 1) return 0;
    return rank(difference_matrix(coords, ids));
}

Lattice tangent_lattice(const std::vector<std::vector<Int>>& coords, const std::vector<int>& ids) {
    const int n = int(coords[ids[0]].size());
    if (ids.size() <= 1) return Lattice::zero(n);
    return saturation(row_span(difference_matrix(coords, ids), n));
}

IntMatrix reference_basis(const std::vector<std::vector<Int>>& coords, const std::vector<int>& ids) {
    const int n = int(coords[ids[0]].size());
    if (ids.size() <= 1) return IntMatrix(0, n);
    return row_span(difference_matrix(coords, ids), n).basis;
}

int incidence_sign(const std::vector<std::vector<Int>>& coords, const std::vector<int>& face_ids,
                   const std::vector<int>& cell_ids) {
    const int n = int(coords[cell_ids[0]].size());
    std::vector<Int> u(n, 0);
    for (int id : face_ids)
        for (int j = 0; j < n; ++j) u[j] += Int(int(cell_ids.size())) * coords[id][j];
    for (int id : cell_ids)
        for (int j = 0; j < n; ++j) u[j] -= Int(int(face_ids.size())) * coords[id][j];
    IntMatrix fb = reference_basis(coords, face_ids);
    IntMatrix a(1 + fb.rows(), n);
    a.set_row(0, u);
    for (int i = 0; i < fb.rows(); ++i)
        for (int j = 0; j < n; ++j) a.at(1 + i, j) = fb.at(i, j);
    IntMatrix b = reference_basis(coords, cell_ids);
    Int g = det(a * b.transpose());
    int s = sgn(g);
    if (s == 0) throw Error("DimMismatch", "degenerate incidence frame");
    return s;
}

std::vector<std::vector<int>> polytope_facets(const std::vector<std::vector<Int>>& coords,
                                              const std::vector<int>& ids) {
    const int d = affine_rank(coords, ids);
    std::vector<std::vector<int>> out;
    if (d == 0) return out;
    Lattice tl = tangent_lattice(coords, ids);
    int v0 = lex_least_vertex(coords, ids);
    const int n = int(coords[v0].size());
    // vertex positions in tangent lattice coordinates
    std::map<int, std::vector<Int>> tpos;
    for (int id : ids) {
        std::vector<Int> diff(n);
        for (int j = 0; j < n; ++j) diff[j] = coords[id][j] - coords[v0][j];
        auto x = solve_in_lattice(tl, diff);
        if (!x) throw Error("DimMismatch", "vertex not in tangent lattice");
        tpos[id] = *x;
    }
    std::set<std::vector<int>> seen;
    for (const auto& sel : lex_subsets(int(ids.size()), d)) {
        IntMatrix rows(d - 1, d);
        const auto& base = tpos[ids[sel[0]]];
        for (int i = 1; i < d; ++i)
            for (int j = 0; j < d; ++j) rows.at(i - 1, j) = tpos[ids[sel[i]]][j] - base[j];
        Lattice ker = kernel_lattice(rows.transpose());
        if (ker.rank() != 1) continue;
        std::vector<Int> eta = ker.basis.row(0);
        bool pos = false, neg = false;
        std::vector<int> on;
        for (int id : ids) {
            Int val = 0;
            for (int j = 0; j < d; ++j) val += eta[j] * (tpos[id][j] - base[j]);
            if (val > 0) pos = true;
            else if (val < 0) neg = true;
            else on.push_back(id);
        }
        if (pos && neg) continue;
        if (!pos && !neg) continue;  // functional vanishes everywhere
        std::sort(on.begin(), on.end());
        if (seen.insert(on).second) out.push_back(on);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<int, std::vector<int>>> polytope_faces(const std::vector<std::vector<Int>>& coords,
                                                             const std::vector<int>& ids) {
    std::vector<std::pair<int, std::vector<int>>> out;
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> queue;
    std::vector<int> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    queue.push_back(sorted);
    seen.insert(sorted);
    while (!queue.empty()) {
        std::vector<int> cur = queue.back();
        queue.pop_back();
        out.push_back({affine_rank(coords, cur), cur});
        for (auto& f : polytope_facets(coords, cur))
            if (seen.insert(f).second) queue.push_back(f);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    return out;
}

std::vector<FacetFunctional> polytope_facet_functionals(const std::vector<std::vector<Int>>& coords,
                                                        const std::vector<int>& ids) {
    const int n = int(coords[ids[0]].size());
    if (affine_rank(coords, ids) != n)
        throw Error("DimMismatch", "facet functionals require a full-dimensional polytope");
    std::vector<FacetFunctional> out;
    for (const auto& fv : polytope_facets(coords, ids)) {
        IntMatrix rows(int(fv.size()) - 1, n);
        for (size_t i = 1; i < fv.size(); ++i)
            for (int j = 0; j < n; ++j) rows.at(int(i) - 1, j) = coords[fv[i]][j] - coords[fv[0]][j];
        Lattice ker = kernel_lattice(rows.transpose());
        if (ker.rank() != 1) throw Error("DimMismatch", "facet is not a hyperplane");
        std::vector<Int> eta = ker.basis.row(0);
        Int offset = 0;
        for (int j = 0; j < n; ++j) offset += eta[j] * coords[fv[0]][j];
        bool pos = false;
        for (int id : ids) {
            Int val = -offset;
            for (int j = 0; j < n; ++j) val += eta[j] * coords[id][j];
            if (val > 0) pos = true;
        }
        if (pos) {  // orient so the polytope satisfies eta*x <= offset
            for (auto& e : eta) e = -e;
            offset = -offset;
        }
        out.push_back({fv, eta, offset});
    }
    return out;
}

// ---------------------------------------------------------------------------
// strict pairwise intersection validation (rational vertex enumeration)

namespace {

using Rat = mpq_class;

struct LinearConstraint {
    std::vector<Rat> normal;
    Rat rhs;
    bool equality = false;  // normal*x = rhs, otherwise normal*x <= rhs
};

// particular rational solution of rows*x = rhs (free variables set to 0)
std::optional<std::vector<Rat>> rat_solve(std::vector<std::vector<Rat>> m, std::vector<Rat> b) {
    const int rows = int(m.size());
    if (rows == 0) return std::vector<Rat>{};
    const int cols = int(m[0].size());
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (m[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        std::swap(b[r], b[piv]);
        Rat inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        b[r] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (int j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (int i = r; i < rows; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<Rat> x(cols, 0);
    for (int i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
    return x;
}

int rat_rank(std::vector<std::vector<Rat>> m) {
    if (m.empty()) return 0;
    const int rows = int(m.size()), cols = int(m[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (m[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        for (int i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            Rat f = m[i][c] / m[r][c];
            for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

// ambient H-description of conv(ids): affine hull equalities + facet inequalities
std::vector<LinearConstraint> h_description(const std::vector<std::vector<Int>>& coords,
                                            const std::vector<int>& ids) {
    const int n = int(coords[ids[0]].size());
    std::vector<LinearConstraint> out;
    if (ids.size() >= 2) {
        IntMatrix diffs = difference_matrix(coords, ids);
        Lattice ann = kernel_lattice(diffs.transpose());
        int v0 = lex_least_vertex(coords, ids);
        for (int i = 0; i < ann.rank(); ++i) {
            LinearConstraint c;
            c.equality = true;
            c.normal.assign(n, 0);
            c.rhs = 0;
            for (int j = 0; j < n; ++j) {
                c.normal[j] = Rat(ann.basis.at(i, j));
                c.rhs += c.normal[j] * Rat(coords[v0][j]);
            }
            out.push_back(c);
        }
    } else {
        for (int j = 0; j < n; ++j) {
            LinearConstraint c;
            c.equality = true;
            c.normal.assign(n, 0);
            c.normal[j] = 1;
            c.rhs = Rat(coords[ids[0]][j]);
            out.push_back(c);
        }
        return out;
    }
    for (const auto& fv : polytope_facets(coords, ids)) {
        // solve eta*(f - f0) = 0 on the facet, eta*(w - f0) = 1 for w off it
        int w = -1;
        for (int id : ids)
            if (!std::binary_search(fv.begin(), fv.end(), id)) { w = id; break; }
        std::vector<std::vector<Rat>> sys;
        std::vector<Rat> rhs;
        for (size_t i = 1; i < fv.size(); ++i) {
            std::vector<Rat> row(n);
            for (int j = 0; j < n; ++j) row[j] = Rat(coords[fv[i]][j] - coords[fv[0]][j]);
            sys.push_back(row);
            rhs.push_back(0);
        }
        std::vector<Rat> wrow(n);
        for (int j = 0; j < n; ++j) wrow[j] = Rat(coords[w][j] - coords[fv[0]][j]);
        sys.push_back(wrow);
        rhs.push_back(1);
        auto eta = rat_solve(sys, rhs);
        if (!eta) throw Error("DimMismatch", "facet functional solve failed");
        LinearConstraint c;  // eta*x >= eta*f0  ->  (-eta)*x <= -eta*f0
        c.normal.assign(n, 0);
        c.rhs = 0;
        for (int j = 0; j < n; ++j) {
            c.normal[j] = -(*eta)[j];
            c.rhs += c.normal[j] * Rat(coords[fv[0]][j]);
        }
        out.push_back(c);
    }
    return out;
}

bool satisfies(const std::vector<LinearConstraint>& cs, const std::vector<Rat>& x) {
    for (const auto& c : cs) {
        Rat v = -c.rhs;
        for (size_t j = 0; j < x.size(); ++j) v += c.normal[j] * x[j];
        if (c.equality ? v != 0 : v > 0) return false;
    }
    return true;
}

// all vertices of the polytope cut out by cs (exact, small dimensions)
std::vector<std::vector<Rat>> enumerate_vertices(const std::vector<LinearConstraint>& cs, int n) {
    std::vector<std::vector<Rat>> eq_rows;
    std::vector<Rat> eq_rhs;
    std::vector<const LinearConstraint*> ineqs;
    for (const auto& c : cs) {
        if (c.equality) {
            eq_rows.push_back(c.normal);
            eq_rhs.push_back(c.rhs);
        } else
            ineqs.push_back(&c);
    }
    int base_rank = rat_rank(eq_rows);
    int need = n - base_rank;
    std::vector<std::vector<Rat>> found;
    auto try_set = [&](const std::vector<int>& sel) {
        auto rows = eq_rows;
        auto rhs = eq_rhs;
        for (int i : sel) {
            rows.push_back(ineqs[i]->normal);
            rhs.push_back(ineqs[i]->rhs);
        }
        if (rat_rank(rows) != n) return;
        auto x = rat_solve(rows, rhs);
        if (!x || !satisfies(cs, *x)) return;
        for (const auto& y : found)
            if (y == *x) return;
        found.push_back(*x);
    };
    if (need <= 0) {
        try_set({});
        return found;
    }
    if (need > int(ineqs.size())) return found;
    for (const auto& sel : lex_subsets(int(ineqs.size()), need)) try_set(sel);
    return found;
}

// the vertex set of the minimal face of conv(ids) containing the given points
std::vector<int> minimal_face_vertices(const std::vector<std::vector<Int>>& coords,
                                       const std::vector<int>& ids, const std::vector<int>& pts) {
    std::vector<LinearConstraint> hd = h_description(coords, ids);
    std::vector<int> cur = ids;
    std::sort(cur.begin(), cur.end());
    for (const auto& c : hd) {
        if (c.equality) continue;
        bool all_on = true;
        for (int p : pts) {
            Rat v = -c.rhs;
            for (size_t j = 0; j < c.normal.size(); ++j) v += c.normal[j] * Rat(coords[p][j]);
            if (v != 0) { all_on = false; break; }
        }
        if (!all_on) continue;
        std::vector<int> next;
        for (int id : cur) {
            Rat v = -c.rhs;
            for (size_t j = 0; j < c.normal.size(); ++j) v += c.normal[j] * Rat(coords[id][j]);
            if (v == 0) next.push_back(id);
        }
        cur = next;
    }
    return cur;
}

void verify_common_face(const std::vector<std::vector<Int>>& coords, const std::vector<int>& a,
                        const std::vector<int>& b) {
    const int n = int(coords[a[0]].size());
    std::vector<LinearConstraint> cs = h_description(coords, a);
    for (auto& c : h_description(coords, b)) cs.push_back(c);
    std::vector<std::vector<Rat>> verts = enumerate_vertices(cs, n);
    std::vector<int> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    for (const auto& v : verts) {
        bool matched = false;
        for (int id : common) {
            bool eq = true;
            for (int j = 0; j < n; ++j)
                if (v[j] != Rat(coords[id][j])) { eq = false; break; }
            if (eq) { matched = true; break; }
        }
        if (!matched)
            throw Error("ValidationError", "cells intersect outside their common face");
    }
    if (!common.empty()) {
        if (minimal_face_vertices(coords, a, common) != common ||
            minimal_face_vertices(coords, b, common) != common)
            throw Error("ValidationError", "shared vertices do not span a common face");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// constructors

Complex build_polyhedral(int ambient, const std::vector<std::vector<Int>>& vertices,
                         const std::vector<std::pair<int, std::vector<int>>>& cell_list, bool strict) {
    Complex k;
    k.polyhedral = true;
    k.ambient = ambient;
    k.vertex_coords = vertices;
    for (const auto& v : vertices)
        if (int(v.size()) != ambient) throw Error("DimMismatch", "vertex coordinate width != ambient rank");

    std::map<std::vector<int>, int> by_verts;
    for (const auto& [d, vts] : cell_list) {
        std::vector<int> v = vts;
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        if (v.size() != vts.size()) throw Error("DimMismatch", "repeated vertex in cell");
        for (int id : v)
            if (id < 0 || id >= int(vertices.size())) throw Error("UnknownCell", "vertex id " + std::to_string(id));
        int ar = affine_rank(vertices, v);
        if (ar != d)
            throw Error("DimMismatch", "cell with " + std::to_string(v.size()) + " vertices has affine rank " +
                                           std::to_string(ar) + ", stated dim " + std::to_string(d));
        Cell c;
        c.dim = d;
        c.vertices = v;
        if (by_verts.count(v)) throw Error("DimMismatch", "duplicate cell");
        by_verts[v] = k.num_cells();
        k.cells.push_back(c);
    }

    k.faces.assign(k.num_cells(), {});
    for (int c = 0; c < k.num_cells(); ++c) {
        if (k.cells[c].dim == 0) continue;
        for (const auto& fv : polytope_facets(vertices, k.cells[c].vertices)) {
            auto it = by_verts.find(fv);
            if (it == by_verts.end()) {
                std::ostringstream os;
                os << "face {";
                for (size_t i = 0; i < fv.size(); ++i) os << (i ? "," : "") << fv[i];
                os << "} of cell " << c << " is not listed";
                throw Error("DanglingFace", os.str());
            }
            k.faces[c].push_back({it->second, incidence_sign(vertices, fv, k.cells[c].vertices)});
        }
    }
    k.finalize();

    if (strict) {
        for (int i = 0; i < k.num_cells(); ++i)
            for (int j = i + 1; j < k.num_cells(); ++j) {
                if (k.leq(i, j) || k.leq(j, i)) continue;
                verify_common_face(vertices, k.cells[i].vertices, k.cells[j].vertices);
            }
    }
    return k;
}

Complex build_polyhedral_closure(int ambient, const std::vector<std::vector<Int>>& vertices,
                                 const std::vector<std::vector<int>>& top_cells, bool strict) {
    std::set<std::pair<int, std::vector<int>>> all;
    for (const auto& top : top_cells)
        for (auto& f : polytope_faces(vertices, top)) all.insert(f);
    std::vector<std::pair<int, std::vector<int>>> cell_list(all.begin(), all.end());
    std::sort(cell_list.begin(), cell_list.end());
    return build_polyhedral(ambient, vertices, cell_list, strict);
}

Complex build_abstract_cw(const std::vector<int>& cell_dims, const std::vector<SignedCover>& covers) {
    Complex k;
    for (int d : cell_dims) {
        Cell c;
        c.dim = d;
        if (d < 0) throw Error("UngradedPoset", "negative cell dimension");
        k.cells.push_back(c);
    }
    k.faces.assign(k.num_cells(), {});
    for (const auto& cv : covers) {
        if (cv.cell < 0 || cv.cell >= k.num_cells()) throw Error("UnknownCell", "cover cell id");
        if (cv.face < 0 || cv.face >= k.num_cells()) throw Error("UnknownCell", "cover face id");
        k.faces[cv.cell].push_back({cv.face, cv.sign});
    }
    k.finalize();
    return k;
}

// ---------------------------------------------------------------------------
// subcomplexes and stars

std::vector<int> open_star(const Complex& k, int e) {
    k.check_cell(e);
    std::vector<int> out;
    for (int c = 0; c < k.num_cells(); ++c)
        if (k.leq(e, c)) out.push_back(c);
    return out;
}

std::vector<int> closed_star(const Complex& k, int e) {
    return smallest_subcomplex(k, open_star(k, e));
}

std::vector<int> complex_minus(const Complex& k, int e) {
    k.check_cell(e);
    std::vector<int> out;
    for (int c = 0; c < k.num_cells(); ++c)
        if (!k.leq(e, c)) out.push_back(c);
    return out;
}

std::vector<int> smallest_subcomplex(const Complex& k, const std::vector<int>& a) {
    std::vector<char> in(k.num_cells(), 0);
    for (int e : a) {
        k.check_cell(e);
        for (int c = 0; c < k.num_cells(); ++c)
            if (k.leq(c, e)) in[c] = 1;
    }
    std::vector<int> out;
    for (int c = 0; c < k.num_cells(); ++c)
        if (in[c]) out.push_back(c);
    return out;
}

// ---------------------------------------------------------------------------
// flags, barycentric subdivision, links

namespace {

// all chains of the face poset restricted to `allowed`, in dimension order
std::vector<std::vector<int>> enumerate_flags(const Complex& k, const std::vector<int>& allowed) {
    std::vector<std::vector<std::vector<int>>> ending(k.num_cells());
    std::vector<std::vector<int>> out;
    std::vector<int> sorted = allowed;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [&](int a, int b) { return k.cells[a].dim < k.cells[b].dim; });
    for (int c : sorted) {
        ending[c].push_back({c});
        for (int f : sorted) {
            if (f == c || !k.leq(f, c)) continue;
            for (const auto& ch : ending[f]) {
                auto ext = ch;
                ext.push_back(c);
                ending[c].push_back(ext);
            }
        }
        for (const auto& ch : ending[c]) out.push_back(ch);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

Complex flag_complex(const Complex& k, const std::vector<int>& allowed) {
    Complex s;
    auto flags = enumerate_flags(k, allowed);
    std::map<std::vector<int>, int> index;
    for (const auto& fl : flags) {
        Cell c;
        c.dim = int(fl.size()) - 1;
        c.vertices = fl;
        c.carrier = fl.back();
        index[fl] = s.num_cells();
        s.cells.push_back(c);
    }
    s.faces.assign(s.num_cells(), {});
    for (const auto& fl : flags) {
        if (fl.size() < 2) continue;
        int c = index[fl];
        for (size_t i = 0; i < fl.size(); ++i) {
            auto sub = fl;
            sub.erase(sub.begin() + i);
            s.faces[c].push_back({index.at(sub), (i % 2 == 0) ? 1 : -1});
        }
    }
    s.finalize();
    return s;
}

}  // namespace

Complex barycentric_subdivision(const Complex& k) {
    std::vector<int> all(k.num_cells());
    for (int i = 0; i < k.num_cells(); ++i) all[i] = i;
    return flag_complex(k, all);
}

Complex link_complex(const Complex& k, int lo, int hi) {
    k.check_cell(lo);
    k.check_cell(hi);
    if (!k.leq(lo, hi) || lo == hi) throw Error("NotAdjacent", "cells are not a proper adjacent pair");
    if (k.cells[hi].dim - k.cells[lo].dim < 2)
        throw Error("GapTooSmall", "link complex needs dimension gap >= 2");
    std::vector<int> mid;
    for (int c = 0; c < k.num_cells(); ++c)
        if (c != lo && c != hi && k.leq(lo, c) && k.leq(c, hi)) mid.push_back(c);
    return flag_complex(k, mid);
}

// ---------------------------------------------------------------------------
// dihomologic pseudo-subdivision

DihomIndex dihom_index(const Complex& k) {
    DihomIndex ix;
    for (int p = 0; p <= k.dim(); ++p)
        for (int q = p; q <= k.dim(); ++q) {
            std::vector<int> blk;
            for (int lo : k.cells_of_dim(p))
                for (int hi : k.cells_of_dim(q)) {
                    if (!k.leq(lo, hi)) continue;
                    blk.push_back(int(ix.cells.size()));
                    ix.index[{lo, hi}] = int(ix.cells.size());
                    ix.cells.push_back({lo, hi});
                }
            ix.blocks[{p, q}] = blk;
        }
    return ix;
}

int DihomIndex::at(int lo, int hi) const {
    auto it = index.find({lo, hi});
    if (it == index.end()) throw Error("UnknownCell", "no dihomologic cell for that pair");
    return it->second;
}

std::vector<DihomCell> dihomologic_cells(const Complex& k) { return dihom_index(k).cells; }

std::vector<std::pair<DihomCell, int>> dihom_faces(const Complex& k, const DihomCell& c) {
    k.check_cell(c.lo);
    k.check_cell(c.hi);
    if (!k.leq(c.lo, c.hi)) throw Error("NotAdjacent", "not an adjacent pair");
    std::vector<std::pair<DihomCell, int>> out;
    const int p = k.cells[c.lo].dim;
    // raise the first coordinate: (e^{p+1} <= e^q), coefficient (-1)^{p+1} i(e^p, e^{p+1})
    for (const auto& [m, s] : k.cofaces[c.lo]) {
        if (!k.leq(m, c.hi)) continue;
        out.push_back({{m, c.hi}, (p % 2 == 0 ? -1 : 1) * s});
    }
    // lower the second coordinate: (e^p <= e^{q-1}), coefficient (-1)^p i(e^{q-1}, e^q)
    for (const auto& [m, s] : k.faces[c.hi]) {
        if (!k.leq(c.lo, m)) continue;
        out.push_back({{c.lo, m}, (p % 2 == 0 ? 1 : -1) * s});
    }
    return out;
}

}  // namespace troplef
