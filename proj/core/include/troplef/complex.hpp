#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "troplef/lattice.hpp"

namespace troplef {

struct Cell {
    int dim = 0;
    std::vector<int> vertices;  // polyhedral: sorted vertex ids; barycentric: the flag in dimension order
    int carrier = -1;           // cell id in a parent complex, set by subdivision operations
};

/// Ordered adjacent cell pair e^p <= e^q; a dihomologic pseudo-cell of
/// dimension q - p. lo == hi is the dimension-0 pseudo-cell on that cell.
struct DihomCell {
    int lo = 0, hi = 0;
    bool operator==(const DihomCell& o) const = default;
    bool operator<(const DihomCell& o) const { return std::pair(lo, hi) < std::pair(o.lo, o.hi); }
};

/// Finite regular CW complex given by its graded face poset with incidence
/// signs; optionally carries integer polyhedral geometry. Immutable after
/// construction; all queries are read-only.
class Complex {
public:
    bool polyhedral = false;
    int ambient = 0;
    std::vector<std::vector<Int>> vertex_coords;  // polyhedral mode
    std::vector<Cell> cells;
    std::vector<std::vector<std::pair<int, int>>> faces;    // per cell: codim-1 (face id, sign)
    std::vector<std::vector<std::pair<int, int>>> cofaces;  // per cell: (coface id, sign)

    int num_cells() const { return int(cells.size()); }
    int dim() const { return dim_; }
    const std::vector<int>& cells_of_dim(int d) const;

    /// Reflexive face relation a <= b.
    bool leq(int a, int b) const { return leq_[size_t(b) * cells.size() + a] != 0; }

    /// Incidence sign of a codim-1 pair, 0 when not a codim-1 face.
    int incidence(int face, int cell) const;

    void check_cell(int e) const;

    /// Build caches and validate gradedness plus the diamond condition.
    void finalize();

private:
    int dim_ = -1;
    std::vector<std::vector<int>> by_dim_;
    std::vector<char> leq_;
    static const std::vector<int> empty_;
};

struct SignedCover {
    int face = 0, cell = 0, sign = 0;
};

/// Polyhedral complex from integer vertex coordinates and explicit cell list
/// (dim + vertex ids). Every face of a listed cell must itself be listed.
/// Incidence signs are computed geometrically. With strict set, also verifies
/// that any two cells intersect in a common face.
Complex build_polyhedral(int ambient, const std::vector<std::vector<Int>>& vertices,
                         const std::vector<std::pair<int, std::vector<int>>>& cell_list,
                         bool strict = false);

/// Abstract CW complex from dims and user-supplied signed covers. Gradedness
/// and the diamond condition are validated; regularity itself is assumed.
Complex build_abstract_cw(const std::vector<int>& cell_dims, const std::vector<SignedCover>& covers);

/// Convenience constructor: list only the maximal polytopes; every face is
/// enumerated and included. Cells are ordered by dimension, then vertex list.
Complex build_polyhedral_closure(int ambient, const std::vector<std::vector<Int>>& vertices,
                                 const std::vector<std::vector<int>>& top_cells, bool strict = false);

std::vector<int> open_star(const Complex& k, int e);
std::vector<int> closed_star(const Complex& k, int e);
std::vector<int> complex_minus(const Complex& k, int e);
std::vector<int> smallest_subcomplex(const Complex& k, const std::vector<int>& a);

/// Abstract simplicial complex on the flags of k; vertex i of the output is
/// cell i of k, carriers point to the maximal flag element.
Complex barycentric_subdivision(const Complex& k);

/// All dihomologic pseudo-cells, grouped by type (p,q) = (dim lo, dim hi),
/// p ascending then q ascending; within a block lo then hi in input order.
struct DihomIndex {
    std::vector<DihomCell> cells;
    std::map<std::pair<int, int>, std::vector<int>> blocks;  // (p,q) -> indices
    std::map<std::pair<int, int>, int> index;                // (lo,hi) -> index

    int at(int lo, int hi) const;
};
DihomIndex dihom_index(const Complex& k);

std::vector<DihomCell> dihomologic_cells(const Complex& k);

/// Codim-1 faces of a pseudo-cell with their boundary coefficients relative
/// to reference relative orientations.
std::vector<std::pair<DihomCell, int>> dihom_faces(const Complex& k, const DihomCell& c);

/// The simplicial complex A(lo;hi) on the strictly intermediate flags.
Complex link_complex(const Complex& k, int lo, int hi);

// ---- integer polytope helpers (exact geometry) ----

int affine_rank(const std::vector<std::vector<Int>>& coords, const std::vector<int>& ids);

/// Saturated lattice of integer tangent vectors of the polytope spanned by ids.
Lattice tangent_lattice(const std::vector<std::vector<Int>>& coords, const std::vector<int>& ids);

/// Reference orientation frame: HNF rows of the vertex differences out of the
/// lexicographically least vertex.
IntMatrix reference_basis(const std::vector<std::vector<Int>>& coords, const std::vector<int>& ids);

/// Geometric incidence sign for a codim-1 pair of polytopes, outward normal first.
int incidence_sign(const std::vector<std::vector<Int>>& coords, const std::vector<int>& face_ids,
                   const std::vector<int>& cell_ids);

/// Facet vertex sets of conv(ids), as sorted id lists.
std::vector<std::vector<int>> polytope_facets(const std::vector<std::vector<Int>>& coords,
                                              const std::vector<int>& ids);

/// The whole face lattice of conv(ids) including the polytope itself and its
/// vertices, as (dim, sorted ids), deduplicated, dim descending.
std::vector<std::pair<int, std::vector<int>>> polytope_faces(const std::vector<std::vector<Int>>& coords,
                                                             const std::vector<int>& ids);

/// Supporting functional of each facet of a full-dimensional polytope:
/// normal*x <= offset on the polytope, equality exactly on the facet.
struct FacetFunctional {
    std::vector<int> vertex_ids;
    std::vector<Int> normal;
    Int offset;
};
std::vector<FacetFunctional> polytope_facet_functionals(const std::vector<std::vector<Int>>& coords,
                                                        const std::vector<int>& ids);

}  // namespace troplef
