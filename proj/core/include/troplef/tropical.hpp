#pragma once

#include "troplef/homology.hpp"

namespace troplef {

/// A full-dimensional integer polytope P (as its face complex) together with
/// an integer polyhedral subdivision K whose cells carry faces of P. Both
/// complexes index into the same vertex coordinate table.
struct TropicalSetup {
    int n = 0;
    Complex p;
    Complex k;
};

/// Compute the minimal containing face of `faces` (a full-dimensional
/// polytope's face complex) for every cell of `sub` and store it as the
/// carrier. Both complexes must share a vertex coordinate table.
void assign_carriers(const Complex& faces, Complex& sub);

/// Validate the pair and fill in carriers (or check supplied ones).
TropicalSetup make_setup(Complex p, Complex k);

/// True iff every codimension-q face lies in exactly q facets.
bool validate_simple(const Complex& p);

struct SedData {
    std::vector<Lattice> sed;             // annihilator lattice of the tangent space, per face
    std::vector<Lattice> sed1;            // sum of the facet sedentarities through the face
    std::vector<GroupStructure> delta;    // sed / sed1
};
SedData sedentarity(const Complex& p);

/// lcm of the exponents of Delta over the vertices; requires a simple polytope.
Int delta_invariant(const Complex& p);

/// theta of one integer polytope (vertex coordinate list); 1 in dimension <= 1.
Int theta_cell(const std::vector<std::vector<Int>>& coords, const std::vector<int>& ids);

/// lcm of theta over all cells of the complex.
Int theta_complex(const Complex& k);

/// Closed formula for triangles: 2 vol(T) gcd(edge lengths) / product of edge lengths.
Int theta_triangle(const std::vector<std::vector<Int>>& coords, const std::vector<int>& ids);

/// The toric-variety side cosheaf /\^p (t(Z)/Sed) as a cellular cosheaf on the
/// face complex of the polytope.
Cosheaf f0_face_cosheaf(const TropicalSetup& s, int p);

/// The same cosheaf pushed onto the dihomologic cells of K.
DihomCosheaf f0_cosheaf(const TropicalSetup& s, int p);

struct F1Data {
    DihomCosheaf f1;
    DihomCosheaf f0;
    DihomMorphism inclusion;  // f1 -> f0
};
/// The hypersurface-side cosheaf: the edge-kernel sum inside f0, stored as an
/// HNF sublattice basis per pseudo-cell, with the natural inclusion.
F1Data f1_cosheaf(const TropicalSetup& s, int p);

struct HodgeDiamond {
    int n = 0;
    char which = 'Y';  // 'Y' toric variety (f0), 'X' hypersurface (f1)
    CoeffRing ring;
    std::vector<std::vector<GroupStructure>> entry;  // [p][q], 0 <= p,q <= n

    const GroupStructure& at(int p, int q) const { return entry[p][q]; }
};
HodgeDiamond hodge_diamond(const TropicalSetup& s, char which, CoeffRing ring, int threads = 1);

struct LefschetzEntry {
    int p = 0, q = 0;
    GroupStructure x_group, y_group;  // H_{p,q}(X), H_{p,q}(Y)
    GroupStructure kernel, cokernel;
    bool injective = false, surjective = false;

    bool iso() const { return injective && surjective; }
    std::string cls() const { return iso() ? "iso" : (surjective ? "surjective" : "neither"); }
};
struct LefschetzReport {
    int n = 0;
    CoeffRing ring;
    std::vector<LefschetzEntry> entries;  // p in [0,n], q in [0,n], p-major
    bool compliant = true;                // iso below n-1, surjective on p+q = n-1

    const LefschetzEntry& at(int p, int q) const;
};
LefschetzReport lefschetz_analysis(const TropicalSetup& s, CoeffRing ring, int threads = 1);

/// Alternating sum of face counts giving the h-numbers of the polar polytope.
Int h_number_formula(const Complex& p, int idx);

struct KoszulComplex {
    ChainComplex complex;     // degree k: sum over k-subsets F of /\^{p-k}(V/<F>)
    IntMatrix augmentation;   // C_0 -> /\^p(V/<G>)
    int quotient_rank = 0;    // rank of /\^p(V/<G>)
};
KoszulComplex koszul_resolution(int n, const std::vector<std::vector<Int>>& gens, int p);

/// K dual to the tropical polynomial with the given rational coefficients
/// (max-plus upper hull by default); absent lifts drop the point. Returns the
/// full setup: Newton polytope faces, subdivision, carriers.
TropicalSetup regular_subdivision(int n, const std::vector<std::vector<Int>>& points,
                                  const std::vector<std::optional<mpq_class>>& lifts,
                                  bool min_convention = false);

}  // namespace troplef
