#pragma once

#include <map>
#include <vector>

#include "troplef/cosheaf.hpp"

namespace troplef {

/// Names one coordinate of a chain group: the carrying (pseudo-)cell plus the
/// index into its value basis. hi < 0 marks a cellular (single-cell) tag.
struct BasisTag {
    int lo = -1;
    int hi = -1;
    int comp = 0;
};

/// Chain complex of free modules in degrees 0..top, boundary in row-vector
/// convention: a degree-k chain x maps to x * boundary[k] in degree k-1.
struct ChainComplex {
    CoeffRing ring = CoeffRing::Z();
    std::vector<int> dims;
    std::vector<IntMatrix> boundary;  // boundary[k]: dims[k] x dims[k-1]; boundary[0] is dims[0] x 0
    std::vector<std::vector<BasisTag>> basis;

    int top() const { return int(dims.size()) - 1; }
    int dim_at(int k) const { return (k >= 0 && k < int(dims.size())) ? dims[k] : 0; }
    IntMatrix boundary_at(int k) const;

    /// dd = 0 over the complex's ring; throws Error("NotAComplex").
    void check() const;
};

struct DegreeHomology {
    GroupStructure group;
    IntMatrix free_reps;     // free_rank x dims[k], cycle representatives
    IntMatrix torsion_reps;  // one row per invariant factor
    std::vector<Int> torsion_orders;
    IntMatrix cycle_rows;     // canonical cycle basis
    IntMatrix boundary_rows;  // canonical image basis
};

struct HomologyResult {
    CoeffRing ring = CoeffRing::Z();
    std::vector<DegreeHomology> degree;

    const GroupStructure& group(int k) const;
    int top() const { return int(degree.size()) - 1; }
};

HomologyResult homology(const ChainComplex& c);

/// Chain map; owns both complexes so returned maps stay self-contained.
struct ChainMap {
    ChainComplex src, tgt;
    std::vector<IntMatrix> block;  // per degree, dims_src[k] x dims_tgt[k]

    /// Commutation with the boundaries; throws Error("NotChainMap").
    void check() const;
};

struct DegreeMap {
    IntMatrix matrix;  // rows: source generators (free then torsion); columns: target generators
    GroupStructure kernel, cokernel;
    bool injective = false, surjective = false;
    bool iso() const { return injective && surjective; }
};

struct HomologyMap {
    CoeffRing ring = CoeffRing::Z();
    std::vector<DegreeMap> degree;
};

HomologyMap induced_map(const ChainMap& f);

// ---- complexes from cosheaves ----

ChainComplex chain_complex(const Complex& k, const Cosheaf& f);
ChainComplex dihom_chain_complex(const Complex& k, const DihomCosheaf& f);

/// Compactly supported cochains of a cellular sheaf, stored with reversed
/// grading: stored degree j holds the cochain degree (dim K - j), so one
/// homology engine serves both directions. Reports relabel.
ChainComplex cochain_complex_compact(const Complex& k, const Sheaf& g);

/// The (p,q)-graded pieces of the dihomologic chain complex with the two
/// anticommuting differentials d1 (bidegree (+1,0)) and d2 (bidegree (0,-1)).
struct Bicomplex {
    const Complex* k = nullptr;
    CoeffRing ring = CoeffRing::Z();
    int maxdim = 0;
    std::map<std::pair<int, int>, std::vector<int>> blocks;      // (p,q) -> pseudo-cell indices
    std::map<std::pair<int, int>, std::vector<BasisTag>> basis;  // per block
    std::map<std::pair<int, int>, IntMatrix> d1, d2;

    int block_rank(int p, int q) const;
    const IntMatrix& d1_at(int p, int q) const;
    const IntMatrix& d2_at(int p, int q) const;

    /// d1 d1 = 0, d2 d2 = 0, d1 d2 + d2 d1 = 0, all exact.
    void check() const;
};

Bicomplex bicomplex(const Complex& k, const DihomCosheaf& f);

/// The block isomorphism Phi_{p,q} from Omega_{p,q} onto the (e^p)-indexed sum
/// of localized chain groups; a signed identity in the shared basis.
IntMatrix phi_map(const Bicomplex& b, int p, int q);

/// Boundary of the localized sum complex (+)_{e^p} C_q(K;F_{e^p}) -> C_{q-1},
/// assembled from the fix-first localisations; shares the Omega_{p,q} basis.
IntMatrix localized_boundary(const Complex& k, const DihomCosheaf& f, int p, int q);

/// Coboundary step (+)_{e^p} C_q(K;F_{e^p}) -> (+)_{e^{p+1}} C_q(K;F_{e^{p+1}})
/// induced by the localisation morphisms, with the cover signs.
IntMatrix localized_cochain_step(const Complex& k, const DihomCosheaf& f, int p, int q);

// ---- subdivision chain maps ----

/// Injective quasi-isomorphism from chains on k to chains on the subdivision
/// kprime (carriers required). Works for polyhedral subdivisions and for the
/// abstract barycentric subdivision.
ChainMap subdivision_chain_map(const Complex& k, const Complex& kprime, const Cosheaf& f);

/// Injective quasi-isomorphism into the dihomologic chains of the subdivided
/// cosheaf, c |-> sum over vertices of [e^0; e^k].
ChainMap dihom_subdivision_chain_map(const Complex& k, const Cosheaf& f);

// ---- Poincare-Lefschetz pipeline ----

/// Nonvanishing homology degrees of the localisation at every cell.
std::vector<std::vector<int>> local_homology_profile(const Complex& k, const DihomCosheaf& f,
                                                     int threads = 1);

struct PlDual {
    ChainComplex dual;   // stored degree j holds the cochain degree n-j
    ChainMap inclusion;  // dual -> total dihomologic complex, degreewise
};

/// The dual cochain complex: its degree-p block is ker d2 inside the
/// e^p-blocks of Omega_{p,n}, with coboundary d1. Requires dim K = n and the
/// concentration hypothesis; throws Error("HypothesisFailed") otherwise.
PlDual pl_dual_complex(const Complex& k, const DihomCosheaf& f, int threads = 1);

struct PlReport {
    int n = 0;
    std::vector<GroupStructure> h_total;  // H_k(K;F), k = 0..n
    std::vector<GroupStructure> h_dual;   // H^{n-k} of the dual complex, aligned to k
    std::vector<bool> equal;
    bool vanishing_above_n = true;
    bool all_equal() const;
};

PlReport pl_verify(const Complex& k, const DihomCosheaf& f, int threads = 1);

}  // namespace troplef
