#pragma once

#include <map>
#include <optional>

#include "troplef/complex.hpp"

namespace troplef {

/// Cellular cosheaf: a free module per cell and extension matrices along the
/// elementary (codimension-1) adjacencies, from coface value to face value.
/// Longer compositions are derived on demand; path independence is the
/// functoriality invariant validated on every codimension-2 square.
struct Cosheaf {
    const Complex* base = nullptr;
    CoeffRing ring = CoeffRing::Z();
    std::vector<int> rank;
    /// Optional per-cell basis rows inside an ambient module, for
    /// sublattice-valued cosheaves.
    std::vector<std::optional<IntMatrix>> embedding;
    std::map<std::pair<int, int>, IntMatrix> ext;  // (face, cell) -> rank(cell) x rank(face)

    const IntMatrix& elementary(int face, int cell) const;
    /// Extension morphism along an arbitrary pair face <= cell.
    IntMatrix extension(int face, int cell) const;
    void validate() const;

    bool operator==(const Cosheaf& o) const {
        return ring == o.ring && rank == o.rank && ext == o.ext;
    }
};

/// Natural transformation between cosheaves on the same base.
struct CosheafMorphism {
    Cosheaf source, target;
    std::vector<IntMatrix> component;  // per cell, rank_src x rank_tgt

    void validate() const;  // throws Error("NaturalityViolation")
};

/// Dihomologic cosheaf: a free module per pseudo-cell and extension matrices
/// along the two elementary moves (raise the first coordinate, lower the
/// second); the elementary square must commute.
struct DihomCosheaf {
    const Complex* base = nullptr;
    DihomIndex ix;
    CoeffRing ring = CoeffRing::Z();
    std::vector<int> rank;
    std::vector<std::optional<IntMatrix>> embedding;
    std::map<std::pair<int, int>, IntMatrix> ext_first;   // (pc, pc with raised lo)
    std::map<std::pair<int, int>, IntMatrix> ext_second;  // (pc, pc with lowered hi)

    const IntMatrix& first(int from, int to) const;
    const IntMatrix& second(int from, int to) const;
    void validate() const;

    bool operator==(const DihomCosheaf& o) const {
        return ring == o.ring && rank == o.rank && ext_first == o.ext_first && ext_second == o.ext_second;
    }
};

struct DihomMorphism {
    DihomCosheaf source, target;
    std::vector<IntMatrix> component;  // per pseudo-cell

    void validate() const;
};

/// Cellular sheaf data used by compactly supported cochains: free value per
/// cell with restriction matrices from face value to coface value.
struct Sheaf {
    const Complex* base = nullptr;
    CoeffRing ring = CoeffRing::Z();
    std::vector<int> rank;
    std::map<std::pair<int, int>, IntMatrix> res;  // (face, cell) -> rank(face) x rank(cell)

    const IntMatrix& elementary(int face, int cell) const;
    void validate() const;
};

Cosheaf constant_cosheaf(const Complex& k, int rank, CoeffRing ring = CoeffRing::Z());
Sheaf constant_sheaf(const Complex& k, int rank, CoeffRing ring = CoeffRing::Z());

/// The characteristic cosheaf [sub1; sub2; R^rank]: value on cells of sub1
/// not in sub2, zero elsewhere, identity-or-zero extensions. Both arguments
/// must be subcomplexes with sub2 contained in sub1.
Cosheaf characteristic_cosheaf(const Complex& k, const std::vector<int>& sub1,
                               const std::vector<int>& sub2, int rank,
                               CoeffRing ring = CoeffRing::Z());

/// Localisation F_e = F (x) [K; K-e; Z] together with the projection F -> F_e.
std::pair<Cosheaf, CosheafMorphism> localize(const Cosheaf& f, int e);

/// The surjective localisation morphism F_e -> F_e' for adjacent e <= e'.
CosheafMorphism localization_morphism(const Cosheaf& f, int e, int eprime);

/// Pull a cosheaf on k back onto a subdivision kprime along its carrier map.
Cosheaf subdivide_cosheaf(const Cosheaf& f, const Complex& k, const Complex& kprime);

/// Dihomologic subdivision: value F(hi) on the pseudo-cell (lo, hi).
DihomCosheaf dihom_subdivide(const Cosheaf& f, const Complex& k);

/// Localisation of a dihomologic cosheaf by fixing the first coordinate at e.
Cosheaf fix_first_localize(const DihomCosheaf& f, int e);

Cosheaf tensor_ring(const Cosheaf& f, const CoeffRing& ring);
DihomCosheaf tensor_ring(const DihomCosheaf& f, const CoeffRing& ring);

/// Cellwise cokernel with induced extensions; field coefficients only.
Cosheaf morphism_cokernel(const CosheafMorphism& f);

}  // namespace troplef
