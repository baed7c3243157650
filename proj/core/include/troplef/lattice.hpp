#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "troplef/error.hpp"

namespace troplef {

using Int = mpz_class;

/// Dense integer matrix, row-major. A matrix M of shape r x c represents the
/// map Z^r -> Z^c sending a row vector v to v*M. Degenerate shapes (0 x c,
/// r x 0) are valid and stand for zero maps.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}
    IntMatrix(int rows, int cols, std::vector<Int> entries);

    static IntMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& at(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const Int& at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    std::vector<Int> row(int i) const;
    void set_row(int i, const std::vector<Int>& v);

    bool is_zero() const;
    bool operator==(const IntMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    IntMatrix transpose() const;
    std::string str() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a);
IntMatrix operator*(const Int& c, const IntMatrix& a);

std::vector<Int> operator*(const std::vector<Int>& v, const IntMatrix& m);

/// Vertical stack; both operands must agree on column count.
IntMatrix stack_rows(const IntMatrix& a, const IntMatrix& b);

Int det(const IntMatrix& m);  // square only, fraction-free elimination
int rank(const IntMatrix& m);

struct HnfResult {
    IntMatrix h;  // row Hermite normal form, zero rows last, positive pivots
    IntMatrix u;  // unimodular, h = u*m
};
HnfResult hnf(const IntMatrix& m);

struct SnfResult {
    std::vector<Int> d;  // invariant factors, d1 | d2 | ..., zero factors last
    IntMatrix s, t;      // unimodular, s*m*t = diag(d)
};
SnfResult snf(const IntMatrix& m);

/// Inverse of a unimodular integer matrix.
IntMatrix inverse_unimodular(const IntMatrix& u);

/// A sublattice of Z^ambient given by independent generator rows in row HNF.
/// The HNF basis is a canonical representative: equal lattices compare equal.
struct Lattice {
    int ambient = 0;
    IntMatrix basis;  // rank x ambient, row HNF, no zero rows

    static Lattice full(int n) { return Lattice{n, IntMatrix::identity(n)}; }
    static Lattice zero(int n) { return Lattice{n, IntMatrix(0, n)}; }

    int rank() const { return basis.rows(); }
    bool operator==(const Lattice& o) const { return ambient == o.ambient && basis == o.basis; }
};

/// Canonicalize arbitrary generator rows into a Lattice (HNF, zero rows dropped).
Lattice row_span(const IntMatrix& generators, int ambient);

/// {v in Z^rows(m) : v*m = 0}; always saturated.
Lattice kernel_lattice(const IntMatrix& m);

Lattice lattice_sum(const Lattice& a, const Lattice& b);

/// Smallest saturated lattice containing l.
Lattice saturation(const Lattice& l);

/// Integer coordinates of v in l's basis, or nullopt when v is not in l.
std::optional<std::vector<Int>> solve_in_lattice(const Lattice& l, const std::vector<Int>& v);

/// Any integer solution x of x*a = v, or nullopt.
std::optional<std::vector<Int>> solve_left(const IntMatrix& a, const std::vector<Int>& v);

struct GroupStructure {
    int free_rank = 0;
    std::vector<Int> torsion;  // invariant factors >= 2, divisibility chain

    bool trivial() const { return free_rank == 0 && torsion.empty(); }
    Int exponent() const { return torsion.empty() ? Int(1) : torsion.back(); }
    bool operator==(const GroupStructure& o) const {
        return free_rank == o.free_rank && torsion == o.torsion;
    }
    std::string str() const;
};

/// Structure of sup/sub. Throws Error("NotSublattice") when sub is not
/// contained in sup.
GroupStructure quotient_structure(const Lattice& sub, const Lattice& sup);

struct CoeffRing {
    enum Tag { INT, RAT, MODP } tag = INT;
    long p = 0;  // prime, MODP only

    static CoeffRing Z() { return {INT, 0}; }
    static CoeffRing Q() { return {RAT, 0}; }
    static CoeffRing Fp(long p);

    bool is_field() const { return tag != INT; }
    bool operator==(const CoeffRing& o) const { return tag == o.tag && p == o.p; }
    std::string str() const;
};

/// Parse "Z", "Q" or "F<p>". Throws Error("BadCoeffRing").
CoeffRing parse_coeff_ring(const std::string& s);

int rank_over(const IntMatrix& m, const CoeffRing& ring);

/// Lexicographically ordered k-subsets of {0,...,n-1}.
const std::vector<std::vector<int>>& lex_subsets(int n, int k);
long long binom(int n, int k);

/// Matrix of the p-th exterior power of m in lex subset bases; entries are
/// p x p minors. Shape C(rows,p) x C(cols,p); the 0-th power is the 1x1 identity.
IntMatrix wedge_power_map(const IntMatrix& m, int p);

/// Matrix of v -> omega . v from /\^p Z^n to /\^{p-r} Z^n where omega is an
/// r-form in the lex basis of /\^r of the dual module, and the contraction is
/// fixed by the pairing alpha(omega.v) = (alpha ^ omega)(v). Zero map when p < r.
IntMatrix contraction_map(const std::vector<Int>& omega, int r, int n, int p);

/// Matrix of w -> v ^ w from /\^j Z^n to /\^{j+1} Z^n.
IntMatrix wedge_by_vector(const std::vector<Int>& v, int j, int n);

/// Explicit coordinates on Z^n / S for a saturated lattice S: quotient
/// coordinates of v are v*proj, and lift rows represent the quotient basis.
struct QuotientBasis {
    int ambient = 0;
    int rank = 0;
    IntMatrix proj;  // ambient x rank
    IntMatrix lift;  // rank x ambient, lift*proj = identity
};
QuotientBasis quotient_basis(const Lattice& s);

Int lcm(const Int& a, const Int& b);
Int gcd_of(const std::vector<Int>& v);

}  // namespace troplef
