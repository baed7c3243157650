#pragma once

#include <optional>
#include <vector>

#include "troplef/lattice.hpp"

namespace troplef {

/// Dense matrix over F_p, entries canonicalized into [0, p). Same row-vector
/// convention as IntMatrix: an r x c matrix maps v to v*M.
struct FpMatrix {
    long long p = 0;
    int rows = 0, cols = 0;
    std::vector<long long> a;

    FpMatrix() = default;
    FpMatrix(long long p, int rows, int cols)
        : p(p), rows(rows), cols(cols), a(size_t(rows) * cols, 0) {}

    long long& at(int i, int j) { return a[size_t(i) * cols + j]; }
    long long at(int i, int j) const { return a[size_t(i) * cols + j]; }

    static FpMatrix identity(long long p, int n);
    bool operator==(const FpMatrix& o) const = default;
};

FpMatrix fp_from(const IntMatrix& m, long long p);
IntMatrix fp_to_int(const FpMatrix& m);

long long fp_inv(long long a, long long p);

FpMatrix fp_mul(const FpMatrix& a, const FpMatrix& b);

/// In-place reduced row echelon form; returns the pivot columns.
std::vector<int> fp_rref(FpMatrix& m);

int fp_rank(const IntMatrix& m, long long p);

/// Basis rows (in rref) of {v : v*m = 0}.
FpMatrix fp_kernel(const FpMatrix& m);

/// Any solution x of x*a = v, or nullopt.
std::optional<std::vector<long long>> fp_solve_left(const FpMatrix& a, const std::vector<long long>& v);

}  // namespace troplef
