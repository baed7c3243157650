#include "troplef/fpfield.hpp"

namespace troplef {

FpMatrix FpMatrix::identity(long long p, int n) {
    FpMatrix m(p, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1 % p;
    return m;
}

FpMatrix fp_from(const IntMatrix& m, long long p) {
    FpMatrix r(p, m.rows(), m.cols());
    Int q;
    const Int pz = long(p);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            mpz_mod(q.get_mpz_t(), m.at(i, j).get_mpz_t(), pz.get_mpz_t());
            r.at(i, j) = q.get_si();
        }
    return r;
}

IntMatrix fp_to_int(const FpMatrix& m) {
    IntMatrix r(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(i, j) = long(m.at(i, j));
    return r;
}

long long fp_inv(long long a, long long p) {
    long long t = 0, nt = 1, r = p, nr = a % p;
    while (nr != 0) {
        long long q = r / nr;
        long long tmp = t - q * nt;
        t = nt; nt = tmp;
        tmp = r - q * nr;
        r = nr; nr = tmp;
    }
    if (r != 1) throw Error("NotInvertible", "element not invertible mod p");
    return ((t % p) + p) % p;
}

FpMatrix fp_mul(const FpMatrix& a, const FpMatrix& b) {
    if (a.cols != b.rows || a.p != b.p) throw Error("BadShape", "fp product shape mismatch");
    FpMatrix c(a.p, a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            long long x = a.at(i, k);
            if (x == 0) continue;
            for (int j = 0; j < b.cols; ++j) c.at(i, j) = (c.at(i, j) + x * b.at(k, j)) % a.p;
        }
    return c;
}

std::vector<int> fp_rref(FpMatrix& m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int piv = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.at(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(piv, j));
        long long inv = fp_inv(m.at(r, c), m.p);
        for (int j = 0; j < m.cols; ++j) m.at(r, j) = m.at(r, j) * inv % m.p;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            long long f = m.at(i, c);
            for (int j = 0; j < m.cols; ++j)
                m.at(i, j) = ((m.at(i, j) - f * m.at(r, j)) % m.p + m.p) % m.p;
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

int fp_rank(const IntMatrix& m, long long p) {
    FpMatrix f = fp_from(m, p);
    return int(fp_rref(f).size());
}

FpMatrix fp_kernel(const FpMatrix& m) {
    // eliminate with a mirrored identity; transform rows of zero rows span the kernel
    FpMatrix w = m;
    FpMatrix u = FpMatrix::identity(m.p, m.rows);
    int r = 0;
    for (int c = 0; c < w.cols && r < w.rows; ++c) {
        int piv = -1;
        for (int i = r; i < w.rows; ++i)
            if (w.at(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r) {
            for (int j = 0; j < w.cols; ++j) std::swap(w.at(r, j), w.at(piv, j));
            for (int j = 0; j < u.cols; ++j) std::swap(u.at(r, j), u.at(piv, j));
        }
        for (int i = r + 1; i < w.rows; ++i) {
            if (w.at(i, c) == 0) continue;
            long long f = w.at(i, c) * fp_inv(w.at(r, c), w.p) % w.p;
            for (int j = 0; j < w.cols; ++j)
                w.at(i, j) = ((w.at(i, j) - f * w.at(r, j)) % w.p + w.p) % w.p;
            for (int j = 0; j < u.cols; ++j)
                u.at(i, j) = ((u.at(i, j) - f * u.at(r, j)) % u.p + u.p) % u.p;
        }
        ++r;
    }
    FpMatrix ker(m.p, m.rows - r, m.rows);
    for (int i = r; i < m.rows; ++i)
        for (int j = 0; j < m.rows; ++j) ker.at(i - r, j) = u.at(i, j);
    fp_rref(ker);
    return ker;
}

std::optional<std::vector<long long>> fp_solve_left(const FpMatrix& a, const std::vector<long long>& v) {
    // row-reduce [a | I], then eliminate v against the reduced rows
    FpMatrix w = a;
    FpMatrix u = FpMatrix::identity(a.p, a.rows);
    int r = 0;
    std::vector<int> pivots;
    for (int c = 0; c < w.cols && r < w.rows; ++c) {
        int piv = -1;
        for (int i = r; i < w.rows; ++i)
            if (w.at(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r) {
            for (int j = 0; j < w.cols; ++j) std::swap(w.at(r, j), w.at(piv, j));
            for (int j = 0; j < u.cols; ++j) std::swap(u.at(r, j), u.at(piv, j));
        }
        long long inv = fp_inv(w.at(r, c), w.p);
        for (int j = 0; j < w.cols; ++j) w.at(r, j) = w.at(r, j) * inv % w.p;
        for (int j = 0; j < u.cols; ++j) u.at(r, j) = u.at(r, j) * inv % u.p;
        for (int i = 0; i < w.rows; ++i) {
            if (i == r || w.at(i, c) == 0) continue;
            long long f = w.at(i, c);
            for (int j = 0; j < w.cols; ++j)
                w.at(i, j) = ((w.at(i, j) - f * w.at(r, j)) % w.p + w.p) % w.p;
            for (int j = 0; j < u.cols; ++j)
                u.at(i, j) = ((u.at(i, j) - f * u.at(r, j)) % u.p + u.p) % u.p;
        }
        pivots.push_back(c);
        ++r;
    }
    std::vector<long long> rem = v, y(a.rows, 0);
    for (auto& x : rem) x = ((x % a.p) + a.p) % a.p;
    for (int i = 0; i < int(pivots.size()); ++i) {
        long long f = rem[pivots[i]];
        if (f == 0) continue;
        y[i] = f;
        for (int j = 0; j < w.cols; ++j) rem[j] = ((rem[j] - f * w.at(i, j)) % a.p + a.p) % a.p;
    }
    for (long long x : rem)
        if (x != 0) return std::nullopt;
    std::vector<long long> out(a.rows, 0);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.rows; ++k) out[i] = (out[i] + y[k] * u.at(k, i)) % a.p;
    return out;
}

int rank_over(const IntMatrix& m, const CoeffRing& ring) {
    if (ring.tag == CoeffRing::MODP) return fp_rank(m, ring.p);
    return rank(m);
}

}  // namespace troplef
