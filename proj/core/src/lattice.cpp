#include "troplef/lattice.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace troplef {

IntMatrix::IntMatrix(int rows, int cols, std::vector<Int> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != size_t(rows) * cols) throw Error("BadShape", "entry count does not match shape");
}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

std::vector<Int> IntMatrix::row(int i) const {
    std::vector<Int> v(cols_);
    for (int j = 0; j < cols_; ++j) v[j] = at(i, j);
    return v;
}

void IntMatrix::set_row(int i, const std::vector<Int>& v) {
    for (int j = 0; j < cols_; ++j) at(i, j) = v[j];
}

bool IntMatrix::is_zero() const {
    for (const auto& x : a_)
        if (x != 0) return false;
    return true;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
}

std::string IntMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j);
        os << "]";
    }
    os << "]";
    return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw Error("BadShape", "matrix product shape mismatch");
    IntMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const Int& aik = a.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < b.cols(); ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("BadShape", "matrix sum shape mismatch");
    IntMatrix c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) + b.at(i, j);
    return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) { return a + (-b); }

IntMatrix operator-(const IntMatrix& a) {
    IntMatrix c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) = -a.at(i, j);
    return c;
}

IntMatrix operator*(const Int& c, const IntMatrix& a) {
    IntMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.at(i, j) = c * a.at(i, j);
    return r;
}

std::vector<Int> operator*(const std::vector<Int>& v, const IntMatrix& m) {
    if (int(v.size()) != m.rows()) throw Error("BadShape", "vector-matrix shape mismatch");
    std::vector<Int> r(m.cols());
    for (int i = 0; i < m.rows(); ++i) {
        if (v[i] == 0) continue;
        for (int j = 0; j < m.cols(); ++j) r[j] += v[i] * m.at(i, j);
    }
    return r;
}

IntMatrix stack_rows(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.cols()) throw Error("BadShape", "stack_rows column mismatch");
    IntMatrix c(a.rows() + b.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) c.at(a.rows() + i, j) = b.at(i, j);
    return c;
}

Int det(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw Error("BadShape", "determinant of non-square matrix");
    const int n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (a.at(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                Int num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                mpz_divexact(a.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
        prev = a.at(k, k);
    }
    return sign > 0 ? a.at(n - 1, n - 1) : -a.at(n - 1, n - 1);
}

namespace {

void xgcd(const Int& a, const Int& b, Int& g, Int& x, Int& y) {
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

// Combine rows r1, r2 of m (and u) so that m[r1][col] becomes gcd and
// m[r2][col] becomes zero. The 2x2 transform has determinant 1. When the
// pivot already divides the entry, row r1 is left untouched; the xgcd path
// strictly shrinks the pivot, so repeated sweeps terminate.
void gcd_rows(IntMatrix& m, IntMatrix& u, int r1, int r2, int col) {
    Int a = m.at(r1, col), b = m.at(r2, col);
    if (b == 0) return;
    if (a != 0 && b % a == 0) {
        Int q = b / a;
        for (IntMatrix* w : {&m, &u})
            for (int j = 0; j < w->cols(); ++j) w->at(r2, j) -= q * w->at(r1, j);
        return;
    }
    Int g, x, y;
    xgcd(a, b, g, x, y);
    Int p = a / g, q = b / g;
    for (IntMatrix* w : {&m, &u}) {
        for (int j = 0; j < w->cols(); ++j) {
            Int v1 = x * w->at(r1, j) + y * w->at(r2, j);
            Int v2 = -q * w->at(r1, j) + p * w->at(r2, j);
            w->at(r1, j) = v1;
            w->at(r2, j) = v2;
        }
    }
}

}  // namespace

HnfResult hnf(const IntMatrix& m) {
    IntMatrix h = m;
    IntMatrix u = IntMatrix::identity(m.rows());
    int r = 0;
    for (int c = 0; c < h.cols() && r < h.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < h.rows(); ++i)
            if (h.at(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r) {
            for (int j = 0; j < h.cols(); ++j) std::swap(h.at(r, j), h.at(piv, j));
            for (int j = 0; j < u.cols(); ++j) std::swap(u.at(r, j), u.at(piv, j));
        }
        for (int i = r + 1; i < h.rows(); ++i) gcd_rows(h, u, r, i, c);
        if (h.at(r, c) < 0) {
            for (int j = 0; j < h.cols(); ++j) h.at(r, j) = -h.at(r, j);
            for (int j = 0; j < u.cols(); ++j) u.at(r, j) = -u.at(r, j);
        }
        for (int i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), h.at(i, c).get_mpz_t(), h.at(r, c).get_mpz_t());
            if (q == 0) continue;
            for (int j = 0; j < h.cols(); ++j) h.at(i, j) -= q * h.at(r, j);
            for (int j = 0; j < u.cols(); ++j) u.at(i, j) -= q * u.at(r, j);
        }
        ++r;
    }
    return {h, u};
}

int rank(const IntMatrix& m) {
    IntMatrix h = hnf(m).h;
    int r = 0;
    for (int i = 0; i < h.rows(); ++i) {
        bool zero = true;
        for (int j = 0; j < h.cols(); ++j)
            if (h.at(i, j) != 0) { zero = false; break; }
        if (!zero) ++r;
    }
    return r;
}

SnfResult snf(const IntMatrix& m) {
    const int r = m.rows(), c = m.cols();
    IntMatrix a = m;
    IntMatrix s = IntMatrix::identity(r);
    IntMatrix tt = IntMatrix::identity(c);  // accumulate column ops on the transpose
    // Column operations on `a` are row operations on `at`; keep both in sync.
    auto col_gcd = [&](int c1, int c2, int row) {
        Int x = a.at(row, c1), y = a.at(row, c2);
        if (y == 0) return;
        if (x != 0 && y % x == 0) {
            Int q = y / x;
            for (int i = 0; i < a.rows(); ++i) a.at(i, c2) -= q * a.at(i, c1);
            for (int i = 0; i < c; ++i) tt.at(c2, i) -= q * tt.at(c1, i);
            return;
        }
        Int g, p, q;
        xgcd(x, y, g, p, q);
        Int aa = x / g, bb = y / g;
        for (int i = 0; i < a.rows(); ++i) {
            Int v1 = p * a.at(i, c1) + q * a.at(i, c2);
            Int v2 = -bb * a.at(i, c1) + aa * a.at(i, c2);
            a.at(i, c1) = v1;
            a.at(i, c2) = v2;
        }
        for (int i = 0; i < c; ++i) {
            Int v1 = p * tt.at(c1, i) + q * tt.at(c2, i);
            Int v2 = -bb * tt.at(c1, i) + aa * tt.at(c2, i);
            tt.at(c1, i) = v1;
            tt.at(c2, i) = v2;
        }
    };
    const int nmin = std::min(r, c);
    for (int t = 0; t < nmin; ++t) {
        for (;;) {
            int pi = -1, pj = -1;
            Int best;
            for (int i = t; i < r; ++i)
                for (int j = t; j < c; ++j)
                    if (a.at(i, j) != 0) {
                        Int v = abs(a.at(i, j));
                        if (pi < 0 || v < best) { best = v; pi = i; pj = j; }
                    }
            if (pi < 0) { t = nmin; break; }  // remaining submatrix zero
            if (pi != t) {
                for (int j = 0; j < c; ++j) std::swap(a.at(t, j), a.at(pi, j));
                for (int j = 0; j < r; ++j) std::swap(s.at(t, j), s.at(pi, j));
            }
            if (pj != t) {
                for (int i = 0; i < r; ++i) std::swap(a.at(i, t), a.at(i, pj));
                for (int i = 0; i < c; ++i) std::swap(tt.at(t, i), tt.at(pj, i));
            }
            for (int i = t + 1; i < r; ++i) gcd_rows(a, s, t, i, t);
            for (int j = t + 1; j < c; ++j) col_gcd(t, j, t);
            bool clean = true;
            for (int i = t + 1; i < r && clean; ++i)
                if (a.at(i, t) != 0) clean = false;
            for (int j = t + 1; j < c && clean; ++j)
                if (a.at(t, j) != 0) clean = false;
            if (!clean) continue;
            // enforce divisibility of the remaining block by the pivot
            int bi = -1;
            for (int i = t + 1; i < r && bi < 0; ++i)
                for (int j = t + 1; j < c; ++j)
                    if (a.at(i, j) % a.at(t, t) != 0) { bi = i; break; }
            if (bi < 0) break;
            for (int j = 0; j < c; ++j) a.at(t, j) += a.at(bi, j);
            for (int j = 0; j < r; ++j) s.at(t, j) += s.at(bi, j);
        }
        if (t >= nmin) break;
        if (a.at(t, t) < 0) {
            for (int j = 0; j < c; ++j) a.at(t, j) = -a.at(t, j);
            for (int j = 0; j < r; ++j) s.at(t, j) = -s.at(t, j);
        }
    }
    std::vector<Int> d(nmin);
    for (int i = 0; i < nmin; ++i) d[i] = a.at(i, i);
    return {d, s, tt.transpose()};
}

IntMatrix inverse_unimodular(const IntMatrix& u) {
    HnfResult r = hnf(u);
    if (r.h != IntMatrix::identity(u.rows()))
        throw Error("NotUnimodular", "matrix has no integer inverse");
    return r.u;
}

Lattice row_span(const IntMatrix& generators, int ambient) {
    if (generators.cols() != ambient) throw Error("BadShape", "generator width != ambient");
    IntMatrix h = hnf(generators).h;
    int r = 0;
    for (int i = 0; i < h.rows(); ++i)
        for (int j = 0; j < h.cols(); ++j)
            if (h.at(i, j) != 0) { r = i + 1; break; }
    IntMatrix basis(r, ambient);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < ambient; ++j) basis.at(i, j) = h.at(i, j);
    return Lattice{ambient, basis};
}

Lattice kernel_lattice(const IntMatrix& m) {
    HnfResult r = hnf(m);
    int rk = 0;
    for (int i = 0; i < r.h.rows(); ++i)
        for (int j = 0; j < r.h.cols(); ++j)
            if (r.h.at(i, j) != 0) { rk = i + 1; break; }
    IntMatrix gen(m.rows() - rk, m.rows());
    for (int i = rk; i < m.rows(); ++i)
        for (int j = 0; j < m.rows(); ++j) gen.at(i - rk, j) = r.u.at(i, j);
    return row_span(gen, m.rows());
}

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
    if (a.ambient != b.ambient) throw Error("BadShape", "lattice sum ambient mismatch");
    return row_span(stack_rows(a.basis, b.basis), a.ambient);
}

Lattice saturation(const Lattice& l) {
    Lattice orth = kernel_lattice(l.basis.transpose());
    return kernel_lattice(orth.basis.transpose());
}

std::optional<std::vector<Int>> solve_in_lattice(const Lattice& l, const std::vector<Int>& v) {
    if (int(v.size()) != l.ambient) throw Error("BadShape", "vector length != ambient");
    std::vector<Int> rem = v, x(l.rank());
    for (int i = 0; i < l.rank(); ++i) {
        int piv = -1;
        for (int j = 0; j < l.ambient; ++j)
            if (l.basis.at(i, j) != 0) { piv = j; break; }
        Int q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rem[piv].get_mpz_t(), l.basis.at(i, piv).get_mpz_t());
        if (r != 0) return std::nullopt;
        x[i] = q;
        if (q != 0)
            for (int j = 0; j < l.ambient; ++j) rem[j] -= q * l.basis.at(i, j);
    }
    for (const auto& e : rem)
        if (e != 0) return std::nullopt;
    return x;
}

std::optional<std::vector<Int>> solve_left(const IntMatrix& a, const std::vector<Int>& v) {
    HnfResult r = hnf(a);
    std::vector<Int> rem = v, y(a.rows());
    for (int i = 0; i < r.h.rows(); ++i) {
        int piv = -1;
        for (int j = 0; j < r.h.cols(); ++j)
            if (r.h.at(i, j) != 0) { piv = j; break; }
        if (piv < 0) break;
        Int q, rr;
        mpz_tdiv_qr(q.get_mpz_t(), rr.get_mpz_t(), rem[piv].get_mpz_t(), r.h.at(i, piv).get_mpz_t());
        if (rr != 0) return std::nullopt;
        y[i] = q;
        if (q != 0)
            for (int j = 0; j < r.h.cols(); ++j) rem[j] -= q * r.h.at(i, j);
    }
    for (const auto& e : rem)
        if (e != 0) return std::nullopt;
    return y * r.u;
}

std::string GroupStructure::str() const {
    std::ostringstream os;
    if (trivial()) return "0";
    bool first = true;
    if (free_rank == 1) { os << "Z"; first = false; }
    else if (free_rank > 1) { os << "Z^" << free_rank; first = false; }
    for (const auto& d : torsion) {
        os << (first ? "" : " + ") << "Z/" << d;
        first = false;
    }
    return os.str();
}

GroupStructure quotient_structure(const Lattice& sub, const Lattice& sup) {
    if (sub.ambient != sup.ambient) throw Error("BadShape", "quotient ambient mismatch");
    IntMatrix coords(sub.rank(), sup.rank());
    for (int i = 0; i < sub.rank(); ++i) {
        auto x = solve_in_lattice(sup, sub.basis.row(i));
        if (!x) throw Error("NotSublattice", "generator " + std::to_string(i) + " not in the ambient lattice");
        coords.set_row(i, *x);
    }
    SnfResult s = snf(coords);
    GroupStructure g;
    int nonzero = 0;
    for (const auto& d : s.d) {
        if (d == 0) continue;
        ++nonzero;
        if (d >= 2) g.torsion.push_back(d);
    }
    g.free_rank = sup.rank() - nonzero;
    return g;
}

CoeffRing CoeffRing::Fp(long p) {
    if (p < 2) throw Error("BadCoeffRing", "modulus must be a prime >= 2");
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) throw Error("BadCoeffRing", std::to_string(p) + " is not prime");
    if (p > (1L << 30)) throw Error("BadCoeffRing", "prime too large");
    return {MODP, p};
}

std::string CoeffRing::str() const {
    switch (tag) {
        case INT: return "Z";
        case RAT: return "Q";
        default: return "F" + std::to_string(p);
    }
}

CoeffRing parse_coeff_ring(const std::string& s) {
    if (s == "Z") return CoeffRing::Z();
    if (s == "Q") return CoeffRing::Q();
    if (s.size() >= 2 && s[0] == 'F') {
        try {
            size_t pos = 0;
            long p = std::stol(s.substr(1), &pos);
            if (pos == s.size() - 1) return CoeffRing::Fp(p);
        } catch (const std::logic_error&) {}
    }
    throw Error("BadCoeffRing", "expected Z, Q or F<p>, got '" + s + "'");
}

const std::vector<std::vector<int>>& lex_subsets(int n, int k) {
    static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::vector<int>> out;
    if (k >= 0 && k <= n) {
        std::vector<int> cur(k);
        for (int i = 0; i < k; ++i) cur[i] = i;
        for (;;) {
            out.push_back(cur);
            int i = k - 1;
            while (i >= 0 && cur[i] == n - k + i) --i;
            if (i < 0) break;
            ++cur[i];
            for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
        }
        if (k == 0) out = {{}};
    }
    return cache.emplace(key, std::move(out)).first->second;
}

long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

IntMatrix wedge_power_map(const IntMatrix& m, int p) {
    if (p < 0) throw Error("BadShape", "negative exterior power");
    if (p == 0) return IntMatrix::identity(1);
    const auto& rsub = lex_subsets(m.rows(), p);
    const auto& csub = lex_subsets(m.cols(), p);
    IntMatrix w(int(rsub.size()), int(csub.size()));
    for (size_t i = 0; i < rsub.size(); ++i)
        for (size_t j = 0; j < csub.size(); ++j) {
            IntMatrix sub(p, p);
            for (int a = 0; a < p; ++a)
                for (int b = 0; b < p; ++b) sub.at(a, b) = m.at(rsub[i][a], csub[j][b]);
            w.at(int(i), int(j)) = det(sub);
        }
    return w;
}

namespace {

// Sign of the shuffle sorting the concatenation (M, I) of two disjoint sorted
// subsets into their sorted union.
int shuffle_sign(const std::vector<int>& m, const std::vector<int>& i) {
    long inv = 0;
    for (int x : i)
        for (int y : m)
            if (y > x) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

}  // namespace

IntMatrix contraction_map(const std::vector<Int>& omega, int r, int n, int p) {
    if (int(omega.size()) != binom(n, r)) throw Error("BadShape", "omega length != C(n,r)");
    const auto& dom = lex_subsets(n, p);
    const auto& cod = lex_subsets(n, p - r);  // empty when p < r
    IntMatrix m(int(dom.size()), int(cod.size()));
    if (p < r) return m;
    const auto& forms = lex_subsets(n, r);
    std::map<std::vector<int>, int> cod_index;
    for (size_t j = 0; j < cod.size(); ++j) cod_index[cod[j]] = int(j);
    for (size_t i = 0; i < dom.size(); ++i) {
        const auto& J = dom[i];
        // split J into M (kept) and I (consumed by omega), over all r-subsets
        for (const auto& sel : lex_subsets(p, r)) {
            std::vector<int> I, M;
            size_t s = 0;
            for (int t = 0; t < p; ++t) {
                if (s < sel.size() && sel[s] == t) { I.push_back(J[t]); ++s; }
                else M.push_back(J[t]);
            }
            auto fit = std::lower_bound(forms.begin(), forms.end(), I);
            int fi = int(fit - forms.begin());
            if (omega[fi] == 0) continue;
            m.at(int(i), cod_index.at(M)) += omega[fi] * shuffle_sign(M, I);
        }
    }
    return m;
}

IntMatrix wedge_by_vector(const std::vector<Int>& v, int j, int n) {
    if (int(v.size()) != n) throw Error("BadShape", "vector length != ambient rank");
    const auto& dom = lex_subsets(n, j);
    const auto& cod = lex_subsets(n, j + 1);
    std::map<std::vector<int>, int> cod_index;
    for (size_t t = 0; t < cod.size(); ++t) cod_index[cod[t]] = int(t);
    IntMatrix m(int(dom.size()), int(cod.size()));
    for (size_t s = 0; s < dom.size(); ++s) {
        const auto& J = dom[s];
        for (int i = 0; i < n; ++i) {
            if (v[i] == 0) continue;
            if (std::binary_search(J.begin(), J.end(), i)) continue;
            std::vector<int> u = J;
            u.insert(std::lower_bound(u.begin(), u.end(), i), i);
            int before = int(std::lower_bound(J.begin(), J.end(), i) - J.begin());
            int sign = before % 2 == 0 ? 1 : -1;
            m.at(int(s), cod_index.at(u)) += Int(sign) * v[i];
        }
    }
    return m;
}

QuotientBasis quotient_basis(const Lattice& s) {
    const int n = s.ambient, r = s.rank();
    SnfResult f = snf(s.basis);
    for (const auto& d : f.d)
        if (d != 1) throw Error("NotSaturated", "quotient basis requires a saturated lattice");
    IntMatrix w = inverse_unimodular(f.t);
    QuotientBasis q;
    q.ambient = n;
    q.rank = n - r;
    q.proj = IntMatrix(n, n - r);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n - r; ++j) q.proj.at(i, j) = f.t.at(i, r + j);
    q.lift = IntMatrix(n - r, n);
    for (int i = 0; i < n - r; ++i)
        for (int j = 0; j < n; ++j) q.lift.at(i, j) = w.at(r + i, j);
    return q;
}

Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Int gcd_of(const std::vector<Int>& v) {
    Int g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

}  // namespace troplef
