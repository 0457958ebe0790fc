#include "qcs/int_matrix.hpp"

#include <algorithm>
#include <unordered_set>

#include "qcs/error.hpp"

namespace qcs {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::diagonal(const std::vector<Int>& d) {
    IntMatrix m(int(d.size()), int(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m.at(int(i), int(i)) = d[i];
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw domain_error("matrix.shape", "dimension mismatch in product");
    IntMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Int& a = at(i, k);
            if (a == 0) continue;
            for (int j = 0; j < o.cols_; ++j) {
                if (o.at(k, j) != 0) r.at(i, j) += a * o.at(k, j);
            }
        }
    return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw domain_error("matrix.shape", "dimension mismatch in difference");
    IntMatrix r(rows_, cols_);
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw domain_error("matrix.shape", "dimension mismatch in sum");
    IntMatrix r(rows_, cols_);
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
}

IntMatrix IntMatrix::transposed() const {
    IntMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

std::vector<Int> IntMatrix::apply(const std::vector<Int>& x) const {
    if (int(x.size()) != cols_) throw domain_error("matrix.shape", "vector length mismatch in apply");
    std::vector<Int> y(rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != 0) y[i] += at(i, j) * x[j];
    return y;
}

IntMatrix IntMatrix::column(int c) const {
    IntMatrix r(rows_, 1);
    for (int i = 0; i < rows_; ++i) r.at(i, 0) = at(i, c);
    return r;
}

bool IntMatrix::is_zero() const {
    for (const Int& v : e_)
        if (v != 0) return false;
    return true;
}

IntMatrix IntMatrix::hstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_) throw domain_error("matrix.shape", "row mismatch in hstack");
    IntMatrix r(a.rows_, a.cols_ + b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
        for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols_; ++j) r.at(i, a.cols_ + j) = b.at(i, j);
    }
    return r;
}

IntMatrix IntMatrix::vstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.cols_) throw domain_error("matrix.shape", "column mismatch in vstack");
    IntMatrix r(a.rows_ + b.rows_, a.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows_; ++i)
        for (int j = 0; j < a.cols_; ++j) r.at(a.rows_ + i, j) = b.at(i, j);
    return r;
}

IntMatrix IntMatrix::deduped_rows() const {
    std::unordered_set<std::string> seen;
    std::vector<int> keep;
    for (int i = 0; i < rows_; ++i) {
        bool zero = true;
        std::string key;
        for (int j = 0; j < cols_; ++j) {
            if (at(i, j) != 0) zero = false;
            key += at(i, j).get_str();
            key += ',';
        }
        if (zero) continue;
        if (seen.insert(key).second) keep.push_back(i);
    }
    IntMatrix r(int(keep.size()), cols_);
    for (size_t i = 0; i < keep.size(); ++i)
        for (int j = 0; j < cols_; ++j) r.at(int(i), j) = at(keep[i], j);
    return r;
}

namespace {

struct Reducer {
    IntMatrix& S;
    IntMatrix U, V, U_inv;
    bool wu, wv, wui;

    Reducer(IntMatrix& s, const SnfOptions& o)
        : S(s), wu(o.want_U), wv(o.want_V), wui(o.want_U_inv) {
        if (wu) U = IntMatrix::identity(S.rows());
        if (wv) V = IntMatrix::identity(S.cols());
        if (wui) U_inv = IntMatrix::identity(S.rows());
    }

    // row i -= q * row t
    void row_op(int i, int t, const Int& q) {
        for (int j = 0; j < S.cols(); ++j)
            if (S.at(t, j) != 0) S.at(i, j) -= q * S.at(t, j);
        if (wu)
            for (int j = 0; j < U.cols(); ++j)
                if (U.at(t, j) != 0) U.at(i, j) -= q * U.at(t, j);
        if (wui)
            for (int r = 0; r < U_inv.rows(); ++r)
                if (U_inv.at(r, i) != 0) U_inv.at(r, t) += q * U_inv.at(r, i);
    }

    // col j -= q * col t
    void col_op(int j, int t, const Int& q) {
        for (int i = 0; i < S.rows(); ++i)
            if (S.at(i, t) != 0) S.at(i, j) -= q * S.at(i, t);
        if (wv)
            for (int i = 0; i < V.rows(); ++i)
                if (V.at(i, t) != 0) V.at(i, j) -= q * V.at(i, t);
    }

    void row_swap(int i, int t) {
        if (i == t) return;
        for (int j = 0; j < S.cols(); ++j) std::swap(S.at(i, j), S.at(t, j));
        if (wu)
            for (int j = 0; j < U.cols(); ++j) std::swap(U.at(i, j), U.at(t, j));
        if (wui)
            for (int r = 0; r < U_inv.rows(); ++r) std::swap(U_inv.at(r, i), U_inv.at(r, t));
    }

    void col_swap(int j, int t) {
        if (j == t) return;
        for (int i = 0; i < S.rows(); ++i) std::swap(S.at(i, j), S.at(i, t));
        if (wv)
            for (int i = 0; i < V.rows(); ++i) std::swap(V.at(i, j), V.at(i, t));
    }

    void row_negate(int i) {
        for (int j = 0; j < S.cols(); ++j) S.at(i, j) = -S.at(i, j);
        if (wu)
            for (int j = 0; j < U.cols(); ++j) U.at(i, j) = -U.at(i, j);
        if (wui)
            for (int r = 0; r < U_inv.rows(); ++r) U_inv.at(r, i) = -U_inv.at(r, i);
    }
};

} // namespace

SnfResult smith_engine(IntMatrix M, const SnfOptions& opts) {
    const int rows = M.rows(), cols = M.cols(), n = std::min(rows, cols);
    Reducer red(M, opts);

    for (int t = 0; t < n; ++t) {
        for (;;) {
            // smallest nonzero |entry| in the trailing submatrix; 1 wins immediately
            int pr = -1, pc = -1;
            Int best;
            bool unit = false;
            for (int i = t; i < rows && !unit; ++i)
                for (int j = t; j < cols; ++j) {
                    const Int& v = M.at(i, j);
                    if (v == 0) continue;
                    Int a = abs(v);
                    if (pr == -1 || a < best) {
                        pr = i;
                        pc = j;
                        best = std::move(a);
                        if (best == 1) { unit = true; break; }
                    }
                }
            if (pr == -1) goto finished; // trailing block is zero

            red.row_swap(pr, t);
            red.col_swap(pc, t);

            bool dirty = false;
            const Int& p = M.at(t, t);
            for (int i = t + 1; i < rows; ++i) {
                if (M.at(i, t) == 0) continue;
                Int q;
                mpz_tdiv_q(q.get_mpz_t(), M.at(i, t).get_mpz_t(), p.get_mpz_t());
                if (q != 0) red.row_op(i, t, q);
                if (M.at(i, t) != 0) dirty = true;
            }
            for (int j = t + 1; j < cols; ++j) {
                if (M.at(t, j) == 0) continue;
                Int q;
                mpz_tdiv_q(q.get_mpz_t(), M.at(t, j).get_mpz_t(), p.get_mpz_t());
                if (q != 0) red.col_op(j, t, q);
                if (M.at(t, j) != 0) dirty = true;
            }
            if (dirty) continue;

            // pivot must divide the whole trailing block for the chain property
            bool fixed = false;
            for (int i = t + 1; i < rows && !fixed; ++i)
                for (int j = t + 1; j < cols; ++j) {
                    Int r;
                    mpz_tdiv_r(r.get_mpz_t(), M.at(i, j).get_mpz_t(), p.get_mpz_t());
                    if (r != 0) {
                        red.row_op(t, i, Int(-1)); // fold row i into row t, redo pivot
                        fixed = true;
                        break;
                    }
                }
            if (!fixed) break;
        }
        if (M.at(t, t) < 0) red.row_negate(t);
    }

finished:
    SnfResult out;
    out.diag.resize(n);
    for (int i = 0; i < n; ++i) out.diag[i] = M.at(i, i);
    out.rank = 0;
    for (int i = 0; i < n; ++i)
        if (out.diag[i] != 0) ++out.rank;
    out.S = std::move(M);
    if (opts.want_U) out.U = std::move(red.U);
    if (opts.want_V) out.V = std::move(red.V);
    if (opts.want_U_inv) out.U_inv = std::move(red.U_inv);
    return out;
}

SmithDecomposition smith_normal_form(const IntMatrix& M) {
    SnfOptions o;
    SnfResult r = smith_engine(M, o);
    return SmithDecomposition{std::move(r.U), std::move(r.S), std::move(r.V), std::move(r.diag)};
}

IntMatrix kernel_basis(const IntMatrix& M) {
    SnfOptions o;
    o.want_U = false;
    SnfResult r = smith_engine(M, o);
    IntMatrix K(M.cols(), M.cols() - r.rank);
    for (int j = r.rank; j < M.cols(); ++j)
        for (int i = 0; i < M.cols(); ++i) K.at(i, j - r.rank) = r.V.at(i, j);
    return K;
}

IntMatrix kernel_mod(const IntMatrix& M, const Int& L) {
    if (L <= 0) throw domain_error("matrix.modulus", "kernel_mod needs a positive modulus");
    SnfOptions o;
    o.want_U = false;
    SnfResult r = smith_engine(M, o);
    IntMatrix K(M.cols(), M.cols());
    for (int j = 0; j < M.cols(); ++j) {
        Int s = (j < int(r.diag.size())) ? r.diag[j] : Int(0);
        Int m = L / gcd(s, L); // gcd(0, L) = L, so free coordinates get 1
        for (int i = 0; i < M.cols(); ++i) K.at(i, j) = r.V.at(i, j) * m;
    }
    return K;
}

IntMatrix kernel_mod_rows(const IntMatrix& M, const Int& L) {
    // Invariant: span(K) + L*Z^k equals the part of the kernel lattice cut
    // out by the rows processed so far. Entries of K are reduced mod L as we
    // go (harmless under the invariant), and the L*Z^k summand is folded
    // back in by one small Smith reduction at the end.
    if (L <= 0) throw domain_error("matrix.modulus", "kernel_mod_rows needs a positive modulus");
    const int k = M.cols();
    IntMatrix K = IntMatrix::identity(k);
    if (L == 1 || k == 0) return K;
    std::vector<Int> g(static_cast<size_t>(k));
    for (int r = 0; r < M.rows(); ++r) {
        // g = (row r of M) * K, reduced mod L
        for (auto& v : g) v = 0;
        bool nonzero = false;
        for (int c = 0; c < k; ++c) {
            const Int& coef = M.at(r, c);
            if (coef == 0) continue;
            for (int j = 0; j < k; ++j) g[size_t(j)] += coef * K.at(c, j);
        }
        for (auto& v : g) {
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), L.get_mpz_t());
            if (v != 0) nonzero = true;
        }
        if (!nonzero) continue;

        // fold all nonzero positions into column p by unimodular column ops,
        // so that g * K_new has a single nonzero entry d = gcd at p
        int p = 0;
        while (g[size_t(p)] == 0) ++p;
        Int d = g[size_t(p)];
        for (int j = p + 1; j < k; ++j) {
            if (g[size_t(j)] == 0) continue;
            Int gg, u, v;
            mpz_gcdext(gg.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t(),
                       g[size_t(j)].get_mpz_t());
            Int dq = d / gg, jq = g[size_t(j)] / gg;
            for (int i = 0; i < k; ++i) {
                Int cp = K.at(i, p), cj = K.at(i, j);
                K.at(i, p) = u * cp + v * cj;
                K.at(i, j) = dq * cj - jq * cp;
            }
            d = gg;
        }
        // the refined lattice needs d * c_p = 0 mod L
        Int m = L / gcd(d, L);
        if (m != 1)
            for (int i = 0; i < k; ++i) K.at(i, p) *= m;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                mpz_mod(K.at(i, j).get_mpz_t(), K.at(i, j).get_mpz_t(), L.get_mpz_t());
    }

    // basis of span(K) + L*Z^k: if U G V = S then the columns of U_inv
    // scaled by the diagonal span the column lattice of G
    IntMatrix G = IntMatrix::hstack(K, IntMatrix::diagonal(std::vector<Int>(size_t(k), L)));
    SnfOptions o;
    o.want_U = false;
    o.want_V = false;
    o.want_U_inv = true;
    SnfResult s = smith_engine(G, o);
    IntMatrix B(k, k);
    for (int j = 0; j < s.rank; ++j)
        for (int i = 0; i < k; ++i) B.at(i, j) = s.U_inv.at(i, j) * s.diag[size_t(j)];
    return B;
}

IntMatrix saturation(const IntMatrix& M) {
    SnfOptions o;
    o.want_U = false;
    o.want_V = false;
    o.want_U_inv = true;
    SnfResult r = smith_engine(M, o);
    IntMatrix B(M.rows(), r.rank);
    for (int j = 0; j < r.rank; ++j)
        for (int i = 0; i < M.rows(); ++i) B.at(i, j) = r.U_inv.at(i, j);
    return B;
}

std::optional<std::vector<Int>> solve_integer(const IntMatrix& M, const std::vector<Int>& rhs) {
    if (int(rhs.size()) != M.rows()) throw domain_error("matrix.shape", "rhs length mismatch");
    SnfOptions o;
    o.want_U_inv = false;
    SnfResult r = smith_engine(M, o);
    std::vector<Int> z = r.U.apply(rhs);
    std::vector<Int> w(M.cols(), Int(0));
    const int n = int(r.diag.size());
    for (int i = 0; i < M.rows(); ++i) {
        if (i < n && r.diag[i] != 0) {
            Int q, rem;
            mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), z[i].get_mpz_t(), r.diag[i].get_mpz_t());
            if (rem != 0) return std::nullopt;
            w[i] = q;
        } else if (z[i] != 0) {
            return std::nullopt;
        }
    }
    return r.V.apply(w);
}

QzSolver::QzSolver(const IntMatrix& M) : rows_(M.rows()), cols_(M.cols()) {
    SnfOptions o;
    snf_ = smith_engine(M, o);
}

QzSolveOutcome QzSolver::solve(const std::vector<QZ>& r) const {
    if (int(r.size()) != rows_) throw domain_error("matrix.shape", "rhs length mismatch in solve_qz");

    // transformed right-hand side r' = U r, exact in Q/Z
    std::vector<QZ> rp(static_cast<size_t>(rows_));
    for (int i = 0; i < rows_; ++i) {
        QZ acc;
        for (int j = 0; j < rows_; ++j)
            if (snf_.U.at(i, j) != 0) acc = acc + snf_.U.at(i, j) * r[size_t(j)];
        rp[size_t(i)] = acc;
    }

    const int n = int(snf_.diag.size());
    std::vector<QZ> z(static_cast<size_t>(cols_));
    QzSolveOutcome out;
    for (int i = 0; i < rows_; ++i) {
        const Int s = (i < n) ? snf_.diag[size_t(i)] : Int(0);
        if (s == 0) {
            if (!rp[size_t(i)].is_zero()) {
                out.violated_row = i;
                return out;
            }
        } else if (i < cols_) {
            z[size_t(i)] = QZ(rp[size_t(i)].num(), rp[size_t(i)].den() * s); // divide by s inside Q/Z
        }
    }
    std::vector<QZ> y(static_cast<size_t>(cols_));
    for (int i = 0; i < cols_; ++i) {
        QZ acc;
        for (int j = 0; j < cols_; ++j)
            if (snf_.V.at(i, j) != 0) acc = acc + snf_.V.at(i, j) * z[size_t(j)];
        y[size_t(i)] = acc;
    }
    out.solution = std::move(y);
    return out;
}

QzSolveOutcome solve_qz(const IntMatrix& M, const std::vector<QZ>& r) {
    return QzSolver(M).solve(r);
}

} // namespace qcs
