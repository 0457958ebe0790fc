#pragma once

#include <optional>
#include <vector>

#include "qcs/qz.hpp"

namespace qcs {

// Dense integer matrix, row-major. Dimensions may be zero; a 2x0 or 0x3
// matrix is a legitimate (empty) relation or generator set.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(size_t(rows) * cols) {}

    static IntMatrix identity(int n);
    static IntMatrix diagonal(const std::vector<Int>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& at(int r, int c) { return e_[size_t(r) * cols_ + c]; }
    const Int& at(int r, int c) const { return e_[size_t(r) * cols_ + c]; }

    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator-(const IntMatrix& o) const;
    IntMatrix operator+(const IntMatrix& o) const;
    bool operator==(const IntMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_; }

    IntMatrix transposed() const;
    std::vector<Int> apply(const std::vector<Int>& x) const; // matrix * column vector
    IntMatrix column(int c) const;
    bool is_zero() const;

    // Concatenation helpers for building block systems.
    static IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
    static IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);

    // Keep one copy of each distinct row, drop all-zero rows. Used to shrink
    // highly redundant constraint systems before reduction.
    IntMatrix deduped_rows() const;

private:
    int rows_, cols_;
    std::vector<Int> e_;
};

// U * M * V = S with U, V unimodular and S diagonal, diag[i] | diag[i+1],
// zeros trailing, diagonal entries nonnegative.
struct SmithDecomposition {
    IntMatrix U, S, V;
    std::vector<Int> diag; // length min(rows, cols)
};

struct SnfOptions {
    bool want_U = true;
    bool want_V = true;
    bool want_U_inv = false;
};

struct SnfResult {
    IntMatrix S;
    IntMatrix U, V, U_inv; // empty unless requested
    std::vector<Int> diag;
    int rank = 0; // number of nonzero diagonal entries
};

SnfResult smith_engine(IntMatrix M, const SnfOptions& opts);
SmithDecomposition smith_normal_form(const IntMatrix& M);

// Basis (as columns) of the integer kernel {x : Mx = 0}.
IntMatrix kernel_basis(const IntMatrix& M);

// Basis (as columns) of {x : Mx = 0 mod L}, L > 0. Contains L*Z^cols.
IntMatrix kernel_mod(const IntMatrix& M, const Int& L);

// Same lattice as kernel_mod, built by refining one row constraint at a
// time; much faster on tall near-sparse systems. Entries are kept reduced
// mod L, which does not change the lattice since it contains L*Z^cols.
IntMatrix kernel_mod_rows(const IntMatrix& M, const Int& L);

// Basis (as columns) of span_Q(columns of M) intersected with Z^rows.
IntMatrix saturation(const IntMatrix& M);

// Some integer solution of M x = rhs, if one exists.
std::optional<std::vector<Int>> solve_integer(const IntMatrix& M, const std::vector<Int>& rhs);

// Solve M . delta = r where delta lives in (Q/Z)^cols and r in (Q/Z)^rows,
// exactly, via Smith reduction. On failure reports a row index whose
// transformed equation is unsatisfiable.
struct QzSolveOutcome {
    std::optional<std::vector<QZ>> solution;
    int violated_row = -1; // valid when no solution
};
QzSolveOutcome solve_qz(const IntMatrix& M, const std::vector<QZ>& r);

// Reusable form of solve_qz: the Smith reduction of M is computed once and
// shared across many right-hand sides.
class QzSolver {
public:
    explicit QzSolver(const IntMatrix& M);
    QzSolveOutcome solve(const std::vector<QZ>& r) const;
    bool solvable(const std::vector<QZ>& r) const { return solve(r).solution.has_value(); }

private:
    SnfResult snf_;
    int rows_, cols_;
};

} // namespace qcs
