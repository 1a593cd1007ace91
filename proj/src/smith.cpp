#include "budlaw/smith.hpp"

#include <utility>

namespace budlaw {

namespace {

IntMatrix identity(std::size_t n)
{
    IntMatrix I(n, std::vector<mpz_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

// row_i += c * row_j, in A and in U
void row_axpy(IntMatrix& A, IntMatrix& U, std::size_t i, std::size_t j, const mpz_class& c)
{
    for (std::size_t k = 0; k < A[i].size(); ++k) A[i][k] += c * A[j][k];
    for (std::size_t k = 0; k < U[i].size(); ++k) U[i][k] += c * U[j][k];
}

// col_i += c * col_j, in A and in V
void col_axpy(IntMatrix& A, IntMatrix& V, std::size_t i, std::size_t j, const mpz_class& c)
{
    for (auto& row : A) row[i] += c * row[j];
    for (auto& row : V) row[i] += c * row[j];
}

void swap_rows(IntMatrix& A, IntMatrix& U, std::size_t i, std::size_t j)
{
    std::swap(A[i], A[j]);
    std::swap(U[i], U[j]);
}

void swap_cols(IntMatrix& A, IntMatrix& V, std::size_t i, std::size_t j)
{
    for (auto& row : A) std::swap(row[i], row[j]);
    for (auto& row : V) std::swap(row[i], row[j]);
}

} // namespace

SmithForm smith_normal_form(const IntMatrix& M, std::size_t rows, std::size_t cols)
{
    IntMatrix A = M;
    IntMatrix U = identity(rows), V = identity(cols);
    const std::size_t lim = std::min(rows, cols);
    SmithForm out;
    for (std::size_t t = 0; t < lim; ++t) {
        // smallest nonzero pivot in the trailing block
        std::size_t pi = rows, pj = cols;
        for (std::size_t i = t; i < rows; ++i) {
            for (std::size_t j = t; j < cols; ++j) {
                if (A[i][j] == 0) continue;
                if (pi == rows || abs(A[i][j]) < abs(A[pi][pj])) {
                    pi = i;
                    pj = j;
                }
            }
        }
        if (pi == rows) break;
        swap_rows(A, U, t, pi);
        swap_cols(A, V, t, pj);

        for (;;) {
            bool dirty = false;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (A[i][t] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), A[i][t].get_mpz_t(), A[t][t].get_mpz_t());
                row_axpy(A, U, i, t, -q);
                if (A[i][t] != 0) {
                    swap_rows(A, U, t, i);
                    dirty = true;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (A[t][j] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), A[t][j].get_mpz_t(), A[t][t].get_mpz_t());
                col_axpy(A, V, j, t, -q);
                if (A[t][j] != 0) {
                    swap_cols(A, V, t, j);
                    dirty = true;
                }
            }
            if (dirty) continue;
            // Pivot must divide the rest; otherwise fold an offending row in.
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i) {
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (A[i][j] % A[t][t] != 0) {
                        row_axpy(A, U, t, i, 1);
                        divides = false;
                        break;
                    }
                }
            }
            if (divides) break;
        }
        if (A[t][t] < 0) {
            for (auto& x : A[t]) x = -x;
            for (auto& x : U[t]) x = -x;
        }
    }
    out.diag.resize(lim);
    for (std::size_t i = 0; i < lim; ++i) {
        out.diag[i] = A[i][i];
        if (A[i][i] != 0) ++out.rank;
    }
    out.U = std::move(U);
    out.V = std::move(V);
    return out;
}

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b)
{
    const std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
    IntMatrix c(n, std::vector<mpz_class>(m, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    }
    return c;
}

} // namespace budlaw
