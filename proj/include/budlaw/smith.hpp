#pragma once

// Smith normal form of an integer matrix with unimodular transforms.

#include <gmpxx.h>

#include <vector>

namespace budlaw {

using IntMatrix = std::vector<std::vector<mpz_class>>;

struct SmithForm {
    // U * M * V = D, with D diagonal (diag[i] at (i,i)), diag[i] | diag[i+1],
    // nonzero entries first; U and V unimodular.
    IntMatrix U;
    IntMatrix V;
    std::vector<mpz_class> diag;  // length min(rows, cols)
    std::size_t rank = 0;
};

SmithForm smith_normal_form(const IntMatrix& M, std::size_t rows, std::size_t cols);

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);

} // namespace budlaw
