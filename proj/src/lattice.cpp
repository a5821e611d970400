#include "keyforge/lattice.hpp"

#include <cassert>

namespace keyforge {

namespace {

using Row = std::vector<Int>;

// Row-style Hermite reduction of A, tracking U with H = U * A.
// Returns the number of nonzero rows (rank); nonzero rows come first and are
// in echelon form with positive pivots.
int hnf(std::vector<Row>& A, std::vector<Row>& U) {
    const int n = static_cast<int>(A.size());
    const int r = n == 0 ? 0 : static_cast<int>(A[0].size());
    U.assign(n, Row(n, 0));
    for (int i = 0; i < n; ++i) U[i][i] = 1;

    int row = 0;
    for (int col = 0; col < r && row < n; ++col) {
        // Clear everything below `row` in this column with gcd combinations.
        for (int i = row + 1; i < n; ++i) {
            if (A[i][col] == 0) continue;
            if (A[row][col] == 0) {
                std::swap(A[row], A[i]);
                std::swap(U[row], U[i]);
                continue;
            }
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(),
                       A[row][col].get_mpz_t(), A[i][col].get_mpz_t());
            Int a = A[row][col] / g, b = A[i][col] / g;
            for (int j = 0; j < r; ++j) {
                Int na = s * A[row][j] + t * A[i][j];
                Int nb = -b * A[row][j] + a * A[i][j];
                A[row][j] = na;
                A[i][j] = nb;
            }
            for (int j = 0; j < n; ++j) {
                Int na = s * U[row][j] + t * U[i][j];
                Int nb = -b * U[row][j] + a * U[i][j];
                U[row][j] = na;
                U[i][j] = nb;
            }
        }
        if (A[row][col] == 0) continue;
        if (A[row][col] < 0) {
            for (int j = 0; j < r; ++j) A[row][j] = -A[row][j];
            for (int j = 0; j < n; ++j) U[row][j] = -U[row][j];
        }
        // Reduce the rows above modulo the pivot.
        for (int i = 0; i < row; ++i) {
            if (A[i][col] == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), A[i][col].get_mpz_t(), A[row][col].get_mpz_t());
            if (q == 0) continue;
            for (int j = 0; j < r; ++j) A[i][j] -= q * A[row][j];
            for (int j = 0; j < n; ++j) U[i][j] -= q * U[row][j];
        }
        ++row;
    }
    return row;
}

} // namespace

int lattice_rank(const std::vector<std::vector<Rat>>& gens) {
    if (gens.empty()) return 0;
    Int D(1);
    for (const auto& g : gens)
        for (const auto& x : g) {
            Int d = x.get_den();
            Int l;
            mpz_lcm(l.get_mpz_t(), D.get_mpz_t(), d.get_mpz_t());
            D = l;
        }
    std::vector<Row> A;
    for (const auto& g : gens) {
        Row row;
        for (const auto& x : g) {
            Rat v = x * Rat(D);
            v.canonicalize();
            assert(v.get_den() == 1);
            row.push_back(v.get_num());
        }
        A.push_back(row);
    }
    std::vector<Row> U;
    return hnf(A, U);
}

std::optional<LatticeOrder> lattice_order(const std::vector<std::vector<Rat>>& gens,
                                          const std::vector<Rat>& gamma) {
    const int n = static_cast<int>(gens.size());
    const int r = static_cast<int>(gamma.size());
    // Common denominator over generators and gamma.
    Int D(1);
    auto fold = [&D](const Rat& x) {
        Int d = x.get_den(), l;
        mpz_lcm(l.get_mpz_t(), D.get_mpz_t(), d.get_mpz_t());
        D = l;
    };
    for (const auto& g : gens)
        for (const auto& x : g) fold(x);
    for (const auto& x : gamma) fold(x);

    auto scale = [&D](const std::vector<Rat>& v) {
        Row row;
        for (const auto& x : v) {
            Rat s = x * Rat(D);
            s.canonicalize();
            row.push_back(s.get_num());
        }
        return row;
    };

    std::vector<Row> A;
    for (const auto& g : gens) A.push_back(scale(g));
    Row g = scale(gamma);

    std::vector<Row> U;
    int rank = n == 0 ? 0 : hnf(A, U);

    // Solve y * H = g over QQ by echelon substitution.
    std::vector<Rat> y(rank, Rat(0));
    std::vector<Rat> residual(r);
    for (int j = 0; j < r; ++j) residual[j] = Rat(g[j]);
    int col = 0;
    for (int i = 0; i < rank; ++i) {
        while (col < r && A[i][col] == 0) ++col;
        if (col == r) break;
        Rat coef = residual[col] / Rat(A[i][col]);
        coef.canonicalize();
        y[i] = coef;
        if (coef != 0)
            for (int j = col; j < r; ++j) {
                residual[j] -= coef * Rat(A[i][j]);
                residual[j].canonicalize();
            }
    }
    for (int j = 0; j < r; ++j)
        if (residual[j] != 0) return std::nullopt; // gamma outside the QQ-span

    // Least e with e*y integral.
    Int e(1);
    for (int i = 0; i < rank; ++i) {
        Int d = y[i].get_den(), l;
        mpz_lcm(l.get_mpz_t(), e.get_mpz_t(), d.get_mpz_t());
        e = l;
    }
    if (!e.fits_slong_p()) throw DomainError("lattice order does not fit in a long");

    LatticeOrder out;
    out.order = e.get_si();
    out.coeffs.assign(n, Int(0));
    for (int i = 0; i < rank; ++i) {
        Rat c = y[i] * Rat(e);
        c.canonicalize();
        assert(c.get_den() == 1);
        Int ci = c.get_num();
        if (ci == 0) continue;
        for (int j = 0; j < n; ++j) out.coeffs[j] += ci * U[i][j];
    }
    return out;
}

} // namespace keyforge
