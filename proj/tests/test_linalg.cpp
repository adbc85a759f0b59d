#include <doctest.h>

#include "opalg/linalg.hpp"
#include "support.hpp"

using namespace opalg;

namespace {

CMatrix from_rows(int r, int c, std::initializer_list<cplx> vals) {
    CMatrix m(r, c);
    int k = 0;
    for (const cplx& v : vals) m.a[k++] = v;
    return m;
}

// eigenvalues of a 2x2 Hermitian [[a, b], [conj(b), d]] by the characteristic
// polynomial, larger first
std::pair<double, double> eig2_oracle(double a, cplx b, double d) {
    const double mid = 0.5 * (a + d);
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
    return {mid + rad, mid - rad};
}

// sqrt of the largest generalized eigenvalue of (M* Gr M, Gr) for 2x2 M and
// positive diagonal Gr, via explicit whitening and eig2_oracle
double quotient_norm2_oracle(const CMatrix& m, double g1, double g2) {
    const CMatrix k = m.adjoint() * from_rows(2, 2, {g1, 0.0, 0.0, g2}) * m;
    const double s1 = std::sqrt(g1), s2 = std::sqrt(g2);
    const double a = (k(0, 0) / (s1 * s1)).real();
    const cplx b = k(0, 1) / (s1 * s2);
    const double d = (k(1, 1) / (s2 * s2)).real();
    return std::sqrt(std::max(0.0, eig2_oracle(a, b, d).first));
}

CMatrix random_matrix(int n, Rng& rng) {
    CMatrix m(n, n);
    for (cplx& z : m.a) z = rng.cnormal();
    return m;
}

} // namespace

TEST_CASE("op_norm on pinned matrices") {
    CHECK(op_norm(CMatrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(op_norm(from_rows(2, 2, {0.0, 1.0, 0.0, 0.0})) == doctest::Approx(1.0).epsilon(1e-12));
    // rank-one oracle: M*M = [[2,2],[2,2]], eigenvalues 4 and 0
    CHECK(op_norm(from_rows(2, 2, {1.0, 1.0, 1.0, 1.0})) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(op_norm(CMatrix(0, 0)) == 0.0);
}

TEST_CASE("op_norm rejects non-finite entries") {
    CMatrix m = CMatrix::identity(2);
    m(0, 1) = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(op_norm(m), invalid_input);
}

TEST_CASE("herm_eig on pinned matrices") {
    const HermEig d = herm_eig(from_rows(2, 2, {3.0, 0.0, 0.0, 1.0}));
    CHECK(d.values[0] == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(d.values[1] == doctest::Approx(1.0).epsilon(1e-13));

    const auto [top, bottom] = eig2_oracle(0.0, 1.0, 0.0); // characteristic polynomial: +-1
    const HermEig x = herm_eig(from_rows(2, 2, {0.0, 1.0, 1.0, 0.0}));
    CHECK(x.values[0] == doctest::Approx(top).epsilon(1e-13));
    CHECK(x.values[1] == doctest::Approx(bottom).epsilon(1e-13));

    const HermEig z = herm_eig(CMatrix(2, 2));
    CHECK(z.values[0] == 0.0);
    CHECK(z.values[1] == 0.0);
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
    CHECK_THROWS_AS(herm_eig(from_rows(2, 2, {0.0, 1.0, 0.0, 0.0})), invalid_input);
}

TEST_CASE("herm_eig reconstruction and orthonormality on random Hermitian matrices") {
    Rng rng(42);
    for (int n : {2, 5, 17, 30}) {
        CMatrix m = random_matrix(n, rng);
        m = (m + m.adjoint()) * 0.5;
        const HermEig e = herm_eig(m);
        CMatrix lam(n, n);
        for (int i = 0; i < n; ++i) lam(i, i) = e.values[i];
        const CMatrix rec = e.vectors * lam * e.vectors.adjoint();
        CHECK((rec - m).max_abs() <= 1e-10 * std::max(1.0, m.max_abs()));
        const CMatrix orth = e.vectors.adjoint() * e.vectors - CMatrix::identity(n);
        CHECK(orth.max_abs() <= 1e-12);
        for (int i = 0; i + 1 < n; ++i) CHECK(e.values[i] >= e.values[i + 1]);
    }
}

TEST_CASE("op_norm invariances and submultiplicativity") {
    Rng rng(7);
    for (int n : {3, 9, 30}) {
        for (int rep = 0; rep < 5; ++rep) {
            const CMatrix m = random_matrix(n, rng);
            const CMatrix p = random_matrix(n, rng);
            const double nm = op_norm(m);
            CHECK(std::abs(op_norm(m.adjoint()) - nm) <= 1e-10 * (1.0 + nm));
            CHECK(std::abs(op_norm(m.transpose()) - nm) <= 1e-10 * (1.0 + nm));
            CHECK(op_norm(m * p) <= nm * op_norm(p) + 1e-9);
        }
    }
}

TEST_CASE("gram_posdef classification") {
    CHECK(gram_posdef(CMatrix::identity(3), 1e-10).kind == Definiteness::positive_definite);
    const GramClass semi = gram_posdef(from_rows(2, 2, {1.0, 1.0, 1.0, 1.0}), 1e-10);
    CHECK(semi.kind == Definiteness::positive_semidefinite);
    CHECK(semi.kernel_dim == 1); // oracle spectrum {2, 0}
    CHECK(gram_posdef(from_rows(2, 2, {1.0, 0.0, 0.0, -1.0}), 1e-10).kind ==
          Definiteness::indefinite);
    CHECK_THROWS_AS(gram_posdef(from_rows(2, 2, {0.0, 1.0, 0.0, 0.0}), 1e-10), invalid_input);
}

TEST_CASE("quotient_op_norm against the 2x2 generalized-eigenvalue oracle") {
    CHECK(quotient_op_norm(CMatrix::identity(2), CMatrix::identity(2)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(quotient_op_norm(from_rows(2, 2, {2.0, 0.0, 0.0, 3.0}), CMatrix::identity(2)) ==
          doctest::Approx(3.0).epsilon(1e-12));

    // e1 -> e2 into the heavy direction: ratio sqrt(4)/sqrt(1) = 2
    const CMatrix up = from_rows(2, 2, {0.0, 0.0, 1.0, 0.0});
    const CMatrix gr = from_rows(2, 2, {1.0, 0.0, 0.0, 4.0});
    CHECK(quotient_norm2_oracle(up, 1.0, 4.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(quotient_op_norm(up, gr) == doctest::Approx(2.0).epsilon(1e-10));

    // e2 -> e1 out of the heavy direction: ratio 1/2
    const CMatrix down = from_rows(2, 2, {0.0, 1.0, 0.0, 0.0});
    CHECK(quotient_norm2_oracle(down, 1.0, 4.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(quotient_op_norm(down, gr) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("quotient_op_norm with identity Gram equals op_norm") {
    Rng rng(11);
    for (int n : {2, 6, 12}) {
        const CMatrix m = random_matrix(n, rng);
        const double a = quotient_op_norm(m, CMatrix::identity(n));
        const double b = op_norm(m);
        CHECK(std::abs(a - b) <= 1e-10 * (1.0 + b));
    }
}

TEST_CASE("quotient_op_norm detects a non-invariant kernel") {
    const CMatrix m = from_rows(2, 2, {0.0, 1.0, 0.0, 0.0}); // e2 -> e1
    const CMatrix gr = from_rows(2, 2, {1.0, 0.0, 0.0, 0.0}); // kernel = e2
    CHECK_THROWS_AS(quotient_op_norm(m, gr), inconsistency);
    // kernel invariant case: e1 -> e2 maps the positive direction into the kernel
    const CMatrix ok = from_rows(2, 2, {0.0, 0.0, 1.0, 0.0});
    CHECK(quotient_op_norm(ok, gr) == doctest::Approx(0.0));
    CHECK_THROWS_AS(quotient_op_norm(m, from_rows(2, 2, {1.0, 0.0, 0.0, -1.0})), invalid_input);
}

namespace {

// lower-triangular Cholesky factor of a PD Hermitian matrix
CMatrix cholesky(const CMatrix& a) {
    const int n = a.rows;
    CMatrix l(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            cplx s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            if (i == j)
                l(i, i) = std::sqrt(s.real());
            else
                l(i, j) = s / l(j, j).real();
        }
    }
    return l;
}

// solve X L* = B for X by back substitution (L lower triangular)
CMatrix solve_right_lstar(const CMatrix& b, const CMatrix& l) {
    const int n = l.rows;
    CMatrix x = b;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < x.rows; ++i) {
            cplx s = x(i, j);
            for (int k = 0; k < j; ++k) s -= x(i, k) * std::conj(l(j, k));
            x(i, j) = s / l(j, j).real();
        }
    }
    return x;
}

} // namespace

TEST_CASE("quotient_op_norm matches the Cholesky-whitening route on PD Grams") {
    Rng rng(23);
    for (int n : {2, 4, 7}) {
        for (int rep = 0; rep < 4; ++rep) {
            CMatrix b = random_matrix(n, rng);
            const CMatrix gr = b.adjoint() * b + CMatrix::identity(n) * 0.1;
            const CMatrix m = random_matrix(n, rng);
            const double got = quotient_op_norm(m, gr);
            // independent route: Gr = L L*, norm = || L* M L^{-*} ||
            const CMatrix l = cholesky(gr);
            const double want = op_norm(solve_right_lstar(l.adjoint() * m, l));
            CHECK(got == doctest::Approx(want).epsilon(1e-9));
        }
    }
}
