#pragma once

#include <vector>

#include "opalg/policy.hpp"

namespace opalg {

/// Dense complex matrix, row-major.
struct CMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> a;

    CMatrix() = default;
    CMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    static CMatrix identity(int n);

    cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const cplx& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    CMatrix adjoint() const;
    CMatrix transpose() const;
    CMatrix conjugate() const;

    CMatrix operator*(const CMatrix& rhs) const;
    CMatrix operator+(const CMatrix& rhs) const;
    CMatrix operator-(const CMatrix& rhs) const;
    CMatrix operator*(cplx s) const;

    double max_abs() const;
    double frobenius() const;
    bool finite() const;

    bool same_shape(const CMatrix& o) const { return rows == o.rows && cols == o.cols; }
};

/// max abs distance from Hermitian symmetry, ||M - M*||_max
double herm_defect(const CMatrix& m);

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending,
/// columns of `vectors` the matching orthonormal eigenvectors.
struct HermEig {
    std::vector<double> values;
    CMatrix vectors;
};

/// Cyclic Jacobi. Deterministic; reconstruction error <= 1e-10 * ||M||.
/// Throws invalid_input if M is not square or not Hermitian within policy.herm_tol.
HermEig herm_eig(const CMatrix& m, const NumericPolicy& pol = {});

/// Largest singular value, via the top eigenvalue of M*M.
/// Throws invalid_input on non-finite entries.
double op_norm(const CMatrix& m);

enum class Definiteness { positive_definite, positive_semidefinite, indefinite };

struct GramClass {
    Definiteness kind;
    int kernel_dim = 0; // meaningful for positive_semidefinite
};

/// Sign classification of a Hermitian matrix with threshold tol * ||Gr||.
GramClass gram_posdef(const CMatrix& gr, double tol, const NumericPolicy& pol = {});

/// Operator norm of M on the semi-inner-product space defined by a PSD Gram
/// matrix: sup ||Mv||_Gr / ||v||_Gr over v outside the Gram kernel. Computed
/// by projecting onto the positive eigenspace of Gr and whitening by its
/// inverse square root. Throws invalid_input if Gr is not PSD Hermitian, and
/// inconsistency if M does not map ker(Gr) into itself (within policy.kernel_tol).
double quotient_op_norm(const CMatrix& m, const CMatrix& gr, const NumericPolicy& pol = {});

} // namespace opalg
