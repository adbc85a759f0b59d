#include "opalg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

namespace opalg {

int worker_count() {
    static const int cap = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw <= 0) hw = 1;
        if (const char* env = std::getenv("OPALG_NUM_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0 && v < hw) return static_cast<int>(v);
        }
        return hw;
    }();
    return cap;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix m(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

CMatrix CMatrix::transpose() const {
    CMatrix m(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(j, i) = (*this)(i, j);
    return m;
}

CMatrix CMatrix::conjugate() const {
    CMatrix m(rows, cols);
    for (size_t k = 0; k < a.size(); ++k) m.a[k] = std::conj(a[k]);
    return m;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
    if (cols != rhs.rows) throw invalid_input("matrix product: shape mismatch");
    CMatrix m(rows, rhs.cols);
    for (int i = 0; i < rows; ++i) {
        for (int k = 0; k < cols; ++k) {
            const cplx v = (*this)(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < rhs.cols; ++j) m(i, j) += v * rhs(k, j);
        }
    }
    return m;
}

CMatrix CMatrix::operator+(const CMatrix& rhs) const {
    if (!same_shape(rhs)) throw invalid_input("matrix sum: shape mismatch");
    CMatrix m(rows, cols);
    for (size_t k = 0; k < a.size(); ++k) m.a[k] = a[k] + rhs.a[k];
    return m;
}

CMatrix CMatrix::operator-(const CMatrix& rhs) const {
    if (!same_shape(rhs)) throw invalid_input("matrix difference: shape mismatch");
    CMatrix m(rows, cols);
    for (size_t k = 0; k < a.size(); ++k) m.a[k] = a[k] - rhs.a[k];
    return m;
}

CMatrix CMatrix::operator*(cplx s) const {
    CMatrix m(rows, cols);
    for (size_t k = 0; k < a.size(); ++k) m.a[k] = a[k] * s;
    return m;
}

double CMatrix::max_abs() const {
    double v = 0.0;
    for (const cplx& z : a) v = std::max(v, std::abs(z));
    return v;
}

double CMatrix::frobenius() const {
    double s = 0.0;
    for (const cplx& z : a) s += std::norm(z);
    return std::sqrt(s);
}

bool CMatrix::finite() const {
    for (const cplx& z : a)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

double herm_defect(const CMatrix& m) {
    if (m.rows != m.cols) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = i; j < m.cols; ++j)
            d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
    return d;
}

namespace {

// One cyclic Jacobi sweep over the strict upper triangle of the Hermitian
// matrix A, accumulating rotations into V. Off-diagonal entries below `thresh`
// are skipped.
bool jacobi_sweep(CMatrix& A, CMatrix& V, double thresh) {
    const int n = A.rows;
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
            const cplx apq = A(p, q);
            const double mag = std::abs(apq);
            if (mag <= thresh) continue;
            rotated = true;
            const double app = A(p, p).real();
            const double aqq = A(q, q).real();
            const cplx phase = apq / mag;
            const double tau = (aqq - app) / (2.0 * mag);
            const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;
            const cplx sp = s * phase;

            // columns p and q of A and V: right-multiply by the rotation
            for (int i = 0; i < n; ++i) {
                const cplx aip = A(i, p), aiq = A(i, q);
                A(i, p) = c * aip - std::conj(sp) * aiq;
                A(i, q) = sp * aip + c * aiq;
                const cplx vip = V(i, p), viq = V(i, q);
                V(i, p) = c * vip - std::conj(sp) * viq;
                V(i, q) = sp * vip + c * viq;
            }
            // rows p and q: left-multiply by the adjoint rotation
            for (int j = 0; j < n; ++j) {
                const cplx apj = A(p, j), aqj = A(q, j);
                A(p, j) = c * apj - sp * aqj;
                A(q, j) = std::conj(sp) * apj + c * aqj;
            }
            A(p, q) = 0.0;
            A(q, p) = 0.0;
            A(p, p) = cplx(A(p, p).real(), 0.0);
            A(q, q) = cplx(A(q, q).real(), 0.0);
        }
    }
    return rotated;
}

} // namespace

HermEig herm_eig(const CMatrix& m, const NumericPolicy& pol) {
    if (m.rows != m.cols) throw invalid_input("herm_eig: matrix not square");
    if (!m.finite()) throw invalid_input("herm_eig: non-finite entries");
    const double scale = m.max_abs();
    if (herm_defect(m) > pol.herm_tol * std::max(1.0, scale))
        throw invalid_input("herm_eig: matrix not Hermitian within tolerance");

    const int n = m.rows;
    CMatrix A(n, n);
    // symmetrize exactly so rounding in the input cannot bias one triangle
    for (int i = 0; i < n; ++i) {
        A(i, i) = cplx(m(i, i).real(), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            A(i, j) = v;
            A(j, i) = std::conj(v);
        }
    }
    CMatrix V = CMatrix::identity(n);
    const double thresh = 1e-17 * std::max(1.0, scale);
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (!jacobi_sweep(A, V, thresh)) break;
    }

    HermEig out;
    out.values.resize(n);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = A(i, i).real();
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] > diag[y]; });
    out.vectors = CMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = diag[order[j]];
        for (int i = 0; i < n; ++i) out.vectors(i, j) = V(i, order[j]);
    }
    return out;
}

double op_norm(const CMatrix& m) {
    if (!m.finite()) throw invalid_input("op_norm: non-finite entries");
    if (m.rows == 0 || m.cols == 0) return 0.0;
    const CMatrix mm = m.adjoint() * m;
    NumericPolicy pol;
    pol.herm_tol = 1e-6; // M*M is Hermitian by construction up to rounding
    const HermEig eig = herm_eig(mm, pol);
    const double top = eig.values.empty() ? 0.0 : std::max(0.0, eig.values.front());
    return std::sqrt(top);
}

GramClass gram_posdef(const CMatrix& gr, double tol, const NumericPolicy& pol) {
    if (gr.rows != gr.cols) throw invalid_input("gram_posdef: matrix not square");
    if (herm_defect(gr) > tol * std::max(1.0, gr.max_abs()))
        throw invalid_input("gram_posdef: matrix not Hermitian within tolerance");
    NumericPolicy p = pol;
    p.herm_tol = std::max(pol.herm_tol, tol);
    const HermEig eig = herm_eig(gr, p);
    double top = 0.0;
    for (double v : eig.values) top = std::max(top, std::abs(v));
    const double thr = tol * top;
    int kernel = 0;
    bool negative = false;
    for (double v : eig.values) {
        if (v < -thr) negative = true;
        else if (v <= thr) ++kernel;
    }
    GramClass out;
    if (negative) {
        out.kind = Definiteness::indefinite;
    } else if (kernel > 0) {
        out.kind = Definiteness::positive_semidefinite;
        out.kernel_dim = kernel;
    } else {
        out.kind = Definiteness::positive_definite;
    }
    return out;
}

double quotient_op_norm(const CMatrix& m, const CMatrix& gr, const NumericPolicy& pol) {
    if (m.rows != m.cols || !m.same_shape(gr))
        throw invalid_input("quotient_op_norm: shape mismatch");
    if (!m.finite() || !gr.finite())
        throw invalid_input("quotient_op_norm: non-finite entries");
    NumericPolicy p = pol;
    p.herm_tol = std::max(pol.herm_tol, 1e-9);
    const HermEig eig = herm_eig(gr, p);
    const int n = gr.rows;
    double top = 0.0;
    for (double v : eig.values) top = std::max(top, std::abs(v));
    const double thr = std::max(pol.herm_tol * top, 1e-300);
    for (double v : eig.values)
        if (v < -thr) throw invalid_input("quotient_op_norm: Gram matrix not positive semidefinite");

    std::vector<int> pos, ker;
    for (int i = 0; i < n; ++i) (eig.values[i] > thr ? pos : ker).push_back(i);
    if (pos.empty()) return 0.0;

    const int r = static_cast<int>(pos.size());
    CMatrix vpos(n, r), vker(n, static_cast<int>(ker.size()));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < r; ++j) vpos(i, j) = eig.vectors(i, pos[j]);
        for (size_t j = 0; j < ker.size(); ++j) vker(i, static_cast<int>(j)) = eig.vectors(i, ker[j]);
    }
    std::vector<double> sq(r);
    for (int j = 0; j < r; ++j) sq[j] = std::sqrt(eig.values[pos[j]]);

    if (!ker.empty()) {
        // rows scaled by sqrt(lambda) measure the Gr-norm of M * (kernel basis)
        CMatrix leak = vpos.adjoint() * (m * vker);
        double worst = 0.0;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < leak.cols; ++j) worst = std::max(worst, std::abs(leak(i, j)) * sq[i]);
        const double scale = (1.0 + op_norm(m)) * (1.0 + std::sqrt(top));
        if (worst > pol.kernel_tol * scale)
            throw inconsistency("quotient_op_norm: Gram kernel not invariant under the operator");
    }

    CMatrix inner = vpos.adjoint() * (m * vpos); // r x r
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) inner(i, j) *= sq[i] / sq[j];
    return op_norm(inner);
}

} // namespace opalg
