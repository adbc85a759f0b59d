#pragma once

// Shared generators and independent oracles for the test suites. Everything
// here recomputes expected values from first principles (closed forms,
// exhaustive scans, explicit small representations) and never goes through
// the code paths under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "opalg/cocycle.hpp"
#include "opalg/fell_bundle.hpp"
#include "opalg/groupoid.hpp"
#include "opalg/linalg.hpp"
#include "opalg/policy.hpp"

namespace opalg::testsupport {

// ---------- groupoid / haar generators ----------

inline HaarSystem random_unit_haar(const FiniteGroupoid& g, Rng& rng) {
    std::vector<double> u(g.num_units());
    for (double& w : u) w = rng.uniform(0.5, 2.0);
    return unit_weight_haar(g, u);
}

// Z/2 swapping two points of a 3-point set (two orbits, one with isotropy)
inline FiniteGroupoid swap_action_groupoid() {
    const FiniteGroupoid z2 = cyclic_group(2);
    return action_groupoid(z2, {"p", "q", "r"}, {{0, 1, 2}, {1, 0, 2}});
}

inline FiniteGroupoid rotation_action_groupoid() {
    const FiniteGroupoid z3 = cyclic_group(3);
    return action_groupoid(z3, {"a", "b", "c"}, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
}

/// Deterministic catalog of small groupoids (<= 36 arrows). index is cycled.
inline FiniteGroupoid groupoid_shape(int index) {
    switch (index % 10) {
        case 0: return pair_groupoid(3);
        case 1: return cyclic_group(4);
        case 2: return klein_four_group();
        case 3: return pair_groupoid(5);
        case 4: return swap_action_groupoid();
        case 5: return rotation_action_groupoid();
        case 6: return product_groupoid(cyclic_group(3), pair_groupoid(2));
        case 7: return product_groupoid(pair_groupoid(2), pair_groupoid(3));
        case 8: return pair_groupoid(6);
        default: return product_groupoid(cyclic_group(2), pair_groupoid(3));
    }
}

// ---------- brute-force scalar oracles ----------

/// convolution by unoptimized double loop over all arrow pairs
inline std::vector<cplx> brute_convolve(const FiniteGroupoid& g, const HaarSystem& haar,
                                        const std::vector<cplx>& f1, const std::vector<cplx>& f2) {
    std::vector<cplx> out(g.num_arrows(), cplx{});
    for (int a = 0; a < g.num_arrows(); ++a)
        for (int h = 0; h < g.num_arrows(); ++h)
            for (int k = 0; k < g.num_arrows(); ++k)
                if (g.comp[h][k] == a) out[a] += f1[h] * f2[k] * haar.weights[h];
    return out;
}

/// reduced norm on a cyclic group with counting weights: max |DFT coefficient|
inline double cyclic_reduced_norm_oracle(const std::vector<cplx>& f) {
    const int n = static_cast<int>(f.size());
    double best = 0.0;
    for (int k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const double a = 2.0 * 3.14159265358979323846 * k * j / n;
            acc += f[j] * cplx{std::cos(a), std::sin(a)};
        }
        best = std::max(best, std::abs(acc));
    }
    return best;
}

// ---------- cocycles ----------

/// Pauli cocycle on klein_four_group(): elements indexed e=0, a=1, b=2, ab=3,
/// read as coordinate pairs x = (x1, x2) with x1 = x & 1, x2 = (x >> 1) & 1.
/// sigma(x, y) = x2 * y1 mod 2, so that x -> X^{x1} Z^{x2} is a projective
/// representation with exactly this cocycle.
inline TCocycle pauli_cocycle(const GroupoidPtr& k4) {
    std::vector<std::pair<std::pair<int, int>, int>> entries;
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            if ((((x >> 1) & 1) & (y & 1)) != 0) entries.push_back({{x, y}, 1});
    return make_cocycle(k4, 2, entries);
}

/// random coboundary, always a valid normalized cocycle
inline TCocycle random_coboundary(const GroupoidPtr& g, int n, Rng& rng) {
    std::vector<int> b(g->num_arrows(), 0);
    std::vector<bool> is_unit(g->num_arrows(), false);
    for (int u : g->unit_arrow) is_unit[u] = true;
    for (int a = 0; a < g->num_arrows(); ++a)
        if (!is_unit[a]) b[a] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    return coboundary(g, n, b);
}

/// exhaustive coboundary search; g must have few non-unit arrows
inline bool brute_force_cohomologous(const TCocycle& s1, const TCocycle& s2) {
    const FiniteGroupoid& g = *s1.g;
    const int n = s1.n_roots;
    std::vector<int> free_arrows;
    std::vector<bool> is_unit(g.num_arrows(), false);
    for (int u : g.unit_arrow) is_unit[u] = true;
    for (int a = 0; a < g.num_arrows(); ++a)
        if (!is_unit[a]) free_arrows.push_back(a);
    const int k = static_cast<int>(free_arrows.size());
    std::vector<int> b(g.num_arrows(), 0);
    long long total = 1;
    for (int i = 0; i < k; ++i) total *= n;
    for (long long code = 0; code < total; ++code) {
        long long c = code;
        for (int i = 0; i < k; ++i) {
            b[free_arrows[i]] = static_cast<int>(c % n);
            c /= n;
        }
        bool good = true;
        for (size_t p = 0; p < s1.pairs.size() && good; ++p) {
            const auto [x, y] = s1.pairs[p];
            const int db = ((b[x] + b[y] - b[g.comp[x][y]]) % n + n) % n;
            if (db != ((s1.vals[p] - s2.vals[p]) % n + n) % n) good = false;
        }
        if (good) return true;
    }
    return false;
}

// ---------- bundles ----------

/// diagonal C*-algebra C^n: entrywise product, entrywise conjugation
inline UnitFiberAlgebra diagonal_fiber(int n) {
    UnitFiberAlgebra a;
    a.dim = n;
    a.mult = Tensor3(n, n, n);
    for (int i = 0; i < n; ++i) a.mult.at(i, i, i) = 1.0;
    a.invol = CMatrix::identity(n);
    return a;
}

/// full matrix algebra M_k in row-major vectorized coordinates
inline UnitFiberAlgebra matrix_fiber(int k) {
    UnitFiberAlgebra a;
    const int d = k * k;
    a.dim = d;
    a.mult = Tensor3(d, d, d);
    auto idx = [k](int r, int c) { return r * k + c; };
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            for (int c2 = 0; c2 < k; ++c2)
                a.mult.at(idx(r, c2), idx(r, c), idx(c, c2)) = 1.0;
    a.invol = CMatrix(d, d);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) a.invol(idx(c, r), idx(r, c)) = 1.0;
    return a;
}

/// the Z/2 action bundle on C^2 with the coordinate swap
inline FellBundle swap_bundle(const GroupoidPtr& z2) {
    CMatrix swap(2, 2);
    swap(0, 1) = 1.0;
    swap(1, 0) = 1.0;
    return action_bundle(z2, diagonal_fiber(2), {CMatrix::identity(2), swap});
}

/// deterministic unitary from the eigenbasis of a random Hermitian matrix
inline CMatrix random_unitary(int n, Rng& rng) {
    CMatrix h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = rng.cnormal();
    h = (h + h.adjoint()) * 0.5;
    return herm_eig(h).vectors;
}

/// Matrix bundle over the pair groupoid R_k with block sizes ms:
/// fiber at (i,j) is Hom(C^{ms[j]}, C^{ms[i]}), composition and adjoint,
/// then conjugated by a random unitary per arrow. Always validates; section
/// algebra is the full matrix algebra of size sum(ms).
inline FellBundle random_matrix_bundle(const GroupoidPtr& pairk, const std::vector<int>& ms,
                                       Rng& rng) {
    const FiniteGroupoid& g = *pairk;
    const int k = g.num_units();
    auto aidx = [k](int i, int j) { return i * k + j; }; // matches pair_groupoid layout
    std::vector<int> dims(g.num_arrows());
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) dims[aidx(i, j)] = ms[i] * ms[j];
    FellBundle b = bundle_skeleton(pairk, dims);

    std::vector<CMatrix> u(g.num_arrows());
    for (int a = 0; a < g.num_arrows(); ++a) u[a] = random_unitary(dims[a], rng);

    // structure constants of S,T -> S T transported through the unitaries:
    // tensor[o][x][y] = <e_o, U_out^* vec( mat(U x) mat(U y) )>
    auto mat_of = [&](int rows, int cols, const std::vector<cplx>& v) {
        CMatrix m(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m(r, c) = v[r * cols + c];
        return m;
    };
    auto col_of_unitary = [&](const CMatrix& uu, int col) {
        std::vector<cplx> v(uu.rows);
        for (int r = 0; r < uu.rows; ++r) v[r] = uu(r, col);
        return v;
    };
    for (size_t p = 0; p < b.pairs.size(); ++p) {
        const auto [x, y] = b.pairs[p];
        const int i = x / k, j = x % k, l = y % k; // x = (i,j), y = (j,l)
        const int out = b.g->comp[x][y];
        Tensor3& t = b.mult[p];
        for (int bx = 0; bx < dims[x]; ++bx) {
            const CMatrix mx = mat_of(ms[i], ms[j], col_of_unitary(u[x], bx));
            for (int by = 0; by < dims[y]; ++by) {
                const CMatrix my = mat_of(ms[j], ms[l], col_of_unitary(u[y], by));
                const CMatrix prod = mx * my;
                // coordinates of prod in the transported basis: U_out^* vec(prod)
                for (int o = 0; o < dims[out]; ++o) {
                    cplx acc = 0.0;
                    for (int r = 0; r < ms[i]; ++r)
                        for (int c = 0; c < ms[l]; ++c)
                            acc += std::conj(u[out](r * ms[l] + c, o)) * prod(r, c);
                    t.at(o, bx, by) = acc;
                }
            }
        }
    }
    for (int a = 0; a < b.g->num_arrows(); ++a) {
        const int i = a / k, j = a % k;
        const int ia = b.g->inv[a];
        CMatrix& jm = b.invol[a];
        for (int bx = 0; bx < dims[a]; ++bx) {
            const CMatrix mx = mat_of(ms[i], ms[j], col_of_unitary(u[a], bx));
            const CMatrix adj = mx.adjoint(); // ms[j] x ms[i]
            // star(e_bx) in the transported basis; star(v) = J conj(v) needs
            // J[o][bx] = star(e_bx)[o]
            for (int o = 0; o < dims[ia]; ++o) {
                cplx acc = 0.0;
                for (int r = 0; r < ms[j]; ++r)
                    for (int c = 0; c < ms[i]; ++c)
                        acc += std::conj(u[ia](r * ms[i] + c, o)) * adj(r, c);
                jm(o, bx) = acc;
            }
        }
    }
    b.finalize();
    return b;
}

// ---------- explicit 2x2 representation oracles ----------

inline CMatrix pauli_x() {
    CMatrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

inline CMatrix pauli_z() {
    CMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

/// norm of sum f[e]*I + f[a]*X + f[b]*Z + f[ab]*XZ  (counting weights), the
/// image of a twisted Klein-four algebra element under the Pauli representation
inline double pauli_norm_oracle(const std::vector<cplx>& f) {
    const CMatrix x = pauli_x(), z = pauli_z();
    CMatrix m = CMatrix::identity(2) * f[0] + x * f[1] + z * f[2] + (x * z) * f[3];
    return op_norm(m);
}

/// norm of diag(a) + diag(b) X for the C^2 x| Z/2 swap crossed product
inline double swap_crossed_norm_oracle(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    CMatrix m(2, 2);
    m(0, 0) = a[0];
    m(1, 1) = a[1];
    m(0, 1) = b[0];
    m(1, 0) = b[1];
    return op_norm(m);
}

} // namespace opalg::testsupport
