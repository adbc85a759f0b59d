#include "opalg/cocycle.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>

namespace opalg {

namespace {

int mod_n(long long v, int n) {
    long long r = v % n;
    if (r < 0) r += n;
    return static_cast<int>(r);
}

TCocycle skeleton(const GroupoidPtr& g, int n_roots) {
    if (n_roots < 1) throw invalid_input("cocycle: N must be >= 1");
    TCocycle s;
    s.g = g;
    s.n_roots = n_roots;
    const int m = g->num_arrows();
    s.pair_pos.assign(m, std::vector<int>(m, -1));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (g->composable(a, b)) {
                s.pair_pos[a][b] = static_cast<int>(s.pairs.size());
                s.pairs.emplace_back(a, b);
            }
    s.vals.assign(s.pairs.size(), 0);
    return s;
}

// ---- integer Smith diagonalization, for the modular coboundary solve ----

using imat = std::vector<std::vector<long long>>;

long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r))
        throw inconsistency("cohomologous: integer overflow in Smith reduction");
    return r;
}

struct Smith {
    imat d;                // diagonalized matrix
    imat v;                // column transform: (row ops) * a * v = d
    std::vector<int> rhs;  // right-hand side carried through the row ops, mod n
    int diag = 0;          // number of pivots
};

// Diagonalizes a over the integers; the same row operations are applied to
// rhs mod n, so no row-transform matrix is materialized.
Smith smith_diagonalize(imat a, std::vector<int> rhs, int n) {
    const int rows = static_cast<int>(a.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(a[0].size());
    Smith s;
    s.v.assign(cols, std::vector<long long>(cols, 0));
    for (int j = 0; j < cols; ++j) s.v[j][j] = 1;

    auto row_op = [&](int dst, int src, long long q) {
        for (int j = 0; j < cols; ++j) a[dst][j] -= checked_mul(q, a[src][j]);
        rhs[dst] = mod_n(rhs[dst] - static_cast<long long>(mod_n(q, n)) * rhs[src], n);
    };

    int t = 0;
    while (t < rows && t < cols) {
        int pi = -1, pj = -1;
        long long best = 0;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j) {
                const long long v = std::abs(a[i][j]);
                if (v != 0 && (pi < 0 || v < best)) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        std::swap(a[t], a[pi]);
        std::swap(rhs[t], rhs[pi]);
        for (auto& row : a) std::swap(row[t], row[pj]);
        for (auto& row : s.v) std::swap(row[t], row[pj]);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0) continue;
                row_op(i, t, a[i][t] / a[t][t]);
                if (a[i][t] != 0) { // nonzero remainder is the new, smaller pivot
                    std::swap(a[t], a[i]);
                    std::swap(rhs[t], rhs[i]);
                    clean = false;
                }
            }
            for (int j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0) continue;
                const long long q = a[t][j] / a[t][t];
                for (int i = 0; i < rows; ++i) a[i][j] -= checked_mul(q, a[i][t]);
                for (auto& row : s.v) row[j] -= checked_mul(q, row[t]);
                if (a[t][j] != 0) {
                    for (auto& row : a) std::swap(row[t], row[j]);
                    for (auto& row : s.v) std::swap(row[t], row[j]);
                    clean = false;
                }
            }
        }
        ++t;
    }
    s.d = std::move(a);
    s.rhs = std::move(rhs);
    s.diag = t;
    return s;
}

long long egcd(long long a, long long b, long long& x, long long& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    long long x1, y1;
    const long long g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// solves d * y = c (mod n); returns false when unsolvable
bool solve_congruence(long long d, long long c, int n, long long& y) {
    const long long dn = mod_n(d, n);
    const long long cn = mod_n(c, n);
    if (dn == 0) {
        y = 0;
        return cn == 0;
    }
    long long x, t;
    const long long g = egcd(dn, n, x, t);
    if (cn % g != 0) return false;
    const long long nn = n / g;
    y = ((cn / g) % nn) * (((x % nn) + nn) % nn) % nn;
    return true;
}

} // namespace

int TCocycle::pair_at(int a, int b) const {
    const int p = pair_pos[a][b];
    if (p < 0) throw invalid_input("cocycle: pair not composable");
    return p;
}

TCocycle trivial_cocycle(const GroupoidPtr& g, int n_roots) { return skeleton(g, n_roots); }

TCocycle make_cocycle(const GroupoidPtr& g, int n_roots,
                      const std::vector<std::pair<std::pair<int, int>, int>>& entries) {
    TCocycle s = skeleton(g, n_roots);
    for (const auto& [pr, v] : entries) {
        const int p = s.pair_pos[pr.first][pr.second];
        if (p < 0)
            throw invalid_input("cocycle: value on non-composable pair (" +
                                g->arrows[pr.first].id + ", " + g->arrows[pr.second].id + ")");
        s.vals[p] = mod_n(v, n_roots);
    }
    return s;
}

TCocycle coboundary(const GroupoidPtr& g, int n_roots, const std::vector<int>& b) {
    if (b.size() != static_cast<size_t>(g->num_arrows()))
        throw invalid_input("coboundary: one value per arrow required");
    TCocycle s = skeleton(g, n_roots);
    for (size_t p = 0; p < s.pairs.size(); ++p) {
        const auto [x, y] = s.pairs[p];
        const int xy = g->comp[x][y];
        s.vals[p] = mod_n(static_cast<long long>(b[x]) + b[y] - b[xy], n_roots);
    }
    return s;
}

ValidationReport validate_cocycle(const TCocycle& s) {
    ValidationReport rep;
    const FiniteGroupoid& g = *s.g;
    const int m = g.num_arrows();
    for (int a = 0; a < m; ++a) {
        const int el = g.unit_arrow[g.arrows[a].rng];
        const int er = g.unit_arrow[g.arrows[a].src];
        if (s.val(el, a) != 0)
            rep.push_back({"normalization", "(" + g.arrows[el].id + ", " + g.arrows[a].id + ")", 1.0});
        if (s.val(a, er) != 0)
            rep.push_back({"normalization", "(" + g.arrows[a].id + ", " + g.arrows[er].id + ")", 1.0});
    }
    for (const auto& [a, b] : s.pairs) {
        const int ab = g.comp[a][b];
        for (int c = 0; c < m; ++c) {
            if (!g.composable(b, c)) continue;
            const int bc = g.comp[b][c];
            const int lhs = mod_n(static_cast<long long>(s.val(a, b)) + s.val(ab, c), s.n_roots);
            const int rhs = mod_n(static_cast<long long>(s.val(a, bc)) + s.val(b, c), s.n_roots);
            if (lhs != rhs)
                rep.push_back({"cocycle-identity",
                               "(" + g.arrows[a].id + ", " + g.arrows[b].id + ", " + g.arrows[c].id + ")",
                               1.0});
        }
    }
    return rep;
}

TCocycle conjugate_cocycle(const TCocycle& s) {
    TCocycle out = s;
    for (int& v : out.vals) v = mod_n(-static_cast<long long>(v), s.n_roots);
    return out;
}

TCocycle oo_cocycle(const TCocycle& s) {
    TCocycle out = s;
    const FiniteGroupoid& g = *s.g;
    for (size_t p = 0; p < s.pairs.size(); ++p) {
        const auto [a, b] = s.pairs[p];
        out.vals[p] = s.val(g.inv[b], g.inv[a]);
    }
    return out;
}

TCocycle extend_cocycle_to_product(const TCocycle& s, const GroupoidPtr& product,
                                   int right_arrows) {
    if (right_arrows < 1 || product->num_arrows() != s.g->num_arrows() * right_arrows)
        throw invalid_input("extend_cocycle_to_product: product shape mismatch");
    TCocycle out = skeleton(product, s.n_roots);
    for (size_t p = 0; p < out.pairs.size(); ++p) {
        const auto [a, b] = out.pairs[p];
        out.vals[p] = s.val(a / right_arrows, b / right_arrows);
    }
    return out;
}

CohomologyResult cohomologous(const TCocycle& s1, const TCocycle& s2) {
    if (s1.g.get() != s2.g.get())
        throw invalid_input("cohomologous: cocycles live on different groupoids");
    if (s1.n_roots != s2.n_roots)
        throw invalid_input("cohomologous: cocycles have different value groups");
    const FiniteGroupoid& g = *s1.g;
    const int n = s1.n_roots;
    const int m = g.num_arrows();
    const int np = static_cast<int>(s1.pairs.size());

    // coboundary matrix: row per composable pair, column per arrow
    imat a(np, std::vector<long long>(m, 0));
    std::vector<int> target(np);
    for (int p = 0; p < np; ++p) {
        const auto [x, y] = s1.pairs[p];
        a[p][x] += 1;
        a[p][y] += 1;
        a[p][g.comp[x][y]] -= 1;
        target[p] = mod_n(static_cast<long long>(s1.vals[p]) - s2.vals[p], n);
    }

    const Smith sm = smith_diagonalize(std::move(a), std::move(target), n);

    std::vector<long long> y(m, 0);
    CohomologyResult out;
    for (int i = 0; i < np; ++i) {
        const long long d = (i < sm.diag) ? sm.d[i][i] : 0;
        if (i < m) {
            if (!solve_congruence(d, sm.rhs[i], n, y[i])) return out;
        } else if (sm.rhs[i] != 0) {
            return out;
        }
    }

    out.cohomologous = true;
    out.witness.assign(m, 0);
    for (int i = 0; i < m; ++i) {
        long long acc = 0;
        for (int j = 0; j < m; ++j) acc += static_cast<long long>(mod_n(sm.v[i][j], n)) * y[j];
        out.witness[i] = mod_n(acc, n);
    }
    // the witness must satisfy the equation exactly
    for (int p = 0; p < np; ++p) {
        const auto [x, yy] = s1.pairs[p];
        const int db = mod_n(static_cast<long long>(out.witness[x]) + out.witness[yy] -
                                 out.witness[g.comp[x][yy]],
                             n);
        if (db != mod_n(static_cast<long long>(s1.vals[p]) - s2.vals[p], n))
            throw inconsistency("cohomologous: solver produced an invalid witness");
    }
    return out;
}

} // namespace opalg
