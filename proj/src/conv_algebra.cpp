#include "opalg/conv_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace opalg {

namespace {

void require_same_groupoid(const GroupoidFunction& f1, const GroupoidFunction& f2) {
    if (f1.g.get() != f2.g.get())
        throw invalid_input("convolve: functions live on different groupoids");
}

void require_haar(const GroupoidFunction& f, const HaarSystem& haar) {
    if (haar.weights.size() != static_cast<size_t>(f.g->num_arrows()))
        throw invalid_input("haar system does not match the groupoid");
}

} // namespace

GroupoidFunction delta(const GroupoidPtr& g, int arrow, cplx coefficient) {
    if (arrow < 0 || arrow >= g->num_arrows()) throw invalid_input("delta: unknown arrow");
    GroupoidFunction f(g);
    f.values[arrow] = coefficient;
    return f;
}

GroupoidFunction convolve(const GroupoidFunction& f1, const GroupoidFunction& f2,
                          const HaarSystem& haar) {
    require_same_groupoid(f1, f2);
    require_haar(f1, haar);
    const FiniteGroupoid& g = *f1.g;
    GroupoidFunction out(f1.g);
    for (int a = 0; a < g.num_arrows(); ++a) {
        cplx acc = 0.0;
        for (int h : g.range_fiber[g.arrows[a].rng]) {
            const int k = g.comp[g.inv[h]][a]; // h^-1 a
            if (k < 0) continue;               // only for non-groupoids
            acc += f1.values[h] * f2.values[k] * haar.weights[h];
        }
        out.values[a] = acc;
    }
    return out;
}

GroupoidFunction involution(const GroupoidFunction& f) {
    GroupoidFunction out(f.g);
    for (int a = 0; a < f.g->num_arrows(); ++a)
        out.values[a] = std::conj(f.values[f.g->inv[a]]);
    return out;
}

std::vector<cplx> lambda_map(const GroupoidFunction& f, const HaarSystem& haar) {
    require_haar(f, haar);
    const FiniteGroupoid& g = *f.g;
    std::vector<cplx> out(g.num_units(), cplx{});
    for (int x = 0; x < g.num_units(); ++x) {
        cplx acc = 0.0;
        for (int a : g.range_fiber[x]) acc += f.values[a] * haar.weights[a];
        out[x] = acc;
    }
    return out;
}

double i_norm(const GroupoidFunction& f, const HaarSystem& haar) {
    require_haar(f, haar);
    const FiniteGroupoid& g = *f.g;
    double n1 = 0.0, n2 = 0.0;
    for (int x = 0; x < g.num_units(); ++x) {
        double s1 = 0.0, s2 = 0.0;
        for (int a : g.range_fiber[x]) {
            s1 += std::abs(f.values[a]) * haar.weights[a];
            s2 += std::abs(f.values[g.inv[a]]) * haar.weights[a];
        }
        n1 = std::max(n1, s1);
        n2 = std::max(n2, s2);
    }
    return std::max(n1, n2);
}

CMatrix regular_rep(const GroupoidFunction& f, const HaarSystem& haar, int unit) {
    require_haar(f, haar);
    const FiniteGroupoid& g = *f.g;
    if (unit < 0 || unit >= g.num_units()) throw invalid_input("regular_rep: unknown unit");
    const std::vector<int>& fib = g.source_fiber[unit];
    const int n = static_cast<int>(fib.size());
    std::vector<double> sq(n);
    for (int i = 0; i < n; ++i) sq[i] = std::sqrt(haar.weights[g.inv[fib[i]]]);
    // pi_x(f) e_b = sum_a f(a b^-1) w(b^-1) e_a over a in G_x, expressed in the
    // weighted orthonormal basis
    CMatrix m(n, n);
    for (int col = 0; col < n; ++col) {
        const int b = fib[col];
        for (int row = 0; row < n; ++row) {
            const int a = fib[row];
            const int ab = g.comp[a][g.inv[b]];
            if (ab < 0) continue; // unreachable for valid groupoids
            m(row, col) = f.values[ab] * (sq[row] * sq[col]);
        }
    }
    return m;
}

double reduced_norm(const GroupoidFunction& f, const HaarSystem& haar) {
    require_haar(f, haar);
    const int nu = f.g->num_units();
    std::vector<double> per_unit(nu, 0.0);
    parallel_for(nu, [&](int x) { per_unit[x] = op_norm(regular_rep(f, haar, x)); });
    double r = 0.0;
    for (double v : per_unit) r = std::max(r, v);
    return r;
}

TaggedNorm full_norm(const GroupoidFunction& f, const HaarSystem& haar) {
    return {reduced_norm(f, haar),
            "universal = reduced: finite-dimensional *-algebra, the direct sum of the "
            "regular representations is faithful and every I-norm-bounded C*-norm "
            "agrees with it"};
}

GroupoidFunction op_map(const GroupoidFunction& f) {
    GroupoidFunction out(f.g);
    for (int a = 0; a < f.g->num_arrows(); ++a) out.values[a] = f.values[f.g->inv[a]];
    return out;
}

GroupoidFunction conj_map(const GroupoidFunction& f) {
    GroupoidFunction out(f.g);
    for (int a = 0; a < f.g->num_arrows(); ++a) out.values[a] = std::conj(f.values[a]);
    return out;
}

} // namespace opalg
