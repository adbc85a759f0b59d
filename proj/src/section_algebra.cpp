#include "opalg/section_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace opalg {

namespace {

void require_haar(const FellBundle& b, const HaarSystem& haar) {
    if (haar.weights.size() != static_cast<size_t>(b.g->num_arrows()))
        throw invalid_input("haar system does not match the groupoid");
}

std::vector<cplx> basis_vec(int dim, int i) {
    std::vector<cplx> v(dim, cplx{});
    v[i] = 1.0;
    return v;
}

} // namespace

Section::Section(FellBundlePtr b) : bundle(std::move(b)) {
    values.resize(bundle->g->num_arrows());
    for (int a = 0; a < bundle->g->num_arrows(); ++a)
        values[a].assign(bundle->dims[a], cplx{});
}

Section delta_section(const FellBundlePtr& b, int arrow, const std::vector<cplx>& value) {
    if (arrow < 0 || arrow >= b->g->num_arrows())
        throw invalid_input("delta_section: unknown arrow");
    if (value.size() != static_cast<size_t>(b->dims[arrow]))
        throw invalid_input("delta_section: value length does not match fiber dimension");
    Section s(b);
    s.values[arrow] = value;
    return s;
}

Section s_convolve(const Section& xi, const Section& eta, const HaarSystem& haar) {
    if (xi.bundle.get() != eta.bundle.get())
        throw invalid_input("s_convolve: sections live on different bundles");
    const FellBundle& b = *xi.bundle;
    const FiniteGroupoid& g = *b.g;
    require_haar(b, haar);
    Section out(xi.bundle);
    for (int a = 0; a < g.num_arrows(); ++a) {
        std::vector<cplx>& acc = out.values[a];
        for (int h : g.range_fiber[g.arrows[a].rng]) {
            const int k = g.comp[g.inv[h]][a];
            if (k < 0) continue; // only for non-groupoids
            const std::vector<cplx> term = b.multiply(h, k, xi.values[h], eta.values[k]);
            const double w = haar.weights[h];
            for (size_t o = 0; o < acc.size(); ++o) acc[o] += term[o] * w;
        }
    }
    return out;
}

Section s_involution(const Section& xi) {
    const FellBundle& b = *xi.bundle;
    const FiniteGroupoid& g = *b.g;
    Section out(xi.bundle);
    for (int a = 0; a < g.num_arrows(); ++a)
        out.values[a] = b.star(g.inv[a], xi.values[g.inv[a]]);
    return out;
}

SectionSpace make_section_space(const FellBundlePtr& b, const HaarSystem& haar,
                                const NumericPolicy& pol) {
    require_haar(*b, haar);
    const FiniteGroupoid& g = *b->g;
    SectionSpace sp;
    sp.bundle = b;
    sp.haar = haar;
    sp.gns = make_gns_table(*b, pol);
    sp.units.resize(g.num_units());

    for (int x = 0; x < g.num_units(); ++x) {
        SectionSpace::Unit& u = sp.units[x];
        u.fiber = g.source_fiber[x];
        u.offset.resize(u.fiber.size());
        int off = 0;
        for (size_t p = 0; p < u.fiber.size(); ++p) {
            u.offset[p] = off;
            off += b->dims[u.fiber[p]];
        }
        u.fiber_total = off;
        const int e = g.unit_arrow[x];
        u.dx = b->dims[e];
        const int dim = u.fiber_total * u.dx;
        const GnsRep& gns = sp.gns.units[x];

        // block-diagonal over h: w(h^-1) * tau(e_j^* (e_i^* e_i') e_j')
        u.gram = CMatrix(dim, dim);
        for (size_t p = 0; p < u.fiber.size(); ++p) {
            const int h = u.fiber[p];
            const int dh = b->dims[h];
            const double w = haar.weights[g.inv[h]];
            for (int i = 0; i < dh; ++i) {
                const std::vector<cplx> si = b->star(h, basis_vec(dh, i));
                for (int i2 = 0; i2 < dh; ++i2) {
                    const std::vector<cplx> c = b->multiply(g.inv[h], h, si, basis_vec(dh, i2));
                    for (int j = 0; j < u.dx; ++j) {
                        const std::vector<cplx> sj = b->star(e, basis_vec(u.dx, j));
                        for (int j2 = 0; j2 < u.dx; ++j2) {
                            const std::vector<cplx> cj2 = b->multiply(e, e, c, basis_vec(u.dx, j2));
                            const std::vector<cplx> q = b->multiply(e, e, sj, cj2);
                            cplx tau = 0.0;
                            for (int k = 0; k < u.dx; ++k) tau += gns.trace[k] * q[k];
                            u.gram((u.offset[p] + i) * u.dx + j, (u.offset[p] + i2) * u.dx + j2) =
                                w * tau;
                        }
                    }
                }
            }
        }

        NumericPolicy loose = pol;
        loose.herm_tol = std::max(pol.herm_tol, 1e-8);
        const HermEig eig = herm_eig(u.gram, loose);
        const double top = eig.values.empty() ? 0.0 : std::max(std::abs(eig.values.front()),
                                                               std::abs(eig.values.back()));
        const double thr = pol.herm_tol * top;
        for (double v : eig.values)
            if (v < -thr)
                throw bundle_not_cstar("section space: localized Gram at unit '" + g.units[x] +
                                       "' is indefinite");
        std::vector<int> pos, ker;
        for (int i = 0; i < dim; ++i) (eig.values[i] > thr ? pos : ker).push_back(i);
        u.white = CMatrix(static_cast<int>(pos.size()), dim);
        u.unwhite = CMatrix(dim, static_cast<int>(pos.size()));
        for (size_t r = 0; r < pos.size(); ++r) {
            const double s = std::sqrt(eig.values[pos[r]]);
            for (int i = 0; i < dim; ++i) {
                u.white(static_cast<int>(r), i) = std::conj(eig.vectors(i, pos[r])) * s;
                u.unwhite(i, static_cast<int>(r)) = eig.vectors(i, pos[r]) / s;
            }
        }
        u.kernel = CMatrix(dim, static_cast<int>(ker.size()));
        for (size_t c = 0; c < ker.size(); ++c)
            for (int i = 0; i < dim; ++i) u.kernel(i, static_cast<int>(c)) = eig.vectors(i, ker[c]);
    }
    return sp;
}

namespace {

CMatrix action_matrix(const Section& xi, const SectionSpace& sp, int x) {
    const FellBundle& b = *sp.bundle;
    const FiniteGroupoid& g = *b.g;
    const SectionSpace::Unit& u = sp.units[x];
    const int dim = u.fiber_total * u.dx;
    CMatrix act(dim, dim);
    for (size_t pc = 0; pc < u.fiber.size(); ++pc) {
        const int h = u.fiber[pc];
        const double w = sp.haar.weights[g.inv[h]];
        for (int i = 0; i < b.dims[h]; ++i) {
            // pi_x(xi)(delta_h e_i)(a) = xi(a h^-1) . e_i . w(h^-1)
            const std::vector<cplx> ei = basis_vec(b.dims[h], i);
            for (size_t pr = 0; pr < u.fiber.size(); ++pr) {
                const int a = u.fiber[pr];
                const int ah = g.comp[a][g.inv[h]];
                if (ah < 0) continue; // only for non-groupoids
                const std::vector<cplx> v = b.multiply(ah, h, xi.values[ah], ei);
                for (int o = 0; o < b.dims[a]; ++o) {
                    const cplx entry = v[o] * w;
                    if (entry == 0.0) continue;
                    for (int j = 0; j < u.dx; ++j)
                        act((u.offset[pr] + o) * u.dx + j, (u.offset[pc] + i) * u.dx + j) = entry;
                }
            }
        }
    }
    return act;
}

void require_bundle(const Section& xi, const SectionSpace& sp) {
    if (xi.bundle.get() != sp.bundle.get())
        throw invalid_input("section does not live on the space's bundle");
}

} // namespace

LocalizedRep s_regular_rep(const Section& xi, const SectionSpace& sp, int unit) {
    require_bundle(xi, sp);
    if (unit < 0 || unit >= sp.bundle->g->num_units())
        throw invalid_input("s_regular_rep: unknown unit");
    return {action_matrix(xi, sp, unit), sp.units[unit].gram};
}

LocalizedRep s_regular_rep(const Section& xi, const HaarSystem& haar, int unit,
                           const NumericPolicy& pol) {
    return s_regular_rep(xi, make_section_space(xi.bundle, haar, pol), unit);
}

double s_i_norm(const Section& xi, const SectionSpace& sp) {
    require_bundle(xi, sp);
    const FellBundle& b = *sp.bundle;
    const FiniteGroupoid& g = *b.g;
    const Section star = s_involution(xi);
    double n1 = 0.0, n2 = 0.0;
    for (int x = 0; x < g.num_units(); ++x) {
        double s1 = 0.0, s2 = 0.0;
        for (int a : g.range_fiber[x]) {
            s1 += fiber_norm(b, sp.gns, a, xi.values[a]) * sp.haar.weights[a];
            s2 += fiber_norm(b, sp.gns, a, star.values[a]) * sp.haar.weights[a];
        }
        n1 = std::max(n1, s1);
        n2 = std::max(n2, s2);
    }
    return std::max(n1, n2);
}

double s_i_norm(const Section& xi, const HaarSystem& haar, const NumericPolicy& pol) {
    return s_i_norm(xi, make_section_space(xi.bundle, haar, pol));
}

double s_reduced_norm(const Section& xi, const SectionSpace& sp, const NumericPolicy& pol) {
    require_bundle(xi, sp);
    const int nu = sp.bundle->g->num_units();
    std::vector<double> per_unit(nu, 0.0);
    std::vector<std::string> kernel_fault(nu);
    parallel_for(nu, [&](int x) {
        const SectionSpace::Unit& u = sp.units[x];
        const CMatrix act = action_matrix(xi, sp, x);
        if (u.kernel.cols > 0) {
            const CMatrix leak = u.white * (act * u.kernel);
            const double scale = (1.0 + act.max_abs() * act.rows) ;
            if (leak.max_abs() > pol.kernel_tol * scale) {
                kernel_fault[x] = "Gram kernel not invariant at unit '" +
                                  sp.bundle->g->units[x] + "'";
                return;
            }
        }
        per_unit[x] = op_norm(u.white * act * u.unwhite);
    });
    for (const std::string& f : kernel_fault)
        if (!f.empty()) throw inconsistency("s_reduced_norm: " + f);
    double r = 0.0;
    for (double v : per_unit) r = std::max(r, v);
    return r;
}

double s_reduced_norm(const Section& xi, const HaarSystem& haar, const NumericPolicy& pol) {
    return s_reduced_norm(xi, make_section_space(xi.bundle, haar, pol), pol);
}

Section oo_map(const Section& xi, const FellBundlePtr& target) {
    const FiniteGroupoid& g = *xi.bundle->g;
    if (target->g.get() != xi.bundle->g.get())
        throw invalid_input("oo_map: target bundle lives on a different groupoid");
    Section out(target);
    for (int a = 0; a < g.num_arrows(); ++a) out.values[a] = xi.values[g.inv[a]];
    return out;
}

Section conj_section_map(const Section& xi, const FellBundlePtr& target) {
    const FiniteGroupoid& g = *xi.bundle->g;
    if (target->g.get() != xi.bundle->g.get())
        throw invalid_input("conj_section_map: target bundle lives on a different groupoid");
    const Section star = s_involution(xi);
    Section out(target);
    for (int a = 0; a < g.num_arrows(); ++a) {
        out.values[a].resize(star.values[a].size());
        for (size_t k = 0; k < star.values[a].size(); ++k)
            out.values[a][k] = std::conj(star.values[a][k]);
    }
    return out;
}

} // namespace opalg
