#include "opalg/fell_bundle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opalg {

namespace {

std::string pair_name(const FiniteGroupoid& g, int a, int b) {
    return "(" + g.arrows[a].id + ", " + g.arrows[b].id + ")";
}

double vec_dev(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    double d = 0.0;
    for (size_t k = 0; k < u.size(); ++k) d = std::max(d, std::abs(u[k] - v[k]));
    return d;
}

std::vector<cplx> basis_vec(int dim, int i) {
    std::vector<cplx> v(dim, cplx{});
    v[i] = 1.0;
    return v;
}

} // namespace

std::vector<cplx> Tensor3::apply(const std::vector<cplx>& left,
                                 const std::vector<cplx>& right) const {
    std::vector<cplx> out(d_out, cplx{});
    for (int i = 0; i < d_left; ++i) {
        const cplx li = left[i];
        if (li == 0.0) continue;
        for (int j = 0; j < d_right; ++j) {
            const cplx p = li * right[j];
            if (p == 0.0) continue;
            for (int o = 0; o < d_out; ++o) out[o] += at(o, i, j) * p;
        }
    }
    return out;
}

const Tensor3& FellBundle::mult_tensor(int a, int b) const {
    const int p = pair_pos[a][b];
    if (p < 0) throw invalid_input("bundle: pair not composable");
    return mult[p];
}

std::vector<cplx> FellBundle::multiply(int a, int b, const std::vector<cplx>& va,
                                       const std::vector<cplx>& vb) const {
    return mult_tensor(a, b).apply(va, vb);
}

std::vector<cplx> FellBundle::star(int arrow, const std::vector<cplx>& v) const {
    const CMatrix& j = invol[arrow];
    std::vector<cplx> out(j.rows, cplx{});
    for (int r = 0; r < j.rows; ++r) {
        cplx acc = 0.0;
        for (int c = 0; c < j.cols; ++c) acc += j(r, c) * std::conj(v[c]);
        out[r] = acc;
    }
    return out;
}

void FellBundle::finalize() {
    const FiniteGroupoid& gg = *g;
    const int m = gg.num_arrows();
    if (static_cast<int>(dims.size()) != m) throw invalid_input("bundle: one dimension per arrow required");
    for (int d : dims)
        if (d < 1) throw invalid_input("bundle: fiber dimensions must be positive");
    if (pairs.empty()) {
        pair_pos.assign(m, std::vector<int>(m, -1));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                if (gg.composable(a, b)) {
                    pair_pos[a][b] = static_cast<int>(pairs.size());
                    pairs.emplace_back(a, b);
                }
    }
    if (mult.size() != pairs.size()) throw invalid_input("bundle: one tensor per composable pair required");
    for (size_t p = 0; p < pairs.size(); ++p) {
        const auto [a, b] = pairs[p];
        const Tensor3& t = mult[p];
        if (t.d_out != dims[gg.comp[a][b]] || t.d_left != dims[a] || t.d_right != dims[b])
            throw invalid_input("bundle: tensor shape mismatch at " + pair_name(gg, a, b));
        for (const cplx& z : t.a)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw invalid_input("bundle: non-finite tensor entry at " + pair_name(gg, a, b));
    }
    if (static_cast<int>(invol.size()) != m)
        throw invalid_input("bundle: one involution matrix per arrow required");
    for (int a = 0; a < m; ++a) {
        if (invol[a].rows != dims[gg.inv[a]] || invol[a].cols != dims[a])
            throw invalid_input("bundle: involution shape mismatch at arrow '" + gg.arrows[a].id + "'");
        if (!invol[a].finite())
            throw invalid_input("bundle: non-finite involution entry at arrow '" + gg.arrows[a].id + "'");
    }
}

FellBundle bundle_skeleton(const GroupoidPtr& g, std::vector<int> dims) {
    FellBundle b;
    b.g = g;
    b.dims = std::move(dims);
    const FiniteGroupoid& gg = *g;
    const int m = gg.num_arrows();
    b.pair_pos.assign(m, std::vector<int>(m, -1));
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            if (gg.composable(x, y)) {
                b.pair_pos[x][y] = static_cast<int>(b.pairs.size());
                b.pairs.emplace_back(x, y);
            }
    for (const auto& [x, y] : b.pairs)
        b.mult.emplace_back(b.dims[gg.comp[x][y]], b.dims[x], b.dims[y]);
    for (int a = 0; a < m; ++a) b.invol.emplace_back(b.dims[gg.inv[a]], b.dims[a]);
    return b;
}

cplx root_of_unity(int k, int n) {
    k = ((k % n) + n) % n;
    if (k == 0) return {1.0, 0.0};
    if (2 * k == n) return {-1.0, 0.0};
    if (2 * k > n) return std::conj(root_of_unity(n - k, n));
    if (4 * k == n) return {0.0, 1.0};
    const double a = 6.283185307179586476925286766559 * k / n;
    return {std::cos(a), std::sin(a)};
}

bool BundleValidation::ok() const {
    for (const AxiomCheck& c : axioms)
        if (!c.pass) return false;
    return true;
}

double BundleValidation::worst() const {
    double w = 0.0;
    for (const AxiomCheck& c : axioms) w = std::max(w, c.deviation);
    return w;
}

std::string BundleValidation::first_failure() const {
    for (const AxiomCheck& c : axioms)
        if (!c.pass) return c.axiom + " at " + c.witness;
    return {};
}

BundleValidation validate_bundle(const FellBundle& b, const NumericPolicy& pol) {
    const FiniteGroupoid& g = *b.g;
    const int m = g.num_arrows();
    BundleValidation rep;

    double scale = 1.0;
    for (const Tensor3& t : b.mult)
        for (const cplx& z : t.a) scale = std::max(scale, std::abs(z));
    for (const CMatrix& j : b.invol) scale = std::max(scale, j.max_abs());
    const double tol = pol.exact_tol * scale * scale * scale;

    AxiomCheck assoc{"associativity", 0.0, tol, "", true};
    for (const auto& [x, y] : b.pairs) {
        const int xy = g.comp[x][y];
        for (int z = 0; z < m; ++z) {
            if (!g.composable(y, z)) continue;
            const int yz = g.comp[y][z];
            for (int i = 0; i < b.dims[x]; ++i)
                for (int j = 0; j < b.dims[y]; ++j) {
                    const std::vector<cplx> ij = b.multiply(x, y, basis_vec(b.dims[x], i), basis_vec(b.dims[y], j));
                    for (int k = 0; k < b.dims[z]; ++k) {
                        const std::vector<cplx> left = b.multiply(xy, z, ij, basis_vec(b.dims[z], k));
                        const std::vector<cplx> jk = b.multiply(y, z, basis_vec(b.dims[y], j), basis_vec(b.dims[z], k));
                        const std::vector<cplx> right = b.multiply(x, yz, basis_vec(b.dims[x], i), jk);
                        const double d = vec_dev(left, right);
                        if (d > assoc.deviation) {
                            assoc.deviation = d;
                            assoc.witness = "(" + g.arrows[x].id + ", " + g.arrows[y].id + ", " + g.arrows[z].id + ")";
                        }
                    }
                }
        }
    }
    assoc.pass = assoc.deviation <= tol;
    rep.axioms.push_back(assoc);

    AxiomCheck anti{"involution-antimultiplicative", 0.0, tol, "", true};
    for (const auto& [x, y] : b.pairs) {
        const int xy = g.comp[x][y];
        for (int i = 0; i < b.dims[x]; ++i)
            for (int j = 0; j < b.dims[y]; ++j) {
                const std::vector<cplx> prod = b.multiply(x, y, basis_vec(b.dims[x], i), basis_vec(b.dims[y], j));
                const std::vector<cplx> lhs = b.star(xy, prod);
                const std::vector<cplx> rhs = b.multiply(
                    g.inv[y], g.inv[x], b.star(y, basis_vec(b.dims[y], j)), b.star(x, basis_vec(b.dims[x], i)));
                const double d = vec_dev(lhs, rhs);
                if (d > anti.deviation) {
                    anti.deviation = d;
                    anti.witness = pair_name(g, x, y);
                }
            }
    }
    anti.pass = anti.deviation <= tol;
    rep.axioms.push_back(anti);

    AxiomCheck invv{"involution-involutive", 0.0, tol, "", true};
    for (int a = 0; a < m; ++a) {
        CMatrix p = b.invol[g.inv[a]] * b.invol[a].conjugate();
        const CMatrix dlt = p - CMatrix::identity(b.dims[a]);
        const double d = dlt.max_abs();
        if (d > invv.deviation) {
            invv.deviation = d;
            invv.witness = g.arrows[a].id;
        }
    }
    invv.pass = invv.deviation <= tol;
    rep.axioms.push_back(invv);

    AxiomCheck tracef{"unit-fiber-trace-form", 0.0, pol.herm_tol, "", true};
    AxiomCheck posit{"unit-fiber-positivity", 0.0, pol.herm_tol * scale * scale, "", true};
    for (int x = 0; x < g.num_units(); ++x) {
        GnsRep rep_x;
        try {
            rep_x = gns_unit_rep(b, x, pol);
        } catch (const invalid_input&) { // degenerate or non-Hermitian trace form
            tracef.deviation = std::max(tracef.deviation, 1.0);
            tracef.witness = g.units[x];
            tracef.pass = false;
            continue;
        }
        // spectrum of rho(a* a) for fiber basis vectors of every arrow into x
        for (int a : g.source_fiber[x]) {
            for (int i = 0; i < b.dims[a]; ++i) {
                const std::vector<cplx> e = basis_vec(b.dims[a], i);
                const std::vector<cplx> p = b.multiply(g.inv[a], a, b.star(a, e), e);
                CMatrix r(rep_x.rho.front().rows, rep_x.rho.front().cols);
                for (size_t k = 0; k < p.size(); ++k) r = r + rep_x.rho[k] * p[k];
                CMatrix h = (r + r.adjoint()) * 0.5;
                NumericPolicy loose = pol;
                loose.herm_tol = 1e-6;
                const HermEig eig = herm_eig(h, loose);
                const double lmin = eig.values.empty() ? 0.0 : eig.values.back();
                if (-lmin > posit.deviation) {
                    posit.deviation = -lmin;
                    posit.witness = "basis " + std::to_string(i) + " of fiber at '" + g.arrows[a].id + "'";
                }
            }
        }
    }
    posit.deviation = std::max(posit.deviation, 0.0);
    posit.pass = posit.deviation <= posit.threshold;
    rep.axioms.push_back(tracef);
    rep.axioms.push_back(posit);
    return rep;
}

FellBundle line_bundle(const TCocycle& sigma) {
    if (!validate_cocycle(sigma).empty())
        throw invalid_input("line_bundle: cocycle does not validate");
    const FiniteGroupoid& g = *sigma.g;
    FellBundle b = bundle_skeleton(sigma.g, std::vector<int>(g.num_arrows(), 1));
    for (size_t p = 0; p < b.pairs.size(); ++p) {
        const auto [x, y] = b.pairs[p];
        b.mult[p].at(0, 0, 0) = root_of_unity(sigma.val(x, y), sigma.n_roots);
    }
    for (int a = 0; a < g.num_arrows(); ++a)
        b.invol[a](0, 0) = std::conj(root_of_unity(sigma.val(a, g.inv[a]), sigma.n_roots));
    b.finalize();
    return b;
}

FellBundle action_bundle(const GroupoidPtr& group, const UnitFiberAlgebra& fiber,
                         const std::vector<CMatrix>& alpha, const NumericPolicy& pol) {
    const FiniteGroupoid& g = *group;
    if (g.num_units() != 1) throw invalid_input("action_bundle: group must have one unit");
    const int n = g.num_arrows();
    const int d = fiber.dim;
    if (fiber.mult.d_out != d || fiber.mult.d_left != d || fiber.mult.d_right != d ||
        fiber.invol.rows != d || fiber.invol.cols != d)
        throw invalid_input("action_bundle: fiber data shape mismatch");
    if (static_cast<int>(alpha.size()) != n)
        throw invalid_input("action_bundle: one matrix per group element required");
    for (const CMatrix& m : alpha)
        if (m.rows != d || m.cols != d)
            throw invalid_input("action_bundle: alpha matrix shape mismatch");

    auto apply = [&](const CMatrix& m, const std::vector<cplx>& v) {
        std::vector<cplx> out(d, cplx{});
        for (int r = 0; r < d; ++r) {
            cplx acc = 0.0;
            for (int c = 0; c < d; ++c) acc += m(r, c) * v[c];
            out[r] = acc;
        }
        return out;
    };

    double scale = fiber.invol.max_abs();
    for (const cplx& z : fiber.mult.a) scale = std::max(scale, std::abs(z));
    for (const CMatrix& m : alpha) scale = std::max(scale, m.max_abs());
    scale = std::max(scale, 1.0);
    const double tol = pol.exact_tol * scale * scale;
    const int e = g.unit_arrow[0];
    const CMatrix id_dev = alpha[e] - CMatrix::identity(d);
    if (id_dev.max_abs() > tol)
        throw invalid_input("action_bundle: alpha at the identity is not the identity map");
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            const CMatrix dev = alpha[a] * alpha[c] - alpha[g.comp[a][c]];
            if (dev.max_abs() > tol)
                throw invalid_input("action_bundle: alpha(" + g.arrows[a].id + ") alpha(" +
                                    g.arrows[c].id + ") != alpha(" + g.arrows[g.comp[a][c]].id + ")");
        }
    for (int a = 0; a < n; ++a) {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                const auto ei = basis_vec(d, i), ej = basis_vec(d, j);
                const auto lhs = apply(alpha[a], fiber.mult.apply(ei, ej));
                const auto rhs = fiber.mult.apply(apply(alpha[a], ei), apply(alpha[a], ej));
                if (vec_dev(lhs, rhs) > tol)
                    throw invalid_input("action_bundle: alpha(" + g.arrows[a].id +
                                        ") is not multiplicative");
            }
            const auto ei = basis_vec(d, i);
            std::vector<cplx> star_e(d, cplx{});
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) star_e[r] += fiber.invol(r, c) * std::conj(ei[c]);
            const auto lhs = apply(alpha[a], star_e);
            const auto av = apply(alpha[a], ei);
            std::vector<cplx> rhs(d, cplx{});
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) rhs[r] += fiber.invol(r, c) * std::conj(av[c]);
            if (vec_dev(lhs, rhs) > tol)
                throw invalid_input("action_bundle: alpha(" + g.arrows[a].id +
                                    ") does not preserve the involution");
        }
    }

    FellBundle b = bundle_skeleton(group, std::vector<int>(n, d));
    for (size_t p = 0; p < b.pairs.size(); ++p) {
        const auto [x, y] = b.pairs[p];
        // a . alpha_x(b)
        Tensor3& t = b.mult[p];
        for (int o = 0; o < d; ++o)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    cplx acc = 0.0;
                    for (int k = 0; k < d; ++k) acc += fiber.mult.at(o, i, k) * alpha[x](k, j);
                    t.at(o, i, j) = acc;
                }
    }
    for (int a = 0; a < n; ++a) b.invol[a] = alpha[g.inv[a]] * fiber.invol;
    b.finalize();
    return b;
}

GnsRep gns_unit_rep(const FellBundle& b, int unit, const NumericPolicy& pol) {
    const FiniteGroupoid& g = *b.g;
    if (unit < 0 || unit >= g.num_units()) throw invalid_input("gns_unit_rep: unknown unit");
    const int e = g.unit_arrow[unit];
    const int d = b.dims[e];

    // left multiplication matrices on A_x
    std::vector<CMatrix> lmul(d, CMatrix(d, d));
    const Tensor3& t = b.mult_tensor(e, e);
    for (int k = 0; k < d; ++k)
        for (int o = 0; o < d; ++o)
            for (int j = 0; j < d; ++j) lmul[k](o, j) = t.at(o, k, j);

    GnsRep out;
    out.trace.resize(d);
    for (int k = 0; k < d; ++k) {
        cplx tr = 0.0;
        for (int i = 0; i < d; ++i) tr += lmul[k](i, i);
        out.trace[k] = tr;
    }
    // gram(i,j) = tau(e_i^* e_j)
    out.gram = CMatrix(d, d);
    for (int i = 0; i < d; ++i) {
        const std::vector<cplx> si = b.star(e, basis_vec(d, i));
        for (int j = 0; j < d; ++j) {
            const std::vector<cplx> p = b.multiply(e, e, si, basis_vec(d, j));
            cplx acc = 0.0;
            for (int k = 0; k < d; ++k) acc += out.trace[k] * p[k];
            out.gram(i, j) = acc;
        }
    }
    NumericPolicy loose = pol;
    loose.herm_tol = std::max(pol.herm_tol, 1e-8);
    const GramClass cls = gram_posdef(out.gram, loose.herm_tol, loose);
    if (cls.kind != Definiteness::positive_definite)
        throw bundle_not_cstar("gns_unit_rep: trace form on the fiber at unit '" + g.units[unit] +
                               "' is not positive definite");

    const HermEig eig = herm_eig(out.gram, loose);
    out.to_ortho = CMatrix(d, d);
    out.from_ortho = CMatrix(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double s = std::sqrt(eig.values[j]);
            out.to_ortho(i, j) = eig.vectors(i, j) / s;
            out.from_ortho(j, i) = std::conj(eig.vectors(i, j)) * s;
        }
    out.rho.reserve(d);
    for (int k = 0; k < d; ++k) out.rho.push_back(out.from_ortho * lmul[k] * out.to_ortho);
    return out;
}

GnsTable make_gns_table(const FellBundle& b, const NumericPolicy& pol) {
    GnsTable t;
    t.units.resize(b.g->num_units());
    for (int x = 0; x < b.g->num_units(); ++x) t.units[x] = gns_unit_rep(b, x, pol);
    return t;
}

double fiber_norm(const FellBundle& b, const GnsTable& t, int arrow, const std::vector<cplx>& a) {
    const FiniteGroupoid& g = *b.g;
    if (arrow < 0 || arrow >= g.num_arrows()) throw invalid_input("fiber_norm: unknown arrow");
    if (a.size() != static_cast<size_t>(b.dims[arrow]))
        throw invalid_input("fiber_norm: vector length does not match fiber dimension");
    const int x = g.arrows[arrow].src;
    const std::vector<cplx> p = b.multiply(g.inv[arrow], arrow, b.star(arrow, a), a);
    const GnsRep& r = t.units[x];
    CMatrix m(r.rho.front().rows, r.rho.front().cols);
    for (size_t k = 0; k < p.size(); ++k) m = m + r.rho[k] * p[k];
    return std::sqrt(op_norm(m));
}

double fiber_norm(const FellBundle& b, int arrow, const std::vector<cplx>& a,
                  const NumericPolicy& pol) {
    GnsTable t;
    t.units.resize(b.g->num_units());
    t.units[b.g->arrows[arrow].src] = gns_unit_rep(b, b.g->arrows[arrow].src, pol);
    return fiber_norm(b, t, arrow, a);
}

FellBundle opposite_bundle_over_op(const FellBundle& b) {
    const FiniteGroupoid& g = *b.g;
    FellBundle o = bundle_skeleton(share(opposite_groupoid(g)), b.dims);
    for (size_t p = 0; p < o.pairs.size(); ++p) {
        const auto [x, y] = o.pairs[p];   // composable in G^op, so (y,x) composable in G
        const Tensor3& src = b.mult_tensor(y, x);
        Tensor3& t = o.mult[p];
        for (int oo = 0; oo < t.d_out; ++oo)
            for (int i = 0; i < t.d_left; ++i)
                for (int j = 0; j < t.d_right; ++j) t.at(oo, i, j) = src.at(oo, j, i);
    }
    o.invol = b.invol;
    o.finalize();
    return o;
}

FellBundle oo_bundle(const FellBundle& b) {
    const FiniteGroupoid& g = *b.g;
    std::vector<int> dims(g.num_arrows());
    for (int a = 0; a < g.num_arrows(); ++a) dims[a] = b.dims[g.inv[a]];
    FellBundle o = bundle_skeleton(b.g, dims);
    for (size_t p = 0; p < o.pairs.size(); ++p) {
        const auto [x, y] = o.pairs[p];
        const Tensor3& src = b.mult_tensor(g.inv[y], g.inv[x]);
        Tensor3& t = o.mult[p];
        for (int oo = 0; oo < t.d_out; ++oo)
            for (int i = 0; i < t.d_left; ++i)
                for (int j = 0; j < t.d_right; ++j) t.at(oo, i, j) = src.at(oo, j, i);
    }
    for (int a = 0; a < g.num_arrows(); ++a) o.invol[a] = b.invol[g.inv[a]];
    o.finalize();
    return o;
}

FellBundle conjugate_bundle(const FellBundle& b) {
    FellBundle c = b;
    for (Tensor3& t : c.mult)
        for (cplx& z : t.a) z = std::conj(z);
    for (CMatrix& j : c.invol) j = j.conjugate();
    return c;
}

BundleValidation oo_conj_iso_check(const FellBundle& b, const NumericPolicy& pol) {
    const FiniteGroupoid& g = *b.g;
    const int m = g.num_arrows();
    const FellBundle oo = oo_bundle(b);
    const FellBundle cj = conjugate_bundle(b);
    const GnsTable oo_gns = make_gns_table(oo, pol);
    const GnsTable cj_gns = make_gns_table(cj, pol);

    // phi_g = conj(J_{g^-1}) : A^oo_g -> conj(A)_g
    std::vector<CMatrix> phi(m);
    for (int a = 0; a < m; ++a) phi[a] = b.invol[g.inv[a]].conjugate();

    auto apply_phi = [&](int a, const std::vector<cplx>& v) {
        std::vector<cplx> out(phi[a].rows, cplx{});
        for (int r = 0; r < phi[a].rows; ++r) {
            cplx acc = 0.0;
            for (int c = 0; c < phi[a].cols; ++c) acc += phi[a](r, c) * v[c];
            out[r] = acc;
        }
        return out;
    };

    BundleValidation rep;
    const double tol = 1e-10;

    AxiomCheck bij{"fiberwise-bijective", 0.0, tol, "", true};
    for (int a = 0; a < m; ++a) {
        if (phi[a].rows != phi[a].cols) {
            bij.deviation = 1.0;
            bij.witness = g.arrows[a].id;
            break;
        }
        const HermEig eig = herm_eig(phi[a].adjoint() * phi[a]);
        const double smin = std::sqrt(std::max(0.0, eig.values.back()));
        const double smax = std::sqrt(std::max(0.0, eig.values.front()));
        if (smin <= 1e-10 * std::max(1.0, smax)) {
            bij.deviation = 1.0;
            bij.witness = g.arrows[a].id;
        }
    }
    bij.pass = bij.deviation <= tol;
    rep.axioms.push_back(bij);

    AxiomCheck mlt{"multiplicative", 0.0, tol, "", true};
    for (const auto& [x, y] : b.pairs) {
        const int xy = g.comp[x][y];
        for (int i = 0; i < oo.dims[x]; ++i)
            for (int j = 0; j < oo.dims[y]; ++j) {
                const auto ei = basis_vec(oo.dims[x], i), ej = basis_vec(oo.dims[y], j);
                const auto lhs = apply_phi(xy, oo.multiply(x, y, ei, ej));
                const auto rhs = cj.multiply(x, y, apply_phi(x, ei), apply_phi(y, ej));
                const double d = vec_dev(lhs, rhs);
                if (d > mlt.deviation) {
                    mlt.deviation = d;
                    mlt.witness = pair_name(g, x, y);
                }
            }
    }
    mlt.pass = mlt.deviation <= tol;
    rep.axioms.push_back(mlt);

    AxiomCheck inv{"involution-preserving", 0.0, tol, "", true};
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < oo.dims[a]; ++i) {
            const auto ei = basis_vec(oo.dims[a], i);
            const auto lhs = apply_phi(g.inv[a], oo.star(a, ei));
            const auto rhs = cj.star(a, apply_phi(a, ei));
            const double d = vec_dev(lhs, rhs);
            if (d > inv.deviation) {
                inv.deviation = d;
                inv.witness = g.arrows[a].id;
            }
        }
    inv.pass = inv.deviation <= tol;
    rep.axioms.push_back(inv);

    AxiomCheck iso{"isometric", 0.0, tol, "", true};
    Rng rng(pol.seed ^ 0x5eC7104a11dULL);
    for (int a = 0; a < m; ++a) {
        std::vector<std::vector<cplx>> samples;
        for (int i = 0; i < oo.dims[a]; ++i) samples.push_back(basis_vec(oo.dims[a], i));
        for (int s = 0; s < 3; ++s) {
            std::vector<cplx> v(oo.dims[a]);
            for (cplx& z : v) z = rng.cnormal();
            samples.push_back(std::move(v));
        }
        for (const auto& v : samples) {
            const double n1 = fiber_norm(oo, oo_gns, a, v);
            const double n2 = fiber_norm(cj, cj_gns, a, apply_phi(a, v));
            const double d = std::abs(n1 - n2) / (1.0 + std::max(n1, n2));
            if (d > iso.deviation) {
                iso.deviation = d;
                iso.witness = g.arrows[a].id;
            }
        }
    }
    iso.pass = iso.deviation <= tol;
    rep.axioms.push_back(iso);
    return rep;
}

} // namespace opalg
