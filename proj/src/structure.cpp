#include "opalg/structure.hpp"

#include <algorithm>
#include <cmath>

namespace opalg {

namespace {

cplx mat_inner(const CMatrix& a, const CMatrix& b) {
    cplx acc = 0.0;
    for (size_t k = 0; k < a.a.size(); ++k) acc += std::conj(a.a[k]) * b.a[k];
    return acc;
}

// residual of the orthogonal projection of m onto span(gens), via the
// pseudoinverse of the generator Gram in eigencoordinates
double span_residual(const std::vector<CMatrix>& gens, const HermEig& gram_eig,
                     double rank_thr, const CMatrix& m) {
    const int d = static_cast<int>(gens.size());
    std::vector<cplx> rhs(d);
    for (int k = 0; k < d; ++k) rhs[k] = mat_inner(gens[k], m);
    // coeff = V diag(1/lambda) V^* rhs on the numerically nonzero eigenspace
    std::vector<cplx> tmp(d, cplx{});
    for (int j = 0; j < d; ++j) {
        if (gram_eig.values[j] <= rank_thr) continue;
        cplx acc = 0.0;
        for (int k = 0; k < d; ++k) acc += std::conj(gram_eig.vectors(k, j)) * rhs[k];
        tmp[j] = acc / gram_eig.values[j];
    }
    std::vector<cplx> coeff(d, cplx{});
    for (int k = 0; k < d; ++k) {
        cplx acc = 0.0;
        for (int j = 0; j < d; ++j) acc += gram_eig.vectors(k, j) * tmp[j];
        coeff[k] = acc;
    }
    CMatrix rec(m.rows, m.cols);
    for (int k = 0; k < d; ++k) rec = rec + gens[k] * coeff[k];
    return (rec - m).max_abs();
}

} // namespace

MatrixAlgebraModel algebra_model(const GroupoidPtr& g, const HaarSystem& haar,
                                 const NumericPolicy& pol) {
    (void)pol;
    const FiniteGroupoid& gg = *g;
    const int m = gg.num_arrows();
    int total = 0;
    std::vector<int> offs(gg.num_units());
    for (int x = 0; x < gg.num_units(); ++x) {
        offs[x] = total;
        total += static_cast<int>(gg.source_fiber[x].size());
    }
    MatrixAlgebraModel model;
    model.dimension = m;
    model.generators.assign(m, CMatrix(total, total));
    for (int a = 0; a < m; ++a) {
        GroupoidFunction f = delta(g, a);
        for (int x = 0; x < gg.num_units(); ++x) {
            const CMatrix blk = regular_rep(f, haar, x);
            for (int i = 0; i < blk.rows; ++i)
                for (int j = 0; j < blk.cols; ++j)
                    model.generators[a](offs[x] + i, offs[x] + j) = blk(i, j);
        }
    }
    return model;
}

MatrixAlgebraModel algebra_model_bundle(const FellBundlePtr& b, const HaarSystem& haar,
                                        const NumericPolicy& pol) {
    const FiniteGroupoid& gg = *b->g;
    const SectionSpace sp = make_section_space(b, haar, pol);
    int total = 0;
    std::vector<int> offs(gg.num_units());
    for (int x = 0; x < gg.num_units(); ++x) {
        offs[x] = total;
        total += sp.units[x].white.rows; // whitened dimension
    }
    MatrixAlgebraModel model;
    model.dimension = 0;
    for (int a = 0; a < gg.num_arrows(); ++a) model.dimension += b->dims[a];
    model.generators.reserve(model.dimension);
    for (int a = 0; a < gg.num_arrows(); ++a) {
        for (int i = 0; i < b->dims[a]; ++i) {
            std::vector<cplx> e(b->dims[a], cplx{});
            e[i] = 1.0;
            const Section s = delta_section(b, a, e);
            CMatrix gen(total, total);
            for (int x = 0; x < gg.num_units(); ++x) {
                const SectionSpace::Unit& u = sp.units[x];
                const LocalizedRep rep = s_regular_rep(s, sp, x);
                const CMatrix blk = u.white * rep.action * u.unwhite;
                for (int r = 0; r < blk.rows; ++r)
                    for (int c = 0; c < blk.cols; ++c) gen(offs[x] + r, offs[x] + c) = blk(r, c);
            }
            model.generators.push_back(std::move(gen));
        }
    }
    return model;
}

std::vector<int> block_dims(const MatrixAlgebraModel& model, const NumericPolicy& pol) {
    const int d = static_cast<int>(model.generators.size());
    if (d == 0) throw invalid_input("block_dims: empty model");
    if (d != model.dimension) throw inconsistency("block_dims: generator count != dimension");
    const int dim = model.generators.front().rows;

    // generator Gram; rank must be full (the basis images are independent)
    CMatrix gram(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) gram(i, j) = mat_inner(model.generators[i], model.generators[j]);
    NumericPolicy loose = pol;
    loose.herm_tol = 1e-8;
    const HermEig gram_eig = herm_eig(gram, loose);
    const double gram_top = std::max(1.0, gram_eig.values.front());
    const double rank_thr = 1e-10 * gram_top;
    for (double v : gram_eig.values)
        if (v <= rank_thr)
            throw inconsistency("block_dims: generators are linearly dependent");

    // closure under products and adjoints
    std::vector<std::vector<CMatrix>> prod(d);
    double worst_closure = 0.0;
    for (int i = 0; i < d; ++i) {
        prod[i].reserve(d);
        for (int j = 0; j < d; ++j) {
            prod[i].push_back(model.generators[i] * model.generators[j]);
            worst_closure = std::max(worst_closure,
                                     span_residual(model.generators, gram_eig, rank_thr, prod[i][j]));
        }
        worst_closure = std::max(
            worst_closure,
            span_residual(model.generators, gram_eig, rank_thr, model.generators[i].adjoint()));
    }
    if (worst_closure > 1e-10 * gram_top)
        throw inconsistency("block_dims: generator span is not multiplicatively closed");

    // center: nullspace of the stacked commutator Gram
    CMatrix comm_gram(d, d);
    for (int k = 0; k < d; ++k)
        for (int k2 = k; k2 < d; ++k2) {
            cplx acc = 0.0;
            for (int j = 0; j < d; ++j) {
                const CMatrix ck = prod[k][j] - prod[j][k];
                const CMatrix ck2 = prod[k2][j] - prod[j][k2];
                acc += mat_inner(ck, ck2);
            }
            comm_gram(k, k2) = acc;
            comm_gram(k2, k) = std::conj(acc);
        }
    const HermEig comm_eig = herm_eig(comm_gram, loose);
    const double comm_top = std::max(1.0, comm_eig.values.empty() ? 0.0 : comm_eig.values.front());
    std::vector<int> center_idx;
    for (int j = 0; j < d; ++j)
        if (comm_eig.values[j] <= 1e-10 * comm_top) center_idx.push_back(j);
    const int blocks = static_cast<int>(center_idx.size());
    if (blocks == 0) throw inconsistency("block_dims: empty center");

    Rng rng(pol.seed ^ 0xb10cd1357ULL);
    for (int attempt = 0; attempt < 5; ++attempt) {
        // random Hermitian central element; complex coefficients, then
        // Hermitized (the center is *-closed, so z stays central)
        CMatrix z(dim, dim);
        for (int c : center_idx) {
            const cplx r = rng.cnormal();
            for (int k = 0; k < d; ++k) z = z + model.generators[k] * (r * comm_eig.vectors(k, c));
        }
        z = (z + z.adjoint()) * 0.5;
        NumericPolicy zp = pol;
        zp.herm_tol = 1e-6;
        const HermEig zeig = herm_eig(z, zp);
        double spread = 1.0;
        if (!zeig.values.empty())
            spread = std::max(1.0, std::abs(zeig.values.front()) + std::abs(zeig.values.back()));
        const double gap = pol.gap_tol * spread;

        std::vector<std::pair<int, int>> clusters; // [begin, end)
        int begin = 0;
        for (int i = 1; i <= dim; ++i) {
            if (i == dim || zeig.values[i - 1] - zeig.values[i] > gap) {
                clusters.emplace_back(begin, i);
                begin = i;
            }
        }
        if (static_cast<int>(clusters.size()) != blocks) continue; // collision, retry

        std::vector<int> out;
        bool good = true;
        int sumsq = 0;
        for (const auto& [b0, b1] : clusters) {
            CMatrix p(dim, dim);
            for (int c = b0; c < b1; ++c)
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j)
                        p(i, j) += zeig.vectors(i, c) * std::conj(zeig.vectors(j, c));
            // corner span dimension
            std::vector<CMatrix> corner;
            corner.reserve(d);
            for (int k = 0; k < d; ++k) corner.push_back(p * model.generators[k] * p);
            CMatrix cg(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) cg(i, j) = mat_inner(corner[i], corner[j]);
            const HermEig ce = herm_eig(cg, loose);
            const double ct = std::max(1.0, ce.values.empty() ? 0.0 : ce.values.front());
            int rank = 0;
            for (double v : ce.values)
                if (v > 1e-8 * ct) ++rank;
            const double root = std::sqrt(static_cast<double>(rank));
            const int n = static_cast<int>(std::lround(root));
            if (std::abs(root - n) > 1e-6 || n == 0) {
                good = false;
                break;
            }
            out.push_back(n);
            sumsq += n * n;
        }
        if (!good) continue;
        if (sumsq != model.dimension)
            throw inconsistency("block_dims: block dimensions do not add up to the algebra dimension");
        std::sort(out.begin(), out.end());
        return out;
    }
    throw inconsistency("block_dims: central splitting failed after 5 attempts");
}

StabilizationReport stabilization_check(const GroupoidPtr& g, const HaarSystem& haar, int n,
                                        const TCocycle* twist, const NumericPolicy& pol) {
    if (n < 1) throw invalid_input("stabilization_check: n must be >= 1");
    StabilizationReport rep;
    rep.n = n;
    const GroupoidPtr rn = share(pair_groupoid(n));
    const HaarSystem rn_haar = counting_haar(*rn);
    const GroupoidPtr prod = share(product_groupoid(*g, *rn));
    const HaarSystem prod_haar = product_haar(*g, haar, *rn, rn_haar);

    if (twist != nullptr) {
        if (twist->g.get() != g.get())
            throw invalid_input("stabilization_check: twist lives on a different groupoid");
        rep.base_blocks = block_dims(algebra_model_bundle(share(line_bundle(*twist)), haar, pol), pol);
        const TCocycle ext = extend_cocycle_to_product(*twist, prod, rn->num_arrows());
        rep.product_blocks =
            block_dims(algebra_model_bundle(share(line_bundle(ext)), prod_haar, pol), pol);
    } else {
        rep.base_blocks = block_dims(algebra_model(g, haar, pol), pol);
        rep.product_blocks = block_dims(algebra_model(prod, prod_haar, pol), pol);
    }
    for (int m : rep.base_blocks) rep.expected.push_back(n * m);
    std::sort(rep.expected.begin(), rep.expected.end());
    rep.pass = rep.expected == rep.product_blocks;
    return rep;
}

} // namespace opalg
