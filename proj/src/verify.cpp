#include "opalg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opalg {

namespace {

const char* kFiniteNote =
    "universal norm = reduced norm in this finite-dimensional model; the direct sum of "
    "the regular representations is faithful, so every I-norm-bounded C*-norm agrees "
    "with it";
const char* kScopeNote =
    "infinite-dimensional existence statements (algebras without groupoid models) are "
    "outside what a finite certificate can verify";

double fn_dev(const GroupoidFunction& a, const GroupoidFunction& b) {
    double d = 0.0;
    for (size_t k = 0; k < a.values.size(); ++k)
        d = std::max(d, std::abs(a.values[k] - b.values[k]));
    return d;
}

double sec_dev(const Section& a, const Section& b) {
    double d = 0.0;
    for (size_t g = 0; g < a.values.size(); ++g)
        for (size_t k = 0; k < a.values[g].size(); ++k)
            d = std::max(d, std::abs(a.values[g][k] - b.values[g][k]));
    return d;
}

double rel_dev(double a, double b) { return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b))); }

void raise(Check& c, double dev, const std::string& witness) {
    if (dev > c.deviation) {
        c.deviation = dev;
        c.witness = witness;
    }
}

std::string violations_witness(const ValidationReport& rep) {
    if (rep.empty()) return {};
    std::ostringstream os;
    os << rep.front().law << " at " << rep.front().witness;
    if (rep.size() > 1) os << " (+" << rep.size() - 1 << " more)";
    return os.str();
}

} // namespace

void Report::finish() {
    if (checks.empty()) throw inconsistency("suite '" + suite + "' ran zero checks");
    overall = true;
    for (Check& c : checks) {
        c.pass = c.deviation <= c.threshold;
        overall = overall && c.pass;
    }
}

ojson report_to_json(const Report& r) {
    ojson j;
    j["suite"] = r.suite;
    ojson inputs;
    for (const auto& [k, v] : r.input_digests) inputs[k] = v;
    j["inputs"] = std::move(inputs);
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    ojson pol;
    pol["exact_tol"] = r.policy.exact_tol;
    pol["exact_tol_bundle"] = r.policy.exact_tol_bundle;
    pol["norm_tol"] = r.policy.norm_tol;
    pol["gap_tol"] = r.policy.gap_tol;
    pol["herm_tol"] = r.policy.herm_tol;
    pol["kernel_tol"] = r.policy.kernel_tol;
    j["policy"] = std::move(pol);
    ojson checks = ojson::array();
    for (const Check& c : r.checks) {
        ojson jc;
        jc["name"] = c.name;
        jc["statement"] = c.statement;
        jc["deviation"] = c.deviation;
        jc["threshold"] = c.threshold;
        jc["pass"] = c.pass;
        if (!c.witness.empty()) jc["witness"] = c.witness;
        checks.push_back(std::move(jc));
    }
    j["checks"] = std::move(checks);
    j["overall"] = r.overall;
    j["notes"] = r.notes;
    return j;
}

GroupoidFunction random_function(const GroupoidPtr& g, Rng& rng) {
    GroupoidFunction f(g);
    for (cplx& v : f.values) v = rng.cnormal();
    return f;
}

Section random_section(const FellBundlePtr& b, Rng& rng) {
    Section s(b);
    for (auto& fiber : s.values)
        for (cplx& v : fiber) v = rng.cnormal();
    return s;
}

Report suite_opposite_algebra(const GroupoidPtr& g, const HaarSystem& haar,
                              const NumericPolicy& pol) {
    Report rep;
    rep.suite = "opposite-algebra";
    rep.seed = pol.seed;
    rep.samples = pol.samples;
    rep.policy = pol;
    rep.input_digests.emplace_back("groupoid", content_digest(groupoid_to_json(*g, &haar)));
    rep.notes = {kFiniteNote, kScopeNote};
    if (haar.weights.size() != static_cast<size_t>(g->num_arrows()))
        throw invalid_input("suite: haar system does not match the groupoid");

    Check axioms{"groupoid-axioms",
                 "composition endpoints, associativity, unit, inverse and left-invariance laws",
                 0.0, 0.0, true, ""};
    {
        ValidationReport v = validate_groupoid(*g);
        const ValidationReport vh = validate_haar(*g, haar);
        v.insert(v.end(), vh.begin(), vh.end());
        axioms.deviation = static_cast<double>(v.size());
        axioms.witness = violations_witness(v);
    }
    rep.checks.push_back(axioms);
    if (axioms.deviation > 0.0) {
        rep.notes.push_back("remaining checks skipped: input does not satisfy the groupoid axioms");
        rep.finish();
        return rep;
    }

    const GroupoidPtr gop = share(opposite_groupoid(*g));
    const HaarSystem hop = opposite_haar(*g, haar);

    Check inv_iso{"inversion-isomorphism",
                  "g -> g^-1 maps (G, w) isomorphically onto the opposite groupoid with the "
                  "transported weights",
                  0.0, 0.0, true, ""};
    for (int a = 0; a < g->num_arrows(); ++a)
        for (int b = 0; b < g->num_arrows(); ++b) {
            if (g->comp[a][b] < 0) continue;
            const int lhs = g->inv[g->comp[a][b]];
            const int rhs = gop->comp[g->inv[a]][g->inv[b]];
            if (lhs != rhs)
                raise(inv_iso, 1.0, "(" + g->arrows[a].id + ", " + g->arrows[b].id + ")");
        }
    {
        const ValidationReport vo = validate_groupoid(*gop);
        const ValidationReport vh = validate_haar(*gop, hop);
        if (!vo.empty() || !vh.empty())
            raise(inv_iso, 1.0, violations_witness(vo.empty() ? vh : vo));
    }
    rep.checks.push_back(inv_iso);

    Check rev{"op-reverses-products", "op(f1 * f2) = op(f2) * op(f1)", 0.0, pol.exact_tol, true, ""};
    Check invo{"op-preserves-involution", "op(f*) = op(f)*", 0.0, pol.exact_tol, true, ""};
    Check inorm{"op-i-norm-isometry", "I-norm(op f) = I-norm(f), exactly", 0.0, 0.0, true, ""};
    Check rnorm{"op-reduced-norm-isometry", "reduced-norm(op f) = reduced-norm(f)", 0.0,
                pol.norm_tol, true, ""};
    Check ident{"identity-map-antimultiplicative",
                "the identity map reverses products into the convolution algebra of the "
                "opposite groupoid",
                0.0, pol.exact_tol, true, ""};
    Check conj{"conjugation-multiplicative", "conj(f1 * f2) = conj(f1) * conj(f2), exactly",
               0.0, 0.0, true, ""};
    Check factor{"involution-factors", "f* = conj(op(f)) pointwise, exactly", 0.0, 0.0, true, ""};
    Check cstar{"cstar-identity", "reduced-norm(f* * f) = reduced-norm(f)^2", 0.0, 1e-8, true, ""};

    Rng master(pol.seed ^ 0x0a1b2c3d4e5f6071ULL);
    std::vector<std::pair<GroupoidFunction, GroupoidFunction>> sample_pairs;
    for (int s = 0; s < pol.samples; ++s) {
        Rng r = master.fork(static_cast<std::uint64_t>(s));
        sample_pairs.emplace_back(random_function(g, r), random_function(g, r));
    }
    for (int a = 0; a < g->num_arrows(); ++a)
        for (int b = 0; b < g->num_arrows(); ++b)
            sample_pairs.emplace_back(delta(g, a), delta(g, b));

    int tag = 0;
    for (const auto& [f1, f2] : sample_pairs) {
        const std::string w = "sample pair " + std::to_string(tag++);
        const GroupoidFunction prod = convolve(f1, f2, haar);
        raise(rev, fn_dev(op_map(prod), convolve(op_map(f2), op_map(f1), haar)), w);
        raise(invo, fn_dev(op_map(involution(f1)), involution(op_map(f1))), w);
        raise(conj, fn_dev(conj_map(prod), convolve(conj_map(f1), conj_map(f2), haar)), w);
        raise(factor, fn_dev(involution(f1), conj_map(op_map(f1))), w);
        GroupoidFunction f1_op(gop), f2_op(gop);
        f1_op.values = f1.values;
        f2_op.values = f2.values;
        GroupoidFunction swapped(gop);
        swapped.values = convolve(f2, f1, haar).values;
        raise(ident, fn_dev(convolve(f1_op, f2_op, hop), swapped), w);
    }
    // norm isometries on the random samples and the delta basis
    for (int s = 0; s < pol.samples; ++s) {
        const GroupoidFunction& f = sample_pairs[s].first;
        const std::string w = "sample " + std::to_string(s);
        raise(inorm, std::abs(i_norm(op_map(f), haar) - i_norm(f, haar)), w);
        const double rn = reduced_norm(f, haar);
        raise(rnorm, std::abs(reduced_norm(op_map(f), haar) - rn) / (1.0 + rn), w);
        raise(cstar,
              std::abs(reduced_norm(convolve(involution(f), f, haar), haar) - rn * rn) /
                  (1.0 + rn * rn),
              w);
    }
    for (int a = 0; a < g->num_arrows(); ++a) {
        const GroupoidFunction f = delta(g, a);
        raise(inorm, std::abs(i_norm(op_map(f), haar) - i_norm(f, haar)), g->arrows[a].id);
        const double rn = reduced_norm(f, haar);
        raise(rnorm, std::abs(reduced_norm(op_map(f), haar) - rn) / (1.0 + rn), g->arrows[a].id);
    }

    rep.checks.insert(rep.checks.end(), {rev, invo, inorm, rnorm, ident, conj, factor, cstar});
    rep.finish();
    return rep;
}

Report suite_opposite_bundle(const FellBundlePtr& b, const HaarSystem& haar,
                             const NumericPolicy& pol) {
    Report rep;
    rep.suite = "opposite-bundle";
    rep.seed = pol.seed;
    rep.samples = pol.samples;
    rep.policy = pol;
    rep.input_digests.emplace_back("groupoid", content_digest(groupoid_to_json(*b->g, &haar)));
    rep.input_digests.emplace_back("bundle", content_digest(bundle_to_json(*b)));
    rep.notes = {kFiniteNote, kScopeNote};
    if (haar.weights.size() != static_cast<size_t>(b->g->num_arrows()))
        throw invalid_input("suite: haar system does not match the groupoid");

    {
        ValidationReport v = validate_groupoid(*b->g);
        const ValidationReport vh = validate_haar(*b->g, haar);
        v.insert(v.end(), vh.begin(), vh.end());
        Check gax{"groupoid-axioms", "underlying groupoid and Haar axioms",
                  static_cast<double>(v.size()), 0.0, true, violations_witness(v)};
        rep.checks.push_back(gax);
        if (!v.empty()) {
            rep.notes.push_back("remaining checks skipped: groupoid axioms fail");
            rep.finish();
            return rep;
        }
    }
    const BundleValidation bv = validate_bundle(*b, pol);
    for (const AxiomCheck& ax : bv.axioms)
        rep.checks.push_back({"bundle-axiom-" + ax.axiom,
                              "Fell bundle axiom: " + ax.axiom, ax.deviation, ax.threshold,
                              true, ax.witness});
    if (!bv.ok()) {
        rep.notes.push_back("remaining checks skipped: bundle axioms fail");
        rep.finish();
        return rep;
    }

    const FellBundlePtr oo = share(oo_bundle(*b));
    const FellBundlePtr cj = share(conjugate_bundle(*b));
    const SectionSpace sp = make_section_space(b, haar, pol);
    const SectionSpace sp_oo = make_section_space(oo, haar, pol);
    const SectionSpace sp_cj = make_section_space(cj, haar, pol);

    const BundleValidation oov = validate_bundle(*oo, pol);
    rep.checks.push_back({"oo-bundle-valid",
                          "the opposite bundle over G satisfies the Fell bundle axioms",
                          oov.ok() ? oov.worst() : std::max(1.0, oov.worst()),
                          pol.exact_tol_bundle, true, oov.first_failure()});

    Check rev{"oo-reverses-products", "oo(xi * eta) = oo(eta) * oo(xi)", 0.0,
              pol.exact_tol_bundle, true, ""};
    Check invo{"oo-preserves-involution", "oo(xi*) = oo(xi)*", 0.0, pol.exact_tol_bundle, true, ""};
    Check inorm{"oo-i-norm-isometry", "I-norm(oo xi) = I-norm(xi)", 0.0, pol.exact_tol, true, ""};
    Check rnorm{"oo-reduced-norm-isometry", "reduced-norm(oo xi) = reduced-norm(xi)", 0.0,
                pol.norm_tol, true, ""};
    Check crev{"conj-map-reverses-products", "bar(xi * eta) = bar(eta) * bar(xi)", 0.0,
               pol.exact_tol_bundle, true, ""};
    Check cinv{"conj-map-preserves-involution", "bar(xi*) = bar(xi)*", 0.0, pol.exact_tol_bundle,
               true, ""};
    Check cinorm{"conj-map-i-norm-isometry", "I-norm(bar xi) = I-norm(xi)", 0.0, pol.exact_tol,
                 true, ""};
    Check crnorm{"conj-map-reduced-norm-isometry", "reduced-norm(bar xi) = reduced-norm(xi)", 0.0,
                 pol.norm_tol, true, ""};
    Check cstar{"cstar-identity", "reduced-norm(xi* * xi) = reduced-norm(xi)^2", 0.0, 1e-8, true,
                ""};

    Rng master(pol.seed ^ 0x7e3a9d5c1b2f4680ULL);
    std::vector<std::pair<Section, Section>> sample_pairs;
    for (int s = 0; s < pol.samples; ++s) {
        Rng r = master.fork(static_cast<std::uint64_t>(s));
        sample_pairs.emplace_back(random_section(b, r), random_section(b, r));
    }
    const FiniteGroupoid& g = *b->g;
    for (int a = 0; a < g.num_arrows(); ++a)
        for (int i = 0; i < b->dims[a]; ++i) {
            std::vector<cplx> e(b->dims[a], cplx{});
            e[i] = 1.0;
            for (int a2 = 0; a2 < g.num_arrows(); ++a2) {
                std::vector<cplx> e2(b->dims[a2], cplx{});
                e2[0] = 1.0;
                sample_pairs.emplace_back(delta_section(b, a, e), delta_section(b, a2, e2));
            }
        }

    int tag = 0;
    for (const auto& [xi, eta] : sample_pairs) {
        const std::string w = "sample pair " + std::to_string(tag++);
        const Section prod = s_convolve(xi, eta, haar);
        raise(rev, sec_dev(oo_map(prod, oo),
                           s_convolve(oo_map(eta, oo), oo_map(xi, oo), haar)), w);
        raise(invo, sec_dev(oo_map(s_involution(xi), oo), s_involution(oo_map(xi, oo))), w);
        raise(crev, sec_dev(conj_section_map(prod, cj),
                            s_convolve(conj_section_map(eta, cj), conj_section_map(xi, cj), haar)),
              w);
        raise(cinv,
              sec_dev(conj_section_map(s_involution(xi), cj), s_involution(conj_section_map(xi, cj))),
              w);
    }
    for (int s = 0; s < pol.samples; ++s) {
        const Section& xi = sample_pairs[s].first;
        const std::string w = "sample " + std::to_string(s);
        const double in0 = s_i_norm(xi, sp);
        const double rn0 = s_reduced_norm(xi, sp, pol);
        raise(inorm, rel_dev(s_i_norm(oo_map(xi, oo), sp_oo), in0), w);
        raise(rnorm, rel_dev(s_reduced_norm(oo_map(xi, oo), sp_oo, pol), rn0), w);
        raise(cinorm, rel_dev(s_i_norm(conj_section_map(xi, cj), sp_cj), in0), w);
        raise(crnorm, rel_dev(s_reduced_norm(conj_section_map(xi, cj), sp_cj, pol), rn0), w);
        raise(cstar,
              std::abs(s_reduced_norm(s_convolve(s_involution(xi), xi, haar), sp, pol) - rn0 * rn0) /
                  (1.0 + rn0 * rn0),
              w);
    }

    const BundleValidation iso = oo_conj_iso_check(*b, pol);
    Check fiber{"oo-conj-fiber-isomorphism",
                "a -> conj(a*) is a fiberwise bijective multiplicative involution-preserving "
                "isometry from the opposite bundle onto the conjugate bundle",
                iso.worst(), 1e-10, true, iso.first_failure()};

    rep.checks.insert(rep.checks.end(),
                      {rev, invo, inorm, rnorm, crev, cinv, cinorm, crnorm, fiber, cstar});
    rep.finish();
    return rep;
}

Report suite_twist(const TCocycle& sigma, const HaarSystem& haar, const NumericPolicy& pol) {
    Report rep;
    rep.suite = "twist-conjugation";
    rep.seed = pol.seed;
    rep.samples = pol.samples;
    rep.policy = pol;
    rep.input_digests.emplace_back("groupoid", content_digest(groupoid_to_json(*sigma.g, &haar)));
    rep.input_digests.emplace_back("cocycle", content_digest(cocycle_to_json(sigma)));
    rep.notes = {kFiniteNote, kScopeNote};

    {
        ValidationReport v = validate_groupoid(*sigma.g);
        const ValidationReport vh = validate_haar(*sigma.g, haar);
        v.insert(v.end(), vh.begin(), vh.end());
        rep.checks.push_back({"groupoid-axioms", "underlying groupoid and Haar axioms",
                              static_cast<double>(v.size()), 0.0, true, violations_witness(v)});
        if (!v.empty()) {
            rep.notes.push_back("remaining checks skipped: groupoid axioms fail");
            rep.finish();
            return rep;
        }
    }
    {
        const ValidationReport v = validate_cocycle(sigma);
        rep.checks.push_back({"cocycle-identity",
                              "normalization and the 2-cocycle identity on all composable triples",
                              static_cast<double>(v.size()), 0.0, true, violations_witness(v)});
        if (!v.empty()) {
            rep.notes.push_back("remaining checks skipped: cocycle identity fails");
            rep.finish();
            return rep;
        }
    }

    const TCocycle oo = oo_cocycle(sigma);
    const TCocycle cj = conjugate_cocycle(sigma);
    {
        Check c{"oo-cocycle-cohomologous-conjugate",
                "the opposite cocycle and the conjugate cocycle define the same cohomology class",
                0.0, 0.0, true, ""};
        const CohomologyResult res = cohomologous(oo, cj);
        if (!res.cohomologous) {
            c.deviation = 1.0;
        } else {
            std::ostringstream os;
            os << "witness b: ";
            for (int a = 0; a < sigma.g->num_arrows(); ++a) {
                if (res.witness[a] == 0) continue;
                os << sigma.g->arrows[a].id << "=" << res.witness[a] << " ";
            }
            c.witness = os.str();
        }
        rep.checks.push_back(c);
    }
    {
        Check c{"twisted-block-dims-conjugation-invariant",
                "the twisted algebra and its conjugate twist have equal block dimensions",
                0.0, 0.0, true, ""};
        const std::vector<int> b1 =
            block_dims(algebra_model_bundle(share(line_bundle(sigma)), haar, pol), pol);
        const std::vector<int> b2 =
            block_dims(algebra_model_bundle(share(line_bundle(cj)), haar, pol), pol);
        std::ostringstream os;
        os << "blocks {";
        for (int v : b1) os << " " << v;
        os << " } vs {";
        for (int v : b2) os << " " << v;
        os << " }";
        c.witness = os.str();
        if (b1 != b2) c.deviation = 1.0;
        rep.checks.push_back(c);
    }

    const Report sub = suite_opposite_bundle(share(line_bundle(sigma)), haar, pol);
    for (const Check& c : sub.checks) {
        Check pc = c;
        pc.name = "line-bundle-" + pc.name;
        rep.checks.push_back(pc);
    }
    rep.finish();
    return rep;
}

Report suite_stabilization(const GroupoidPtr& g, const HaarSystem& haar, int n,
                           const TCocycle* twist, const NumericPolicy& pol) {
    Report rep;
    rep.suite = "stabilization";
    rep.seed = pol.seed;
    rep.samples = pol.samples;
    rep.policy = pol;
    rep.input_digests.emplace_back("groupoid", content_digest(groupoid_to_json(*g, &haar)));
    if (twist != nullptr)
        rep.input_digests.emplace_back("cocycle", content_digest(cocycle_to_json(*twist)));
    rep.notes = {kFiniteNote, kScopeNote};

    {
        ValidationReport v = validate_groupoid(*g);
        const ValidationReport vh = validate_haar(*g, haar);
        v.insert(v.end(), vh.begin(), vh.end());
        if (twist != nullptr) {
            const ValidationReport vc = validate_cocycle(*twist);
            v.insert(v.end(), vc.begin(), vc.end());
        }
        rep.checks.push_back({"input-axioms", "groupoid, Haar and cocycle axioms",
                              static_cast<double>(v.size()), 0.0, true, violations_witness(v)});
        if (!v.empty()) {
            rep.notes.push_back("remaining checks skipped: input axioms fail");
            rep.finish();
            return rep;
        }
    }

    const StabilizationReport st = stabilization_check(g, haar, n, twist, pol);
    {
        Check c{"stabilized-block-dims",
                "block dims of the algebra of G x R_n are n times the block dims of the "
                "algebra of G",
                st.pass ? 0.0 : 1.0, 0.0, true, ""};
        std::ostringstream os;
        os << "expected {";
        for (int v : st.expected) os << " " << v;
        os << " } got {";
        for (int v : st.product_blocks) os << " " << v;
        os << " }";
        c.witness = os.str();
        rep.checks.push_back(c);
    }

    const GroupoidPtr rn = share(pair_groupoid(n));
    const GroupoidPtr prod = share(product_groupoid(*g, *rn));
    const HaarSystem prod_haar = product_haar(*g, haar, *rn, counting_haar(*rn));
    const Report sub = suite_opposite_algebra(prod, prod_haar, pol);
    for (const Check& c : sub.checks) {
        Check pc = c;
        pc.name = "product-" + pc.name;
        rep.checks.push_back(pc);
    }
    rep.finish();
    return rep;
}

} // namespace opalg
